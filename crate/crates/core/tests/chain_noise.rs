use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use fracchain::chain_sim::{self, ChainModel, ChainState};
use fracchain::dispersion::ModelParams;

const N: usize = 8;

/// Matrix of the vector field `Y_x` acting on momenta.
fn y_matrix(x: usize) -> [[f64; N]; N] {
    let (l, r) = ((x + N - 1) % N, (x + 1) % N);
    let mut a = [[0.0; N]; N];
    a[l][x] += 1.0;
    a[l][r] -= 1.0;
    a[x][r] += 1.0;
    a[x][l] -= 1.0;
    a[r][l] += 1.0;
    a[r][x] -= 1.0;
    a
}

fn apply(a: &[[f64; N]; N], v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum()).collect()
}

fn state(gamma: f64) -> ChainState {
    let model = ChainModel::new(&ModelParams::new(3.0), N).unwrap();
    let p = vec![0.9, -0.4, 1.3, 0.2, -1.1, 0.5, 0.0, -0.7];
    ChainState::new(model, p, vec![0.0; N], gamma).unwrap()
}

/// Euler-Maruyama for `dp = (gamma/2) sum A_x^2 p dt + sqrt(gamma) sum A_x p dw_x`:
/// mean increment and increment covariance per unit time.
fn oracle(p: &[f64], gamma: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut drift = vec![0.0; N];
    let mut cov = vec![vec![0.0; N]; N];
    for x in 0..N {
        let a = y_matrix(x);
        let ap = apply(&a, p);
        let aap = apply(&a, &ap);
        for i in 0..N {
            drift[i] += 0.5 * gamma * aap[i];
            for j in 0..N {
                cov[i][j] += gamma * ap[i] * ap[j];
            }
        }
    }
    (drift, cov)
}

/// Sample mean and second moment of the increment of one noise step.
fn increment_moments(base: &ChainState, dt: f64, samples: usize, seed: u64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![0.0; N];
    let mut sum2 = vec![vec![0.0; N]; N];
    let mut xi = vec![0.0; N];
    for _ in 0..samples {
        let mut s = base.clone();
        xi.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
        chain_sim::step_noise_with(&mut s, dt, &xi);
        let d: Vec<f64> = s.p.iter().zip(&base.p).map(|(a, b)| a - b).collect();
        for i in 0..N {
            sum[i] += d[i];
            for j in 0..N {
                sum2[i][j] += d[i] * d[j];
            }
        }
    }
    let m = samples as f64;
    (sum.iter().map(|v| v / m).collect(), sum2.iter().map(|r| r.iter().map(|v| v / m).collect()).collect())
}

#[test]
fn noise_step_drift_matches_euler_maruyama() {
    let gamma = 1.3;
    let dt = 2e-3;
    let samples = 400_000;
    let base = state(gamma);
    let (drift, cov) = oracle(&base.p, gamma);
    let (mean, _) = increment_moments(&base, dt, samples, 77);
    for i in 0..N {
        let rate = mean[i] / dt;
        let stderr = (cov[i][i] / (samples as f64 * dt)).sqrt();
        assert!(
            (rate - drift[i]).abs() <= 5.0 * stderr + 0.02 * drift[i].abs(),
            "site {i}: drift {rate:.4} vs {:.4} (stderr {stderr:.4})",
            drift[i]
        );
    }
}

#[test]
fn noise_step_covariance_matches_euler_maruyama() {
    let gamma = 1.3;
    let dt = 2e-4;
    let base = state(gamma);
    let (_, cov) = oracle(&base.p, gamma);
    let (_, second) = increment_moments(&base, dt, 400_000, 78);
    for i in 0..N {
        for j in 0..N {
            let c = second[i][j] / dt;
            let scale = (cov[i][i] * cov[j][j]).sqrt();
            assert!((c - cov[i][j]).abs() <= 0.01 * scale, "cov[{i}][{j}] {c:.4} vs {:.4}", cov[i][j]);
        }
    }
}

#[test]
fn oracle_drift_is_the_beta_convolution() {
    let gamma = 0.8;
    let base = state(gamma);
    let (drift, _) = oracle(&base.p, gamma);
    let beta = [(-2isize, -1.0), (-1, -2.0), (0, 6.0), (1, -2.0), (2, -1.0)];
    for x in 0..N {
        let conv: f64 = beta.iter().map(|&(o, b)| b * base.p[(x as isize + o).rem_euclid(N as isize) as usize]).sum();
        assert!((drift[x] + 0.5 * gamma * conv).abs() < 1e-12);
    }
}

#[test]
fn periodized_coupling_converges_to_free_coupling() {
    let params = ModelParams::new(2.5);
    let mut prev = f64::INFINITY;
    for n in [16, 32, 64, 128] {
        let alpha = chain_sim::periodize_alpha(&params, n).unwrap();
        let err = (1..=4).map(|x| (alpha[x] + (x as f64).powf(-2.5)).abs()).fold(0.0, f64::max);
        assert!(err < prev, "n={n}: {err:e} not below {prev:e}");
        assert!(err <= 3.0 * 2.0 * zeta_tail(n as f64, 2.5));
        prev = err;
    }
}

/// `sum_{m >= 1} (m n)^{-theta}` bounded by `n^{-theta} (1 + 1/(theta-1))`.
fn zeta_tail(n: f64, theta: f64) -> f64 {
    n.powf(-theta) * (1.0 + 1.0 / (theta - 1.0))
}
