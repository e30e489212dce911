//! Goodness-of-fit helpers shared by the samplers and the tests.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::numerics::NeumaierSum;

/// Independent random stream `index` of the run keyed by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sample mean and its standard error, with compensated sums.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mut s = NeumaierSum::new();
    for &x in xs {
        s.add(x);
    }
    let mean = s.value() / n;
    let mut v = NeumaierSum::new();
    for &x in xs {
        v.add((x - mean) * (x - mean));
    }
    let var = if xs.len() > 1 { v.value() / (n - 1.0) } else { 0.0 };
    (mean, (var / n).sqrt())
}

/// One-sample Kolmogorov-Smirnov statistic; sorts `xs` in place.
pub fn ks_statistic(xs: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Asymptotic p-value of a KS statistic `d` from `n` samples.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lam = (sn + 0.12 + 0.11 / sn) * d;
    if lam < 0.2 {
        return 1.0;
    }
    let mut q = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * lam * lam).exp();
        q += if j % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    q.clamp(0.0, 1.0)
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_pvalue(stat: f64, dof: usize) -> f64 {
    ChiSquared::new(dof as f64).map(|d| d.sf(stat)).unwrap_or(f64::NAN)
}

/// Pearson statistic of observed counts against expected counts; bins with
/// zero expectation are skipped. Returns `(statistic, degrees of freedom)`.
pub fn pearson_chi_square(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    let mut stat = 0.0;
    let mut bins: usize = 0;
    for (&o, &e) in observed.iter().zip(expected) {
        if e > 0.0 {
            stat += (o as f64 - e).powi(2) / e;
            bins += 1;
        }
    }
    (stat, bins.saturating_sub(1))
}

/// Bowker's symmetry statistic for a square contingency table.
pub fn bowker_symmetry(table: &[Vec<u64>]) -> (f64, usize) {
    let m = table.len();
    let mut stat = 0.0;
    let mut dof = 0;
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (table[i][j] as f64, table[j][i] as f64);
            if a + b > 0.0 {
                stat += (a - b).powi(2) / (a + b);
                dof += 1;
            }
        }
    }
    (stat, dof)
}
