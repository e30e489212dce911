//! Event-driven simulation of the wavenumber jump process `K(t)` and its
//! flight `Z(t) = int_0^t omega'(K(s)) ds`.
//!
//! `K` holds at `k` for an exponential time of rate `2 gamma0 R(k)` and then
//! jumps to `k'` with density `R(k,k') / R(k)`. Because the pair kernel has
//! rank two, that density is the mixture
//!
//! ```text
//! R(k,k')/R(k) = w e2(k') + (1 - w) e1(k'),   w = e1(k) / (e1(k) + e2(k)),
//! ```
//!
//! of two fixed densities, each drawn by rejection from the uniform law.
//! `Z` only changes linearly between jumps, so no time step appears anywhere.
//!
//! Two invariant laws are involved: the embedded chain `K_n` keeps
//! `pi(dk) = 2R(k)/3 dk`, while `K(t)` keeps the uniform law.
//!
//! Random streams are ChaCha8 keyed by the run seed with the trajectory
//! index as stream id, so results do not depend on the worker count.
//!
//! The characteristic function of `Z(Nt)/N(theta)` tends to
//! `exp(-C |u|^alpha t)` with `C` = [`c_big`]. A fractional heat equation in
//! the transform `int e^{-2 pi i p y}` therefore needs
//! `kappa = (2 pi)^alpha C`; see [`flight_kappa`].

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{Dispersion, ModelParams};
use crate::error::{Error, Result};
use crate::numerics::{bisect, integrate, linear_fit, NeumaierSum, QuadOptions};
use crate::output::fmt_f64;
use crate::resolvent::{c_big, stable_index};
use crate::scattering::{e1, e2, r_mean};
pub use crate::stats::stream_rng;
use crate::stats::mean_stderr;

/// Smallest admissible `|K|` after a jump.
pub const K_CLAMP: f64 = 1e-12;

/// Envelope of the `e1` density over the uniform proposal.
pub const E1_ENVELOPE: f64 = 8.0 / 3.0;
/// Envelope of the `e2` density over the uniform proposal.
pub const E2_ENVELOPE: f64 = 2.0;
/// Envelope of `pi` over the uniform proposal: `max 2R/3 = 3/2`, attained
/// at `sin^2(pi k) = 3/4`.
pub const PI_ENVELOPE: f64 = 1.5;

#[inline]
fn uniform_torus<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() - 0.5
}

/// Space scale `N(theta)` paired with time scale `N`.
pub fn space_scale(theta: f64, n: f64) -> f64 {
    if theta < 3.0 {
        n.powf((7.0 - theta) / 6.0)
    } else if theta == 3.0 {
        n.ln().sqrt() * n.powf(2.0 / 3.0)
    } else {
        n.powf(2.0 / 3.0)
    }
}

/// Decay rate of `exp(-kappa |p|^alpha t)` for the law of `Z(Nt)/N(theta)`
/// written in the transform `int e^{-2 pi i p y}`.
pub fn flight_kappa(params: &ModelParams) -> Result<f64> {
    Ok((2.0 * PI).powf(stable_index(params.theta)) * c_big(params)?)
}

/// Density `2R(k)/3` of `pi`.
#[inline]
pub fn pi_density(k: f64) -> f64 {
    2.0 * r_mean(k) / 3.0
}

/// Draw from `pi` by rejection.
pub fn sample_pi<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let k = uniform_torus(rng);
        if rng.random::<f64>() * PI_ENVELOPE < pi_density(k) {
            return clamp_k(k);
        }
    }
}

/// `(e1(k), e2(k))` from a single `sin_cos`.
#[inline]
fn e_pair(k: f64) -> (f64, f64) {
    let (s, c) = (PI * k).sin_cos();
    let s2 = s * s;
    (8.0 / 3.0 * s2 * s2, 8.0 * s2 * c * c)
}

/// Weights `(w_e2, w_e1)` of the two mixture components of `P(k, .)`.
pub fn mixture_weights(k: f64) -> (f64, f64) {
    let (a, b) = e_pair(k);
    (a / (a + b), b / (a + b))
}

/// Draw from the density `e_i` by rejection; returns the sample and the
/// number of proposals used.
pub fn sample_component<R: Rng + ?Sized>(i: u8, rng: &mut R) -> Result<(f64, u32)> {
    let (density, envelope): (fn(f64) -> f64, f64) = match i {
        1 => (e1, E1_ENVELOPE),
        2 => (e2, E2_ENVELOPE),
        _ => return Err(Error::Domain(format!("basis index must be 1 or 2, got {i}"))),
    };
    let mut tries = 0;
    loop {
        tries += 1;
        let k = uniform_torus(rng);
        if rng.random::<f64>() * envelope < density(k) {
            return Ok((k, tries));
        }
    }
}

#[inline]
fn clamp_k(k: f64) -> f64 {
    if k.abs() >= K_CLAMP {
        k
    } else if k < 0.0 {
        -K_CLAMP
    } else {
        K_CLAMP
    }
}

/// Next state of the embedded chain from `k`.
pub fn sample_next_k<R: Rng + ?Sized>(k: f64, rng: &mut R) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::DegenerateState);
    }
    let (w2, _) = mixture_weights(k);
    let i = if rng.random::<f64>() < w2 { 2 } else { 1 };
    Ok(clamp_k(sample_component(i, rng)?.0))
}

/// Exponential holding time of rate `2 gamma0 R(k)`.
pub fn holding_time<R: Rng + ?Sized>(params: &ModelParams, k: f64, rng: &mut R) -> f64 {
    let e: f64 = rng.sample(Exp1);
    e / (2.0 * params.gamma0 * r_mean(k))
}

/// A recorded path of `K` on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpTrajectory {
    pub states: Vec<f64>,
    pub jump_times: Vec<f64>,
    pub z_end: f64,
    pub horizon: f64,
}

/// Running state of one trajectory. Advancing to `T/2` and then to `T`
/// gives the same result, bit for bit, as advancing to `T` directly.
#[derive(Debug, Clone)]
pub struct Walker {
    pub k: f64,
    omega_prime: f64,
    /// Time of the last jump (0 at the start).
    pub t_jump: f64,
    /// `Z` at the last jump.
    pub z_jump: f64,
    /// Already drawn time of the next jump.
    pub next_jump: f64,
    pub n_jumps: u64,
    rng: ChaCha8Rng,
}

impl Walker {
    /// `Z(t)` for `t_jump <= t <= next_jump`.
    #[inline]
    pub fn z_at(&self, t: f64) -> f64 {
        self.z_jump + self.omega_prime * (t - self.t_jump)
    }
}

/// Shared data for simulating many trajectories at fixed parameters.
#[derive(Debug, Clone)]
pub struct FlightSampler {
    params: ModelParams,
    disp: Dispersion,
}

impl FlightSampler {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.require_theta_above_two()?;
        Ok(Self { params: *params, disp: Dispersion::new(params)? })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn omega_prime(&self, k: f64) -> Result<f64> {
        self.disp.omega_prime(k)
    }

    pub fn start(&self, k0: f64, mut rng: ChaCha8Rng) -> Result<Walker> {
        if k0 == 0.0 {
            return Err(Error::DegenerateState);
        }
        let omega_prime = self.omega_prime(k0)?;
        let next_jump = holding_time(&self.params, k0, &mut rng);
        Ok(Walker { k: k0, omega_prime, t_jump: 0.0, z_jump: 0.0, next_jump, n_jumps: 0, rng })
    }

    /// Advances through every jump up to `horizon` and returns `Z(horizon)`.
    pub fn advance(&self, w: &mut Walker, horizon: f64) -> Result<f64> {
        self.advance_recording(w, horizon, |_, _| {})
    }

    /// As [`FlightSampler::advance`], calling `record(t, k)` after each jump.
    pub fn advance_recording(&self, w: &mut Walker, horizon: f64, mut record: impl FnMut(f64, f64)) -> Result<f64> {
        while w.next_jump <= horizon {
            w.z_jump += w.omega_prime * (w.next_jump - w.t_jump);
            w.t_jump = w.next_jump;
            w.k = sample_next_k(w.k, &mut w.rng)?;
            w.omega_prime = self.omega_prime(w.k)?;
            w.next_jump = w.t_jump + holding_time(&self.params, w.k, &mut w.rng);
            w.n_jumps += 1;
            record(w.t_jump, w.k);
        }
        Ok(w.z_at(horizon))
    }

    /// Runs from `k0` (or from `pi` when `k0` is `None`) to `horizon` on
    /// stream `index` and returns `(Z(horizon), K(horizon))`.
    pub fn endpoint(&self, k0: Option<f64>, horizon: f64, seed: u64, index: u64) -> Result<(f64, f64)> {
        let mut rng = stream_rng(seed, index);
        let k0 = match k0 {
            Some(k) => k,
            None => sample_pi(&mut rng),
        };
        let mut w = self.start(k0, rng)?;
        let z = self.advance(&mut w, horizon)?;
        Ok((z, w.k))
    }
}

/// Exact simulation of `K` on `[0, horizon]` recording every jump.
pub fn simulate_trajectory(params: &ModelParams, k0: f64, horizon: f64, rng: ChaCha8Rng) -> Result<JumpTrajectory> {
    if !(horizon > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    let sampler = FlightSampler::new(params)?;
    let mut w = sampler.start(k0, rng)?;
    let (mut states, mut jump_times) = (vec![k0], vec![0.0]);
    let z_end = sampler.advance_recording(&mut w, horizon, |t, k| {
        jump_times.push(t);
        states.push(k);
    })?;
    Ok(JumpTrajectory { states, jump_times, z_end, horizon })
}

/// `N pi(omega'(k) / (2 gamma0 R(k)) > N(theta) lambda)`, computed from the
/// roots of `omega'/(2 gamma0 R) - N(theta) lambda` on `(0, 1/2)` and
/// quadrature of `pi` over the exceedance set. `omega'` is odd, so only
/// positive `k` can exceed a positive threshold.
pub fn tail_statistic(params: &ModelParams, n: f64, lambda: f64) -> Result<f64> {
    params.require_theta_above_two()?;
    if !(lambda > 0.0) || !(n > 1.0) {
        return Err(Error::Domain(format!("need lambda > 0 and N > 1, got lambda = {lambda}, N = {n}")));
    }
    let disp = Dispersion::new(params)?;
    let thr = space_scale(params.theta, n) * lambda;
    let excess = |k: f64| disp.omega_prime(k).unwrap_or(0.0) / (2.0 * params.gamma0 * r_mean(k)) - thr;

    let mut grid: Vec<f64> = (0..=400).map(|i| 10f64.powf(-40.0 + 37.0 * i as f64 / 400.0)).collect();
    grid.extend((1..=500).map(|i| 1e-3 + (0.5 - 1e-3) * i as f64 / 500.0));
    grid.pop();
    let mut intervals = Vec::new();
    let mut start = if excess(grid[0]) > 0.0 { Some(0.0) } else { None };
    for w in grid.windows(2) {
        let (fa, fb) = (excess(w[0]), excess(w[1]));
        if (fa > 0.0) != (fb > 0.0) {
            let root = bisect(&excess, w[0], w[1], 1e-15, 200)?;
            match start.take() {
                Some(a) => intervals.push((a, root)),
                None => start = Some(root),
            }
        }
    }
    if let Some(a) = start {
        intervals.push((a, 0.5));
    }
    if intervals.is_empty() {
        return Err(Error::NoExceedance);
    }
    let mut mass = NeumaierSum::new();
    for (a, b) in intervals {
        mass.add(integrate(pi_density, a, b, QuadOptions::tol(0.0, 1e-13))?.value);
    }
    Ok(n * mass.value())
}

/// Limit of [`tail_statistic`] as `N -> infinity`.
pub fn tail_limit(params: &ModelParams, lambda: f64) -> Result<f64> {
    let a = stable_index(params.theta);
    Ok(crate::resolvent::c_star(params)? * (params.gamma0 * lambda).powf(-a))
}

/// Empirical characteristic function at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharFnPoint {
    pub u: f64,
    pub re: f64,
    pub im: f64,
    pub re_stderr: f64,
    pub im_stderr: f64,
}

impl CharFnPoint {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

pub fn empirical_char_fn(xs: &[f64], u: f64) -> CharFnPoint {
    let cos: Vec<f64> = xs.iter().map(|x| (u * x).cos()).collect();
    let sin: Vec<f64> = xs.iter().map(|x| (u * x).sin()).collect();
    let (re, re_stderr) = mean_stderr(&cos);
    let (im, im_stderr) = mean_stderr(&sin);
    CharFnPoint { u, re, im, re_stderr, im_stderr }
}

/// Fitted stable law of `Z(Nt)/N(theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyEstimate {
    pub theta: f64,
    pub exponent_fit: f64,
    /// `c` in `|phi(u)| = exp(-c |u|^alpha t)`; compare with [`c_big`].
    pub coefficient_fit: f64,
    /// Standard error of the fitted exponent.
    pub stderr: f64,
    pub n_samples: usize,
    pub n_time: f64,
    pub r_squared: f64,
    /// Largest `|Im phi| / stderr` inside the fit window.
    pub max_imag_z: f64,
    pub u_min: f64,
    pub u_max: f64,
}

/// `n_samples` independent values of `Z(Nt)/N(theta)` with `K(0) ~ pi`.
pub fn sample_scaled_flights(params: &ModelParams, n: f64, t: f64, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    sample_flights_with_scale(params, n, t, space_scale(params.theta, n), n_samples, seed)
}

/// As [`sample_scaled_flights`] with an explicit space scale.
pub fn sample_flights_with_scale(
    params: &ModelParams,
    n: f64,
    t: f64,
    scale: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let sampler = FlightSampler::new(params)?;
    (0..n_samples as u64)
        .into_par_iter()
        .map(|i| sampler.endpoint(None, n * t, seed, i).map(|(z, _)| z / scale))
        .collect()
}

/// Fits `log(-log|phi(u)|) = log(c t) + alpha log u` over the window
/// `0.1 <= -log|phi| <= 2`.
pub fn fit_stable_law(xs: &[f64], t: f64) -> Result<(f64, f64, f64, f64, f64, (f64, f64))> {
    let mut abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let med = abs[abs.len() / 2].max(f64::MIN_POSITIVE);
    let (mut lx, mut ly, mut imag_z) = (Vec::new(), Vec::new(), 0f64);
    let (mut u_min, mut u_max) = (f64::INFINITY, 0f64);
    for i in 0..=160 {
        let u = 10f64.powf(-2.0 + 4.0 * i as f64 / 160.0) / med;
        let cf = empirical_char_fn(xs, u);
        let l = -cf.modulus().ln();
        if (0.1..=2.0).contains(&l) {
            lx.push(u.ln());
            ly.push(l.ln());
            imag_z = imag_z.max(cf.im.abs() / cf.im_stderr.max(f64::MIN_POSITIVE));
            u_min = u_min.min(u);
            u_max = u_max.max(u);
        }
    }
    if lx.len() < 5 {
        return Err(Error::FitDegenerate { r_squared: f64::NAN, n_points: lx.len() });
    }
    let fit = linear_fit(&lx, &ly);
    if fit.r_squared < 0.9 {
        return Err(Error::FitDegenerate { r_squared: fit.r_squared, n_points: fit.n_points });
    }
    Ok((fit.slope, fit.intercept.exp() / t, fit.slope_stderr, fit.r_squared, imag_z, (u_min, u_max)))
}

/// Stable index and coefficient of `Z(Nt)/N(theta)` from the empirical
/// characteristic function.
pub fn estimate_stable_exponent(
    params: &ModelParams,
    n: f64,
    t: f64,
    n_samples: usize,
    seed: u64,
) -> Result<LevyEstimate> {
    if n_samples < 10_000 {
        return Err(Error::Config(format!("at least 10^4 samples are needed, got {n_samples}")));
    }
    let xs = sample_scaled_flights(params, n, t, n_samples, seed)?;
    levy_estimate_from_samples(params.theta, &xs, n, t)
}

pub fn levy_estimate_from_samples(theta: f64, xs: &[f64], n: f64, t: f64) -> Result<LevyEstimate> {
    let (exponent_fit, coefficient_fit, stderr, r_squared, max_imag_z, (u_min, u_max)) = fit_stable_law(xs, t)?;
    Ok(LevyEstimate {
        theta,
        exponent_fit,
        coefficient_fit,
        stderr,
        n_samples: xs.len(),
        n_time: n,
        r_squared,
        max_imag_z,
        u_min,
        u_max,
    })
}

/// `exp(-lambda / (r^2 - |y - y*|^2))` inside the ball, 0 outside.
pub fn bump_function(lambda: f64, y_star: f64, r: f64, y: f64) -> f64 {
    let d2 = (y - y_star).powi(2);
    if d2 >= r * r {
        0.0
    } else {
        (-lambda / (r * r - d2)).exp()
    }
}

/// Monte-Carlo estimate of `u(y,k,t) = E_k[u0(y + Z(t), K(t))]` on a grid,
/// stored `y`-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KineticField {
    pub y: Vec<f64>,
    pub k: Vec<f64>,
    pub t: f64,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_samples: usize,
}

impl KineticField {
    pub fn at(&self, iy: usize, ik: usize) -> (f64, f64) {
        let i = iy * self.k.len() + ik;
        (self.values[i], self.stderr[i])
    }
}

/// `(Z(horizon)/scale, K(horizon))` for `n_samples` walkers started at each
/// node of `k_grid`; stream index `node * n_samples + i`.
fn endpoints_from_grid(
    sampler: &FlightSampler,
    k_grid: &[f64],
    horizon: f64,
    scale: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Vec<(f64, f64)>>> {
    k_grid
        .iter()
        .enumerate()
        .map(|(node, &k0)| {
            (0..n_samples)
                .into_par_iter()
                .map(|i| {
                    let idx = (node * n_samples + i) as u64;
                    if horizon == 0.0 {
                        return Ok((0.0, k0));
                    }
                    sampler.endpoint(Some(k0), horizon, seed, idx).map(|(z, k)| (z / scale, k))
                })
                .collect()
        })
        .collect()
}

fn average_over<F: Fn(f64, f64) -> f64>(ends: &[(f64, f64)], y: f64, u0: &F) -> (f64, f64) {
    let vals: Vec<f64> = ends.iter().map(|&(z, k)| u0(y + z, k)).collect();
    mean_stderr(&vals)
}

/// Solves the kinetic equation by averaging `u0` along exact trajectories.
pub fn solve_boltzmann_mc<F: Fn(f64, f64) -> f64 + Sync>(
    params: &ModelParams,
    u0: &F,
    t: f64,
    y_grid: &[f64],
    k_grid: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<KineticField> {
    if !(t >= 0.0) || n_samples == 0 {
        return Err(Error::Domain("need t >= 0 and at least one sample".into()));
    }
    let sampler = FlightSampler::new(params)?;
    let ends = endpoints_from_grid(&sampler, k_grid, t, 1.0, n_samples, seed)?;
    let mut values = Vec::with_capacity(y_grid.len() * k_grid.len());
    let mut stderr = Vec::with_capacity(values.capacity());
    for &y in y_grid {
        for e in &ends {
            let (m, s) = average_over(e, y, u0);
            values.push(m);
            stderr.push(s);
        }
    }
    Ok(KineticField { y: y_grid.to_vec(), k: k_grid.to_vec(), t, values, stderr, n_samples })
}

/// `u_N(N(theta) y, k, t)` on a `k` grid together with its `k`-average and
/// the homogenization deficit `int |u_N - k-average|^2 dk`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaledEstimate {
    pub y: f64,
    pub per_k: Vec<f64>,
    pub per_k_stderr: Vec<f64>,
    pub k_average: f64,
    pub k_average_stderr: f64,
    /// Deficit with the Monte-Carlo variance subtracted.
    pub deficit: f64,
    /// Deficit as measured, biased upwards by the Monte-Carlo variance.
    pub deficit_raw: f64,
    /// Delta-method standard error of `deficit`.
    pub deficit_stderr: f64,
}

/// Midpoint grid `-1/2 + (j + 1/2)/m`, which avoids `k = 0`.
pub fn midpoint_k_grid(m: usize) -> Vec<f64> {
    (0..m).map(|j| -0.5 + (j as f64 + 0.5) / m as f64).collect()
}

/// [`rescaled_un`] on several `y` values sharing the same trajectories.
#[allow(clippy::too_many_arguments)]
pub fn rescaled_un_profile<F: Fn(f64, f64) -> f64 + Sync>(
    params: &ModelParams,
    u0: &F,
    n: f64,
    t: f64,
    y_grid: &[f64],
    k_grid: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<Vec<RescaledEstimate>> {
    if k_grid.is_empty() || n_samples < 2 {
        return Err(Error::Domain("need a nonempty k grid and at least two samples".into()));
    }
    let sampler = FlightSampler::new(params)?;
    let ends = endpoints_from_grid(&sampler, k_grid, n * t, space_scale(params.theta, n), n_samples, seed)?;
    let m = k_grid.len() as f64;
    Ok(y_grid
        .iter()
        .map(|&y| {
            let (per_k, per_k_stderr): (Vec<f64>, Vec<f64>) = ends.iter().map(|e| average_over(e, y, u0)).unzip();
            let k_average = per_k.iter().sum::<f64>() / m;
            let var_mean = per_k_stderr.iter().map(|s| s * s).sum::<f64>() / m;
            let deficit_raw = per_k.iter().map(|v| (v - k_average).powi(2)).sum::<f64>() / m;
            let deficit_var = per_k
                .iter()
                .zip(&per_k_stderr)
                .map(|(v, s)| 4.0 * (v - k_average).powi(2) * s * s + 2.0 * s.powi(4))
                .sum::<f64>()
                / (m * m);
            RescaledEstimate {
                deficit_stderr: deficit_var.sqrt(),
                y,
                k_average,
                k_average_stderr: (var_mean / m).sqrt(),
                deficit: deficit_raw - var_mean * (1.0 - 1.0 / m),
                deficit_raw,
                per_k,
                per_k_stderr,
            }
        })
        .collect())
}

/// `u_N(N(theta) y, k, t) = E_k[u0(y + Z(Nt)/N(theta), K(Nt))]`.
#[allow(clippy::too_many_arguments)]
pub fn rescaled_un<F: Fn(f64, f64) -> f64 + Sync>(
    params: &ModelParams,
    u0: &F,
    n: f64,
    t: f64,
    y: f64,
    k_grid: &[f64],
    n_samples: usize,
    seed: u64,
) -> Result<RescaledEstimate> {
    Ok(rescaled_un_profile(params, u0, n, t, &[y], k_grid, n_samples, seed)?.remove(0))
}

/// One output row of a kinetic estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KineticRow {
    pub theta: f64,
    pub gamma0: f64,
    pub n: f64,
    pub t: f64,
    pub statistic: String,
    pub value: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

pub const KINETIC_CSV_HEADER: [&str; 9] = ["theta", "gamma0", "N", "t", "statistic", "value", "stderr", "n_samples", "seed"];

impl KineticRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            fmt_f64(self.theta),
            fmt_f64(self.gamma0),
            fmt_f64(self.n),
            fmt_f64(self.t),
            self.statistic.clone(),
            fmt_f64(self.value),
            fmt_f64(self.stderr),
            self.n_samples.to_string(),
            self.seed.to_string(),
        ]
    }
}
