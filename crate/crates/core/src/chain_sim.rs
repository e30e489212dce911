//! Periodic harmonic chain with long-range coupling and momentum-exchange
//! noise.
//!
//! On `n` sites the coupling is the periodization
//! `alpha_per(x) = -sum_m |x + m n|^{-theta}`, `x != 0`, whose discrete
//! symbol is exactly `a_hat(j/n)`. The Hamiltonian is
//! `H = 1/2 sum p_x^2 + 1/2 sum_x q_x (alpha_per * q)_x`.
//!
//! Transforms are unnormalized, `f^(j) = sum_x f_x e^{-2 pi i j x / n}`, so
//! `psi^(j) = omega_j q^(j) + i p^(j)` satisfies `(1/n) sum_j |psi^(j)|^2 = 2H`.
//!
//! A step is `harmonic(dt/2) . noise(dt) . harmonic(dt/2)`. The harmonic
//! part rotates each normal mode exactly. The noise part applies, site by
//! site in ascending order, the exact rotation `exp(a_x Y_x)` of
//! `(p_{x-1}, p_x, p_{x+1})` about `(1,1,1)/sqrt 3` with
//! `a_x = sqrt(gamma dt) xi_x`. Both parts conserve `H` and `sum p`. The
//! noise realises the generator `(gamma/2) sum Y_x^2`, i.e. the Ito drift
//! `-(gamma/2)(beta * p)` with `beta = (-1, -2, 6, -2, -1)`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::dispersion::{Dispersion, ModelParams};
use crate::error::{Error, Result};
use crate::numerics::{hurwitz_zeta, NeumaierSum};
use crate::output::{fmt_f64, write_csv_file, Metadata};
use crate::stats::{mean_stderr, stream_rng};

/// Smallest number of replicas accepted by [`estimate_wigner`].
pub const MIN_REPLICAS: usize = 30;

/// `alpha_per(x)` for `x = 0..n`, with `alpha_per(0)` making the row sum vanish.
pub fn periodize_alpha(params: &ModelParams, n: usize) -> Result<Vec<f64>> {
    params.validate()?;
    if n < 8 {
        return Err(Error::Domain(format!("lattice size must be at least 8, got {n}")));
    }
    let th = params.theta;
    let nf = n as f64;
    let mut alpha = vec![0.0; n];
    for x in 1..=n / 2 {
        let a = x as f64 / nf;
        let v = -nf.powf(-th) * (hurwitz_zeta(th, a)? + hurwitz_zeta(th, 1.0 - a)?);
        alpha[x] = v;
        alpha[n - x] = v;
    }
    let mut row = NeumaierSum::new();
    for &v in &alpha[1..] {
        row.add(v);
    }
    alpha[0] = -row.value();
    Ok(alpha)
}

/// Lattice data shared by every state of one chain.
pub struct ChainModel {
    pub params: ModelParams,
    pub n: usize,
    pub alpha_per: Vec<f64>,
    /// `a_hat(j/n)`, the discrete symbol of `alpha_per`.
    pub a_hat_n: Vec<f64>,
    /// `omega_n(j) = sqrt(a_hat_n(j))`.
    pub mode_freq: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for ChainModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChainModel").field("params", &self.params).field("n", &self.n).finish_non_exhaustive()
    }
}

impl ChainModel {
    pub fn new(params: &ModelParams, n: usize) -> Result<Arc<Self>> {
        if !n.is_power_of_two() {
            return Err(Error::Domain(format!("lattice size must be a power of two, got {n}")));
        }
        let alpha_per = periodize_alpha(params, n)?;
        let disp = Dispersion::new(params)?;
        let a_hat_n: Vec<f64> = (0..n).map(|j| if j == 0 { 0.0 } else { disp.a_hat(j as f64 / n as f64) }).collect();
        let mode_freq = a_hat_n.iter().map(|a| a.sqrt()).collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            params: *params,
            n,
            alpha_per,
            a_hat_n,
            mode_freq,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        }))
    }

    /// Largest mode frequency.
    pub fn max_freq(&self) -> f64 {
        self.mode_freq.iter().cloned().fold(0.0, f64::max)
    }

    /// Recommended step `0.1 / max_j omega_n(j)`.
    pub fn default_dt(&self) -> f64 {
        0.1 / self.max_freq()
    }

    pub fn forward(&self, x: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.process(&mut buf);
        buf
    }

    /// Inverse transform including the `1/n`.
    pub fn inverse(&self, mut buf: Vec<Complex64>) -> Vec<Complex64> {
        self.ifft.process(&mut buf);
        let inv = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= inv);
        buf
    }
}

/// Positions and momenta of one realization.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub model: Arc<ChainModel>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub t: f64,
    pub gamma: f64,
}

impl ChainState {
    pub fn new(model: Arc<ChainModel>, p: Vec<f64>, q: Vec<f64>, gamma: f64) -> Result<Self> {
        if p.len() != model.n || q.len() != model.n {
            return Err(Error::Domain("p and q must have one entry per site".into()));
        }
        if !(gamma >= 0.0) {
            return Err(Error::Domain(format!("gamma must be nonnegative, got {gamma}")));
        }
        Ok(Self { model, p, q, t: 0.0, gamma })
    }

    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn alpha_per(&self) -> &[f64] {
        &self.model.alpha_per
    }

    pub fn mode_freq(&self) -> &[f64] {
        &self.model.mode_freq
    }

    pub fn total_momentum(&self) -> f64 {
        let mut s = NeumaierSum::new();
        self.p.iter().for_each(|&v| s.add(v));
        s.value()
    }

    pub fn kinetic_energy(&self) -> f64 {
        let mut s = NeumaierSum::new();
        self.p.iter().for_each(|&v| s.add(0.5 * v * v));
        s.value()
    }

    /// `1/2 q . (alpha_per * q)`, evaluated on the normal modes.
    pub fn potential_energy(&self) -> f64 {
        let qh = self.model.forward(&self.q);
        let mut s = NeumaierSum::new();
        for (z, a) in qh.iter().zip(&self.model.a_hat_n) {
            s.add(a * z.norm_sqr());
        }
        0.5 * s.value() / self.n() as f64
    }

    pub fn energy(&self) -> f64 {
        self.kinetic_energy() + self.potential_energy()
    }
}

/// Gibbs state at temperature `temperature`: `p_x ~ N(0, T)` and
/// `q^(j) = sqrt(T) w^(j) / omega_j` from white noise `w`, with `q^(0) = 0`.
pub fn init_thermal(model: &Arc<ChainModel>, temperature: f64, gamma: f64, rng: &mut ChaCha8Rng) -> Result<ChainState> {
    init_local_thermal(model, |_| temperature, gamma, rng)
}

/// As [`init_thermal`] with a temperature profile `T(x/n)`, imposed on the
/// white noise before filtering.
pub fn init_local_thermal(
    model: &Arc<ChainModel>,
    temperature: impl Fn(f64) -> f64,
    gamma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<ChainState> {
    let n = model.n;
    let temps: Vec<f64> = (0..n).map(|x| temperature(x as f64 / n as f64)).collect();
    if let Some(t) = temps.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::Domain(format!("temperature must be positive, got {t}")));
    }
    let p: Vec<f64> = temps.iter().map(|t| t.sqrt() * rng.sample::<f64, _>(StandardNormal)).collect();
    let w: Vec<f64> = temps.iter().map(|t| t.sqrt() * rng.sample::<f64, _>(StandardNormal)).collect();
    let mut qh = model.forward(&w);
    for (j, z) in qh.iter_mut().enumerate() {
        *z = if j == 0 { Complex64::new(0.0, 0.0) } else { *z / model.mode_freq[j] };
    }
    let q = model.inverse(qh).iter().map(|z| z.re).collect();
    ChainState::new(model.clone(), p, q, gamma)
}

/// Exact flow of the harmonic part over `dt`.
pub fn step_harmonic(state: &mut ChainState, dt: f64) {
    let model = state.model.clone();
    let n = model.n;
    // Pack z = q + i p and split the spectrum by conjugate symmetry.
    let mut z: Vec<Complex64> = state.q.iter().zip(&state.p).map(|(&q, &p)| Complex64::new(q, p)).collect();
    model.fft.process(&mut z);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let zj = z[j];
        let zm = z[(n - j) % n].conj();
        let qh = 0.5 * (zj + zm);
        let ph = Complex64::new(0.0, -0.5) * (zj - zm);
        let w = model.mode_freq[j];
        let (qn, pn) = if j == 0 || w == 0.0 {
            (qh + ph * dt, ph)
        } else {
            let (s, c) = (w * dt).sin_cos();
            (qh * c + ph * (s / w), ph * c - qh * (w * s))
        };
        out[j] = qn + Complex64::i() * pn;
    }
    let back = model.inverse(out);
    for (x, v) in back.iter().enumerate() {
        state.q[x] = v.re;
        state.p[x] = v.im;
    }
}

/// `exp(a Y)` applied to `(p_{x-1}, p_x, p_{x+1})`.
#[inline]
fn rotate_triple(p: &mut [f64], x: usize, a: f64) {
    if a == 0.0 {
        return;
    }
    let n = p.len();
    let (i, k) = ((x + n - 1) % n, (x + 1) % n);
    let (u, v, w) = (p[i], p[x], p[k]);
    let m = (u + v + w) / 3.0;
    let (du, dv, dw) = (u - m, v - m, w - m);
    // Y p = p x (1,1,1) = (v - w, w - u, u - v), a rotation of rate sqrt 3.
    let phi = 3f64.sqrt() * a;
    let (s, c) = phi.sin_cos();
    let r = s / 3f64.sqrt();
    p[i] = m + du * c + (v - w) * r;
    p[x] = m + dv * c + (w - u) * r;
    p[k] = m + dw * c + (u - v) * r;
}

/// Noise step with prescribed standard normals `xi`, one per site.
pub fn step_noise_with(state: &mut ChainState, dt: f64, xi: &[f64]) {
    let amp = (state.gamma * dt).sqrt();
    for (x, &g) in xi.iter().enumerate().take(state.n()) {
        rotate_triple(&mut state.p, x, amp * g);
    }
}

/// Exact momentum-exchange rotations over `dt`, sites in ascending order.
pub fn step_noise(state: &mut ChainState, dt: f64, rng: &mut ChaCha8Rng) {
    if state.gamma == 0.0 {
        return;
    }
    let xi: Vec<f64> = (0..state.n()).map(|_| rng.sample(StandardNormal)).collect();
    step_noise_with(state, dt, &xi);
}

/// `n_steps` Strang steps.
pub fn run(state: &mut ChainState, dt: f64, n_steps: usize, rng: &mut ChaCha8Rng) {
    for _ in 0..n_steps {
        step_harmonic(state, 0.5 * dt);
        step_noise(state, dt, rng);
        step_harmonic(state, 0.5 * dt);
        state.t += dt;
    }
}

/// `e_x = 1/2 p_x^2 - 1/4 sum_{x'} alpha_per(x - x') (q_x - q_x')^2`.
pub fn site_energy(state: &ChainState, x: usize) -> f64 {
    let n = state.n();
    let mut s = NeumaierSum::new();
    for xp in 0..n {
        if xp != x {
            let d = state.q[x] - state.q[xp];
            s.add(state.model.alpha_per[(x + n - xp) % n] * d * d);
        }
    }
    0.5 * state.p[x] * state.p[x] - 0.25 * s.value()
}

pub fn site_energies(state: &ChainState) -> Vec<f64> {
    (0..state.n()).map(|x| site_energy(state, x)).collect()
}

/// Site energies from the normal modes: the potential part has transform
/// `V^(l) = -(1/4n) sum_j F(k_j, k_{l-j}) (omega q^)(j) (omega q^)(l-j)` with
/// `F(k,k') = (a(k+k') - a(k) - a(k')) / (omega(k) omega(k'))`; zero modes drop out.
pub fn site_energies_spectral(state: &ChainState) -> Vec<f64> {
    let model = &state.model;
    let n = model.n;
    let qh = model.forward(&state.q);
    let wq: Vec<Complex64> = qh.iter().zip(&model.mode_freq).map(|(z, w)| z * w).collect();
    let mut vh = vec![Complex64::new(0.0, 0.0); n];
    for (l, v) in vh.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..n {
            let m = (l + n - j) % n;
            if m == 0 {
                continue;
            }
            let f = (model.a_hat_n[l] - model.a_hat_n[j] - model.a_hat_n[m]) / (model.mode_freq[j] * model.mode_freq[m]);
            acc += wq[j] * wq[m] * f;
        }
        *v = -acc / (4.0 * n as f64);
    }
    let pot = model.inverse(vh);
    state.p.iter().zip(&pot).map(|(p, v)| 0.5 * p * p + v.re).collect()
}

/// `psi^(j) = omega_j q^(j) + i p^(j)`.
pub fn wave_function(state: &ChainState) -> Vec<Complex64> {
    let qh = state.model.forward(&state.q);
    let ph = state.model.forward(&state.p);
    qh.iter().zip(&ph).zip(&state.model.mode_freq).map(|((q, p), w)| q * w + Complex64::i() * p).collect()
}

/// `psi_x`, the inverse transform of [`wave_function`].
pub fn wave_function_sites(state: &ChainState) -> Vec<Complex64> {
    state.model.inverse(wave_function(state))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WignerKind {
    EnergyProfile,
    SpectralDensity,
}

/// Ensemble estimate of `(eps/2) E|psi|^2` on sites or modes, `eps = 1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerEstimate {
    pub kind: WignerKind,
    /// `x/n` for profiles, `j/n` wrapped into `[-1/2, 1/2)` for densities.
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub eps: f64,
    pub replicas: usize,
}

pub fn estimate_wigner(states: &[ChainState], kind: WignerKind) -> Result<WignerEstimate> {
    let n = check_ensemble(states)?;
    let fields: Vec<Vec<f64>> = states.iter().map(|s| wigner_field(s, kind)).collect();
    summarize(fields, n, kind)
}

/// Ensemble estimate of the excess `W(states) - W(reference)` from paired
/// replicas. Pairs driven by the same noise share most of their fluctuations,
/// which the difference cancels.
pub fn estimate_wigner_excess(states: &[ChainState], reference: &[ChainState], kind: WignerKind) -> Result<WignerEstimate> {
    let n = check_ensemble(states)?;
    if reference.len() != states.len() || check_ensemble(reference)? != n {
        return Err(Error::GridMismatch);
    }
    let fields: Vec<Vec<f64>> = states
        .iter()
        .zip(reference)
        .map(|(s, r)| wigner_field(s, kind).iter().zip(wigner_field(r, kind)).map(|(a, b)| a - b).collect())
        .collect();
    summarize(fields, n, kind)
}

fn check_ensemble(states: &[ChainState]) -> Result<usize> {
    if states.len() < MIN_REPLICAS {
        return Err(Error::InsufficientReplicas { got: states.len(), needed: MIN_REPLICAS });
    }
    let n = states[0].n();
    if states.iter().any(|s| s.n() != n) {
        return Err(Error::GridMismatch);
    }
    Ok(n)
}

/// `(eps/2) |psi|^2` on sites or modes.
fn wigner_field(state: &ChainState, kind: WignerKind) -> Vec<f64> {
    let eps = 1.0 / state.n() as f64;
    let psi = match kind {
        WignerKind::EnergyProfile => wave_function_sites(state),
        WignerKind::SpectralDensity => wave_function(state),
    };
    psi.iter().map(|z| 0.5 * eps * z.norm_sqr()).collect()
}

fn summarize(fields: Vec<Vec<f64>>, n: usize, kind: WignerKind) -> Result<WignerEstimate> {
    let eps = 1.0 / n as f64;
    let (mut values, mut stderr) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut column = vec![0.0; fields.len()];
    for i in 0..n {
        for (c, f) in column.iter_mut().zip(&fields) {
            *c = f[i];
        }
        let (m, s) = mean_stderr(&column);
        values.push(m);
        stderr.push(s);
    }
    let grid = (0..n)
        .map(|i| match kind {
            WignerKind::EnergyProfile => i as f64 * eps,
            WignerKind::SpectralDensity => crate::numerics::wrap_torus(i as f64 * eps),
        })
        .collect();
    Ok(WignerEstimate { kind, grid, values, stderr, eps, replicas: fields.len() })
}

/// Energy-weighted spatial variance of `profile - baseline` on the torus,
/// measured around `center` (all in units of `x/n`).
pub fn profile_variance(est: &WignerEstimate, baseline: f64, center: f64) -> f64 {
    let (mut m0, mut m2) = (NeumaierSum::new(), NeumaierSum::new());
    for (y, v) in est.grid.iter().zip(&est.values) {
        let d = crate::numerics::wrap_torus(y - center);
        m0.add(v - baseline);
        m2.add((v - baseline) * d * d);
    }
    m2.value() / m0.value()
}

/// JSON run configuration of the `chain` experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRunConfig {
    pub theta: f64,
    pub gamma: f64,
    pub n: usize,
    /// Step size; `null` selects `0.1 / max omega`.
    #[serde(default)]
    pub dt: Option<f64>,
    pub steps: usize,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    pub seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    /// Any of `invariants`, `energy_profile`, `spectral_density`; all by default.
    #[serde(default = "default_outputs")]
    pub outputs: Vec<String>,
    /// Record invariants every this many steps.
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_record_every() -> usize {
    100
}

fn default_temperature() -> f64 {
    1.0
}

fn default_replicas() -> usize {
    MIN_REPLICAS
}

fn default_outputs() -> Vec<String> {
    ["invariants", "energy_profile", "spectral_density"].map(String::from).to_vec()
}

/// Largest relative drifts seen in a `chain` run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub energy_drift: f64,
    pub momentum_drift: f64,
    pub dt: f64,
}

/// Relative change of `sum p`, measured against `sqrt(sum p^2)` so that a
/// vanishing total momentum does not inflate it.
pub fn momentum_drift(initial: &ChainState, current: &ChainState) -> f64 {
    let scale = (2.0 * initial.kinetic_energy()).sqrt().max(f64::MIN_POSITIVE);
    (current.total_momentum() - initial.total_momentum()).abs() / scale
}

pub fn energy_drift(initial: &ChainState, current: &ChainState) -> f64 {
    (current.energy() - initial.energy()).abs() / initial.energy()
}

/// Runs an ensemble and writes the requested CSV files into `out_dir`.
pub fn run_config(config: &ChainRunConfig, out_dir: &Path) -> Result<ChainSummary> {
    const KNOWN: [&str; 3] = ["invariants", "energy_profile", "spectral_density"];
    if let Some(o) = config.outputs.iter().find(|o| !KNOWN.contains(&o.as_str())) {
        return Err(Error::Config(format!("unknown output '{o}'")));
    }
    if config.replicas == 0 || config.record_every == 0 {
        return Err(Error::Config("replicas and record_every must be positive".into()));
    }
    let wigner = config.outputs.iter().any(|o| o != "invariants");
    if wigner && config.replicas < MIN_REPLICAS {
        return Err(Error::InsufficientReplicas { got: config.replicas, needed: MIN_REPLICAS });
    }
    let params = ModelParams::new(config.theta);
    let model = ChainModel::new(&params, config.n)?;
    let dt = config.dt.unwrap_or_else(|| model.default_dt());
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    type Trace = Vec<(usize, f64, f64, f64)>;
    let runs: Vec<Result<(ChainState, Trace, f64, f64)>> = (0..config.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(config.seed, r);
            let mut s = init_thermal(&model, config.temperature, config.gamma, &mut rng)?;
            let s0 = s.clone();
            let mut trace = vec![(0, 0.0, s.energy(), s.total_momentum())];
            let (mut de, mut dp) = (0f64, 0f64);
            let mut done = 0;
            while done < config.steps {
                let k = config.record_every.min(config.steps - done);
                run(&mut s, dt, k, &mut rng);
                done += k;
                de = de.max(energy_drift(&s0, &s));
                dp = dp.max(momentum_drift(&s0, &s));
                trace.push((done, s.t, s.energy(), s.total_momentum()));
            }
            Ok((s, trace, de, dp))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let meta = Metadata::new("fracchain").with("command", "chain").with_config(config)?.with("seed", config.seed);
    let want = |name: &str| config.outputs.iter().any(|o| o == name);
    if want("invariants") {
        let mut rows = Vec::new();
        for (r, (_, trace, _, _)) in runs.iter().enumerate() {
            for &(step, t, h, p) in trace {
                rows.push(vec![r.to_string(), step.to_string(), fmt_f64(t), fmt_f64(h), fmt_f64(p)]);
            }
        }
        write_csv_file(&out_dir.join("invariants.csv"), &meta, &["replica", "step", "t", "H", "momentum"], &rows)?;
    }
    let states: Vec<ChainState> = runs.iter().map(|r| r.0.clone()).collect();
    for (name, kind, col) in [
        ("energy_profile", WignerKind::EnergyProfile, "x_over_n"),
        ("spectral_density", WignerKind::SpectralDensity, "k"),
    ] {
        if want(name) {
            let est = estimate_wigner(&states, kind)?;
            let rows: Vec<Vec<String>> = (0..est.grid.len())
                .map(|i| vec![fmt_f64(est.grid[i]), fmt_f64(est.values[i]), fmt_f64(est.stderr[i])])
                .collect();
            write_csv_file(&out_dir.join(format!("{name}.csv")), &meta, &[col, "value", "stderr"], &rows)?;
        }
    }
    Ok(ChainSummary {
        energy_drift: runs.iter().map(|r| r.2).fold(0.0, f64::max),
        momentum_drift: runs.iter().map(|r| r.3).fold(0.0, f64::max),
        dt,
    })
}

/// `2 pi / omega_n(j)`, the period of mode `j`.
pub fn mode_period(model: &ChainModel, j: usize) -> f64 {
    2.0 * PI / model.mode_freq[j]
}
