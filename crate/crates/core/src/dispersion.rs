//! Fourier data of the long-range interaction `alpha_x = -|x|^{-theta}`.
//!
//! The symbol `a_hat(k) = 4 sum_{x>=1} sin^2(pi k x) / x^theta` equals
//! `2 (zeta(theta) - Re Li_theta(e^{2 pi i k}))`, and its derivative is
//! `4 pi Im Li_{theta-1}(e^{2 pi i k})`. Both polylogarithms are evaluated with
//! the expansion of `Li_s(e^mu)` around `mu = 0`, which converges on the whole
//! torus and keeps full relative accuracy as `k -> 0`:
//!
//! ```text
//! Li_s(e^mu) = Gamma(1-s) (-mu)^{s-1} + sum_{m>=0} zeta(s-m) mu^m / m!        (s not an integer)
//! Li_n(e^mu) = mu^{n-1}/(n-1)! (H_{n-1} - ln(-mu)) + sum_{m != n-1} zeta(n-m) mu^m / m!
//! ```
//!
//! `omega = sqrt(a_hat)` and `omega' = a_hat' / (2 omega)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::numerics::{self, integrate, wrap_torus, QuadOptions};

/// Physical configuration shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Decay exponent of the interaction.
    pub theta: f64,
    /// Noise strength.
    pub gamma0: f64,
    /// Noise-scaling exponent, `gamma = eps^s gamma0`.
    pub s: f64,
    /// Absolute tolerance for infinite sums.
    pub series_tol: f64,
    pub series_max_terms: usize,
}

impl ModelParams {
    pub fn new(theta: f64) -> Self {
        Self { theta, gamma0: 1.0, s: 0.0, series_tol: 1e-15, series_max_terms: 400 }
    }

    pub fn with_gamma0(mut self, gamma0: f64) -> Self {
        self.gamma0 = gamma0;
        self
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 1.0) || !self.theta.is_finite() {
            return Err(Error::UnsupportedTheta { theta: self.theta, requirement: "theta > 1" });
        }
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return Err(Error::Config(format!("gamma0 must be positive, got {}", self.gamma0)));
        }
        if !(0.0..=1.0).contains(&self.s) {
            return Err(Error::Config(format!("s must lie in [0, 1], got {}", self.s)));
        }
        if !(self.series_tol > 0.0) {
            return Err(Error::Config("series_tol must be positive".into()));
        }
        if self.series_max_terms < 16 {
            return Err(Error::Config("series_max_terms must be at least 16".into()));
        }
        Ok(())
    }

    /// Guard for the operations that need `theta > 2`.
    pub fn require_theta_above_two(&self) -> Result<()> {
        self.validate()?;
        if self.theta > 2.0 {
            Ok(())
        } else {
            Err(Error::UnsupportedTheta { theta: self.theta, requirement: "theta > 2" })
        }
    }
}

/// One evaluation of the dispersion data at a wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub k: f64,
    pub a_hat: f64,
    pub a_hat_prime: f64,
    pub omega: f64,
    pub omega_prime: f64,
}

#[derive(Debug, Clone, Copy)]
enum Singular {
    /// Non-integer order: the singular term is `scale |k|^{s-1}`, times
    /// `-sgn(k)` for the imaginary part.
    Power { scale: f64 },
    /// Integer order `n`: `(2 pi i k)^{n-1} (H_{n-1} - ln(-2 pi i k)) / (n-1)!`.
    Log { harmonic: f64, fact: f64, n: i32, rotation: Complex64 },
}

/// Number of `|k|` buckets for the precomputed series lengths.
const BUCKETS: usize = 64;

/// Real or imaginary part of `Li_s(e^{2 pi i k})` with the `m = 0` term removed.
#[derive(Debug, Clone)]
struct PolylogPart {
    order: f64,
    singular: Singular,
    /// Coefficients of `k^{2j + offset}`; `offset` is 0 for the real part
    /// (starting at j = 1) and 1 for the imaginary part (starting at j = 0).
    coeffs: Vec<f64>,
    /// Series length that reaches the tolerance on each `|k|` bucket.
    lengths: [usize; BUCKETS],
    imaginary: bool,
}

impl PolylogPart {
    fn new(s: f64, imaginary: bool, tol: f64, max_terms: usize) -> Result<Self> {
        let singular = if s.fract() == 0.0 {
            let n = s as i32;
            let harmonic: f64 = (1..n).map(|j| 1.0 / j as f64).sum();
            let rotation = Complex64::i().powi(n - 1);
            Singular::Log { harmonic, fact: gamma(n as f64), n, rotation }
        } else {
            let ph = 0.5 * PI * (s - 1.0);
            let g = gamma(1.0 - s) * (2.0 * PI).powf(s - 1.0);
            Singular::Power { scale: if imaginary { g * ph.sin() } else { g * ph.cos() } }
        };
        let mut coeffs = Vec::with_capacity(max_terms);
        for j in 0..max_terms {
            let m = if imaginary { 2 * j + 1 } else { 2 * j + 2 };
            let sign_i = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let excluded = matches!(singular, Singular::Log { n, .. } if m as i32 == n - 1);
            let c = if excluded { 0.0 } else { zeta_series_coefficient(s, m) };
            coeffs.push(sign_i * c);
        }
        let mut part = Self { order: s, singular, coeffs, lengths: [0; BUCKETS], imaginary };
        for b in 0..BUCKETS {
            let edge = 0.5 * (b + 1) as f64 / BUCKETS as f64;
            let len = part.series_length(edge, tol).ok_or(Error::NonConvergence { tol, max_terms })?;
            part.lengths[b] = (len + 1).min(max_terms);
        }
        Ok(part)
    }

    fn singular_part(&self, k: f64) -> f64 {
        let ak = k.abs();
        match self.singular {
            Singular::Power { scale } => {
                let mag = scale * ak.powf(self.s_minus_one());
                if self.imaginary {
                    -k.signum() * mag
                } else {
                    mag
                }
            }
            Singular::Log { harmonic, fact, n, rotation } => {
                let l = (2.0 * PI * ak).ln();
                let w = Complex64::new((harmonic - l) / fact, 0.5 * PI * k.signum() / fact) * rotation;
                let z = w * (2.0 * PI * k).powi(n - 1);
                if self.imaginary {
                    z.im
                } else {
                    z.re
                }
            }
        }
    }

    #[inline]
    fn s_minus_one(&self) -> f64 {
        self.order - 1.0
    }

    /// Number of terms after which the remainder, bounded geometrically,
    /// drops below `tol` and half an ulp of the partial sum.
    fn series_length(&self, k: f64, tol: f64) -> Option<usize> {
        let k2 = k * k;
        let mut pw = if self.imaginary { k } else { k2 };
        let ratio = 1.5 * k2;
        let mut acc = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            let term = c * pw;
            acc += term;
            let bound = term.abs() * ratio / (1.0 - ratio);
            if j >= 2 && bound <= tol.min(0.5 * f64::EPSILON * acc.abs()) || pw == 0.0 {
                return Some(j + 1);
            }
            pw *= k2;
        }
        None
    }

    /// Regular power series, summed by Horner's rule.
    #[inline]
    fn regular(&self, k: f64) -> f64 {
        let ak = k.abs();
        let b = ((ak * (2 * BUCKETS) as f64) as usize).min(BUCKETS - 1);
        let k2 = k * k;
        let mut acc = 0.0;
        for c in self.coeffs[..self.lengths[b]].iter().rev() {
            acc = acc * k2 + c;
        }
        acc * if self.imaginary { k } else { k2 }
    }

    #[inline]
    fn eval(&self, k: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        self.singular_part(k) + self.regular(k)
    }
}

/// `zeta(s - m) (2 pi)^m / m!`, using the functional equation when
/// `s - m < 1/2` so that no factor overflows:
/// `2^s pi^{s-1} sin(pi (s-m) / 2) zeta(1-s+m) Gamma(1-s+m) / Gamma(m+1)`.
fn zeta_series_coefficient(s: f64, m: usize) -> f64 {
    let x = s - m as f64;
    if x >= 0.5 || x == 0.0 {
        let mut c = if x == 0.0 { -0.5 } else { numerics::zeta(x) };
        for i in 1..=m {
            c *= 2.0 * PI / i as f64;
        }
        return c;
    }
    if x < 0.0 && x.fract() == 0.0 && (x as i64) % 2 == 0 {
        return 0.0;
    }
    let sn = (0.5 * PI * x.rem_euclid(4.0)).sin();
    2f64.powf(s) * PI.powf(s - 1.0) * sn * numerics::zeta(1.0 - x) * (ln_gamma(1.0 - x) - ln_gamma(m as f64 + 1.0)).exp()
}

/// Precomputed evaluator for `a_hat`, `a_hat'`, `omega`, `omega'`.
#[derive(Debug, Clone)]
pub struct Dispersion {
    params: ModelParams,
    re_theta: PolylogPart,
    im_theta_minus_one: Option<PolylogPart>,
}

impl Dispersion {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let re_theta = PolylogPart::new(params.theta, false, params.series_tol, params.series_max_terms)?;
        let im_theta_minus_one = if params.theta > 2.0 {
            Some(PolylogPart::new(params.theta - 1.0, true, params.series_tol, params.series_max_terms)?)
        } else {
            None
        };
        Ok(Self { params: *params, re_theta, im_theta_minus_one })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// `a_hat(k)`; the argument is reduced into the torus first.
    #[inline]
    pub fn a_hat(&self, k: f64) -> f64 {
        let k = wrap_torus(k);
        if k == 0.0 {
            0.0
        } else {
            (-2.0 * self.re_theta.eval(k)).max(0.0)
        }
    }

    /// `a_hat'(k)`; requires `theta > 2`.
    #[inline]
    pub fn a_hat_prime(&self, k: f64) -> Result<f64> {
        let part = self
            .im_theta_minus_one
            .as_ref()
            .ok_or(Error::UnsupportedTheta { theta: self.params.theta, requirement: "theta > 2" })?;
        let k = wrap_torus(k);
        if k == 0.0 || k == -0.5 {
            return Ok(0.0);
        }
        Ok(4.0 * PI * part.eval(k))
    }

    #[inline]
    pub fn omega(&self, k: f64) -> f64 {
        self.a_hat(k).sqrt()
    }

    /// `omega'(k) = a_hat'(k) / (2 omega(k))`.
    #[inline]
    pub fn omega_prime(&self, k: f64) -> Result<f64> {
        let k = wrap_torus(k);
        if k == 0.0 {
            return Err(Error::Domain("omega' is undefined at k = 0".into()));
        }
        let w = self.omega(k);
        Ok(self.a_hat_prime(k)? / (2.0 * w))
    }

    pub fn sample(&self, k: f64) -> Result<DispersionSample> {
        let k = wrap_torus(k);
        let a_hat = self.a_hat(k);
        let a_hat_prime = self.a_hat_prime(k)?;
        let omega = a_hat.sqrt();
        let omega_prime = self.omega_prime(k)?;
        Ok(DispersionSample { k, a_hat, a_hat_prime, omega, omega_prime })
    }

    /// `(omega(k + eps p/2) - omega(k - eps p/2)) / eps`.
    #[inline]
    pub fn delta_eps_omega(&self, eps: f64, p: f64, k: f64) -> f64 {
        self.omega_difference(eps * p, k) / eps
    }

    /// `omega(k + h/2) - omega(k - h/2)` without the division by `eps`.
    ///
    /// For `|h| <= |k| / 20` the difference is evaluated as the integral of
    /// `omega'` over `[k - h/2, k + h/2]` by 3-point Gauss-Legendre (a single
    /// midpoint value below `|h| = 1e-8 |k|`), which avoids the cancellation of
    /// the direct difference.
    #[inline]
    pub fn omega_difference(&self, h: f64, k: f64) -> f64 {
        let kw = wrap_torus(k);
        if h.abs() <= 1e-8 * kw.abs() {
            if let Ok(w1) = self.omega_prime(kw) {
                return h * w1;
            }
        } else if h.abs() <= 0.05 * kw.abs() {
            const X: f64 = 0.387_298_334_620_741_7; // sqrt(3/5) / 2
            let nodes = [(kw - X * h, 5.0), (kw, 8.0), (kw + X * h, 5.0)];
            let mut acc = 0.0;
            let mut ok = true;
            for (x, w) in nodes {
                match self.omega_prime(x) {
                    Ok(v) => acc += w * v,
                    Err(_) => ok = false,
                }
            }
            if ok {
                return h * acc / 18.0;
            }
        }
        self.omega(k + 0.5 * h) - self.omega(k - 0.5 * h)
    }

    /// `F(k, k')`; `F + 2` is [`Dispersion::f1_two_point`].
    pub fn f_two_point(&self, k: f64, kp: f64) -> Result<f64> {
        let (k, kp) = (wrap_torus(k), wrap_torus(kp));
        if k == 0.0 || kp == 0.0 {
            return Err(Error::Domain("F(k, k') needs k != 0 and k' != 0".into()));
        }
        Ok(f_from_symbols(self.a_hat(k + kp), self.a_hat(k), self.a_hat(kp)))
    }

    pub fn f1_two_point(&self, k: f64, kp: f64) -> Result<f64> {
        Ok(self.f_two_point(k, kp)? + 2.0)
    }
}

/// `(a(k+k') - a(k) - a(k')) / sqrt(a(k) a(k'))` from precomputed symbol values.
#[inline]
pub fn f_from_symbols(a_sum: f64, a_k: f64, a_kp: f64) -> f64 {
    (a_sum - (a_k + a_kp)) / (a_k.sqrt() * a_kp.sqrt())
}

pub fn a_hat(params: &ModelParams, k: f64) -> Result<f64> {
    Ok(Dispersion::new(params)?.a_hat(k))
}

pub fn a_hat_prime(params: &ModelParams, k: f64) -> Result<f64> {
    params.require_theta_above_two()?;
    Dispersion::new(params)?.a_hat_prime(k)
}

pub fn omega_and_prime(params: &ModelParams, k: f64) -> Result<DispersionSample> {
    params.require_theta_above_two()?;
    Dispersion::new(params)?.sample(k)
}

pub fn delta_eps_omega(params: &ModelParams, eps: f64, p: f64, k: f64) -> Result<f64> {
    params.require_theta_above_two()?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(Dispersion::new(params)?.delta_eps_omega(eps, p, k))
}

pub fn f_two_point(params: &ModelParams, k: f64, kp: f64) -> Result<f64> {
    params.require_theta_above_two()?;
    Dispersion::new(params)?.f_two_point(k, kp)
}

/// Small-k constant: `a_hat(k) ~ C |k|^{theta-1}` (2 < theta < 3), `4 pi^2`
/// for theta = 3 (with the `|log k|` factor), `C k^2` for theta > 3.
pub fn c_theta(params: &ModelParams) -> Result<f64> {
    params.require_theta_above_two()?;
    let th = params.theta;
    if th == 3.0 {
        return Ok(4.0 * PI * PI);
    }
    if th > 3.0 {
        return Ok(4.0 * PI * PI * numerics::zeta(th - 2.0));
    }
    Ok(4.0 * PI.powf(th - 1.0) * sin2_power_integral(th)?)
}

/// `int_0^inf sin^2(y) y^{-theta} dy` for 1 < theta < 3.
///
/// `[0, pi]` is integrated after the substitution `y = u^{1/(3-theta)}`, which
/// removes the endpoint singularity. On `[pi, inf)` the integrand splits into
/// `y^{-theta}/2` (exact) and `cos(2y) y^{-theta}/2`, integrated between zeros
/// up to `Y = 400 pi` plus an integration-by-parts tail.
pub fn sin2_power_integral(theta: f64) -> Result<f64> {
    let opts = QuadOptions::tol(1e-16, 1e-14);
    let beta = 1.0 / (3.0 - theta);
    // With y = u^beta the integrand becomes beta * (sin y / y)^2 exactly.
    let head = integrate(|u: f64| beta * sinc(u.powf(beta)).powi(2), 0.0, PI.powf(1.0 / beta), opts)?.value;
    let smooth = PI.powf(1.0 - theta) / (2.0 * (theta - 1.0));
    let y_max = 400.0 * PI;
    let mut breaks = vec![PI, 1.25 * PI];
    let mut z = 1.25 * PI;
    while z + 0.5 * PI < y_max {
        z += 0.5 * PI;
        breaks.push(z);
    }
    breaks.push(y_max);
    let osc = numerics::integrate_panels(|y: f64| (2.0 * y).cos() * y.powf(-theta), &breaks, opts)?.value;
    let tail = cos2_tail(theta, y_max);
    Ok(head + smooth - 0.5 * (osc + tail))
}

/// `sin(y) / y` with the removable singularity filled in.
#[inline]
pub fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// `int_Y^inf cos(2y) y^{-a} dy` for `Y` a multiple of `pi`, by repeated
/// integration by parts.
fn cos2_tail(a: f64, y: f64) -> f64 {
    let t1 = a / (4.0 * y.powf(a + 1.0));
    let t2 = a * (a + 1.0) * (a + 2.0) / (16.0 * y.powf(a + 3.0));
    let t3 = a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) / (64.0 * y.powf(a + 5.0));
    t1 - t2 + t3
}

/// Time scaling `f_{theta,s}(eps)`.
pub fn time_scaling(params: &ModelParams, eps: f64) -> Result<f64> {
    params.validate()?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let (th, s) = (params.theta, params.s);
    if th < 3.0 {
        Ok(eps.powf((6.0 - s * (th - 1.0)) / (7.0 - th)))
    } else if th == 3.0 {
        if s == 1.0 {
            Ok(eps)
        } else {
            let h = h_inverse(s, eps)?;
            Ok(eps.powf(s) * h * h * h)
        }
    } else {
        Ok(eps.powf((3.0 - s) / 2.0))
    }
}

/// `h_s(eps)`: the root `y in (0,1)` of `(y^4 / (-ln y))^{1/(2(1-s))} = eps`.
pub fn h_inverse(s: f64, eps: f64) -> Result<f64> {
    let expo = 1.0 / (2.0 * (1.0 - s));
    // Work with ln of the map to keep the bracket (1e-300, 1 - 1e-9) well scaled.
    // In t = ln y the map reads expo * (4t - ln(-t)), increasing in t.
    let g = |t: f64| expo * (4.0 * t - (-t).ln()) - eps.ln();
    let (lo, hi) = ((1e-300f64).ln(), (1.0 - 1e-9f64).ln());
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Domain("h_s bracket does not contain the root".into()));
    }
    let t = numerics::bisect(g, lo, hi, 1e-15, 400)?;
    Ok(t.exp())
}

/// Leading small-k term of `a_hat`: `C |k|^{theta-1}`,
/// `4 pi^2 k^2 |ln|k||`, `C k^2`.
pub fn a_hat_leading(params: &ModelParams, c: f64, k: f64) -> f64 {
    let ak = k.abs();
    if params.theta < 3.0 {
        c * ak.powf(params.theta - 1.0)
    } else if params.theta == 3.0 {
        4.0 * PI * PI * ak * ak * (-ak.ln())
    } else {
        c * ak * ak
    }
}

/// Blown-up difference quotient `(delta_eps omega)_eps(k, p)`: `delta_eps omega`
/// evaluated at `k_eps = gamma0^{-2/(7-theta)} |p|^{2/(7-theta)} (f/eps^s)^{1/3} k`
/// and normalized so that it has a finite limit as `eps -> 0`.
pub fn delta_eps_omega_rescaled(params: &ModelParams, eps: f64, p: f64, k: f64) -> Result<f64> {
    params.require_theta_above_two()?;
    if p == 0.0 {
        return Err(Error::Domain("rescaled quotient needs p != 0".into()));
    }
    let (th, s, g0) = (params.theta, params.s, params.gamma0);
    let base = time_scaling(params, eps)? / eps.powf(s);
    if !(base > 0.0 && base.is_finite()) {
        return Err(Error::Domain(format!("time scaling underflows at eps = {eps:e}")));
    }
    let k_eps = g0.powf(-2.0 / (7.0 - th)) * p.abs().powf(2.0 / (7.0 - th)) * base.cbrt() * k;
    let d = Dispersion::new(params)?.delta_eps_omega(eps, p, k_eps);
    Ok(if th < 3.0 {
        g0.powf(-(3.0 - th) / (7.0 - th)) * p.abs().powf(-4.0 / (7.0 - th)) * base.powf((3.0 - th) / 6.0) * d
    } else if th == 3.0 {
        d / (p.abs() * (-base.cbrt().ln()).sqrt())
    } else {
        d / p.abs()
    })
}

/// Limit of [`delta_eps_omega_rescaled`]: `sgn(k) (theta-1) sqrt(C)/2 |k|^{-(3-theta)/2}`
/// below theta = 3 and `sgn(k) sqrt(C)` from theta = 3 on.
pub fn delta_eps_omega_rescaled_limit(params: &ModelParams, k: f64) -> Result<f64> {
    let c = c_theta(params)?;
    let th = params.theta;
    Ok(if th < 3.0 {
        k.signum() * 0.5 * (th - 1.0) * c.sqrt() * k.abs().powf(-(3.0 - th) / 2.0)
    } else {
        k.signum() * c.sqrt()
    })
}
