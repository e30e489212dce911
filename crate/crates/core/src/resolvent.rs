//! Resolvent integrals of the rescaled kinetic problem and the closed-form
//! constants of the limiting fractional diffusion.
//!
//! With `gamma = eps^s gamma0`, `f = f_{theta,s}(eps)` and
//! `D = f lambda + 2 gamma R(k) + i eps delta_eps omega(p,k)`,
//!
//! ```text
//! a_eps = int (2 gamma R / f) (1 - 2 gamma R / D) dk
//!       = lambda int 2 gamma R (f lambda + 2 gamma R) / |D|^2 dk + I_eps
//! I_eps = int 2 gamma R eps^2 (delta_eps omega)^2 / (f |D|^2) dk
//! ```
//!
//! and `a_eps - lambda -> C_{theta,gamma0} |p|^alpha` with `alpha = 6/(7-theta)`
//! (theta <= 3) or `3/2` (theta > 3).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::dispersion::{c_theta, sinc, time_scaling, Dispersion, ModelParams};
use crate::error::{Error, Result};
use crate::numerics::{integrate, integrate_panels, wynn_epsilon, NeumaierSum, QuadOptions};
use crate::scattering::r_mean;

/// One evaluation of `D_eps` or of a resolvent integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventPoint {
    pub eps: f64,
    pub p: f64,
    pub lambda: f64,
    pub value: Complex64,
}

/// Stable index of the limit: `6/(7-theta)` for theta <= 3, `3/2` above.
pub fn stable_index(theta: f64) -> f64 {
    if theta <= 3.0 {
        6.0 / (7.0 - theta)
    } else {
        1.5
    }
}

/// Integrands of the resolvent problem at fixed `(eps, p, lambda)`.
#[derive(Debug, Clone)]
pub struct Resolvent {
    disp: Dispersion,
    pub eps: f64,
    pub p: f64,
    pub lambda: f64,
    /// `f_{theta,s}(eps)`.
    pub f: f64,
    /// `eps^s gamma0`.
    pub gamma: f64,
}

impl Resolvent {
    pub fn new(params: &ModelParams, eps: f64, p: f64, lambda: f64) -> Result<Self> {
        params.require_theta_above_two()?;
        if !(params.s >= 0.0 && params.s < 1.0) {
            return Err(Error::Domain(format!("resolvent needs 0 <= s < 1, got {}", params.s)));
        }
        if !(lambda > 0.0) {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        let f = time_scaling(params, eps)?;
        Ok(Self { disp: Dispersion::new(params)?, eps, p, lambda, f, gamma: eps.powf(params.s) * params.gamma0 })
    }

    /// `D_eps(p, k, lambda)`.
    pub fn d(&self, k: f64) -> ResolventPoint {
        let value = Complex64::new(
            self.f * self.lambda + 2.0 * self.gamma * r_mean(k),
            self.disp.omega_difference(self.eps * self.p, k),
        );
        ResolventPoint { eps: self.eps, p: self.p, lambda: self.lambda, value }
    }

    /// `|2 gamma R / D|`, bounded by 5/4.
    pub fn ratio(&self, k: f64) -> f64 {
        2.0 * self.gamma * r_mean(k) / self.d(k).value.norm()
    }

    /// Returns `(g, f lambda + g, Delta^2, |D|^2)` with `g = 2 gamma R` and
    /// `Delta = eps delta_eps omega`.
    #[inline]
    fn parts(&self, k: f64) -> (f64, f64, f64, f64) {
        let g = 2.0 * self.gamma * r_mean(k);
        let re = self.f * self.lambda + g;
        let dw = self.disp.omega_difference(self.eps * self.p, k);
        let d2 = dw * dw;
        (g, re, d2, re * re + d2)
    }

    fn a_integrand(&self, k: f64) -> f64 {
        let (g, re, d2, den) = self.parts(k);
        if g == 0.0 {
            return 0.0;
        }
        g * (re * self.lambda + d2 / self.f) / den
    }

    fn lambda_integrand(&self, k: f64) -> f64 {
        let (g, re, _, den) = self.parts(k);
        if g == 0.0 {
            return 0.0;
        }
        g * re / den
    }

    fn i_integrand(&self, k: f64) -> f64 {
        let (g, _, d2, den) = self.parts(k);
        if g == 0.0 {
            return 0.0;
        }
        g * d2 / (self.f * den)
    }

    /// Panel breakpoints on `[0, 1/2]`: dyadic towards 0, refined at the
    /// kink `eps |p| / 2` and the crossover `(f / gamma)^{1/2}`.
    fn breaks(&self) -> Vec<f64> {
        let h = 0.5 * (self.eps * self.p).abs();
        let cross = (self.f / self.gamma).sqrt();
        let mut specials: Vec<f64> = [h, cross].into_iter().filter(|&x| x > 0.0 && x < 0.5).collect();
        let lo = specials.iter().cloned().fold(1e-3, f64::min) * 1e-4;
        let mut pts = vec![0.0];
        let mut x = lo;
        while x < 0.5 {
            pts.push(x);
            x *= 2.0;
        }
        pts.push(0.5);
        pts.append(&mut specials);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1e-300));
        pts
    }

    fn integrate_even(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let opts = QuadOptions { abs_tol: 1e-17, rel_tol: 1e-12, max_panels: 2000 };
        let breaks = self.breaks();
        let mut total = NeumaierSum::new();
        for w in breaks.windows(2) {
            let q = integrate(&f, w[0], w[1], opts)?;
            total.add(q.value);
        }
        Ok(2.0 * total.value())
    }

    /// `a_eps(p, lambda)`.
    pub fn a_eps(&self) -> Result<f64> {
        self.integrate_even(|k| self.a_integrand(k))
    }

    /// `int 2 gamma R (f lambda + 2 gamma R) / |D|^2 dk`, the coefficient of
    /// `lambda` in the decomposition of `a_eps`.
    pub fn lambda_part(&self) -> Result<f64> {
        self.integrate_even(|k| self.lambda_integrand(k))
    }

    /// `I_eps(p, lambda)`.
    pub fn i_eps(&self) -> Result<f64> {
        self.integrate_even(|k| self.i_integrand(k))
    }

    /// Imaginary part of the `a_eps` integral over the full torus; vanishes by parity.
    pub fn a_eps_imaginary(&self) -> Result<f64> {
        let im = |k: f64| {
            let d = self.d(k).value;
            let g = 2.0 * self.gamma * r_mean(k);
            -(g / self.f) * (g / d).im
        };
        let breaks = self.breaks();
        let opts = QuadOptions { abs_tol: 1e-17, rel_tol: 1e-12, max_panels: 2000 };
        let pos = integrate_panels(im, &breaks, opts)?.value;
        let neg = integrate_panels(|k| im(-k), &breaks, opts)?.value;
        Ok(pos + neg)
    }
}

pub fn a_eps(params: &ModelParams, eps: f64, p: f64, lambda: f64) -> Result<f64> {
    Resolvent::new(params, eps, p, lambda)?.a_eps()
}

pub fn i_eps(params: &ModelParams, eps: f64, p: f64, lambda: f64) -> Result<f64> {
    Resolvent::new(params, eps, p, lambda)?.i_eps()
}

/// Diffusion coefficient `C_{theta,gamma0}` of the limiting equation.
pub fn c_big(params: &ModelParams) -> Result<f64> {
    params.require_theta_above_two()?;
    let (th, g0) = (params.theta, params.gamma0);
    let c = c_theta(params)?;
    if th <= 3.0 {
        let a = 7.0 - th;
        Ok(24.0 * PI.powi(3) / ((4.0 - th) * PI / a).sin() / a
            * ((th - 1.0) / (24.0 * PI * PI)).powf(6.0 / a)
            * g0.powf(-(th - 1.0) / a)
            * c.powf(3.0 / a))
    } else {
        Ok(6f64.sqrt() / 12.0 * g0.powf(-0.5) * c.powf(0.75))
    }
}

/// The same coefficient through the Levy-measure route, with the
/// `(1 - cos)` integral done by quadrature.
pub fn c_small(params: &ModelParams) -> Result<f64> {
    params.require_theta_above_two()?;
    let (th, g0) = (params.theta, params.gamma0);
    let c = c_theta(params)?;
    if th <= 3.0 {
        let a = 7.0 - th;
        let alpha = 6.0 / a;
        Ok(24.0 * PI * PI / a
            * g0.powf(-(th - 1.0) / a)
            * ((th - 1.0) * c.sqrt() / (24.0 * PI * PI)).powf(alpha)
            * gamma(alpha + 1.0)
            * one_minus_cos_integral(alpha)?)
    } else {
        Ok(3f64.sqrt() / (12.0 * PI) * g0.powf(-0.5) * c.powf(0.75) * gamma(2.5) * one_minus_cos_integral(1.5)?)
    }
}

/// Tail constant `C*(theta)` of `omega' / (2 gamma0 R)` under `pi`.
pub fn c_star(params: &ModelParams) -> Result<f64> {
    params.require_theta_above_two()?;
    let th = params.theta;
    let c = c_theta(params)?;
    if th <= 3.0 {
        Ok(4.0 * PI * PI / 3.0 * ((th - 1.0) * c.sqrt() / (24.0 * PI * PI)).powf(6.0 / (7.0 - th)))
    } else {
        Ok(4.0 * PI * PI / 3.0 * (c.sqrt() / (12.0 * PI * PI)).powf(1.5))
    }
}

/// `int_R (1 - cos y) |y|^{-a-1} dy` for `1 < a < 2`: panels between the
/// zeros of `1 - cos` on `[0, Y]`, `Y = 2 pi * 1591 ~ 1e4`, plus the
/// analytic tail.
pub fn one_minus_cos_integral(a: f64) -> Result<f64> {
    if !(a > 1.0 && a < 2.0) {
        return Err(Error::Domain(format!("exponent must lie in (1, 2), got {a}")));
    }
    let opts = QuadOptions { abs_tol: 1e-18, rel_tol: 1e-14, max_panels: 2000 };
    let beta = 1.0 / (2.0 - a);
    let two_pi = 2.0 * PI;
    // With y = u^beta the integrand becomes beta * 2 (sin(y/2) / y)^2.
    let head = integrate(|u: f64| 0.5 * beta * sinc(0.5 * u.powf(beta)).powi(2), 0.0, two_pi.powf(2.0 - a), opts)?.value;
    let m = 1591;
    let mut acc = NeumaierSum::new();
    acc.add(head);
    for j in 1..m {
        let q = integrate(
            |y: f64| {
                let s = (0.5 * y).sin();
                2.0 * s * s / y.powf(a + 1.0)
            },
            two_pi * j as f64,
            two_pi * (j + 1) as f64,
            opts,
        )?;
        acc.add(q.value);
    }
    let y = two_pi * m as f64;
    let b = a + 1.0;
    let cos_tail = b / y.powf(b + 1.0) - b * (b + 1.0) * (b + 2.0) / y.powf(b + 3.0);
    acc.add(y.powf(-a) / a - cos_tail);
    Ok(2.0 * acc.value())
}

/// `int_R k^2 / (k^4 + 1) |k|^{-tau} dk = pi csc(pi tau / 4 + pi / 4) / 2`.
pub fn residue_integral(tau: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau must lie in [0, 1), got {tau}")));
    }
    Ok(0.5 * PI / (0.25 * PI * tau + 0.25 * PI).sin())
}

/// Quadrature of the residue integral, folding `[1, inf)` onto `[0, 1]`.
pub fn residue_integral_quadrature(tau: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau must lie in [0, 1), got {tau}")));
    }
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-14, max_panels: 4000 };
    let inner = integrate(|k: f64| k.powf(2.0 - tau) / (1.0 + k.powi(4)), 0.0, 1.0, opts)?.value;
    let outer = integrate(|u: f64| u.powf(tau) / (1.0 + u.powi(4)), 0.0, 1.0, opts)?.value;
    Ok(2.0 * (inner + outer))
}

/// `int_0^inf sin(y) y^{-a} dy = cos(a pi / 2) Gamma(1 - a)` for `1 < a < 2`.
pub fn sine_integral(a: f64) -> Result<f64> {
    if !(a > 1.0 && a < 2.0) {
        return Err(Error::Domain(format!("exponent must lie in (1, 2), got {a}")));
    }
    Ok((0.5 * a * PI).cos() * gamma(1.0 - a))
}

/// Oscillatory quadrature of [`sine_integral`]: integration between
/// consecutive zeros of `sin` and Wynn acceleration of the alternating sums.
pub fn sine_integral_quadrature(a: f64) -> Result<f64> {
    if !(a > 1.0 && a < 2.0) {
        return Err(Error::Domain(format!("exponent must lie in (1, 2), got {a}")));
    }
    let opts = QuadOptions { abs_tol: 1e-16, rel_tol: 1e-14, max_panels: 2000 };
    let beta = 1.0 / (2.0 - a);
    let head = integrate(|u: f64| beta * sinc(u.powf(beta)), 0.0, PI.powf(2.0 - a), opts)?.value;
    let mut partial = Vec::with_capacity(40);
    let mut s = head;
    partial.push(s);
    for j in 1..40 {
        let q = integrate(|y: f64| y.sin() / y.powf(a), PI * j as f64, PI * (j + 1) as f64, opts)?;
        s += q.value;
        partial.push(s);
    }
    Ok(wynn_epsilon(&partial))
}

/// csc of the constant-form argument `(4 - theta) pi / (7 - theta)` and of the
/// resolvent-form argument `3 pi (3 - theta) / (4 (7 - theta)) + pi / 4`.
pub fn csc_arguments(theta: f64) -> (f64, f64) {
    let a = 7.0 - theta;
    let t = 1.0 / ((4.0 - theta) * PI / a).sin();
    let r = 1.0 / (3.0 * PI * (3.0 - theta) / (4.0 * a) + 0.25 * PI).sin();
    (t, r)
}

/// One row of a resolvent sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub gamma0: f64,
    pub s: f64,
    pub eps: f64,
    pub p: f64,
    pub lambda: f64,
    pub a_eps: f64,
    pub i_eps: f64,
    pub limit: f64,
    pub rel_error: f64,
}

/// Evaluates `a_eps` and `I_eps` along `eps_values`; `limit = lambda + C |p|^alpha`
/// and `rel_error = |a_eps - limit| / (C |p|^alpha)`.
pub fn sweep(params: &ModelParams, eps_values: &[f64], p: f64, lambda: f64) -> Result<Vec<SweepRow>> {
    let kappa = c_big(params)?;
    let target = kappa * p.abs().powf(stable_index(params.theta));
    eps_values
        .iter()
        .map(|&eps| {
            let r = Resolvent::new(params, eps, p, lambda)?;
            let a = r.a_eps()?;
            let i = r.i_eps()?;
            Ok(SweepRow {
                theta: params.theta,
                gamma0: params.gamma0,
                s: params.s,
                eps,
                p,
                lambda,
                a_eps: a,
                i_eps: i,
                limit: lambda + target,
                rel_error: (a - lambda - target).abs() / target,
            })
        })
        .collect()
}
