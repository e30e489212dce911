//! Spectral solver for `d_t W = -kappa |p|^alpha W` on a periodic interval.
//!
//! Fields are stored by their transform `W~(p) = int e^{-2 pi i p y} W(y) dy`
//! at `p_j = j / L`, `j = -n/2 .. n/2 - 1`, and reconstructed as
//! `W(y) = (1/L) sum_j W~(p_j) e^{2 pi i p_j y}`.
//!
//! Conventions for `kappa`:
//! - the macroscopic energy equation uses `kappa = C` (see [`macroscopic_kappa`]);
//! - the law of the rescaled flight `Z(Nt)/N(theta)` has
//!   `E e^{i u X} = exp(-C |u|^alpha t)`. With `u = 2 pi p` this becomes
//!   `kappa = (2 pi)^alpha C`; see [`crate::kinetic_mc::flight_kappa`].

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dispersion::ModelParams;
use crate::error::{Error, Result};
use crate::output::{fmt_f64, write_csv_file, write_json_file, Metadata};
use crate::resolvent::{c_big, stable_index};

/// Tail level at the Nyquist wavenumber above which aliasing is reported.
pub const ALIAS_TOL: f64 = 1e-10;

/// `kappa = C` for the macroscopic energy equation.
pub fn macroscopic_kappa(params: &ModelParams) -> Result<f64> {
    c_big(params)
}

/// Metadata block of a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub domain_length: f64,
    pub n_modes: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub time: f64,
}

/// Fourier representation of a real field evolving under the stable semigroup.
#[derive(Debug, Clone, PartialEq)]
pub struct FracField {
    pub domain_length: f64,
    pub n_modes: usize,
    /// Coefficients at time 0.
    initial: Vec<Complex64>,
    pub time: f64,
    pub alpha: f64,
    pub kappa: f64,
}

impl FracField {
    /// Builds a field from its transform evaluated at the grid wavenumbers.
    pub fn from_spectrum(
        domain_length: f64,
        n_modes: usize,
        alpha: f64,
        kappa: f64,
        spectrum: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        if !(domain_length > 0.0) || n_modes < 2 || !n_modes.is_power_of_two() {
            return Err(Error::Domain(format!("need L > 0 and a power-of-two mode count, got L = {domain_length}, n = {n_modes}")));
        }
        if !(alpha > 0.0 && alpha <= 2.0) || !(kappa > 0.0) {
            return Err(Error::Domain(format!("need 0 < alpha <= 2 and kappa > 0, got {alpha}, {kappa}")));
        }
        let initial = (0..n_modes).map(|i| spectrum(Self::wavenumber_of(domain_length, n_modes, i))).collect();
        Ok(Self { domain_length, n_modes, initial, time: 0.0, alpha, kappa })
    }

    /// Builds a field from samples at `y_m = -L/2 + m L/n` (rectangle rule).
    pub fn from_samples(domain_length: f64, values: &[f64], alpha: f64, kappa: f64) -> Result<Self> {
        let n = values.len();
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n.max(1)).process(&mut buf);
        let dy = domain_length / n as f64;
        // Sample m sits at y_m = -L/2 + m dy, so the DFT picks up e^{i pi j}.
        Self::from_spectrum(domain_length, n, alpha, kappa, |p| {
            let j = (p * domain_length).round() as i64;
            let idx = j.rem_euclid(n as i64) as usize;
            let shift = if j % 2 == 0 { 1.0 } else { -1.0 };
            buf[idx] * dy * shift
        })
    }

    /// Field of the macroscopic equation for `params`.
    pub fn for_params(params: &ModelParams, domain_length: f64, n_modes: usize, spectrum: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::from_spectrum(domain_length, n_modes, stable_index(params.theta), macroscopic_kappa(params)?, spectrum)
    }

    fn wavenumber_of(l: f64, n: usize, i: usize) -> f64 {
        (i as f64 - (n / 2) as f64) / l
    }

    /// `p_j` for storage index `i` (`j = i - n/2`).
    pub fn wavenumber(&self, i: usize) -> f64 {
        Self::wavenumber_of(self.domain_length, self.n_modes, i)
    }

    fn decay(&self, p: f64, t: f64) -> f64 {
        (-self.kappa * p.abs().powf(self.alpha) * t).exp()
    }

    /// Coefficients at the current time.
    pub fn coeffs(&self) -> Vec<Complex64> {
        self.initial.iter().enumerate().map(|(i, c)| c * self.decay(self.wavenumber(i), self.time)).collect()
    }

    pub fn initial_coeffs(&self) -> &[Complex64] {
        &self.initial
    }

    /// Advances by `dt`. Coefficients are always recomputed from time 0, so
    /// evolving by `a` then `b` matches evolving by `a + b`.
    pub fn evolve(&self, dt: f64) -> Result<Self> {
        if !(dt >= 0.0) {
            return Err(Error::Domain(format!("dt must be nonnegative, got {dt}")));
        }
        Ok(Self { time: self.time + dt, ..self.clone() })
    }

    /// `int W dy`.
    pub fn mass(&self) -> f64 {
        self.coeffs()[self.n_modes / 2].re
    }

    /// `|W~_0|` at the Nyquist wavenumber `-n/(2L)`.
    pub fn nyquist_tail(&self) -> f64 {
        self.initial[0].norm()
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            domain_length: self.domain_length,
            n_modes: self.n_modes,
            alpha: self.alpha,
            kappa: self.kappa,
            time: self.time,
        }
    }

    /// Evaluates the field at arbitrary points of `[-L/2, L/2)`.
    pub fn to_real_space(&self, y_grid: &[f64]) -> Result<Vec<f64>> {
        let tail = self.nyquist_tail();
        if tail > ALIAS_TOL {
            return Err(Error::AliasWarning { tail });
        }
        let half = 0.5 * self.domain_length;
        if let Some(&y) = y_grid.iter().find(|&&y| !(y >= -half && y < half)) {
            return Err(Error::Domain(format!("y = {y} lies outside [-L/2, L/2)")));
        }
        let c = self.coeffs();
        let scale: f64 = c.iter().map(|z| z.norm()).sum::<f64>() / self.domain_length;
        y_grid
            .iter()
            .map(|&y| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, z) in c.iter().enumerate() {
                    acc += z * Complex64::from_polar(1.0, 2.0 * PI * self.wavenumber(i) * y);
                }
                acc /= self.domain_length;
                // The unpaired Nyquist mode contributes an imaginary part of
                // at most its own size, already below ALIAS_TOL.
                if acc.im.abs() > 1e-12 * scale.max(1.0) + tail / self.domain_length {
                    return Err(Error::CheckFailure(format!("imaginary residue {:e} at y = {y}", acc.im)));
                }
                Ok(acc.re)
            })
            .collect()
    }

    /// Values on the native grid `y_m = -L/2 + m L/n` by one inverse FFT.
    pub fn to_native_grid(&self) -> Result<Profile> {
        let tail = self.nyquist_tail();
        if tail > ALIAS_TOL {
            return Err(Error::AliasWarning { tail });
        }
        let n = self.n_modes;
        let c = self.coeffs();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (i, z) in c.iter().enumerate() {
            let j = i as i64 - (n / 2) as i64;
            let shift = if j % 2 == 0 { 1.0 } else { -1.0 };
            buf[j.rem_euclid(n as i64) as usize] = z * shift;
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let dy = self.domain_length / n as f64;
        let y = (0..n).map(|m| -0.5 * self.domain_length + m as f64 * dy).collect();
        let w = buf.iter().map(|z| z.re / self.domain_length).collect();
        Ok(Profile { y, w })
    }

    /// Writes `(y, W)` as CSV under `meta` plus a `field:` line, and the field
    /// metadata as JSON next to it.
    pub fn write_profile(&self, profile: &Profile, meta: &Metadata, csv_path: &Path, json_path: &Path) -> Result<()> {
        let meta = meta.clone().with("field", serde_json::to_string(&self.info())?);
        let rows: Vec<Vec<String>> = profile.y.iter().zip(&profile.w).map(|(y, w)| vec![fmt_f64(*y), fmt_f64(*w)]).collect();
        write_csv_file(csv_path, &meta, &["y", "W"], &rows)?;
        write_json_file(json_path, &self.info())
    }
}

/// A real field sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl Profile {
    pub fn spacing(&self) -> f64 {
        if self.y.len() > 1 {
            self.y[1] - self.y[0]
        } else {
            1.0
        }
    }

    pub fn norm(&self) -> f64 {
        (self.w.iter().map(|v| v * v).sum::<f64>() * self.spacing()).sqrt()
    }
}

/// `sqrt(sum (a - b)^2 dy)`.
pub fn compare_l2(a: &Profile, b: &Profile) -> Result<f64> {
    if a.y != b.y || a.w.len() != b.w.len() || a.w.len() != a.y.len() {
        return Err(Error::GridMismatch);
    }
    Ok((a.w.iter().zip(&b.w).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * a.spacing()).sqrt())
}

/// Transform of a centred Gaussian of variance `var` and unit mass.
pub fn gaussian_spectrum(var: f64) -> impl Fn(f64) -> Complex64 {
    move |p| Complex64::new((-2.0 * PI * PI * var * p * p).exp(), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_field(alpha: f64) -> FracField {
        FracField::from_spectrum(40.0, 512, alpha, 0.7, gaussian_spectrum(0.5)).unwrap()
    }

    #[test]
    fn zero_step_is_identity_and_mass_is_kept() {
        let f = gaussian_field(1.5);
        assert_eq!(f.evolve(0.0).unwrap().coeffs(), f.coeffs());
        let g = f.evolve(3.0).unwrap();
        assert_eq!(g.mass(), f.mass());
    }

    #[test]
    fn semigroup_is_bit_exact() {
        let f = gaussian_field(1.2);
        let a = f.evolve(0.25).unwrap().evolve(0.5).unwrap();
        let b = f.evolve(0.75).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
    }

    #[test]
    fn single_mode_is_constant_field() {
        let f = FracField::from_spectrum(8.0, 16, 1.5, 1.0, |p| Complex64::new(if p == 0.0 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let v = f.to_real_space(&[-4.0, 0.0, 3.9]).unwrap();
        assert!(v.iter().all(|x| (x - 0.125).abs() < 1e-15));
    }

    #[test]
    fn aliasing_is_reported() {
        let f = FracField::from_spectrum(8.0, 16, 1.5, 1.0, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(f.to_real_space(&[0.0]), Err(Error::AliasWarning { .. })));
    }

    #[test]
    fn samples_round_trip() {
        let f = gaussian_field(2.0);
        let prof = f.to_native_grid().unwrap();
        let g = FracField::from_samples(40.0, &prof.w, 2.0, 0.7).unwrap();
        for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        let direct = f.to_real_space(&prof.y[..8]).unwrap();
        for (a, b) in direct.iter().zip(&prof.w) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn compare_l2_properties() {
        let f = gaussian_field(1.5).to_native_grid().unwrap();
        assert_eq!(compare_l2(&f, &f).unwrap(), 0.0);
        let twice = Profile { y: f.y.clone(), w: f.w.iter().map(|v| 2.0 * v).collect() };
        assert!((compare_l2(&twice, &f).unwrap() - f.norm()).abs() < 1e-14);
        let short = Profile { y: f.y[..4].to_vec(), w: f.w[..4].to_vec() };
        assert_eq!(compare_l2(&short, &f), Err(Error::GridMismatch));
    }

    #[test]
    fn symmetric_data_stays_symmetric() {
        let f = gaussian_field(1.3).evolve(2.0).unwrap();
        let v = f.to_real_space(&[-1.7, 1.7]).unwrap();
        assert!((v[0] - v[1]).abs() < 1e-12);
    }
}
