//! Scattering data of the momentum-exchange noise and the jump operator.
//!
//! The pair kernel has rank two, `R(k,k') = 3/4 (e1(k) e2(k') + e2(k) e1(k'))`,
//! with `int e_i = 1`, which gives an O(n) jump operator on grids.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;

#[inline]
fn sin2(x: f64) -> f64 {
    let s = x.sin();
    s * s
}

/// Scattering amplitude `r(k,k') = 2 sin^2(pi k) sin 2pi(k-k') + 2 sin(2 pi k) sin^2 pi(k-k')`.
#[inline]
pub fn r_kernel(k: f64, kp: f64) -> f64 {
    let d = k - kp;
    2.0 * sin2(PI * k) * (2.0 * PI * d).sin() + 2.0 * (2.0 * PI * k).sin() * sin2(PI * d)
}

/// Pair kernel `R(k,k') = (r(k,k+k')^2 + r(k,k-k')^2) / 2`.
#[inline]
pub fn r_pair(k: f64, kp: f64) -> f64 {
    let a = r_kernel(k, k + kp);
    let b = r_kernel(k, k - kp);
    0.5 * (a * a + b * b)
}

/// Mean scattering rate `R(k) = 2 sin^4(pi k) + 3/2 sin^2(2 pi k)`.
#[inline]
pub fn r_mean(k: f64) -> f64 {
    let s = sin2(PI * k);
    2.0 * s * s + 1.5 * sin2(2.0 * PI * k)
}

#[inline]
pub fn e1(k: f64) -> f64 {
    let s = sin2(PI * k);
    8.0 / 3.0 * s * s
}

#[inline]
pub fn e2(k: f64) -> f64 {
    2.0 * sin2(2.0 * PI * k)
}

/// `e_i(k)` for `i` in {1, 2}.
pub fn e_basis(i: u8, k: f64) -> Result<f64> {
    match i {
        1 => Ok(e1(k)),
        2 => Ok(e2(k)),
        _ => Err(Error::Domain(format!("basis index must be 1 or 2, got {i}"))),
    }
}

/// Rank-two form `3/4 (e1(k) e2(k') + e2(k) e1(k'))`.
#[inline]
pub fn r_pair_rank2(k: f64, kp: f64) -> f64 {
    0.75 * (e1(k) * e2(kp) + e2(k) * e1(kp))
}

/// `R(k,k',p) = 1/2 sum_{i=+-} r(k+p/2, k+i k') r(k-p/2, k+i k')`.
pub fn r_p_kernel(k: f64, kp: f64, p: f64) -> f64 {
    let (a, b) = (k + 0.5 * p, k - 0.5 * p);
    0.5 * (r_kernel(a, k + kp) * r_kernel(b, k + kp) + r_kernel(a, k - kp) * r_kernel(b, k - kp))
}

/// Factorised form of [`r_p_kernel`].
pub fn r_p_kernel_product(k: f64, kp: f64, p: f64) -> f64 {
    let h = sin2(0.5 * PI * p);
    8.0 * (sin2(PI * k) - h) * (sin2(PI * kp) - h) * (sin2(PI * (k + kp)) + sin2(PI * (k - kp)) - 2.0 * sin2(PI * p))
}

/// Values on the uniform torus grid `k_j = -1/2 + j/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::Domain(format!("grid size must be even and at least 4, got {n}")));
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new((0..n).map(|j| f(grid_point(n, j))).collect())
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn k(&self, j: usize) -> f64 {
        grid_point(self.n(), j)
    }

    /// Rectangle rule `(1/n) sum_j f_j`.
    pub fn integral(&self) -> Complex64 {
        let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
        for v in &self.values {
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.value(), im.value()) / self.n() as f64
    }

    /// `<g, f> = int g(k) f(k) dk` for a real weight `g`.
    pub fn weighted_integral(&self, g: impl Fn(f64) -> f64) -> Complex64 {
        let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
        for (j, v) in self.values.iter().enumerate() {
            let w = g(self.k(j));
            re.add(w * v.re);
            im.add(w * v.im);
        }
        Complex64::new(re.value(), im.value()) / self.n() as f64
    }

    /// `int conj(f) g dk`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        if self.n() != other.n() {
            return Err(Error::GridMismatch);
        }
        let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
        for (a, b) in self.values.iter().zip(&other.values) {
            let z = a.conj() * b;
            re.add(z.re);
            im.add(z.im);
        }
        Ok(Complex64::new(re.value(), im.value()) / self.n() as f64)
    }
}

#[inline]
pub fn grid_point(n: usize, j: usize) -> f64 {
    -0.5 + j as f64 / n as f64
}

/// Jump operator `(L f)(k) = 2 int R(k,k') (f(k') - f(k)) dk'` via the rank-two form.
pub fn l_apply(f: &GridFunction) -> GridFunction {
    let m1 = f.weighted_integral(e1);
    let m2 = f.weighted_integral(e2);
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let k = f.k(j);
            1.5 * (e1(k) * m2 + e2(k) * m1) - 2.0 * r_mean(k) * v
        })
        .collect();
    GridFunction { values }
}

/// O(n^2) double-sum evaluation of the jump operator.
pub fn l_apply_dense(f: &GridFunction) -> GridFunction {
    let n = f.n();
    let values = (0..n)
        .map(|j| {
            let k = f.k(j);
            let (mut re, mut im) = (NeumaierSum::new(), NeumaierSum::new());
            for jp in 0..n {
                let w = r_pair(k, f.k(jp));
                let d = f.values[jp] - f.values[j];
                re.add(w * d.re);
                im.add(w * d.im);
            }
            Complex64::new(re.value(), im.value()) * (2.0 / n as f64)
        })
        .collect();
    GridFunction { values }
}

/// Dirichlet form `int conj(f) (-L f) dk`.
pub fn dirichlet_form(f: &GridFunction) -> f64 {
    let lf = l_apply(f);
    -f.inner(&lf).expect("same grid").re
}

/// Dirichlet form as the double integral `int int R(k,k') |f(k) - f(k')|^2`.
pub fn dirichlet_form_double(f: &GridFunction) -> f64 {
    let n = f.n();
    let mut acc = NeumaierSum::new();
    for j in 0..n {
        for jp in 0..n {
            acc.add(r_pair(f.k(j), f.k(jp)) * (f.values[j] - f.values[jp]).norm_sqr());
        }
    }
    acc.value() / (n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_zeros_and_quarter_value() {
        assert_eq!(r_kernel(0.0, 0.3), 0.0);
        assert_eq!(r_kernel(0.2, 0.2), 0.0);
        assert!((r_kernel(0.25, 0.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mean_rate_values() {
        assert_eq!(r_mean(0.0), 0.0);
        assert!((r_mean(0.5) - 2.0).abs() < 1e-15);
        assert!((r_mean(0.25) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn basis_values_and_parity() {
        assert!((e1(0.25) - 2.0 / 3.0).abs() < 1e-15);
        assert!((e2(0.25) - 2.0).abs() < 1e-15);
        assert_eq!(e1(0.1), e1(-0.1));
        assert!(e_basis(3, 0.1).is_err());
    }

    #[test]
    fn product_form_vanishes_on_its_zero_set() {
        let p = 0.3;
        assert!(r_p_kernel_product(0.5 * p, 0.2, p).abs() < 1e-15);
        assert!(r_p_kernel(0.5 * p, 0.2, p).abs() < 1e-14);
    }

    #[test]
    fn jump_operator_kills_constants() {
        let f = GridFunction::from_real(&vec![3.0; 64]).unwrap();
        assert!(l_apply(&f).values().iter().all(|v| v.norm() < 1e-14));
        assert!(dirichlet_form(&f).abs() < 1e-14);
    }

    #[test]
    fn grid_size_validation() {
        assert!(GridFunction::from_real(&[1.0, 2.0]).is_err());
        assert!(GridFunction::from_real(&[1.0; 5]).is_err());
    }

    #[test]
    fn small_k_rate_is_six_pi_squared() {
        let k = 2f64.powi(-16);
        assert!((r_mean(k) / (k * k) / (6.0 * PI * PI) - 1.0).abs() < 0.01);
    }
}
