//! Shared numerical building blocks: compensated summation, adaptive
//! Gauss–Kronrod quadrature, Wynn's epsilon acceleration, the Riemann zeta
//! function on the real line, root bracketing and least squares.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Reduces a wavenumber into the torus `[-1/2, 1/2)`.
#[inline]
pub fn wrap_torus(k: f64) -> f64 {
    let r = k - (k + 0.5).floor();
    if r >= 0.5 {
        r - 1.0
    } else {
        r
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn sum_compensated(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = NeumaierSum::new();
    for x in xs {
        s.add(x);
    }
    s.value()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel; returns (Kronrod estimate, |K - G|).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        rk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            rg += WG[j / 2] * (f1 + f2);
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_panels: 4000,
        }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

/// Globally adaptive G7–K15 quadrature of `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    let mut total = v;
    let mut err = e;
    let mut evals = 15;
    heap.push(Panel { a, b, value: v, error: e });
    loop {
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            break;
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::QuadratureFailure { error: err });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Interval exhausted at machine precision; accept its estimate.
            heap.push(Panel { error: 0.0, ..worst });
            err -= worst.error;
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.a, m);
        let (v2, e2) = gk15(&mut f, m, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: worst.b, value: v2, error: e2 });
    }
    // Re-add panel values to shed the drift accumulated in `total`.
    let value = sum_compensated(heap.iter().map(|p| p.value));
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Quadrature { value, error, evaluations: evals })
}

/// Integrates over consecutive panels `[breaks[i], breaks[i+1]]`, each adaptively.
pub fn integrate_panels<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], opts: QuadOptions) -> Result<Quadrature> {
    let mut value = NeumaierSum::new();
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let q = integrate(&mut f, w[0], w[1], opts)?;
        value.add(q.value);
        error += q.error;
        evaluations += q.evaluations;
    }
    Ok(Quadrature { value: value.value(), error, evaluations })
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns
/// the accelerated limit estimate.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return *partial_sums.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = cur[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let v = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(v);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                } else {
                    break;
                }
            }
        }
        if cur.iter().any(|v| !v.is_finite()) {
            break;
        }
    }
    best
}

const BERNOULLI_2J: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

/// Euler–Maclaurin evaluation of zeta, valid for s >= 1/2, s != 1.
fn zeta_em(s: f64) -> f64 {
    if s > 40.0 {
        let mut acc = 1.0;
        let mut n = 2.0_f64;
        loop {
            let t = n.powf(-s);
            acc += t;
            if t < 1e-18 {
                return acc;
            }
            n += 1.0;
        }
    }
    const N: usize = 32;
    let nf = N as f64;
    let mut acc = NeumaierSum::new();
    for n in (1..N).rev() {
        acc.add((n as f64).powf(-s));
    }
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));
    // Terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}.
    let mut poch = s;
    let mut fact = 2.0;
    let mut npow = nf.powf(-s - 1.0);
    for (j, b) in BERNOULLI_2J.iter().enumerate() {
        let term = b / fact * poch * npow;
        acc.add(term);
        let m = 2.0 * (j as f64 + 1.0);
        poch *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        npow /= nf * nf;
    }
    acc.value()
}

/// Hurwitz zeta `sum_{j>=0} (a + j)^{-s}` for `s > 1`, `a > 0`, by
/// Euler-Maclaurin after 32 explicit terms.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !(a > 0.0) {
        return Err(Error::Domain(format!("hurwitz zeta needs s > 1 and a > 0, got s = {s}, a = {a}")));
    }
    const M: usize = 32;
    let mut acc = NeumaierSum::new();
    for j in (0..M).rev() {
        acc.add((a + j as f64).powf(-s));
    }
    let b = a + M as f64;
    acc.add(b.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * b.powf(-s));
    let mut poch = s;
    let mut fact = 2.0;
    let mut bpow = b.powf(-s - 1.0);
    let mut last = f64::INFINITY;
    for (j, c) in BERNOULLI_2J.iter().enumerate() {
        let term = c / fact * poch * bpow;
        acc.add(term);
        last = term.abs();
        let m = 2.0 * (j as f64 + 1.0);
        poch *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        bpow /= b * b;
    }
    let value = acc.value();
    if last > 1e-15 * value.abs() {
        return Err(Error::NonConvergence { tol: 1e-15, max_terms: BERNOULLI_2J.len() });
    }
    Ok(value)
}

/// Returns `(ln|zeta(s)|, sign(zeta(s)))`; usable where zeta itself would
/// overflow (large negative s).
pub fn ln_zeta_signed(s: f64) -> (f64, f64) {
    if s == 0.0 {
        return ((0.5f64).ln(), -1.0);
    }
    if s < 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if s >= 0.5 {
        let z = zeta_em(s);
        return (z.abs().ln(), z.signum());
    }
    let sn = (0.5 * PI * s).sin();
    let z1 = zeta_em(1.0 - s);
    let ln = s * 2f64.ln() + (s - 1.0) * PI.ln() + sn.abs().ln() + ln_gamma(1.0 - s) + z1.abs().ln();
    (ln, sn.signum() * z1.signum())
}

/// Riemann zeta on the real line (s != 1).
pub fn zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    let (ln, sign) = ln_zeta_signed(s);
    if sign == 0.0 {
        0.0
    } else if s >= 0.5 {
        zeta_em(s)
    } else {
        sign * ln.exp()
    }
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64, max_iter: usize) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain(format!("no sign change on [{lo:e}, {hi:e}]")));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo) <= rel_tol * hi.abs().max(lo.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ordinary least-squares line fit.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_stderr: f64,
    pub n_points: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len();
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    let slope_stderr = if n > 2 { (sse / (nf - 2.0) / sxx).sqrt() } else { f64::NAN };
    LinearFit { slope, intercept, r_squared, slope_stderr, n_points: n }
}
