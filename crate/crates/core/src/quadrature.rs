//! Adaptive Gauss–Kronrod quadrature (10-point Gauss, 21-point Kronrod)
//! with global interval subdivision and maps for improper ranges.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600142412523,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Values the quadrature can accumulate.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: DEFAULT_TOL, rel_tol: 0.0, max_intervals: 2000 }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }

    pub fn rel(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn budget(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }
}

/// Result of a quadrature: value, error estimate, ∫|f| and evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub abs_integral: f64,
    pub evaluations: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    abs: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Segment<T> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[10];
    let mut resg = T::default();
    let mut resabs = fc.magnitude() * WGK[10];
    let mut fv = [T::default(); 21];
    fv[10] = fc;
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[j] = f1;
        fv[20 - j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).magnitude() + (fv[20 - j] - mean).magnitude());
    }
    let hh = h.abs();
    let value = resk * h;
    let resabs = resabs * hh;
    let resasc = resasc * hh;
    let mut err = ((resk - resg) * h).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < floor {
        err = floor;
    }
    Segment { a, b, value, error: err, abs: resabs }
}

/// Integrate `f` over the finite interval [a, b].
pub fn integrate_finite<T, F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("finite interval expected, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral { value: T::default(), error: 0.0, abs_integral: 0.0, evaluations: 0 });
    }
    let first = gk21(&mut f, a, b);
    let mut evaluations = 21;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * value.magnitude());
        if !value.finite() || !error.is_finite() {
            return Err(Error::NonConvergence { estimate: f64::INFINITY, intervals: heap.len() });
        }
        if error <= target {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::NonConvergence { estimate: error, intervals: heap.len() });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval can no longer be split in floating point.
            return Err(Error::NonConvergence { estimate: error, intervals: heap.len() + 1 });
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to remove drift from the running updates.
    let mut v = T::default();
    let mut e = 0.0;
    let mut s = 0.0;
    for seg in heap.iter() {
        v = v + seg.value;
        e += seg.error;
        s += seg.abs;
    }
    Ok(Integral { value: v, error: e, abs_integral: s, evaluations })
}

/// Integrate over [a, ∞) through x = a + t/(1−t).
pub fn integrate_upper<T, F>(mut f: F, a: f64, cfg: &QuadConfig) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_finite(
        |t: f64| {
            if t >= 1.0 {
                return T::default();
            }
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            if v.magnitude() == 0.0 {
                v
            } else {
                v * (1.0 / (s * s))
            }
        },
        0.0,
        1.0,
        cfg,
    )
}

/// Integrate over (−∞, ∞) through x = t/(1−t²).
pub fn integrate_line<T, F>(mut f: F, cfg: &QuadConfig) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_finite(
        |t: f64| {
            let s = 1.0 - t * t;
            if s <= 0.0 {
                return T::default();
            }
            let x = t / s;
            let v = f(x);
            if v.magnitude() == 0.0 {
                v
            } else {
                v * ((1.0 + t * t) / (s * s))
            }
        },
        -1.0,
        1.0,
        cfg,
    )
}

/// Complex-valued convenience wrapper.
pub fn integrate_complex<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Integral<Complex64>>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_finite(f, a, b, cfg)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                let jf = j as f64;
                p0 = ((2.0 * jf + 1.0) * z * p1 - jf * p2) / (jf + 1.0);
            }
            dp = nf * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate_finite(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, &QuadConfig::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn upper_exponential() {
        let r = integrate_upper(|x: f64| (-x).exp(), 0.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn line_gaussian() {
        let r = integrate_line(|x: f64| (-x * x).exp(), &QuadConfig::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate_finite(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn divergent_reports_nonconvergence() {
        let r = integrate_finite(|x: f64| 1.0 / (x * x), 0.0, 1.0, &QuadConfig::default());
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn complex_oscillatory() {
        let r = integrate_complex(
            |x: f64| Complex64::new(0.0, 5.0 * x).exp(),
            0.0,
            1.0,
            &QuadConfig::default(),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, 5.0).exp() - 1.0) / Complex64::new(0.0, 5.0);
        assert!((r.value - exact).norm() < 1e-12);
        assert!(r.abs_integral > 0.99 && r.abs_integral < 1.01);
    }

    #[test]
    fn gauss_legendre_moments() {
        let (x, w) = gauss_legendre(20);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((m - 2.0 / 39.0).abs() < 1e-14);
    }
}
