//! Special functions: complex sinc, |Γ| at half-integer-plus-imaginary
//! arguments, associated conical functions and spherical harmonics.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate_finite, QuadConfig, QuadValue};

/// sin(w)/w with the removable singularity filled in.
pub fn csinc(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        let w2 = w * w;
        // 1 − w²/6 + w⁴/120 − w⁶/5040
        Complex64::new(1.0, 0.0) - w2 / 6.0 * (Complex64::new(1.0, 0.0) - w2 / 20.0 * (Complex64::new(1.0, 0.0) - w2 / 42.0))
    } else {
        w.sin() / w
    }
}

/// Real sinc, sin(x)/x.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// |Γ(1/2 + |m_z| + iΛ)|.
///
/// Uses |Γ(1/2 + iΛ)|² = π / cosh(πΛ) and |Γ(s+1)| = |s| |Γ(s)|.
#[allow(non_snake_case)]
pub fn gamma_abs(m_z: i32, Lambda: f64) -> f64 {
    let y = Lambda.abs();
    let e = (-PI * y).exp();
    let mut g = (2.0 * PI * e / (1.0 + e * e)).sqrt();
    for k in 0..m_z.unsigned_abs() {
        g *= (k as f64 + 0.5).hypot(y);
    }
    g
}

/// Order and degree of an associated conical function P^{−|m_z|}_{−1/2+iΛ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicalOrder {
    pub m_z: i32,
    /// Λ ≥ 0, the imaginary part of the degree −1/2 + iΛ.
    pub cap_lambda: f64,
}

impl ConicalOrder {
    pub fn new(m_z: i32, cap_lambda: f64) -> Result<Self> {
        if !(cap_lambda >= 0.0 && cap_lambda.is_finite()) {
            return Err(Error::Domain(format!("Λ must be finite and ≥ 0, got {cap_lambda}")));
        }
        if m_z.unsigned_abs() > 50 {
            return Err(Error::Domain(format!("|m_z| ≤ 50 required, got {m_z}")));
        }
        Ok(Self { m_z, cap_lambda })
    }

    pub fn mu(&self) -> u32 {
        self.m_z.unsigned_abs()
    }
}

/// Relative accuracy target for conical evaluations.
pub const CONICAL_RTOL: f64 = 1e-10;

/// Absolute accuracy floor relative to the integrand envelope, reached near zeros.
const ENVELOPE_FLOOR: f64 = 1e-12;

/// Crossover between the hypergeometric series and the integral.
const SERIES_CROSSOVER: f64 = 1.5;

fn ln_gamma_half_int(mu: u32) -> f64 {
    // ln Γ(μ + 1/2)
    let mut s = 0.5 * PI.ln();
    for k in 0..mu {
        s += (k as f64 + 0.5).ln();
    }
    s
}

fn ln_factorial(mu: u32) -> f64 {
    (1..=mu).map(|k| (k as f64).ln()).sum()
}

struct Evaluated<T> {
    value: T,
    error: f64,
    scale: f64,
}

fn series<T: ConicalScalar>(order: &ConicalOrder, x: f64) -> Evaluated<T> {
    let mu = order.mu();
    let muf = mu as f64;
    let z = (1.0 - x) / 2.0;
    let pref = (muf / 2.0 * ((x - 1.0) / (x + 1.0)).ln() - ln_factorial(mu)).exp();
    let mut term = T::one();
    let mut sum = T::one();
    let mut abs_sum = 1.0;
    let mut k = 0u32;
    loop {
        let kf = k as f64;
        term = term * T::pochhammer_pair(kf, order.cap_lambda) * (z / ((kf + 1.0) * (kf + 1.0 + muf)));
        sum = sum + term;
        let t = term.magnitude();
        abs_sum += t;
        k += 1;
        if (t <= 1e-17 * sum.magnitude() && kf > order.cap_lambda) || k > 5000 {
            break;
        }
    }
    Evaluated {
        value: sum * pref,
        error: 4.0 * f64::EPSILON * abs_sum * pref * (k as f64).sqrt(),
        scale: abs_sum * pref,
    }
}

fn integral<T: ConicalScalar>(order: &ConicalOrder, x: f64) -> Result<Evaluated<T>> {
    let mu = order.mu() as i32;
    let xi = x.acosh();
    let sh = xi.sinh();
    let lam = order.cap_lambda;
    // cosh ξ − cosh t = 2 sinh((ξ+t)/2) sinh((ξ−t)/2), t = ξ(1−s²)
    let envelope = |s: f64| -> f64 {
        if s <= 0.0 {
            // limit 2ξ s / sqrt(ξ s² · sinh ξ) as s → 0
            return if mu == 0 { 2.0 * (xi / sh).sqrt() } else { 0.0 };
        }
        let t = xi * (1.0 - s * s);
        let d = 2.0 * (0.5 * (xi + t)).sinh() * (0.5 * xi * s * s).sinh();
        (d / sh).powi(mu) * 2.0 * xi * s / d.sqrt()
    };
    let pref = ((2.0 / PI).ln() * 0.5 - ln_gamma_half_int(order.mu())).exp();
    let scale_cfg = QuadConfig::with_tol(0.0).rel(1e-6).budget(200);
    let scale = integrate_finite(envelope, 0.0, 1.0, &scale_cfg)?.value;
    let integrand = |s: f64| T::cos_kernel(lam, xi * (1.0 - s * s)) * envelope(s);
    let mut r = integrate_finite(integrand, 0.0, 1.0, &QuadConfig::with_tol(1e-13 * scale).budget(4000))?;
    // strong cancellation: tighten against the value itself
    for _ in 0..2 {
        let target = 0.5 * (CONICAL_RTOL * r.value.magnitude()).max(ENVELOPE_FLOOR * scale);
        if r.error <= target {
            break;
        }
        match integrate_finite(integrand, 0.0, 1.0, &QuadConfig::with_tol(target).budget(20000)) {
            Ok(better) => r = better,
            Err(_) => break,
        }
    }
    Ok(Evaluated { value: r.value * pref, error: r.error * pref, scale: scale * pref })
}

fn evaluate<T: ConicalScalar>(order: &ConicalOrder, x: f64) -> Result<T> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("conical functions need x ≥ 1, got {x}")));
    }
    if x == 1.0 {
        return Ok(if order.mu() == 0 { T::one() } else { T::default() });
    }
    let mut ev = if x < SERIES_CROSSOVER { Some(series::<T>(order, x)) } else { None };
    if let Some(s) = &ev {
        if s.error > CONICAL_RTOL * s.value.magnitude().max(f64::MIN_POSITIVE) {
            ev = None;
        }
    }
    let ev = match ev {
        Some(s) => s,
        None => integral::<T>(order, x)?,
    };
    let target = (CONICAL_RTOL * ev.value.magnitude()).max(ENVELOPE_FLOOR * ev.scale);
    if ev.error > target.max(1e-300) {
        return Err(Error::AccuracyLoss { estimate: ev.error, target });
    }
    Ok(ev.value)
}

trait ConicalScalar: QuadValue + Mul<Output = Self> {
    fn one() -> Self;
    /// (−ν+k)(ν+1+k) for ν = −1/2 + iΛ.
    fn pochhammer_pair(k: f64, lam: f64) -> Self;
    /// cosh((ν + 1/2) t) = cosh(iΛt).
    fn cos_kernel(lam: f64, t: f64) -> Self;
}

impl ConicalScalar for f64 {
    fn one() -> Self {
        1.0
    }
    fn pochhammer_pair(k: f64, lam: f64) -> Self {
        (k + 0.5) * (k + 0.5) + lam * lam
    }
    fn cos_kernel(lam: f64, t: f64) -> Self {
        (lam * t).cos()
    }
}

impl ConicalScalar for Complex64 {
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn pochhammer_pair(k: f64, lam: f64) -> Self {
        let nu = Complex64::new(-0.5, lam);
        (k - nu) * (nu + 1.0 + k)
    }
    fn cos_kernel(lam: f64, t: f64) -> Self {
        (Complex64::new(0.0, lam) * t).cosh()
    }
}

/// Associated conical function P^{−|m_z|}_{−1/2+iΛ}(x) for x ≥ 1.
///
/// Series in (1−x)/2 below x = 1.5, Mehler–Dirichlet integral above.
pub fn conical_p(order: &ConicalOrder, x: f64) -> Result<f64> {
    evaluate::<f64>(order, x)
}

/// The same function evaluated in complex arithmetic with the complex
/// degree kept explicit. The imaginary part is a rounding residue.
pub fn conical_p_complex(order: &ConicalOrder, x: f64) -> Result<Complex64> {
    evaluate::<Complex64>(order, x)
}

/// Windowed Gram matrix against its expected value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramComparison {
    pub numeric: Vec<Vec<f64>>,
    pub expected: Vec<Vec<f64>>,
    /// max |numeric − expected| / max diagonal of expected
    pub relative_deviation: f64,
}

impl GramComparison {
    pub fn new(numeric: Vec<Vec<f64>>, expected: Vec<Vec<f64>>) -> Self {
        let scale = (0..expected.len()).map(|i| expected[i][i].abs()).fold(0.0, f64::max);
        let mut dev: f64 = 0.0;
        for (a, b) in numeric.iter().flatten().zip(expected.iter().flatten()) {
            dev = dev.max((a - b).abs());
        }
        Self { numeric, expected, relative_deviation: dev / scale }
    }
}

/// Unit-area Gaussian.
pub fn gaussian(x: f64, center: f64, width: f64) -> f64 {
    (-(x - center).powi(2) / (2.0 * width * width)).exp() / (width * (2.0 * PI).sqrt())
}

/// Smeared orthogonality of conical functions: with unit-area Gaussian
/// windows g_i(Λ) (cut at ±4.5 widths, kept inside Λ > 0),
/// G_ij = ∫₀^{ω_max} sinh ω F_i F_j dω, F_i(ω) = ∫ g_i(Λ) P^{−|m|}_{−1/2+iΛ}(cosh ω) dΛ,
/// compared with ∫ g_i g_j π/(Λ sinh(πΛ) |Γ(1/2+|m|+iΛ)|²) dΛ.
pub fn conical_smeared_gram(m_z: i32, windows: &[(f64, f64)], omega_max: f64) -> Result<GramComparison> {
    let (gx, gw) = gauss_legendre(96);
    let mut nodes = Vec::with_capacity(windows.len());
    for &(c, w) in windows {
        let lo = c - 4.5 * w;
        let hi = c + 4.5 * w;
        if !(lo > 0.0) || !(w > 0.0) {
            return Err(Error::Domain(format!("window ({c}, {w}) must stay inside Λ > 0")));
        }
        let half = 0.5 * (hi - lo);
        let pts: Vec<(f64, f64)> = gx
            .iter()
            .zip(&gw)
            .map(|(x, wt)| {
                let lam = lo + half * (x + 1.0);
                (lam, wt * half * gaussian(lam, c, w))
            })
            .collect();
        nodes.push(pts);
    }
    let (ox, ow) = gauss_legendre(16);
    let panels = omega_max.ceil() as usize;
    let k = windows.len();
    let mut numeric = vec![vec![0.0; k]; k];
    for p in 0..panels {
        let a = p as f64 * omega_max / panels as f64;
        let half = 0.5 * omega_max / panels as f64;
        for (x, wt) in ox.iter().zip(&ow) {
            let omega = a + half * (x + 1.0);
            let ch = omega.cosh();
            let mut f = vec![0.0; k];
            for (i, pts) in nodes.iter().enumerate() {
                for &(lam, g) in pts {
                    f[i] += g * conical_p(&ConicalOrder::new(m_z, lam)?, ch)?;
                }
            }
            let wsh = wt * half * omega.sinh();
            for i in 0..k {
                for j in 0..k {
                    numeric[i][j] += wsh * f[i] * f[j];
                }
            }
        }
    }
    let weight = |lam: f64| PI / (lam * (PI * lam).sinh() * gamma_abs(m_z, lam).powi(2));
    let mut expected = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let (ci, wi) = windows[i];
            let (cj, wj) = windows[j];
            let lo = (ci - 4.5 * wi).max(cj - 4.5 * wj);
            let hi = (ci + 4.5 * wi).min(cj + 4.5 * wj);
            if lo >= hi {
                continue;
            }
            let half = 0.5 * (hi - lo);
            expected[i][j] = gx
                .iter()
                .zip(&gw)
                .map(|(x, wt)| {
                    let lam = lo + half * (x + 1.0);
                    wt * half * gaussian(lam, ci, wi) * gaussian(lam, cj, wj) * weight(lam)
                })
                .sum();
        }
    }
    Ok(GramComparison::new(numeric, expected))
}

/// Orthonormal spherical harmonic Y_l^m(θ, φ) with the Condon–Shortley phase.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::Domain(format!("|m| ≤ l required, got l={l}, m={m}")));
    }
    let x = theta.cos();
    let s = theta.sin().abs();
    // Normalized P̄_m^m = (−1)^m sqrt((2m+1)/(4π) · (2m−1)!!/(2m)!!) sin^m θ
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for k in 1..=am {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * s;
    }
    let plm = if l == am {
        pmm
    } else {
        let mf = am as f64;
        let mut p_prev = pmm;
        let mut p = x * (2.0 * mf + 3.0).sqrt() * pmm;
        for ll in (am + 2)..=l {
            let lf = ll as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let next = a * (x * p - b * p_prev);
            p_prev = p;
            p = next;
        }
        p
    };
    let y = Complex64::from_polar(plm, am as f64 * phi);
    Ok(if m < 0 {
        let c = y.conj();
        if am % 2 == 1 { -c } else { c }
    } else {
        y
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn lanczos_gamma(z: Complex64) -> Complex64 {
        // g = 7, n = 9
        const G: f64 = 7.0;
        const C: [f64; 9] = [
            0.99999999999980993,
            676.5203681218851,
            -1259.1392167224028,
            771.32342877765313,
            -176.61502916214059,
            12.507343278686905,
            -0.13857109526572012,
            9.9843695780195716e-6,
            1.5056327351493116e-7,
        ];
        let z = z - 1.0;
        let mut x = Complex64::new(C[0], 0.0);
        for (i, c) in C.iter().enumerate().skip(1) {
            x += *c / (z + i as f64);
        }
        let t = z + G + 0.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
    }

    /// Plain Mehler integral, order 0, via t = ξ sin θ.
    fn mehler_oracle(lam: f64, x: f64) -> f64 {
        let xi = x.acosh();
        let (nodes, weights) = crate::quadrature::gauss_legendre(400);
        let mut s = 0.0;
        for (u, w) in nodes.iter().zip(&weights) {
            let th = FRAC_PI_2 * 0.5 * (u + 1.0);
            let t = xi * th.sin();
            let d = 2.0 * (0.5 * (xi + t)).sinh() * (0.5 * (xi - t)).sinh();
            let f = if d > 0.0 { (lam * t).cos() * xi * th.cos() / d.sqrt() } else { (lam * xi).cos() * (xi / xi.sinh()).sqrt() * 2.0f64.sqrt() };
            s += w * FRAC_PI_2 * 0.5 * f;
        }
        2.0f64.sqrt() / PI * s
    }

    #[test]
    fn csinc_examples() {
        assert_eq!(csinc(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert!(csinc(Complex64::new(PI, 0.0)).norm() < 1e-16);
        let v = csinc(Complex64::new(0.0, -FRAC_PI_2));
        let exact = FRAC_PI_2.sinh() / FRAC_PI_2;
        assert!((v.re - exact).abs() < 1e-15 * exact && v.im.abs() < 1e-16);
        // power series agrees across the switch point
        let w = Complex64::new(7e-5, 3e-5);
        let direct = w.sin() / w;
        assert!((csinc(w) - direct).norm() < 1e-15);
    }

    #[test]
    fn gamma_abs_against_lanczos() {
        for m in 0..6 {
            for &lam in &[0.0, 0.3, 1.0, 2.5, 7.0] {
                let g = lanczos_gamma(Complex64::new(0.5 + m as f64, lam)).norm();
                let ours = gamma_abs(m, lam);
                assert!((ours - g).abs() < 1e-12 * g, "m={m} Λ={lam}: {ours} vs {g}");
            }
        }
        assert!((gamma_abs(0, 0.0) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_abs(0, 1.0) - (PI / PI.cosh()).sqrt()).abs() < 1e-15);
        assert!((gamma_abs(1, 1.0) - 0.5f64.hypot(1.0) * gamma_abs(0, 1.0)).abs() < 1e-15);
        assert_eq!(gamma_abs(-2, 0.7), gamma_abs(2, 0.7));
    }

    #[test]
    fn conical_at_one() {
        for lam in [0.0, 1.0, 5.0] {
            assert_eq!(conical_p(&ConicalOrder::new(0, lam).unwrap(), 1.0).unwrap(), 1.0);
            assert_eq!(conical_p(&ConicalOrder::new(1, lam).unwrap(), 1.0).unwrap(), 0.0);
            let near = conical_p(&ConicalOrder::new(1, lam).unwrap(), 1.0 + 1e-12).unwrap();
            assert!(near.abs() < 1e-6);
        }
    }

    #[test]
    fn conical_matches_mehler_oracle() {
        for &lam in &[0.0, 0.5, 1.0, 3.0] {
            for &x in &[1.2, 1.0f64.cosh(), 3.0, 10.0] {
                let ours = conical_p(&ConicalOrder::new(0, lam).unwrap(), x).unwrap();
                let oracle = mehler_oracle(lam, x);
                assert!((ours - oracle).abs() < 1e-10 * oracle.abs().max(1e-3), "Λ={lam} x={x}: {ours} vs {oracle}");
            }
        }
    }

    #[test]
    fn conical_reference_values() {
        let cases = [
            (0, 1.0, 1.0f64.cosh(), 0.722075228279374573),
            (1, 1.0, 1.0f64.cosh(), 0.393618872868244929),
            (2, 0.5, 3.0, 0.217587670833975651),
        ];
        for (m, lam, x, want) in cases {
            let got = conical_p(&ConicalOrder::new(m, lam).unwrap(), x).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn series_and_integral_agree_at_crossover() {
        for m in [0, 1, 3, 10] {
            for lam in [0.2, 1.0, 4.0] {
                let o = ConicalOrder::new(m, lam).unwrap();
                for x in [1.3, 1.5, 1.8] {
                    let s = series::<f64>(&o, x).value;
                    let i = integral::<f64>(&o, x).unwrap().value;
                    assert!((s - i).abs() < 1e-10 * s.abs().max(1e-12), "m={m} Λ={lam} x={x}: {s} vs {i}");
                }
            }
        }
    }

    #[test]
    fn conical_is_real() {
        for m in [0, 1, 4] {
            for lam in [0.0, 0.7, 2.0] {
                let o = ConicalOrder::new(m, lam).unwrap();
                for x in [1.1, 2.0, 20.0] {
                    let c = conical_p_complex(&o, x).unwrap();
                    let r = conical_p(&o, x).unwrap();
                    assert!(c.im.abs() <= 1e-12 * c.re.abs().max(1e-300));
                    assert!((c.re - r).abs() < 1e-12 * r.abs());
                }
            }
        }
    }

    #[test]
    fn conical_large_argument_and_order() {
        let o = ConicalOrder::new(50, 2.0).unwrap();
        let v = conical_p(&o, 20f64.cosh()).unwrap();
        assert!(v.is_finite());
        assert!(ConicalOrder::new(51, 1.0).is_err());
        assert!(conical_p(&ConicalOrder::new(0, 1.0).unwrap(), 0.5).is_err());
    }

    #[test]
    fn spherical_harmonic_examples() {
        let y00 = spherical_harmonic(0, 0, 0.4, 1.1).unwrap();
        assert!((y00.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15 && y00.im == 0.0);
        let y10 = spherical_harmonic(1, 0, 0.0, 0.0).unwrap();
        assert!((y10.re - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        // Y_1^1 = −sqrt(3/8π) sin θ e^{iφ}
        let y11 = spherical_harmonic(1, 1, 0.7, 0.3).unwrap();
        let want = Complex64::from_polar(-(3.0 / (8.0 * PI)).sqrt() * 0.7f64.sin(), 0.3);
        assert!((y11 - want).norm() < 1e-15);
        assert!(spherical_harmonic(1, 2, 0.0, 0.0).is_err());
    }

    #[test]
    fn spherical_harmonics_orthonormal() {
        let (x, w) = crate::quadrature::gauss_legendre(24);
        let nphi = 32;
        let pairs = [(1, 1, 1, 1), (2, -1, 2, -1), (3, 2, 1, 1), (2, 0, 4, 0), (3, -3, 3, -3)];
        for (l1, m1, l2, m2) in pairs {
            let mut s = Complex64::new(0.0, 0.0);
            for (ct, wt) in x.iter().zip(&w) {
                let th = ct.acos();
                for k in 0..nphi {
                    let ph = 2.0 * PI * k as f64 / nphi as f64;
                    let a = spherical_harmonic(l1, m1, th, ph).unwrap();
                    let b = spherical_harmonic(l2, m2, th, ph).unwrap();
                    s += a.conj() * b * wt * (2.0 * PI / nphi as f64);
                }
            }
            let want = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
            assert!((s - want).norm() < 1e-13, "({l1},{m1})·({l2},{m2}) = {s}");
        }
    }

    #[test]
    fn smeared_orthogonality_matches_weight() {
        for m_z in [0, 1] {
            let g = conical_smeared_gram(m_z, &[(0.5, 0.1), (1.0, 0.1)], 50.0).unwrap();
            assert!(g.relative_deviation < 1e-4, "m_z={m_z}: {g:?}");
        }
        assert!(conical_smeared_gram(0, &[(0.2, 0.1)], 10.0).is_err());
    }
}
