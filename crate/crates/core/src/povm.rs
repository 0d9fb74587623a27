//! Proper-time and position POVMs, Hegerfeldt probabilities for a state
//! strictly localized on the z-axis, and the localization-impossibility
//! diagnostics.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::{q0_radial, q3_solution};
use crate::operators::{Axis, Chart, Grid, WaveFunction2};
use crate::params::{ModelParams, Sign};
use crate::quadrature::{integrate_finite, integrate_upper, QuadConfig};
use crate::specfun::{csinc, sinc};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn boost_factor(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x / x.sinh()
    }
}

/// P_n(τ) = (mπτ/sinh mπτ) |sinc((π/2)(2n − imτ))|².
///
/// With y = πmτ/2, |sin(πn − iy)|² = sinh²y for integer n, so
/// P_n = (mπτ/sinh mπτ) sinh²y / (π²n² + y²), exactly δ_{n0} at τ = 0.
pub fn hegerfeldt_pn(n: i64, tau: f64, params: &ModelParams) -> f64 {
    let x = PI * params.mass() * tau;
    let y = 0.5 * x;
    if y == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = PI * n as f64;
    let ratio = if n == 0 { sinc_h(y).powi(2) } else { y.sinh().powi(2) / (nf * nf + y * y) };
    boost_factor(x) * ratio
}

/// sinh(y)/y
fn sinc_h(y: f64) -> f64 {
    if y.abs() < 1e-4 {
        1.0 + y * y / 6.0
    } else {
        y.sinh() / y
    }
}

/// The same probability through the complex sinc, for cross-checks.
pub fn hegerfeldt_pn_csinc(n: i64, tau: f64, params: &ModelParams) -> f64 {
    let mt = params.mass() * tau;
    let w = Complex64::new(FRAC_PI_2 * 2.0 * n as f64, -FRAC_PI_2 * mt);
    boost_factor(PI * mt) * csinc(w).norm_sqr()
}

/// |(1/π) ∫ (cos ν)^{imτ} e^{2inν} dν|² over (−π/2, π/2) by direct quadrature.
pub fn hegerfeldt_pn_oracle(n: i64, tau: f64, params: &ModelParams, tol: f64) -> Result<f64> {
    let mt = params.mass() * tau;
    // even integrand: 2∫₀^{π/2} e^{imτ ln cos ν} cos(2nν) dν
    let r = integrate_finite(
        |nu: f64| Complex64::from_polar((2.0 * n as f64 * nu).cos(), mt * nu.cos().ln()),
        0.0,
        FRAC_PI_2,
        &QuadConfig::with_tol(tol).budget(20000),
    )?;
    Ok((r.value * (2.0 / PI)).norm_sqr())
}

/// Σ_{|n|>N} P_n(τ) in closed form up to a summed remainder below 1e−16.
pub fn hegerfeldt_tail(n_max: usize, tau: f64, params: &ModelParams) -> f64 {
    let x = PI * params.mass() * tau;
    if x == 0.0 {
        return 0.0;
    }
    // P_n = (x/sinh x) sinh²(x/2) / (π²n² + x²/4)
    let amp = boost_factor(x) * (0.5 * x).sinh().powi(2) / (PI * PI);
    let c = x / (2.0 * PI);
    let k_sum = n_max + 100_000;
    let mut s = 0.0;
    for n in (n_max + 1..=k_sum).rev() {
        let nf = n as f64;
        s += 1.0 / (nf * nf + c * c);
    }
    // ∫_{K+1/2}^∞ dn/(n²+c²)
    let k = k_sum as f64 + 0.5;
    s += (FRAC_PI_2 - (k / c).atan()) / c;
    2.0 * amp * s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightconeRow {
    pub n: i64,
    pub p_n: f64,
    /// P_n > 0 although |n| > mτ/2.
    pub violates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightconeReport {
    pub tau: f64,
    pub rows: Vec<LightconeRow>,
    /// Σ_{|n|≤n_max} P_n
    pub sum: f64,
    /// 1 − sum
    pub deviation: f64,
    /// Σ_{|n|>n_max} P_n
    pub tail: f64,
}

pub fn lightcone_report(tau: f64, n_max: usize, params: &ModelParams) -> Result<LightconeReport> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("τ ≥ 0 required, got {tau}")));
    }
    let half = params.mass() * tau / 2.0;
    let n_max_i = n_max as i64;
    let rows: Vec<LightconeRow> = (-n_max_i..=n_max_i)
        .map(|n| {
            let p_n = hegerfeldt_pn(n, tau, params);
            LightconeRow { n, p_n, violates: (n.abs() as f64) > half && p_n > 0.0 }
        })
        .collect();
    let sum = rows.iter().map(|r| r.p_n).sum::<f64>();
    Ok(LightconeReport { tau, rows, sum, deviation: 1.0 - sum, tail: hegerfeldt_tail(n_max, tau, params) })
}

/// Gaussian spectral profile α(λ) in Λ = sqrt(−1/4 − λ), normalized so that
/// ∫|α|² dλ = 1 (dλ = 2Λ dΛ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaProfile {
    pub center: f64,
    pub width: f64,
}

impl Default for AlphaProfile {
    fn default() -> Self {
        Self { center: 1.0, width: 0.2 }
    }
}

impl AlphaProfile {
    fn raw(&self, cap: f64) -> f64 {
        (-(cap - self.center).powi(2) / (2.0 * self.width * self.width)).exp()
    }

    fn raw_norm_squared(&self) -> Result<f64> {
        Ok(integrate_upper(|c: f64| self.raw(c).powi(2) * 2.0 * c, 0.0, &QuadConfig::with_tol(1e-14))?.value)
    }

    /// α at λ ≤ −1/4.
    pub fn value(&self, lambda: f64) -> Result<f64> {
        let cap = crate::charts::lambda_to_Lambda(lambda)?;
        Ok(self.raw(cap) / self.raw_norm_squared()?.sqrt())
    }

    /// ∫|α(λ)|² dλ by quadrature in λ.
    pub fn norm_squared(&self) -> Result<f64> {
        let n = self.raw_norm_squared()?;
        let r = integrate_upper(
            |x: f64| {
                let lambda = -0.25 - x;
                let cap = (-0.25_f64 - lambda).max(0.0).sqrt();
                self.raw(cap).powi(2) / n
            },
            0.0,
            &QuadConfig::with_tol(1e-12),
        )?;
        Ok(r.value)
    }
}

/// F_Ω(k) on [−1/2, 1/2].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OmegaProfile {
    /// cos(πk)
    CosPi,
    /// (1 − 4k²)²
    QuarticBump,
    /// 1 (violates the endpoint condition)
    Flat,
    /// Σ c_j k^j
    Polynomial(Vec<f64>),
}

impl OmegaProfile {
    pub fn eval(&self, k: f64) -> f64 {
        match self {
            OmegaProfile::CosPi => (PI * k).cos(),
            OmegaProfile::QuarticBump => (1.0 - 4.0 * k * k).powi(2),
            OmegaProfile::Flat => 1.0,
            OmegaProfile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, cj| acc * k + cj),
        }
    }

    /// Order of the zero at k = ±1/2 predicting the z^{−s} tail (s = order + 1).
    pub fn endpoint_order(&self) -> Option<u32> {
        match self {
            OmegaProfile::CosPi => Some(1),
            OmegaProfile::QuarticBump => Some(2),
            OmegaProfile::Flat => Some(0),
            OmegaProfile::Polynomial(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizedStateSpec {
    pub alpha: AlphaProfile,
    pub f_omega: OmegaProfile,
    pub mass: f64,
}

/// Tolerance on |F_Ω(±1/2)| relative to max |F_Ω|.
pub const ENDPOINT_TOL: f64 = 1e-10;

impl LocalizedStateSpec {
    pub fn new(f_omega: OmegaProfile, params: &ModelParams) -> Self {
        Self { alpha: AlphaProfile::default(), f_omega, mass: params.mass() }
    }

    /// DomainViolation unless F_Ω(±1/2) = 0.
    pub fn check_domain(&self) -> Result<()> {
        let scale = (0..=64).map(|j| self.f_omega.eval(-0.5 + j as f64 / 64.0).abs()).fold(0.0, f64::max);
        let b = self.f_omega.eval(0.5).abs().max(self.f_omega.eval(-0.5).abs());
        if b > ENDPOINT_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::DomainViolation { boundary: b });
        }
        Ok(())
    }
}

/// p₀(z′) = (πm)^{−1/2} ∫_{−1/2}^{1/2} F_Ω(k) e^{iπmkz′} dk, the inverse
/// transform of rect(k) F_Ω(k).
pub fn amplitude_p0(spec: &LocalizedStateSpec, zprime: f64) -> Result<Complex64> {
    spec.check_domain()?;
    let m = spec.mass;
    let kappa = PI * m * zprime;
    let pieces = (kappa.abs() / PI).ceil().max(1.0) as usize;
    let cfg = QuadConfig::with_tol(1e-15).rel(1e-13);
    let mut acc = ZERO;
    for j in 0..pieces {
        let a = -0.5 + j as f64 / pieces as f64;
        let b = -0.5 + (j + 1) as f64 / pieces as f64;
        acc += integrate_finite(|k: f64| Complex64::from_polar(spec.f_omega.eval(k), kappa * k), a, b, &cfg)?.value;
    }
    Ok(acc / (PI * m).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowFit {
    pub z_lo: f64,
    pub z_hi: f64,
    /// |p₀| envelope ~ C z^{−s}
    pub s: f64,
    pub s_residual: f64,
    /// |p₀| envelope ~ C e^{−A z}
    pub a: f64,
    pub a_stderr: f64,
    pub a_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    /// Innermost window first; each next window is scaled by z_hi/z_lo.
    pub fits: Vec<WindowFit>,
    /// Polynomial exponent from the outermost window.
    pub s: f64,
    /// A_k / A_{k+1} for consecutive windows.
    pub a_ratios: Vec<f64>,
    /// max |p₀| found beyond m z = 10³ (no compact support).
    pub far_amplitude: f64,
}

fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let ss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let rms = (ss / n).sqrt();
    let stderr = (ss / (n - 2.0).max(1.0) / sxx).sqrt();
    (slope, rms, stderr)
}

/// Envelope samples: max |p₀| over consecutive blocks of width 2/m.
fn envelope(spec: &LocalizedStateSpec, z_lo: f64, z_hi: f64) -> Result<Vec<(f64, f64)>> {
    let block = 2.0 / spec.mass;
    let nb = ((z_hi - z_lo) / block).floor() as usize;
    let per = 24;
    let mut out = Vec::with_capacity(nb);
    for b in 0..nb {
        let a = z_lo + b as f64 * block;
        let mut best: f64 = 0.0;
        for j in 0..per {
            best = best.max(amplitude_p0(spec, a + block * (j as f64 + 0.5) / per as f64)?.norm());
        }
        out.push((a + 0.5 * block, best));
    }
    Ok(out)
}

fn fit_window(spec: &LocalizedStateSpec, z_lo: f64, z_hi: f64) -> Result<WindowFit> {
    let env = envelope(spec, z_lo, z_hi)?;
    if env.len() < 4 || env.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::InsufficientResolution(format!("window [{z_lo}, {z_hi}] has too few usable blocks")));
    }
    let logs: Vec<(f64, f64)> = env.iter().map(|&(z, a)| (z.ln(), a.ln())).collect();
    let (sl, s_residual, _) = linear_fit(&logs);
    let lin: Vec<(f64, f64)> = env.iter().map(|&(z, a)| (z, a.ln())).collect();
    let (al, a_residual, a_stderr) = linear_fit(&lin);
    Ok(WindowFit { z_lo, z_hi, s: -sl, s_residual, a: -al, a_stderr, a_residual })
}

/// Polynomial and exponential tail fits of |p₀| over three nested windows
/// [z_lo, z_hi]·r^k, r = z_hi/z_lo.
pub fn tail_analysis(spec: &LocalizedStateSpec, window: [f64; 2]) -> Result<TailReport> {
    spec.check_domain()?;
    let [z_lo, z_hi] = window;
    let m = spec.mass;
    if !(m * z_lo >= 20.0) || !(z_hi > z_lo) {
        return Err(Error::InsufficientResolution(format!(
            "window must satisfy m z_lo ≥ 20 and z_hi > z_lo, got [{z_lo}, {z_hi}]"
        )));
    }
    let r = z_hi / z_lo;
    let mut fits = Vec::with_capacity(3);
    for k in 0..3 {
        let f = r.powi(k);
        fits.push(fit_window(spec, z_lo * f, z_hi * f)?);
    }
    let a_ratios = fits.windows(2).map(|w| w[0].a / w[1].a).collect();
    let far = envelope(spec, 1000.0 / m, 1010.0 / m)?.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(TailReport { s: fits[2].s, fits, a_ratios, far_amplitude: far })
}

/// Integration-by-parts envelope for |∫ h(x) e^{iκx} dx| from samples of h on
/// a Chebyshev axis: min over k of Σ_{j<k} (|h⁽ʲ⁾(lo)| + |h⁽ʲ⁾(hi)|)/κ^{j+1} + ∫|h⁽ᵏ⁾|/κᵏ.
struct Envelope {
    boundary: Vec<f64>,
    variation: Vec<f64>,
}

impl Envelope {
    /// `deriv` maps samples of h to samples of dh/dx; `dx` holds the
    /// quadrature weights of dx at the nodes.
    fn new(h: Vec<Complex64>, deriv: &dyn Fn(&[Complex64]) -> Result<Vec<Complex64>>, dx: &[f64], order: usize) -> Result<Self> {
        let n = h.len();
        let mut boundary = Vec::with_capacity(order);
        let mut variation = Vec::with_capacity(order);
        let mut cur = h;
        for _ in 0..order {
            boundary.push(cur[0].norm() + cur[n - 1].norm());
            cur = deriv(&cur)?;
            variation.push(cur.iter().zip(dx).map(|(v, w)| v.norm() * w).sum());
        }
        Ok(Self { boundary, variation })
    }

    fn bound(&self, kappa: f64) -> f64 {
        let kappa = kappa.abs();
        let mut best = f64::INFINITY;
        let mut acc = 0.0;
        for k in 0..self.variation.len() {
            acc += self.boundary[k] / kappa.powi(k as i32 + 1);
            best = best.min(acc + self.variation[k] / kappa.powi(k as i32 + 1));
        }
        best
    }
}

const ENVELOPE_ORDER: usize = 6;

/// Zeroes derivative samples below the rounding floor of spectral
/// differentiation, ~ε N² max|f| / length.
fn chop(mut d: Vec<Complex64>, f: &[Complex64], n: usize, length: f64) -> Vec<Complex64> {
    let fmax = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = 100.0 * f64::EPSILON * (n * n) as f64 * fmax / length;
    for v in d.iter_mut() {
        if v.norm() < floor {
            *v = ZERO;
        }
    }
    d
}

/// Result of integrating a POVM density over its outcome line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationReport {
    /// ∫ density over [−cutoff, cutoff]
    pub integral: f64,
    pub cutoff: f64,
    /// Envelope bound on the discarded outcome range.
    pub truncation_bound: f64,
    /// ‖ψ_ξ‖² by grid quadrature.
    pub norm_squared: f64,
}

fn single_component(psi: &WaveFunction2, xi: Sign) -> Result<Vec<Complex64>> {
    let other = psi.component(xi.flip().index());
    if other.iter().any(|v| v.norm() > 0.0) {
        return Err(Error::Domain("POVM densities need a single energy-sign component".into()));
    }
    Ok(psi.component(xi.index()))
}

fn chebyshev_axis(psi: &WaveFunction2, chart: Chart) -> Result<&Axis> {
    if psi.grid.chart != chart || !matches!(psi.grid.axes[0], Axis::Chebyshev { .. }) {
        return Err(Error::GridMismatch(format!("need a Chebyshev {} grid", chart.name())));
    }
    Ok(&psi.grid.axes[0])
}

/// Σ|⟨ψ^{t}_{τ;ξ}|ψ⟩|² for a radial state with a single angular term, by
/// quadrature on the state's radial grid.
pub fn time_povm_density(psi: &WaveFunction2, t: f64, tau: f64, xi: Sign) -> Result<f64> {
    chebyshev_axis(psi, Chart::Radial)?;
    let comp = single_component(psi, xi)?;
    Ok(time_overlap(psi, &comp, t, tau, xi).norm_sqr())
}

fn time_overlap(psi: &WaveFunction2, comp: &[Complex64], t: f64, tau: f64, xi: Sign) -> Complex64 {
    let g = &*psi.grid;
    let m = g.params.mass();
    let mut s = ZERO;
    for (i, v) in comp.iter().enumerate() {
        let r = m * g.coords(i)[0].exp();
        s += q0_radial(t, 0.0, tau, r, &g.params)[xi.index()].conj() * v * g.weight(i);
    }
    s
}

fn outcome_integral(
    density: &dyn Fn(f64) -> f64,
    env: &Envelope,
    resolution: f64,
    mass: f64,
    tol: f64,
) -> Result<(f64, f64, f64)> {
    let tail = |cut: f64| -> Result<f64> {
        Ok(2.0 * mass / (2.0 * PI)
            * integrate_upper(|x: f64| env.bound(mass * x).powi(2), cut, &QuadConfig::with_tol(tol * 1e-3))?.value)
    };
    let mut cut = 1.0 / mass;
    let mut bound = tail(cut)?;
    while bound > 0.1 * tol && 2.0 * cut <= resolution {
        cut *= 2.0;
        bound = tail(cut)?;
    }
    let panels = ((2.0 * mass * cut).ceil() as usize).max(8);
    let width = 2.0 * cut / panels as f64;
    let cfg = QuadConfig::with_tol(0.01 * tol / panels as f64);
    let mut total = 0.0;
    for p in 0..panels {
        let a = -cut + p as f64 * width;
        total += integrate_finite(density, a, a + width, &cfg)?.value;
    }
    Ok((total, cut, bound))
}

/// ∫dt of the time density, truncated where the integration-by-parts envelope
/// bounds the remainder below tol/10 (or at the grid's resolution limit).
/// TruncationWarning when the bound still exceeds tol.
pub fn time_povm_normalization(psi: &WaveFunction2, tau: f64, xi: Sign, tol: f64) -> Result<NormalizationReport> {
    let axis = chebyshev_axis(psi, Chart::Radial)?;
    let comp = single_component(psi, xi)?;
    let g = &*psi.grid;
    let m = g.params.mass();
    let n = g.len();
    let (lo, hi) = (axis.node(0), axis.node(n - 1));
    let energies: Vec<f64> = (0..n).map(|i| g.energy(&g.coords(i))).collect();
    // h(u) = r^{3/2}(r/m)^{−imτ}ψ, du = (m/E) ds
    let h: Vec<Complex64> = (0..n)
        .map(|i| {
            let s = g.coords(i)[0];
            let r = m * s.exp();
            comp[i] * Complex64::from_polar(r.powf(1.5), -m * tau * s)
        })
        .collect();
    let du: Vec<f64> = (0..n).map(|i| axis.weight(i) * m / energies[i]).collect();
    let deriv = |f: &[Complex64]| -> Result<Vec<Complex64>> {
        let d = chop(g.differentiate(f, 0)?, f, n, hi - lo);
        Ok(d.iter().zip(&energies).map(|(v, e)| v * (e / m)).collect())
    };
    let env = Envelope::new(h, &deriv, &du, ENVELOPE_ORDER)?;
    let resolution = (n as f64) / (m * (hi - lo));
    let density = |t: f64| time_overlap(psi, &comp, t, tau, xi).norm_sqr();
    let (integral, cutoff, bound) = outcome_integral(&density, &env, resolution, m, tol)?;
    let norm_squared = comp.iter().enumerate().map(|(i, v)| v.norm_sqr() * g.weight(i)).sum();
    if bound > tol {
        return Err(Error::TruncationWarning { bound, tol });
    }
    Ok(NormalizationReport { integral, cutoff, truncation_bound: bound, norm_squared })
}

/// ⟨ψ^{t}_{τ;ξ}|ψ^{t′}_{τ;ξ}⟩ for the single-sign time eigenfunctions: radial
/// quadrature over r ≥ m plus the Abel-regularized remainder
/// ∫_{−∞}^{u₀} e^{iku} du = e^{iku₀}/(ik), k = m(t − t′). Requires t ≠ t′.
pub fn time_kernel(t: f64, t_prime: f64, tau: f64, xi: Sign, params: &ModelParams, tol: f64) -> Result<Complex64> {
    let m = params.mass();
    let k = m * (t - t_prime);
    if k == 0.0 {
        return Err(Error::Domain("the time kernel is singular at t = t′".into()));
    }
    let r0 = m;
    let idx = xi.index();
    let near = integrate_upper(
        |r: f64| {
            let a = q0_radial(t, 0.0, tau, r, params)[idx];
            let b = q0_radial(t_prime, 0.0, tau, r, params)[idx];
            a.conj() * b * (m * r * r / r.hypot(m))
        },
        r0,
        &QuadConfig::with_tol(tol).budget(20000),
    )?;
    let u0 = (r0 / (r0.hypot(m) + m)).ln();
    let sgn = xi.value();
    // conj(R^t)R^{t′} ∝ e^{±ik u}: sign follows the component
    let kk = sgn * k;
    let far = Complex64::from_polar(1.0, kk * u0) / Complex64::new(0.0, kk) * (m / (2.0 * PI));
    Ok(near.value + far)
}

/// sinc(mπ(z′ − z)/2), the overlap of unit-normalized position eigenfunctions.
pub fn position_kernel(z: f64, z_prime: f64, params: &ModelParams) -> f64 {
    sinc(0.5 * params.mass() * PI * (z_prime - z))
}

/// The same overlap by ν-quadrature of V^{z}, V^{z′}.
pub fn position_kernel_quadrature(z: f64, z_prime: f64, tau: f64, xi: Sign, params: &ModelParams, tol: f64) -> Result<Complex64> {
    let k = xi.index();
    Ok(integrate_finite(
        |nu: f64| {
            let a = q3_solution(Complex64::new(z, 0.0), xi, tau, nu, params)[k];
            let b = q3_solution(Complex64::new(z_prime, 0.0), xi, tau, nu, params)[k];
            a.conj() * b * nu.cos().powi(-3)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        &QuadConfig::with_tol(tol).budget(20000),
    )?
    .value)
}

fn position_overlap(psi: &WaveFunction2, comp: &[Complex64], z: f64, tau: f64, xi: Sign) -> Complex64 {
    let g = &*psi.grid;
    let mut s = ZERO;
    for (i, v) in comp.iter().enumerate() {
        let nu = g.coords(i)[0];
        s += q3_solution(Complex64::new(z, 0.0), xi, tau, nu, &g.params)[xi.index()].conj() * v * g.weight(i);
    }
    s
}

/// (m/2)|⟨V^{z}_{τ;ξ}|ψ⟩|² for a ν-profile ψ whose (λ, m_z) content is a unit
/// normalized spectral profile, collapsed by orthonormality.
pub fn position_povm_density(psi: &WaveFunction2, z: f64, tau: f64, xi: Sign) -> Result<f64> {
    chebyshev_axis(psi, Chart::Nu)?;
    let comp = single_component(psi, xi)?;
    Ok(0.5 * psi.grid.params.mass() * position_overlap(psi, &comp, z, tau, xi).norm_sqr())
}

/// ∫dz of the position density with an envelope-bounded truncation.
pub fn position_povm_normalization(psi: &WaveFunction2, tau: f64, xi: Sign, tol: f64) -> Result<NormalizationReport> {
    let axis = chebyshev_axis(psi, Chart::Nu)?;
    let comp = single_component(psi, xi)?;
    let g = &*psi.grid;
    let m = g.params.mass();
    let n = g.len();
    // h(ν) = sec^{3/2}ν e^{−imτ ln sec ν} ψ
    let h: Vec<Complex64> = (0..n)
        .map(|i| {
            let sec = 1.0 / g.coords(i)[0].cos();
            comp[i] * Complex64::from_polar(sec.powf(1.5), -m * tau * sec.ln())
        })
        .collect();
    let dx: Vec<f64> = (0..n).map(|i| axis.weight(i)).collect();
    let (lo, hi) = (axis.node(0), axis.node(n - 1));
    let deriv = |f: &[Complex64]| Ok(chop(g.differentiate(f, 0)?, f, n, hi - lo));
    let env = Envelope::new(h, &deriv, &dx, ENVELOPE_ORDER)?;
    let resolution = (n as f64) / (m * (hi - lo));
    let density = |z: f64| 0.5 * m * position_overlap(psi, &comp, z, tau, xi).norm_sqr();
    let (integral, cutoff, bound) = outcome_integral(&density, &env, resolution, m, tol)?;
    let norm_squared = comp.iter().enumerate().map(|(i, v)| v.norm_sqr() * g.weight(i)).sum();
    if bound > tol {
        return Err(Error::TruncationWarning { bound, tol });
    }
    Ok(NormalizationReport { integral, cutoff, truncation_bound: bound, norm_squared })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimePovmElement {
    pub tau: f64,
    pub xi: Sign,
    pub t: f64,
}

impl TimePovmElement {
    pub fn density(&self, psi: &WaveFunction2) -> Result<f64> {
        time_povm_density(psi, self.t, self.tau, self.xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionPovmElement {
    pub tau: f64,
    pub xi: Sign,
    pub z: f64,
}

impl PositionPovmElement {
    pub fn density(&self, psi: &WaveFunction2) -> Result<f64> {
        position_povm_density(psi, self.z, self.tau, self.xi)
    }
}

fn single_sign(xi: Sign, v: Complex64) -> [Complex64; 2] {
    let mut out = [ZERO; 2];
    out[xi.index()] = v;
    out
}

/// Single-sign radial state whose reduced amplitude r^{3/2}(r/m)^{−imτ}ψ is a
/// Gaussian in u = ln(r/(E + m)) with a linear phase, on a 320-point
/// Chebyshev grid over r ∈ [10⁻⁶m, 10²m].
pub fn radial_gaussian_state(center: f64, width: f64, tau: f64, xi: Sign, params: &ModelParams) -> Result<WaveFunction2> {
    let m = params.mass();
    let g = Arc::new(Grid::radial_chebyshev(1e-6 * m, 1e2 * m, 320, *params)?);
    Ok(WaveFunction2::from_fn(g, move |x| {
        let s = x[0];
        let r = m * s.exp();
        let u = (r / (r.hypot(m) + m)).ln();
        let amp = (-(u - center).powi(2) / (2.0 * width * width)).exp() * r.powf(-1.5);
        single_sign(xi, Complex64::from_polar(amp, m * tau * s + 0.7 * u))
    }))
}

/// Single-sign Gaussian in ν with a linear phase on a 256-point Chebyshev
/// grid over |ν| ≤ 1.5.
pub fn nu_gaussian_state(center: f64, width: f64, xi: Sign, params: &ModelParams) -> Result<WaveFunction2> {
    let g = Arc::new(Grid::nu_chebyshev(-1.5, 1.5, 256, *params)?);
    Ok(WaveFunction2::from_fn(g, move |x| {
        let nu = x[0];
        single_sign(xi, Complex64::from_polar((-(nu - center).powi(2) / (2.0 * width * width)).exp(), 1.3 * nu))
    }))
}
