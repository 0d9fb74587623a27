//! Self-adjoint extensions of the time and z-position operators: eigenvalue
//! lattices, analytic eigenfunctions, deficiency solutions and a boundary
//! classifier for sampled states.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::charts::{lambda_to_Lambda, HyperbolicMomentum, SphericalMomentum};
use crate::error::{Error, Result};
use crate::operators::{Chart, WaveFunction2};
use crate::params::{ModelParams, Sign};
use crate::quadrature::{gauss_legendre, integrate_finite, integrate_upper, QuadConfig};
pub use crate::specfun::GramComparison;
use crate::specfun::{conical_p, gamma_abs, gaussian, spherical_harmonic, ConicalOrder};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn check_angle(varphi: f64) -> Result<f64> {
    if varphi > -PI && varphi <= PI {
        Ok(varphi)
    } else {
        Err(Error::Domain(format!("extension angle must lie in (−π, π], got {varphi}")))
    }
}

/// Wrap an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        PI
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionParamQ0 {
    varphi: f64,
}

impl ExtensionParamQ0 {
    pub fn new(varphi: f64) -> Result<Self> {
        Ok(Self { varphi: check_angle(varphi)? })
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtensionParamQ3 {
    SingleParticle { varphi: f64 },
    GeneralU2 { varphi1: f64, varphi2: f64, varphi3: f64, varphi4: f64 },
}

impl ExtensionParamQ3 {
    pub fn single(varphi: f64) -> Result<Self> {
        Ok(Self::SingleParticle { varphi: check_angle(varphi)? })
    }

    pub fn general(varphi1: f64, varphi2: f64, varphi3: f64, varphi4: f64) -> Result<Self> {
        Ok(Self::GeneralU2 {
            varphi1: check_angle(varphi1)?,
            varphi2: check_angle(varphi2)?,
            varphi3: check_angle(varphi3)?,
            varphi4: check_angle(varphi4)?,
        })
    }

    /// The four angles (φ₁, φ₂, φ₃, φ₄); a single-particle extension is (φ, 0, 0, 0).
    pub fn angles(&self) -> [f64; 4] {
        match *self {
            Self::SingleParticle { varphi } => [varphi, 0.0, 0.0, 0.0],
            Self::GeneralU2 { varphi1, varphi2, varphi3, varphi4 } => [varphi1, varphi2, varphi3, varphi4],
        }
    }

    /// U(φ) = e^{iφ₁} [[e^{iφ₂} cos φ₄, e^{iφ₃} sin φ₄], [−e^{−iφ₃} sin φ₄, e^{−iφ₂} cos φ₄]].
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let [p1, p2, p3, p4] = self.angles();
        let g = Complex64::from_polar(1.0, p1);
        let (s, c) = p4.sin_cos();
        [
            [g * Complex64::from_polar(c, p2), g * Complex64::from_polar(s, p3)],
            [-g * Complex64::from_polar(s, -p3), g * Complex64::from_polar(c, -p2)],
        ]
    }

    /// True when U(φ) does not mix energy signs.
    pub fn is_single_particle(&self) -> bool {
        let u = self.matrix();
        u[0][1].norm() < 1e-15 && u[1][0].norm() < 1e-15 && (u[0][0] - u[1][1]).norm() < 1e-15
    }
}

/// z^n_φ = (2/mπ){arctan[tan(φ/2) tanh(π/2)] + nπ}, with the arctan term equal
/// to π/2 at φ = π.
pub fn q3_eigenvalue(n: i64, varphi: f64, params: &ModelParams) -> f64 {
    let at = if varphi == PI { FRAC_PI_2 } else { ((0.5 * varphi).tan() * (0.5 * PI).tanh()).atan() };
    2.0 / (params.mass() * PI) * (at + n as f64 * PI)
}

/// The same lattice from the form arctan[(sin φ/(1 + cos φ)) tanh(π/2)].
pub fn q3_eigenvalue_alt(n: i64, varphi: f64, params: &ModelParams) -> f64 {
    let den = 1.0 + varphi.cos();
    let at = if den == 0.0 {
        FRAC_PI_2
    } else {
        (varphi.sin() / den * (0.5 * PI).tanh()).atan()
    };
    2.0 / (params.mass() * PI) * (at + n as f64 * PI)
}

/// Boundary coefficients (a, b) of the single-particle condition
/// lim [a φ(ν) − b φ(−ν)] = o(sec^{−3/2}ν) for energy sign ξ.
pub fn q3_boundary_coefficients(xi: Sign, varphi: f64) -> (Complex64, Complex64) {
    let h = xi.value() * FRAC_PI_2;
    let e = Complex64::from_polar(1.0, -varphi);
    (h.exp() + e * (-h).exp(), (-h).exp() + e * h.exp())
}

/// Eigenvalues allowed by the single-particle boundary condition: the
/// solutions of e^{i m z π} = a/b, i.e. z = (arg(a/b) + 2πn)/(mπ).
pub fn q3_eigenvalue_from_boundary(n: i64, varphi: f64, params: &ModelParams) -> f64 {
    let (a, b) = q3_boundary_coefficients(Sign::Positive, varphi);
    let arg = (a / b).arg();
    let arg = if varphi == PI { PI } else { arg };
    (arg + 2.0 * PI * n as f64) / (params.mass() * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenstateQ0 {
    pub t: f64,
    pub l: u32,
    pub m_z: i32,
    pub varphi: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenstateQ3 {
    pub n: i64,
    /// λ ≤ −1/4
    pub lambda: f64,
    pub m_z: i32,
    pub xi: Sign,
    pub varphi: f64,
    pub tau: f64,
}

impl EigenstateQ3 {
    pub fn z(&self, params: &ModelParams) -> f64 {
        q3_eigenvalue(self.n, self.varphi, params)
    }
}

/// V^z_{(ξ);τ}(ν) with normalization π^{−1/2} for an arbitrary real or
/// complex eigenvalue z.
pub fn q3_solution(z: Complex64, xi: Sign, tau: f64, nu: f64, params: &ModelParams) -> [Complex64; 2] {
    let m = params.mass();
    let sec = 1.0 / nu.cos();
    let phase = Complex64::new(0.0, m * tau * sec.ln()) - Complex64::new(0.0, m * xi.value() * nu) * z;
    let v = phase.exp() * (PI.sqrt().recip() * sec.powf(-1.5));
    let mut out = [ZERO; 2];
    out[xi.index()] = v;
    out
}

/// V^{z^n_φ}_{(ξ);τ}(ν).
pub fn q3_eigenfunction(state: &EigenstateQ3, nu: f64, params: &ModelParams) -> Result<[Complex64; 2]> {
    if nu.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!("|ν| < π/2 required, got {nu}")));
    }
    Ok(q3_solution(Complex64::new(state.z(params), 0.0), state.xi, state.tau, nu, params))
}

/// Closed-form ⟨V^{z₁}_{ξ₁}|V^{z₂}_{ξ₂}⟩ = 2δ conj(N₁)N₂ sin(m(z₁−z₂)π/2)/(m(z₁−z₂)).
pub fn q3_inner_product_closed(
    z1: f64,
    z2: f64,
    xi1: Sign,
    xi2: Sign,
    n1: Complex64,
    n2: Complex64,
    params: &ModelParams,
) -> Complex64 {
    if xi1 != xi2 {
        return ZERO;
    }
    let m = params.mass();
    let d = m * (z1 - z2);
    let f = if d == 0.0 { PI } else { 2.0 * (0.5 * PI * d).sin() / d };
    n1.conj() * n2 * f
}

/// R^t_φ(r; τ) = sqrt(m/2π) r^{−3/2} (r/m)^{imτ} ((r/(E+m))^{−imt}, e^{iφ}(r/(E+m))^{imt}).
pub fn q0_radial(t: f64, varphi: f64, tau: f64, r: f64, params: &ModelParams) -> [Complex64; 2] {
    let m = params.mass();
    let e = r.hypot(m);
    let u = (r / (e + m)).ln();
    let amp = (m / (2.0 * PI)).sqrt() * r.powf(-1.5);
    let common = Complex64::from_polar(amp, m * tau * (r / m).ln());
    [common * Complex64::from_polar(1.0, -m * t * u), common * Complex64::from_polar(1.0, varphi + m * t * u)]
}

/// Radial part R^t_φ of the time eigenfunction for `state`.
pub fn q0_eigenfunction(state: &EigenstateQ0, r: f64, params: &ModelParams) -> Result<[Complex64; 2]> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r > 0 required, got {r}")));
    }
    check_angle(state.varphi)?;
    Ok(q0_radial(state.t, state.varphi, state.tau, r, params))
}

/// Y^{l,m_z}(Ω) R^t_φ(r; τ).
pub fn q0_csco_eigenfunction(state: &EigenstateQ0, p: &SphericalMomentum, params: &ModelParams) -> Result<[Complex64; 2]> {
    let y = spherical_harmonic(state.l, state.m_z, p.theta, p.phi_pi)?;
    let r = q0_eigenfunction(state, p.r_pi, params)?;
    Ok([y * r[0], y * r[1]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    Q0,
    Q3,
}

/// A square-integrable solution of Ǎ*φ = ±(i/m)φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeficiencySolution {
    pub which: Which,
    pub eigenvalue: Complex64,
    /// Energy-sign component the solution occupies.
    pub sign: Sign,
    pub tau: f64,
    pub mass: f64,
}

impl DeficiencySolution {
    /// Value at chart coordinate `x` (r for Q0, ν for Q3).
    pub fn eval(&self, x: f64) -> [Complex64; 2] {
        let m = self.mass;
        let mut out = [ZERO; 2];
        let v = match self.which {
            Which::Q0 => {
                let e = x.hypot(m);
                Complex64::from_polar(2f64.sqrt() / (x.sqrt() * (e + m)), m * self.tau * (x / m).ln())
            }
            Which::Q3 => {
                // e^{±ν} for ξ = +, e^{∓ν} for ξ = −
                let s = (self.eigenvalue.im * m).signum() * self.sign.value();
                let sec = 1.0 / x.cos();
                Complex64::from_polar((s * x).exp() * sec.powf(-1.5) / PI.sinh().sqrt(), m * self.tau * sec.ln())
            }
        };
        out[self.sign.index()] = v;
        out
    }

    /// Closed-form squared norm; both families are unit normalized.
    pub fn norm_squared_closed(&self) -> f64 {
        1.0
    }
}

/// Deficiency solutions of the symmetric operator: two for Q0 (one per
/// energy sign), four for Q3 (two per energy sign).
pub fn deficiency_solutions(which: Which, tau: f64, params: &ModelParams) -> Vec<DeficiencySolution> {
    let m = params.mass();
    let up = Complex64::new(0.0, 1.0 / m);
    let mk = |eigenvalue, sign| DeficiencySolution { which, eigenvalue, sign, tau, mass: m };
    match which {
        Which::Q0 => vec![mk(up, Sign::Positive), mk(-up, Sign::Negative)],
        Which::Q3 => vec![
            mk(up, Sign::Positive),
            mk(-up, Sign::Positive),
            mk(up, Sign::Negative),
            mk(-up, Sign::Negative),
        ],
    }
}

/// Domain membership of a sampled state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DomainClass {
    /// In the adjoint's domain but in no single-particle extension tested.
    AdjointOnly,
    /// Satisfies the closure's boundary condition.
    Closure,
    /// Satisfies the boundary condition of the extension with this angle.
    Extension(f64),
    /// Endpoint growth too strong for the adjoint's domain.
    NotInAdjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainReport {
    pub class: DomainClass,
    /// Fitted endpoint decay exponent p in |φ| ~ x^p (x = sec ν or r).
    pub exponent: f64,
    /// Relative size of the boundary combination, when it was evaluated.
    pub boundary_residual: Option<f64>,
}

impl DomainReport {
    pub fn in_adjoint(&self) -> bool {
        self.class != DomainClass::NotInAdjoint
    }

    pub fn is_closure(&self) -> bool {
        self.class == DomainClass::Closure
    }

    /// Closure states belong to every extension.
    pub fn in_extension(&self, varphi: f64) -> bool {
        match self.class {
            DomainClass::Closure => true,
            DomainClass::Extension(p) => wrap_angle(p - varphi).abs() < 1e-6,
            _ => false,
        }
    }
}

/// Exponent below which a state decays strictly faster than the boundary order.
pub const CLOSURE_EXPONENT: f64 = -1.6;
/// Exponent above which the state leaves the adjoint's domain.
pub const ADJOINT_EXPONENT: f64 = -1.4;
/// Relative tolerance on boundary combinations.
pub const BOUNDARY_TOL: f64 = 1e-3;

fn fit_slope(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = pts.len() as f64;
    if pts.len() < 3 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let rms = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Some((slope, rms))
}

/// Fit log|φ_ξ| against log x over the last decade of x at one endpoint.
fn endpoint_exponent(xs: &[f64], vals: &[Complex64]) -> Result<f64> {
    let xmax = xs.iter().cloned().fold(0.0, f64::max);
    let in_decade: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] >= xmax / 10.0).collect();
    if in_decade.len() < 4 {
        return Err(Error::InsufficientResolution(format!(
            "only {} nodes in the last decade at the endpoint",
            in_decade.len()
        )));
    }
    let pts: Vec<(f64, f64)> = in_decade
        .iter()
        .filter(|&&i| vals[i].norm() > 0.0)
        .map(|&i| (xs[i].ln(), vals[i].norm().ln()))
        .collect();
    if pts.len() < 3 {
        return Ok(f64::NEG_INFINITY);
    }
    match fit_slope(&pts) {
        Some((p, rms)) if rms < 0.5 => Ok(p),
        Some((_, rms)) => Err(Error::InsufficientResolution(format!("endpoint fit residual {rms:.3} too large"))),
        None => Err(Error::InsufficientResolution("degenerate endpoint nodes".into())),
    }
}

/// Classify a sampled state against the closure and extension domains of
/// Q0 (radial chart, r → ∞) or Q3 (ν chart, ν → ±π/2).
pub fn classify_domain(psi: &WaveFunction2, which: Which, varphi: Option<f64>) -> Result<DomainReport> {
    if let Some(v) = varphi {
        check_angle(v)?;
    }
    let g = &*psi.grid;
    let m = g.params.mass();
    let coords: Vec<f64> = (0..g.len()).map(|i| g.coords(i)[0]).collect();
    match (which, g.chart) {
        (Which::Q3, Chart::Nu) => {
            let right: Vec<usize> = (0..coords.len()).filter(|&i| coords[i] > 0.0).collect();
            let left: Vec<usize> = (0..coords.len()).filter(|&i| coords[i] < 0.0).collect();
            let mut p = f64::NEG_INFINITY;
            for side in [&right, &left] {
                let xs: Vec<f64> = side.iter().map(|&i| 1.0 / coords[i].cos()).collect();
                for k in 0..2 {
                    let vals: Vec<Complex64> = side.iter().map(|&i| psi.values[i][k]).collect();
                    p = p.max(endpoint_exponent(&xs, &vals)?);
                }
            }
            if p < CLOSURE_EXPONENT {
                return Ok(DomainReport { class: DomainClass::Closure, exponent: p, boundary_residual: None });
            }
            if p > ADJOINT_EXPONENT {
                return Ok(DomainReport { class: DomainClass::NotInAdjoint, exponent: p, boundary_residual: None });
            }
            let ir = *right.iter().max_by(|&&a, &&b| coords[a].total_cmp(&coords[b])).expect("nonempty");
            let il = *left
                .iter()
                .min_by(|&&a, &&b| (coords[a] + coords[ir]).abs().total_cmp(&(coords[b] + coords[ir]).abs()))
                .expect("nonempty");
            if (coords[il] + coords[ir]).abs() > 1e-12 * coords[ir] {
                return Err(Error::InsufficientResolution("ν nodes are not symmetric about 0".into()));
            }
            let s = coords[ir].cos().powf(-1.5);
            let gp = [psi.values[ir][0] * s, psi.values[ir][1] * s];
            let gm = [psi.values[il][0] * s, psi.values[il][1] * s];
            let scale = gp.iter().chain(&gm).map(|v| v.norm()).fold(0.0, f64::max);
            let (class, residual) = match varphi {
                Some(v) => {
                    let mut res: f64 = 0.0;
                    for xi in Sign::BOTH {
                        let (a, b) = q3_boundary_coefficients(xi, v);
                        let k = xi.index();
                        res = res.max((a * gp[k] - b * gm[k]).norm() / (a.norm() * scale));
                    }
                    (if res <= BOUNDARY_TOL { DomainClass::Extension(v) } else { DomainClass::AdjointOnly }, res)
                }
                None => {
                    let mut solved: Option<Complex64> = None;
                    let mut res: f64 = 0.0;
                    for xi in Sign::BOTH {
                        let k = xi.index();
                        if gp[k].norm().max(gm[k].norm()) <= BOUNDARY_TOL * scale {
                            continue;
                        }
                        let h = xi.value() * FRAC_PI_2;
                        let num = gm[k] * (-h).exp() - gp[k] * h.exp();
                        let den = gp[k] * (-h).exp() - gm[k] * h.exp();
                        let e = num / den;
                        res = res.max((e.norm() - 1.0).abs());
                        if let Some(prev) = solved {
                            res = res.max((prev - e).norm());
                        }
                        solved = Some(e);
                    }
                    match solved {
                        Some(e) if res <= BOUNDARY_TOL => (DomainClass::Extension(wrap_angle(-e.arg())), res),
                        _ => (DomainClass::AdjointOnly, res),
                    }
                }
            };
            Ok(DomainReport { class, exponent: p, boundary_residual: Some(residual) })
        }
        (Which::Q0, Chart::Radial) => {
            let rs: Vec<f64> = coords.iter().map(|s| m * s.exp()).collect();
            let mut p = f64::NEG_INFINITY;
            for k in 0..2 {
                p = p.max(endpoint_exponent(&rs, &psi.component(k))?);
            }
            if p < CLOSURE_EXPONENT {
                return Ok(DomainReport { class: DomainClass::Closure, exponent: p, boundary_residual: None });
            }
            if p > ADJOINT_EXPONENT {
                return Ok(DomainReport { class: DomainClass::NotInAdjoint, exponent: p, boundary_residual: None });
            }
            let io = (0..rs.len()).max_by(|&a, &b| rs[a].total_cmp(&rs[b])).expect("nonempty");
            let r = rs[io];
            let reduce = Complex64::from_polar(r.powf(1.5), -m * psi.tau * (r / m).ln());
            let gp = psi.values[io][0] * reduce;
            let gm = psi.values[io][1] * reduce;
            let scale = gp.norm().max(gm.norm());
            let (class, residual) = match varphi {
                Some(v) => {
                    let res = (gp - Complex64::from_polar(1.0, -v) * gm).norm() / scale;
                    (if res <= BOUNDARY_TOL { DomainClass::Extension(v) } else { DomainClass::AdjointOnly }, res)
                }
                None => {
                    let res = (gp.norm() - gm.norm()).abs() / scale;
                    if res <= BOUNDARY_TOL {
                        (DomainClass::Extension(wrap_angle((gm / gp).arg())), res)
                    } else {
                        (DomainClass::AdjointOnly, res)
                    }
                }
            };
            Ok(DomainReport { class, exponent: p, boundary_residual: Some(residual) })
        }
        _ => Err(Error::GridMismatch(format!(
            "{which:?} classification needs the {} chart",
            if which == Which::Q0 { "radial" } else { "nu" }
        ))),
    }
}

/// N^{|m_z|}_λ = |Γ(1/2 + |m_z| + iΛ)| sqrt(sinh(πΛ)/2π) / m^{3/2}.
#[allow(non_snake_case)]
pub fn conical_normalization(m_z: i32, Lambda: f64, params: &ModelParams) -> f64 {
    gamma_abs(m_z, Lambda) * ((PI * Lambda).sinh() / (2.0 * PI)).sqrt() / params.mass().powf(1.5)
}

/// W^λ_{m_z}(ω) = N^{|m_z|}_λ P^{−|m_z|}_{−1/2+iΛ(λ)}(cosh ω).
pub fn w_lambda(m_z: i32, lambda: f64, omega: f64, params: &ModelParams) -> Result<f64> {
    let cap = lambda_to_Lambda(lambda)?;
    let p = conical_p(&ConicalOrder::new(m_z, cap)?, omega.cosh())?;
    Ok(conical_normalization(m_z, cap, params) * p)
}

/// Φ^{m_z}(φ) = e^{i m_z φ}/sqrt(2π).
pub fn azimuthal(m_z: i32, phi: f64) -> Complex64 {
    Complex64::from_polar((2.0 * PI).sqrt().recip(), m_z as f64 * phi)
}

/// V(ν) Φ^{m_z}(φ_π) W^λ_{m_z}(ω_π).
pub fn csco_eigenfunction_q3(state: &EigenstateQ3, p: &HyperbolicMomentum, params: &ModelParams) -> Result<[Complex64; 2]> {
    let v = q3_eigenfunction(state, p.nu_pi, params)?;
    let f = azimuthal(state.m_z, p.phi_pi) * w_lambda(state.m_z, state.lambda, p.omega_pi, params)?;
    Ok([v[0] * f, v[1] * f])
}

/// Partial sums Σ_{|n|≤N} |⟨V^{z^n_φ}|f⟩|² for a single-sign state given by
/// its ν-profile, against ‖f‖².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub norm_squared: f64,
    /// (N, partial sum)
    pub partial_sums: Vec<(usize, f64)>,
}

pub fn q3_completeness<F>(
    profile: F,
    xi: Sign,
    varphi: f64,
    tau: f64,
    n_max: usize,
    params: &ModelParams,
    tol: f64,
) -> Result<CompletenessReport>
where
    F: Fn(f64) -> Complex64,
{
    let cfg = QuadConfig::with_tol(tol);
    let sec3 = |nu: f64| nu.cos().powi(-3);
    let norm_squared = integrate_finite(|nu: f64| profile(nu).norm_sqr() * sec3(nu), -FRAC_PI_2, FRAC_PI_2, &cfg)?.value;
    let coeff = |n: i64| -> Result<f64> {
        let z = Complex64::new(q3_eigenvalue(n, varphi, params), 0.0);
        let c = integrate_finite(
            |nu: f64| q3_solution(z, xi, tau, nu, params)[xi.index()].conj() * profile(nu) * sec3(nu),
            -FRAC_PI_2,
            FRAC_PI_2,
            &cfg,
        )?;
        Ok(c.value.norm_sqr())
    };
    let mut sum = coeff(0)?;
    let mut partial_sums = vec![(0, sum)];
    for n in 1..=n_max as i64 {
        sum += coeff(n)? + coeff(-n)?;
        partial_sums.push((n as usize, sum));
    }
    Ok(CompletenessReport { norm_squared, partial_sums })
}

/// |⟨V^{z}|f⟩|² for the unit profile f = sqrt(2/π) cos ν · sec^{−3/2}ν (any τ
/// phase), as a function of κ = m z.
pub fn cos_profile_weight(kappa: f64) -> f64 {
    let d = 1.0 - kappa * kappa;
    let r = if d.abs() < 1e-8 {
        PI / 4.0
    } else {
        (0.5 * PI * kappa).cos() / d
    };
    8.0 * r * r / (PI * PI)
}

/// Σ_{|n|>N} of [`cos_profile_weight`] over the lattice z^n_φ.
pub fn cos_profile_tail(n: usize, varphi: f64, params: &ModelParams) -> f64 {
    let m = params.mass();
    let k = |j: i64| m * q3_eigenvalue(j, varphi, params);
    let mut s = 0.0;
    let cutoff = 200_000i64;
    for j in (n as i64 + 1)..=cutoff {
        s += cos_profile_weight(k(j)) + cos_profile_weight(k(-j));
    }
    // remainder: Σ_{j>K} 2·8/(π²(2j)^4) ≈ 1/(3π²K³)
    s + 1.0 / (3.0 * PI * PI * (cutoff as f64).powi(3))
}

/// G_ij = ∫dμ(r) F_i† F_j with F_i(r) = ∫ g_i(t) R^t_φ(r) dt, compared with
/// ∫ g_i g_j dt (windowed δ(t − t′)). Windows are unit-area Gaussians given as
/// (center, width), cut at ±8 widths.
pub fn q0_smeared_gram(windows: &[(f64, f64)], varphi: f64, tau: f64, params: &ModelParams, tol: f64) -> Result<GramComparison> {
    let m = params.mass();
    let (gx, gw) = gauss_legendre(64);
    let t_nodes: Vec<Vec<(f64, f64)>> = windows
        .iter()
        .map(|&(c, w)| {
            gx.iter()
                .zip(&gw)
                .map(|(x, wt)| {
                    let t = c + 8.0 * w * x;
                    (t, wt * 8.0 * w * gaussian(t, c, w))
                })
                .collect()
        })
        .collect();
    // u = ln(r/(E+m)) ∈ (−∞, 0) and dμ(r) = r³ du; r^{3/2}R^t is then r-free up to phases
    let r_of_u = |u: f64| m * (2.0 * u.exp().atanh()).sinh();
    let smeared = |i: usize, u: f64| -> [Complex64; 2] {
        let r = r_of_u(u);
        let amp = r.powf(1.5);
        let mut acc = [ZERO; 2];
        for &(t, g) in &t_nodes[i] {
            let v = q0_radial(t, varphi, tau, r, params);
            acc[0] += v[0] * (g * amp);
            acc[1] += v[1] * (g * amp);
        }
        acc
    };
    let k = windows.len();
    let w_min = windows.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    if !(w_min > 0.0) {
        return Err(Error::Domain("window widths must be positive".into()));
    }
    // F decays like exp(−(m w u)²/2)
    let u_max = 9.0 / (m * w_min);
    let mut numeric = vec![vec![0.0; k]; k];
    let mut expected = vec![vec![0.0; k]; k];
    let cfg = QuadConfig::with_tol(tol);
    for i in 0..k {
        for j in i..k {
            let g = integrate_finite(
                |u: f64| {
                    if u >= 0.0 {
                        return 0.0;
                    }
                    let (a, b) = (smeared(i, u), smeared(j, u));
                    (a[0].conj() * b[0] + a[1].conj() * b[1]).re
                },
                -u_max,
                0.0,
                &cfg,
            )?;
            numeric[i][j] = g.value;
            numeric[j][i] = g.value;
            let (ci, wi) = windows[i];
            let (cj, wj) = windows[j];
            let lo = (ci - 8.0 * wi).max(cj - 8.0 * wj);
            let hi = (ci + 8.0 * wi).min(cj + 8.0 * wj);
            let e = if lo < hi {
                integrate_finite(|t: f64| gaussian(t, ci, wi) * gaussian(t, cj, wj), lo, hi, &cfg)?.value
            } else {
                0.0
            };
            expected[i][j] = e;
            expected[j][i] = e;
        }
    }
    Ok(GramComparison::new(numeric, expected))
}

/// Squared norm of a deficiency solution by quadrature over its chart.
pub fn deficiency_norm_squared(sol: &DeficiencySolution, tol: f64) -> Result<f64> {
    let m = sol.mass;
    let cfg = QuadConfig::with_tol(tol);
    let k = sol.sign.index();
    match sol.which {
        Which::Q0 => Ok(integrate_upper(
            |r: f64| {
                if r == 0.0 {
                    return 0.0;
                }
                sol.eval(r)[k].norm_sqr() * m * r * r / r.hypot(m)
            },
            0.0,
            &cfg,
        )?
        .value),
        Which::Q3 => Ok(integrate_finite(
            |nu: f64| sol.eval(nu)[k].norm_sqr() * nu.cos().powi(-3),
            -FRAC_PI_2,
            FRAC_PI_2,
            &cfg,
        )?
        .value),
    }
}
