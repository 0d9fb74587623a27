//! Integration measures on the momentum-space charts.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quadrature::{integrate_finite, integrate_line, integrate_upper, Integral, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// dμ(r) = m r²/E dr on (0, ∞).
    Radial,
    /// dμ(ν) = sec³ν dν on (−π/2, π/2).
    Nu,
    /// dμ(ω) = m³ sinh ω dω on (0, ∞).
    Omega,
    /// dμ(π) = m d³π/E on ℝ³.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub kind: MeasureKind,
    pub lo: f64,
    pub hi: f64,
    pub mass: f64,
}

impl Measure {
    pub fn radial(params: &ModelParams) -> Self {
        Self { kind: MeasureKind::Radial, lo: 0.0, hi: f64::INFINITY, mass: params.mass() }
    }

    pub fn nu() -> Self {
        Self { kind: MeasureKind::Nu, lo: -FRAC_PI_2, hi: FRAC_PI_2, mass: 1.0 }
    }

    pub fn omega(params: &ModelParams) -> Self {
        Self { kind: MeasureKind::Omega, lo: 0.0, hi: f64::INFINITY, mass: params.mass() }
    }

    pub fn full(params: &ModelParams) -> Self {
        Self { kind: MeasureKind::Full, lo: f64::NEG_INFINITY, hi: f64::INFINITY, mass: params.mass() }
    }

    /// Restrict a 1-D measure to a subinterval of its domain.
    pub fn restrict(mut self, lo: f64, hi: f64) -> Result<Self> {
        if self.kind == MeasureKind::Full || !(lo < hi) || lo < self.lo || hi > self.hi {
            return Err(Error::Domain(format!(
                "[{lo}, {hi}] is not a subinterval of [{}, {}]",
                self.lo, self.hi
            )));
        }
        self.lo = lo;
        self.hi = hi;
        Ok(self)
    }

    /// Density of the measure at chart coordinate `x` (1-D kinds), or at
    /// momentum magnitude `x` for the full measure (m/E).
    pub fn weight(&self, x: f64) -> f64 {
        let m = self.mass;
        match self.kind {
            MeasureKind::Radial => m * x * x / x.hypot(m),
            MeasureKind::Nu => x.cos().powi(-3),
            MeasureKind::Omega => m.powi(3) * x.sinh(),
            MeasureKind::Full => m / x.hypot(m),
        }
    }

    /// ∫ f dμ over the measure's 1-D domain.
    pub fn integrate<F>(&self, mut f: F, tol: f64) -> Result<Integral<Complex64>>
    where
        F: FnMut(f64) -> Complex64,
    {
        let cfg = QuadConfig::with_tol(tol);
        let w = *self;
        let mut g = move |x: f64| {
            let v = f(x);
            if v.re == 0.0 && v.im == 0.0 {
                v
            } else {
                v * w.weight(x)
            }
        };
        match self.kind {
            MeasureKind::Full => Err(Error::Domain(
                "the full measure is three-dimensional; use integrate_axial".into(),
            )),
            _ if self.hi.is_infinite() => {
                let lo = self.lo;
                integrate_upper(&mut g, lo, &cfg)
            }
            _ => integrate_finite(&mut g, self.lo, self.hi, &cfg),
        }
    }
}

/// ∫ f dμ(π) for an axially symmetric `f(ρ, π³)` in cylindrical coordinates:
/// 2π m ∫dπ³ ∫ρ dρ f/E.
pub fn integrate_axial<F>(f: F, params: &ModelParams, tol: f64) -> Result<Integral<f64>>
where
    F: Fn(f64, f64) -> f64,
{
    let m = params.mass();
    let inner_cfg = QuadConfig::with_tol(tol * 1e-2);
    let cfg = QuadConfig::with_tol(tol);
    let mut failure = None;
    let outer = integrate_line(
        |p3: f64| {
            let inner = integrate_upper(
                |rho: f64| {
                    let v = f(rho, p3);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * rho / (rho * rho + p3 * p3 + m * m).sqrt()
                    }
                },
                0.0,
                &inner_cfg,
            );
            match inner {
                Ok(r) => r.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        &cfg,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Integral { value: 2.0 * PI * m * outer.value, ..outer })
}

/// ∫ f dμ(π) for an axially symmetric `f(ω, ν)` iterated in the hyperbolic
/// chart: 2π ∫dμ(ν) ∫dμ(ω) f.
pub fn integrate_axial_hyperbolic<F>(f: F, params: &ModelParams, tol: f64) -> Result<Integral<f64>>
where
    F: Fn(f64, f64) -> f64,
{
    let m = params.mass();
    let inner_cfg = QuadConfig::with_tol(tol * 1e-2);
    let cfg = QuadConfig::with_tol(tol);
    let mut failure = None;
    let outer = integrate_finite(
        |nu: f64| {
            let inner = integrate_upper(
                |om: f64| {
                    let v = f(om, nu);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * m.powi(3) * om.sinh()
                    }
                },
                0.0,
                &inner_cfg,
            );
            match inner {
                Ok(r) => r.value * nu.cos().powi(-3),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        &cfg,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Integral { value: 2.0 * PI * outer.value, ..outer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn nu_constant_diverges() {
        let r = Measure::nu().integrate(|_| c(1.0), 1e-10);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn nu_cos_cubed() {
        let r = Measure::nu().integrate(|x| c(x.cos().powi(3)), 1e-10).unwrap();
        assert!((r.value.re - PI).abs() < 1e-10);
    }

    #[test]
    fn radial_exponential() {
        let p = ModelParams::new(1.3).unwrap();
        let m = p.mass();
        let r = Measure::radial(&p)
            .integrate(|r| c((-r).exp() * p.energy(r) / (m * r * r)), 1e-10)
            .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn omega_carries_mass_cubed() {
        let p = ModelParams::new(2.0).unwrap();
        let r = Measure::omega(&p).integrate(|w| c((-3.0 * w).exp()), 1e-12).unwrap();
        // m³ ∫ sinh ω e^{−3ω} dω = 8 · 1/8
        assert!((r.value.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn restricted_domain() {
        let mu = Measure::nu().restrict(-0.5, 0.5).unwrap();
        let r = mu.integrate(|x| c(x.cos().powi(3)), 1e-12).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-12);
        assert!(Measure::nu().restrict(-2.0, 0.0).is_err());
    }

    #[test]
    fn full_measure_change_of_variables() {
        let p = ModelParams::new(1.0).unwrap();
        let m = p.mass();
        let tests: [&dyn Fn(f64, f64) -> f64; 3] = [
            &|rho, p3| (-(rho * rho + p3 * p3)).exp(),
            &|rho, p3| (-(rho * rho + 2.0 * p3 * p3) / 2.0).exp() * (1.0 + p3),
            &|rho, p3| 1.0 / (1.0 + rho * rho + p3 * p3).powi(3),
        ];
        for f in tests {
            let cyl = integrate_axial(f, &p, 1e-11).unwrap().value;
            let hyp = integrate_axial_hyperbolic(
                |om, nu| {
                    let rho = m * om.sinh() / nu.cos();
                    f(rho, m * nu.tan())
                },
                &p,
                1e-11,
            )
            .unwrap()
            .value;
            assert!((cyl - hyp).abs() < 1e-8, "{cyl} vs {hyp}");
        }
    }
}
