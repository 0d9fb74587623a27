//! Commutator catalogue and windowed test states for the operator algebra.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bump, commutator_residual, observed_order, Combination, Grid, OperatorTag, Term, WaveFunction2};
use crate::error::Result;
use crate::params::ModelParams;

/// Windowed Gaussian profiles (center, width, wavenumber) for both components.
pub type Profile = [(f64, f64, f64); 2];

pub const TEST_PROFILES: [Profile; 3] = [
    [(0.0, 0.3, 0.0), (0.2, 0.25, 1.0)],
    [(-0.4, 0.2, 2.0), (0.1, 0.3, -1.5)],
    [(0.5, 0.25, -3.0), (-0.3, 0.2, 0.5)],
];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Gaussian times a C^∞ bump vanishing with all derivatives at lo and hi.
pub fn windowed(x: f64, lo: f64, hi: f64, (c0, w, k): (f64, f64, f64)) -> Complex64 {
    Complex64::from_polar(bump(x, lo, hi) * (-(x - c0).powi(2) / (2.0 * w * w)).exp(), k * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuiteChart {
    /// ν chart, m_z = 2
    Nu,
    Radial,
    NuOmega,
    OmegaPhi,
}

impl SuiteChart {
    pub const ALL: [SuiteChart; 4] = [SuiteChart::Nu, SuiteChart::Radial, SuiteChart::NuOmega, SuiteChart::OmegaPhi];

    /// (fine size, (coarse sizes for the order estimate)).
    pub fn default_sizes(&self) -> (usize, (usize, usize)) {
        match self {
            SuiteChart::Nu | SuiteChart::Radial => (512, (32, 64)),
            SuiteChart::NuOmega | SuiteChart::OmegaPhi => (256, (64, 128)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SuiteChart::Nu => "nu",
            SuiteChart::Radial => "radial",
            SuiteChart::NuOmega => "nu-omega",
            SuiteChart::OmegaPhi => "omega-phi",
        }
    }
}

/// Test state `profile` on an n-point (or n×n) grid of `chart`.
pub fn test_state(chart: SuiteChart, n: usize, s: &Profile, params: &ModelParams) -> Result<WaveFunction2> {
    let p = *params;
    Ok(match chart {
        SuiteChart::Nu => {
            let g = Arc::new(Grid::nu_chebyshev(-1.4, 1.4, n, p)?);
            WaveFunction2::from_fn(g, |x| [windowed(x[0], -1.4, 1.4, s[0]), windowed(x[0], -1.4, 1.4, s[1])]).with_m_z(2)
        }
        SuiteChart::Radial => {
            let m = p.mass();
            let (lo, hi) = ((0.05f64).ln(), (40.0f64).ln());
            let g = Arc::new(Grid::radial_chebyshev(0.05 * m, 40.0 * m, n, p)?);
            let shift = |(c0, w, k): (f64, f64, f64)| (1.5 * c0 + 0.5, 2.5 * w, k);
            WaveFunction2::from_fn(g, |x| [windowed(x[0], lo, hi, shift(s[0])), windowed(x[0], lo, hi, shift(s[1]))])
        }
        SuiteChart::NuOmega => {
            let g = Arc::new(Grid::nu_omega_uniform((-1.3, 1.3), (0.1, 3.1), n, p)?);
            let f = |x: &[f64], (c0, w, k): (f64, f64, f64)| {
                windowed(x[0], -1.3, 1.3, (0.6 * c0, 0.6 * w, k)) * windowed(x[1], 0.1, 3.1, (1.6 + 0.6 * c0, 0.6 * w, -k))
            };
            WaveFunction2::from_fn(g, |x| [f(x, s[0]), f(x, s[1])])
        }
        SuiteChart::OmegaPhi => {
            let g = Arc::new(Grid::omega_phi_uniform(0.4, (0.2, 3.2), n, n, p)?);
            let f = |x: &[f64], (c0, w, k): (f64, f64, f64)| {
                windowed(x[0], 0.2, 3.2, (1.7 + c0, 1.5 * w, k)) * c(1.0 + 0.5 * (x[1] + c0).cos(), 0.3 * (2.0 * x[1]).sin())
            };
            WaveFunction2::from_fn(g, |x| [f(x, s[0]), f(x, s[1])])
        }
    })
}

#[derive(Debug, Clone)]
pub struct CommutatorCase {
    pub name: &'static str,
    pub a: OperatorTag,
    pub b: OperatorTag,
    pub rhs: Combination,
}

/// Commutation relations checkable on `chart`.
pub fn commutator_cases(chart: SuiteChart, params: &ModelParams) -> Vec<CommutatorCase> {
    let m = params.mass();
    let m2 = m * m;
    let (i, mi) = (c(0.0, 1.0), c(0.0, -1.0));
    match chart {
        SuiteChart::Nu => {
            let q3 = OperatorTag::Q3 { tau: 0.7 };
            vec![
                CommutatorCase {
                    name: "[Q3,Pi3] = i(1 + Pi3 Pi3/m^2)",
                    a: q3,
                    b: OperatorTag::Pi(3),
                    rhs: Combination::zero()
                        .term(i, Term::Identity)
                        .term(i / m2, Term::Product(OperatorTag::Pi(3), OperatorTag::Pi(3))),
                },
                CommutatorCase { name: "[J12,Q3] = 0", a: OperatorTag::Jij(1, 2), b: q3, rhs: Combination::zero() },
            ]
        }
        SuiteChart::Radial => vec![CommutatorCase {
            name: "[Q0,Pi0] = i(-1 + Pi0 Pi0/m^2)",
            a: OperatorTag::Q0 { tau: 1.0 / m },
            b: OperatorTag::Pi(0),
            rhs: Combination::zero()
                .term(mi, Term::Identity)
                .term(i / m2, Term::Product(OperatorTag::Pi(0), OperatorTag::Pi(0))),
        }],
        SuiteChart::NuOmega => {
            let tau = 0.4;
            let (q0, q3) = (OperatorTag::Q0 { tau }, OperatorTag::Q3 { tau });
            let j03 = OperatorTag::J0j(3);
            vec![
                CommutatorCase { name: "[J03,Q3] = -i Q0", a: j03, b: q3, rhs: Combination::zero().term(mi, Term::Op(q0)) },
                CommutatorCase { name: "[J03,Q0] = -i Q3", a: j03, b: q0, rhs: Combination::zero().term(mi, Term::Op(q3)) },
                CommutatorCase { name: "[Q3,Q0] = -i J03/m^2", a: q3, b: q0, rhs: Combination::zero().term(mi / m2, Term::Op(j03)) },
                CommutatorCase {
                    name: "[J03,Pi3] = -i Pi0",
                    a: j03,
                    b: OperatorTag::Pi(3),
                    rhs: Combination::zero().term(mi, Term::Op(OperatorTag::Pi(0))),
                },
                CommutatorCase {
                    name: "[Q3,Pi0] = i Pi3 Pi0/m^2",
                    a: q3,
                    b: OperatorTag::Pi(0),
                    rhs: Combination::zero().term(i / m2, Term::Product(OperatorTag::Pi(3), OperatorTag::Pi(0))),
                },
            ]
        }
        SuiteChart::OmegaPhi => {
            let (j01, j02, j12) = (OperatorTag::J0j(1), OperatorTag::J0j(2), OperatorTag::Jij(1, 2));
            vec![
                CommutatorCase { name: "[J01,J02] = -i J12", a: j01, b: j02, rhs: Combination::zero().term(mi, Term::Op(j12)) },
                CommutatorCase { name: "[J12,J01] = i J02", a: j12, b: j01, rhs: Combination::zero().term(i, Term::Op(j02)) },
                CommutatorCase {
                    name: "[J01,Pi1] = -i Pi0",
                    a: j01,
                    b: OperatorTag::Pi(1),
                    rhs: Combination::zero().term(mi, Term::Op(OperatorTag::Pi(0))),
                },
                CommutatorCase {
                    name: "[J12,Pi1] = i Pi2",
                    a: j12,
                    b: OperatorTag::Pi(1),
                    rhs: Combination::zero().term(i, Term::Op(OperatorTag::Pi(2))),
                },
            ]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub relation: String,
    pub chart: SuiteChart,
    pub state: usize,
    pub grid_points: usize,
    pub residual: f64,
    /// Observed order from the coarse pair; None when the coarse residual
    /// already sits at roundoff (purely multiplicative identities).
    pub order: Option<f64>,
}

/// Residual below which a relation counts as exact at the coarse level.
pub const ROUNDOFF_RESIDUAL: f64 = 1e-10;

/// Every case on `chart` for every test profile.
pub fn commutator_suite(chart: SuiteChart, n: usize, coarse: (usize, usize), params: &ModelParams) -> Result<Vec<CommutatorReport>> {
    let mut out = Vec::new();
    for case in commutator_cases(chart, params) {
        for (k, s) in TEST_PROFILES.iter().enumerate() {
            let residual = commutator_residual(case.a, case.b, &case.rhs, &test_state(chart, n, s, params)?)?;
            let r1 = commutator_residual(case.a, case.b, &case.rhs, &test_state(chart, coarse.0, s, params)?)?;
            let r2 = commutator_residual(case.a, case.b, &case.rhs, &test_state(chart, coarse.1, s, params)?)?;
            let order = (r1 > ROUNDOFF_RESIDUAL).then(|| observed_order((coarse.0, r1), (coarse.1, r2)));
            out.push(CommutatorReport { relation: case.name.to_string(), chart, state: k, grid_points: n, residual, order });
        }
    }
    Ok(out)
}
