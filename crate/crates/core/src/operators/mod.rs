//! Grid-sampled two-component wavefunctions and the differential acting
//! rules of the physical position, momentum and angular-momentum operators.

mod grid;
pub mod suite;

pub use grid::{Axis, Chart, Grid};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Two energy-sign components (ξ = +, ξ = −) sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction2 {
    pub grid: Arc<Grid>,
    pub values: Vec<[Complex64; 2]>,
    /// Proper-time label τ.
    pub tau: f64,
    /// Azimuthal quantum number for axially reduced charts.
    pub m_z: Option<i32>,
}

impl WaveFunction2 {
    pub fn from_fn<F>(grid: Arc<Grid>, f: F) -> Self
    where
        F: Fn(&[f64]) -> [Complex64; 2],
    {
        let values = (0..grid.len()).map(|i| f(&grid.coords(i))).collect();
        Self { grid, values, tau: 0.0, m_z: None }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_m_z(mut self, m_z: i32) -> Self {
        self.m_z = Some(m_z);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn component(&self, k: usize) -> Vec<Complex64> {
        self.values.iter().map(|v| v[k]).collect()
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch("wavefunctions live on different grids".into()))
        }
    }

    /// Physical inner product (φ, ψ) = Σ w φ†ψ.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        let mut s = ZERO;
        for (i, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            s += (a[0].conj() * b[0] + a[1].conj() * b[1]) * self.grid.weight(i);
        }
        Ok(s)
    }

    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (v[0].norm_sqr() + v[1].norm_sqr()) * self.grid.weight(i))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut r = self.clone();
        for v in &mut r.values {
            v[0] *= c;
            v[1] *= c;
        }
        r
    }

    /// self + c·other
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let mut r = self.clone();
        for (v, o) in r.values.iter_mut().zip(&other.values) {
            v[0] += c * o[0];
            v[1] += c * o[1];
        }
        Ok(r)
    }

    /// Restriction to the every-other-node grid.
    pub fn coarsened(&self) -> Option<Self> {
        let coarse = self.grid.coarsened()?;
        let fine_shape = self.grid.shape();
        let values = (0..coarse.len())
            .map(|i| {
                let mi = coarse.multi_index(i);
                let mut idx = 0;
                for (d, k) in mi.iter().enumerate() {
                    idx = idx * fine_shape[d] + 2 * k;
                }
                self.values[idx]
            })
            .collect();
        Some(Self { grid: Arc::new(coarse), values, tau: self.tau, m_z: self.m_z })
    }
}

/// Operator acting rules. Indices follow the four-vector convention
/// (0 = time, 1..3 = space).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OperatorTag {
    Q0 { tau: f64 },
    Q1 { tau: f64 },
    Q2 { tau: f64 },
    Q3 { tau: f64 },
    /// J^{0j}, j ∈ {1, 2, 3}
    J0j(usize),
    /// J^{ij}, i, j ∈ {1, 2, 3}
    Jij(usize, usize),
    /// Π^μ
    Pi(usize),
}

impl OperatorTag {
    pub fn q(mu: usize, tau: f64) -> Self {
        match mu {
            0 => OperatorTag::Q0 { tau },
            1 => OperatorTag::Q1 { tau },
            2 => OperatorTag::Q2 { tau },
            _ => OperatorTag::Q3 { tau },
        }
    }

    /// J^{μν} with the antisymmetry folded into a sign.
    pub fn j(mu: usize, nu: usize) -> (f64, Self) {
        match (mu, nu) {
            (0, j) => (1.0, OperatorTag::J0j(j)),
            (j, 0) => (-1.0, OperatorTag::J0j(j)),
            (i, j) => (1.0, OperatorTag::Jij(i, j)),
        }
    }
}

/// One term of an expected right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Term {
    Identity,
    Op(OperatorTag),
    /// A(Bψ)
    Product(OperatorTag, OperatorTag),
}

/// Σ c_k T_k with complex coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Combination(pub Vec<(Complex64, Term)>);

impl Combination {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn term(mut self, c: Complex64, t: Term) -> Self {
        self.0.push((c, t));
        self
    }

    pub fn apply(&self, psi: &WaveFunction2) -> Result<WaveFunction2> {
        let mut acc = psi.scaled(ZERO);
        for (c, t) in &self.0 {
            let v = match t {
                Term::Identity => psi.clone(),
                Term::Op(a) => apply(*a, psi)?,
                Term::Product(a, b) => apply(*a, &apply(*b, psi)?)?,
            };
            acc = acc.axpy(*c, &v)?;
        }
        Ok(acc)
    }
}

/// σ^a [Σ_k c_k ∂_k + c_0] in native grid coordinates.
struct Rule {
    sigma3: bool,
    deriv: Vec<(usize, Vec<Complex64>)>,
    constant: Vec<Complex64>,
}

fn mismatch(tag: OperatorTag, grid: &Grid) -> Error {
    Error::GridMismatch(format!("{tag:?} has no acting rule on the {} chart", grid.chart.name()))
}

fn build_rule(tag: OperatorTag, psi: &WaveFunction2) -> Result<Rule> {
    let g = &*psi.grid;
    let m = g.params.mass();
    let n = g.len();
    let coords: Vec<Vec<f64>> = (0..n).map(|i| g.coords(i)).collect();
    let field = |f: &dyn Fn(&[f64]) -> Complex64| -> Vec<Complex64> { coords.iter().map(|c| f(c)).collect() };
    let real = |x: f64| Complex64::new(x, 0.0);
    let azimuthal = |sign: f64| -> Result<Rule> {
        let mz = psi.m_z.ok_or_else(|| mismatch(tag, g))?;
        Ok(Rule { sigma3: false, deriv: vec![], constant: vec![real(sign * mz as f64); n] })
    };
    let energy = |c: &[f64]| g.energy(c);

    use Chart::*;
    use OperatorTag::*;
    let rule = match (g.chart, tag) {
        (Radial, Q0 { tau }) => Rule {
            sigma3: true,
            deriv: vec![(0, field(&|c| I * energy(c) / (m * m)))],
            constant: field(&|c| energy(c) / m * (I * 1.5 / m + tau)),
        },
        (Radial, Pi(0)) => Rule { sigma3: true, deriv: vec![], constant: field(&|c| real(energy(c))) },

        (Nu | NuOmega, Q3 { tau }) => Rule {
            sigma3: true,
            deriv: vec![(0, vec![I / m; n])],
            constant: field(&|c| I * 1.5 * c[0].tan() / m + tau * c[0].tan()),
        },
        (Nu | NuOmega, Pi(3)) => Rule { sigma3: true, deriv: vec![], constant: field(&|c| real(m * c[0].tan())) },
        (Nu | NuOmega, Jij(1, 2)) => azimuthal(1.0)?,
        (Nu | NuOmega, Jij(2, 1)) => azimuthal(-1.0)?,

        (NuOmega, Q0 { tau }) => Rule {
            sigma3: true,
            deriv: vec![
                (0, field(&|c| I * energy(c) / (m * m) * c[0].sin() * c[0].cos())),
                (1, field(&|c| I * energy(c) / (m * m) * c[1].tanh() * c[0].cos().powi(2))),
            ],
            constant: field(&|c| energy(c) / m * (I * 1.5 / m + tau)),
        },
        (NuOmega, J0j(3)) => Rule {
            sigma3: false,
            deriv: vec![
                (0, field(&|c| -I * c[1].cosh() * c[0].cos())),
                (1, field(&|c| I * c[1].sinh() * c[0].sin())),
            ],
            constant: vec![ZERO; n],
        },
        (NuOmega, Pi(0)) => Rule { sigma3: true, deriv: vec![], constant: field(&|c| real(energy(c))) },

        (OmegaPhi { .. }, J0j(1)) => Rule {
            sigma3: false,
            deriv: vec![
                (0, field(&|c| -I * c[1].cos())),
                (1, field(&|c| I * c[1].sin() / c[0].tanh())),
            ],
            constant: vec![ZERO; n],
        },
        (OmegaPhi { .. }, J0j(2)) => Rule {
            sigma3: false,
            deriv: vec![
                (0, field(&|c| -I * c[1].sin())),
                (1, field(&|c| -I * c[1].cos() / c[0].tanh())),
            ],
            constant: vec![ZERO; n],
        },
        (OmegaPhi { .. }, Jij(1, 2)) => Rule { sigma3: false, deriv: vec![(1, vec![-I; n])], constant: vec![ZERO; n] },
        (OmegaPhi { .. }, Jij(2, 1)) => Rule { sigma3: false, deriv: vec![(1, vec![I; n])], constant: vec![ZERO; n] },
        (OmegaPhi { .. }, Pi(mu)) if mu < 4 => Rule {
            sigma3: true,
            deriv: vec![],
            constant: field(&|c| {
                let p = g.momentum(c);
                real(if mu == 0 { energy(c) } else { p[mu - 1] })
            }),
        },

        (Cartesian, Q0 { tau }) => Rule {
            sigma3: true,
            deriv: (0..3).map(|k| (k, field(&|c| I * energy(c) / (m * m) * c[k]))).collect(),
            constant: field(&|c| energy(c) / m * (I * 1.5 / m + tau)),
        },
        (Cartesian, Q1 { tau } | Q2 { tau } | Q3 { tau }) => {
            let j = match tag {
                Q1 { .. } => 0,
                Q2 { .. } => 1,
                _ => 2,
            };
            Rule {
                sigma3: true,
                deriv: (0..3)
                    .map(|k| {
                        let delta = if k == j { 1.0 } else { 0.0 };
                        (k, field(&|c| I * (delta + c[j] * c[k] / (m * m))))
                    })
                    .collect(),
                constant: field(&|c| I * 1.5 * c[j] / (m * m) + c[j] * tau / m),
            }
        }
        (Cartesian, J0j(j)) if (1..=3).contains(&j) => Rule {
            sigma3: false,
            deriv: vec![(j - 1, field(&|c| -I * energy(c)))],
            constant: vec![ZERO; n],
        },
        (Cartesian, Jij(i, j)) if (1..=3).contains(&i) && (1..=3).contains(&j) && i != j => Rule {
            sigma3: false,
            deriv: vec![(i - 1, field(&|c| I * c[j - 1])), (j - 1, field(&|c| -I * c[i - 1]))],
            constant: vec![ZERO; n],
        },
        (Cartesian, Pi(mu)) if mu < 4 => Rule {
            sigma3: true,
            deriv: vec![],
            constant: field(&|c| real(if mu == 0 { energy(c) } else { c[mu - 1] })),
        },
        _ => return Err(mismatch(tag, g)),
    };
    Ok(rule)
}

/// Apply the acting rule of `tag` to `psi` by spectral or 8th-order
/// differencing on the wavefunction's grid.
pub fn apply(tag: OperatorTag, psi: &WaveFunction2) -> Result<WaveFunction2> {
    let rule = build_rule(tag, psi)?;
    let g = &*psi.grid;
    let n = psi.len();
    let mut out = vec![[ZERO; 2]; n];
    for k in 0..2 {
        let comp = psi.component(k);
        let mut acc: Vec<Complex64> = comp.iter().zip(&rule.constant).map(|(v, c)| v * c).collect();
        for (axis, coeff) in &rule.deriv {
            let d = g.differentiate(&comp, *axis)?;
            for i in 0..n {
                acc[i] += coeff[i] * d[i];
            }
        }
        let sign = if rule.sigma3 && k == 1 { -1.0 } else { 1.0 };
        for i in 0..n {
            out[i][k] = acc[i] * sign;
        }
    }
    Ok(WaveFunction2 { grid: psi.grid.clone(), values: out, tau: psi.tau, m_z: psi.m_z })
}

/// [`apply`] with a grid-halving check: the result on every other node must
/// agree with the result computed on the coarsened grid to `tol` relative
/// to ‖ψ‖.
pub fn apply_checked(tag: OperatorTag, psi: &WaveFunction2, tol: f64) -> Result<WaveFunction2> {
    let fine = apply(tag, psi)?;
    let coarse_psi = psi
        .coarsened()
        .ok_or_else(|| Error::InsufficientResolution("grid cannot be halved for the resolution check".into()))?;
    let coarse = apply(tag, &coarse_psi)?;
    let restricted = fine.coarsened().expect("coarsening succeeded above");
    let delta = restricted.axpy(Complex64::new(-1.0, 0.0), &coarse)?.norm() / coarse_psi.norm().max(f64::MIN_POSITIVE);
    if delta > tol {
        return Err(Error::ResolutionWarning { delta, tol });
    }
    Ok(fine)
}

/// ‖(AB − BA − C)ψ‖ / ‖ψ‖ under the physical norm.
pub fn commutator_residual(a: OperatorTag, b: OperatorTag, expected: &Combination, psi: &WaveFunction2) -> Result<f64> {
    let ab = apply(a, &apply(b, psi)?)?;
    let ba = apply(b, &apply(a, psi)?)?;
    let c = expected.apply(psi)?;
    let r = ab.axpy(Complex64::new(-1.0, 0.0), &ba)?.axpy(Complex64::new(-1.0, 0.0), &c)?;
    Ok(r.norm() / psi.norm())
}

/// (φ, Aψ) − (Aφ, ψ) under the physical inner product.
pub fn lagrange_symmetry_defect(tag: OperatorTag, phi: &WaveFunction2, psi: &WaveFunction2) -> Result<Complex64> {
    Ok(phi.inner(&apply(tag, psi)?)? - apply(tag, phi)?.inner(psi)?)
}

/// Endpoint form (i/m)[ρ φ†σ³ψ] at the ends of a one-dimensional Chebyshev grid,
/// with ρ = sec³ν (Q3, ν chart) or r³ (Q0, radial chart). For smooth data
/// this equals the Lagrange symmetry defect.
pub fn boundary_form(tag: OperatorTag, phi: &WaveFunction2, psi: &WaveFunction2) -> Result<Complex64> {
    phi.same_grid(psi)?;
    let g = &*psi.grid;
    let m = g.params.mass();
    let rho: Box<dyn Fn(f64) -> f64> = match (g.chart, tag) {
        (Chart::Nu, OperatorTag::Q3 { .. }) => Box::new(|nu: f64| nu.cos().powi(-3)),
        (Chart::Radial, OperatorTag::Q0 { .. }) => Box::new(move |s: f64| (m * s.exp()).powi(3)),
        _ => return Err(mismatch(tag, g)),
    };
    if !matches!(g.axes[0], Axis::Chebyshev { .. }) {
        return Err(Error::GridMismatch("boundary form needs a grid with endpoint nodes".into()));
    }
    let n = g.len();
    let term = |i: usize| {
        let x = g.coords(i)[0];
        let (a, b) = (phi.values[i], psi.values[i]);
        (a[0].conj() * b[0] - a[1].conj() * b[1]) * rho(x)
    };
    Ok(I / m * (term(n - 1) - term(0)))
}

/// Observed algebraic order log(e₁/e₂)/log(n₂/n₁) from two (size, error) pairs.
pub fn observed_order(coarse: (usize, f64), fine: (usize, f64)) -> f64 {
    (coarse.1 / fine.1).ln() / (fine.0 as f64 / coarse.0 as f64).ln()
}

/// C∞ bump exp(1 − 1/(1 − t²)) on (lo, hi), zero outside.
pub fn bump(x: f64, lo: f64, hi: f64) -> f64 {
    let t = (2.0 * x - lo - hi) / (hi - lo);
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}
