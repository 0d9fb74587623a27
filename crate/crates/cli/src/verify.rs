//! Invariant checks across all modules, collected into one report.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use ptloc_core::classical::{jacobi_residual, sample_points, verify_bracket_suite, verify_identities};
use ptloc_core::extensions::{
    classify_domain, q0_smeared_gram, q3_eigenvalue, q3_eigenvalue_alt, q3_eigenvalue_from_boundary, q3_solution,
    DomainClass, Which,
};
use ptloc_core::operators::suite::{commutator_suite, SuiteChart};
use ptloc_core::operators::{bump, Grid, WaveFunction2};
use ptloc_core::povm::{
    amplitude_p0, hegerfeldt_pn, hegerfeldt_pn_oracle, hegerfeldt_tail, nu_gaussian_state, position_kernel,
    position_kernel_quadrature, position_povm_density, position_povm_normalization, radial_gaussian_state,
    tail_analysis, time_kernel, time_povm_density, time_povm_normalization, LocalizedStateSpec, OmegaProfile,
};
use ptloc_core::specfun::{conical_p_complex, conical_smeared_gram, ConicalOrder};
use ptloc_core::{Error, ModelParams, Result, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// passes when measured ≤ tolerance
    MaxDeviation,
    /// passes when measured ≥ tolerance (a threshold that must be reached)
    AtLeast,
    /// passes when measured = 1
    Flag,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::MaxDeviation => "max-deviation",
            CheckKind::AtLeast => "at-least",
            CheckKind::Flag => "flag",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub kind: CheckKind,
    pub measured: f64,
    pub tolerance: f64,
    pub truncation_bound: Option<f64>,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

struct Suite {
    tol: Option<f64>,
    group: &'static str,
    checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, name: &str, kind: CheckKind, tolerance: f64, value: Result<(f64, Option<f64>)>) {
        let tolerance = match (kind, self.tol) {
            (CheckKind::MaxDeviation, Some(t)) => tolerance.min(t),
            _ => tolerance,
        };
        let (measured, truncation_bound, error) = match value {
            Ok((v, b)) => (v, b, None),
            Err(e) => (f64::NAN, None, Some(e.to_string())),
        };
        let passed = match kind {
            CheckKind::MaxDeviation => measured <= tolerance,
            CheckKind::AtLeast => measured >= tolerance,
            CheckKind::Flag => measured == 1.0,
        };
        self.checks.push(Check {
            group: self.group.to_string(),
            name: name.to_string(),
            kind,
            measured,
            tolerance,
            truncation_bound,
            passed,
            error,
        });
    }

    fn deviation(&mut self, name: &str, tolerance: f64, value: Result<f64>) {
        self.push(name, CheckKind::MaxDeviation, tolerance, value.map(|v| (v, None)));
    }

    fn bounded(&mut self, name: &str, tolerance: f64, value: Result<(f64, f64)>) {
        self.push(name, CheckKind::MaxDeviation, tolerance, value.map(|(v, b)| (v, Some(b))));
    }

    fn at_least(&mut self, name: &str, threshold: f64, value: Result<f64>) {
        self.push(name, CheckKind::AtLeast, threshold, value.map(|v| (v, None)));
    }

    fn flag(&mut self, name: &str, value: Result<bool>) {
        self.push(name, CheckKind::Flag, 1.0, value.map(|b| (if b { 1.0 } else { 0.0 }, None)));
    }
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

/// Runs every check; numerical errors become failed checks.
pub fn run(cfg: &RunConfig) -> std::result::Result<VerifyReport, Error> {
    let p = ModelParams::new(cfg.mass)?;
    let mut suite = Suite { tol: cfg.tol, group: "", checks: Vec::new() };
    lattice(&mut suite, &p);
    hegerfeldt(&mut suite, &p);
    classical(&mut suite, &p, cfg);
    commutators(&mut suite, &p);
    kernels(&mut suite, &p, cfg);
    orthogonality(&mut suite, &p);
    povm(&mut suite, &p);
    tails(&mut suite, &p);
    domain(&mut suite, &p, cfg.varphi);
    let failed = suite.checks.iter().filter(|c| !c.passed).count();
    Ok(VerifyReport { passed: failed == 0, total: suite.checks.len(), failed, checks: suite.checks })
}

fn lattice(s: &mut Suite, p: &ModelParams) {
    s.group = "lattice";
    let m = p.mass();
    s.deviation("z^n_0 = 2n/m", 1e-14, Ok(max_of((-10..=10).map(|n| (m * q3_eigenvalue(n, 0.0, p) - 2.0 * n as f64).abs()))));
    s.deviation(
        "spacing z^{n+1} - z^n = 2/m",
        1e-13,
        Ok(max_of((-10..10).flat_map(|n| {
            [-2.0, 0.4, 3.0].map(|phi| (m * (q3_eigenvalue(n + 1, phi, p) - q3_eigenvalue(n, phi, p)) - 2.0).abs())
        }))),
    );
    s.deviation(
        "continuity z^n_pi = lim z^{n+1}_{-pi}",
        1e-10,
        Ok(max_of((-5..=5).map(|n| m * (q3_eigenvalue(n, PI, p) - q3_eigenvalue(n + 1, -PI + 1e-12, p)).abs()))),
    );
    let phis: Vec<f64> = (1..=200).map(|j| -PI + 2.0 * PI * j as f64 / 200.0).collect();
    s.deviation(
        "closed forms agree",
        1e-12,
        Ok(max_of(phis.iter().flat_map(|&phi| (-3..=3).map(move |n| (n, phi))).map(|(n, phi)| {
            m * (q3_eigenvalue(n, phi, p) - q3_eigenvalue_alt(n, phi, p)).abs()
        }))),
    );
    s.deviation(
        "boundary condition reproduces the lattice",
        1e-10,
        Ok(max_of(phis.iter().step_by(7).flat_map(|&phi| (-3..=3).map(move |n| (n, phi))).map(|(n, phi)| {
            m * (q3_eigenvalue(n, phi, p) - q3_eigenvalue_from_boundary(n, phi, p)).abs()
        }))),
    );
}

fn hegerfeldt(s: &mut Suite, p: &ModelParams) {
    s.group = "hegerfeldt";
    let m = p.mass();
    s.deviation(
        "P_n(0) = delta_n0",
        1e-15,
        Ok(max_of((-5..=5).map(|n| (hegerfeldt_pn(n, 0.0, p) - if n == 0 { 1.0 } else { 0.0 }).abs()))),
    );
    let p0 = 4.0 * (PI / 2.0).sinh().powi(2) / (PI * PI.sinh());
    s.deviation("P_0(1/m) closed form", 1e-12, Ok((hegerfeldt_pn(0, 1.0 / m, p) - p0).abs()));
    let oracle = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for mt in [0.1, 0.5, 1.0, 2.0, 3.0] {
            for n in -5..=5 {
                let a = hegerfeldt_pn(n, mt / m, p);
                worst = worst.max((a - hegerfeldt_pn_oracle(n, mt / m, p, 1e-13)?).abs());
            }
        }
        Ok(worst)
    };
    s.deviation("closed form vs quadrature oracle", 1e-8, oracle());
    for mt in [1.0, 2.0, 3.0] {
        let beyond = max_of((0..=50).filter(|&n| n as f64 > mt / 2.0).map(|n| hegerfeldt_pn(n, mt / m, p)));
        s.at_least(&format!("causality violation at m tau = {mt}"), 1e-6, Ok(beyond));
    }
    for mt in [0.5, 1.0, 2.0, 3.0] {
        let tau = mt / m;
        let sum: f64 = (-50..=50).map(|n| hegerfeldt_pn(n, tau, p)).sum();
        let tail = hegerfeldt_tail(50, tau, p);
        s.bounded(&format!("sum_|n|<=50 P_n + tail = 1 at m tau = {mt}"), 1e-10, Ok(((sum + tail - 1.0).abs(), tail)));
    }
}

fn classical(s: &mut Suite, p: &ModelParams, cfg: &RunConfig) {
    s.group = "classical";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pts = sample_points(&mut rng, 50, false, p);
    pts.extend(sample_points(&mut rng, 50, true, p));
    let tau = cfg.tau;
    for r in verify_bracket_suite(&pts, tau, p).into_iter().chain(verify_identities(&pts, tau, p)) {
        s.deviation(&r.relation, 1e-12, Ok(r.max_abs_deviation));
    }
    s.deviation("Jacobi identity", 1e-10, Ok(max_of(pts.iter().map(|pt| jacobi_residual(pt, tau, p).abs()))));
}

fn commutators(s: &mut Suite, p: &ModelParams) {
    s.group = "commutators";
    for chart in SuiteChart::ALL {
        let (n, coarse) = chart.default_sizes();
        match commutator_suite(chart, n, coarse, p) {
            Ok(reps) => {
                let mut names: Vec<&str> = reps.iter().map(|r| r.relation.as_str()).collect();
                names.dedup();
                for name in names {
                    let mine: Vec<_> = reps.iter().filter(|r| r.relation == name).collect();
                    let label = format!("{name} ({} chart, {n} points)", chart.name());
                    s.deviation(&label, 1e-6, Ok(max_of(mine.iter().map(|r| r.residual))));
                    let orders: Vec<f64> = mine.iter().filter_map(|r| r.order).collect();
                    if !orders.is_empty() {
                        let worst = orders.iter().cloned().fold(f64::INFINITY, f64::min);
                        s.at_least(&format!("{label} convergence order"), 4.0, Ok(worst));
                    }
                }
            }
            Err(e) => s.deviation(&format!("{} chart suite", chart.name()), 1e-6, Err(e)),
        }
    }
}

fn kernels(s: &mut Suite, p: &ModelParams, cfg: &RunConfig) {
    s.group = "kernels";
    let m = p.mass();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let pairs: Vec<(f64, f64)> = (0..50).map(|_| (rng.gen_range(-5.0..5.0) / m, rng.gen_range(-5.0..5.0) / m)).collect();
    let quad = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &(z1, z2) in &pairs {
            let q = position_kernel_quadrature(z1, z2, cfg.tau, Sign::Positive, p, 1e-12)?;
            worst = worst.max((q - Complex64::new(position_kernel(z1, z2, p), 0.0)).norm());
        }
        Ok(worst)
    };
    s.deviation("position kernel quadrature = sinc (50 random pairs)", 1e-8, quad());
    s.deviation(
        "position kernel zeros at 2k/m",
        1e-10,
        Ok(max_of((1..=10).flat_map(|k| [k, -k]).map(|k| position_kernel(0.3, 0.3 + 2.0 * k as f64 / m, p).abs()))),
    );
    let time = |re: bool| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for xi in [Sign::Positive, Sign::Negative] {
            for mdt in [0.1, 0.37, 1.0, -2.5, 6.0] {
                let dt = mdt / m;
                let k = time_kernel(0.2 + dt, 0.2, cfg.tau, xi, p, 1e-12)?;
                let expected = 1.0 / (2.0 * PI * dt.abs());
                worst = worst.max(if re { k.re.abs() } else { (k.im.abs() - expected).abs() / expected });
            }
        }
        Ok(worst)
    };
    s.deviation("time kernel |Im| = 1/(2 pi |t - t'|), relative", 1e-6, time(false));
    s.deviation("time kernel real part vanishes", 1e-6, time(true));
}

fn orthogonality(s: &mut Suite, p: &ModelParams) {
    s.group = "orthogonality";
    let m = p.mass();
    s.deviation(
        "smeared conical orthogonality, m_z = 0",
        1e-4,
        conical_smeared_gram(0, &[(0.5, 0.1), (1.0, 0.1)], 50.0).map(|g| g.relative_deviation),
    );
    let imag = || -> Result<f64> {
        let mut worst: f64 = 0.0;
        for m_z in [0, 1, 3] {
            for lam in [0.3, 1.0, 4.0] {
                for x in [1.1, 2.0, 10.0] {
                    let v = conical_p_complex(&ConicalOrder::new(m_z, lam)?, x)?;
                    worst = worst.max(v.im.abs() / v.norm().max(f64::MIN_POSITIVE));
                }
            }
        }
        Ok(worst)
    };
    s.deviation("conical function imaginary residue, relative", 1e-12, imag());
    s.deviation(
        "smeared time-eigenfunction orthogonality",
        1e-4,
        q0_smeared_gram(&[(0.0, 0.05 / m), (0.5 / m, 0.05 / m)], 0.3, 0.2, p, 1e-9).map(|g| g.relative_deviation),
    );
}

fn povm(s: &mut Suite, p: &ModelParams) {
    s.group = "povm";
    for (c, w, xi) in [(-6.0, 0.8, Sign::Positive), (-5.5, 0.7, Sign::Negative)] {
        let r = radial_gaussian_state(c, w, 0.4 / p.mass(), xi, p)
            .and_then(|psi| time_povm_normalization(&psi, 0.4 / p.mass(), xi, 1e-7))
            .map(|rep| ((rep.integral / rep.norm_squared - 1.0).abs(), rep.truncation_bound));
        s.bounded(&format!("time POVM normalization (u-Gaussian at {c}, width {w})"), 1e-5, r);
    }
    for (c, w, xi) in [(0.0, 0.2, Sign::Positive), (0.3, 0.15, Sign::Negative)] {
        let r = nu_gaussian_state(c, w, xi, p)
            .and_then(|psi| position_povm_normalization(&psi, 0.5 / p.mass(), xi, 1e-7))
            .map(|rep| ((rep.integral / rep.norm_squared - 1.0).abs(), rep.truncation_bound));
        s.bounded(&format!("position POVM normalization (nu-Gaussian at {c}, width {w})"), 1e-5, r);
    }
    let positivity = || -> Result<f64> {
        let m = p.mass();
        let rs = radial_gaussian_state(-4.0, 0.6, 0.0, Sign::Positive, p)?;
        let ns = nu_gaussian_state(0.1, 0.25, Sign::Negative, p)?;
        let mut lowest = f64::INFINITY;
        for j in -50..50 {
            let x = 0.2 * j as f64 / m;
            lowest = lowest.min(time_povm_density(&rs, x, 0.0, Sign::Positive)?);
            lowest = lowest.min(position_povm_density(&ns, x, 1.0 / m, Sign::Negative)?);
        }
        Ok(lowest)
    };
    s.at_least("POVM densities nonnegative", -1e-12, positivity());
}

fn tails(s: &mut Suite, p: &ModelParams) {
    s.group = "localization";
    let m = p.mass();
    for (name, profile, expected) in [("cos(pi k)", OmegaProfile::CosPi, 2.0), ("(1-4k^2)^2", OmegaProfile::QuarticBump, 3.0)] {
        let spec = LocalizedStateSpec::new(profile, p);
        match tail_analysis(&spec, [20.0 / m, 60.0 / m]) {
            Ok(rep) => {
                s.deviation(&format!("{name}: tail exponent - {expected}"), 0.2, Ok((rep.s - expected).abs()));
                let worst = rep.a_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                s.at_least(&format!("{name}: exponential rate drop per window"), 2.0, Ok(worst));
                s.at_least(&format!("{name}: amplitude beyond m z = 1000"), 1e-15, Ok(rep.far_amplitude));
            }
            Err(e) => s.deviation(&format!("{name}: tail analysis"), 0.2, Err(e)),
        }
    }
    let flat = LocalizedStateSpec::new(OmegaProfile::Flat, p);
    s.flag(
        "flat profile raises DomainViolation",
        Ok(matches!(amplitude_p0(&flat, 1.0 / m), Err(Error::DomainViolation { .. }))
            && matches!(tail_analysis(&flat, [20.0 / m, 60.0 / m]), Err(Error::DomainViolation { .. }))),
    );
}

fn domain(s: &mut Suite, p: &ModelParams, varphi: f64) {
    s.group = "domain";
    let classify = |pd: usize, f: &dyn Fn(f64) -> [Complex64; 2], phi: Option<f64>| -> Result<DomainClass> {
        let g = Arc::new(Grid::nu_endpoint_samples(8, pd, *p)?);
        let psi = WaveFunction2::from_fn(g, |x| f(x[0]));
        Ok(classify_domain(&psi, Which::Q3, phi)?.class)
    };
    let bump_state = |nu: f64| [Complex64::new(bump(nu, -1.2, 1.3), 0.0), Complex64::new(0.0, bump(nu, -1.0, 1.0))];
    let closure = || -> Result<bool> {
        Ok(classify(6, &bump_state, None)? == DomainClass::Closure && classify(12, &bump_state, None)? == DomainClass::Closure)
    };
    s.flag("bump classified as Closure at both resolutions", closure());
    let extension = || -> Result<bool> {
        let z = q3_eigenvalue(0, varphi, p);
        let mut ok = true;
        for xi in [Sign::Positive, Sign::Negative] {
            let v = |nu: f64| q3_solution(Complex64::new(z, 0.0), xi, 0.4, nu, p);
            let a = classify(6, &v, Some(varphi))?;
            let b = classify(12, &v, Some(varphi))?;
            ok &= a == DomainClass::Extension(varphi) && b == a;
        }
        Ok(ok)
    };
    s.flag("eigenfunction classified as Extension(phi), stable under refinement", extension());
}
