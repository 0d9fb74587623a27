//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use ptloc_core::classical::{sample_points, verify_bracket_suite, verify_identities};
use ptloc_core::extensions::{classify_domain, q3_eigenvalue, q3_eigenvalue_alt, q3_solution, DomainClass, Which};
use ptloc_core::operators::suite::{commutator_suite, test_state, SuiteChart, TEST_PROFILES};
use ptloc_core::operators::{bump, lagrange_symmetry_defect, Grid, OperatorTag, WaveFunction2};
use ptloc_core::povm::{
    amplitude_p0, hegerfeldt_pn, hegerfeldt_pn_oracle, radial_gaussian_state, tail_analysis, time_kernel,
    time_povm_density, time_povm_normalization, LocalizedStateSpec, OmegaProfile,
};
use ptloc_core::specfun::{conical_p, conical_p_complex, conical_smeared_gram, ConicalOrder};
use ptloc_core::{Error, ModelParams, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 4 sinh²(π/2)/(π sinh π), 30-digit reference.
const P0_UNIT_TAU: f64 = 0.583877311158895749598928098706;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(parts: Vec<(bool, String)>) -> Outcome {
    let passed = parts.iter().all(|p| p.0);
    let detail = parts
        .into_iter()
        .map(|(ok, s)| if ok { s } else { format!("{s} [FAILED]") })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn within_budget(start: Instant, budget: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < budget, format!("runtime {:.2}s < {}s", t.as_secs_f64(), budget.as_secs()))
}

/// Tanh-sinh quadrature on (a, b).
fn tanh_sinh<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64) -> Complex64 {
    let h = 1.0 / 64.0;
    let r = 0.5 * (b - a);
    let mut s = Complex64::new(0.0, 0.0);
    for k in -448..=448 {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let x = u.tanh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        // distance to the nearer endpoint without cancellation
        let gap = r / (u.abs().exp() * u.cosh());
        let node = if x < 0.0 { a + gap } else { b - gap };
        if gap > 0.0 && node > a && node < b {
            s += f(node) * w;
        }
    }
    s * (r * h)
}

fn simpson<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * (h / 3.0)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut zero: f64 = 0.0;
    let mut spacing: f64 = 0.0;
    let mut cont: f64 = 0.0;
    let mut agree: f64 = 0.0;
    for m in [1.0, 2.5] {
        let p = ModelParams::new(m).unwrap();
        for n in -20..=20 {
            zero = zero.max((q3_eigenvalue(n, 0.0, &p) - 2.0 * n as f64 / m).abs());
            for j in 0..=64 {
                let phi = -PI + 2.0 * PI * (j as f64 + 0.5) / 65.0;
                spacing = spacing.max((q3_eigenvalue(n + 1, phi, &p) - q3_eigenvalue(n, phi, &p) - 2.0 / m).abs());
                agree = agree.max((q3_eigenvalue(n, phi, &p) - q3_eigenvalue_alt(n, phi, &p)).abs());
            }
            agree = agree.max((q3_eigenvalue(n, PI, &p) - q3_eigenvalue_alt(n, PI, &p)).abs());
            cont = cont.max((q3_eigenvalue(n, PI, &p) - q3_eigenvalue(n + 1, -PI + 1e-13, &p)).abs());
        }
    }
    outcome(vec![
        (zero <= 1e-14, format!("|z^n_0 - 2n/m| = {zero:.1e} <= 1e-14")),
        (spacing <= 1e-13, format!("spacing error {spacing:.1e}")),
        (cont <= 1e-10, format!("continuity {cont:.1e} <= 1e-10")),
        (agree <= 1e-12, format!("formulas agree to {agree:.1e} <= 1e-12")),
        within_budget(start, Duration::from_secs(1)),
    ])
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = ModelParams::new(1.0).unwrap();
    let exact0 = hegerfeldt_pn(0, 0.0, &p) == 1.0 && (1..=10).all(|n| hegerfeldt_pn(n, 0.0, &p) == 0.0 && hegerfeldt_pn(-n, 0.0, &p) == 0.0);
    let closed = hegerfeldt_pn(0, 1.0, &p);
    let own = (tanh_sinh(|nu: f64| Complex64::from_polar(1.0, nu.cos().ln()), -FRAC_PI_2, FRAC_PI_2) / PI).norm_sqr();
    let lib = hegerfeldt_pn_oracle(0, 1.0, &p, 1e-13).unwrap();
    let dev = (closed - own).abs().max((closed - lib).abs()).max((closed - P0_UNIT_TAU).abs());
    let mut violations = vec![];
    for mt in [1.0, 2.0, 3.0] {
        let best = (0..=50).filter(|&n| n as f64 > mt / 2.0).map(|n| hegerfeldt_pn(n, mt, &p)).fold(0.0, f64::max);
        violations.push((mt, best));
    }
    let mut worst_sum: f64 = 0.0;
    for mt in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let s: f64 = (-50..=50).map(|n| hegerfeldt_pn(n, mt, &p)).sum();
        worst_sum = worst_sum.max((s - 1.0).abs());
    }
    outcome(vec![
        (exact0, "P_0(0) = 1, P_n(0) = 0 exactly".into()),
        (dev < 1e-8, format!("P_0(1/m) = {closed:.10}, closed vs oracles {dev:.1e} < 1e-8")),
        (
            violations.iter().all(|v| v.1 > 1e-6),
            format!(
                "max P_n beyond light cone: {}",
                violations.iter().map(|(mt, b)| format!("m tau={mt}: {b:.3e}")).collect::<Vec<_>>().join(", ")
            ),
        ),
        (worst_sum <= 1e-8, format!("|sum_(|n|<=50) P_n - 1| = {worst_sum:.3e} <= 1e-8")),
        within_budget(start, Duration::from_secs(10)),
    ])
}

fn criterion_3() -> Outcome {
    let p = ModelParams::new(1.3).unwrap();
    let m = p.mass();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let z = rng.gen_range(-5.0..5.0) / m;
        let dz = rng.gen_range(-10.0..10.0) / m;
        let tau = rng.gen_range(0.0..2.0) / m;
        let xi = if rng.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
        let k = xi.index();
        let q = simpson(
            |nu: f64| {
                let a = q3_solution(Complex64::new(z, 0.0), xi, tau, nu, &p)[k];
                let b = q3_solution(Complex64::new(z + dz, 0.0), xi, tau, nu, &p)[k];
                a.conj() * b / nu.cos().powi(3)
            },
            -FRAC_PI_2 + 1e-9,
            FRAC_PI_2 - 1e-9,
            20000,
        );
        let x = 0.5 * m * PI * dz;
        let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
        worst = worst.max((q - Complex64::new(sinc, 0.0)).norm());
    }
    let mut zeros: f64 = 0.0;
    for k in 1..=10 {
        for sgn in [1.0, -1.0] {
            let x = 0.5 * m * PI * sgn * 2.0 * k as f64 / m;
            zeros = zeros.max((x.sin() / x).abs());
            zeros = zeros.max(ptloc_core::povm::position_kernel(0.1, 0.1 + sgn * 2.0 * k as f64 / m, &p).abs());
        }
    }
    outcome(vec![
        (worst < 1e-8, format!("50 pairs: max |<V^z|V^z'> - sinc| = {worst:.1e} < 1e-8")),
        (zeros < 1e-10, format!("zeros at 2k/m: {zeros:.1e} < 1e-10")),
    ])
}

fn criterion_4() -> Outcome {
    let p = ModelParams::new(1.0).unwrap();
    let mut parts = vec![];
    for (c, w, xi) in [(-6.0, 0.8, Sign::Positive), (-5.5, 0.7, Sign::Negative)] {
        let tau = 0.4;
        let psi = radial_gaussian_state(c, w, tau, xi, &p).unwrap();
        match time_povm_normalization(&psi, tau, xi, 1e-7) {
            Ok(rep) => {
                let lib = rep.integral / rep.norm_squared;
                let t = rep.cutoff;
                let own = simpson(|x| Complex64::new(time_povm_density(&psi, x, tau, xi).unwrap(), 0.0), -t, t, 4000).re / rep.norm_squared;
                let dev = (lib - 1.0).abs().max((own - 1.0).abs());
                parts.push((dev <= 1e-5, format!("state u0={c}: integral - 1 = {dev:.1e} (truncation bound {:.1e})", rep.truncation_bound)));
            }
            Err(e) => parts.push((false, format!("state u0={c}: {e}"))),
        }
    }
    let mut worst: f64 = 0.0;
    for xi in [Sign::Positive, Sign::Negative] {
        for mdt in [0.1, 0.2, 0.5, 1.0, 3.0, 10.0, -0.1, -4.0] {
            let k = time_kernel(mdt, 0.0, 0.7, xi, &p, 1e-12).unwrap();
            let expected = 1.0 / (2.0 * PI * mdt);
            worst = worst.max((k.im.abs() - expected.abs()).abs());
        }
    }
    parts.push((worst <= 1e-6, format!("|Im kernel| vs 1/(2 pi (t - t')): {worst:.1e} <= 1e-6")));
    outcome(parts)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let p = ModelParams::new(1.3).unwrap();
    let mut worst: f64 = 0.0;
    let mut min_order = f64::INFINITY;
    let mut count = 0;
    let mut err = None;
    for chart in SuiteChart::ALL {
        let (n, coarse) = chart.default_sizes();
        match commutator_suite(chart, n, coarse, &p) {
            Ok(reps) => {
                for r in reps {
                    worst = worst.max(r.residual);
                    if let Some(o) = r.order {
                        min_order = min_order.min(o);
                    }
                    count += 1;
                }
            }
            Err(e) => err = Some(e.to_string()),
        }
    }
    let mut sym: f64 = 0.0;
    for chart in [SuiteChart::Nu, SuiteChart::Radial] {
        let tag = match chart {
            SuiteChart::Nu => OperatorTag::Q3 { tau: 0.3 },
            _ => OperatorTag::Q0 { tau: 0.3 },
        };
        for i in 0..3 {
            let a = test_state(chart, 512, &TEST_PROFILES[i], &p).unwrap();
            let b = test_state(chart, 512, &TEST_PROFILES[(i + 1) % 3], &p).unwrap();
            let d = lagrange_symmetry_defect(tag, &a, &b).unwrap();
            sym = sym.max(d.norm() / (a.norm() * b.norm()));
        }
    }
    outcome(vec![
        (err.is_none(), err.unwrap_or_else(|| format!("{count} relation/state pairs"))),
        (worst < 1e-6, format!("max relative residual {worst:.1e} < 1e-6")),
        (min_order >= 4.0, format!("min observed order {min_order:.2} >= 4")),
        (sym < 1e-6, format!("symmetry defect of Q0, Q3 {sym:.1e} < 1e-6")),
        within_budget(start, Duration::from_secs(60)),
    ])
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let p = ModelParams::new(1.7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pts = sample_points(&mut rng, 50, false, &p);
    pts.extend(sample_points(&mut rng, 50, true, &p));
    let brackets = verify_bracket_suite(&pts, 0.9, &p);
    let ids = verify_identities(&pts, 0.9, &p);
    let worst_b = brackets.iter().map(|r| r.max_abs_deviation).fold(0.0, f64::max);
    let worst_i = ids.iter().map(|r| r.max_abs_deviation).fold(0.0, f64::max);
    outcome(vec![
        (worst_b <= 1e-12, format!("{} bracket families at 100 points: {worst_b:.1e} <= 1e-12", brackets.len())),
        (worst_i <= 1e-12, format!("q.pi, Q.Pi identities: {worst_i:.1e} <= 1e-12")),
        within_budget(start, Duration::from_secs(1)),
    ])
}

fn criterion_7() -> Outcome {
    let mut parts = vec![];
    for m_z in [0, 1] {
        match conical_smeared_gram(m_z, &[(0.5, 0.1), (1.0, 0.1)], 50.0) {
            Ok(g) => parts.push((g.relative_deviation < 1e-4, format!("m_z={m_z}: smeared Gram deviation {:.1e} < 1e-4", g.relative_deviation))),
            Err(e) => parts.push((false, format!("m_z={m_z}: {e}"))),
        }
    }
    let mut imag: f64 = 0.0;
    let mut agree: f64 = 0.0;
    for m_z in [0, 1, 2, 5] {
        for lam in [0.1, 0.7, 2.0, 6.0] {
            for x in [1.0, 1.2, 1.6, 3.0, 20.0] {
                let o = ConicalOrder::new(m_z, lam).unwrap();
                let c = conical_p_complex(&o, x).unwrap();
                let r = conical_p(&o, x).unwrap();
                let scale = c.norm().max(1e-300);
                imag = imag.max(c.im.abs() / scale);
                agree = agree.max((c.re - r).abs() / scale);
            }
        }
    }
    parts.push((imag < 1e-12, format!("relative imaginary residue {imag:.1e} < 1e-12")));
    parts.push((agree < 1e-12, format!("real and complex paths agree to {agree:.1e}")));
    outcome(parts)
}

fn criterion_8() -> Outcome {
    let p = ModelParams::new(1.0).unwrap();
    let mut parts = vec![];
    let cos = LocalizedStateSpec::new(OmegaProfile::CosPi, &p);
    let mut oracle_dev: f64 = 0.0;
    for z in [0.0, 0.7, 5.0, 33.3] {
        let kappa = PI * z;
        let exact = 2.0 * PI * (kappa / 2.0).cos() / (PI * PI - kappa * kappa) / PI.sqrt();
        oracle_dev = oracle_dev.max((amplitude_p0(&cos, z).unwrap() - exact).norm());
    }
    parts.push((oracle_dev < 1e-10, format!("p0 vs closed form {oracle_dev:.1e}")));
    for (name, profile, s_expected) in [("cos(pi k)", OmegaProfile::CosPi, 2.0), ("(1-4k^2)^2", OmegaProfile::QuarticBump, 3.0)] {
        let spec = LocalizedStateSpec::new(profile, &p);
        match tail_analysis(&spec, [20.0, 60.0]) {
            Ok(rep) => {
                let ratio = rep.a_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                parts.push(((rep.s - s_expected).abs() <= 0.2, format!("{name}: s = {:.3} (expect {s_expected} +- 0.2)", rep.s)));
                parts.push((ratio >= 2.0, format!("{name}: A drops by >= {ratio:.2}x per window")));
            }
            Err(e) => parts.push((false, format!("{name}: {e}"))),
        }
    }
    let flat = LocalizedStateSpec::new(OmegaProfile::Flat, &p);
    let violation = matches!(amplitude_p0(&flat, 1.0), Err(Error::DomainViolation { .. }))
        && matches!(tail_analysis(&flat, [20.0, 60.0]), Err(Error::DomainViolation { .. }));
    parts.push((violation, "F = 1 raises DomainViolation".into()));
    outcome(parts)
}

fn criterion_9() -> Outcome {
    let p = ModelParams::new(1.0).unwrap();
    let classify = |pd: usize, f: &dyn Fn(f64) -> [Complex64; 2], phi: Option<f64>| -> DomainClass {
        let g = Arc::new(Grid::nu_endpoint_samples(8, pd, p).unwrap());
        let psi = WaveFunction2::from_fn(g, |x| f(x[0]));
        classify_domain(&psi, Which::Q3, phi).unwrap().class
    };
    let bump_state = |nu: f64| [Complex64::new(bump(nu, -1.3, 1.2), 0.0), Complex64::new(0.0, 0.5 * bump(nu, -1.0, 1.4))];
    let coarse = classify(6, &bump_state, None);
    let fine = classify(12, &bump_state, None);
    let mut parts = vec![(
        coarse == DomainClass::Closure && fine == coarse,
        format!("bump: {coarse:?} / {fine:?} at 1x / 2x"),
    )];
    let mut ok = true;
    let mut flips = 0;
    for phi in [0.0, 1.1, -2.0, PI] {
        for xi in [Sign::Positive, Sign::Negative] {
            let z = q3_eigenvalue(0, phi, &p);
            let v = |nu: f64| q3_solution(Complex64::new(z, 0.0), xi, 0.5, nu, &p);
            let a = classify(6, &v, Some(phi));
            let b = classify(12, &v, Some(phi));
            ok &= a == DomainClass::Extension(phi) && a != DomainClass::Closure;
            flips += usize::from(a != b);
        }
    }
    parts.push((ok, "V^{z0_phi} -> Extension(phi), not Closure, for 4 angles x 2 signs".into()));
    parts.push((flips == 0, format!("{flips} flips under 2x refinement")));
    outcome(parts)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("eigenvalue lattice", criterion_1),
        ("Hegerfeldt probabilities", criterion_2),
        ("position kernel", criterion_3),
        ("time POVM", criterion_4),
        ("commutator algebra", criterion_5),
        ("classical brackets", criterion_6),
        ("conical functions and CSCO", criterion_7),
        ("localization impossibility", criterion_8),
        ("domain classifier", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.passed);
        println!("{} criterion {} ({name}): {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
