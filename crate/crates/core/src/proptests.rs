use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classical::{sample_points, verify_bracket_suite, verify_identities};
use crate::extensions::{
    q3_eigenvalue, q3_eigenvalue_alt, q3_inner_product_closed, wrap_angle, ExtensionParamQ3,
};
use crate::povm::{
    amplitude_p0, hegerfeldt_pn, hegerfeldt_tail, position_kernel, time_kernel, LocalizedStateSpec, OmegaProfile,
};
use crate::{ModelParams, Sign};

fn mass() -> impl Strategy<Value = f64> {
    0.2f64..5.0
}

fn angle() -> impl Strategy<Value = f64> {
    (-PI + 1e-9)..=PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pn_is_a_symmetric_probability(m in mass(), mt in 0.0f64..6.0, n in -40i64..40) {
        let p = ModelParams::new(m).unwrap();
        let a = hegerfeldt_pn(n, mt / m, &p);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert_eq!(a, hegerfeldt_pn(-n, mt / m, &p));
    }

    #[test]
    fn pn_sums_to_one_with_tail(m in mass(), mt in 0.0f64..6.0, n_max in 0usize..200) {
        let p = ModelParams::new(m).unwrap();
        let tau = mt / m;
        let n = n_max as i64;
        let s: f64 = (-n..=n).map(|k| hegerfeldt_pn(k, tau, &p)).sum();
        prop_assert!((s + hegerfeldt_tail(n_max, tau, &p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pn_depends_on_m_tau_only(m in mass(), mt in 0.0f64..6.0, n in -10i64..10) {
        let a = hegerfeldt_pn(n, mt / m, &ModelParams::new(m).unwrap());
        let b = hegerfeldt_pn(n, mt, &ModelParams::new(1.0).unwrap());
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn lattice_spacing_and_monotonicity(m in mass(), phi in angle(), dphi in 1e-3f64..1.0, n in -100i64..100) {
        let p = ModelParams::new(m).unwrap();
        let z = q3_eigenvalue(n, phi, &p);
        prop_assert!((q3_eigenvalue(n + 1, phi, &p) - z - 2.0 / m).abs() < 1e-12 * (1.0 + z.abs() * m));
        prop_assert!((q3_eigenvalue_alt(n, phi, &p) - z).abs() < 1e-12 * (1.0 + z.abs()));
        if phi + dphi <= PI {
            prop_assert!(q3_eigenvalue(n, phi + dphi, &p) > z);
        }
        prop_assert!(m * (z - 2.0 * n as f64 / m).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn wrapped_angles_stay_in_range(a in -100.0f64..100.0) {
        let w = wrap_angle(a);
        prop_assert!(w > -PI && w <= PI);
        prop_assert!(((a - w) / (2.0 * PI) - ((a - w) / (2.0 * PI)).round()).abs() < 1e-9);
    }

    #[test]
    fn general_extension_is_unitary(a in angle(), b in angle(), c in angle(), d in angle()) {
        let u = ExtensionParamQ3::general(a, b, c, d).unwrap().matrix();
        for i in 0..2 {
            for j in 0..2 {
                let s: Complex64 = (0..2).map(|k| u[k][i].conj() * u[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((s - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn position_kernel_is_bounded_symmetric(m in mass(), z in -20.0f64..20.0, dz in -20.0f64..20.0, k in 1i64..30) {
        let p = ModelParams::new(m).unwrap();
        let a = position_kernel(z, z + dz, &p);
        prop_assert!(a.abs() <= 1.0);
        prop_assert_eq!(a, position_kernel(z + dz, z, &p));
        prop_assert!(position_kernel(z, z + 2.0 * k as f64 / m, &p).abs() < 1e-10);
        let closed = q3_inner_product_closed(z, z + dz, Sign::Positive, Sign::Positive, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), &p);
        prop_assert!((closed.re / PI - a).abs() < 1e-12);
    }

    #[test]
    fn time_kernel_is_antisymmetric(m in mass(), t in -3.0f64..3.0, dt in 0.1f64..8.0, tau in 0.0f64..2.0) {
        let p = ModelParams::new(m).unwrap();
        let a = time_kernel(t, t + dt / m, tau, Sign::Positive, &p, 1e-11).unwrap();
        let b = time_kernel(t + dt / m, t, tau, Sign::Positive, &p, 1e-11).unwrap();
        prop_assert!((a.im + b.im).abs() < 1e-7 * a.im.abs().max(1.0));
        prop_assert!((a.im.abs() - m / (2.0 * PI * dt)).abs() < 1e-6 * m / dt);
    }

    #[test]
    fn even_profiles_give_even_amplitudes(c0 in -2.0f64..2.0, c2 in -2.0f64..2.0, z in 0.0f64..40.0) {
        // (1 − 4k²)(c0 + c2 k² + 1) vanishes at the endpoints
        let coeffs = vec![1.0 + c0, 0.0, c2 - 4.0 * (1.0 + c0), 0.0, -4.0 * c2];
        let spec = LocalizedStateSpec::new(OmegaProfile::Polynomial(coeffs), &ModelParams::new(1.0).unwrap());
        let a = amplitude_p0(&spec, z).unwrap();
        let b = amplitude_p0(&spec, -z).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
        prop_assert!(a.im.abs() < 1e-12);
    }

    #[test]
    fn classical_algebra_at_random_points(seed in any::<u64>(), m in mass(), tau in -2.0f64..2.0) {
        let p = ModelParams::new(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = sample_points(&mut rng, 4, false, &p);
        pts.extend(sample_points(&mut rng, 4, true, &p));
        for r in verify_bracket_suite(&pts, tau, &p).into_iter().chain(verify_identities(&pts, tau, &p)) {
            let scale = 1.0 + r.lhs.abs().max(r.rhs.abs());
            prop_assert!(r.max_abs_deviation < 1e-10 * scale, "{:?}", r);
        }
    }
}
