mod common;

use std::sync::Arc;

use common::r;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twisted_core::cohomology::{sobolev_norm, GroupCochain};
use twisted_core::linalg::CMatrix;
use twisted_core::mishchenko::{build_projection, lott_pairing_circle, rank_trace, CoverData, RampProfile};
use twisted_core::multiplier::{Gauge, Multiplier};
use twisted_core::phase::{format_rational, parse_rational};
use twisted_core::sampling::{random_element, random_hermitian};
use twisted_core::spectral::eta_closed_form;
use twisted_core::suites::{run_suite, Suite, SuiteContext};
use twisted_core::traces::TraceFunctional;

fn flux() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=9).prop_flat_map(|q| (0..q, Just(q)))
}

fn gauge() -> impl Strategy<Value = Gauge> {
    prop_oneof![Just(Gauge::Landau), Just(Gauge::Symmetric)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn magnetic_multipliers_satisfy_the_algebra_laws((p, q) in flux(), g in gauge(), seed in any::<u64>()) {
        let ctx = SuiteContext {
            multiplier: Arc::new(Multiplier::magnetic(r(p, q), g)),
            samples: 40,
            seed,
        };
        for suite in [Suite::Algebra, Suite::Multiplier] {
            let rep = run_suite(suite, &ctx).unwrap();
            prop_assert!(rep.pass, "{:?}", rep.properties.iter().filter(|x| !x.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn regular_trace_of_a_star_a_is_the_l2_norm((p, q) in flux(), seed in any::<u64>()) {
        let m = Arc::new(Multiplier::magnetic(r(p, q), Gauge::Landau));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&m, &mut rng, 6, 3);
        let v = TraceFunctional::regular(m).evaluate(&a.involution().convolve(&a).unwrap()).unwrap();
        prop_assert!((v - Complex64::new(a.l2_norm().powi(2), 0.0)).norm() <= 1e-12 * a.l1_norm().powi(2).max(1.0));
    }

    #[test]
    fn sobolev_norms_are_monotone_and_submultiplicative(seed in any::<u64>(), s1 in 0.0f64..3.0, ds in 0.0f64..2.0) {
        let m = Arc::new(Multiplier::magnetic(r(1, 3), Gauge::Symmetric));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_element(&m, &mut rng, 5, 4), random_element(&m, &mut rng, 5, 4));
        prop_assert!(sobolev_norm(&a, s1).unwrap() <= sobolev_norm(&a, s1 + ds).unwrap() * (1.0 + 1e-14));
        let ab = a.convolve(&b).unwrap();
        prop_assert!(sobolev_norm(&ab, 0.0).unwrap() <= a.l1_norm() * sobolev_norm(&b, 0.0).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn eta_is_odd_and_half_integral(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let e = eta_closed_form(&a, None).unwrap();
        prop_assert_eq!(eta_closed_form(&a.scale_real(-1.0), None).unwrap(), -e);
        prop_assert_eq!((2.0 * e).fract(), 0.0);
        let shifted = a.add(&CMatrix::identity(n).scale_real(1e3)).unwrap();
        prop_assert_eq!(eta_closed_form(&shifted, None).unwrap(), 0.5 * n as f64);
    }

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = r(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn circle_pairing_counts_winding(w in -3i64..=3, patches in 2usize..=4) {
        let cover = CoverData::circle(512, patches, w, r(1, 20), RampProfile::Smooth).unwrap();
        let v = lott_pairing_circle(&cover, &GroupCochain::linear_z(1, 0)).unwrap();
        prop_assert!((v.value - w as f64).abs() <= 1e-3, "{:?}", v);
    }

    #[test]
    fn torus_projections_are_exact((p, q) in flux(), g in gauge(), w in (-2i64..=2, -2i64..=2)) {
        let cover = CoverData::torus(8, [2, 2], [w.0, w.1], r(1, 16), RampProfile::Cosine).unwrap();
        let m = Arc::new(Multiplier::magnetic(r(p, q), g));
        let proj = build_projection(&cover, m.clone()).unwrap();
        let rep = proj.verify().unwrap();
        prop_assert!(rep.pass() && rep.idempotent.exact_phases && rep.self_adjoint.exact_phases, "{:?}", rep);
        let tr = rank_trace(&proj, &TraceFunctional::regular(m)).unwrap();
        prop_assert!((tr - 1.0).norm() <= 1e-13);
    }
}
