//! Property tests over randomly drawn parameters.

use proptest::prelude::*;

use hairhom::cell_psi::CellPsi;
use hairhom::correctors::{corrector_residual, CorrectorParams};
use hairhom::macro_models::{h_of_u0, sink_coefficient, U0Oracle};
use hairhom::{MacroRegime, UptakeLaw};

fn psi() -> &'static CellPsi {
    use std::sync::OnceLock;
    static PSI: OnceLock<CellPsi> = OnceLock::new();
    PSI.get_or_init(|| CellPsi::new(32, 2.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_solves_its_equation(u0 in 0.0f64..50.0, kt in 0.01f64..20.0) {
        let g = UptakeLaw::MichaelisMenten;
        let h = h_of_u0(u0, kt, &g).unwrap();
        prop_assert!(h >= 0.0 && h <= u0 + 1e-15);
        prop_assert!((h + kt * g.g(h) - u0).abs() <= 1e-12 * (1.0 + u0));
    }

    #[test]
    fn distinguished_sink_never_exceeds_standard(kappa in 0.0f64..10.0, d in 0.1f64..10.0, lam in 0.0f64..10.0) {
        let a = sink_coefficient(MacroRegime::A, kappa, d, lam);
        let b = sink_coefficient(MacroRegime::B, kappa, d, lam);
        prop_assert!(b <= a);
        prop_assert!(b >= 0.0);
    }

    #[test]
    fn psi_is_periodic_and_symmetric(x in -0.5f64..0.5, y in -0.5f64..0.5, i in -3i64..3, j in -3i64..3) {
        prop_assume!(x * x + y * y > 1e-4);
        let p = psi();
        let v = p.eval([x, y]).unwrap();
        let shifted = p.eval([x + i as f64, y + j as f64]).unwrap();
        prop_assert!((v - shifted).abs() < 1e-9);
        for w in [[-x, y], [x, -y], [y, x], [-x, -y]] {
            prop_assert!((v - p.eval(w).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn correctors_satisfy_their_problems(
        eps in 0.1f64..0.9,
        rho in 0.1f64..0.45,
        shrink in 0.0f64..3.0,
        kappa in 0.1f64..5.0,
        d in 0.2f64..5.0,
        standard in any::<bool>(),
    ) {
        let regime = if standard { MacroRegime::A } else { MacroRegime::B };
        let a = rho * 0.5 * 10f64.powf(-shrink);
        let p = CorrectorParams::new(regime, eps, a, rho, kappa, d).unwrap();
        let radii: Vec<f64> = (1..6).map(|k| p.r_eps() + (p.outer_radius() - p.r_eps()) * k as f64 / 6.0).collect();
        let res = corrector_residual(&p, &radii).unwrap();
        prop_assert!(res.interior.max(res.robin).max(res.dirichlet) <= 1e-13);
    }

    #[test]
    fn oracle_respects_the_maximum_principle(sink in 0.0f64..20.0, beta in 0.0f64..5.0, l in 0.1f64..0.9) {
        let o = U0Oracle::new(sink, 1.0, beta, l, 1.0, 1.0);
        let mut prev = o.value(0.0);
        prop_assert!(prev >= 0.0);
        for k in 1..=50 {
            let v = o.value(k as f64 / 50.0);
            prop_assert!(v >= prev - 1e-12 && v <= 1.0 + 1e-12);
            prev = v;
        }
    }
}
