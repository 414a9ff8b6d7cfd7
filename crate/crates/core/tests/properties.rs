use membrane_core::charcalc::{a12_radical, a22_radical, coefficients, eigenvalues};
use membrane_core::initdata::{check_assumptions, datum_to_uvstate, make_family, FamilyParams};
use membrane_core::solver::point_diagnostics;
use membrane_core::transform::{closure_f, phi_to_uv, s_to_uv, uv_to_phi, SPair};
use membrane_core::types::{Grid, PhiGradients, UVState};
use proptest::prelude::*;

// Oracle: the two roots of x² − Qx + u²v² = 0 are s₁² and s₂², so F is the smaller.
fn min_root(s: SPair) -> f64 {
    (s.s1 * s.s1).min(s.s2 * s.s2)
}

fn spair() -> impl Strategy<Value = SPair> {
    (1e-3f64..=3.0, 1e-3f64..=3.0)
        .prop_filter("separated", |(a, b)| (a - b).abs() >= 1e-3)
        .prop_map(|(s1, s2)| SPair { s1, s2 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn closure_returns_smaller_root(s in spair()) {
        let p = s_to_uv(s);
        let f = closure_f(p).unwrap();
        let want = min_root(s);
        prop_assert!((f - want).abs() <= 1e-9 * (1.0 + want), "F = {f}, want {want}");
    }

    #[test]
    fn quartic_identity(s in spair()) {
        let p = s_to_uv(s);
        let x = closure_f(p).unwrap();
        let q = p.v * p.v - p.u * p.u * p.v * p.v - 1.0;
        let res = x * x - q * x + p.u * p.u * p.v * p.v;
        prop_assert!(res.abs() <= 1e-9 * p.v * p.v, "residual {res}");
    }

    #[test]
    fn phi_round_trip(s in spair()) {
        let p = s_to_uv(s);
        let back = phi_to_uv(uv_to_phi(p).unwrap()).unwrap();
        prop_assert!((back.u - p.u).abs() <= 1e-10 * p.u.abs().max(1e-300) + 1e-15);
        prop_assert!((back.v - p.v).abs() <= 1e-10 * p.v);
    }

    #[test]
    fn delta_recomputation_is_bit_exact(t in -5.0f64..5.0, r in -5.0f64..5.0) {
        let g = PhiGradients::new(t, r);
        let again = PhiGradients::new(g.phi_t, g.phi_r);
        prop_assert_eq!(g.delta.to_bits(), again.delta.to_bits());
        prop_assert_eq!(g.delta.to_bits(), (1.0 + r * r - t * t).to_bits());
    }

    #[test]
    fn eigen_gap(s in spair()) {
        let p = s_to_uv(s);
        let (lp, lm) = eigenvalues(p);
        prop_assert!(lp - lm > 0.0);
        prop_assert!(((lp - lm) - 2.0 / p.v).abs() <= 1e-14 * (1.0 + p.u.abs()));
    }

    #[test]
    fn coefficient_radicals_agree(s in spair()) {
        let p = s_to_uv(s);
        prop_assume!(p.q() - 2.0 * p.u * p.v > 1e-6);
        let c = coefficients(p, 1.0).unwrap();
        let (r12, r22) = (a12_radical(p), a22_radical(p));
        prop_assert!((c.a12 - r12).abs() <= 1e-9 * r12.abs().max(1e-12), "{} vs {r12}", c.a12);
        prop_assert!((c.a22 - r22).abs() <= 1e-9 * r22.abs().max(1e-12), "{} vs {r22}", c.a22);
    }

    #[test]
    fn uvstate_serde_identity(
        u in prop::collection::vec(-1.0f64..1.0, 8),
        v in prop::collection::vec(1.0f64..1e6, 8),
        time in 0.0f64..10.0,
        lb in 0.5f64..1.5,
    ) {
        let s = UVState { time, grid: Grid::new(1.0, 2.0, 8), u, v, left_boundary: lb, right_boundary: 2.0 };
        let text = serde_json::to_string(&s).unwrap();
        let back: UVState = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn family_output_passes_validation(
        drop in 0.2f64..0.5,
        width in 0.1f64..0.3,
        center in 1.2f64..1.5,
        v0 in 20.0f64..100.0,
    ) {
        let p = FamilyParams { drop, width, center, v0, ..FamilyParams::default() };
        if let Ok(d) = make_family(p) {
            let rep = check_assumptions(&d, 1024).unwrap();
            prop_assert!(rep.all_ok(), "{rep:?}");
            // The discrete initial slice sits strictly inside the invariant region.
            let s = datum_to_uvstate(&d, 512).unwrap();
            for pd in point_diagnostics(&s, d.beta) {
                prop_assert!(pd.rt_plus > 0.0 && pd.rt_minus > 0.0, "r = {}: {} {}", pd.r, pd.rt_plus, pd.rt_minus);
            }
        }
    }
}
