use membrane_core::initdata::{make_family, FamilyParams};
use membrane_core::profile::Profile;
use membrane_core::solver::{run, SolverError, SolverParams};
use membrane_core::tracer::trace;
use membrane_core::types::{CharFamily, InitialDatum, RunStatus};
use membrane_core::verify::{run_property_suite, VerifyConfig, CHECK_NAMES};

fn params(n: usize) -> SolverParams {
    SolverParams { grid_n: n, ..SolverParams::default() }
}

#[test]
fn runs_are_deterministic() {
    let d = make_family(FamilyParams::default()).unwrap();
    let a = run(&d, &params(256)).unwrap();
    let b = run(&d, &params(256)).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn retraced_c0_matches_live_curve() {
    let d = make_family(FamilyParams::default()).unwrap();
    let sol = run(&d, &params(256)).unwrap();
    for live in [&sol.curves.zero_eta1, &sol.curves.zero_eta2] {
        let again = trace(CharFamily::Zero, live.foot, &sol.snapshots).unwrap();
        assert_eq!(again.samples, live.samples);
    }
}

#[test]
fn default_family_blows_up_before_bound() {
    let d = make_family(FamilyParams::default()).unwrap();
    let sol = run(&d, &params(512)).unwrap();
    assert_eq!(sol.report.run_status, RunStatus::BlewUp);
    let (tb, ts) = (sol.report.t_blow_observed.unwrap(), sol.report.t_star_bound.unwrap());
    assert!(tb < ts, "{tb} >= {ts}");
    assert_eq!(sol.report.invariant_violations, 0);
    assert!(sol.report.mass_drift_rel < 1e-3);
}

#[test]
fn suite_enumerates_every_check() {
    let d = make_family(FamilyParams::default()).unwrap();
    // n = 256 is too coarse near the spike: a few R̃ samples dip below the tolerance.
    let sol = run(&d, &params(512)).unwrap();
    let rep = run_property_suite(&sol, None, &VerifyConfig::default());
    assert_eq!(rep.names(), CHECK_NAMES);
    for name in ["rtilde_lower_bound", "u_upper_bound", "u_lower_bound", "mass_conservation", "c0_funnel", "blowup_before_tstar"] {
        let c = rep.get(name).unwrap();
        assert!(c.passed && c.applicable, "{c:?}");
    }
    assert!(!rep.get("commutator_refinement").unwrap().applicable);
}

#[test]
fn forced_a2_violation_leaves_invariant_region() {
    let d = InitialDatum {
        r1: 1.0,
        r2: 2.0,
        v0: 10.0,
        profile: Profile::Linear { origin: 1.0, value: 0.5, slope: 0.0 },
        beta: 1.0,
        eta1: 1.3,
        eta2: 1.6,
    };
    let p = SolverParams { t_max: 0.2, ..params(256) };
    assert!(matches!(run(&d, &p), Err(SolverError::AssumptionsFailed { clause: "A2" })));
    let sol = run(&d, &SolverParams { force: true, ..p }).unwrap();
    assert!(!sol.report.predictions_applicable);
    assert!(sol.report.invariant_violations > 0);
    let rep = run_property_suite(&sol, None, &VerifyConfig::default());
    assert!(!rep.get("rtilde_lower_bound").unwrap().passed);
    assert!(!rep.get("blowup_before_tstar").unwrap().applicable);
}
