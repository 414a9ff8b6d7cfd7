//! Post-hoc property suite over a finished run: invariant region, speed
//! bounds along characteristics, the C₀ funnel, conservation, and the
//! convergence of the second-order characteristic identities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charcalc::{commutator_residual, decomposition_residual, eigenvalues, stencil_interior, CharError, Residual, Stencil};
use crate::solver::{mass_between, monitor_diagnostics, point_diagnostics, Solution};
use crate::tracer::{sample_field, trace};
use crate::transform::uv_to_phi;
use crate::types::{CharCurve, CharFamily, Grid, RunStatus, UVState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Overrides the run's α for R̃ when set.
    pub alpha: Option<f64>,
    /// Relative slack for strict inequalities.
    pub tol_rel: f64,
    pub tol_rtilde: f64,
    pub tol_u: f64,
    pub mass_tol: f64,
    pub space_stride: usize,
    pub time_stride: usize,
    /// Evaluate every node and snapshot.
    pub full: bool,
    /// Residuals are evaluated at this fraction of the run's final time.
    pub residual_time_fraction: f64,
    pub min_refinement_ratio: f64,
    pub min_control_ratio: f64,
    pub blowup_stability: f64,
    /// Number of interior C± curves traced for the monotonicity checks.
    pub traced_feet: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            alpha: None,
            tol_rel: 1e-6,
            tol_rtilde: 1e-4,
            tol_u: 1e-6,
            mass_tol: 1e-3,
            space_stride: 4,
            time_stride: 4,
            full: false,
            residual_time_fraction: 0.25,
            min_refinement_ratio: 1.7,
            min_control_ratio: 1e2,
            blowup_stability: 0.02,
            traced_feet: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    /// False when the check has nothing to judge (reported as passing).
    pub applicable: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.checks.iter().map(|c| c.name.as_str()).collect()
    }
}

/// Every check the suite emits, in report order.
pub const CHECK_NAMES: &[&str] = &[
    "snapshot_order",
    "rtilde_lower_bound",
    "u_upper_bound",
    "u_lower_bound",
    "hyperbolic_region",
    "mass_conservation",
    "cplus_speed_bound",
    "cminus_speed_bound",
    "lambda_minus_monotone_on_cplus",
    "lambda_plus_monotone_on_cminus",
    "c0_speed_eta1",
    "c0_speed_eta2",
    "c0_funnel",
    "boundary_nesting",
    "eigen_gap_shrink",
    "blowup_before_tstar",
    "blowup_delta_consistency",
    "commutator_negative_control",
    "decomposition_negative_control",
    "commutator_refinement",
    "decomposition_pm_refinement",
    "decomposition_mp_refinement",
    "wave_form_refinement",
    "blowup_resolution_stability",
];

struct Builder {
    checks: Vec<CheckRecord>,
}

impl Builder {
    fn push(&mut self, name: &str, passed: bool, value: f64, threshold: f64, detail: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            passed,
            applicable: true,
            value,
            threshold,
            detail: detail.into(),
        });
    }

    fn skip(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            passed: true,
            applicable: false,
            value: f64::NAN,
            threshold: f64::NAN,
            detail: detail.into(),
        });
    }
}

fn sampled_indices(len: usize, stride: usize) -> Vec<usize> {
    let mut ks: Vec<usize> = (0..len).step_by(stride.max(1)).collect();
    if len > 0 && ks.last() != Some(&(len - 1)) {
        ks.push(len - 1);
    }
    ks
}

pub fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Residuals of the second-order form at snapshot `k`, node `i`, with φ
/// gradients reconstructed from (u, v). `Ok(None)` marks a stencil skipped
/// because Δ is too close to degeneracy.
pub fn wave_form_residual(
    snaps: &[UVState],
    k: usize,
    i: usize,
    delta_floor: f64,
) -> Result<Option<Residual>, CharError> {
    let st = Stencil::new(snaps);
    st.check(k, i)?;
    let mut pt = [[0.0; 3]; 3];
    let mut pr = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let g = uv_to_phi(snaps[k + a - 1].point(i + b - 1))?;
            if g.delta <= delta_floor {
                return Ok(None);
            }
            pt[a][b] = g.phi_t;
            pr[a][b] = g.phi_r;
        }
    }
    let ft = |kk: usize, ii: usize| pt[kk + 1 - k][ii + 1 - i];
    let fr = |kk: usize, ii: usize| pr[kk + 1 - k][ii + 1 - i];
    let phi_tt = st.d_t_of(&ft, k, i);
    let phi_rr = st.d_r_of(&fr, k, i);
    let phi_tr = 0.5 * (st.d_t_of(&fr, k, i) + st.d_r_of(&ft, k, i));
    let (t, r) = (pt[1][1], pr[1][1]);
    let delta = 1.0 + r * r - t * t;
    let terms = [
        (1.0 + r * r) * phi_tt,
        -2.0 * r * t * phi_tr,
        -(1.0 - t * t) * phi_rr,
    ];
    let rhs = r * delta / st.radius(i);
    let value = terms.iter().sum::<f64>() - rhs;
    let scale = terms.iter().map(|x| x.abs()).sum::<f64>() + rhs.abs();
    Ok(Some(Residual { value, scale }))
}

/// Smooth fields that do not solve the system, on the grid and time stamps
/// of `snaps[k−2..=k+2]`.
pub fn control_stack(snaps: &[UVState], k: usize) -> Vec<UVState> {
    snaps[k - 2..=k + 2]
        .iter()
        .map(|s| {
            let t = s.time;
            let r = s.grid.radii();
            UVState {
                time: t,
                grid: s.grid,
                u: r.iter().map(|r| 0.2 + 0.1 * r + 0.05 * t).collect(),
                v: r.iter().map(|r| 3.0 + r * r + 2.0 * t).collect(),
                left_boundary: s.left_boundary,
                right_boundary: s.right_boundary,
            }
        })
        .collect()
}

/// Median relative residuals at one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub time: f64,
    pub points: usize,
    pub skipped: usize,
    pub commutator: f64,
    pub decomposition_pm: f64,
    pub decomposition_mp: f64,
    pub wave_form: f64,
    pub wave_skipped: usize,
}

/// Index of the snapshot nearest `t` that supports a ±2 stencil in time.
pub fn residual_snapshot(snaps: &[UVState], t: f64) -> Option<usize> {
    if snaps.len() < 5 {
        return None;
    }
    let k = snaps.partition_point(|s| s.time < t);
    let k = if k > 0 && k < snaps.len() && (t - snaps[k - 1].time) < (snaps[k].time - t) { k - 1 } else { k };
    Some(k.clamp(2, snaps.len() - 3))
}

pub fn residual_summary(snaps: &[UVState], k: usize, stride: usize, delta_floor: f64) -> ResidualSummary {
    let nodes: Vec<usize> = stencil_interior(snaps, k).step_by(stride.max(1)).collect();
    let rows: Vec<(Option<[f64; 3]>, Option<f64>, bool)> = nodes
        .par_iter()
        .map(|&i| {
            let c = commutator_residual(snaps, k, i).ok();
            let d = decomposition_residual(snaps, k, i).ok();
            let ids = match (c, d) {
                (Some(c), Some((a, b))) => Some([c.relative(), a.relative(), b.relative()]),
                _ => None,
            };
            let (w, wskip) = match wave_form_residual(snaps, k, i, delta_floor) {
                Ok(Some(w)) => (Some(w.relative()), false),
                Ok(None) => (None, true),
                Err(_) => (None, true),
            };
            (ids, w, wskip)
        })
        .collect();
    let mut c = Vec::new();
    let mut pm = Vec::new();
    let mut mp = Vec::new();
    let mut w = Vec::new();
    let mut skipped = 0;
    let mut wave_skipped = 0;
    for (ids, wv, ws) in rows {
        match ids {
            Some([a, b, d]) => {
                c.push(a);
                pm.push(b);
                mp.push(d);
            }
            None => skipped += 1,
        }
        if let Some(x) = wv {
            w.push(x);
        }
        if ws {
            wave_skipped += 1;
        }
    }
    ResidualSummary {
        time: snaps[k].time,
        points: nodes.len(),
        skipped,
        commutator: median(&mut c),
        decomposition_pm: median(&mut pm),
        decomposition_mp: median(&mut mp),
        wave_form: median(&mut w),
        wave_skipped,
    }
}

fn ratio(coarse: f64, fine: f64) -> f64 {
    if fine == 0.0 && coarse == 0.0 {
        f64::INFINITY
    } else {
        coarse / fine
    }
}

fn monotone_violation(values: &[f64], increasing: bool) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(0.0);
    let worst = values
        .windows(2)
        .map(|w| if increasing { w[0] - w[1] } else { w[1] - w[0] })
        .fold(0.0, f64::max);
    (worst, span)
}

/// Values of `λ` along a curve at snapshot times while it is inside the
/// window (with one node of slack).
fn along_curve(curve: &CharCurve, snaps: &[UVState], ks: &[usize], lambda: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut out = Vec::new();
    for &k in ks {
        let s = &snaps[k];
        let Some(r) = curve.position_at(s.time) else { break };
        let w = s.active_range();
        if w.is_empty() {
            break;
        }
        let g = &s.grid;
        let (lo, hi) = (g.radius(w.start) - g.dr(), g.radius(w.end - 1) + g.dr());
        if r < lo || r > hi {
            break;
        }
        let p = sample_field(s, r);
        out.push(lambda(p.u, p.v));
    }
    out
}

pub fn run_property_suite(sol: &Solution, refined: Option<&Solution>, cfg: &VerifyConfig) -> VerifyReport {
    let m = &sol.meta;
    let snaps = &sol.snapshots;
    let alpha = cfg.alpha.unwrap_or(m.alpha);
    let mut b = Builder { checks: Vec::new() };
    let (sstride, tstride) = if cfg.full { (1, 1) } else { (cfg.space_stride, cfg.time_stride) };
    let ks = sampled_indices(snaps.len(), tstride);
    let dr = Grid::new(m.r1, m.r2, m.grid_n).dr();

    let ordered = snaps.windows(2).all(|w| w[1].time > w[0].time);
    b.push("snapshot_order", ordered && !snaps.is_empty(), snaps.len() as f64, 1.0, "snapshot times strictly increasing");

    // Invariant region on every sampled snapshot.
    let mcfg = m.monitor_config(cfg.tol_rtilde, cfg.tol_u);
    let mut rt_min = f64::INFINITY;
    let mut u_max = f64::NEG_INFINITY;
    let mut u_min = f64::INFINITY;
    let mut rt_bad = 0usize;
    let mut non_hyp = 0usize;
    let mut monitored = 0usize;
    for &k in &ks {
        let diag: Vec<_> = point_diagnostics(&snaps[k], alpha).into_iter().step_by(sstride.max(1)).collect();
        let mon = monitor_diagnostics(&diag, &mcfg);
        monitored += diag.len();
        rt_min = rt_min.min(mon.rtilde_min);
        u_max = u_max.max(mon.u_max);
        u_min = u_min.min(mon.u_min);
        rt_bad += diag
            .iter()
            .filter(|d| d.rt_plus.min(d.rt_minus) < -cfg.tol_rtilde * (alpha * d.f / d.r).max(1.0))
            .count();
        non_hyp += diag.iter().filter(|d| !d.hyperbolic).count();
    }
    b.push(
        "rtilde_lower_bound",
        rt_bad == 0,
        rt_min,
        -cfg.tol_rtilde,
        format!("min R̃/max(1, αF/r) over {monitored} points; {rt_bad} below threshold"),
    );
    b.push("u_upper_bound", u_max <= m.u1 + cfg.tol_u, u_max - m.u1, cfg.tol_u, "max u − ū(r1)");
    b.push("u_lower_bound", u_min >= m.u2 - cfg.tol_u, u_min - m.u2, -cfg.tol_u, "min u − ū(r2)");
    b.push("hyperbolic_region", non_hyp == 0, non_hyp as f64, 0.0, "monitored points with D < 0");

    // Conservation between the C₀ curves.
    let m0 = m.initial_mass();
    let mut drift: f64 = 0.0;
    let mut used = 0;
    for s in snaps {
        let (Some(e1), Some(e2)) = (sol.curves.zero_eta1.position_at(s.time), sol.curves.zero_eta2.position_at(s.time)) else {
            break;
        };
        drift = drift.max((mass_between(s, e1, e2) / m0 - 1.0).abs());
        used += 1;
        let vmax = s.active_range().map(|i| s.v[i]).fold(f64::NEG_INFINITY, f64::max);
        if vmax >= m.mass_window_v {
            break;
        }
    }
    b.push(
        "mass_conservation",
        used > 0 && drift <= cfg.mass_tol,
        drift,
        cfg.mass_tol,
        format!("max |M(t)/M(0) − 1| over {used} snapshots until max v >= {}", m.mass_window_v),
    );

    // Speed bounds on the window boundaries.
    let plus_cap = m.u1 + 1.0 / m.v0;
    let minus_floor = m.u2 - 1.0 / m.v0;
    let mut worst_plus = f64::NEG_INFINITY;
    let mut worst_minus = f64::NEG_INFINITY;
    for s in snaps {
        if let Some(r) = sol.curves.plus.position_at(s.time) {
            let p = sample_field(s, r);
            worst_plus = worst_plus.max(eigenvalues(p).0 - plus_cap);
        }
        if let Some(r) = sol.curves.minus.position_at(s.time) {
            let p = sample_field(s, r);
            worst_minus = worst_minus.max(minus_floor - eigenvalues(p).1);
        }
    }
    let tol_speed = cfg.tol_rel * plus_cap.abs().max(1.0);
    b.push("cplus_speed_bound", worst_plus <= tol_speed, worst_plus, tol_speed, "max (u + 1/v) − (ū(r1) + 1/v0) on C₊ from r1");
    b.push("cminus_speed_bound", worst_minus <= tol_speed, worst_minus, tol_speed, "max (ū(r2) − 1/v0) − (u − 1/v) on C₋ from r2");

    // Monotone eigenvalue drift along interior C± curves.
    let n_feet = cfg.traced_feet.max(1);
    let feet: Vec<f64> = (0..n_feet).map(|j| m.r1 + (m.r2 - m.r1) * j as f64 / n_feet as f64).collect();
    let tk = sampled_indices(snaps.len(), tstride);
    let mono = |family: CharFamily, feet: &[f64], increasing: bool| -> (f64, f64, usize) {
        let mut worst_rel: f64 = 0.0;
        let mut worst_abs: f64 = 0.0;
        let mut samples = 0;
        for &f in feet {
            let Ok(c) = trace(family, f, snaps) else { continue };
            let vals = along_curve(&c, snaps, &tk, |u, v| if increasing { u + 1.0 / v } else { u - 1.0 / v });
            samples += vals.len();
            let (w, span) = monotone_violation(&vals, increasing);
            if w > cfg.tol_rel * span {
                worst_rel = worst_rel.max(if span > 0.0 { w / span } else { f64::INFINITY });
            }
            worst_abs = worst_abs.max(w);
        }
        (worst_rel, worst_abs, samples)
    };
    let (rel_p, abs_p, n_p) = mono(CharFamily::Plus, &feet, false);
    b.push(
        "lambda_minus_monotone_on_cplus",
        rel_p == 0.0,
        abs_p,
        cfg.tol_rel,
        format!("largest increase of λ₋ along {n_feet} C₊ curves ({n_p} samples); worst/span {rel_p:e}"),
    );
    let feet_m: Vec<f64> = feet.iter().map(|f| f + (m.r2 - m.r1) / n_feet as f64).collect();
    let (rel_m, abs_m, n_m) = mono(CharFamily::Minus, &feet_m, true);
    b.push(
        "lambda_plus_monotone_on_cminus",
        rel_m == 0.0,
        abs_m,
        cfg.tol_rel,
        format!("largest decrease of λ₊ along {n_feet} C₋ curves ({n_m} samples); worst/span {rel_m:e}"),
    );

    // C₀ speed sandwich, funnel and nesting.
    let lower0 = m.u_eta1 - 1.0 / m.v0;
    let upper0 = m.u_eta2 + 1.0 / m.v0;
    let mut w1 = f64::NEG_INFINITY;
    let mut w2 = f64::NEG_INFINITY;
    for s in snaps {
        if let Some(r) = sol.curves.zero_eta1.position_at(s.time) {
            w1 = w1.max(lower0 - sample_field(s, r).u);
        }
        if let Some(r) = sol.curves.zero_eta2.position_at(s.time) {
            w2 = w2.max(sample_field(s, r).u - upper0);
        }
    }
    let tol0 = cfg.tol_rel * m.u_eta1.abs().max(1.0);
    b.push("c0_speed_eta1", w1 <= tol0, w1, tol0, "max (ū(η1) − 1/v0) − u on C₀ from η1");
    b.push("c0_speed_eta2", w2 <= tol0, w2, tol0, "max u − (ū(η2) + 1/v0) on C₀ from η2");

    let slope = m.u_eta1 - m.u_eta2 - 2.0 / m.v0;
    let mut funnel = f64::NEG_INFINITY;
    let mut nest = f64::NEG_INFINITY;
    for (&(t, a), &(_, c)) in sol.curves.zero_eta1.samples.iter().zip(&sol.curves.zero_eta2.samples) {
        let bound = m.eta2 - m.eta1 - slope * t;
        funnel = funnel.max((c - a) - bound);
        if c - a > dr {
            let left = sol.curves.plus.position_at(t).unwrap_or(f64::NEG_INFINITY);
            let right = sol.curves.minus.position_at(t).unwrap_or(f64::INFINITY);
            nest = nest.max((left - a).max(c - right));
        }
    }
    b.push("c0_funnel", funnel < 2.0 * dr, funnel, 2.0 * dr, "max gap − (η2 − η1 − (ū(η1) − ū(η2) − 2/v0)t)");
    b.push("boundary_nesting", nest < 0.0, nest, 0.0, "max of r₊ − r₀(η1) and r₀(η2) − r₋ before collision");

    // Blow-up.
    let blew = sol.report.run_status == RunStatus::BlewUp;
    let gaps: Vec<f64> = snaps
        .iter()
        .map(|s| 2.0 / s.active_range().map(|i| s.v[i]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    if blew && gaps.len() >= 2 {
        let tail = &gaps[gaps.len() * 3 / 4..];
        let (worst, span) = monotone_violation(tail, false);
        let shrunk = gaps[gaps.len() - 1] < gaps[0];
        b.push(
            "eigen_gap_shrink",
            shrunk && worst <= cfg.tol_rel * span.max(f64::MIN_POSITIVE),
            worst,
            cfg.tol_rel * span,
            format!("min λ₊ − λ₋: {:e} → {:e}; largest rise over the last quarter", gaps[0], gaps[gaps.len() - 1]),
        );
    } else {
        b.skip("eigen_gap_shrink", "run did not blow up");
    }
    match (m.predictions_applicable, m.t_star_bound) {
        (true, Some(ts)) => {
            let tb = sol.report.t_blow_observed.unwrap_or(f64::INFINITY);
            b.push("blowup_before_tstar", blew && tb < ts, tb, ts, format!("status {}", sol.report.run_status.name()));
        }
        _ => b.skip("blowup_before_tstar", "datum fails A1-A3; no prediction"),
    }
    if blew {
        let last = snaps.last().unwrap();
        let dmin = point_diagnostics(last, alpha).iter().map(|d| d.delta).filter(|d| d.is_finite()).fold(f64::INFINITY, f64::min);
        let cap = 10.0 * m.delta_min_stop;
        b.push("blowup_delta_consistency", dmin <= cap, dmin, cap, "reconstructed min Δ at the last snapshot");
    } else {
        b.skip("blowup_delta_consistency", "run did not blow up");
    }

    // Second-order identities.
    let floor = 10.0 * m.delta_min_stop;
    let t_res = cfg.residual_time_fraction * sol.report.t_final;
    match residual_snapshot(snaps, t_res) {
        Some(k) => {
            let sum = residual_summary(snaps, k, sstride, floor);
            let ctl = residual_summary(&control_stack(snaps, k), 2, sstride, floor);
            let rc = ratio(ctl.commutator, sum.commutator);
            b.push(
                "commutator_negative_control",
                rc >= cfg.min_control_ratio,
                rc,
                cfg.min_control_ratio,
                format!("median relative residual {:e} (control {:e}) at t = {}", sum.commutator, ctl.commutator, sum.time),
            );
            let rd = ratio(ctl.decomposition_pm, sum.decomposition_pm).min(ratio(ctl.decomposition_mp, sum.decomposition_mp));
            b.push(
                "decomposition_negative_control",
                rd >= cfg.min_control_ratio,
                rd,
                cfg.min_control_ratio,
                format!(
                    "median relative residuals ({:e}, {:e}), control ({:e}, {:e})",
                    sum.decomposition_pm, sum.decomposition_mp, ctl.decomposition_pm, ctl.decomposition_mp
                ),
            );
            match refined.and_then(|f| residual_snapshot(&f.snapshots, sum.time).map(|kf| (f, kf))) {
                Some((f, kf)) => {
                    let fine = residual_summary(&f.snapshots, kf, sstride, floor);
                    let items = [
                        ("commutator_refinement", sum.commutator, fine.commutator),
                        ("decomposition_pm_refinement", sum.decomposition_pm, fine.decomposition_pm),
                        ("decomposition_mp_refinement", sum.decomposition_mp, fine.decomposition_mp),
                        ("wave_form_refinement", sum.wave_form, fine.wave_form),
                    ];
                    for (name, c, fv) in items {
                        let q = ratio(c, fv);
                        b.push(
                            name,
                            q >= cfg.min_refinement_ratio,
                            q,
                            cfg.min_refinement_ratio,
                            format!(
                                "median {c:e} → {fv:e} at t = {} / {}; skipped {}+{} wave stencils",
                                sum.time, fine.time, sum.wave_skipped, fine.wave_skipped
                            ),
                        );
                    }
                }
                None => {
                    for name in ["commutator_refinement", "decomposition_pm_refinement", "decomposition_mp_refinement", "wave_form_refinement"] {
                        b.skip(name, "no refined run supplied");
                    }
                }
            }
        }
        None => {
            for name in [
                "commutator_negative_control",
                "decomposition_negative_control",
                "commutator_refinement",
                "decomposition_pm_refinement",
                "decomposition_mp_refinement",
                "wave_form_refinement",
            ] {
                b.skip(name, "fewer than 5 snapshots");
            }
        }
    }

    match refined {
        Some(f) => match (sol.report.t_blow_observed, f.report.t_blow_observed) {
            (Some(a), Some(c)) => {
                let rel = (a - c).abs() / c;
                b.push("blowup_resolution_stability", rel <= cfg.blowup_stability, rel, cfg.blowup_stability, format!("t_blow {a} vs {c}"));
            }
            _ => b.skip("blowup_resolution_stability", "a run did not blow up"),
        },
        None => b.skip("blowup_resolution_stability", "no refined run supplied"),
    }

    debug_assert_eq!(b.checks.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), CHECK_NAMES);
    VerifyReport { checks: b.checks }
}
