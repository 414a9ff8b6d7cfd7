//! Time integration of the (u, v) system up to blow-up.
//!
//! The system is advanced in conservation form
//!
//! ```text
//! u_t + (u²/2 − 1/(2v²))_r = −F/(r v²)
//! (r v)_t + (r u v)_r      = 0
//! ```
//!
//! on a vertex-centred finite-volume grid with a characteristic-upwind
//! (Roe-type |A|) face flux, limited linear reconstruction of (u, v) and
//! RK2 midpoint stepping. Every node is evolved; the window between the
//! C₊ curve from r₁ and the C₋ curve from r₂ is a mask for monitoring.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charcalc::rtilde;
use crate::initdata::{check_assumptions, datum_to_uvstate, InitDataError, VALIDATION_SAMPLES};
use crate::tracer::advance;
use crate::transform::{closure_f, closure_f_clamped, reconstructed_delta};
use crate::types::{BlowupReport, CharCurve, CharFamily, InitialDatum, RunStatus, UVPoint, UVState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    FirstOrder,
    Minmod,
    MonotonizedCentral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub cfl: f64,
    pub grid_n: usize,
    pub v_max_stop: f64,
    pub delta_min_stop: f64,
    pub t_max: f64,
    pub snapshot_stride: usize,
    pub alpha: f64,
    pub scheme: Scheme,
    /// Run even if the datum fails A1–A3; predictions are then not applicable.
    pub force: bool,
    pub tol_rtilde: f64,
    pub tol_u: f64,
    /// Conservation drift is measured while max v stays below this.
    pub mass_window_v: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            grid_n: 1024,
            v_max_stop: 1e3,
            delta_min_stop: 1e-6,
            t_max: 10.0,
            snapshot_stride: 1,
            alpha: 1.0,
            scheme: Scheme::MonotonizedCentral,
            force: false,
            tol_rtilde: 1e-4,
            tol_u: 1e-6,
            mass_window_v: 100.0,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidParams(m));
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return bad(format!("cfl = {} not in (0, 0.9]", self.cfl));
        }
        if self.grid_n < 64 {
            return bad(format!("grid_n = {} below 64", self.grid_n));
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be >= 1".into());
        }
        if !(self.t_max >= 0.0) {
            return bad(format!("t_max = {} is negative", self.t_max));
        }
        if !(self.v_max_stop > 0.0 && self.delta_min_stop >= 0.0) {
            return bad("stop thresholds must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),
    #[error("datum fails {clause}; pass force to run anyway")]
    AssumptionsFailed { clause: &'static str },
    #[error("numerical breakdown at t = {t}, r = {r}")]
    NumericalBreakdown { t: f64, r: f64 },
    #[error("empty window at t = {t}")]
    EmptyWindow { t: f64 },
    #[error(transparent)]
    InitData(#[from] InitDataError),
}

/// Constants of a run needed to judge it afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub r1: f64,
    pub r2: f64,
    pub grid_n: usize,
    pub v0: f64,
    pub beta: f64,
    pub alpha: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub u1: f64,
    pub u2: f64,
    pub u_eta1: f64,
    pub u_eta2: f64,
    pub t_star_bound: Option<f64>,
    pub predictions_applicable: bool,
    pub v_max_stop: f64,
    pub delta_min_stop: f64,
    pub mass_window_v: f64,
    pub cfl: f64,
}

impl RunMeta {
    pub fn from_datum(d: &InitialDatum, p: &SolverParams, t_star_bound: Option<f64>, applicable: bool) -> Self {
        Self {
            r1: d.r1,
            r2: d.r2,
            grid_n: p.grid_n,
            v0: d.v0,
            beta: d.beta,
            alpha: p.alpha,
            eta1: d.eta1,
            eta2: d.eta2,
            u1: d.u1(),
            u2: d.u2(),
            u_eta1: d.u_bar(d.eta1),
            u_eta2: d.u_bar(d.eta2),
            t_star_bound,
            predictions_applicable: applicable,
            v_max_stop: p.v_max_stop,
            delta_min_stop: p.delta_min_stop,
            mass_window_v: p.mass_window_v,
            cfl: p.cfl,
        }
    }

    pub fn initial_mass(&self) -> f64 {
        0.5 * self.v0 * (self.eta2 * self.eta2 - self.eta1 * self.eta1)
    }

    pub fn monitor_config(&self, tol_rtilde: f64, tol_u: f64) -> MonitorConfig {
        MonitorConfig { alpha: self.alpha, u1: self.u1, u2: self.u2, tol_rtilde, tol_u }
    }
}

/// Per-step record of the monitored quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub dt: f64,
    pub v_max: f64,
    pub v_max_r: f64,
    pub delta_min: f64,
    pub mass: f64,
    pub rtilde_min: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    pub plus: CharCurve,
    pub minus: CharCurve,
    pub zero_eta1: CharCurve,
    pub zero_eta2: CharCurve,
}

impl CurveSet {
    pub fn all(&self) -> [&CharCurve; 4] {
        [&self.plus, &self.minus, &self.zero_eta1, &self.zero_eta2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub meta: RunMeta,
    pub snapshots: Vec<UVState>,
    pub curves: CurveSet,
    pub history: Vec<StepRecord>,
    pub report: BlowupReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorConfig {
    pub alpha: f64,
    pub u1: f64,
    pub u2: f64,
    pub tol_rtilde: f64,
    pub tol_u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorResult {
    /// Minimum of `R̃± / max(1, αF/r)` over the window.
    pub rtilde_min: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub violations: usize,
}

/// Derived per-node quantities on the active window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointDiag {
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub dv_plus: f64,
    pub dv_minus: f64,
    pub rt_plus: f64,
    pub rt_minus: f64,
    pub f: f64,
    /// `(1 + F)²/v²`; NaN where F is undefined.
    pub delta: f64,
    pub hyperbolic: bool,
}

fn window_derivative(q: &[f64], lo: usize, hi: usize, i: usize, dr: f64) -> f64 {
    let len = hi - lo;
    if len < 2 {
        return 0.0;
    }
    if len == 2 {
        return (q[lo + 1] - q[lo]) / dr;
    }
    if i == lo {
        (-3.0 * q[i] + 4.0 * q[i + 1] - q[i + 2]) / (2.0 * dr)
    } else if i + 1 == hi {
        (3.0 * q[i] - 4.0 * q[i - 1] + q[i - 2]) / (2.0 * dr)
    } else {
        (q[i + 1] - q[i - 1]) / (2.0 * dr)
    }
}

/// `∂±v` from spatial derivatives through the equations of motion:
/// `∂±v = ±v_r/v − v u_r − uv/r`; central inside the window, one-sided at
/// its edges.
pub fn point_diagnostics(state: &UVState, alpha: f64) -> Vec<PointDiag> {
    let w = state.active_range();
    let dr = state.grid.dr();
    w.clone()
        .map(|i| {
            let r = state.grid.radius(i);
            let p = state.point(i);
            let ur = window_derivative(&state.u, w.start, w.end, i, dr);
            let vr = window_derivative(&state.v, w.start, w.end, i, dr);
            let common = -p.v * ur - p.u * p.v / r;
            let dv_plus = vr / p.v + common;
            let dv_minus = -vr / p.v + common;
            let (f, hyperbolic) = match closure_f(p) {
                Ok(f) => (f, true),
                Err(_) => (closure_f_clamped(p), false),
            };
            let (rt_plus, rt_minus) = rtilde(p, dv_plus, dv_minus, r, alpha)
                .unwrap_or((dv_plus - alpha * f / r, dv_minus - alpha * f / r));
            let delta = reconstructed_delta(p).unwrap_or(f64::NAN);
            PointDiag { r, u: p.u, v: p.v, dv_plus, dv_minus, rt_plus, rt_minus, f, delta, hyperbolic }
        })
        .collect()
}

pub fn monitor_diagnostics(diag: &[PointDiag], cfg: &MonitorConfig) -> MonitorResult {
    let mut out = MonitorResult { rtilde_min: f64::INFINITY, u_min: f64::INFINITY, u_max: f64::NEG_INFINITY, violations: 0 };
    for d in diag {
        let scale = (cfg.alpha * d.f / d.r).max(1.0);
        let m = d.rt_plus.min(d.rt_minus) / scale;
        out.rtilde_min = out.rtilde_min.min(m);
        out.u_min = out.u_min.min(d.u);
        out.u_max = out.u_max.max(d.u);
        let bad_r = m < -cfg.tol_rtilde;
        let bad_u = d.u < cfg.u2 - cfg.tol_u || d.u > cfg.u1 + cfg.tol_u;
        if bad_r || bad_u || !d.hyperbolic {
            out.violations += 1;
        }
    }
    out
}

pub fn monitor_invariants(state: &UVState, cfg: &MonitorConfig) -> MonitorResult {
    monitor_diagnostics(&point_diagnostics(state, cfg.alpha), cfg)
}

fn limited(a: f64, b: f64, scheme: Scheme) -> f64 {
    if a * b <= 0.0 {
        return 0.0;
    }
    let s = a.signum();
    match scheme {
        Scheme::FirstOrder => 0.0,
        Scheme::Minmod => s * a.abs().min(b.abs()),
        Scheme::MonotonizedCentral => s * (2.0 * a.abs()).min(2.0 * b.abs()).min(0.5 * (a + b).abs()),
    }
}

fn extend(q: &[f64], out: &mut Vec<f64>, floor: f64) {
    let n = q.len();
    out.clear();
    out.push((3.0 * q[0] - 2.0 * q[1]).max(floor));
    out.push((2.0 * q[0] - q[1]).max(floor));
    out.extend_from_slice(q);
    out.push((2.0 * q[n - 1] - q[n - 2]).max(floor));
    out.push((3.0 * q[n - 1] - 2.0 * q[n - 2]).max(floor));
}

/// Workspace for the semi-discrete operator.
struct Operator {
    radii: Vec<f64>,
    r1: f64,
    dr: f64,
    scheme: Scheme,
    ue: Vec<f64>,
    ve: Vec<f64>,
    su: Vec<f64>,
    sv: Vec<f64>,
    fu: Vec<f64>,
    fm: Vec<f64>,
}

impl Operator {
    fn new(state: &UVState, scheme: Scheme) -> Self {
        let n = state.grid.n;
        Self {
            radii: state.grid.radii(),
            r1: state.grid.r1,
            dr: state.grid.dr(),
            scheme,
            ue: Vec::with_capacity(n + 4),
            ve: Vec::with_capacity(n + 4),
            su: vec![0.0; n + 4],
            sv: vec![0.0; n + 4],
            fu: vec![0.0; n + 1],
            fm: vec![0.0; n + 1],
        }
    }

    /// Time derivatives of (u, v) at every node.
    fn apply(&mut self, u: &[f64], v: &[f64], du: &mut [f64], dv: &mut [f64]) {
        let n = u.len();
        extend(u, &mut self.ue, f64::NEG_INFINITY);
        extend(v, &mut self.ve, f64::MIN_POSITIVE);
        for j in 1..n + 3 {
            self.su[j] = limited(self.ue[j] - self.ue[j - 1], self.ue[j + 1] - self.ue[j], self.scheme);
            self.sv[j] = limited(self.ve[j] - self.ve[j - 1], self.ve[j + 1] - self.ve[j], self.scheme);
        }
        for f in 0..=n {
            let (a, b) = (f + 1, f + 2);
            let ul = self.ue[a] + 0.5 * self.su[a];
            let vl = self.ve[a] + 0.5 * self.sv[a];
            let ur = self.ue[b] - 0.5 * self.su[b];
            let vr = self.ve[b] - 0.5 * self.sv[b];
            let rf = self.r1 + (f as f64 - 0.5) * self.dr;
            let (fu, fm) = face_flux(ul, vl, ur, vr, rf);
            self.fu[f] = fu;
            self.fm[f] = fm;
        }
        for i in 0..n {
            let r = self.radii[i];
            let src = closure_f_clamped(UVPoint::new(u[i], v[i])) / (r * v[i] * v[i]);
            du[i] = -(self.fu[i + 1] - self.fu[i]) / self.dr - src;
            dv[i] = -(self.fm[i + 1] - self.fm[i]) / (self.dr * r);
        }
    }
}

/// Roe-type flux for `(u, m = r v)` with `|A|` evaluated at the face average.
fn face_flux(ul: f64, vl: f64, ur: f64, vr: f64, rf: f64) -> (f64, f64) {
    let flux_u = |u: f64, v: f64| 0.5 * u * u - 0.5 / (v * v);
    let ua = 0.5 * (ul + ur);
    let va = 0.5 * (vl + vr);
    let c = 1.0 / va;
    let (lp, lm) = ((ua + c).abs(), (ua - c).abs());
    let s = 0.5 * (lp + lm);
    let d = 0.5 * (lp - lm) / c;
    let a = 1.0 / (va * va * va * rf);
    let b = rf * va;
    let du = ur - ul;
    let dm = rf * (vr - vl);
    let fu = 0.5 * (flux_u(ul, vl) + flux_u(ur, vr)) - 0.5 * (s * du + d * a * dm);
    let fm = 0.5 * rf * (ul * vl + ur * vr) - 0.5 * (d * b * du + s * dm);
    (fu, fm)
}

/// Largest stable step for the current fields.
pub fn stable_dt(state: &UVState, cfl: f64) -> f64 {
    let speed = state.u.iter().zip(&state.v).map(|(u, v)| u.abs() + 1.0 / v).fold(0.0, f64::max);
    cfl * state.grid.dr() / speed
}

fn check_finite(state: &UVState) -> Result<(), SolverError> {
    for i in 0..state.grid.n {
        let (u, v) = (state.u[i], state.v[i]);
        if !u.is_finite() || !v.is_finite() || v <= 0.0 {
            return Err(SolverError::NumericalBreakdown { t: state.time, r: state.grid.radius(i) });
        }
    }
    Ok(())
}

struct Stepper {
    op: Operator,
    du: Vec<f64>,
    dv: Vec<f64>,
}

impl Stepper {
    fn new(state: &UVState, scheme: Scheme) -> Self {
        let n = state.grid.n;
        Self { op: Operator::new(state, scheme), du: vec![0.0; n], dv: vec![0.0; n] }
    }

    fn fields(&mut self, state: &UVState, dt: f64) -> (Vec<f64>, Vec<f64>) {
        let n = state.grid.n;
        self.op.apply(&state.u, &state.v, &mut self.du, &mut self.dv);
        let mut um = vec![0.0; n];
        let mut vm = vec![0.0; n];
        for i in 0..n {
            um[i] = state.u[i] + 0.5 * dt * self.du[i];
            vm[i] = state.v[i] + 0.5 * dt * self.dv[i];
        }
        self.op.apply(&um, &vm, &mut self.du, &mut self.dv);
        for i in 0..n {
            um[i] = state.u[i] + dt * self.du[i];
            vm[i] = state.v[i] + dt * self.dv[i];
        }
        (um, vm)
    }

    fn step(&mut self, state: &UVState, dt: f64) -> Result<UVState, SolverError> {
        let (u, v) = self.fields(state, dt);
        let mut next = UVState {
            time: state.time + dt,
            grid: state.grid,
            u,
            v,
            left_boundary: state.left_boundary,
            right_boundary: state.right_boundary,
        };
        check_finite(&next)?;
        next.left_boundary = advance(CharFamily::Plus, state.left_boundary, state, &next);
        next.right_boundary = advance(CharFamily::Minus, state.right_boundary, state, &next);
        Ok(next)
    }
}

/// One RK2 step with `Δt = cfl·Δr/max|λ±|`.
pub fn step(state: &UVState, params: &SolverParams) -> Result<UVState, SolverError> {
    params.validate()?;
    if state.active_range().is_empty() {
        return Err(SolverError::EmptyWindow { t: state.time });
    }
    let dt = stable_dt(state, params.cfl);
    Stepper::new(state, params.scheme).step(state, dt)
}

/// ∫ r v dr over `[a, b]` from the node-cell averages `r_i v_i`.
pub fn mass_between(state: &UVState, a: f64, b: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let g = &state.grid;
    let dr = g.dr();
    let lo = (g.coordinate(a) - 0.5).floor().max(0.0) as usize;
    let hi = ((g.coordinate(b) + 0.5).ceil() as usize).min(g.n - 1);
    let mut m = 0.0;
    for i in lo..=hi {
        let r = g.radius(i);
        let overlap = (b.min(r + 0.5 * dr) - a.max(r - 0.5 * dr)).max(0.0);
        m += r * state.v[i] * overlap;
    }
    m
}

fn window_extremes(diag: &[PointDiag]) -> (f64, f64, f64) {
    let mut v_max = f64::NEG_INFINITY;
    let mut v_r = f64::NAN;
    let mut delta_min = f64::INFINITY;
    for d in diag {
        if d.v > v_max {
            v_max = d.v;
            v_r = d.r;
        }
        if d.delta.is_finite() {
            delta_min = delta_min.min(d.delta);
        }
    }
    (v_max, v_r, delta_min)
}

pub fn run(d: &InitialDatum, params: &SolverParams) -> Result<Solution, SolverError> {
    params.validate()?;
    let rep = check_assumptions(d, VALIDATION_SAMPLES)?;
    if let Some(clause) = rep.failing_clause() {
        if !params.force {
            return Err(SolverError::AssumptionsFailed { clause });
        }
    }
    let applicable = rep.all_ok();
    let t_star = if rep.a3_ok { rep.t_star_bound } else { None };
    let meta = RunMeta::from_datum(d, params, t_star, applicable);
    let mcfg = meta.monitor_config(params.tol_rtilde, params.tol_u);

    let mut state = datum_to_uvstate(d, params.grid_n)?;
    let mut stepper = Stepper::new(&state, params.scheme);
    let mut curves = CurveSet {
        plus: CharCurve::new(CharFamily::Plus, d.r1),
        minus: CharCurve::new(CharFamily::Minus, d.r2),
        zero_eta1: CharCurve::new(CharFamily::Zero, d.eta1),
        zero_eta2: CharCurve::new(CharFamily::Zero, d.eta2),
    };
    let (mut e1, mut e2) = (d.eta1, d.eta2);
    let mass0 = mass_between(&state, e1, e2);

    let record = |s: &UVState, dt: f64, e1: f64, e2: f64| {
        let diag = point_diagnostics(s, params.alpha);
        let mon = monitor_diagnostics(&diag, &mcfg);
        let (v_max, v_max_r, delta_min) = window_extremes(&diag);
        StepRecord {
            t: s.time,
            dt,
            v_max,
            v_max_r,
            delta_min,
            mass: mass_between(s, e1, e2),
            rtilde_min: mon.rtilde_min,
            u_min: mon.u_min,
            u_max: mon.u_max,
            violations: mon.violations,
        }
    };

    let mut history = vec![record(&state, 0.0, e1, e2)];
    let mut snapshots = vec![state.clone()];
    let mut steps = 0usize;
    let mut mass_drift: f64 = 0.0;
    let mut t_blow = None;
    let mut uncertainty = None;
    let blown = |rec: &StepRecord| rec.v_max >= params.v_max_stop || rec.delta_min <= params.delta_min_stop;

    let status = loop {
        let last = *history.last().unwrap();
        if blown(&last) {
            if steps > 0 {
                t_blow = Some(last.t - 0.5 * last.dt);
                uncertainty = Some(last.dt);
            } else {
                t_blow = Some(0.0);
                uncertainty = Some(0.0);
            }
            break RunStatus::BlewUp;
        }
        if state.active_range().is_empty() {
            break RunStatus::DomainCollapsed;
        }
        if let (true, Some(ts)) = (applicable, t_star) {
            if state.time > ts {
                break RunStatus::BoundExceeded;
            }
        }
        if state.time >= params.t_max {
            break RunStatus::MaxTimeReached;
        }
        let dt = stable_dt(&state, params.cfl).min(params.t_max - state.time);
        let next = stepper.step(&state, dt)?;
        steps += 1;
        e1 = advance(CharFamily::Zero, e1, &state, &next);
        e2 = advance(CharFamily::Zero, e2, &state, &next);
        let t = next.time;
        curves.plus.samples.push((t, next.left_boundary));
        curves.minus.samples.push((t, next.right_boundary));
        curves.zero_eta1.samples.push((t, e1));
        curves.zero_eta2.samples.push((t, e2));
        let rec = record(&next, dt, e1, e2);
        if last.v_max < params.mass_window_v && mass0 > 0.0 {
            mass_drift = mass_drift.max((rec.mass / mass0 - 1.0).abs());
        }
        history.push(rec);
        state = next;
        if steps.is_multiple_of(params.snapshot_stride) {
            snapshots.push(state.clone());
        }
    };
    if snapshots.last().map(|s| s.time) != Some(state.time) {
        snapshots.push(state.clone());
    }

    let last = history.last().unwrap();
    let report = BlowupReport {
        run_status: status,
        t_blow_observed: t_blow,
        t_blow_uncertainty: uncertainty,
        t_star_bound: t_star,
        predictions_applicable: applicable,
        v_max: last.v_max,
        v_max_location: last.v_max_r,
        delta_min_reconstructed: last.delta_min,
        mass_drift_rel: mass_drift,
        invariant_violations: history.iter().map(|h| h.violations).sum(),
        steps,
        t_final: state.time,
    };
    Ok(Solution { meta, snapshots, curves, history, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initdata::{make_family, FamilyParams};
    use crate::types::Grid;

    fn uniform(u: f64, v: f64, n: usize) -> UVState {
        UVState {
            time: 0.0,
            grid: Grid::new(1.0, 2.0, n),
            u: vec![u; n],
            v: vec![v; n],
            left_boundary: 1.0,
            right_boundary: 2.0,
        }
    }

    #[test]
    fn zero_state_is_fixed_point() {
        let p = SolverParams { grid_n: 64, ..SolverParams::default() };
        let mut s = uniform(0.0, 1.0, 64);
        // The window edges move at unit speed and meet at t = 0.5.
        for _ in 0..60 {
            s = step(&s, &p).unwrap();
        }
        assert!(s.u.iter().all(|&u| u == 0.0));
        assert!(s.v.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn params_validation() {
        assert!(SolverParams { cfl: 0.95, ..SolverParams::default() }.validate().is_err());
        assert!(SolverParams { grid_n: 32, ..SolverParams::default() }.validate().is_err());
        assert!(SolverParams { snapshot_stride: 0, ..SolverParams::default() }.validate().is_err());
        assert!(SolverParams::default().validate().is_ok());
    }

    fn smooth_state(n: usize) -> UVState {
        let grid = Grid::new(1.0, 2.0, n);
        let r = grid.radii();
        UVState {
            time: 0.0,
            grid,
            u: r.iter().map(|r| 0.3 + 0.1 * (3.0 * r).sin()).collect(),
            v: r.iter().map(|r| 4.0 + (2.0 * r).cos()).collect(),
            left_boundary: 1.0,
            right_boundary: 2.0,
        }
    }

    fn rk4_reference(s: &UVState, t: f64, substeps: usize) -> (Vec<f64>, Vec<f64>) {
        let n = s.grid.n;
        let mut op = Operator::new(s, Scheme::MonotonizedCentral);
        let h = t / substeps as f64;
        let (mut u, mut v) = (s.u.clone(), s.v.clone());
        let mut ku = vec![vec![0.0; n]; 4];
        let mut kv = vec![vec![0.0; n]; 4];
        for _ in 0..substeps {
            let mut tu = u.clone();
            let mut tv = v.clone();
            for stage in 0..4 {
                let (a, b) = (&mut ku[stage], &mut kv[stage]);
                op.apply(&tu, &tv, a, b);
                let c = if stage < 2 { 0.5 } else { 1.0 };
                if stage < 3 {
                    for i in 0..n {
                        tu[i] = u[i] + c * h * ku[stage][i];
                        tv[i] = v[i] + c * h * kv[stage][i];
                    }
                }
            }
            for i in 0..n {
                u[i] += h / 6.0 * (ku[0][i] + 2.0 * ku[1][i] + 2.0 * ku[2][i] + ku[3][i]);
                v[i] += h / 6.0 * (kv[0][i] + 2.0 * kv[1][i] + 2.0 * kv[2][i] + kv[3][i]);
            }
        }
        (u, v)
    }

    #[test]
    fn single_step_local_error_is_third_order() {
        let s = smooth_state(128);
        let dt0 = stable_dt(&s, 0.4);
        let err = |dt: f64| {
            let mut st = Stepper::new(&s, Scheme::MonotonizedCentral);
            let next = st.step(&s, dt).unwrap();
            let (u, v) = rk4_reference(&s, dt, 64);
            (0..s.grid.n)
                .map(|i| (next.u[i] - u[i]).abs().max((next.v[i] - v[i]).abs() / v[i]))
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(dt0), err(0.5 * dt0));
        // Local error O(Δt³): halving Δt divides it by about 8, well beyond O(Δt²).
        assert!(e1 / e2 > 5.0, "{e1} {e2}");
        assert!(e1 < dt0 * dt0, "{e1}");
    }

    #[test]
    fn mass_changes_only_by_boundary_fluxes() {
        let s = smooth_state(200);
        let mut st = Stepper::new(&s, Scheme::MonotonizedCentral);
        let dt = stable_dt(&s, 0.4);
        st.op.apply(&s.u, &s.v, &mut st.du, &mut st.dv);
        // Σ dr·r_i dv_i telescopes to −(Fm at the outer faces).
        let (i0, i1) = (40, 120);
        let rate: f64 = (i0..=i1).map(|i| s.grid.radius(i) * st.dv[i] * s.grid.dr()).sum();
        let expected = -(st.op.fm[i1 + 1] - st.op.fm[i0]);
        assert!((rate - expected).abs() < 1e-12 * expected.abs().max(1.0), "{rate} {expected}");
        let _ = dt;
    }

    #[test]
    fn mass_between_full_cells() {
        let s = uniform(0.0, 2.0, 101);
        // ∫ 2r dr over [1.2, 1.6] = 1.6² − 1.2².
        let m = mass_between(&s, 1.2, 1.6);
        assert!((m - (1.6f64.powi(2) - 1.2f64.powi(2))).abs() < 1e-12);
    }

    #[test]
    fn initial_monitor_has_no_violations() {
        let d = make_family(FamilyParams::default()).unwrap();
        let s = datum_to_uvstate(&d, 512).unwrap();
        let cfg = MonitorConfig { alpha: 1.0, u1: d.u1(), u2: d.u2(), tol_rtilde: 1e-4, tol_u: 1e-6 };
        let m = monitor_invariants(&s, &cfg);
        assert_eq!(m.violations, 0);
        assert!(m.rtilde_min > 0.0);
        assert_eq!((m.u_max, m.u_min), (d.u1(), d.u2()));
    }

    #[test]
    fn run_requires_valid_datum_unless_forced() {
        let d = InitialDatum {
            r1: 1.0,
            r2: 3.0,
            v0: 3.0,
            profile: crate::profile::Profile::Linear { origin: 1.0, value: 0.5, slope: 0.0 },
            beta: 1.0,
            eta1: 1.5,
            eta2: 2.0,
        };
        let p = SolverParams { grid_n: 128, t_max: 1.0, ..SolverParams::default() };
        let e = run(&d, &p);
        assert!(matches!(e, Err(SolverError::AssumptionsFailed { clause: "A2" })), "{e:?}");
        let sol = run(&d, &SolverParams { force: true, ..p }).unwrap();
        assert!(!sol.report.predictions_applicable);
        assert_eq!(sol.report.run_status, RunStatus::MaxTimeReached);
        assert!(sol.report.v_max < 10.0, "{}", sol.report.v_max);
    }

    #[test]
    fn zero_time_run_has_one_snapshot() {
        let d = make_family(FamilyParams::default()).unwrap();
        let sol = run(&d, &SolverParams { grid_n: 128, t_max: 0.0, ..SolverParams::default() }).unwrap();
        assert_eq!(sol.snapshots.len(), 1);
        assert_eq!(sol.report.run_status, RunStatus::MaxTimeReached);
        assert_eq!(sol.report.steps, 0);
    }
}
