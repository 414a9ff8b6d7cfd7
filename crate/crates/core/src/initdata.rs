//! Initial data: validation against (A1)–(A3), the built-in family and
//! tabulated profiles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profile::{CubicSpline, HermiteTable, Profile, SplineError};
use crate::transform::{closure_f, TransformError};
use crate::types::{Grid, InitialDatum, UVPoint, UVState};

/// Strict inequalities are accepted only with at least this margin.
pub const STRICT_MARGIN: f64 = 1e-10;

/// Default number of validation samples.
pub const VALIDATION_SAMPLES: usize = 10_000;

const FAMILY_INTERVALS: usize = 8192;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InitDataError {
    #[error("grid_n must be >= 64, got {0}")]
    GridTooSmall(usize),
    #[error("profile not evaluable on [{r1}, {r2}]: defined on [{lo}, {hi}]")]
    NotEvaluable { r1: f64, r2: f64, lo: f64, hi: f64 },
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("family rejected: {clause} fails ({detail})")]
    FamilyRejected { clause: &'static str, detail: String },
    #[error("malformed table at line {line}: {reason}")]
    MalformedTable { line: usize, reason: String },
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub a1_ok: bool,
    pub a2_ok: bool,
    pub a3_ok: bool,
    pub a1_failures: Vec<String>,
    pub u1: f64,
    pub u2: f64,
    /// `min_r −[ū′ + (ū + βF₀)/r]`.
    pub a2_margin: f64,
    pub a2_worst_r: f64,
    /// Radii where F₀ is undefined (first few), and how many there were.
    pub f0_undefined_at: Vec<f64>,
    pub f0_undefined_count: usize,
    pub c1_error: f64,
    pub a3_lhs: f64,
    pub a3_rhs_left: f64,
    pub a3_rhs_right: f64,
    pub t_star_bound: Option<f64>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.a1_ok && self.a2_ok && self.a3_ok
    }

    pub fn failing_clause(&self) -> Option<&'static str> {
        if !self.a1_ok {
            Some("A1")
        } else if !self.a2_ok {
            Some("A2")
        } else if !self.a3_ok {
            Some("A3")
        } else {
            None
        }
    }
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// The three difference quotients of (A3): `(lhs, rhs_left, rhs_right)`.
/// A right-hand quotient with non-positive denominator is `+∞`.
pub fn a3_ratios(d: &InitialDatum) -> (f64, f64, f64) {
    let ue1 = d.u_bar(d.eta1);
    let ue2 = d.u_bar(d.eta2);
    let w = 2.0 / d.v0;
    let den = ue1 - ue2 - w;
    let lhs = if den > 0.0 { (d.eta2 - d.eta1) / den } else { f64::NAN };
    let left = ratio_or_inf(d.eta1 - d.r1, d.u1() - ue1 + w);
    let right = ratio_or_inf(d.r2 - d.eta2, ue2 - d.u2() + w);
    (lhs, left, right)
}

pub fn check_assumptions(d: &InitialDatum, grid_n: usize) -> Result<ValidationReport, InitDataError> {
    if grid_n < 64 {
        return Err(InitDataError::GridTooSmall(grid_n));
    }
    let (lo, hi) = d.profile.support();
    let slack = 1e-12 * (1.0 + d.r2.abs());
    if lo > d.r1 + slack || hi < d.r2 - slack {
        return Err(InitDataError::NotEvaluable { r1: d.r1, r2: d.r2, lo, hi });
    }

    let mut a1_failures = Vec::new();
    if !(d.r1 > 0.0) {
        a1_failures.push(format!("r1 = {} is not positive", d.r1));
    }
    if !(d.r2 > d.r1) {
        a1_failures.push(format!("r2 = {} is not above r1", d.r2));
    }
    if !(d.v0 >= 1.0) || !d.v0.is_finite() {
        a1_failures.push(format!("v0 = {} is not a finite constant >= 1", d.v0));
    }
    if !(d.beta >= 1.0) {
        a1_failures.push(format!("beta = {} is below 1", d.beta));
    }
    let u1 = d.u1();
    let u2 = d.u2();
    if !(u2 - 1.0 / d.v0 >= STRICT_MARGIN) {
        a1_failures.push(format!("u_bar(r2) = {u2} does not exceed 1/v0 = {}", 1.0 / d.v0));
    }

    let n = grid_n;
    let h = (d.r2 - d.r1) / (n - 1) as f64;
    let fd_h = 1e-3 * h;
    let mut c1_error: f64 = 0.0;
    let mut slope_scale: f64 = 0.0;
    let mut a2_margin = f64::INFINITY;
    let mut a2_worst_r = d.r1;
    let mut f0_undefined_at = Vec::new();
    let mut f0_undefined_count = 0;
    let mut negative_u = false;
    for j in 0..n {
        let r = if j + 1 == n { d.r2 } else { d.r1 + j as f64 * h };
        let u = d.u_bar(r);
        let du = d.u_bar_prime(r);
        if !u.is_finite() || !du.is_finite() {
            return Err(InitDataError::NotEvaluable { r1: d.r1, r2: d.r2, lo: r, hi: r });
        }
        if u < 0.0 {
            negative_u = true;
        }
        let (ra, rb) = ((r - fd_h).max(lo), (r + fd_h).min(hi));
        let fd = (d.u_bar(rb) - d.u_bar(ra)) / (rb - ra);
        c1_error = c1_error.max((fd - du).abs());
        slope_scale = slope_scale.max(du.abs());
        match closure_f(UVPoint::new(u, d.v0)) {
            Ok(f0) => {
                let m = -(du + (u + d.beta * f0) / r);
                if m < a2_margin {
                    a2_margin = m;
                    a2_worst_r = r;
                }
            }
            Err(_) => {
                f0_undefined_count += 1;
                if f0_undefined_at.len() < 16 {
                    f0_undefined_at.push(r);
                }
            }
        }
    }
    if c1_error > 1e-4 * (1.0 + slope_scale) {
        a1_failures.push(format!("sampled derivative inconsistent with values (max error {c1_error:e})"));
    }
    if negative_u {
        a1_failures.push("u_bar takes negative values (sign convention requires u >= 0)".into());
    }
    let a1_ok = a1_failures.is_empty();
    let a2_ok = f0_undefined_count == 0 && a2_margin >= STRICT_MARGIN;

    let (a3_lhs, a3_rhs_left, a3_rhs_right) = a3_ratios(d);
    let ordered = d.r1 < d.eta1 && d.eta1 < d.eta2 && d.eta2 < d.r2;
    let a3_ok = ordered
        && a3_lhs.is_finite()
        && a3_lhs >= STRICT_MARGIN
        && a3_rhs_left.min(a3_rhs_right) - a3_lhs >= STRICT_MARGIN;
    let t_star_bound = (a3_lhs.is_finite() && a3_lhs > 0.0).then_some(a3_lhs);

    Ok(ValidationReport {
        a1_ok,
        a2_ok,
        a3_ok,
        a1_failures,
        u1,
        u2,
        a2_margin,
        a2_worst_r,
        f0_undefined_at,
        f0_undefined_count,
        c1_error,
        a3_lhs,
        a3_rhs_left,
        a3_rhs_right,
        t_star_bound,
    })
}

/// Exact discrete-free initial value of R̃± at radius `r`:
/// `−v₀(ū′ + ū/r) − αF₀/r` (the same for both families since v is constant).
pub fn initial_rtilde(d: &InitialDatum, r: f64, alpha: f64) -> Result<f64, InitDataError> {
    let u = d.u_bar(r);
    let f0 = closure_f(UVPoint::new(u, d.v0))?;
    Ok(-d.v0 * (d.u_bar_prime(r) + u / r) - alpha * f0 / r)
}

/// Parameters of the built-in family.
///
/// The profile solves `ū′ = −γ(ū + βF(ū, v₀))/r − drop·S′(x)/width` from
/// `ū(r1) = level`, with `x = (r − center)/width + ½`, S the quintic
/// smootherstep and `γ = 1 + decay_excess`. The steep step occupies
/// `[center − width/2, center + width/2]`, which becomes `[η₁, η₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyParams {
    pub r1: f64,
    pub r2: f64,
    pub v0: f64,
    pub drop: f64,
    pub width: f64,
    pub level: f64,
    pub center: f64,
    pub decay_excess: f64,
    pub beta: f64,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            r1: 1.0,
            r2: 2.0,
            v0: 60.0,
            drop: 0.4,
            width: 0.25,
            level: 0.6,
            center: 1.2,
            decay_excess: 0.05,
            beta: 1.0,
        }
    }
}

fn smootherstep_slope(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        30.0 * x * x * (1.0 - x) * (1.0 - x)
    }
}

fn family_rhs(p: &FamilyParams, r: f64, u: f64) -> Result<f64, TransformError> {
    let f = closure_f(UVPoint::new(u, p.v0))?;
    let x = (r - p.center) / p.width + 0.5;
    Ok(-(1.0 + p.decay_excess) * (u + p.beta * f) / r - p.drop * smootherstep_slope(x) / p.width)
}

fn reject(clause: &'static str, detail: impl Into<String>) -> InitDataError {
    InitDataError::FamilyRejected { clause, detail: detail.into() }
}

pub fn make_family(p: FamilyParams) -> Result<InitialDatum, InitDataError> {
    let finite = [p.r1, p.r2, p.v0, p.drop, p.width, p.level, p.center, p.decay_excess, p.beta];
    if finite.iter().any(|x| !x.is_finite()) {
        return Err(reject("A1", "non-finite parameter"));
    }
    if !(p.r1 > 0.0 && p.r2 > p.r1 && p.width > 0.0 && p.decay_excess >= 0.0) {
        return Err(reject("A1", "need 0 < r1 < r2, width > 0, decay_excess >= 0"));
    }
    let eta1 = p.center - 0.5 * p.width;
    let eta2 = p.center + 0.5 * p.width;
    if !(p.r1 < eta1 && eta2 < p.r2) {
        return Err(reject("A3", format!("step [{eta1}, {eta2}] not inside ({}, {})", p.r1, p.r2)));
    }

    let m = FAMILY_INTERVALS;
    let h = (p.r2 - p.r1) / m as f64;
    let mut values = Vec::with_capacity(m + 1);
    let mut slopes = Vec::with_capacity(m + 1);
    let mut u = p.level;
    let rhs = |r: f64, u: f64| family_rhs(&p, r, u).map_err(|e| reject("A2", format!("F undefined at r = {r}: {e}")));
    for k in 0..=m {
        let r = p.r1 + k as f64 * h;
        let k1 = rhs(r, u)?;
        values.push(u);
        slopes.push(k1);
        if k == m {
            break;
        }
        let k2 = rhs(r + 0.5 * h, u + 0.5 * h * k1)?;
        let k3 = rhs(r + 0.5 * h, u + 0.5 * h * k2)?;
        let k4 = rhs(r + h, u + h * k3)?;
        u += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
    let d = InitialDatum {
        r1: p.r1,
        r2: p.r2,
        v0: p.v0,
        profile: Profile::Family { params: p, samples: HermiteTable { start: p.r1, step: h, values, slopes } },
        beta: p.beta,
        eta1,
        eta2,
    };
    let rep = check_assumptions(&d, VALIDATION_SAMPLES)?;
    match rep.failing_clause() {
        None => Ok(d),
        Some("A1") => Err(reject("A1", rep.a1_failures.join("; "))),
        Some("A2") => Err(reject("A2", format!("margin {:e} at r = {}", rep.a2_margin, rep.a2_worst_r))),
        Some(c) => Err(reject(
            c,
            format!("lhs {} vs rhs ({}, {})", rep.a3_lhs, rep.a3_rhs_left, rep.a3_rhs_right),
        )),
    }
}

/// Parses a two-column `(r, ū)` table with one header line. Columns may be
/// separated by commas or whitespace; `#` starts a comment.
pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>), InitDataError> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    if rows.next().is_none() {
        return Err(InitDataError::MalformedTable { line: 1, reason: "empty table".into() });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (line, l) in rows {
        let cols: Vec<&str> = l.split(|c: char| c == ',' || c.is_whitespace()).filter(|c| !c.is_empty()).collect();
        if cols.len() != 2 {
            return Err(InitDataError::MalformedTable { line, reason: format!("expected 2 columns, found {}", cols.len()) });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| InitDataError::MalformedTable { line, reason: format!("not a number: {s:?}") })
        };
        xs.push(parse(cols[0])?);
        ys.push(parse(cols[1])?);
    }
    Ok((xs, ys))
}

/// Datum from tabulated ū; `r1`, `r2` are the first and last abscissae.
pub fn datum_from_table(
    xs: Vec<f64>,
    ys: Vec<f64>,
    v0: f64,
    beta: f64,
    eta1: f64,
    eta2: f64,
) -> Result<InitialDatum, InitDataError> {
    let spline = CubicSpline::new(xs, ys)?;
    let r1 = spline.x[0];
    let r2 = spline.x[spline.x.len() - 1];
    Ok(InitialDatum { r1, r2, v0, profile: Profile::Table { spline }, beta, eta1, eta2 })
}

pub fn datum_to_uvstate(d: &InitialDatum, grid_n: usize) -> Result<UVState, InitDataError> {
    if grid_n < 2 {
        return Err(InitDataError::GridTooSmall(grid_n));
    }
    if !(d.r1 > 0.0 && d.r2 > d.r1 && d.v0 > 0.0) {
        return Err(InitDataError::InvalidDatum(format!("r1 = {}, r2 = {}, v0 = {}", d.r1, d.r2, d.v0)));
    }
    let grid = Grid::new(d.r1, d.r2, grid_n);
    let u = (0..grid_n).map(|i| d.u_bar(grid.radius(i))).collect();
    Ok(UVState { time: 0.0, grid, u, v: vec![d.v0; grid_n], left_boundary: d.r1, right_boundary: d.r2 })
}
