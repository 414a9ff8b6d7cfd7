//! Shared value types: gradients, (u,v) points and fields, initial data,
//! characteristic curves and run reports.

use serde::{Deserialize, Serialize};

use crate::profile::Profile;

/// Pointwise gradient of the graph function with its timelike factor.
///
/// Always built through [`PhiGradients::new`], so `delta` is exactly
/// `1 + phi_r² − phi_t²` as stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiGradients {
    pub phi_t: f64,
    pub phi_r: f64,
    pub delta: f64,
}

impl PhiGradients {
    pub fn new(phi_t: f64, phi_r: f64) -> Self {
        Self { phi_t, phi_r, delta: timelike_delta(phi_t, phi_r) }
    }

    pub fn is_timelike(&self) -> bool {
        self.delta > 0.0
    }
}

pub fn timelike_delta(phi_t: f64, phi_r: f64) -> f64 {
    1.0 + phi_r * phi_r - phi_t * phi_t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UVPoint {
    pub u: f64,
    pub v: f64,
}

impl UVPoint {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    /// `Q = v² − u²v² − 1`, the linear coefficient of the quartic for φ_r².
    pub fn q(&self) -> f64 {
        self.v * self.v * (1.0 - self.u * self.u) - 1.0
    }

    /// `D = Q² − 4u²v²`.
    pub fn discriminant(&self) -> f64 {
        let q = self.q();
        let uv = self.u * self.v;
        q * q - 4.0 * uv * uv
    }
}

/// Uniform vertex grid on `[r1, r2]`; node 0 sits on `r1`, node `n−1` on `r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub r1: f64,
    pub r2: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(r1: f64, r2: f64, n: usize) -> Self {
        Self { r1, r2, n }
    }

    pub fn dr(&self) -> f64 {
        (self.r2 - self.r1) / (self.n - 1) as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.r2
        } else {
            self.r1 + i as f64 * self.dr()
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.radius(i)).collect()
    }

    /// Fractional node coordinate of radius `r`.
    pub fn coordinate(&self, r: f64) -> f64 {
        (r - self.r1) / self.dr()
    }
}

/// Discrete (u, v) fields at one time together with the window boundaries.
///
/// `left_boundary` is the C₊ curve from r₁ and `right_boundary` the C₋ curve
/// from r₂, both as traced, so the latter may sit beyond the grid. The active
/// window is their intersection with the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UVState {
    pub time: f64,
    pub grid: Grid,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub left_boundary: f64,
    pub right_boundary: f64,
}

impl UVState {
    pub fn point(&self, i: usize) -> UVPoint {
        UVPoint::new(self.u[i], self.v[i])
    }

    /// Node indices inside `[max(left, r1), min(right, r2)]`.
    pub fn active_range(&self) -> std::ops::Range<usize> {
        let g = &self.grid;
        let lo = g.coordinate(self.left_boundary.max(g.r1));
        let hi = g.coordinate(self.right_boundary.min(g.r2));
        let first = (lo - 1e-9).ceil().max(0.0) as usize;
        let last = ((hi + 1e-9).floor() as isize).min(g.n as isize - 1);
        if last < first as isize {
            first..first
        } else {
            first..(last as usize + 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharFamily {
    Plus,
    Minus,
    Zero,
}

impl CharFamily {
    pub fn speed(self, p: UVPoint) -> f64 {
        match self {
            CharFamily::Plus => p.u + 1.0 / p.v,
            CharFamily::Minus => p.u - 1.0 / p.v,
            CharFamily::Zero => p.u,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CharFamily::Plus => "plus",
            CharFamily::Minus => "minus",
            CharFamily::Zero => "zero",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plus" => Some(CharFamily::Plus),
            "minus" => Some(CharFamily::Minus),
            "zero" => Some(CharFamily::Zero),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharCurve {
    pub family: CharFamily,
    pub foot: f64,
    /// `(t, r)` pairs, strictly increasing in `t`.
    pub samples: Vec<(f64, f64)>,
}

impl CharCurve {
    pub fn new(family: CharFamily, foot: f64) -> Self {
        Self { family, foot, samples: vec![(0.0, foot)] }
    }

    pub fn end_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }

    /// Position at time `t` by linear interpolation; `None` outside the sampled span.
    pub fn position_at(&self, t: f64) -> Option<f64> {
        let s = &self.samples;
        let first = s.first()?;
        let last = s.last()?;
        if t < first.0 || t > last.0 {
            return None;
        }
        let k = s.partition_point(|p| p.0 <= t);
        if k == 0 {
            return Some(first.1);
        }
        if k == s.len() {
            return Some(last.1);
        }
        let (t0, r0) = s[k - 1];
        let (t1, r1) = s[k];
        Some(r0 + (r1 - r0) * (t - t0) / (t1 - t0))
    }
}

/// Initial data ū on `[r1, r2]` with constant v₀ and the A1–A3 parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialDatum {
    pub r1: f64,
    pub r2: f64,
    pub v0: f64,
    pub profile: Profile,
    pub beta: f64,
    pub eta1: f64,
    pub eta2: f64,
}

impl InitialDatum {
    pub fn u_bar(&self, r: f64) -> f64 {
        self.profile.value(r)
    }

    pub fn u_bar_prime(&self, r: f64) -> f64 {
        self.profile.derivative(r)
    }

    pub fn u1(&self) -> f64 {
        self.u_bar(self.r1)
    }

    pub fn u2(&self) -> f64 {
        self.u_bar(self.r2)
    }

    /// ∫ r v₀ dr over `[eta1, eta2]`.
    pub fn initial_mass(&self) -> f64 {
        0.5 * self.v0 * (self.eta2 * self.eta2 - self.eta1 * self.eta1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    BlewUp,
    BoundExceeded,
    DomainCollapsed,
    MaxTimeReached,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::BlewUp => "blew_up",
            RunStatus::BoundExceeded => "bound_exceeded",
            RunStatus::DomainCollapsed => "domain_collapsed",
            RunStatus::MaxTimeReached => "max_time_reached",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub run_status: RunStatus,
    pub t_blow_observed: Option<f64>,
    pub t_blow_uncertainty: Option<f64>,
    /// `None` when A3 does not give a finite bound.
    pub t_star_bound: Option<f64>,
    pub predictions_applicable: bool,
    pub v_max: f64,
    pub v_max_location: f64,
    pub delta_min_reconstructed: f64,
    pub mass_drift_rel: f64,
    pub invariant_violations: usize,
    pub steps: usize,
    pub t_final: f64,
}
