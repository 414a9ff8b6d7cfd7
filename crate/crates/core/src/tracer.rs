//! Characteristic curves through a snapshot stack, C₀ collision and the t* bound.

use rayon::prelude::*;
use thiserror::Error;

use crate::types::{CharCurve, CharFamily, InitialDatum, UVPoint, UVState};

/// Denominators of the t* bound below this are treated as zero.
pub const TSTAR_DENOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TracerError {
    #[error("no snapshots to trace through")]
    NoSnapshots,
    #[error("foot r = {foot} outside the initial window [{lo}, {hi}]")]
    FootOutsideWindow { foot: f64, lo: f64, hi: f64 },
    #[error("feet must satisfy eta1 < eta2, got {eta1} and {eta2}")]
    BadFeet { eta1: f64, eta2: f64 },
    #[error("A3 violated: u_bar(eta1) - u_bar(eta2) - 2/v0 = {denominator}")]
    A3Violated { denominator: f64 },
}

/// (u, v) at radius `r`, linear between nodes and constant beyond the grid.
pub fn sample_field(s: &UVState, r: f64) -> UVPoint {
    let g = &s.grid;
    let x = g.coordinate(r);
    if x <= 0.0 {
        return s.point(0);
    }
    let last = g.n - 1;
    if x >= last as f64 {
        return s.point(last);
    }
    let k = (x.floor() as usize).min(last - 1);
    let w = x - k as f64;
    UVPoint::new(s.u[k] + w * (s.u[k + 1] - s.u[k]), s.v[k] + w * (s.v[k + 1] - s.v[k]))
}

/// One Heun step of `dr/dt = λ(r, t)` from slice `s0` to slice `s1`.
pub fn advance(family: CharFamily, r: f64, s0: &UVState, s1: &UVState) -> f64 {
    let dt = s1.time - s0.time;
    let k1 = family.speed(sample_field(s0, r));
    let k2 = family.speed(sample_field(s1, r + dt * k1));
    r + 0.5 * dt * (k1 + k2)
}

fn initial_window(s: &UVState) -> (f64, f64) {
    (s.left_boundary.max(s.grid.r1), s.right_boundary.min(s.grid.r2))
}

/// Traces a curve from `foot` at the first snapshot. The curve stops after
/// the first sample that leaves the grid by more than one node spacing.
pub fn trace(family: CharFamily, foot: f64, snaps: &[UVState]) -> Result<CharCurve, TracerError> {
    let first = snaps.first().ok_or(TracerError::NoSnapshots)?;
    let (lo, hi) = initial_window(first);
    let tol = 1e-12 * (1.0 + hi.abs());
    if !(foot >= lo - tol && foot <= hi + tol) {
        return Err(TracerError::FootOutsideWindow { foot, lo, hi });
    }
    let g = first.grid;
    let (exit_lo, exit_hi) = (g.r1 - g.dr(), g.r2 + g.dr());
    let mut curve = CharCurve { family, foot, samples: vec![(first.time, foot)] };
    let mut r = foot;
    for w in snaps.windows(2) {
        r = advance(family, r, &w[0], &w[1]);
        curve.samples.push((w[1].time, r));
        if r < exit_lo || r > exit_hi {
            break;
        }
    }
    Ok(curve)
}

/// Traces several feet in parallel; results keep the input order.
pub fn trace_many(family: CharFamily, feet: &[f64], snaps: &[UVState]) -> Result<Vec<CharCurve>, TracerError> {
    feet.par_iter().map(|&f| trace(family, f, snaps)).collect()
}

/// First time the gap `right − left` reaches zero, by linear interpolation
/// between samples taken at common times.
pub fn gap_crossing(left: &CharCurve, right: &CharCurve) -> Option<f64> {
    let mut prev: Option<(f64, f64)> = None;
    for (&(t, rl), &(tr, rr)) in left.samples.iter().zip(&right.samples) {
        debug_assert_eq!(t, tr);
        let gap = rr - rl;
        if gap <= 0.0 {
            return Some(match prev {
                Some((t0, g0)) if g0 > 0.0 => t0 + (t - t0) * g0 / (g0 - gap),
                _ => t,
            });
        }
        prev = Some((t, gap));
    }
    None
}

pub fn collision_time(snaps: &[UVState], eta1: f64, eta2: f64) -> Result<Option<f64>, TracerError> {
    if !(eta1 < eta2) {
        return Err(TracerError::BadFeet { eta1, eta2 });
    }
    let a = trace(CharFamily::Zero, eta1, snaps)?;
    let b = trace(CharFamily::Zero, eta2, snaps)?;
    Ok(gap_crossing(&a, &b))
}

/// `(η₂ − η₁)/(ū(η₁) − ū(η₂) − 2/v₀)`.
pub fn tstar_bound(d: &InitialDatum) -> Result<f64, TracerError> {
    let den = d.u_bar(d.eta1) - d.u_bar(d.eta2) - 2.0 / d.v0;
    if !(den > TSTAR_DENOM_TOL) {
        return Err(TracerError::A3Violated { denominator: den });
    }
    Ok((d.eta2 - d.eta1) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;
    use crate::types::Grid;

    fn stack(n_t: usize, dt: f64, f: impl Fn(f64, f64) -> (f64, f64)) -> Vec<UVState> {
        let grid = Grid::new(1.0, 2.0, 101);
        (0..n_t)
            .map(|k| {
                let t = k as f64 * dt;
                let (u, v): (Vec<f64>, Vec<f64>) = grid.radii().into_iter().map(|r| f(r, t)).unzip();
                UVState { time: t, grid, u, v, left_boundary: 1.0, right_boundary: 2.0 }
            })
            .collect()
    }

    #[test]
    fn static_field_curves() {
        let s = stack(11, 0.01, |_, _| (0.0, 1.0));
        let c0 = trace(CharFamily::Zero, 1.5, &s).unwrap();
        assert!(c0.samples.iter().all(|&(_, r)| r == 1.5));
        let cp = trace(CharFamily::Plus, 1.5, &s).unwrap();
        let cm = trace(CharFamily::Minus, 1.5, &s).unwrap();
        for (&(t, rp), &(_, rm)) in cp.samples.iter().zip(&cm.samples) {
            assert!((rp - (1.5 + t)).abs() < 1e-12);
            assert!((rm - (1.5 - t)).abs() < 1e-12);
        }
    }

    #[test]
    fn foot_outside_window_rejected() {
        let s = stack(3, 0.01, |_, _| (0.0, 1.0));
        assert!(matches!(trace(CharFamily::Zero, 2.5, &s), Err(TracerError::FootOutsideWindow { .. })));
        assert!(matches!(trace(CharFamily::Zero, 1.5, &[]), Err(TracerError::NoSnapshots)));
    }

    #[test]
    fn constant_speed_never_collides() {
        let s = stack(50, 0.01, |_, _| (0.3, 5.0));
        assert_eq!(collision_time(&s, 1.2, 1.4).unwrap(), None);
        assert!(matches!(collision_time(&s, 1.4, 1.2), Err(TracerError::BadFeet { .. })));
    }

    #[test]
    fn contracting_field_gap_decays_exponentially() {
        // u = −r gives r(t) = r₀e^{−t}; the gap shrinks by e^{−t} but stays positive.
        let dt = 0.01;
        let s = stack(101, dt, |r, _| (-r, 5.0));
        let a = trace(CharFamily::Zero, 1.2, &s).unwrap();
        let b = trace(CharFamily::Zero, 1.4, &s).unwrap();
        assert_eq!(gap_crossing(&a, &b), None);
        for (&(t, ra), &(_, rb)) in a.samples.iter().zip(&b.samples).take_while(|(a, _)| a.1 > 1.0) {
            let exact = 0.2 * (-t).exp();
            assert!(((rb - ra) - exact).abs() < 1e-5, "t = {t}");
        }
    }

    #[test]
    fn gap_crossing_interpolates() {
        let a = CharCurve { family: CharFamily::Zero, foot: 1.0, samples: vec![(0.0, 1.0), (1.0, 1.5), (2.0, 2.0)] };
        let b = CharCurve { family: CharFamily::Zero, foot: 2.0, samples: vec![(0.0, 2.0), (1.0, 1.75), (2.0, 1.5)] };
        let t = gap_crossing(&a, &b).unwrap();
        // gap 0.25 at t = 1 and −0.5 at t = 2.
        assert!((t - (1.0 + 0.25 / 0.75)).abs() < 1e-15);
    }

    #[test]
    fn heun_is_second_order() {
        // u = t: r(t) = r₀ + t²/2 is reproduced exactly by Heun on linear-in-t speeds.
        let s = stack(21, 0.05, |_, t| (t, 5.0));
        let c = trace(CharFamily::Zero, 1.1, &s).unwrap();
        for &(t, r) in &c.samples {
            assert!((r - (1.1 + 0.5 * t * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn tstar_arithmetic() {
        let d = InitialDatum {
            r1: 1.0,
            r2: 2.0,
            v0: 10.0,
            profile: Profile::Linear { origin: 1.0, value: 0.9, slope: -5.0 },
            beta: 1.0,
            eta1: 1.3,
            eta2: 1.4,
        };
        assert!((tstar_bound(&d).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let flat = InitialDatum { profile: Profile::Linear { origin: 1.0, value: 0.9, slope: -2.0 }, ..d };
        assert!(matches!(tstar_bound(&flat), Err(TracerError::A3Violated { .. })));
    }
}
