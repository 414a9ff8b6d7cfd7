//! Maps between the gradient (φ_t, φ_r), the s-parameters and (u, v), and the
//! closure F(u, v) = min(s₁², s₂²) with its partial derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{PhiGradients, UVPoint};

/// Discriminant clamp, applied relative to `max(1, Q²)`.
pub const EPS_DISC: f64 = 1e-12;

/// Minimum |s₁ − s₂| for sampled pairs.
pub const SAMPLE_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SPair {
    pub s1: f64,
    pub s2: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("null-or-spacelike gradient: delta = {delta}")]
    NullOrSpacelike { delta: f64 },
    #[error("outside hyperbolic region at (u={u}, v={v}): Q = {q}, D = {disc}")]
    OutsideHyperbolic { u: f64, v: f64, q: f64, disc: f64 },
    #[error("derivative singular near sonic set at (u={u}, v={v}): D = {disc}")]
    SingularNearSonic { u: f64, v: f64, disc: f64 },
    #[error("inconsistent state at (u={u}, v={v}): 1 + phi_r^2 - delta = {excess}")]
    Inconsistent { u: f64, v: f64, excess: f64 },
}

fn disc_scale(q: f64) -> f64 {
    EPS_DISC * (q * q).max(1.0)
}

pub fn phi_to_uv(g: PhiGradients) -> Result<UVPoint, TransformError> {
    if !(g.delta > 0.0) {
        return Err(TransformError::NullOrSpacelike { delta: g.delta });
    }
    let a = 1.0 + g.phi_r * g.phi_r;
    Ok(UVPoint::new(-g.phi_r * g.phi_t / a, a / g.delta.sqrt()))
}

pub fn s_to_phi(s: SPair) -> PhiGradients {
    let delta = (1.0 + s.s1 * s.s1) / (1.0 + s.s2 * s.s2);
    PhiGradients::new(-s.s2 * delta.sqrt(), s.s1)
}

pub fn s_to_uv(s: SPair) -> UVPoint {
    let a = 1.0 + s.s1 * s.s1;
    let b = 1.0 + s.s2 * s.s2;
    let v = (a * b).sqrt();
    UVPoint::new(s.s1 * s.s2 / v, v)
}

/// Small root of `x² − Qx + u²v² = 0`, computed as `u²v²/G` with
/// `G = (Q + √D)/2` to avoid cancellation.
pub fn closure_f(p: UVPoint) -> Result<f64, TransformError> {
    let q = p.q();
    let disc = p.discriminant();
    let tol = disc_scale(q);
    if q < -EPS_DISC || disc < -tol || !disc.is_finite() {
        return Err(TransformError::OutsideHyperbolic { u: p.u, v: p.v, q, disc });
    }
    Ok(small_root(p.u * p.v, q, disc))
}

fn small_root(uv: f64, q: f64, disc: f64) -> f64 {
    let big = 0.5 * (q + disc.max(0.0).sqrt());
    if big <= 0.0 {
        0.0
    } else {
        uv * uv / big
    }
}

/// Closure that never fails: D is clamped at 0, Q at 0. Used by the solver,
/// which counts hyperbolicity losses separately.
pub fn closure_f_clamped(p: UVPoint) -> f64 {
    let q = p.q().max(0.0);
    let uv = p.u * p.v;
    small_root(uv, q, q * q - 4.0 * uv * uv)
}

/// `(∂F/∂u, ∂F/∂v)` in the cancellation-free form
/// `∂F = (∂(u²v²) − F ∂Q)/√D`.
pub fn closure_f_partials(p: UVPoint) -> Result<(f64, f64), TransformError> {
    let q = p.q();
    let disc = p.discriminant();
    if !(disc > disc_scale(q)) {
        return Err(TransformError::SingularNearSonic { u: p.u, v: p.v, disc });
    }
    let f = closure_f(p)?;
    let sq = disc.sqrt();
    let (u, v) = (p.u, p.v);
    let du = 2.0 * u * v * v * (1.0 + f) / sq;
    let dv = 2.0 * v * (u * u - (1.0 - u * u) * f) / sq;
    Ok((du, dv))
}

/// Inverse transform on the branch φ_r² = F, φ_r ≥ 0, sign(φ_t) = −sign(u).
pub fn uv_to_phi(p: UVPoint) -> Result<PhiGradients, TransformError> {
    let f = closure_f(p)?;
    let a = 1.0 + f;
    let delta = a * a / (p.v * p.v);
    let excess = a - delta;
    if excess < -1e-12 * a {
        return Err(TransformError::Inconsistent { u: p.u, v: p.v, excess });
    }
    let mag = excess.max(0.0).sqrt();
    let phi_t = if p.u < 0.0 { mag } else { -mag };
    Ok(PhiGradients::new(phi_t, f.sqrt()))
}

/// Δ from (u, v) without cancellation: `(1 + F)²/v²`.
pub fn reconstructed_delta(p: UVPoint) -> Result<f64, TransformError> {
    let a = 1.0 + closure_f(p)?;
    Ok(a * a / (p.v * p.v))
}

/// Seeded s-pairs with `0 < s₁, s₂ ≤ s_max` and `|s₁ − s₂| ≥ 1e−3`.
pub fn sample_spairs(count: usize, s_max: f64, seed: u64) -> Vec<SPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s1 = s_max * (1.0 - rng.gen::<f64>());
        let s2 = s_max * (1.0 - rng.gen::<f64>());
        if (s1 - s2).abs() >= SAMPLE_GAP {
            out.push(SPair { s1, s2 });
        }
    }
    out
}

pub fn sample_valid_region(count: usize, s_max: f64, seed: u64) -> Vec<UVPoint> {
    sample_spairs(count, s_max, seed).into_iter().map(s_to_uv).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * (1.0 + b.abs())
    }

    #[test]
    fn phi_to_uv_examples() {
        let p = phi_to_uv(PhiGradients::new(0.0, 0.0)).unwrap();
        assert_eq!(p, UVPoint::new(0.0, 1.0));

        let p = phi_to_uv(s_to_phi(SPair { s1: 1.0, s2: 1.0 })).unwrap();
        assert!(close(p.u, 0.5, 1e-15) && close(p.v, 2.0, 1e-15));

        let p = phi_to_uv(PhiGradients::new(0.5, 0.0)).unwrap();
        let s2: f64 = -0.5 / 0.75f64.sqrt();
        assert_eq!(p.u, 0.0);
        assert!(close(p.v, 1.0 / 0.75f64.sqrt(), 1e-15));
        assert!(close(p.v, (1.0 + s2 * s2).sqrt(), 1e-15));
    }

    #[test]
    fn phi_to_uv_rejects_null() {
        let g = PhiGradients::new(1.0, 0.0);
        assert!(matches!(phi_to_uv(g), Err(TransformError::NullOrSpacelike { .. })));
        let g = PhiGradients::new(2.0, 0.5);
        assert!(matches!(phi_to_uv(g), Err(TransformError::NullOrSpacelike { .. })));
    }

    #[test]
    fn s_to_phi_examples() {
        let g = s_to_phi(SPair { s1: 0.0, s2: 0.0 });
        assert_eq!((g.phi_t, g.phi_r, g.delta), (0.0, 0.0, 1.0));
        let g = s_to_phi(SPair { s1: 1.0, s2: 1.0 });
        assert_eq!((g.phi_r, g.phi_t), (1.0, -1.0));
        assert!(close(g.delta, 1.0, 1e-15));
        let g = s_to_phi(SPair { s1: 0.0, s2: 3.0 });
        assert!(close(g.delta, 0.1, 1e-15));
        assert!(close(g.phi_t, -3.0 * 0.1f64.sqrt(), 1e-15));
    }

    #[test]
    fn s_to_uv_examples() {
        assert_eq!(s_to_uv(SPair { s1: 0.0, s2: 0.0 }), UVPoint::new(0.0, 1.0));
        let p = s_to_uv(SPair { s1: 1.0, s2: 1.0 });
        assert_eq!((p.u, p.v), (0.5, 2.0));
        let p = s_to_uv(SPair { s1: 1.0, s2: 2.0 });
        assert!(close(p.u, 2.0 / 10f64.sqrt(), 1e-15) && close(p.v, 10f64.sqrt(), 1e-15));
        let q = phi_to_uv(s_to_phi(SPair { s1: 1.0, s2: 2.0 })).unwrap();
        assert!(close(q.u, p.u, 1e-14) && close(q.v, p.v, 1e-14));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure_f(UVPoint::new(0.0, 5.0)).unwrap(), 0.0);
        assert!(close(closure_f(UVPoint::new(0.5, 2.0)).unwrap(), 1.0, 1e-12));
        let p = UVPoint::new(2.0 / 10f64.sqrt(), 10f64.sqrt());
        assert!(close(closure_f(p).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn closure_rejects_outside() {
        // u = 0.9, v = 1.2: Q < 0.
        let e = closure_f(UVPoint::new(0.9, 1.2)).unwrap_err();
        assert!(matches!(e, TransformError::OutsideHyperbolic { .. }));
        // Q > 0 but D < 0.
        let e = closure_f(UVPoint::new(0.6, 2.0)).unwrap_err();
        assert!(matches!(e, TransformError::OutsideHyperbolic { .. }));
    }

    #[test]
    fn partials_examples() {
        let (du, _) = closure_f_partials(UVPoint::new(0.0, 2.0)).unwrap();
        assert_eq!(du, 0.0);
        let e = closure_f_partials(UVPoint::new(0.5, 2.0)).unwrap_err();
        assert!(matches!(e, TransformError::SingularNearSonic { .. }));

        let p = UVPoint::new(0.3, 3.0);
        let (du, dv) = closure_f_partials(p).unwrap();
        let h = 1e-6;
        let f = |u: f64, v: f64| closure_f(UVPoint::new(u, v)).unwrap();
        let fdu = (f(p.u + h, p.v) - f(p.u - h, p.v)) / (2.0 * h);
        let fdv = (f(p.u, p.v + h) - f(p.u, p.v - h)) / (2.0 * h);
        assert!((du - fdu).abs() <= 1e-6 * du.abs(), "{du} {fdu}");
        assert!((dv - fdv).abs() <= 1e-6 * dv.abs(), "{dv} {fdv}");
    }

    #[test]
    fn uv_to_phi_examples() {
        let g = uv_to_phi(UVPoint::new(0.0, 1.0)).unwrap();
        assert_eq!((g.phi_t, g.phi_r, g.delta), (0.0, 0.0, 1.0));
        let g = uv_to_phi(UVPoint::new(0.5, 2.0)).unwrap();
        assert!(close(g.phi_r, 1.0, 1e-12) && close(g.phi_t, -1.0, 1e-12) && close(g.delta, 1.0, 1e-12));
        let p = UVPoint::new(2.0 / 10f64.sqrt(), 10f64.sqrt());
        let g = uv_to_phi(p).unwrap();
        assert!(close(g.phi_r, 1.0, 1e-12) && close(g.delta, 0.4, 1e-12));
        let back = phi_to_uv(g).unwrap();
        assert!(close(back.u, p.u, 1e-10) && close(back.v, p.v, 1e-10));
    }

    #[test]
    fn sampler_examples() {
        let one = sample_valid_region(1, 3.0, 11);
        assert_eq!(one.len(), 1);
        assert!(one[0].discriminant() > 0.0);
        assert!(sample_valid_region(0, 3.0, 1).is_empty());
        let pts = sample_valid_region(10_000, 3.0, 7);
        assert!(pts.iter().all(|p| p.u > 0.0 && p.u < 1.0 && p.v >= 1.0 && p.discriminant() >= 0.0));
        assert_eq!(sample_spairs(5, 3.0, 7), sample_spairs(5, 3.0, 7));
    }

    #[test]
    fn reconstructed_delta_matches_gradient() {
        for p in sample_valid_region(200, 3.0, 3) {
            let g = uv_to_phi(p).unwrap();
            assert!(close(reconstructed_delta(p).unwrap(), g.delta, 1e-10));
        }
    }
}
