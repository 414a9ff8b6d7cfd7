//! Eigenstructure, characteristic right-hand sides, the decomposition
//! coefficients and finite-difference evaluators for the second-order
//! characteristic identities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::transform::{closure_f, closure_f_partials, TransformError};
use crate::types::{UVPoint, UVState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("alpha must be >= 1, got {0}")]
    BadAlpha(f64),
    #[error("stencil at snapshot {k}, node {i} touches the domain boundary")]
    StencilOutOfRange { k: usize, i: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// `(λ₊, λ₋) = (u + 1/v, u − 1/v)`.
pub fn eigenvalues(p: UVPoint) -> (f64, f64) {
    (p.u + 1.0 / p.v, p.u - 1.0 / p.v)
}

/// Split right-hand sides of the characteristic equations for u:
/// `∂₊u = plus_coeff·∂₊v + plus_source`, `∂₋u = minus_coeff·∂₋v + minus_source`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharSources {
    pub plus_coeff: f64,
    pub plus_source: f64,
    pub minus_coeff: f64,
    pub minus_source: f64,
}

pub fn char_rhs(p: UVPoint, r: f64) -> Result<CharSources, CharError> {
    if !(r > 0.0) {
        return Err(CharError::NonPositiveRadius(r));
    }
    let f = closure_f(p)?;
    let iv = 1.0 / p.v;
    let a = p.u * iv;
    let b = iv * iv * f;
    Ok(CharSources {
        plus_coeff: -iv * iv,
        plus_source: -(a + b) / r,
        minus_coeff: iv * iv,
        minus_source: (a - b) / r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffSet {
    pub alpha: f64,
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub a13: f64,
    pub a23: f64,
    pub at12: f64,
    pub at22: f64,
    pub at13: f64,
    pub at23: f64,
}

/// Coefficients of the decomposition and of the R̃± equations.
///
/// `alpha` is not range-checked so the `α = 0` reduction can be exercised;
/// [`coefficients_checked`] enforces `α ≥ 1`.
pub fn coefficients(p: UVPoint, alpha: f64) -> Result<CoeffSet, CharError> {
    let f = closure_f(p)?;
    let (fu, fv) = closure_f_partials(p)?;
    let (u, v) = (p.u, p.v);
    let iv = 1.0 / v;
    let g = iv * iv * fu;
    let a11 = 3.0 * u - iv + 2.0 * iv * f - g - fv;
    let a12 = u + iv - 2.0 * iv * f - g + fv;
    let a21 = 3.0 * u + iv - 2.0 * iv * f - g + fv;
    let a22 = u - iv + 2.0 * iv * f - g - fv;
    let a13 = u * v * (2.0 * u - g);
    let plus = 2.0 * iv * f + g - fv;
    let minus = 2.0 * iv * f - g - fv;
    Ok(CoeffSet {
        alpha,
        a11,
        a12,
        a21,
        a22,
        a13,
        a23: a13,
        at12: 2.0 * alpha * plus + a12,
        at22: 2.0 * alpha * minus + a22,
        at13: alpha * alpha * f * plus + alpha * ((3.0 * u + 2.0 * iv) * f + u * iv * fu) + a13,
        at23: alpha * alpha * f * minus + alpha * ((3.0 * u - iv) * f - u * iv * fu) + a13,
    })
}

pub fn coefficients_checked(p: UVPoint, alpha: f64) -> Result<CoeffSet, CharError> {
    if !(alpha >= 1.0) {
        return Err(CharError::BadAlpha(alpha));
    }
    coefficients(p, alpha)
}

/// `(u + 1/v)(2 − √((Q + 2uv)/(Q − 2uv)))`.
pub fn a12_radical(p: UVPoint) -> f64 {
    let q = p.q();
    let w = 2.0 * p.u * p.v;
    (p.u + 1.0 / p.v) * (2.0 - ((q + w) / (q - w)).sqrt())
}

/// `(u − 1/v)(2 − √((Q − 2uv)/(Q + 2uv)))`.
pub fn a22_radical(p: UVPoint) -> f64 {
    let q = p.q();
    let w = 2.0 * p.u * p.v;
    (p.u - 1.0 / p.v) * (2.0 - ((q - w) / (q + w)).sqrt())
}

/// `R̃± = ∂±v − αF/r`.
pub fn rtilde(p: UVPoint, dv_plus: f64, dv_minus: f64, r: f64, alpha: f64) -> Result<(f64, f64), CharError> {
    if !(r > 0.0) {
        return Err(CharError::NonPositiveRadius(r));
    }
    let s = alpha * closure_f(p)? / r;
    Ok((dv_plus - s, dv_minus - s))
}

/// A residual together with the sum of the magnitudes of its terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    fn from_terms(lhs: f64, terms: &[f64]) -> Self {
        let rhs: f64 = terms.iter().sum();
        let scale = lhs.abs() + terms.iter().map(|t| t.abs()).sum::<f64>();
        Self { value: lhs - rhs, scale }
    }

    /// `|value| / scale`, zero when every term vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            0.0
        }
    }
}

/// Nodes in the active window of every snapshot `k−2..=k+2` with room for
/// a ±2 stencil.
pub fn stencil_interior(snaps: &[UVState], k: usize) -> std::ops::Range<usize> {
    if k < 2 || k + 2 >= snaps.len() {
        return 0..0;
    }
    let mut lo = 0usize;
    let mut hi = usize::MAX;
    for s in &snaps[k - 2..=k + 2] {
        let r = s.active_range();
        lo = lo.max(r.start);
        hi = hi.min(r.end);
    }
    let lo = lo + 2;
    let hi = hi.saturating_sub(2);
    if hi <= lo {
        lo..lo
    } else {
        lo..hi
    }
}

/// Finite-difference directional derivatives on a stack of snapshots sharing
/// one grid: centered in r, three-point non-uniform in t.
pub struct Stencil<'a> {
    snaps: &'a [UVState],
    dr: f64,
}

impl<'a> Stencil<'a> {
    pub fn new(snaps: &'a [UVState]) -> Self {
        let dr = snaps.first().map_or(1.0, |s| s.grid.dr());
        Self { snaps, dr }
    }

    pub fn check(&self, k: usize, i: usize) -> Result<(), CharError> {
        if stencil_interior(self.snaps, k).contains(&i) {
            Ok(())
        } else {
            Err(CharError::StencilOutOfRange { k, i })
        }
    }

    pub fn point(&self, k: usize, i: usize) -> UVPoint {
        self.snaps[k].point(i)
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.snaps[0].grid.radius(i)
    }

    fn d_t(&self, q: &dyn Fn(usize, usize) -> f64, k: usize, i: usize) -> f64 {
        let t0 = self.snaps[k - 1].time;
        let t1 = self.snaps[k].time;
        let t2 = self.snaps[k + 1].time;
        let h1 = t1 - t0;
        let h2 = t2 - t1;
        let w0 = -h2 / (h1 * (h1 + h2));
        let w2 = h1 / (h2 * (h1 + h2));
        let q1 = q(k, i);
        w0 * (q(k - 1, i) - q1) + w2 * (q(k + 1, i) - q1)
    }

    fn d_r(&self, q: &dyn Fn(usize, usize) -> f64, k: usize, i: usize) -> f64 {
        (q(k, i + 1) - q(k, i - 1)) / (2.0 * self.dr)
    }

    /// `∂± q = q_t + λ± q_r` at `(k, i)`; `plus` selects the family.
    pub fn directional(&self, q: &dyn Fn(usize, usize) -> f64, k: usize, i: usize, plus: bool) -> f64 {
        let (lp, lm) = eigenvalues(self.point(k, i));
        let lam = if plus { lp } else { lm };
        self.d_t(q, k, i) + lam * self.d_r(q, k, i)
    }

    pub fn dv(&self, k: usize, i: usize, plus: bool) -> f64 {
        let v = |k: usize, i: usize| self.snaps[k].v[i];
        self.directional(&v, k, i, plus)
    }

    /// `∂_outer ∂_inner v` by nested application.
    pub fn ddv(&self, k: usize, i: usize, outer_plus: bool, inner_plus: bool) -> f64 {
        let inner = |k: usize, i: usize| self.dv(k, i, inner_plus);
        self.directional(&inner, k, i, outer_plus)
    }

    pub fn u_t(&self, k: usize, i: usize) -> f64 {
        let u = |k: usize, i: usize| self.snaps[k].u[i];
        self.d_t(&u, k, i)
    }

    pub fn d_t_of(&self, q: &dyn Fn(usize, usize) -> f64, k: usize, i: usize) -> f64 {
        self.d_t(q, k, i)
    }

    pub fn d_r_of(&self, q: &dyn Fn(usize, usize) -> f64, k: usize, i: usize) -> f64 {
        self.d_r(q, k, i)
    }
}

/// `[∂₊∂₋ − ∂₋∂₊]v + (u/r)(∂₊v − ∂₋v)` at snapshot `k`, node `i`.
pub fn commutator_residual(snaps: &[UVState], k: usize, i: usize) -> Result<Residual, CharError> {
    let st = Stencil::new(snaps);
    st.check(k, i)?;
    let p = st.point(k, i);
    let r = st.radius(i);
    let pm = st.ddv(k, i, true, false);
    let mp = st.ddv(k, i, false, true);
    let dp = st.dv(k, i, true);
    let dm = st.dv(k, i, false);
    Ok(Residual::from_terms(pm, &[mp, -(p.u / r) * (dp - dm)]))
}

/// Residuals of the two decomposition identities for ∂₊∂₋v and ∂₋∂₊v.
pub fn decomposition_residual(snaps: &[UVState], k: usize, i: usize) -> Result<(Residual, Residual), CharError> {
    let st = Stencil::new(snaps);
    st.check(k, i)?;
    let p = st.point(k, i);
    let r = st.radius(i);
    let (u, v) = (p.u, p.v);
    let f = closure_f(p)?;
    let (fu, fv) = closure_f_partials(p)?;
    let dp = st.dv(k, i, true);
    let dm = st.dv(k, i, false);
    let quad = 2.0 / v * dp * dm;
    let sum = (2.0 * u - fu / (v * v)) * (dp + dm) / (2.0 * r);
    let cst = (2.0 * u * u * v - u * fu / v) / (r * r);
    let diff_pm = (-u + 1.0 / v - 2.0 * f / v + fv) * (dp - dm) / (2.0 * r);
    let diff_mp = (u + 1.0 / v - 2.0 * f / v + fv) * (dp - dm) / (2.0 * r);
    let pm = Residual::from_terms(st.ddv(k, i, true, false), &[quad, sum, diff_pm, cst]);
    let mp = Residual::from_terms(st.ddv(k, i, false, true), &[quad, sum, diff_mp, cst]);
    Ok((pm, mp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{s_to_uv, SPair};
    use crate::types::Grid;

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalues(UVPoint::new(0.0, 1.0)), (1.0, -1.0));
        assert_eq!(eigenvalues(UVPoint::new(0.5, 2.0)), (1.0, 0.0));
        let (p, m) = eigenvalues(UVPoint::new(0.9, 1e3));
        assert!((p - m - 2e-3).abs() < 1e-15);
    }

    #[test]
    fn char_rhs_examples() {
        let s = char_rhs(UVPoint::new(0.0, 1.0), 1.0).unwrap();
        assert_eq!((s.plus_source, s.minus_source), (0.0, 0.0));
        let s = char_rhs(UVPoint::new(0.5, 2.0), 2.0).unwrap();
        assert!((s.plus_source + 0.25).abs() < 1e-12);
        assert!((s.plus_coeff + 0.25).abs() < 1e-15);
        assert!(matches!(char_rhs(UVPoint::new(0.5, 2.0), 0.0), Err(CharError::NonPositiveRadius(_))));
    }

    #[test]
    fn coefficient_examples() {
        let c = coefficients(UVPoint::new(0.0, 2.0), 1.0).unwrap();
        assert_eq!((c.a13, c.a23), (0.0, 0.0));

        let p = s_to_uv(SPair { s1: 1.0, s2: 2.0 });
        let c = coefficients(p, 1.0).unwrap();
        assert!((c.a12 - a12_radical(p)).abs() <= 1e-10 * (1.0 + c.a12.abs()));
        assert!((c.a22 - a22_radical(p)).abs() <= 1e-10 * (1.0 + c.a22.abs()));

        let c0 = coefficients(p, 0.0).unwrap();
        assert_eq!(c0.at22, c0.a22);
        assert_eq!(c0.at12, c0.a12);
        assert!(matches!(coefficients_checked(p, 0.5), Err(CharError::BadAlpha(_))));
        assert!(matches!(coefficients(UVPoint::new(0.5, 2.0), 1.0), Err(CharError::Transform(_))));
    }

    #[test]
    fn rtilde_examples() {
        assert_eq!(rtilde(UVPoint::new(0.0, 3.0), 0.0, 0.0, 1.0, 1.0).unwrap(), (0.0, 0.0));
        let (rp, _) = rtilde(UVPoint::new(0.5, 2.0), 1.0, 0.0, 2.0, 1.0).unwrap();
        assert!((rp - 0.5).abs() < 1e-12);
        let (_, m1) = rtilde(UVPoint::new(0.5, 2.0), 0.0, 0.0, 2.0, 1.0).unwrap();
        let (_, m2) = rtilde(UVPoint::new(0.5, 2.0), 0.0, 0.0, 2.0, 2.0).unwrap();
        assert!((m2 - 2.0 * m1).abs() < 1e-12);
    }

    fn static_stack(v: f64) -> Vec<UVState> {
        let grid = Grid::new(1.0, 2.0, 33);
        (0..5)
            .map(|k| UVState {
                time: 0.01 * k as f64,
                grid,
                u: vec![0.0; 33],
                v: vec![v; 33],
                left_boundary: 1.0,
                right_boundary: 2.0,
            })
            .collect()
    }

    #[test]
    fn static_state_residuals_vanish() {
        let s = static_stack(1.0);
        let c = commutator_residual(&s, 2, 16).unwrap();
        assert_eq!((c.value, c.relative()), (0.0, 0.0));
        assert!(matches!(commutator_residual(&s, 2, 1), Err(CharError::StencilOutOfRange { .. })));
        assert!(matches!(commutator_residual(&s, 1, 16), Err(CharError::StencilOutOfRange { .. })));
        // (0, 1) sits on the sonic set, so the decomposition needs another static state.
        assert!(decomposition_residual(&s, 2, 16).is_err());
        let s = static_stack(2.0);
        let (a, b) = decomposition_residual(&s, 2, 16).unwrap();
        assert_eq!((a.value, b.value), (0.0, 0.0));
    }
}
