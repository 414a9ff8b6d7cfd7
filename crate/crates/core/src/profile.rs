//! Profiles ū(r) with derivative access: closed-form linear, ODE-built family
//! on cubic-Hermite samples, and tabulated data through a natural cubic spline.

use serde::{Deserialize, Serialize};

use crate::initdata::FamilyParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    /// `ū(r) = value + slope·(r − origin)`.
    Linear { origin: f64, value: f64, slope: f64 },
    Family { params: FamilyParams, samples: HermiteTable },
    Table { spline: CubicSpline },
}

impl Profile {
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Profile::Linear { origin, value, slope } => value + slope * (r - origin),
            Profile::Family { samples, .. } => samples.value(r),
            Profile::Table { spline } => spline.value(r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            Profile::Linear { slope, .. } => *slope,
            Profile::Family { samples, .. } => samples.derivative(r),
            Profile::Table { spline } => spline.derivative(r),
        }
    }

    /// Interval on which the profile is defined; unbounded for closed forms.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Profile::Linear { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Profile::Family { samples, .. } => (samples.start, samples.end()),
            Profile::Table { spline } => (spline.x[0], spline.x[spline.x.len() - 1]),
        }
    }
}

/// Values and exact derivatives on a uniform grid; cubic Hermite in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteTable {
    pub start: f64,
    pub step: f64,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl HermiteTable {
    pub fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    fn locate(&self, r: f64) -> (usize, f64) {
        let last = self.values.len() - 2;
        let x = ((r - self.start) / self.step).max(0.0);
        let k = (x.floor() as usize).min(last);
        (k, x - k as f64)
    }

    pub fn value(&self, r: f64) -> f64 {
        let (k, s) = self.locate(r);
        let h = self.step;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let (k, s) = self.locate(r);
        let h = self.step;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h
    }
}

/// Natural cubic spline through strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSpline {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Second derivatives at the knots.
    pub m: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SplineError {
    #[error("need at least 3 knots, got {0}")]
    TooFewKnots(usize),
    #[error("abscissae must be strictly increasing (row {0})")]
    NotIncreasing(usize),
    #[error("non-finite value at row {0}")]
    NonFinite(usize),
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self, SplineError> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(SplineError::TooFewKnots(n.min(y.len())));
        }
        for i in 0..n {
            if !x[i].is_finite() || !y[i].is_finite() {
                return Err(SplineError::NonFinite(i));
            }
            if i > 0 && x[i] <= x[i - 1] {
                return Err(SplineError::NotIncreasing(i));
            }
        }
        // Thomas algorithm on the interior second derivatives.
        let mut m = vec![0.0; n];
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0;
            let b = 2.0 * (h0 + h1);
            let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = b - a * c[i - 1];
            c[i] = h1 / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(Self { x, y, m })
    }

    fn locate(&self, r: f64) -> usize {
        let k = self.x.partition_point(|&xi| xi <= r);
        k.clamp(1, self.x.len() - 1) - 1
    }

    pub fn value(&self, r: f64) -> f64 {
        let k = self.locate(r);
        let h = self.x[k + 1] - self.x[k];
        let a = (self.x[k + 1] - r) / h;
        let b = (r - self.x[k]) / h;
        a * self.y[k]
            + b * self.y[k + 1]
            + ((a * a * a - a) * self.m[k] + (b * b * b - b) * self.m[k + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let k = self.locate(r);
        let h = self.x[k + 1] - self.x[k];
        let a = (self.x[k + 1] - r) / h;
        let b = (r - self.x[k]) / h;
        (self.y[k + 1] - self.y[k]) / h
            + ((1.0 - 3.0 * a * a) * self.m[k] + (3.0 * b * b - 1.0) * self.m[k + 1]) * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubic() {
        let f = |r: f64| r * r * r - 2.0 * r + 0.5;
        let df = |r: f64| 3.0 * r * r - 2.0;
        let xs: Vec<f64> = (0..11).map(|i| 1.0 + 0.1 * i as f64).collect();
        let t = HermiteTable {
            start: 1.0,
            step: 0.1,
            values: xs.iter().map(|&x| f(x)).collect(),
            slopes: xs.iter().map(|&x| df(x)).collect(),
        };
        for r in [1.0, 1.03, 1.55, 1.999, 2.0] {
            assert!((t.value(r) - f(r)).abs() < 1e-12);
            assert!((t.derivative(r) - df(r)).abs() < 1e-10);
        }
    }

    #[test]
    fn spline_reproduces_line_and_interpolates() {
        let x = vec![0.0, 0.5, 1.0, 2.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 2.0 * v).collect();
        let s = CubicSpline::new(x.clone(), y.clone()).unwrap();
        for r in [0.0, 0.25, 1.7, 2.0] {
            assert!((s.value(r) - (3.0 - 2.0 * r)).abs() < 1e-13);
            assert!((s.derivative(r) + 2.0).abs() < 1e-12);
        }
        assert!(matches!(CubicSpline::new(vec![0.0, 0.0, 1.0], vec![1.0; 3]), Err(SplineError::NotIncreasing(1))));
        assert!(matches!(CubicSpline::new(vec![0.0, 1.0], vec![1.0; 2]), Err(SplineError::TooFewKnots(2))));
    }
}
