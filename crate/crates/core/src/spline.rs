//! Periodic cubic splines on nonuniform knots.
//!
//! The spline matches value, first and second derivative across the seam, so
//! no point of a closed curve is distinguished.

use crate::error::{Error, Result};
use crate::point::Point2;

/// Scalar periodic cubic spline interpolant.
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl PeriodicSpline {
    /// Fits the spline through `(knots[i], values[i])`.
    ///
    /// `knots` holds `n + 1` strictly increasing abscissae; the last one closes
    /// the period and carries the value `values[0]`.
    pub fn fit(knots: &[f64], values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n < 3 {
            return Err(Error::SplineFit(format!("need at least 3 nodes, got {n}")));
        }
        if knots.len() != n + 1 {
            return Err(Error::SplineFit(format!(
                "expected {} knots for {} values, got {}",
                n + 1,
                n,
                knots.len()
            )));
        }
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(i) = h.iter().position(|&hi| !(hi > 0.0) || !hi.is_finite()) {
            return Err(Error::SplineFit(format!(
                "knots not strictly increasing at interval {i}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::SplineFit("non-finite value".into()));
        }

        let slope = |i: usize| (values[(i + 1) % n] - values[i]) / h[i];
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            sub[i] = h[prev];
            diag[i] = 2.0 * (h[prev] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * (slope(i) - slope(prev));
        }
        let second = solve_cyclic(&sub, &diag, &sup, &rhs)?;
        Ok(Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            second,
        })
    }

    pub fn period(&self) -> f64 {
        self.knots[self.knots.len() - 1] - self.knots[0]
    }

    /// Evaluates the interpolant; `x` is wrapped into the base period.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let start = self.knots[0];
        let period = self.period();
        let mut x = start + (x - start).rem_euclid(period);
        if x >= start + period {
            x = start;
        }
        // index of the interval [knots[i], knots[i + 1]) containing x
        let i = self
            .knots
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(n - 1);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - x) / h;
        let b = (x - self.knots[i]) / h;
        let y0 = self.values[i];
        let y1 = self.values[(i + 1) % n];
        let m0 = self.second[i];
        let m1 = self.second[(i + 1) % n];
        a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0
    }
}

/// Periodic cubic spline through planar nodes, one scalar spline per coordinate.
#[derive(Debug, Clone)]
pub struct PeriodicCurveSpline {
    x: PeriodicSpline,
    y: PeriodicSpline,
}

impl PeriodicCurveSpline {
    pub fn fit(knots: &[f64], nodes: &[Point2]) -> Result<Self> {
        let xs: Vec<f64> = nodes.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = nodes.iter().map(|p| p.y).collect();
        Ok(Self {
            x: PeriodicSpline::fit(knots, &xs)?,
            y: PeriodicSpline::fit(knots, &ys)?,
        })
    }

    pub fn eval(&self, t: f64) -> Point2 {
        Point2::new(self.x.eval(t), self.y.eval(t))
    }
}

/// Solves a cyclic tridiagonal system by Sherman-Morrison.
///
/// Row `i` reads `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]` with
/// cyclic indices.
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let corner_top = sub[0]; // A[0][n-1]
    let corner_bottom = sup[n - 1]; // A[n-1][0]
    let gamma = -diag[0];

    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= corner_bottom * corner_top / gamma;

    let x = solve_tridiagonal(sub, &d, sup, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner_bottom;
    let z = solve_tridiagonal(sub, &d, sup, &u)?;

    let denom = 1.0 + z[0] + corner_top * z[n - 1] / gamma;
    if denom.abs() < f64::EPSILON {
        return Err(Error::SplineFit("singular periodic system".into()));
    }
    let fact = (x[0] + corner_top * x[n - 1] / gamma) / denom;
    Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
}

/// Thomas algorithm; `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::SplineFit("zero pivot".into()));
    }
    out[0] = rhs[0] / beta;
    for i in 1..n {
        c[i] = sup[i - 1] / beta;
        beta = diag[i] - sub[i] * c[i];
        if beta == 0.0 {
            return Err(Error::SplineFit("zero pivot".into()));
        }
        out[i] = (rhs[i] - sub[i] * out[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        out[i] -= c[i + 1] * out[i + 1];
    }
    Ok(out)
}
