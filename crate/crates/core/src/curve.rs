//! Closed planar curves: normalization, arc-length parameterization and
//! uniform arc-length resampling.
//!
//! A curve stores `N` distinct nodes; the closing edge from the last node back
//! to the first is implicit and never materialized.

use crate::error::{Error, Result};
use crate::point::{mean, Point2};
use crate::spline::PeriodicCurveSpline;

/// Smallest node count accepted by [`Curve::resample_uniform`].
pub const MIN_RESAMPLE_NODES: usize = 8;

/// Ordered node list of a closed curve; `nodes[0]` is the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    nodes: Vec<Point2>,
}

/// Normalized cumulative chord length at every node, including the closing
/// value `s[N] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthParams {
    s: Vec<f64>,
}

impl ArcLengthParams {
    pub fn values(&self) -> &[f64] {
        &self.s
    }

    /// Parameter value at fractional node position `u` (in node units),
    /// interpolated linearly and extended periodically.
    pub fn at_node_position(&self, u: f64) -> f64 {
        let n = self.s.len() - 1;
        let wraps = (u / n as f64).floor();
        let u = u - wraps * n as f64;
        let i = (u.floor() as usize).min(n - 1);
        let w = u - i as f64;
        wraps + self.s[i] + w * (self.s[i + 1] - self.s[i])
    }

    /// Inverse of [`Self::at_node_position`]: fractional node position whose
    /// parameter is `s` (extended periodically).
    pub fn node_position_of(&self, s: f64) -> f64 {
        let n = self.s.len() - 1;
        let wraps = s.floor();
        let s = s - wraps;
        let i = self
            .s
            .partition_point(|&v| v <= s)
            .saturating_sub(1)
            .min(n - 1);
        let w = (s - self.s[i]) / (self.s[i + 1] - self.s[i]);
        wraps * n as f64 + i as f64 + w
    }
}

impl Curve {
    /// Validates and wraps a node list.
    ///
    /// A trailing node equal to the first one (explicitly closed list) is
    /// dropped.
    pub fn new(mut nodes: Vec<Point2>) -> Result<Self> {
        if nodes.len() > 1 && nodes.first() == nodes.last() {
            nodes.pop();
        }
        if nodes.len() < 4 {
            return Err(Error::InvalidCurve(format!(
                "need at least 4 nodes, got {}",
                nodes.len()
            )));
        }
        if let Some(i) = nodes.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidCurve(format!("node {i} is not finite")));
        }
        let curve = Self { nodes };
        if !(curve.length() > 0.0) {
            return Err(Error::InvalidCurve("curve has zero length".into()));
        }
        Ok(curve)
    }

    pub fn from_xy(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::new(points.into_iter().map(|(x, y)| Point2::new(x, y)).collect())
    }

    pub fn nodes(&self) -> &[Point2] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Point2> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Always true: every curve in this crate is closed.
    pub fn is_closed(&self) -> bool {
        true
    }

    fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.nodes.len();
        (0..n).map(move |i| (self.nodes[i], self.nodes[(i + 1) % n]))
    }

    /// Polygonal length including the closing edge.
    pub fn length(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn centroid(&self) -> Point2 {
        mean(&self.nodes)
    }

    /// Translates the curve so that its node average is the origin.
    pub fn centered(&self) -> Curve {
        let c = self.centroid();
        Curve {
            nodes: self.nodes.iter().map(|&p| p - c).collect(),
        }
    }

    /// Scales the curve about the origin to unit polygonal length.
    pub fn normalized(&self) -> Result<Curve> {
        let len = self.length();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::InvalidCurve(
                "cannot normalize a zero-length curve".into(),
            ));
        }
        Ok(self.scaled(1.0 / len))
    }

    pub fn scaled(&self, factor: f64) -> Curve {
        Curve {
            nodes: self.nodes.iter().map(|&p| p * factor).collect(),
        }
    }

    /// Counterclockwise rotation of every node about the origin.
    pub fn rotated(&self, angle: f64) -> Curve {
        Curve {
            nodes: self.nodes.iter().map(|p| p.rotated_ccw(angle)).collect(),
        }
    }

    /// Cyclically relabels the nodes so that node `p` becomes the start:
    /// `out[l] = self[(l + p) mod N]`.
    pub fn shifted(&self, p: usize) -> Curve {
        let n = self.nodes.len();
        Curve {
            nodes: (0..n).map(|l| self.nodes[(l + p) % n]).collect(),
        }
    }

    /// Normalized cumulative chord length `s[l] = L_l / L_N`.
    pub fn arc_length_params(&self) -> Result<ArcLengthParams> {
        let n = self.nodes.len();
        let mut s = Vec::with_capacity(n + 1);
        s.push(0.0);
        let mut acc = 0.0;
        for (i, (a, b)) in self.edges().enumerate() {
            let d = (b - a).norm();
            if !(d > 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "nodes {i} and {} coincide",
                    (i + 1) % n
                )));
            }
            acc += d;
            s.push(acc);
        }
        for v in &mut s {
            *v /= acc;
        }
        s[n] = 1.0;
        Ok(ArcLengthParams { s })
    }

    /// Periodic cubic spline through the nodes with chordal arc length as
    /// abscissa.
    pub fn arc_length_spline(&self) -> Result<PeriodicCurveSpline> {
        let params = self.arc_length_params()?;
        PeriodicCurveSpline::fit(params.values(), &self.nodes)
    }

    /// Periodic cubic spline through the nodes with the uniform node
    /// parameter `l / N` as abscissa.
    pub fn node_spline(&self) -> Result<PeriodicCurveSpline> {
        let n = self.nodes.len();
        let knots: Vec<f64> = (0..=n).map(|l| l as f64 / n as f64).collect();
        PeriodicCurveSpline::fit(&knots, &self.nodes)
    }

    /// Resamples to `n_out` nodes equally spaced in (chordal) arc length.
    pub fn resample_uniform(&self, n_out: usize) -> Result<Curve> {
        if n_out < MIN_RESAMPLE_NODES {
            return Err(Error::InvalidParameter(format!(
                "resampling needs at least {MIN_RESAMPLE_NODES} nodes, got {n_out}"
            )));
        }
        let spline = self.arc_length_spline()?;
        let nodes = (0..n_out)
            .map(|l| spline.eval(l as f64 / n_out as f64))
            .collect();
        Curve::new(nodes)
    }

    /// Standard preprocessing: center, scale to unit length and, when
    /// `resample` is set, resample uniformly in arc length to `n` nodes
    /// (re-centered and re-normalized afterwards).
    pub fn preprocess(&self, n: usize, resample: bool) -> Result<Curve> {
        let base = self.centered().normalized()?;
        if !resample {
            return Ok(base);
        }
        base.resample_uniform(n)?.centered().normalized()
    }
}

impl AsRef<[Point2]> for Curve {
    fn as_ref(&self) -> &[Point2] {
        &self.nodes
    }
}
