//! Square-root-velocity (SRV) representation and the elastic mismatch
//! energy
//!
//! ```text
//! E(t0, R, gamma) = int_0^1 |q1(t) - sqrt(gamma'(t)) R q2(t0 + gamma(t))|^2 dt
//! ```
//!
//! discretized on the uniform grid `t_l = l / N` with `h = 1 / N`.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{mean, Point2};
use crate::rigid::Rotation2;

/// Derivative magnitudes below `DERIV_EPS_PER_NODE * N` produce a zero SRV
/// sample.
pub const DERIV_EPS_PER_NODE: f64 = 1e-8;

/// Samples `q_l` of an SRV function on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SrvCurve {
    q: Vec<Point2>,
}

impl SrvCurve {
    pub fn from_samples(q: Vec<Point2>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter("empty SRV sample sequence".into()));
        }
        if q.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("non-finite SRV sample".into()));
        }
        Ok(Self { q })
    }

    pub fn samples(&self) -> &[Point2] {
        &self.q
    }

    pub fn h(&self) -> f64 {
        1.0 / self.q.len() as f64
    }

    /// `h sum_l |q_l|^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.h() * self.q.iter().map(|p| p.norm_sq()).sum::<f64>()
    }

    /// Cyclic shift of the samples: `out[l] = q[(l + m) mod N]`.
    pub fn shifted(&self, m: usize) -> SrvCurve {
        let n = self.q.len();
        SrvCurve {
            q: (0..n).map(|l| self.q[(l + m) % n]).collect(),
        }
    }

    pub fn rotated(&self, rotation: Rotation2) -> SrvCurve {
        SrvCurve {
            q: self.q.iter().map(|&p| rotation.apply(p)).collect(),
        }
    }

    /// Periodic linear interpolant at grid position `x` (in sample units).
    #[inline]
    pub fn interpolate(&self, x: f64) -> Point2 {
        interpolate_periodic(&self.q, x)
    }
}

impl Deref for SrvCurve {
    type Target = [Point2];
    fn deref(&self) -> &[Point2] {
        &self.q
    }
}

#[inline]
pub(crate) fn interpolate_periodic(q: &[Point2], x: f64) -> Point2 {
    let n = q.len();
    let nf = n as f64;
    let mut x = x - (x / nf).floor() * nf;
    if x >= nf {
        x -= nf;
    }
    let i = x.floor() as usize;
    let i = i.min(n - 1);
    let w = x - i as f64;
    let j = if i + 1 == n { 0 } else { i + 1 };
    q[i].lerp(q[j], w)
}

/// SRV samples `q_l = d_l / sqrt(|d_l|)` from periodic central differences
/// `d_l = (c[l+1] - c[l-1]) / (2h)`.
pub fn srv_transform(nodes: &[Point2]) -> Result<SrvCurve> {
    let n = nodes.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "SRV transform needs at least 3 nodes, got {n}"
        )));
    }
    let eps = DERIV_EPS_PER_NODE * n as f64;
    let half_n = 0.5 * n as f64;
    let q = (0..n)
        .map(|l| {
            let d = (nodes[(l + 1) % n] - nodes[(l + n - 1) % n]) * half_n;
            let speed = d.norm();
            if speed < eps {
                Point2::ZERO
            } else {
                d * (1.0 / speed.sqrt())
            }
        })
        .collect();
    SrvCurve::from_samples(q)
}

/// Subtracts the sample mean.
pub fn srv_center(q: &SrvCurve) -> SrvCurve {
    let m = mean(&q.q);
    SrvCurve {
        q: q.q.iter().map(|&p| p - m).collect(),
    }
}

/// Orientation-preserving reparameterization sampled on the grid
/// `t_l = l / N`, `l = 0..=N`, with `gamma[0] = 0` and `gamma[N] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Reparameterization {
    gamma: Vec<f64>,
}

impl Reparameterization {
    pub fn identity(n: usize) -> Self {
        Self {
            gamma: (0..=n).map(|l| l as f64 / n as f64).collect(),
        }
    }

    /// Validates endpoints and monotonicity. Endpoints within `1e-9` are
    /// snapped to `0` and `1`.
    pub fn from_samples(mut gamma: Vec<f64>) -> Result<Self> {
        if gamma.len() < 2 {
            return Err(Error::InvalidWarp("need at least two samples".into()));
        }
        let last = gamma.len() - 1;
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidWarp("non-finite sample".into()));
        }
        if gamma[0].abs() > 1e-9 || (gamma[last] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWarp(format!(
                "endpoints must be 0 and 1, got {} and {}",
                gamma[0], gamma[last]
            )));
        }
        gamma[0] = 0.0;
        gamma[last] = 1.0;
        if let Some(i) = gamma.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidWarp(format!("decreasing at sample {i}")));
        }
        Ok(Self { gamma })
    }

    pub fn samples(&self) -> &[f64] {
        &self.gamma
    }

    /// Number of grid intervals `N`.
    pub fn intervals(&self) -> usize {
        self.gamma.len() - 1
    }

    /// Forward-difference slope on `[t_l, t_{l+1}]`.
    #[inline]
    pub fn slope(&self, l: usize) -> f64 {
        (self.gamma[l + 1] - self.gamma[l]) * self.intervals() as f64
    }

    /// Indices of intervals on which `gamma` is constant.
    pub fn flat_segments(&self) -> Vec<usize> {
        self.gamma
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] <= w[0])
            .map(|(i, _)| i)
            .collect()
    }

    /// Piecewise-linear evaluation on `[0, 1]`, extended by
    /// `gamma(t + 1) = gamma(t) + 1`.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.intervals();
        let wraps = t.floor();
        let x = (t - wraps) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let w = x - i as f64;
        wraps + self.gamma[i] + w * (self.gamma[i + 1] - self.gamma[i])
    }

    /// `self ∘ inner`, sampled on the common grid.
    pub fn compose(&self, inner: &Reparameterization) -> Result<Reparameterization> {
        if inner.intervals() != self.intervals() {
            return Err(Error::LengthMismatch {
                left: self.intervals(),
                right: inner.intervals(),
            });
        }
        let gamma = inner.gamma.iter().map(|&g| self.eval(g)).collect();
        Reparameterization::from_samples(gamma)
    }

    /// Re-bases the warp at grid node `m`: `t -> gamma(t + m/N) - gamma(m/N)`.
    pub fn rebased(&self, m: usize) -> Reparameterization {
        let n = self.intervals();
        let m = m % n;
        let base = self.gamma[m];
        let gamma = (0..=n)
            .map(|l| {
                let k = l + m;
                if k <= n {
                    self.gamma[k] - base
                } else {
                    1.0 + self.gamma[k - n] - base
                }
            })
            .collect();
        Reparameterization { gamma }
    }
}

/// `sqrt(gamma'(t_l)) R Q(t0 + gamma(t_l))` with `Q` the periodic linear
/// interpolant of `q` and `gamma'` the forward-difference slope.
pub fn apply_srv_action(
    q: &SrvCurve,
    t0: f64,
    rotation: Rotation2,
    gamma: &Reparameterization,
) -> Result<SrvCurve> {
    let n = q.len();
    if gamma.intervals() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: gamma.intervals(),
        });
    }
    let nf = n as f64;
    let (s, c) = rotation.theta.sin_cos();
    let out = (0..n)
        .map(|l| {
            let slope = gamma.slope(l);
            if slope < 0.0 {
                return Err(Error::InvalidWarp(format!("negative slope at {l}")));
            }
            let p = q.interpolate((t0 + gamma.samples()[l]) * nf) * slope.sqrt();
            Ok(Point2::new(c * p.x + s * p.y, -s * p.x + c * p.y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SrvCurve { q: out })
}

/// `h sum_l |a_l - b_l|^2`.
pub fn l2_distance_sq(a: &[Point2], b: &[Point2]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(p, q)| (*p - *q).norm_sq()).sum();
    sum / a.len() as f64
}

/// Discretized elastic mismatch energy.
pub fn elastic_energy(
    q1: &SrvCurve,
    q2: &SrvCurve,
    t0: f64,
    rotation: Rotation2,
    gamma: &Reparameterization,
) -> Result<f64> {
    if q1.len() != q2.len() {
        return Err(Error::LengthMismatch {
            left: q1.len(),
            right: q2.len(),
        });
    }
    let acted = apply_srv_action(q2, t0, rotation, gamma)?;
    Ok(l2_distance_sq(q1, &acted))
}
