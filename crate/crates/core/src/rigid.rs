//! Rigid alignment of closed curves over starting point and rotation.
//!
//! Both curves are node sequences of equal length `N` on the uniform grid
//! `t_l = l / N`. For a cyclic shift `m` the cross-correlation matrix is
//!
//! ```text
//! A_kj(m) = sum_l c1[l]_k * c2[(l + m) mod N]_j
//! ```
//!
//! and the rotation maximizing `tr(R A^T)` minimizes the discrete mismatch
//! energy `h sum_l |c1[l] - R c2[(l + m) mod N]|^2` with `h = 1 / N`.
//! [`correlation_all_shifts_fft`] computes `A(m)` for every shift with a
//! handful of length-`N` transforms instead of the `O(N^2)` direct sums.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{sum_sq, Mat2, Point2};
use crate::svd2::{det, matmul, transpose, Svd2};

/// Relative tolerance under which two shift candidates count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Proper rotation `R(theta) = [[cos, sin], [-sin, cos]]`.
///
/// Applying `R(theta)` turns a vector clockwise by `theta`; aligning a
/// template that was turned counterclockwise by `phi` therefore yields
/// `theta = phi`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rotation2 {
    pub theta: f64,
}

impl Rotation2 {
    pub const IDENTITY: Rotation2 = Rotation2 { theta: 0.0 };

    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    /// Reads the angle off a proper rotation matrix.
    pub fn from_matrix(r: &Mat2) -> Self {
        Self {
            theta: r[0][1].atan2(r[0][0]),
        }
    }

    pub fn matrix(&self) -> Mat2 {
        let (s, c) = self.theta.sin_cos();
        [[c, s], [-s, c]]
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        let (s, c) = self.theta.sin_cos();
        Point2::new(c * p.x + s * p.y, -s * p.x + c * p.y)
    }

    /// `self * other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Rotation2) -> Rotation2 {
        Rotation2::new(wrap_angle(self.theta + other.theta))
    }

    /// `tr(R A^T)`.
    pub fn trace_with(&self, a: &Mat2) -> f64 {
        let r = self.matrix();
        r[0][0] * a[0][0] + r[0][1] * a[0][1] + r[1][0] * a[1][0] + r[1][1] * a[1][1]
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = (theta + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Optimal rotation for one correlation matrix.
#[derive(Debug, Clone, Copy)]
pub struct RotationFit {
    pub rotation: Rotation2,
    /// `tr(R A^T)` at the returned rotation.
    pub trace: f64,
    /// Every rotation attains the same trace (`A` has no rotational part).
    pub degenerate: bool,
}

fn is_degenerate(a: &Mat2) -> bool {
    let scale = a.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    let c = a[0][0] + a[1][1];
    let s = a[0][1] - a[1][0];
    c.hypot(s) <= 1e-14 * scale || scale == 0.0
}

/// Kabsch rotation via the SVD `A = U S V^T`: `R = U V^T`, or
/// `R = U diag(1, -1) V^T` when `det(U) det(V) < 0`.
pub fn kabsch_rotation(a: &Mat2) -> RotationFit {
    let svd = Svd2::new(a);
    let correction = if det(&svd.u) * det(&svd.v) > 0.0 {
        [[1.0, 0.0], [0.0, 1.0]]
    } else {
        [[1.0, 0.0], [0.0, -1.0]]
    };
    let r = matmul(&matmul(&svd.u, &correction), &transpose(&svd.v));
    let degenerate = is_degenerate(a);
    let rotation = if degenerate {
        Rotation2::IDENTITY
    } else {
        Rotation2::from_matrix(&r)
    };
    RotationFit {
        rotation,
        trace: rotation.trace_with(a),
        degenerate,
    }
}

/// Closed form over SO(2): `tr(R(theta) A^T) = (A11 + A22) cos + (A12 - A21) sin`.
pub fn optimal_rotation_closed_form(a: &Mat2) -> RotationFit {
    let c = a[0][0] + a[1][1];
    let s = a[0][1] - a[1][0];
    if is_degenerate(a) {
        return RotationFit {
            rotation: Rotation2::IDENTITY,
            trace: c,
            degenerate: true,
        };
    }
    RotationFit {
        rotation: Rotation2::new(s.atan2(c)),
        trace: c.hypot(s),
        degenerate: false,
    }
}

fn check_pair(c1: &[Point2], c2: &[Point2]) -> Result<usize> {
    if c1.len() != c2.len() {
        return Err(Error::LengthMismatch {
            left: c1.len(),
            right: c2.len(),
        });
    }
    if c1.is_empty() {
        return Err(Error::InvalidParameter("empty point sequence".into()));
    }
    Ok(c1.len())
}

/// `A(shift)` by direct summation.
pub fn cross_correlation_matrix(c1: &[Point2], c2: &[Point2], shift: usize) -> Result<Mat2> {
    let n = check_pair(c1, c2)?;
    if shift >= n {
        return Err(Error::ShiftOutOfRange { shift, n });
    }
    Ok(correlation_at(c1, c2, shift))
}

fn correlation_at(c1: &[Point2], c2: &[Point2], shift: usize) -> Mat2 {
    let n = c1.len();
    let mut a = [[0.0; 2]; 2];
    for (l, p) in c1.iter().enumerate() {
        let mut j = l + shift;
        if j >= n {
            j -= n;
        }
        let q = c2[j];
        a[0][0] += p.x * q.x;
        a[0][1] += p.x * q.y;
        a[1][0] += p.y * q.x;
        a[1][1] += p.y * q.y;
    }
    a
}

/// Kabsch rotation for the starting point `t0 = 0`.
pub fn optimal_rotation_fixed_start(c1: &[Point2], c2: &[Point2]) -> Result<Rotation2> {
    Ok(kabsch_rotation(&cross_correlation_matrix(c1, c2, 0)?).rotation)
}

/// Correlation matrices `A(m)` for every cyclic shift `m = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSequence {
    entries: Vec<Mat2>,
}

impl CorrelationSequence {
    pub fn entries(&self) -> &[Mat2] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Direct `O(N^2)` evaluation of every shift.
pub fn correlation_all_shifts_naive(c1: &[Point2], c2: &[Point2]) -> Result<CorrelationSequence> {
    let n = check_pair(c1, c2)?;
    Ok(CorrelationSequence {
        entries: (0..n).map(|m| correlation_at(c1, c2, m)).collect(),
    })
}

/// Planned transforms for circular cross-correlation of length-`N` planar
/// sequences.
///
/// Each curve is packed as the complex signal `x + i y`, so one forward
/// transform per curve yields both coordinate spectra. The four real
/// correlations are recovered from two inverse transforms by packing pairs of
/// Hermitian products as real and imaginary parts.
#[derive(Clone)]
pub struct FftCorrelator {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftCorrelator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftCorrelator").field("n", &self.n).finish()
    }
}

impl FftCorrelator {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn correlate(&self, c1: &[Point2], c2: &[Point2]) -> Result<CorrelationSequence> {
        let n = check_pair(c1, c2)?;
        if n != self.n {
            return Err(Error::LengthMismatch {
                left: n,
                right: self.n,
            });
        }
        let pack = |c: &[Point2]| -> Vec<Complex<f64>> {
            c.iter().map(|p| Complex::new(p.x, p.y)).collect()
        };
        let mut z1 = pack(c1);
        let mut z2 = pack(c2);
        self.forward.process(&mut z1);
        self.forward.process(&mut z2);

        let half = Complex::new(0.5, 0.0);
        let neg_half_i = Complex::new(0.0, -0.5);
        let i = Complex::new(0.0, 1.0);
        let mut upper = vec![Complex::default(); n];
        let mut lower = vec![Complex::default(); n];
        for k in 0..n {
            let nk = if k == 0 { 0 } else { n - k };
            // spectra of the real coordinate sequences
            let (a, ac) = (z1[k], z1[nk].conj());
            let x1 = (a + ac) * half;
            let y1 = (a - ac) * neg_half_i;
            let (b, bc) = (z2[k], z2[nk].conj());
            let x2 = (b + bc) * half;
            let y2 = (b - bc) * neg_half_i;
            // correlation theorem: corr(a, b) = IDFT(conj(DFT a) * DFT b)
            let (x1c, y1c) = (x1.conj(), y1.conj());
            upper[k] = x1c * x2 + i * (x1c * y2);
            lower[k] = y1c * x2 + i * (y1c * y2);
        }
        self.inverse.process(&mut upper);
        self.inverse.process(&mut lower);

        let scale = 1.0 / n as f64;
        let entries = upper
            .iter()
            .zip(&lower)
            .map(|(u, w)| [[u.re * scale, u.im * scale], [w.re * scale, w.im * scale]])
            .collect();
        Ok(CorrelationSequence { entries })
    }

    pub fn align(&self, c1: &[Point2], c2: &[Point2]) -> Result<RigidAlignment> {
        let seq = self.correlate(c1, c2)?;
        Ok(best_alignment(&seq, c1, c2))
    }
}

/// `O(N log N)` evaluation of every shift via the correlation theorem.
pub fn correlation_all_shifts_fft(c1: &[Point2], c2: &[Point2]) -> Result<CorrelationSequence> {
    let n = check_pair(c1, c2)?;
    FftCorrelator::new(n).correlate(c1, c2)
}

/// Optimal starting point and rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidAlignment {
    pub shift: usize,
    pub n: usize,
    pub rotation: Rotation2,
    /// `tr(R A(shift)^T)`.
    pub trace: f64,
    /// Discrete mismatch energy at the optimum.
    pub energy: f64,
    pub degenerate: bool,
}

impl RigidAlignment {
    pub fn t0(&self) -> f64 {
        self.shift as f64 / self.n as f64
    }
}

/// JSON shape of a [`RigidAlignment`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RigidAlignmentRecord {
    pub shift: usize,
    pub t0: f64,
    pub theta: f64,
    pub trace: f64,
    pub energy: f64,
}

impl From<&RigidAlignment> for RigidAlignmentRecord {
    fn from(a: &RigidAlignment) -> Self {
        Self {
            shift: a.shift,
            t0: a.t0(),
            theta: a.rotation.theta,
            trace: a.trace,
            energy: a.energy,
        }
    }
}

/// Energy from the trace identity `h (|c1|^2 + |c2|^2) - 2 h tr(R A^T)`.
pub fn energy_from_trace(sum_sq_1: f64, sum_sq_2: f64, trace: f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    (h * (sum_sq_1 + sum_sq_2) - 2.0 * h * trace).max(0.0)
}

/// Picks the shift with the largest optimal trace; earlier shifts win ties.
pub fn best_alignment(seq: &CorrelationSequence, c1: &[Point2], c2: &[Point2]) -> RigidAlignment {
    let n = seq.len();
    let mut best: Option<(usize, RotationFit)> = None;
    for (m, a) in seq.entries().iter().enumerate() {
        let fit = kabsch_rotation(a);
        match best {
            Some((_, ref b))
                if fit.trace <= b.trace + TIE_TOLERANCE * b.trace.abs().max(1e-300) => {}
            _ => best = Some((m, fit)),
        }
    }
    let (shift, fit) = best.expect("non-empty correlation sequence");
    RigidAlignment {
        shift,
        n,
        rotation: fit.rotation,
        trace: fit.trace,
        energy: energy_from_trace(sum_sq(c1), sum_sq(c2), fit.trace, n),
        degenerate: fit.degenerate,
    }
}

/// Exhaustive search over shifts with direct correlation sums.
pub fn align_naive(c1: &[Point2], c2: &[Point2]) -> Result<RigidAlignment> {
    let seq = correlation_all_shifts_naive(c1, c2)?;
    Ok(best_alignment(&seq, c1, c2))
}

/// Search over shifts with FFT-computed correlations.
pub fn align_fft(c1: &[Point2], c2: &[Point2]) -> Result<RigidAlignment> {
    let n = check_pair(c1, c2)?;
    FftCorrelator::new(n).align(c1, c2)
}

/// `h sum_l |c1[l] - R c2[(l + shift) mod N]|^2`.
pub fn mismatch_energy(
    c1: &[Point2],
    c2: &[Point2],
    shift: usize,
    rotation: Rotation2,
) -> Result<f64> {
    let n = check_pair(c1, c2)?;
    if shift >= n {
        return Err(Error::ShiftOutOfRange { shift, n });
    }
    let sum: f64 = (0..n)
        .map(|l| (c1[l] - rotation.apply(c2[(l + shift) % n])).norm_sq())
        .sum();
    Ok(sum / n as f64)
}
