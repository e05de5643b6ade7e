//! Dynamic-programming search for the reparameterization `gamma`.
//!
//! Paths run over grid vertices `(i, j)`, `0 <= i, j <= N`, from `(0, 0)` to
//! `(N, N)`; vertex `(i, j)` means `gamma(i / N) = j / N`. A step
//! `(di, dj)` has constant slope `dj / di` and costs
//!
//! ```text
//! h sum_{k=0}^{di-1} |q1[i+k] - sqrt(dj/di) Q2(j + k dj/di)|^2
//! ```
//!
//! with `Q2` the periodic linear interpolant of `q2`. Summed over a path this
//! is exactly [`crate::srv::elastic_energy`] of the resulting warp with
//! `t0 = 0` and `R = I`.

use crate::error::{Error, Result};
use crate::point::Point2;
use crate::srv::{interpolate_periodic, Reparameterization, SrvCurve};

/// Search options for [`dp_reparam_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    /// Steps `(di, dj)` range over coprime pairs in `1..=max_step`.
    pub max_step: usize,
    /// Restricts the search to `|i - j| <= band` when set.
    pub band: Option<usize>,
}

impl Default for DpOptions {
    fn default() -> Self {
        Self {
            max_step: 4,
            band: None,
        }
    }
}

/// Optimal warp and its discrete energy.
#[derive(Debug, Clone)]
pub struct DpResult {
    pub gamma: Reparameterization,
    pub energy: f64,
}

/// Admissible steps for a given maximum step length, gcd-reduced.
pub fn admissible_steps(max_step: usize) -> Vec<(usize, usize)> {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut steps = Vec::new();
    for di in 1..=max_step {
        for dj in 1..=max_step {
            if gcd(di, dj) == 1 {
                steps.push((di, dj));
            }
        }
    }
    steps
}

/// Cost of one step starting at vertex `(i, j)`.
#[inline]
pub fn step_cost(q1: &[Point2], q2: &[Point2], i: usize, j: usize, di: usize, dj: usize) -> f64 {
    let slope = dj as f64 / di as f64;
    let scale = slope.sqrt();
    let mut sum = 0.0;
    for k in 0..di {
        let x = j as f64 + k as f64 * slope;
        let v = interpolate_periodic(q2, x) * scale;
        sum += (q1[i + k] - v).norm_sq();
    }
    sum / q1.len() as f64
}

/// `step_cost` with the interpolation offsets and weights precomputed; the
/// fractional positions `k dj / di` do not depend on the start vertex.
struct StepKernel {
    taps: Vec<(usize, f64)>,
    scale: f64,
}

impl StepKernel {
    fn new(di: usize, dj: usize) -> Self {
        let slope = dj as f64 / di as f64;
        let taps = (0..di)
            .map(|k| {
                let x = k as f64 * slope;
                let a = x.floor();
                (a as usize, x - a)
            })
            .collect();
        Self {
            taps,
            scale: slope.sqrt(),
        }
    }

    /// Unnormalized cost; `q1` holds the step's `di` samples and `q2` starts
    /// at column `j` with at least `dj + 1` samples.
    #[inline]
    fn cost(&self, q1: &[Point2], q2: &[Point2]) -> f64 {
        self.taps
            .iter()
            .zip(q1)
            .map(|(&(a, w), &p)| (p - q2[a].lerp(q2[a + 1], w) * self.scale).norm_sq())
            .sum()
    }
}

/// Warp for the vertex path `path`.
pub fn path_to_gamma(path: &[(usize, usize)], n: usize) -> Result<Reparameterization> {
    let mut gamma = vec![0.0; n + 1];
    for w in path.windows(2) {
        let ((i0, j0), (i1, j1)) = (w[0], w[1]);
        let slope = (j1 - j0) as f64 / (i1 - i0) as f64;
        for k in 0..(i1 - i0) {
            gamma[i0 + k] = (j0 as f64 + k as f64 * slope) / n as f64;
        }
    }
    gamma[n] = 1.0;
    Reparameterization::from_samples(gamma)
}

/// Optimal `gamma` aligning `q2` to `q1` over the default step set.
pub fn dp_reparam(q1: &SrvCurve, q2: &SrvCurve) -> Result<Reparameterization> {
    Ok(dp_reparam_with(q1, q2, &DpOptions::default())?.gamma)
}

pub fn dp_reparam_with(q1: &SrvCurve, q2: &SrvCurve, opts: &DpOptions) -> Result<DpResult> {
    let n = q1.len();
    if q2.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: q2.len(),
        });
    }
    if opts.max_step == 0 {
        return Err(Error::InvalidParameter("max_step must be positive".into()));
    }
    let steps = admissible_steps(opts.max_step);
    let band = opts.band.unwrap_or(n).min(n);
    let (q1, q2) = (q1.samples(), q2.samples());
    let kernels: Vec<StepKernel> = steps
        .iter()
        .map(|&(di, dj)| StepKernel::new(di, dj))
        .collect();
    // q2 followed by its first max_step + 1 samples, so kernels never wrap
    let q2: Vec<Point2> = q2
        .iter()
        .chain(q2.iter().cycle().take(opts.max_step + 1))
        .copied()
        .collect();
    let inv_n = 1.0 / n as f64;

    // row i stores columns lo[i]..=hi[i]
    let lo: Vec<usize> = (0..=n).map(|i| i.saturating_sub(band)).collect();
    let hi: Vec<usize> = (0..=n).map(|i| (i + band).min(n)).collect();
    let mut offset = Vec::with_capacity(n + 2);
    offset.push(0usize);
    for i in 0..=n {
        offset.push(offset[i] + hi[i] - lo[i] + 1);
    }
    let cells = offset[n + 1];
    let mut cost = vec![f64::INFINITY; cells];
    let mut from = vec![u8::MAX; cells];
    let index = |i: usize, j: usize| -> Option<usize> {
        (j >= lo[i] && j <= hi[i]).then(|| offset[i] + j - lo[i])
    };
    cost[0] = 0.0;

    for i in 1..=n {
        for j in lo[i]..=hi[i] {
            let mut best = f64::INFINITY;
            let mut best_step = u8::MAX;
            for (s, &(di, dj)) in steps.iter().enumerate() {
                if di > i || dj > j {
                    continue;
                }
                let (pi, pj) = (i - di, j - dj);
                let Some(p) = index(pi, pj) else { continue };
                let base = cost[p];
                if !base.is_finite() || base >= best {
                    continue;
                }
                let c = base + kernels[s].cost(&q1[pi..pi + di], &q2[pj..]) * inv_n;
                if c < best {
                    best = c;
                    best_step = s as u8;
                }
            }
            let k = index(i, j).expect("cell in band");
            cost[k] = best;
            from[k] = best_step;
        }
    }

    let end = index(n, n).expect("end vertex in band");
    let energy = cost[end];
    if !energy.is_finite() {
        return Err(Error::InvalidParameter(
            "no admissible path; widen the band or raise max_step".into(),
        ));
    }
    let mut path = vec![(n, n)];
    let (mut i, mut j) = (n, n);
    while (i, j) != (0, 0) {
        let s = from[index(i, j).expect("path stays in band")] as usize;
        let (di, dj) = steps[s];
        i -= di;
        j -= dj;
        path.push((i, j));
    }
    path.reverse();
    Ok(DpResult {
        gamma: path_to_gamma(&path, n)?,
        energy,
    })
}
