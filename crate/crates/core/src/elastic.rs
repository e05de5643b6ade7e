//! Elastic shape distance between closed curves.
//!
//! Two solvers minimize the SRV mismatch energy over starting point, rotation
//! and reparameterization:
//!
//! * [`elastic_distance_approach1`] loops over every starting point, fits the
//!   Kabsch rotation for it and runs the full DP for `gamma`: `O(N^3)`.
//! * [`elastic_distance_approach2`] resamples both curves uniformly in arc
//!   length, pre-aligns them rigidly with the FFT search, then alternates
//!   between a DP step for `gamma` and an FFT step for `(t0, R)` on the SRV
//!   samples until the energy stalls.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::dp::{dp_reparam_with, DpOptions};
use crate::error::{Error, Result};
use crate::rigid::{
    best_alignment, correlation_all_shifts_naive, cross_correlation_matrix, kabsch_rotation,
    FftCorrelator, RigidAlignment, Rotation2,
};
use crate::srv::{
    apply_srv_action, l2_distance_sq, srv_center, srv_transform, Reparameterization, SrvCurve,
};

/// Largest node count accepted by approach 1 by default.
pub const DEFAULT_MAX_NODES_APPROACH1: usize = 512;

/// Result of an elastic match: `q1 ≈ sqrt(gamma') R q2(t0 + gamma)`.
#[derive(Debug, Clone)]
pub struct ElasticMatch {
    pub t0: f64,
    pub rotation: Rotation2,
    pub gamma: Reparameterization,
    /// `sqrt(energy)`.
    pub distance: f64,
    pub energy: f64,
    pub iterations: usize,
    /// Energy after initialization and after every iteration.
    pub energy_trace: Vec<f64>,
    pub converged: bool,
}

/// JSON shape of an [`ElasticMatch`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ElasticMatchRecord {
    pub t0: f64,
    pub theta: f64,
    pub gamma: Vec<f64>,
    pub distance: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&ElasticMatch> for ElasticMatchRecord {
    fn from(m: &ElasticMatch) -> Self {
        Self {
            t0: m.t0,
            theta: m.rotation.theta,
            gamma: m.gamma.samples().to_vec(),
            distance: m.distance,
            iterations: m.iterations,
            converged: m.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approach1Options {
    pub max_nodes: usize,
    pub dp: DpOptions,
}

impl Default for Approach1Options {
    fn default() -> Self {
        Self {
            max_nodes: DEFAULT_MAX_NODES_APPROACH1,
            dp: DpOptions::default(),
        }
    }
}

/// How the `(t0, R)` searches, pre-alignment included, scan starting points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RigidSearch {
    #[default]
    Fft,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approach2Options {
    pub max_iters: usize,
    /// Stop once an iteration lowers the energy by less than this.
    pub energy_tol: f64,
    pub dp: DpOptions,
    pub rigid: RigidSearch,
    /// Resample both curves uniformly in arc length before matching.
    pub resample: bool,
}

/// Default DP band (in grid cells) for the approach 2 `gamma` steps.
pub const DEFAULT_APPROACH2_BAND: usize = 12;

impl Default for Approach2Options {
    fn default() -> Self {
        Self {
            max_iters: 30,
            energy_tol: 1e-6,
            dp: DpOptions {
                max_step: 4,
                band: Some(DEFAULT_APPROACH2_BAND),
            },
            rigid: RigidSearch::Fft,
            resample: true,
        }
    }
}

fn check_pair(c1: &Curve, c2: &Curve) -> Result<usize> {
    if c1.len() != c2.len() {
        return Err(Error::LengthMismatch {
            left: c1.len(),
            right: c2.len(),
        });
    }
    Ok(c1.len())
}

/// Exhaustive baseline: Kabsch rotation and full DP for every starting point.
pub fn elastic_distance_approach1(
    c1: &Curve,
    c2: &Curve,
    opts: &Approach1Options,
) -> Result<ElasticMatch> {
    let n = check_pair(c1, c2)?;
    if n > opts.max_nodes {
        return Err(Error::TooManyNodes {
            n,
            max: opts.max_nodes,
        });
    }
    let q1 = srv_transform(c1.nodes())?;
    let q2 = srv_transform(c2.nodes())?;

    let candidates = (0..n)
        .into_par_iter()
        .map(|m| -> Result<(usize, Rotation2, Reparameterization, f64)> {
            let a = cross_correlation_matrix(&q1, &q2, m)?;
            let rotation = kabsch_rotation(&a).rotation;
            let moved = q2.shifted(m).rotated(rotation);
            let res = dp_reparam_with(&q1, &moved, &opts.dp)?;
            Ok((m, rotation, res.gamma, res.energy))
        })
        .collect::<Result<Vec<_>>>()?;

    let (m, rotation, gamma, energy) = candidates
        .into_iter()
        .reduce(|best, cand| if cand.3 < best.3 { cand } else { best })
        .expect("at least one shift");
    Ok(ElasticMatch {
        t0: m as f64 / n as f64,
        rotation,
        gamma,
        distance: energy.sqrt(),
        energy,
        iterations: 1,
        energy_trace: vec![energy],
        converged: true,
    })
}

enum Searcher {
    Fft(FftCorrelator),
    Naive,
}

impl Searcher {
    fn align(&self, a: &[crate::Point2], b: &[crate::Point2]) -> Result<RigidAlignment> {
        match self {
            Searcher::Fft(c) => c.align(a, b),
            Searcher::Naive => {
                let seq = correlation_all_shifts_naive(a, b)?;
                Ok(best_alignment(&seq, a, b))
            }
        }
    }
}

/// Current `(t0, R, gamma)` of the alternating solver with its energy.
#[derive(Debug, Clone)]
struct State {
    t0: f64,
    rotation: Rotation2,
    gamma: Reparameterization,
    energy: f64,
}

struct Problem {
    q1: SrvCurve,
    q2: SrvCurve,
}

impl Problem {
    fn acted(&self, t0: f64, rotation: Rotation2, gamma: &Reparameterization) -> Result<SrvCurve> {
        apply_srv_action(&self.q2, t0, rotation, gamma)
    }

    fn state(&self, t0: f64, rotation: Rotation2, gamma: Reparameterization) -> Result<State> {
        let t0 = t0.rem_euclid(1.0);
        let energy = l2_distance_sq(&self.q1, &self.acted(t0, rotation, &gamma)?);
        Ok(State {
            t0,
            rotation,
            gamma,
            energy,
        })
    }

    /// DP on `q1` against the current `q2*`, composed into `gamma`.
    fn gamma_step(&self, s: &State, dp: &DpOptions) -> Result<State> {
        let acted = self.acted(s.t0, s.rotation, &s.gamma)?;
        let step = dp_reparam_with(&self.q1, &acted, dp)?;
        let gamma = s.gamma.compose(&step.gamma)?;
        self.state(s.t0, s.rotation, gamma)
    }

    /// Rigid search of the centered `q2*` against the centered `q1`; the grid
    /// shift `m` re-bases `gamma` at `t_m` and moves `t0` to `t0 + gamma(t_m)`.
    fn rigid_step(&self, s: &State, searcher: &Searcher) -> Result<State> {
        let acted = self.acted(s.t0, s.rotation, &s.gamma)?;
        let a = searcher.align(&srv_center(&self.q1), &srv_center(&acted))?;
        let gamma = s.gamma.rebased(a.shift);
        let t0 = s.t0 + s.gamma.samples()[a.shift];
        self.state(t0, a.rotation.compose(&s.rotation), gamma)
    }
}

/// Alternating `(t0, R)` / `gamma` minimization initialized by rigid
/// pre-alignment of the arc-length resampled curves.
pub fn elastic_distance_approach2(
    c1: &Curve,
    c2: &Curve,
    opts: &Approach2Options,
) -> Result<ElasticMatch> {
    let n = check_pair(c1, c2)?;
    let (c1, c2) = if opts.resample {
        (c1.preprocess(n, true)?, c2.preprocess(n, true)?)
    } else {
        (c1.clone(), c2.clone())
    };
    let searcher = match opts.rigid {
        RigidSearch::Fft => Searcher::Fft(FftCorrelator::new(n)),
        RigidSearch::Naive => Searcher::Naive,
    };
    let pre = searcher.align(c1.centered().nodes(), c2.centered().nodes())?;

    let problem = Problem {
        q1: srv_transform(c1.nodes())?,
        q2: srv_transform(c2.nodes())?,
    };
    let mut state = problem.state(pre.t0(), pre.rotation, Reparameterization::identity(n))?;
    let mut trace = vec![state.energy];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        iterations += 1;
        let before = state.energy;
        let next = problem.gamma_step(&state, &opts.dp)?;
        if next.energy <= state.energy {
            state = next;
        }
        let next = problem.rigid_step(&state, &searcher)?;
        if next.energy <= state.energy {
            state = next;
        }
        trace.push(state.energy);
        if before - state.energy < opts.energy_tol {
            converged = true;
            break;
        }
    }

    Ok(ElasticMatch {
        t0: state.t0,
        rotation: state.rotation,
        distance: state.energy.sqrt(),
        energy: state.energy,
        gamma: state.gamma,
        iterations,
        energy_trace: trace,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Approach1(Approach1Options),
    Approach2(Approach2Options),
}

impl Method {
    pub fn distance(&self, c1: &Curve, c2: &Curve) -> Result<ElasticMatch> {
        match self {
            Method::Approach1(o) => elastic_distance_approach1(c1, c2, o),
            Method::Approach2(o) => elastic_distance_approach2(c1, c2, o),
        }
    }
}

/// Pairwise distances; failed pairs hold `NaN` and are listed in `failures`.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    pub values: Vec<Vec<f64>>,
    /// Wall time of each pair in seconds.
    pub seconds: Vec<Vec<f64>>,
    pub failures: Vec<(usize, usize, String)>,
}

/// Full (unsymmetrized) matrix `D[i][j] = distance(curve_i, curve_j)` after
/// preprocessing every curve to `n` nodes. Pairs run on the current rayon
/// pool.
pub fn distance_matrix(curves: &[Curve], method: &Method, n: usize) -> Result<DistanceMatrix> {
    if curves.len() < 2 {
        return Err(Error::InvalidParameter(
            "a distance matrix needs at least two curves".into(),
        ));
    }
    let prepared = curves
        .iter()
        .map(|c| c.preprocess(n, true))
        .collect::<Result<Vec<_>>>()?;
    let k = prepared.len();
    let cells: Vec<(usize, usize, Result<f64>, f64)> = (0..k * k)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            let start = Instant::now();
            let d = method
                .distance(&prepared[i], &prepared[j])
                .map(|m| m.distance);
            (i, j, d, start.elapsed().as_secs_f64())
        })
        .collect();
    let mut values = vec![vec![f64::NAN; k]; k];
    let mut seconds = vec![vec![0.0; k]; k];
    let mut failures = Vec::new();
    for (i, j, d, t) in cells {
        seconds[i][j] = t;
        match d {
            Ok(v) => values[i][j] = v,
            Err(e) => failures.push((i, j, e.to_string())),
        }
    }
    Ok(DistanceMatrix {
        values,
        seconds,
        failures,
    })
}
