//! Deterministic synthetic curve families and the template transformations
//! (starting-point shift, rotation, reparameterization) used in experiments.
//!
//! Family formulas, parameterized by `phi` in `[0, 2 pi)`:
//!
//! | family         | curve                                         | defaults            |
//! |----------------|-----------------------------------------------|---------------------|
//! | superellipse   | `|x/a|^p + |y/b|^p = 1`                       | a=1, b=0.6, p=4     |
//! | hippopede      | `r^2 = 4b(a - b sin^2 phi)`                   | a=1, b=0.9          |
//! | bumps          | `r = 1 + eps sin(k phi)`                      | eps=0.2, k=6        |
//! | limacon        | `r = a + b cos phi`                           | a=0.75, b=0.5       |
//! | clover         | `r = 1 + eps cos(k phi)`                      | eps=0.4, k=4        |
//! | circle         | `r = radius`                                  | radius=1            |
//! | fourier_random | `r = 1 + sum_{k=2}^{K} (a_k cos + b_k sin)/k^2` | K=8, amplitude=0.5 |
//!
//! All families are traversed counterclockwise.

use std::f64::consts::{FRAC_PI_3, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point::Point2;
use crate::srv::Reparameterization;

/// Starting-point shift of the standard recovery experiment.
pub const RECOVERY_SHIFT: f64 = 0.25;
/// Rotation of the standard recovery experiment.
pub const RECOVERY_ANGLE: f64 = FRAC_PI_3;

/// Names of the five non-random families used throughout the experiments.
pub const STANDARD_FAMILIES: [&str; 5] =
    ["superellipse", "hippopede", "bumps", "limacon", "clover"];

#[derive(Debug, Clone, PartialEq)]
pub enum CurveFamily {
    Superellipse {
        a: f64,
        b: f64,
        p: f64,
    },
    Hippopede {
        a: f64,
        b: f64,
    },
    Bumps {
        amplitude: f64,
        lobes: u32,
    },
    Limacon {
        a: f64,
        b: f64,
    },
    Clover {
        amplitude: f64,
        leaves: u32,
    },
    Circle {
        radius: f64,
    },
    FourierRandom {
        seed: u64,
        harmonics: u32,
        amplitude: f64,
    },
}

impl CurveFamily {
    pub fn superellipse() -> Self {
        Self::Superellipse {
            a: 1.0,
            b: 0.6,
            p: 4.0,
        }
    }

    pub fn hippopede() -> Self {
        Self::Hippopede { a: 1.0, b: 0.9 }
    }

    pub fn bumps() -> Self {
        Self::Bumps {
            amplitude: 0.2,
            lobes: 6,
        }
    }

    pub fn limacon() -> Self {
        Self::Limacon { a: 0.75, b: 0.5 }
    }

    pub fn clover() -> Self {
        Self::Clover {
            amplitude: 0.4,
            leaves: 4,
        }
    }

    pub fn circle() -> Self {
        Self::Circle { radius: 1.0 }
    }

    pub fn fourier_random(seed: u64) -> Self {
        Self::FourierRandom {
            seed,
            harmonics: 8,
            amplitude: 0.5,
        }
    }

    /// Family with default parameters; `seed` only matters for
    /// `fourier_random`.
    pub fn by_name(name: &str, seed: u64) -> Result<Self> {
        Ok(match name {
            "superellipse" => Self::superellipse(),
            "hippopede" => Self::hippopede(),
            "bumps" => Self::bumps(),
            "limacon" => Self::limacon(),
            "clover" => Self::clover(),
            "circle" => Self::circle(),
            "fourier_random" => Self::fourier_random(seed),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown curve family `{other}`"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Superellipse { .. } => "superellipse",
            Self::Hippopede { .. } => "hippopede",
            Self::Bumps { .. } => "bumps",
            Self::Limacon { .. } => "limacon",
            Self::Clover { .. } => "clover",
            Self::Circle { .. } => "circle",
            Self::FourierRandom { .. } => "fourier_random",
        }
    }

    /// Checks the documented parameter ranges, which keep every family a
    /// simple closed curve.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            Self::Superellipse { a, b, p } => {
                if !(a > 0.0 && b > 0.0 && p >= 1.0) {
                    return bad(format!(
                        "superellipse needs a, b > 0 and p >= 1 (a={a}, b={b}, p={p})"
                    ));
                }
            }
            Self::Hippopede { a, b } => {
                if !(b > 0.0 && a > b) {
                    return bad(format!("hippopede needs a > b > 0 (a={a}, b={b})"));
                }
            }
            Self::Bumps { amplitude, lobes }
            | Self::Clover {
                amplitude,
                leaves: lobes,
            } => {
                if !(amplitude.abs() < 1.0) || lobes == 0 {
                    return bad(format!(
                        "{} needs |amplitude| < 1 and at least one lobe",
                        self.name()
                    ));
                }
            }
            Self::Limacon { a, b } => {
                if !(a > b.abs()) {
                    return bad(format!("limacon needs a > |b| (a={a}, b={b})"));
                }
            }
            Self::Circle { radius } => {
                if !(radius > 0.0) {
                    return bad(format!("circle needs radius > 0 (radius={radius})"));
                }
            }
            Self::FourierRandom {
                harmonics,
                amplitude,
                ..
            } => {
                // sum_{k>=2} 2 A / k^2 < 2 A (pi^2/6 - 1) keeps r > 0 for A < 0.77
                if harmonics < 2 || !(0.0..0.75).contains(&amplitude) {
                    return bad(
                        "fourier_random needs harmonics >= 2 and 0 <= amplitude < 0.75".into(),
                    );
                }
            }
        }
        Ok(())
    }

    fn radial_coefficients(&self) -> Vec<(f64, f64)> {
        match *self {
            Self::FourierRandom {
                seed,
                harmonics,
                amplitude,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (2..=harmonics)
                    .map(|k| {
                        let decay = amplitude / (k * k) as f64;
                        let a = rng.random_range(-1.0..1.0) * decay;
                        let b = rng.random_range(-1.0..1.0) * decay;
                        (a, b)
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    fn point_with(&self, phi: f64, coeffs: &[(f64, f64)]) -> Point2 {
        let polar = |r: f64| Point2::new(r * phi.cos(), r * phi.sin());
        match *self {
            Self::Superellipse { a, b, p } => {
                // polar form; smooth in phi for p >= 2
                let (s, c) = phi.sin_cos();
                polar(((c / a).abs().powf(p) + (s / b).abs().powf(p)).powf(-1.0 / p))
            }
            Self::Hippopede { a, b } => {
                let s = phi.sin();
                polar((4.0 * b * (a - b * s * s)).sqrt())
            }
            Self::Bumps { amplitude, lobes } => polar(1.0 + amplitude * (lobes as f64 * phi).sin()),
            Self::Limacon { a, b } => polar(a + b * phi.cos()),
            Self::Clover { amplitude, leaves } => {
                polar(1.0 + amplitude * (leaves as f64 * phi).cos())
            }
            Self::Circle { radius } => polar(radius),
            Self::FourierRandom { .. } => {
                let r = 1.0
                    + coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, (a, b))| {
                            let k = (i + 2) as f64;
                            a * (k * phi).cos() + b * (k * phi).sin()
                        })
                        .sum::<f64>();
                polar(r)
            }
        }
    }

    /// Point at parameter `phi`.
    pub fn point(&self, phi: f64) -> Point2 {
        self.point_with(phi, &self.radial_coefficients())
    }

    /// Samples at `phi_l = phase + 2 pi l / n`.
    pub fn sample(&self, n: usize, phase: f64) -> Result<Vec<Point2>> {
        self.validate()?;
        let coeffs = self.radial_coefficients();
        Ok((0..n)
            .map(|l| self.point_with(phase + TAU * l as f64 / n as f64, &coeffs))
            .collect())
    }

    /// Parameter `phi` at which the fraction `frac` of the total length has
    /// been traversed, from a dense polyline.
    pub fn parameter_at_length_fraction(&self, frac: f64) -> Result<f64> {
        const DENSE: usize = 1 << 16;
        let pts = self.sample(DENSE, 0.0)?;
        let mut cum = Vec::with_capacity(DENSE + 1);
        cum.push(0.0);
        for l in 0..DENSE {
            let d = (pts[(l + 1) % DENSE] - pts[l]).norm();
            cum.push(cum[l] + d);
        }
        let target = frac.rem_euclid(1.0) * cum[DENSE];
        let i = cum
            .partition_point(|&c| c <= target)
            .saturating_sub(1)
            .min(DENSE - 1);
        let w = (target - cum[i]) / (cum[i + 1] - cum[i]);
        Ok(TAU * (i as f64 + w) / DENSE as f64)
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::by_name(s, 0)
    }
}

/// `n` nodes at uniform parameter values, starting at `phi = 0`.
pub fn gen_curve(family: &CurveFamily, n: usize) -> Result<Curve> {
    Curve::new(family.sample(n, 0.0)?)
}

/// Reparameterization applied to a template curve.
#[derive(Debug, Clone, PartialEq)]
pub enum Warp {
    Identity,
    /// `t + 0.025 sin(4 pi t)`.
    Gamma1,
    /// `t + 1.6 t^2 (t - 1)^2`.
    Gamma2,
    /// Samples on a uniform grid, linearly interpolated.
    Custom(Reparameterization),
}

impl Warp {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Warp::Identity => t,
            Warp::Gamma1 => t + 0.025 * (2.0 * TAU * t).sin(),
            Warp::Gamma2 => t + 1.6 * t * t * (t - 1.0) * (t - 1.0),
            Warp::Custom(g) => g.eval(t),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Warp::Identity),
            "gamma1" => Ok(Warp::Gamma1),
            "gamma2" => Ok(Warp::Gamma2),
            other => Err(Error::InvalidWarp(format!("unknown warp `{other}`"))),
        }
    }
}

/// Applies, in order, a starting-point shift, a counterclockwise rotation by
/// `theta` and a reparameterization:
///
/// ```text
/// out[l] = rot(theta) S(warp(t_l) - start_shift)
/// ```
///
/// where `S` is the periodic spline through the input nodes over the uniform
/// node parameter. The input's starting point ends up at parameter
/// `start_shift` of the output, so rigid alignment of the output against the
/// input recovers `t0 = start_shift` and `theta`.
pub fn transform_curve(c: &Curve, start_shift: f64, theta: f64, warp: &Warp) -> Result<Curve> {
    if !(0.0..1.0).contains(&start_shift) {
        return Err(Error::InvalidParameter(format!(
            "start shift must lie in [0, 1), got {start_shift}"
        )));
    }
    let spline = c.node_spline()?;
    let n = c.len();
    let nodes = (0..n)
        .map(|l| {
            let t = warp.eval(l as f64 / n as f64);
            spline.eval(t - start_shift).rotated_ccw(theta)
        })
        .collect();
    Curve::new(nodes)
}

/// Offset, in node spacings, between the template's first node and the
/// reference node it starts at in [`recovery_pair`].
pub const TEMPLATE_NODE_OFFSET: f64 = 0.25;

/// Reference/template pair for the rigid recovery experiment at `n` nodes.
///
/// The reference samples `family` uniformly in `phi` from `phi = 0`. The
/// template samples the same family uniformly in `phi` from the point at
/// length fraction `1 - start_shift` plus [`TEMPLATE_NODE_OFFSET`] node
/// spacings, then is rotated counterclockwise by `theta`. Both are centered,
/// scaled to unit length and resampled uniformly in arc length. The nearest
/// grid answer is `(start_shift, theta)`, and the template nodes interleave
/// with the reference nodes instead of reproducing them, so the optimal
/// energy measures discretization error.
pub fn recovery_pair(
    family: &CurveFamily,
    n: usize,
    start_shift: f64,
    theta: f64,
) -> Result<(Curve, Curve)> {
    let reference = gen_curve(family, n)?.preprocess(n, true)?;
    let start = 1.0 - start_shift + TEMPLATE_NODE_OFFSET / n as f64;
    let phase = family.parameter_at_length_fraction(start)?;
    let raw = Curve::new(family.sample(n, phase)?)?.rotated(theta);
    let template = raw.preprocess(n, true)?;
    Ok((reference, template))
}

/// Pair for the elastic experiments: the arc-length resampled family curve
/// and its copy with starting point moved by [`RECOVERY_SHIFT`], rotated by
/// [`RECOVERY_ANGLE`] and reparameterized by `warp`.
pub fn elastic_pair(family: &CurveFamily, n: usize, warp: &Warp) -> Result<(Curve, Curve)> {
    let c1 = gen_curve(family, n)?.preprocess(n, true)?;
    let c2 = transform_curve(&c1, RECOVERY_SHIFT, RECOVERY_ANGLE, warp)?
        .centered()
        .normalized()?;
    Ok((c1, c2))
}
