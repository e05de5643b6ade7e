#![allow(dead_code)]

use std::f64::consts::TAU;

use curvalign_core::{Curve, Point2};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit circle plus random Fourier terms `c_k e^{2 pi i k t}` for `k` in
/// `-4..=4`, centered and of unit length. Generic draws have no rotational
/// symmetry.
pub fn random_smooth_curve(rng: &mut impl Rng, n: usize) -> Curve {
    let coeffs: Vec<(i32, f64, f64)> = (-4i32..=4)
        .filter(|&k| k != 0)
        .map(|k| {
            let scale = if k == 1 { 0.3 } else { 0.25 / (k.abs() as f64) };
            (
                k,
                rng.random_range(-1.0..1.0) * scale,
                rng.random_range(-1.0..1.0) * scale,
            )
        })
        .collect();
    let nodes = (0..n)
        .map(|l| {
            let t = l as f64 / n as f64;
            let (mut x, mut y) = (0.0, 0.0);
            for &(k, re, im) in &coeffs {
                let (s, c) = (TAU * k as f64 * t).sin_cos();
                x += re * c - im * s;
                y += re * s + im * c;
            }
            Point2::new(x + (TAU * t).cos(), y + (TAU * t).sin())
        })
        .collect();
    Curve::new(nodes).unwrap().centered().normalized().unwrap()
}

pub fn random_points(rng: &mut impl Rng, n: usize) -> Vec<Point2> {
    (0..n)
        .map(|_| Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn regular_polygon(n: usize, radius: f64) -> Curve {
    Curve::new(
        (0..n)
            .map(|l| {
                let a = TAU * l as f64 / n as f64;
                Point2::new(radius * a.cos(), radius * a.sin())
            })
            .collect(),
    )
    .unwrap()
}

/// Smallest signed difference between two angles.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > TAU / 2.0 {
        d - TAU
    } else {
        d
    }
}
