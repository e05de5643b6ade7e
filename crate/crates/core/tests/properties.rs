mod common;

use common::{angle_diff, random_smooth_curve, rng};
use curvalign_core::rigid::energy_from_trace;
use curvalign_core::synthetic::STANDARD_FAMILIES;
use curvalign_core::*;
use proptest::prelude::*;
use rand::Rng;

fn sum_sq(points: &[Point2]) -> f64 {
    points.iter().map(|p| p.norm_sq()).sum()
}

fn smooth_warp(rng: &mut impl Rng, n: usize) -> Reparameterization {
    // t + a sin(2 pi k t) / (2 pi k) with |a| < 1 stays strictly increasing
    let k = rng.random_range(1..4) as f64;
    let a = rng.random_range(-0.8..0.8);
    let tau = std::f64::consts::TAU;
    Reparameterization::from_samples(
        (0..=n)
            .map(|l| {
                let t = l as f64 / n as f64;
                t + a * (tau * k * t).sin() / (tau * k)
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotations_are_proper(theta in -50.0f64..50.0) {
        let m = Rotation2::new(theta).matrix();
        let rtr = [
            [m[0][0] * m[0][0] + m[1][0] * m[1][0], m[0][0] * m[0][1] + m[1][0] * m[1][1]],
            [m[0][1] * m[0][0] + m[1][1] * m[1][0], m[0][1] * m[0][1] + m[1][1] * m[1][1]],
        ];
        prop_assert!((rtr[0][0] - 1.0).abs() < 1e-12 && (rtr[1][1] - 1.0).abs() < 1e-12);
        prop_assert!(rtr[0][1].abs() < 1e-12 && rtr[1][0].abs() < 1e-12);
        prop_assert!((m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_trace_identity_holds_for_every_shift(seed in any::<u64>(), n in 8usize..80) {
        let mut r = rng(seed);
        let c1 = random_smooth_curve(&mut r, n);
        let c2 = random_smooth_curve(&mut r, n);
        let seq = correlation_all_shifts_fft(c1.nodes(), c2.nodes()).unwrap();
        let (s1, s2) = (sum_sq(c1.nodes()), sum_sq(c2.nodes()));
        for (m, a) in seq.entries().iter().enumerate() {
            let rot = optimal_rotation_closed_form(a);
            let direct = mismatch_energy(c1.nodes(), c2.nodes(), m, rot.rotation).unwrap();
            let via_trace = energy_from_trace(s1, s2, rot.trace, n);
            prop_assert!((direct - via_trace).abs() <= 1e-9 * direct.max(1e-12));
        }
    }

    #[test]
    fn fft_and_naive_agree(seed in any::<u64>(), n in 4usize..300) {
        let mut r = rng(seed);
        let c1 = random_smooth_curve(&mut r, n);
        let c2 = random_smooth_curve(&mut r, n);
        let a = align_naive(c1.nodes(), c2.nodes()).unwrap();
        let b = align_fft(c1.nodes(), c2.nodes()).unwrap();
        prop_assert_eq!(a.shift, b.shift);
        prop_assert!((a.rotation.theta - b.rotation.theta).abs() < 1e-9);
        prop_assert!((a.energy - b.energy).abs() <= 1e-9 * a.energy.max(1e-12));
    }

    #[test]
    fn returned_rotation_beats_other_rotations(seed in any::<u64>(), n in 8usize..128) {
        let mut r = rng(seed);
        let c1 = random_smooth_curve(&mut r, n);
        let c2 = random_smooth_curve(&mut r, n);
        let res = align_fft(c1.nodes(), c2.nodes()).unwrap();
        let a = cross_correlation_matrix(c1.nodes(), c2.nodes(), res.shift).unwrap();
        let best = res.rotation.trace_with(&a);
        for _ in 0..100 {
            let other = Rotation2::new(r.random_range(-3.2..3.2));
            prop_assert!(best >= other.trace_with(&a) - 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_svd(a in prop::array::uniform2(prop::array::uniform2(-10.0f64..10.0))) {
        let svd = curvalign_core::rigid::kabsch_rotation(&a);
        let closed = optimal_rotation_closed_form(&a);
        prop_assert!((svd.trace - closed.trace).abs() < 1e-10 * (1.0 + closed.trace.abs()));
        if (svd.trace - Rotation2::new(closed.rotation.theta + 1e-3).trace_with(&a)).abs() > 1e-8 {
            prop_assert!(angle_diff(svd.rotation.theta, closed.rotation.theta).abs() < 1e-8);
        }
    }

    #[test]
    fn global_rotation_moves_only_the_angle(seed in any::<u64>(), n in 16usize..200, q in -3.0f64..3.0) {
        let mut r = rng(seed);
        let c1 = random_smooth_curve(&mut r, n);
        let c2 = random_smooth_curve(&mut r, n);
        let base = align_fft(c1.nodes(), c2.nodes()).unwrap();
        let turned = align_fft(c1.nodes(), c2.rotated(q).nodes()).unwrap();
        prop_assert_eq!(base.shift, turned.shift);
        prop_assert!(angle_diff(turned.rotation.theta, base.rotation.theta + q).abs() < 1e-8);
    }

    #[test]
    fn node_shift_moves_only_the_index(seed in any::<u64>(), n in 16usize..200, p in 0usize..1000) {
        let mut r = rng(seed);
        let c1 = random_smooth_curve(&mut r, n);
        let c2 = random_smooth_curve(&mut r, n);
        let p = p % n;
        let base = align_fft(c1.nodes(), c2.nodes()).unwrap();
        let moved = align_fft(c1.nodes(), c2.shifted(p).nodes()).unwrap();
        prop_assert_eq!(moved.shift, (base.shift + n - p) % n);
        prop_assert!(angle_diff(moved.rotation.theta, base.rotation.theta).abs() < 1e-10);
        prop_assert!((moved.energy - base.energy).abs() < 1e-10);
    }

    #[test]
    fn dp_output_is_a_valid_warp(seed in any::<u64>(), n in 8usize..64, band in prop::option::of(1usize..20)) {
        let mut r = rng(seed);
        let q1 = srv_transform(random_smooth_curve(&mut r, n).nodes()).unwrap();
        let q2 = srv_transform(random_smooth_curve(&mut r, n).nodes()).unwrap();
        let res = dp_reparam_with(&q1, &q2, &DpOptions { max_step: 4, band }).unwrap();
        let g = res.gamma.samples();
        prop_assert_eq!(g.len(), n + 1);
        prop_assert_eq!(g[0], 0.0);
        prop_assert_eq!(g[n], 1.0);
        prop_assert!(g.windows(2).all(|w| w[1] >= w[0]));
        let e = elastic_energy(&q1, &q2, 0.0, Rotation2::IDENTITY, &res.gamma).unwrap();
        prop_assert!((e - res.energy).abs() <= 1e-12 * (1.0 + e));
    }

    #[test]
    fn dp_never_loses_to_identity(seed in any::<u64>(), n in 8usize..64) {
        let mut r = rng(seed);
        let q1 = srv_transform(random_smooth_curve(&mut r, n).nodes()).unwrap();
        let q2 = srv_transform(random_smooth_curve(&mut r, n).nodes()).unwrap();
        let id = Reparameterization::identity(n);
        let e_id = elastic_energy(&q1, &q2, 0.0, Rotation2::IDENTITY, &id).unwrap();
        let g = dp_reparam(&q1, &q2).unwrap();
        let e_dp = elastic_energy(&q1, &q2, 0.0, Rotation2::IDENTITY, &g).unwrap();
        prop_assert!(e_dp <= e_id + 1e-12);
    }

    #[test]
    fn srv_norm_is_near_one(seed in any::<u64>(), n in 64usize..400) {
        let mut r = rng(seed);
        let c = random_smooth_curve(&mut r, n).preprocess(n, true).unwrap();
        let q = srv_transform(c.nodes()).unwrap();
        prop_assert!((q.l2_norm_sq() - 1.0).abs() <= 0.02);
    }

    #[test]
    fn srv_action_preserves_norm(seed in any::<u64>(), t0 in 0.0f64..1.0, theta in -3.2f64..3.2) {
        let mut r = rng(seed);
        let n = 256;
        let q = srv_transform(random_smooth_curve(&mut r, n).preprocess(n, true).unwrap().nodes()).unwrap();
        let gamma = smooth_warp(&mut r, n);
        let acted = apply_srv_action(&q, t0, Rotation2::new(theta), &gamma).unwrap();
        prop_assert!((acted.l2_norm_sq() - q.l2_norm_sq()).abs() <= 0.02);
    }

    #[test]
    fn approach2_energy_never_increases(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c1 = random_smooth_curve(&mut r, 64);
        let c2 = random_smooth_curve(&mut r, 64);
        let m = elastic_distance_approach2(&c1, &c2, &Approach2Options::default()).unwrap();
        prop_assert!(m.energy_trace.windows(2).all(|w| w[1] <= w[0] + 1e-10));
        prop_assert_eq!(m.distance, m.energy.sqrt());
        prop_assert_eq!(*m.energy_trace.last().unwrap(), m.energy);
    }

    #[test]
    fn arc_length_params_increase(seed in any::<u64>(), n in 4usize..200) {
        let mut r = rng(seed);
        let c = random_smooth_curve(&mut r, n);
        let s = c.arc_length_params().unwrap();
        let v = s.values();
        prop_assert_eq!(v[0], 0.0);
        prop_assert_eq!(v[n], 1.0);
        prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn centering_and_normalizing_commute(seed in any::<u64>(), n in 4usize..200, scale in 0.01f64..100.0) {
        let mut r = rng(seed);
        let c = random_smooth_curve(&mut r, n).scaled(scale);
        let a = c.centered().normalized().unwrap();
        let b = c.normalized().unwrap().centered();
        for (p, q) in a.nodes().iter().zip(b.nodes()) {
            prop_assert!((*p - *q).norm() < 1e-12);
        }
        prop_assert!((a.length() - 1.0).abs() < 1e-12);
        prop_assert!(a.centroid().norm() < 1e-12);
    }
}

#[test]
fn resampling_is_nearly_idempotent_and_even() {
    for name in STANDARD_FAMILIES {
        let family = CurveFamily::by_name(name, 0).unwrap();
        for n in [256, 512] {
            let once = gen_curve(&family, n).unwrap().resample_uniform(n).unwrap();
            let twice = once.resample_uniform(n).unwrap();
            let diameter = once
                .nodes()
                .iter()
                .flat_map(|p| once.nodes().iter().map(move |q| (*p - *q).norm()))
                .fold(0.0, f64::max);
            for (p, q) in once.nodes().iter().zip(twice.nodes()) {
                assert!((*p - *q).norm() <= 1e-3 * diameter, "{name} N={n}");
            }
            let chords: Vec<f64> = (0..n)
                .map(|l| (once.nodes()[(l + 1) % n] - once.nodes()[l]).norm())
                .collect();
            let mean = chords.iter().sum::<f64>() / n as f64;
            let spread = chords
                .iter()
                .map(|c| (c - mean).abs() / mean)
                .fold(0.0, f64::max);
            assert!(spread <= 0.02, "{name} N={n}: chord spread {spread}");
        }
    }
}
