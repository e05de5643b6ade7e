//! Fixtures shared by the benchmarks.

use curvalign_core::synthetic::{elastic_pair, recovery_pair, RECOVERY_ANGLE, RECOVERY_SHIFT};
use curvalign_core::{Curve, CurveFamily, Warp};

/// Reference and shifted, rotated template for the rigid aligners.
pub fn rigid_fixture(n: usize) -> (Curve, Curve) {
    recovery_pair(
        &CurveFamily::fourier_random(1),
        n,
        RECOVERY_SHIFT,
        RECOVERY_ANGLE,
    )
    .expect("fixture parameters are valid")
}

/// Curve and its strongly warped copy for the elastic solvers.
pub fn elastic_fixture(n: usize) -> (Curve, Curve) {
    elastic_pair(&CurveFamily::limacon(), n, &Warp::Gamma2).expect("fixture parameters are valid")
}
