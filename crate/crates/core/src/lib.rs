//! Rigid and elastic registration of planar closed curves.
//!
//! The rigid aligner searches all starting points and rotations at once by
//! computing the cross-correlation matrices of every cyclic shift with FFTs
//! ([`rigid::align_fft`]), which turns the usual `O(N^2)` loop into
//! `O(N log N)`. The elastic module builds square-root-velocity shape
//! distances on top of it.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod dp;
pub mod elastic;
pub mod error;
pub mod io;
pub mod point;
pub mod rigid;
pub mod spline;
pub mod srv;
pub mod svd2;
pub mod synthetic;

pub use curve::{ArcLengthParams, Curve};
pub use dp::{dp_reparam, dp_reparam_with, DpOptions, DpResult};
pub use elastic::{
    distance_matrix, elastic_distance_approach1, elastic_distance_approach2, Approach1Options,
    Approach2Options, DistanceMatrix, ElasticMatch, ElasticMatchRecord, Method, RigidSearch,
};
pub use error::{Error, Result};
pub use point::{Mat2, Point2};
pub use rigid::{
    align_fft, align_naive, correlation_all_shifts_fft, correlation_all_shifts_naive,
    cross_correlation_matrix, mismatch_energy, optimal_rotation_closed_form,
    optimal_rotation_fixed_start, CorrelationSequence, FftCorrelator, RigidAlignment,
    RigidAlignmentRecord, Rotation2,
};
pub use srv::{
    apply_srv_action, elastic_energy, srv_center, srv_transform, Reparameterization, SrvCurve,
};
pub use synthetic::{gen_curve, transform_curve, CurveFamily, Warp};
