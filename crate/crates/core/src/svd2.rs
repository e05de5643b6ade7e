//! Closed-form singular value decomposition of 2x2 matrices.

use crate::point::Mat2;

/// `A = U diag(sigma) V^T` with `sigma[0] >= sigma[1] >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct Svd2 {
    pub u: Mat2,
    pub sigma: [f64; 2],
    pub v: Mat2,
}

fn rot(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

pub fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

impl Svd2 {
    /// Decomposes `a` as a rotation, a signed diagonal and a second rotation,
    /// then moves the sign of the smaller singular value into `V`.
    pub fn new(a: &Mat2) -> Self {
        let [[a11, a12], [a21, a22]] = *a;
        let e = 0.5 * (a11 + a22);
        let f = 0.5 * (a11 - a22);
        let g = 0.5 * (a21 + a12);
        let h = 0.5 * (a21 - a12);
        let q = e.hypot(h);
        let r = f.hypot(g);
        let s1 = q + r;
        let s2 = q - r;
        let angle_f = g.atan2(f);
        let angle_e = h.atan2(e);
        let left = 0.5 * (angle_e + angle_f);
        let right = 0.5 * (angle_e - angle_f);

        let u = rot(left);
        // A = rot(left) diag(s1, s2) rot(right), so V = rot(right)^T diag(1, sign(s2))
        let sign = if s2 < 0.0 { -1.0 } else { 1.0 };
        let vt_unsigned = rot(right);
        let vt = [
            vt_unsigned[0],
            [sign * vt_unsigned[1][0], sign * vt_unsigned[1][1]],
        ];
        Self {
            u,
            sigma: [s1, s2.abs()],
            v: transpose(&vt),
        }
    }

    pub fn reconstruct(&self) -> Mat2 {
        let s = [[self.sigma[0], 0.0], [0.0, self.sigma[1]]];
        matmul(&matmul(&self.u, &s), &transpose(&self.v))
    }
}
