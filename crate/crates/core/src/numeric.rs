//! Floating-point helpers for witnesses that cannot be rational.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::linalg::{RationalMatrix, RationalVector};
use crate::projective::CorrespondenceSet;

/// A 3×3 floating matrix, serialized as three rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 3]; 3]", into = "[[f64; 3]; 3]")]
pub struct FloatMatrix3(pub Matrix3<f64>);

impl From<[[f64; 3]; 3]> for FloatMatrix3 {
    fn from(rows: [[f64; 3]; 3]) -> Self {
        FloatMatrix3(Matrix3::from_fn(|r, c| rows[r][c]))
    }
}

impl From<FloatMatrix3> for [[f64; 3]; 3] {
    fn from(m: FloatMatrix3) -> Self {
        std::array::from_fn(|r| std::array::from_fn(|c| m.0[(r, c)]))
    }
}

pub fn matrix3(m: &RationalMatrix) -> Matrix3<f64> {
    assert_eq!((m.rows(), m.cols()), (3, 3));
    Matrix3::from_row_slice(&m.to_f64())
}

pub fn vector3(v: &RationalVector) -> Vector3<f64> {
    assert_eq!(v.len(), 3);
    Vector3::from_vec(v.to_f64())
}

/// Scales `m` so its largest absolute entry is 1. Zero stays zero.
pub fn unit_max(m: &Matrix3<f64>) -> Matrix3<f64> {
    let s = m.amax();
    if s == 0.0 {
        *m
    } else {
        m / s
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix3<f64>) -> [f64; 3] {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    [s[0], s[1], s[2]]
}

/// `(σ₂/σ₁, σ₃/σ₁)`; `(0, 0)` for the zero matrix.
pub fn sigma_ratios(m: &Matrix3<f64>) -> (f64, f64) {
    let [s1, s2, s3] = singular_values(m);
    if s1 == 0.0 {
        (0.0, 0.0)
    } else {
        (s2 / s1, s3 / s1)
    }
}

/// `max_i |ŷᵢᵀ F̂ x̂ᵢ|` with unit-norm homogeneous points and `F` scaled to
/// unit max entry.
pub fn epipolar_residual(pairs: &CorrespondenceSet, f: &Matrix3<f64>) -> f64 {
    let f = unit_max(f);
    pairs
        .pairs()
        .iter()
        .map(|c| {
            let x = vector3(c.x.coords()).normalize();
            let y = vector3(c.y.coords()).normalize();
            (y.transpose() * f * x)[0].abs()
        })
        .fold(0.0, f64::max)
}

/// Right singular vector of the smallest singular value.
pub fn null_vector(m: &Matrix3<f64>) -> Vector3<f64> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let (i, _) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("three values");
    v_t.row(i).transpose()
}
