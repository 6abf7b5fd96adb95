//! Minkowski four-vector algebra, boost matrices, and the auxiliary
//! antisymmetric B and symmetric L matrices that build them.
//!
//! Conventions: natural units (ħ = c = 1), metric signature (+, −, −, −),
//! row-major dense storage. The local orthonormal frame is the identity
//! tetrad; only pure boosts appear here, no rotations.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Diagonal of the metric tensor η with positive time signature.
pub const METRIC_DIAG: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// A four-vector (t, x, y, z) in natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    /// New four-vector. All components must be finite.
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        assert!(
            t.is_finite() && x.is_finite() && y.is_finite() && z.is_finite(),
            "four-vector components must be finite"
        );
        Self { t, x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn from_parts(t: f64, spatial: [f64; 3]) -> Self {
        Self::new(t, spatial[0], spatial[1], spatial[2])
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Minkowski inner product a·b = a.t b.t − a.x b.x − a.y b.y − a.z b.z.
    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    /// Invariant norm squared a·a.
    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }
}

impl From<[f64; 4]> for FourVector {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

/// Minkowski inner product of two four-vectors.
pub fn minkowski_dot(a: &FourVector, b: &FourVector) -> f64 {
    a.dot(b)
}

/// A relativistic three-velocity with |β| strictly below 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeVelocity {
    beta: [f64; 3],
}

impl ThreeVelocity {
    /// Construct a velocity, rejecting |β| ≥ 1 and non-finite components.
    pub fn new(beta: [f64; 3]) -> Result<Self> {
        if !beta.iter().all(|b| b.is_finite()) {
            return Err(Error::NonFinite { context: "tetrad" });
        }
        let s2 = beta.iter().map(|b| b * b).sum::<f64>();
        if s2 >= 1.0 {
            return Err(Error::VelocityOutOfRange { speed: s2.sqrt() });
        }
        Ok(Self { beta })
    }

    pub fn zero() -> Self {
        Self { beta: [0.0; 3] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.beta
    }

    pub fn speed_sqr(&self) -> f64 {
        self.beta.iter().map(|b| b * b).sum()
    }

    /// Lorentz factor γ = 1/√(1 − |β|²). Well-conditioned for |β| ≤ 0.99;
    /// numerically degraded within ~1e−8 of the light cone.
    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.speed_sqr()).sqrt()
    }

    pub fn reversed(&self) -> Self {
        Self {
            beta: [-self.beta[0], -self.beta[1], -self.beta[2]],
        }
    }

    pub fn dot3(&self, v: [f64; 3]) -> f64 {
        self.beta[0] * v[0] + self.beta[1] * v[1] + self.beta[2] * v[2]
    }
}

/// Row-major 3×3 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Mat3(m)
    }

    pub fn zeros() -> Self {
        Mat3([[0.0; 3]; 3])
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.0[j][i];
            }
        }
        Mat3(m)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = self.0;
        for row in &mut m {
            for v in row {
                *v *= s;
            }
        }
        Mat3(m)
    }

    pub fn add(&self, o: &Mat3) -> Self {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += o.0[i][j];
            }
        }
        Mat3(m)
    }

    pub fn mul(&self, o: &Mat3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(m)
    }

    pub fn mul_vec(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    /// Outer product v vᵀ.
    pub fn outer(v: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = v[i] * v[j];
            }
        }
        Mat3(m)
    }
}

/// The antisymmetric matrix B built from a three-velocity:
/// rows (0, βz, −βy), (−βz, 0, βx), (βy, −βx, 0).
pub fn antisym_matrix(beta: &ThreeVelocity) -> Mat3 {
    let [bx, by, bz] = beta.components();
    Mat3([[0.0, bz, -by], [-bz, 0.0, bx], [by, -bx, 0.0]])
}

/// Closed form of B² = ββᵀ − |β|² I.
pub fn antisym_squared(beta: &ThreeVelocity) -> Mat3 {
    let b = beta.components();
    Mat3::outer(b).add(&Mat3::identity().scale(-beta.speed_sqr()))
}

/// The spatial boost block L = I + (γ²/(1+γ)) ββᵀ.
pub fn l_matrix(beta: &ThreeVelocity) -> Mat3 {
    let g = beta.gamma();
    let c = g * g / (1.0 + g);
    Mat3::identity().add(&Mat3::outer(beta.components()).scale(c))
}

/// The equivalent form L = γI + (γ²/(1+γ)) B²; agrees entrywise with
/// [`l_matrix`].
pub fn l_matrix_via_antisym(beta: &ThreeVelocity) -> Mat3 {
    let g = beta.gamma();
    let c = g * g / (1.0 + g);
    Mat3::identity().scale(g).add(&antisym_squared(beta).scale(c))
}

/// Row-major 4×4 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4(pub [[f64; 4]; 4]);

impl Mat4 {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Mat4(m)
    }

    pub fn mul(&self, o: &Mat4) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat4(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = self.0[j][i];
            }
        }
        Mat4(m)
    }

    pub fn mul_vec(&self, v: &FourVector) -> FourVector {
        let a = v.as_array();
        let mut out = [0.0; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
        }
        FourVector::from(out)
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        let minor = |r: [usize; 3], c: [usize; 3]| -> f64 {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        m[0][0] * minor([1, 2, 3], [1, 2, 3]) - m[0][1] * minor([1, 2, 3], [0, 2, 3])
            + m[0][2] * minor([1, 2, 3], [0, 1, 3])
            - m[0][3] * minor([1, 2, 3], [0, 1, 2])
    }
}

/// A proper Lorentz boost Λ(β) together with its generating velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostMatrix {
    matrix: Mat4,
    beta: ThreeVelocity,
}

impl BoostMatrix {
    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    pub fn beta(&self) -> &ThreeVelocity {
        &self.beta
    }

    /// The inverse boost Λ(−β).
    pub fn inverse(&self) -> BoostMatrix {
        boost_matrix(&self.beta.reversed())
    }

    /// Apply the boost to a four-vector. Preserves the Minkowski norm.
    pub fn apply(&self, v: &FourVector) -> FourVector {
        self.matrix.mul_vec(v)
    }
}

/// The boost matrix of a proper Lorentz transformation:
/// block form [[γ, γβᵀ], [γβ, γI + (γ²/(1+γ))B²]].
pub fn boost_matrix(beta: &ThreeVelocity) -> BoostMatrix {
    let g = beta.gamma();
    let b = beta.components();
    let block = l_matrix_via_antisym(beta);
    let mut m = [[0.0; 4]; 4];
    m[0][0] = g;
    for i in 0..3 {
        m[0][i + 1] = g * b[i];
        m[i + 1][0] = g * b[i];
        for j in 0..3 {
            m[i + 1][j + 1] = block.0[i][j];
        }
    }
    BoostMatrix {
        matrix: Mat4(m),
        beta: *beta,
    }
}

/// Matrix–vector product Λv.
pub fn apply_boost(boost: &BoostMatrix, v: &FourVector) -> FourVector {
    boost.apply(v)
}

/// Max-abs entrywise deviation of ΛᵀηΛ from η.
pub fn metric_preservation_defect(boost: &BoostMatrix) -> f64 {
    metric_preservation_defect_with(boost, &METRIC_DIAG)
}

/// Same defect against an arbitrary diagonal metric (fault-injection hook
/// for the invariant suite).
pub fn metric_preservation_defect_with(boost: &BoostMatrix, metric: &[f64; 4]) -> f64 {
    let mut eta = [[0.0; 4]; 4];
    for (i, row) in eta.iter_mut().enumerate() {
        row[i] = metric[i];
    }
    let eta = Mat4(eta);
    let lt = boost.matrix.transpose();
    let prod = lt.mul(&eta).mul(&boost.matrix);
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((prod.0[i][j] - eta.0[i][j]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(beta: [f64; 3]) -> ThreeVelocity {
        ThreeVelocity::new(beta).unwrap()
    }

    #[test]
    fn minkowski_dot_examples() {
        let unit_t = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&unit_t, &unit_t), 1.0);
        let light = FourVector::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&light, &light), 0.0);
        // the P·V = 0 pair of a boosted unit-mass state
        let p = FourVector::new(1.25, 0.75, 0.0, 0.0);
        let vv = FourVector::new(0.75, 1.25, 0.0, 0.0);
        assert_eq!(minkowski_dot(&p, &vv), 0.0);
    }

    #[test]
    fn velocity_rejects_superluminal() {
        assert!(ThreeVelocity::new([1.0, 0.0, 0.0]).is_err());
        assert!(ThreeVelocity::new([0.8, 0.8, 0.0]).is_err());
        assert!(ThreeVelocity::new([f64::NAN, 0.0, 0.0]).is_err());
        assert!(ThreeVelocity::new([0.999, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn antisym_matrix_examples() {
        let b = antisym_matrix(&ThreeVelocity::zero());
        assert_eq!(b, Mat3::zeros());

        let b = antisym_matrix(&v([0.6, 0.0, 0.0]));
        assert_eq!(b.0[1][2], 0.6);
        assert_eq!(b.0[2][1], -0.6);
        assert_eq!(b.0[0][1], 0.0);
        // antisymmetry by construction
        let bt = b.transpose();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.0[i][j], -bt.0[i][j]);
            }
        }
        // B·B equals the closed form ββᵀ − |β|²I, here diag(0, −0.36, −0.36)
        let sq = b.mul(&b);
        let closed = antisym_squared(&v([0.6, 0.0, 0.0]));
        for i in 0..3 {
            for j in 0..3 {
                assert!((sq.0[i][j] - closed.0[i][j]).abs() < 1e-15);
                let want = if i == j && i > 0 { -0.36 } else { 0.0 };
                assert!((closed.0[i][j] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn l_matrix_examples() {
        assert_eq!(l_matrix(&ThreeVelocity::zero()), Mat3::identity());

        let l = l_matrix(&v([0.6, 0.0, 0.0]));
        assert!((l.0[0][0] - 1.25).abs() < 1e-15);
        assert!((l.0[1][1] - 1.0).abs() < 1e-15);
        assert!((l.0[2][2] - 1.0).abs() < 1e-15);
        // γ²/(1+γ) = 0.694444…, L[0][0] = 1 + 0.694444…·0.36 = 1.25
        let g: f64 = 1.25;
        assert!((g * g / (1.0 + g) - 0.6944444444444444).abs() < 1e-15);
    }

    #[test]
    fn boost_matrix_examples() {
        let id = boost_matrix(&ThreeVelocity::zero());
        assert_eq!(*id.matrix(), Mat4::identity());

        let lam = boost_matrix(&v([0.6, 0.0, 0.0]));
        let want = [
            [1.25, 0.75, 0.0, 0.0],
            [0.75, 1.25, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((lam.matrix().0[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn double_boost_is_composed_velocity() {
        // Λ(0.6)·Λ(0.6) = Λ(2·0.6/(1+0.36)) along one axis
        let lam = boost_matrix(&v([0.6, 0.0, 0.0]));
        let twice = lam.matrix().mul(lam.matrix());
        let composed = boost_matrix(&v([0.8823529411764707, 0.0, 0.0]));
        for i in 0..4 {
            for j in 0..4 {
                assert!((twice.0[i][j] - composed.matrix().0[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn apply_boost_examples() {
        let lam = boost_matrix(&v([0.6, 0.0, 0.0]));
        let rest = FourVector::new(1.0, 0.0, 0.0, 0.0);
        let moved = apply_boost(&lam, &rest);
        assert!((moved.t - 1.25).abs() < 1e-15);
        assert!((moved.x - 0.75).abs() < 1e-15);

        let light = FourVector::new(1.0, 1.0, 0.0, 0.0);
        let lit = apply_boost(&lam, &light);
        assert!((lit.t - 2.0).abs() < 1e-15);
        assert!((lit.x - 2.0).abs() < 1e-15);
        assert!(lit.norm_sqr().abs() < 1e-14);

        let id = boost_matrix(&ThreeVelocity::zero());
        assert_eq!(apply_boost(&id, &light), light);
    }

    #[test]
    fn boost_inverse_roundtrip() {
        let lam = boost_matrix(&v([0.3, -0.5, 0.2]));
        let prod = lam.inverse().matrix().mul(lam.matrix());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod.0[i][j] - want).abs() < 1e-12);
            }
        }
    }
}
