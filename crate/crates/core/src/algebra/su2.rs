//! The correspondence between unit quaternions and `SU(2)`.
//!
//! A [`Su2Frame`] fixes the images of `i`, `j` and `k`; any triple of
//! traceless `SU(2)` matrices obeying the Hamilton relations defines an
//! algebra isomorphism from the unit quaternions onto `SU(2)`.

use std::ops::Mul;

use num_complex::Complex64;

use super::quaternion::{Quaternion, UnitQuaternion, UNIT_TOL};
use crate::error::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);
const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[C1, C0], [C0, C1]]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self([[m00, m01], [m10, m11]])
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Self::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0;
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x += other.0[r][c];
            }
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.dagger()).max_abs_diff(&Self::IDENTITY) <= tol
    }

    pub fn is_special_unitary(&self, tol: f64) -> bool {
        self.is_unitary(tol) && (self.det() - C1).norm() <= tol
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[C0; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// Images of the quaternion units `i`, `j`, `k` in `SU(2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Frame {
    units: [Mat2; 3],
}

impl Su2Frame {
    /// `a + bi + cj + dk ↦ [[a + bi, c + di], [−c + di, a − bi]]`.
    pub fn standard() -> Self {
        Self {
            units: [
                Mat2::new(CI, C0, C0, -CI),
                Mat2::new(C0, C1, -C1, C0),
                Mat2::new(C0, CI, CI, C0),
            ],
        }
    }

    /// Builds a frame from explicit images of `i` and `j`; `k = i·j`.
    ///
    /// Fails unless both are traceless elements of `SU(2)` that anticommute.
    pub fn from_generators(i: Mat2, j: Mat2) -> Result<Self> {
        let k = i * j;
        let frame = Self { units: [i, j, k] };
        frame.validate()?;
        Ok(frame)
    }

    pub fn units(&self) -> &[Mat2; 3] {
        &self.units
    }

    fn validate(&self) -> Result<()> {
        let minus_id = Mat2::IDENTITY.scale(-C1);
        for (n, u) in self.units.iter().enumerate() {
            if !u.is_special_unitary(UNIT_TOL) || u.trace().norm() > UNIT_TOL {
                return Err(Error::Domain(format!(
                    "frame unit {n} is not a traceless SU(2) element"
                )));
            }
            if (*u * *u).max_abs_diff(&minus_id) > UNIT_TOL {
                return Err(Error::Domain(format!(
                    "frame unit {n} does not square to -1"
                )));
            }
        }
        let [i, j, k] = self.units;
        if (i * j * k).max_abs_diff(&minus_id) > UNIT_TOL {
            return Err(Error::Domain("frame violates ijk = -1".into()));
        }
        Ok(())
    }

    /// Linear extension of the frame to all quaternions.
    pub fn matrix(&self, q: Quaternion) -> Mat2 {
        let [i, j, k] = &self.units;
        Mat2::IDENTITY
            .scale(q.a.into())
            .add(&i.scale(q.b.into()))
            .add(&j.scale(q.c.into()))
            .add(&k.scale(q.d.into()))
    }

    pub fn quat_to_su2(&self, q: UnitQuaternion) -> Mat2 {
        self.matrix(q.get())
    }

    /// Inverse of [`Su2Frame::quat_to_su2`]; rejects matrices outside `SU(2)`.
    pub fn su2_to_quat(&self, m: &Mat2) -> Result<UnitQuaternion> {
        if !m.is_special_unitary(1e-10) {
            return Err(Error::Domain("matrix is not in SU(2)".into()));
        }
        UnitQuaternion::from_quaternion(self.coefficients(m))
    }

    /// Real coordinates `Re ½ Tr(N† m)` against `1, i, j, k`.
    pub fn coefficients(&self, m: &Mat2) -> Quaternion {
        let coef = |n: &Mat2| 0.5 * (n.dagger() * *m).trace().re;
        let [i, j, k] = &self.units;
        Quaternion::new(coef(&Mat2::IDENTITY), coef(i), coef(j), coef(k))
    }
}

impl Default for Su2Frame {
    fn default() -> Self {
        Self::standard()
    }
}

/// [`Su2Frame::quat_to_su2`] in the standard frame.
pub fn quat_to_su2(q: UnitQuaternion) -> Mat2 {
    Su2Frame::standard().quat_to_su2(q)
}

/// Inverse of [`quat_to_su2`].
pub fn su2_to_quat(m: &Mat2) -> Result<UnitQuaternion> {
    Su2Frame::standard().su2_to_quat(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::sampling::sample_unit_quaternion;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_maps_to_identity() {
        assert_eq!(quat_to_su2(UnitQuaternion::ONE), Mat2::IDENTITY);
    }

    #[test]
    fn unit_images_are_traceless_su2() {
        for u in [UnitQuaternion::I, UnitQuaternion::J, UnitQuaternion::K] {
            let m = quat_to_su2(u);
            assert!(m.is_special_unitary(UNIT_TOL));
            assert!(m.trace().norm() < UNIT_TOL);
        }
    }

    #[test]
    fn homomorphism_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let frame = Su2Frame::standard();
        for _ in 0..100 {
            let p = sample_unit_quaternion(&mut rng);
            let q = sample_unit_quaternion(&mut rng);
            let lhs = frame.quat_to_su2(p) * frame.quat_to_su2(q);
            let rhs = frame.quat_to_su2(p * q);
            assert!(lhs.max_abs_diff(&rhs) < UNIT_TOL);
            assert!(rhs.is_special_unitary(UNIT_TOL));
            let back = frame.su2_to_quat(&rhs).unwrap();
            assert!(back.get().approx_eq((p * q).get(), 1e-12));
        }
    }

    #[test]
    fn rejects_non_su2() {
        let m = Mat2::IDENTITY.scale(CI);
        assert!(su2_to_quat(&m).is_err());
        let bad_i = Mat2::new(C1, C0, C0, C1);
        assert!(Su2Frame::from_generators(bad_i, Su2Frame::standard().units()[1]).is_err());
    }
}
