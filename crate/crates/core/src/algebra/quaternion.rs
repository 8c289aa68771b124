use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Coefficient tolerance used for unit-norm checks throughout the algebra.
pub const UNIT_TOL: f64 = 1e-12;

/// A quaternion `a + b i + c j + d k` with `i² = j² = k² = ijk = −1`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);

    /// Canonical basis `[1, i, j, k]`.
    pub const BASIS: [Quaternion; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// `q* / |q|²`, the two-sided inverse.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Returns conjugate, norm and inverse together.
    pub fn conj_norm_inv(self) -> Result<(Self, f64, Self)> {
        Ok((self.conj(), self.norm(), self.inverse()?))
    }

    pub fn is_unit(self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= UNIT_TOL
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("cannot normalize the zero quaternion".into()));
        }
        Ok(self.scale(1.0 / n))
    }

    /// Squared canonical components `(a², b², c², d²)`.
    pub fn squared_components(self) -> [f64; 4] {
        [
            self.a * self.a,
            self.b * self.b,
            self.c * self.c,
            self.d * self.d,
        ]
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .all(|(x, y)| (x - y).abs() <= tol)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a + q.a, self.b + q.b, self.c + q.c, self.d + q.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a - q.a, self.b - q.b, self.c - q.c, self.d - q.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.a, self.b, self.c, self.d)
    }
}

/// A quaternion known to lie on the unit 3-sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self> {
        if q.is_unit() {
            Ok(Self(q))
        } else {
            Err(Error::Domain(format!(
                "quaternion {q} is not a unit (|q|² = {})",
                q.norm_sqr()
            )))
        }
    }

    /// Normalizes an arbitrary non-zero quaternion.
    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        q.normalized().map(Self)
    }

    pub fn get(self) -> Quaternion {
        self.0
    }

    pub fn inverse(self) -> Self {
        Self(self.0.conj())
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        for u in [i, j, k] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
        assert_eq!(i * j * k, -Quaternion::ONE);
    }

    #[test]
    fn polynomial_expansion() {
        // (1 + i)(1 + j) = 1 + j + i + ij = 1 + i + j + k
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let q = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(p * q, Quaternion::new(1.0, 1.0, 1.0, 1.0));
        let r = Quaternion::new(0.5, -2.0, 3.0, 0.25);
        assert_eq!(Quaternion::ONE * r, r);
        assert_eq!(r * Quaternion::ONE, r);
    }

    #[test]
    fn conj_norm_inverse() {
        let (c, n, inv) = Quaternion::ONE.conj_norm_inv().unwrap();
        assert_eq!((c, n, inv), (Quaternion::ONE, 1.0, Quaternion::ONE));

        let (c, n, inv) = Quaternion::I.conj_norm_inv().unwrap();
        assert_eq!((c, n, inv), (-Quaternion::I, 1.0, -Quaternion::I));

        let two = Quaternion::new(2.0, 0.0, 0.0, 0.0);
        let inv = two.inverse().unwrap();
        assert_eq!(inv, Quaternion::new(0.5, 0.0, 0.0, 0.0));
        // q*/|q| would give 1 here, which is not an inverse.
        assert_ne!(two.conj().scale(1.0 / two.norm()), inv);
        assert!((two * inv).approx_eq(Quaternion::ONE, UNIT_TOL));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(matches!(Quaternion::ZERO.inverse(), Err(Error::Domain(_))));
    }

    #[test]
    fn unit_rejects_non_unit() {
        assert!(UnitQuaternion::new(Quaternion::new(1.0, 1.0, 0.0, 0.0)).is_err());
        let u = UnitQuaternion::from_quaternion(Quaternion::new(1.0, 1.0, 0.0, 0.0)).unwrap();
        assert!(u.get().is_unit());
    }
}
