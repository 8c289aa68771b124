use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::quaternion::{Quaternion, UNIT_TOL};
use crate::error::{Error, Result};

/// An octonion `e0 + Σ e_m i_m`, stored as the Cayley–Dickson pair
/// `(lo, hi)` meaning `lo + hi·ℓ`, so that `i1..i3 = i, j, k`, `i4 = ℓ`
/// and `i5..i7 = iℓ, jℓ, kℓ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Octonion {
    pub e: [f64; 8],
}

impl Octonion {
    pub const ONE: Octonion = Octonion::unit_basis(0);
    pub const ZERO: Octonion = Octonion { e: [0.0; 8] };

    pub const fn new(e: [f64; 8]) -> Self {
        Self { e }
    }

    /// Canonical basis element: `0 ↦ 1`, `m ↦ i_m` for `m = 1..=7`.
    pub const fn unit_basis(m: usize) -> Self {
        let mut e = [0.0; 8];
        e[m] = 1.0;
        Self { e }
    }

    pub fn from_pair(lo: Quaternion, hi: Quaternion) -> Self {
        let (l, h) = (lo.to_array(), hi.to_array());
        Self::new([l[0], l[1], l[2], l[3], h[0], h[1], h[2], h[3]])
    }

    pub fn pair(self) -> (Quaternion, Quaternion) {
        let e = self.e;
        (
            Quaternion::new(e[0], e[1], e[2], e[3]),
            Quaternion::new(e[4], e[5], e[6], e[7]),
        )
    }

    pub fn conj(self) -> Self {
        let mut e = self.e.map(|x| -x);
        e[0] = self.e[0];
        Self::new(e)
    }

    pub fn norm_sqr(self) -> f64 {
        self.e.iter().map(|x| x * x).sum()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.e.map(|x| x * s))
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Domain("inverse of the zero octonion".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn conj_norm_inv(self) -> Result<(Self, f64, Self)> {
        Ok((self.conj(), self.norm(), self.inverse()?))
    }

    pub fn is_unit(self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= UNIT_TOL
    }

    pub fn squared_components(self) -> [f64; 8] {
        self.e.map(|x| x * x)
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.e
            .iter()
            .zip(other.e)
            .all(|(x, y)| (x - y).abs() <= tol)
    }
}

impl Mul for Octonion {
    type Output = Octonion;

    // (a, b)(c, d) = (ac − d*b, da + bc*)
    fn mul(self, rhs: Octonion) -> Octonion {
        let (a, b) = self.pair();
        let (c, d) = rhs.pair();
        Octonion::from_pair(a * c - d.conj() * b, d * a + b * c.conj())
    }
}

impl Add for Octonion {
    type Output = Octonion;

    fn add(self, rhs: Octonion) -> Octonion {
        let mut e = self.e;
        e.iter_mut().zip(rhs.e).for_each(|(x, y)| *x += y);
        Octonion::new(e)
    }
}

impl Sub for Octonion {
    type Output = Octonion;

    fn sub(self, rhs: Octonion) -> Octonion {
        self + (-rhs)
    }
}

impl Neg for Octonion {
    type Output = Octonion;

    fn neg(self) -> Octonion {
        Octonion::new(self.e.map(|x| -x))
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.e[0])?;
        for (m, x) in self.e.iter().enumerate().skip(1) {
            write!(f, " + {x}i{m}")?;
        }
        Ok(())
    }
}

/// An octonion on the unit 7-sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitOctonion(Octonion);

impl UnitOctonion {
    pub fn new(o: Octonion) -> Result<Self> {
        if o.is_unit() {
            Ok(Self(o))
        } else {
            Err(Error::Domain(format!(
                "octonion is not a unit (|o|² = {})",
                o.norm_sqr()
            )))
        }
    }

    pub fn get(self) -> Octonion {
        self.0
    }
}

/// Oriented line `(j, k, l)` of the Fano plane: `i_j · i_k = i_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanoTriple(pub usize, pub usize, pub usize);

/// Derives the seven oriented lines from the Cayley–Dickson product.
///
/// Each line is reported in the cyclic rotation that starts at its smallest
/// index; the list is sorted.
pub fn fano_table() -> Vec<FanoTriple> {
    let mut lines = Vec::new();
    for j in 1..8 {
        for k in (j + 1)..8 {
            let prod = Octonion::unit_basis(j) * Octonion::unit_basis(k);
            let (l, sign) = signed_unit_index(prod).expect("basis products are signed units");
            let t = if sign > 0.0 { [j, k, l] } else { [k, j, l] };
            let start = (0..3).min_by_key(|&s| t[s]).unwrap();
            let rot = FanoTriple(t[start], t[(start + 1) % 3], t[(start + 2) % 3]);
            if !lines.contains(&rot) {
                lines.push(rot);
            }
        }
    }
    lines.sort();
    lines
}

/// If `o` is `±` a canonical basis element, returns its index and sign.
pub fn signed_unit_index(o: Octonion) -> Option<(usize, f64)> {
    let nonzero: Vec<usize> = (0..8).filter(|&m| o.e[m].abs() > UNIT_TOL).collect();
    match nonzero.as_slice() {
        [m] if (o.e[*m].abs() - 1.0).abs() <= UNIT_TOL => Some((*m, o.e[*m].signum())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(m: usize) -> Octonion {
        Octonion::unit_basis(m)
    }

    #[test]
    fn basis_squares_and_identity() {
        for m in 1..8 {
            assert_eq!(unit(m) * unit(m), -Octonion::ONE);
        }
        let o = Octonion::new([0.3, -1.0, 2.0, 0.0, 0.5, 7.0, -0.25, 1.5]);
        assert_eq!(Octonion::ONE * o, o);
        assert_eq!(o * Octonion::ONE, o);
    }

    #[test]
    fn i1_i2_is_i3() {
        let prod = unit(1) * unit(2);
        assert_eq!(signed_unit_index(prod), Some((3, 1.0)));
        assert_eq!(signed_unit_index(unit(2) * unit(1)), Some((3, -1.0)));
    }

    #[test]
    fn non_associative_witness() {
        let left = (unit(1) * unit(2)) * unit(4);
        let right = unit(1) * (unit(2) * unit(4));
        assert!(left.approx_eq(-right, 0.0));
        assert_ne!(left, right);
    }

    #[test]
    fn conj_norm_inverse() {
        let (c, n, inv) = Octonion::ONE.conj_norm_inv().unwrap();
        assert_eq!((c, n, inv), (Octonion::ONE, 1.0, Octonion::ONE));
        let (c, n, inv) = unit(5).conj_norm_inv().unwrap();
        assert_eq!((c, n, inv), (-unit(5), 1.0, -unit(5)));

        let o = Octonion::ONE + unit(1);
        let (_, n, inv) = o.conj_norm_inv().unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-15);
        assert!(inv.approx_eq((Octonion::ONE - unit(1)).scale(0.5), 1e-15));
        assert!((o * inv).approx_eq(Octonion::ONE, UNIT_TOL));
        assert!(Octonion::ZERO.inverse().is_err());
    }

    #[test]
    fn fano_lines() {
        let table = fano_table();
        assert_eq!(table.len(), 7);
        for &FanoTriple(j, k, l) in &table {
            assert_eq!(unit(j) * unit(k), unit(l));
            assert_eq!(unit(k) * unit(j), -unit(l));
            // cyclic closure
            assert_eq!(unit(k) * unit(l), unit(j));
            assert_eq!(unit(l) * unit(j), unit(k));
        }
        // each unordered pair lies on exactly one line
        for a in 1..8 {
            for b in (a + 1)..8 {
                let hits = table
                    .iter()
                    .filter(|t| [t.0, t.1, t.2].contains(&a) && [t.0, t.1, t.2].contains(&b))
                    .count();
                assert_eq!(hits, 1, "pair ({a},{b})");
            }
        }
        assert!(table.contains(&FanoTriple(1, 2, 3)));
    }

    #[test]
    fn left_multiplication_is_regular() {
        for m in 0..8 {
            let mut targets = Vec::new();
            for src in 0..8 {
                let (idx, _) = signed_unit_index(unit(m) * unit(src)).unwrap();
                targets.push(idx);
            }
            targets.sort();
            assert_eq!(targets, (0..8).collect::<Vec<_>>());
        }
        // fixed source coordinate: the 8 left multipliers send it to 8 distinct slots
        for src in 0..8 {
            let mut targets: Vec<usize> = (0..8)
                .map(|m| signed_unit_index(unit(m) * unit(src)).unwrap().0)
                .collect();
            targets.sort();
            assert_eq!(targets, (0..8).collect::<Vec<_>>());
        }
    }
}
