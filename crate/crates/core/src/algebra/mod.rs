//! Quaternion and octonion composition algebras, unit-sphere sampling and
//! the quaternion/`SU(2)` correspondence.

mod octonion;
mod quaternion;
pub mod sampling;
mod su2;

pub use octonion::{fano_table, signed_unit_index, FanoTriple, Octonion, UnitOctonion};
pub use quaternion::{Quaternion, UnitQuaternion, UNIT_TOL};
pub use sampling::{sample_unit, sample_unit_octonion, sample_unit_quaternion, UnitSample};
pub use su2::{quat_to_su2, su2_to_quat, Mat2, Su2Frame};

#[cfg(test)]
mod laws {
    use super::*;
    use proptest::prelude::*;

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
    }

    fn oct() -> impl Strategy<Value = Octonion> {
        prop::array::uniform8(-3.0f64..3.0).prop_map(Octonion::new)
    }

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()))
    }

    proptest! {
        #[test]
        fn quaternion_norm_multiplicative(p in quat(), q in quat()) {
            prop_assert!(close((p * q).norm(), p.norm() * q.norm()));
        }

        #[test]
        fn quaternion_associative(p in quat(), q in quat(), r in quat()) {
            prop_assert!(((p * q) * r).approx_eq(p * (q * r), 1e-11));
        }

        #[test]
        fn quaternion_conj_reverses(p in quat(), q in quat()) {
            prop_assert!((p * q).conj().approx_eq(q.conj() * p.conj(), 1e-12));
        }

        #[test]
        fn octonion_norm_multiplicative(p in oct(), q in oct()) {
            prop_assert!(close((p * q).norm(), p.norm() * q.norm()));
        }

        #[test]
        fn octonion_alternative(p in oct(), q in oct()) {
            prop_assert!((p * (p * q)).approx_eq((p * p) * q, 1e-11));
            prop_assert!(((q * p) * p).approx_eq(q * (p * p), 1e-11));
        }

        #[test]
        fn octonion_conj_reverses(p in oct(), q in oct()) {
            prop_assert!((p * q).conj().approx_eq(q.conj() * p.conj(), 1e-12));
        }
    }

    #[test]
    fn distinct_units_anticommute() {
        for j in 1..8 {
            for k in 1..8 {
                if j != k {
                    let (a, b) = (Octonion::unit_basis(j), Octonion::unit_basis(k));
                    assert_eq!(a * b, -(b * a));
                }
            }
        }
        for (x, y) in [
            (Quaternion::I, Quaternion::J),
            (Quaternion::J, Quaternion::K),
            (Quaternion::K, Quaternion::I),
        ] {
            assert_eq!(x * y, -(y * x));
        }
    }
}
