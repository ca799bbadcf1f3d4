//! Prime fields, their extensions, Frobenius, and dense `F_p` linear algebra.

mod embed;
mod field;
pub(crate) mod fp_poly;
mod matrix;

pub use embed::{embed, embedding, Embedding};
pub use field::{FFElem, Field, MAX_PRIME};
pub use matrix::{fp_kernel, FpMatrix};

pub(crate) use field::poly_to_string;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("characteristic {p} exceeds the supported ceiling {max}")]
    PrimeTooLarge { p: u32, max: u32 },
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("modulus must be monic of degree {degree}")]
    BadModulus { degree: usize },
    #[error("modulus is reducible")]
    ReducibleModulus,
    #[error("no embedding from {from} into {to}")]
    NoEmbedding { from: String, to: String },
}

/// `x^(p^k)` for any integer `k`.
pub fn frobenius(x: &FFElem, k: i64) -> FFElem {
    x.frobenius(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_elem(field: Field) -> impl Strategy<Value = FFElem> {
        let size = field.size().unwrap();
        (0..size).prop_map(move |i| field.element_at(i))
    }

    fn arb_large(field: Field) -> impl Strategy<Value = FFElem> {
        let (p, n) = (field.p(), field.n());
        proptest::collection::vec(0..p, n).prop_map(move |c| field.from_coeffs(&c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sparse_frobenius_is_consistent(k in -3i64..=3, x in arb_large(Field::standard(3, 101).unwrap())) {
            prop_assert!(x.field().sparse_frobenius());
            if k >= 0 {
                prop_assert_eq!(frobenius(&x, k), x.pow(3u64.pow(k as u32)));
            }
            prop_assert_eq!(frobenius(&frobenius(&x, k), -k), x.clone());
            let y = &x * &x.frobenius(1);
            prop_assert_eq!(frobenius(&y, k), &frobenius(&x, k) * &frobenius(&x, k + 1));
        }
    }

    proptest! {
        #[test]
        fn frobenius_composes(a in -3i64..=3, b in -3i64..=3,
                              x in arb_elem(Field::standard(5, 4).unwrap())) {
            prop_assert_eq!(frobenius(&frobenius(&x, a), b), frobenius(&x, a + b));
        }

        #[test]
        fn frobenius_is_automorphism(k in -4i64..=4,
                                     x in arb_elem(Field::standard(2, 6).unwrap()),
                                     y in arb_elem(Field::standard(2, 6).unwrap())) {
            prop_assert_eq!(frobenius(&(&x + &y), k), &frobenius(&x, k) + &frobenius(&y, k));
            prop_assert_eq!(frobenius(&(&x * &y), k), &frobenius(&x, k) * &frobenius(&y, k));
        }

        #[test]
        fn embedding_commutes_with_frobenius(x in arb_elem(Field::standard(3, 2).unwrap())) {
            let tgt = Field::standard(3, 6).unwrap();
            prop_assert_eq!(embed(&frobenius(&x, 1), &tgt).unwrap(),
                            frobenius(&embed(&x, &tgt).unwrap(), 1));
        }

        #[test]
        fn kernel_vectors_are_annihilated(rows in proptest::collection::vec(
            proptest::collection::vec(0i64..7, 5), 1..5)) {
            let m = FpMatrix::from_rows(7, &rows);
            let basis = fp_kernel(&m);
            for v in &basis {
                prop_assert!(m.mul_vec(v).iter().all(|&c| c == 0));
            }
            prop_assert_eq!(m.rank() + basis.len(), m.cols());
        }
    }

    #[test]
    fn embedding_is_injective() {
        let src = Field::standard(2, 3).unwrap();
        let tgt = Field::standard(2, 6).unwrap();
        let mut images: Vec<FFElem> =
            (0..8).map(|i| embed(&src.element_at(i), &tgt).unwrap()).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 8);
    }
}
