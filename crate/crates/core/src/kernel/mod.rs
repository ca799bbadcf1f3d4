//! Kernels of additive maps between vector groups: connected dimension,
//! component groups as explicit points, and Ore rank.

mod data;
mod etale;
mod matrix;
mod ore;

pub use data::{KernelData, MAX_LISTED_POINTS};
pub use etale::{count_kernel, etale_kernel, etale_kernel_in, separable_part, splitting_degree, KernelCount};
pub use matrix::{dimension_report, fp_kernel_dimension, joint_kernels, kernel_matrix, DimReport};
pub use ore::{ore_diagonalize, ore_rank, OreDiagonal};

pub(crate) use data::Echelon;
pub(crate) use etale::extension;

use thiserror::Error;

use crate::ff::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("kernel points need an extension of degree above the ceiling {ceiling}")]
    DegreeCeilingExceeded { ceiling: u32 },
    #[error("component group of size {p}^{log_size} exceeds the point ceiling {ceiling}")]
    PointCeilingExceeded { p: u32, log_size: u32, ceiling: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Search limits for kernel computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelOptions {
    /// Largest `s` for which `F_{q^s}` is built.
    pub max_ext_degree: u32,
    /// Largest number of points enumerated for one component group.
    pub max_points: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { max_ext_degree: 64, max_points: 1 << 16 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::skew::{SkewMatrix, SkewPoly};
    use proptest::prelude::*;

    fn arb_poly(p: u32, n: usize, lo: i64, hi: i64) -> impl Strategy<Value = SkewPoly> {
        let field = Field::standard(p, n).unwrap();
        let size = field.size().unwrap();
        proptest::collection::vec((lo..=hi, 0..size), 1..4).prop_map(move |terms| {
            SkewPoly::from_terms(&field, terms.into_iter().map(|(k, i)| (k, field.element_at(i))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn single_kernel_size(f in arb_poly(2, 1, -2, 2)) {
            let k = etale_kernel(&f, &KernelOptions::default()).unwrap();
            match f.span() {
                Some(span) => prop_assert_eq!(k.log_size() as u64, span),
                None => prop_assert_eq!(k.connected_dim(), 1),
            }
            for pt in k.points() {
                prop_assert!(f.evaluate(&pt[0]).unwrap().is_zero());
            }
        }

        #[test]
        fn matrix_and_adjoint_groups_match(entries in proptest::collection::vec(arb_poly(3, 1, -1, 1), 4)) {
            let f3 = Field::prime(3).unwrap();
            let m = SkewMatrix::from_rows(&f3, vec![entries[..2].to_vec(), entries[2..].to_vec()]);
            let r = dimension_report(&m);
            prop_assert!(r.identities_hold());
            if let Ok((k1, k2)) = joint_kernels(&m, &KernelOptions::default()) {
                prop_assert_eq!(k1.log_size() as u64, r.pi0_log_f);
                prop_assert_eq!(k2.log_size() as u64, r.pi0_log_fstar);
                let dim = fp_kernel_dimension(&m, k1.field()).unwrap();
                prop_assert_eq!(dim, k1.connected_dim() * k1.field().n() + k1.log_size());
            }
        }
    }
}
