use serde::Serialize;

use super::etale::{extension, kernel_basis_in, splitting_degree};
use super::ore::{ore_diagonalize, OreDiagonal};
use super::{KernelData, KernelError, KernelOptions};
use crate::ff::{fp_kernel, FFElem, Field, FpMatrix};
use crate::skew::SkewMatrix;

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Smallest `s` for which every diagonal kernel splits over `F_{q^s}`.
fn diagonal_splitting_degree(od: &OreDiagonal, opts: &KernelOptions) -> Result<u32, KernelError> {
    let mut s = 1;
    for d in &od.diagonal[..od.rank] {
        s = lcm(s, splitting_degree(d, opts.max_ext_degree)?);
        if s > opts.max_ext_degree {
            return Err(KernelError::DegreeCeilingExceeded { ceiling: opts.max_ext_degree });
        }
    }
    Ok(s)
}

fn kernel_from_diagonal(
    f: &SkewMatrix,
    od: &OreDiagonal,
    big: &Field,
    opts: &KernelOptions,
) -> Result<KernelData, KernelError> {
    let r = f.cols();
    let mut gens = Vec::new();
    for (i, d) in od.diagonal[..od.rank].iter().enumerate() {
        for v in kernel_basis_in(d, big)? {
            let mut x = vec![big.zero(); r];
            x[i] = big.from_coeffs(&v);
            let y = od.column_transform.apply(&x)?;
            assert!(f.apply(&y)?.iter().all(FFElem::is_zero), "transformed point is not in the kernel");
            gens.push(y);
        }
    }
    KernelData::from_generators(big, r, r - od.rank, gens, opts)
}

/// Kernel of `F: G_a^cols -> G_a^rows`: connected dimension `cols - rank`
/// and representatives of the component group, in its field of definition.
pub fn kernel_matrix(f: &SkewMatrix, opts: &KernelOptions) -> Result<KernelData, KernelError> {
    let od = ore_diagonalize(f);
    let s = diagonal_splitting_degree(&od, opts)?;
    kernel_from_diagonal(f, &od, &extension(f.field(), s)?, opts)
}

/// Kernels of `F` and of `F*` with all points in one common field, as
/// needed to evaluate the pairing.
pub fn joint_kernels(f: &SkewMatrix, opts: &KernelOptions) -> Result<(KernelData, KernelData), KernelError> {
    let fstar = f.adjoint_transpose();
    let od = ore_diagonalize(f);
    let od_star = ore_diagonalize(&fstar);
    let s = lcm(diagonal_splitting_degree(&od, opts)?, diagonal_splitting_degree(&od_star, opts)?);
    if s > opts.max_ext_degree {
        return Err(KernelError::DegreeCeilingExceeded { ceiling: opts.max_ext_degree });
    }
    let big = extension(f.field(), s)?;
    Ok((kernel_from_diagonal(f, &od, &big, opts)?, kernel_from_diagonal(&fstar, &od_star, &big, opts)?))
}

/// `dim_{F_p}` of the kernel of `F` on the points `(F_Q)^cols` of a field,
/// by direct linear algebra on the coordinates.
pub fn fp_kernel_dimension(f: &SkewMatrix, big: &Field) -> Result<usize, KernelError> {
    let d = big.n();
    let r = f.cols();
    let mut columns = Vec::with_capacity(r * d);
    for i in 0..r {
        for c in 0..d {
            let mut x = vec![big.zero(); r];
            let mut unit = vec![0u32; d];
            unit[c] = 1;
            x[i] = big.from_coeffs(&unit);
            let y = f.apply(&x)?;
            columns.push(y.iter().flat_map(|e| e.coeffs().iter().copied()).collect::<Vec<u32>>());
        }
    }
    if f.rows() == 0 {
        return Ok(r * d);
    }
    Ok(fp_kernel(&FpMatrix::from_columns(big.p(), f.rows() * d, &columns)).len())
}

/// Ranks, kernel dimensions and component-group sizes of `F` and `F*`,
/// each side computed from its own diagonalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub d1: usize,
    pub d2: usize,
    pub k1: usize,
    pub k2: usize,
    pub d: usize,
    #[serde(rename = "D")]
    pub big_d: usize,
    pub rank_f: usize,
    pub rank_fstar: usize,
    /// `log_p |pi_0(ker F)|`.
    pub pi0_log_f: u64,
    /// `log_p |pi_0(ker F*)|`.
    pub pi0_log_fstar: u64,
    /// Cohomology sits in the single degree `2D`.
    pub support_degree: usize,
}

impl DimReport {
    /// `D = d1 + k2 = d2 + k1`, `d = d1 - k1 = d2 - k2`, equal component groups.
    pub fn identities_hold(&self) -> bool {
        self.d1 + self.k2 == self.big_d
            && self.d2 + self.k1 == self.big_d
            && self.d1 - self.k1 == self.d
            && self.d2 - self.k2 == self.d
            && self.pi0_log_f == self.pi0_log_fstar
            && self.rank_f == self.rank_fstar
    }

    pub fn pi0_size(&self, p: u32) -> Option<u128> {
        (p as u128).checked_pow(self.pi0_log_f as u32)
    }
}

/// Dimension bookkeeping for `F`; needs no field extensions.
pub fn dimension_report(f: &SkewMatrix) -> DimReport {
    let od = ore_diagonalize(f);
    let od_star = ore_diagonalize(&f.adjoint_transpose());
    let (d1, d2) = (f.cols(), f.rows());
    let k1 = d1 - od.rank;
    let k2 = d2 - od_star.rank;
    DimReport {
        d1,
        d2,
        k1,
        k2,
        d: d1 - k1,
        big_d: d1 + k2,
        rank_f: od.rank,
        rank_fstar: od_star.rank,
        pi0_log_f: od.etale_log_size(),
        pi0_log_fstar: od_star.etale_log_size(),
        support_degree: 2 * (d1 + k2),
    }
}
