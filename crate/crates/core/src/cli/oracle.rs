use serde::Serialize;
use thiserror::Error;

use crate::kernel::{extension, Echelon, KernelData, KernelError, KernelOptions};
use crate::skew::SkewPoly;

/// Largest field the oracle enumerates.
pub const ORACLE_CEILING: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumerating fields of size {p}^{exponent} exceeds the ceiling 2^24")]
    CeilingExceeded { p: u32, exponent: u64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Roots found by enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleKernel {
    /// Degree of the field the points live in.
    pub s: u32,
    /// All `p^(M - m)` roots were found at `s`.
    pub complete: bool,
    pub kernel: KernelData,
}

/// Finds the roots of `f` by evaluating it on every element of `F_{q^s}`
/// for `s = 1..=s_max`, stopping at the first field holding all of them.
pub fn oracle_kernel(f: &SkewPoly, s_max: u32) -> Result<OracleKernel, OracleError> {
    let base = f.field();
    let p = base.p();
    let exponent = base.n() as u64 * s_max as u64;
    if (p as f64).powf(exponent as f64) > ORACLE_CEILING as f64 {
        return Err(OracleError::CeilingExceeded { p, exponent });
    }
    let opts = KernelOptions { max_ext_degree: s_max.max(1), max_points: ORACLE_CEILING as usize };
    if f.is_zero() {
        let kernel = KernelData::from_generators(base, 1, 1, Vec::new(), &opts)?;
        return Ok(OracleKernel { s: 1, complete: true, kernel });
    }
    let expected = (p as u64).pow(f.span().unwrap_or(0) as u32);
    let mut last = None;
    for s in 1..=s_max.max(1) {
        let big = extension(base, s)?;
        let size = big.size().expect("field within the oracle ceiling");
        let mut found = 0u64;
        let mut basis = Vec::new();
        let mut ech = Echelon::new(p);
        for i in 0..size {
            let x = big.element_at(i);
            if f.evaluate(&x).map_err(KernelError::from)?.is_zero() {
                found += 1;
                if ech.insert(x.coeffs()) {
                    basis.push(vec![x]);
                }
            }
        }
        let kernel = KernelData::from_generators(&big, 1, 0, basis, &opts)?;
        // the roots of an additive map form a group, so they are exactly the span
        assert_eq!(kernel.len() as u64, found, "roots do not form a group");
        if found == expected {
            return Ok(OracleKernel { s, complete: true, kernel });
        }
        last = Some(OracleKernel { s, complete: false, kernel });
    }
    Ok(last.expect("at least one degree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::kernel::etale_kernel;

    #[test]
    fn examples() {
        let f3 = Field::prime(3).unwrap();
        let o = oracle_kernel(&SkewPoly::from_ints(&f3, 0, &[-1, 1]), 1).unwrap();
        assert_eq!((o.kernel.len(), o.complete), (3, true));
        let f2 = Field::prime(2).unwrap();
        let f = SkewPoly::from_ints(&f2, 0, &[-1, 0, 1]);
        let o = oracle_kernel(&f, 2).unwrap();
        assert_eq!((o.s, o.kernel.len()), (2, 4));
        assert_eq!(o.kernel, etale_kernel(&f, &KernelOptions::default()).unwrap());
        let o = oracle_kernel(&SkewPoly::phi(&f3, 4), 3).unwrap();
        assert_eq!((o.s, o.kernel.len()), (1, 1));
    }

    #[test]
    fn ceiling() {
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(
            oracle_kernel(&SkewPoly::phi(&f2, 1), 25),
            Err(OracleError::CeilingExceeded { p: 2, exponent: 25 })
        ));
    }
}
