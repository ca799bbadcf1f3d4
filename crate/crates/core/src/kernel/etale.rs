use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::{KernelData, KernelError, KernelOptions};
use crate::ff::{fp_kernel, FFElem, Field, FpMatrix};
use crate::skew::SkewPoly;

/// `F^{-m} f`: same kernel as `f`, exponents in `[0, M - m]`, nonzero
/// constant term.
pub fn separable_part(f: &SkewPoly) -> SkewPoly {
    match f.min_exp() {
        Some(m) => f.shift_left(-m),
        None => f.clone(),
    }
}

/// Left multiplication by `F` on `k{F} / k{F} L` in the basis `1, F, ..., F^{N-1}`.
struct QuotientModule<'a> {
    low: Vec<FFElem>,
    top_inv: FFElem,
    field: &'a Field,
}

impl<'a> QuotientModule<'a> {
    fn new(l: &'a SkewPoly) -> Self {
        let n = l.max_exp().unwrap() as usize;
        let low = (0..n as i64).map(|i| l.coeff(i)).collect();
        let top_inv = l.coeff(n as i64).inv().unwrap();
        QuotientModule { low, top_inv, field: l.field() }
    }

    fn dim(&self) -> usize {
        self.low.len()
    }

    fn unit(&self) -> Vec<FFElem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[0] = self.field.one();
        v
    }

    /// `v -> F v`, reduced with the quotient on the left.
    fn phi(&self, v: &[FFElem]) -> Vec<FFElem> {
        let n = self.dim();
        let mut w = Vec::with_capacity(n);
        w.push(self.field.zero());
        w.extend(v[..n - 1].iter().map(|c| c.frobenius(1)));
        let e = &v[n - 1].frobenius(1) * &self.top_inv;
        if !e.is_zero() {
            for (wi, li) in w.iter_mut().zip(&self.low) {
                *wi -= &(&e * li);
            }
        }
        w
    }
}

/// Smallest `s` such that every kernel point of `f` lies in `F_{q^s}`, where
/// `q` is the size of the coefficient field; errors past `max_s`.
///
/// Computed as the smallest `s` with `F^{ns} = 1` modulo the left ideal of
/// the separable part, which holds exactly when that part right-divides
/// `F^{ns} - 1`.
pub fn splitting_degree(f: &SkewPoly, max_s: u32) -> Result<u32, KernelError> {
    let l = separable_part(f);
    if matches!(l.max_exp(), None | Some(0)) {
        return Ok(1);
    }
    let n = f.field().n() as u64;
    let module = QuotientModule::new(&l);
    let unit = module.unit();
    let mut v = unit.clone();
    for j in 1..=n * max_s as u64 {
        v = module.phi(&v);
        if j % n == 0 && v == unit {
            return Ok((j / n) as u32);
        }
    }
    Err(KernelError::DegreeCeilingExceeded { ceiling: max_s })
}

/// The kernel size of a single skew polynomial without building its
/// splitting field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCount {
    pub connected_dim: usize,
    /// `log_p |pi_0|`.
    pub log_size: u64,
    /// The separable part right-divides `F^{nE} - 1` for the exponent `E`
    /// below, so its roots lie in `F_{q^E}` and number `p^{log_size}` there.
    pub certified: bool,
    /// Bit length of the exponent `E` used in the certificate.
    pub exponent_bits: u64,
}

fn mat_vec(m: &[Vec<FFElem>], v: &[FFElem], field: &Field) -> Vec<FFElem> {
    m.iter()
        .map(|row| {
            let mut acc = field.zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

fn mat_mul(a: &[Vec<FFElem>], b: &[Vec<FFElem>], field: &Field) -> Vec<Vec<FFElem>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut acc = field.zero();
                    for (x, brow) in row.iter().zip(b) {
                        if !x.is_zero() && !brow[j].is_zero() {
                            acc += &(x * &brow[j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// A multiple of the order of every element of `GL_N(F_q)`:
/// `p^e * lcm_{d <= N} (q^d - 1)` with `p^e >= N`.
fn gl_exponent(p: u32, n: usize, dim: usize) -> BigUint {
    let q = BigUint::from(p).pow(n as u32);
    let mut e = BigUint::one();
    for d in 1..=dim as u32 {
        e = e.lcm(&(q.pow(d) - 1u32));
    }
    let mut pe = BigUint::one();
    while pe < BigUint::from(dim) {
        pe *= p;
    }
    e * pe
}

/// Counts the kernel of `f` through a divisibility certificate.
pub fn count_kernel(f: &SkewPoly) -> KernelCount {
    let l = separable_part(f);
    let span = match l.max_exp() {
        None => return KernelCount { connected_dim: 1, log_size: 0, certified: true, exponent_bits: 0 },
        Some(0) => return KernelCount { connected_dim: 0, log_size: 0, certified: true, exponent_bits: 0 },
        Some(span) => span as usize,
    };
    let field = f.field();
    let module = QuotientModule::new(&l);
    // matrix of the F_q-linear map F^n, stored by rows
    let cols: Vec<Vec<FFElem>> = (0..span)
        .map(|i| {
            let mut v = vec![field.zero(); span];
            v[i] = field.one();
            for _ in 0..field.n() {
                v = module.phi(&v);
            }
            v
        })
        .collect();
    let mut base: Vec<Vec<FFElem>> = (0..span).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let e = gl_exponent(field.p(), field.n(), span);
    let mut v = module.unit();
    for bit in 0..e.bits() {
        if e.bit(bit) {
            v = mat_vec(&base, &v, field);
        }
        if bit + 1 < e.bits() {
            base = mat_mul(&base, &base, field);
        }
    }
    KernelCount { connected_dim: 0, log_size: span as u64, certified: v == module.unit(), exponent_bits: e.bits() }
}

/// F_p-basis of the kernel of `f` on `big`, as coordinate vectors.
pub(crate) fn kernel_basis_in(f: &SkewPoly, big: &Field) -> Result<Vec<Vec<u32>>, KernelError> {
    let l = separable_part(f);
    if l.is_zero() {
        return Ok(Vec::new());
    }
    let d = big.n();
    let mut columns = Vec::with_capacity(d);
    let mut unit = vec![0u32; d];
    for i in 0..d {
        unit[i] = 1;
        columns.push(l.evaluate(&big.from_coeffs(&unit))?.coeffs().to_vec());
        unit[i] = 0;
    }
    Ok(fp_kernel(&FpMatrix::from_columns(big.p(), d, &columns)))
}

/// The field `F_{q^s}` over the coefficient field `F_q` of `base`.
pub(crate) fn extension(base: &Field, s: u32) -> Result<Field, KernelError> {
    if s == 1 {
        return Ok(base.clone());
    }
    Ok(Field::standard(base.p(), base.n() * s as usize)?)
}

/// The kernel points of a single skew polynomial in its field of definition.
///
/// For `f = 0` the kernel is all of `G_a`: connected dimension 1 and a
/// trivial point group.
pub fn etale_kernel(f: &SkewPoly, opts: &KernelOptions) -> Result<KernelData, KernelError> {
    if f.is_zero() {
        return KernelData::from_generators(f.field(), 1, 1, Vec::new(), opts);
    }
    let s = splitting_degree(f, opts.max_ext_degree)?;
    etale_kernel_in(f, &extension(f.field(), s)?, opts)
}

/// The kernel points of `f` lying in `big`.
pub fn etale_kernel_in(f: &SkewPoly, big: &Field, opts: &KernelOptions) -> Result<KernelData, KernelError> {
    if f.is_zero() {
        return KernelData::from_generators(big, 1, 1, Vec::new(), opts);
    }
    let gens = kernel_basis_in(f, big)?.into_iter().map(|v| vec![big.from_coeffs(&v)]).collect();
    KernelData::from_generators(big, 1, 0, gens, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> KernelOptions {
        KernelOptions::default()
    }

    #[test]
    fn artin_schreier_kernel() {
        let f3 = Field::prime(3).unwrap();
        let k = etale_kernel(&SkewPoly::from_ints(&f3, 0, &[-1, 1]), &opts()).unwrap();
        let pts: Vec<_> = k.points().iter().map(|p| p[0].clone()).collect();
        assert_eq!(pts, vec![f3.from_int(0), f3.from_int(1), f3.from_int(2)]);
        assert_eq!(k.fp_basis().len(), 1);
        assert_eq!(k.connected_dim(), 0);
    }

    #[test]
    fn frobenius_powers_have_trivial_kernel() {
        let f9 = Field::standard(3, 2).unwrap();
        for m in -3..=3 {
            let k = etale_kernel(&SkewPoly::phi(&f9, m), &opts()).unwrap();
            assert_eq!(k.len(), 1);
        }
    }

    #[test]
    fn phi_squared_minus_one_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let f = SkewPoly::from_ints(&f2, 0, &[1, 0, 1]);
        assert_eq!(splitting_degree(&f, 10).unwrap(), 2);
        let k = etale_kernel(&f, &opts()).unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k.field().n(), 2);
        assert_eq!(k.fp_basis().len(), 2);
    }

    #[test]
    fn zero_polynomial() {
        let f3 = Field::prime(3).unwrap();
        let k = etale_kernel(&SkewPoly::zero(&f3), &opts()).unwrap();
        assert_eq!((k.connected_dim(), k.len()), (1, 1));
    }

    #[test]
    fn splitting_degree_matches_search() {
        // x^9 - x - 1 type: F^2 - F - 1 over F_3
        let f3 = Field::prime(3).unwrap();
        let f = SkewPoly::from_ints(&f3, 0, &[-1, -1, 1]);
        let s = splitting_degree(&f, 100).unwrap();
        for t in 1..s {
            let big = Field::standard(3, t as usize).unwrap();
            assert!(kernel_basis_in(&f, &big).unwrap().len() < 2);
        }
        let big = Field::standard(3, s as usize).unwrap();
        assert_eq!(kernel_basis_in(&f, &big).unwrap().len(), 2);
    }

    #[test]
    fn count_certificate_agrees() {
        let f9 = Field::standard(3, 2).unwrap();
        let f = SkewPoly::from_terms(&f9, [(-1, f9.generator()), (1, f9.one()), (3, f9.element(&[1, 1]))]);
        let c = count_kernel(&f);
        assert!(c.certified);
        assert_eq!(c.log_size, 4);
        let k = etale_kernel(&f, &KernelOptions { max_ext_degree: 200, ..opts() });
        if let Ok(k) = k {
            assert_eq!(k.len(), 81);
        }
    }

    #[test]
    fn ceiling_is_reported() {
        let f5 = Field::prime(5).unwrap();
        let f = SkewPoly::from_ints(&f5, 0, &[2, 1, 0, 0, 0, 1]);
        let err = etale_kernel(&f, &KernelOptions { max_ext_degree: 2, ..opts() }).unwrap_err();
        assert!(matches!(err, KernelError::DegreeCeilingExceeded { ceiling: 2 }));
    }
}
