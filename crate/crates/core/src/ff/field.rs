use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use super::fp_poly;
use super::matrix::FpMatrix;
use super::FieldError;

/// Largest characteristic accepted by [`Field::new`].
pub const MAX_PRIME: u32 = 97;

struct FieldInner {
    p: u32,
    n: usize,
    /// Monic modulus, constant term first, length `n + 1`.
    modulus: Vec<u32>,
    /// `t^n` rewritten in lower powers; see [`fp_poly::reduction_tail`].
    tail: Vec<(usize, u64)>,
    /// Matrices of `x -> x^p` and its inverse on the power basis.
    frobenius: OnceLock<(FpMatrix, FpMatrix)>,
    /// Powers `r^j`, `j < p`, of `r = t^(1/p)`, for the sparse inverse Frobenius.
    root_powers: OnceLock<Vec<Vec<u32>>>,
}

/// The finite field `F_p[t] / (modulus)`.
///
/// Cheap to clone. Two fields compare equal when they have the same
/// characteristic and the same modulus.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn standard_cache() -> &'static Mutex<HashMap<(u32, usize), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Field>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Field {
    /// Creates `F_{p^n}`. Without a modulus, the smallest monic irreducible
    /// of degree `n` is used (see [`Field::standard`]).
    pub fn new(p: u32, n: usize, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge { p, max: MAX_PRIME });
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        match modulus {
            None => Self::standard(p, n),
            Some(m) => {
                let mut m: Vec<u32> = m.iter().map(|c| c % p).collect();
                fp_poly::trim(&mut m);
                if m.len() != n + 1 || m[n] != 1 {
                    return Err(FieldError::BadModulus { degree: n });
                }
                if !fp_poly::is_irreducible(&m, p) {
                    return Err(FieldError::ReducibleModulus);
                }
                Ok(Self::from_parts(p, n, m))
            }
        }
    }

    /// `F_{p^n}` with the deterministic default modulus; instances are shared.
    pub fn standard(p: u32, n: usize) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge { p, max: MAX_PRIME });
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if let Some(f) = standard_cache().lock().unwrap().get(&(p, n)) {
            return Ok(f.clone());
        }
        // search outside the lock; a racing thread computes the same modulus
        let modulus = fp_poly::smallest_irreducible(p, n);
        let field = Self::from_parts(p, n, modulus);
        let mut cache = standard_cache().lock().unwrap();
        Ok(cache.entry((p, n)).or_insert(field).clone())
    }

    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Self::standard(p, 1)
    }

    fn from_parts(p: u32, n: usize, modulus: Vec<u32>) -> Field {
        let tail = fp_poly::reduction_tail(&modulus, p);
        Field(Arc::new(FieldInner { p, n, modulus, tail, frobenius: OnceLock::new(), root_powers: OnceLock::new() }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Number of elements, if it fits in a `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.0.p as u128).checked_pow(self.0.n as u32)
    }

    pub fn zero(&self) -> FFElem {
        FFElem { field: self.clone(), c: vec![0; self.n()] }
    }

    pub fn one(&self) -> FFElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FFElem {
        let mut e = self.zero();
        e.c[0] = v.rem_euclid(self.p() as i64) as u32;
        e
    }

    /// Element with the given power-basis coordinates (missing ones are zero).
    /// Coordinates beyond the degree are reduced through the modulus.
    pub fn element(&self, coeffs: &[i64]) -> FFElem {
        let p = self.p() as i64;
        let mut v: Vec<u32> = coeffs.iter().map(|c| c.rem_euclid(p) as u32).collect();
        fp_poly::trim(&mut v);
        let r = fp_poly::rem(&v, self.modulus(), self.p());
        let mut c = vec![0u32; self.n()];
        c[..r.len()].copy_from_slice(&r);
        FFElem { field: self.clone(), c }
    }

    /// Element from exactly `n` reduced coordinates.
    pub fn from_coeffs(&self, c: &[u32]) -> FFElem {
        assert_eq!(c.len(), self.n(), "wrong number of coordinates");
        let p = self.p();
        FFElem { field: self.clone(), c: c.iter().map(|&x| x % p).collect() }
    }

    /// The class of `t`.
    pub fn generator(&self) -> FFElem {
        self.element(&[0, 1])
    }

    /// `i`-th element in the order where coordinate 0 is the least significant
    /// base-`p` digit. Used by enumeration oracles.
    pub fn element_at(&self, mut index: u128) -> FFElem {
        let p = self.p() as u128;
        let mut e = self.zero();
        for slot in e.c.iter_mut() {
            *slot = (index % p) as u32;
            index /= p;
        }
        e
    }

    fn frobenius_matrices(&self) -> &(FpMatrix, FpMatrix) {
        self.0.frobenius.get_or_init(|| {
            let n = self.n();
            let tp = self.generator().pow(self.p() as u64);
            let mut cols = Vec::with_capacity(n);
            let mut cur = self.one();
            for _ in 0..n {
                cols.push(cur.c.clone());
                cur = &cur * &tp;
            }
            let fwd = FpMatrix::from_columns(self.p(), n, &cols);
            let inv = fwd.inverse().expect("Frobenius is an automorphism");
            (fwd, inv)
        })
    }

    /// Large fields with a short modulus tail skip the Frobenius matrices.
    pub(crate) fn sparse_frobenius(&self) -> bool {
        let n = self.n();
        n > 64 && self.0.tail.len() * self.p() as usize * 4 <= n
    }

    fn frobenius_step(&self, c: &[u32]) -> Vec<u32> {
        fp_poly::frobenius_with_tail(c, self.n(), &self.0.tail, self.p())
    }

    fn root_powers(&self) -> &[Vec<u32>] {
        self.0.root_powers.get_or_init(|| {
            let mut r = self.generator().c;
            for _ in 1..self.n() {
                r = self.frobenius_step(&r);
            }
            let r = FFElem { field: self.clone(), c: r };
            let mut out = vec![self.one().c];
            for _ in 1..self.p() {
                let next = &FFElem { field: self.clone(), c: out.last().unwrap().clone() } * &r;
                out.push(next.c);
            }
            out
        })
    }

    /// `x^(1/p)` from `x = sum_j t^j A_j(t^p)`, so that `x^(1/p) = sum_j r^j A_j(t)`.
    fn inverse_frobenius_step(&self, c: &[u32]) -> Vec<u32> {
        let (n, p) = (self.n(), self.p() as usize);
        let roots = self.root_powers();
        let mut acc = vec![0u64; 2 * n];
        for (j, rj) in roots.iter().enumerate() {
            for (k, &a) in c.iter().skip(j).step_by(p).enumerate() {
                if a == 0 {
                    continue;
                }
                for (i, &b) in rj.iter().enumerate() {
                    acc[i + k] += a as u64 * b as u64;
                }
            }
        }
        fp_poly::reduce_with_tail(&mut acc, n, &self.0.tail, p as u64);
        acc[..n].iter().map(|&x| (x % p as u64) as u32).collect()
    }

    /// Compact text form `p=<p> n=<n> mod=<poly in t>`.
    pub fn spec_string(&self) -> String {
        format!("p={} n={} mod={}", self.p(), self.n(), poly_to_string(self.modulus()))
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec_string())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// Renders a polynomial over `F_p` (constant term first) in the variable `t`,
/// highest degree first, e.g. `t^2+2*t+1`.
pub(crate) fn poly_to_string(c: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        };
        parts.push(match (a, i) {
            (_, 0) => a.to_string(),
            (1, _) => mono,
            _ => format!("{a}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// An element of a [`Field`], stored by its power-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FFElem {
    field: Field,
    c: Vec<u32>,
}

impl FFElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// The residue if this element lies in the prime subfield.
    pub fn prime_value(&self) -> Option<u32> {
        self.c[1..].iter().all(|&x| x == 0).then_some(self.c[0])
    }

    fn check_same(&self, other: &FFElem) {
        assert!(self.field == other.field, "mixed fields: {:?} vs {:?}", self.field, other.field);
    }

    pub fn pow(&self, mut e: u64) -> FFElem {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn inv(&self) -> Option<FFElem> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.p();
        // extended Euclid in F_p[t]
        let m = self.field.modulus().to_vec();
        let mut a = self.c.clone();
        fp_poly::trim(&mut a);
        let (mut r0, mut r1) = (m.clone(), a);
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = fp_poly::divrem(&r0, &r1, p);
            let s2 = fp_poly::sub(&s0, &fp_poly::mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant
        let k = fp_poly::inv_mod(r0[0], p) as u64;
        let s = fp_poly::rem(&s0, &m, p);
        let mut c = vec![0u32; self.field.n()];
        for (i, &v) in s.iter().enumerate() {
            c[i] = (v as u64 * k % p as u64) as u32;
        }
        Some(FFElem { field: self.field.clone(), c })
    }

    /// `x^(p^k)`; negative `k` applies the inverse automorphism.
    pub fn frobenius(&self, k: i64) -> FFElem {
        let n = self.field.n() as i64;
        let k = k.rem_euclid(n);
        if k == 0 {
            return self.clone();
        }
        let mut c = self.c.clone();
        if self.field.sparse_frobenius() {
            // a forward step costs about p * tail * n, an inverse one about 2 n^2
            let fwd_cost = k as u64 * self.field.p() as u64 * self.field.0.tail.len() as u64;
            if fwd_cost <= 2 * (n - k) as u64 * n as u64 {
                for _ in 0..k {
                    c = self.field.frobenius_step(&c);
                }
            } else {
                for _ in 0..n - k {
                    c = self.field.inverse_frobenius_step(&c);
                }
            }
            return FFElem { field: self.field.clone(), c };
        }
        let (fwd, inv) = self.field.frobenius_matrices();
        let (mat, steps) = if k <= n / 2 { (fwd, k) } else { (inv, n - k) };
        for _ in 0..steps {
            c = mat.mul_vec(&c);
        }
        FFElem { field: self.field.clone(), c }
    }

    pub fn scale(&self, s: u32) -> FFElem {
        let p = self.field.p() as u64;
        let c = self.c.iter().map(|&x| (x as u64 * s as u64 % p) as u32).collect();
        FFElem { field: self.field.clone(), c }
    }
}

impl PartialOrd for FFElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the coordinate vector, constant coordinate first.
impl Ord for FFElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.cmp(&other.c)
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(&self.c))
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(&self.c))
    }
}

impl<'a> Add<&'a FFElem> for &'a FFElem {
    type Output = FFElem;
    fn add(self, rhs: &FFElem) -> FFElem {
        self.check_same(rhs);
        let p = self.field.p();
        let c = self.c.iter().zip(&rhs.c).map(|(&a, &b)| (a + b) % p).collect();
        FFElem { field: self.field.clone(), c }
    }
}

impl<'a> Sub<&'a FFElem> for &'a FFElem {
    type Output = FFElem;
    fn sub(self, rhs: &FFElem) -> FFElem {
        self.check_same(rhs);
        let p = self.field.p();
        let c = self.c.iter().zip(&rhs.c).map(|(&a, &b)| (a + p - b) % p).collect();
        FFElem { field: self.field.clone(), c }
    }
}

impl Neg for &FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FFElem { field: self.field.clone(), c }
    }
}

impl Neg for FFElem {
    type Output = FFElem;
    fn neg(self) -> FFElem {
        -&self
    }
}

impl<'a> Mul<&'a FFElem> for &'a FFElem {
    type Output = FFElem;
    fn mul(self, rhs: &FFElem) -> FFElem {
        self.check_same(rhs);
        let n = self.field.n();
        let p = self.field.p() as u64;
        if n == 1 {
            let v = (self.c[0] as u64 * rhs.c[0] as u64 % p) as u32;
            return FFElem { field: self.field.clone(), c: vec![v] };
        }
        if let Some(s) = rhs.prime_value() {
            return self.scale(s);
        }
        if let Some(s) = self.prime_value() {
            return rhs.scale(s);
        }
        let mut acc = vec![0u64; 2 * n - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
        }
        fp_poly::reduce_with_tail(&mut acc, n, &self.field.0.tail, p);
        let c = acc[..n].iter().map(|&x| (x % p) as u32).collect();
        FFElem { field: self.field.clone(), c }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<FFElem> for FFElem {
            type Output = FFElem;
            fn $method(self, rhs: FFElem) -> FFElem {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FFElem> for FFElem {
            type Output = FFElem;
            fn $method(self, rhs: &FFElem) -> FFElem {
                (&self).$method(rhs)
            }
        }
        impl<'a> $assign_tr<&'a FFElem> for FFElem {
            fn $assign_method(&mut self, rhs: &FFElem) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_owned!(Add, add, AddAssign, add_assign);
forward_owned!(Sub, sub, SubAssign, sub_assign);
forward_owned!(Mul, mul, MulAssign, mul_assign);

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Field {
        Field::new(3, 2, Some(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn create_prime_field() {
        let f = Field::new(3, 1, None).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), Some(3));
    }

    #[test]
    fn create_errors() {
        assert!(matches!(Field::new(4, 1, None), Err(FieldError::NonPrime(4))));
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(FieldError::ReducibleModulus)));
        assert!(matches!(Field::new(101, 1, None), Err(FieldError::PrimeTooLarge { .. })));
        assert!(matches!(Field::new(3, 2, Some(&[1, 1])), Err(FieldError::BadModulus { .. })));
    }

    #[test]
    fn t_squared_plus_one_has_no_root_mod_3() {
        for x in 0..3 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        assert_eq!(f9().modulus(), &[1, 0, 1]);
        assert_eq!(Field::standard(3, 2).unwrap(), f9());
    }

    #[test]
    fn frobenius_of_t_in_f9() {
        let f = f9();
        let t = f.generator();
        // t^3 = t * t^2 = -t
        assert_eq!(t.frobenius(1), f.element(&[0, 2]));
        assert_eq!(t.pow(3), f.element(&[0, 2]));
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = Field::prime(3).unwrap();
        for a in 0..3 {
            let x = f.from_int(a);
            assert_eq!(x.frobenius(1), x);
            assert_eq!(x.frobenius(-5), x);
        }
    }

    #[test]
    fn exhaustive_inverse_and_frobenius_in_f27() {
        let f = Field::standard(3, 3).unwrap();
        for i in 0..27 {
            let x = f.element_at(i);
            assert_eq!(x.frobenius(1), x.pow(3));
            assert_eq!(x.frobenius(-1).frobenius(1), x);
            assert_eq!(x.frobenius(-1).pow(3), x);
            if !x.is_zero() {
                assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn display_polys() {
        assert_eq!(poly_to_string(&[1, 0, 1]), "t^2+1");
        assert_eq!(poly_to_string(&[1, 2]), "2*t+1");
        assert_eq!(poly_to_string(&[]), "0");
        assert_eq!(f9().spec_string(), "p=3 n=2 mod=t^2+1");
    }
}
