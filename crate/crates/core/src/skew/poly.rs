use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::ff::{embedding, FFElem, Field, FieldError};

/// A twisted Laurent polynomial `sum_k a_k F^k` with `F a = a^p F`.
///
/// Only nonzero coefficients are stored; the zero polynomial has no terms and
/// no exponent range.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    field: Field,
    terms: BTreeMap<i64, FFElem>,
}

impl SkewPoly {
    pub fn zero(field: &Field) -> Self {
        SkewPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FFElem) -> Self {
        Self::monomial(c, 0)
    }

    /// `c F^k`.
    pub fn monomial(c: FFElem, k: i64) -> Self {
        let mut f = Self::zero(c.field());
        if !c.is_zero() {
            f.terms.insert(k, c);
        }
        f
    }

    /// `F^k`.
    pub fn phi(field: &Field, k: i64) -> Self {
        Self::monomial(field.one(), k)
    }

    /// Sums the given terms; repeated exponents are added together.
    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (i64, FFElem)>) -> Self {
        let mut f = Self::zero(field);
        for (k, c) in terms {
            assert!(c.field() == field, "coefficient outside the base field");
            f.add_term(k, &c);
        }
        f
    }

    /// `sum_k ints[k - offset] F^k` with prime-field coefficients.
    pub fn from_ints(field: &Field, offset: i64, ints: &[i64]) -> Self {
        Self::from_terms(field, ints.iter().enumerate().map(|(i, &v)| (offset + i as i64, field.from_int(v))))
    }

    fn add_term(&mut self, k: i64, c: &FFElem) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FFElem)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, k: i64) -> FFElem {
        self.terms.get(&k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Smallest exponent `m`.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Largest exponent `M`.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `M - m`.
    pub fn span(&self) -> Option<u64> {
        Some((self.max_exp()? - self.min_exp()?) as u64)
    }

    fn top(&self) -> Option<(i64, &FFElem)> {
        self.terms.iter().next_back().map(|(&k, c)| (k, c))
    }

    /// The adjoint `sum_k a_k^{p^{-k}} F^{-k}`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(&self.field);
        for (&k, c) in &self.terms {
            out.terms.insert(-k, c.frobenius(-k));
        }
        out
    }

    /// `F^k * self`.
    pub fn shift_left(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.field);
        for (&e, c) in &self.terms {
            out.terms.insert(e + k, c.frobenius(k));
        }
        out
    }

    /// `self * F^k`.
    pub fn shift_right(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.field);
        for (&e, c) in &self.terms {
            out.terms.insert(e + k, c.clone());
        }
        out
    }

    pub fn scale_left(&self, c: &FFElem) -> Self {
        Self::constant(c.clone()) * self
    }

    /// Evaluates the additive map at a point `x` of any extension of the base
    /// field: `sum_k a_k x^{p^k}`, with negative `k` taken through the inverse
    /// Frobenius of `x`'s field.
    pub fn evaluate(&self, x: &FFElem) -> Result<FFElem, FieldError> {
        let target = x.field();
        let emb = embedding(&self.field, target)?;
        let mut acc = target.zero();
        for (&k, c) in &self.terms {
            acc += &(&emb.apply(c) * &x.frobenius(k));
        }
        Ok(acc)
    }

    /// `(q, r)` with `self = b * q + r` and `span(r) < span(b)` (or `r = 0`).
    pub fn right_divrem(&self, b: &SkewPoly) -> (SkewPoly, SkewPoly) {
        self.divrem_by(b, true)
    }

    /// `(q, r)` with `self = q * b + r` and `span(r) < span(b)` (or `r = 0`).
    pub fn left_divrem(&self, b: &SkewPoly) -> (SkewPoly, SkewPoly) {
        self.divrem_by(b, false)
    }

    fn divrem_by(&self, b: &SkewPoly, quotient_on_right: bool) -> (SkewPoly, SkewPoly) {
        let (bt, bc) = b.top().expect("division by zero skew polynomial");
        let bspan = b.span().unwrap();
        let mut q = Self::zero(&self.field);
        let mut r = self.clone();
        while let (Some((at, ac)), Some(rspan)) = (r.top(), r.span()) {
            if rspan < bspan {
                break;
            }
            let shift = at - bt;
            let step = if quotient_on_right {
                // b * e F^shift has top coefficient bc * e^{p^bt}
                let e = (ac * &bc.inv().unwrap()).frobenius(-bt);
                let t = Self::monomial(e, shift);
                r = &r - &(b * &t);
                t
            } else {
                // e F^shift * b has top coefficient e * bc^{p^shift}
                let e = ac * &bc.frobenius(shift).inv().unwrap();
                let t = Self::monomial(e, shift);
                r = &r - &(&t * b);
                t
            };
            q = &q + &step;
        }
        (q, r)
    }
}

/// The ring product; `F a = a^p F`.
pub fn skew_mul(f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
    f * g
}

/// The adjoint involution.
pub fn adjoint(f: &SkewPoly) -> SkewPoly {
    f.adjoint()
}

/// Evaluates `f` at `x`.
pub fn evaluate(f: &SkewPoly, x: &FFElem) -> Result<FFElem, FieldError> {
    f.evaluate(x)
}

impl Add for &SkewPoly {
    type Output = SkewPoly;
    fn add(self, rhs: &SkewPoly) -> SkewPoly {
        assert!(self.field == rhs.field);
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &SkewPoly {
    type Output = SkewPoly;
    fn sub(self, rhs: &SkewPoly) -> SkewPoly {
        self + &(-rhs)
    }
}

impl Neg for &SkewPoly {
    type Output = SkewPoly;
    fn neg(self) -> SkewPoly {
        SkewPoly { field: self.field.clone(), terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Mul for &SkewPoly {
    type Output = SkewPoly;
    fn mul(self, rhs: &SkewPoly) -> SkewPoly {
        assert!(self.field == rhs.field);
        let mut out = SkewPoly::zero(&self.field);
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                // a F^i b F^j = a b^{p^i} F^{i+j}
                out.add_term(i + j, &(a * &b.frobenius(i)));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for SkewPoly {
            type Output = SkewPoly;
            fn $m(self, rhs: SkewPoly) -> SkewPoly { (&self).$m(&rhs) }
        }
        impl $tr<&SkewPoly> for SkewPoly {
            type Output = SkewPoly;
            fn $m(self, rhs: &SkewPoly) -> SkewPoly { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for SkewPoly {
    type Output = SkewPoly;
    fn neg(self) -> SkewPoly {
        -&self
    }
}

impl fmt::Debug for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn phi_times_constant_twists() {
        let f9 = Field::standard(3, 2).unwrap();
        let a = f9.generator();
        let lhs = &SkewPoly::phi(&f9, 1) * &SkewPoly::constant(a.clone());
        assert_eq!(lhs, SkewPoly::monomial(a.pow(3), 1));
    }

    #[test]
    fn unit_and_difference_of_squares() {
        let f = f3();
        let a = SkewPoly::from_ints(&f, -1, &[2, 0, 1]);
        assert_eq!(&a * &SkewPoly::one(&f), a);
        let plus = SkewPoly::from_ints(&f, 0, &[1, 1]);
        let minus = SkewPoly::from_ints(&f, 0, &[-1, 1]);
        assert_eq!(&plus * &minus, SkewPoly::from_ints(&f, 0, &[-1, 0, 1]));
    }

    #[test]
    fn degrees_add_under_multiplication() {
        let f9 = Field::standard(3, 2).unwrap();
        let a = SkewPoly::from_terms(&f9, [(-1, f9.generator()), (2, f9.one())]);
        let b = SkewPoly::from_terms(&f9, [(0, f9.one()), (1, f9.generator())]);
        let ab = &a * &b;
        assert_eq!(ab.max_exp(), Some(3));
        assert_eq!(ab.min_exp(), Some(-1));
    }

    #[test]
    fn adjoint_examples() {
        let f = f3();
        assert_eq!(SkewPoly::phi(&f, 2).adjoint(), SkewPoly::phi(&f, -2));
        let c = SkewPoly::constant(f.from_int(2));
        assert_eq!(c.adjoint(), c);
        let f9 = Field::standard(3, 2).unwrap();
        let a = f9.element(&[1, 1]);
        let g = SkewPoly::monomial(a.clone(), 1);
        let expect = SkewPoly::monomial(a.frobenius(-1), -1);
        assert_eq!(g.adjoint(), expect);
        assert_eq!(g.adjoint().adjoint(), g);
    }

    #[test]
    fn evaluation_examples() {
        let f9 = Field::standard(3, 2).unwrap();
        let x = f9.element(&[2, 1]);
        assert_eq!(SkewPoly::phi(&f9, 1).evaluate(&x).unwrap(), x.pow(3));
        let f = f3();
        let as_poly = SkewPoly::from_ints(&f, 0, &[-1, 1]);
        for a in 0..3 {
            assert!(as_poly.evaluate(&f.from_int(a)).unwrap().is_zero());
        }
        let root = SkewPoly::phi(&f, -1).evaluate(&x).unwrap();
        assert_eq!(root, x.pow(3));
        assert_eq!(root.pow(3), x);
    }

    #[test]
    fn evaluation_embeds_coefficients() {
        let f9 = Field::standard(3, 2).unwrap();
        let f81 = Field::standard(3, 4).unwrap();
        let g = SkewPoly::monomial(f9.generator(), 1);
        let x = f81.generator();
        let gx = g.evaluate(&x).unwrap();
        let t = crate::ff::embed(&f9.generator(), &f81).unwrap();
        assert_eq!(gx, &t * &x.pow(3));
        let f27 = Field::standard(3, 3).unwrap();
        assert!(g.evaluate(&f27.one()).is_err());
    }

    #[test]
    fn division_with_remainder() {
        let f9 = Field::standard(3, 2).unwrap();
        let a = SkewPoly::from_terms(&f9, [(-2, f9.generator()), (0, f9.one()), (3, f9.element(&[1, 2]))]);
        let b = SkewPoly::from_terms(&f9, [(0, f9.element(&[0, 2])), (1, f9.one())]);
        let (q, r) = a.right_divrem(&b);
        assert_eq!(&(&b * &q) + &r, a);
        assert!(r.span().unwrap_or(0) < b.span().unwrap());
        let (q, r) = a.left_divrem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.span().unwrap_or(0) < b.span().unwrap());
    }

    #[test]
    fn zero_has_no_exponents() {
        let z = SkewPoly::zero(&f3());
        assert_eq!(z.min_exp(), None);
        assert_eq!(z.span(), None);
        let f = SkewPoly::from_ints(&f3(), 0, &[1, 2]);
        assert!((&f - &f).is_zero());
    }
}
