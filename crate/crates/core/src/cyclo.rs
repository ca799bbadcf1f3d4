//! Exact arithmetic in the cyclotomic field `Q(zeta_p)` and matrices over it.
//!
//! Elements are stored in the basis `1, zeta, ..., zeta^{p-2}`; internally
//! products are taken modulo `x^p - 1` and folded back with
//! `zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    p: u32,
    c: Vec<BigRational>,
}

fn basis_len(p: u32) -> usize {
    (p as usize - 1).max(1)
}

impl CycloElem {
    pub fn zero(p: u32) -> Self {
        CycloElem { p, c: vec![BigRational::zero(); basis_len(p)] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, BigRational::one())
    }

    pub fn from_int(p: u32, v: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(p: u32, v: BigRational) -> Self {
        let mut z = Self::zero(p);
        z.c[0] = v;
        z
    }

    /// `zeta^k`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut full = vec![BigRational::zero(); p as usize];
        full[k.rem_euclid(p as i64) as usize] = BigRational::one();
        Self::from_full(p, full)
    }

    /// `sum_a counts[a] * zeta^a` for a histogram indexed by residues mod `p`.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let full = counts.iter().map(|&n| BigRational::from_integer(BigInt::from(n))).collect();
        Self::from_full(p, full)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// The value if this element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.c[1..].iter().all(Zero::is_zero).then_some(&self.c[0])
    }

    fn to_full(&self) -> Vec<BigRational> {
        let mut full = vec![BigRational::zero(); self.p as usize];
        if self.p == 2 {
            full[0] = self.c[0].clone();
        } else {
            for (i, v) in self.c.iter().enumerate() {
                full[i] = v.clone();
            }
        }
        full
    }

    fn from_full(p: u32, mut full: Vec<BigRational>) -> Self {
        let top = full.pop().expect("p >= 2");
        if !top.is_zero() {
            for v in full.iter_mut() {
                *v -= &top;
            }
        }
        CycloElem { p, c: full }
    }

    /// Galois automorphism `zeta -> zeta^u`, `u` prime to `p`.
    pub fn galois(&self, u: i64) -> Self {
        let p = self.p as i64;
        assert!(u.rem_euclid(p) != 0, "galois exponent must be a unit");
        let src = self.to_full();
        let mut out = vec![BigRational::zero(); self.p as usize];
        for (i, v) in src.into_iter().enumerate() {
            if !v.is_zero() {
                out[(i as i64 * u).rem_euclid(p) as usize] += v;
            }
        }
        Self::from_full(self.p, out)
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Multiplication by `zeta^k` (a cyclic shift).
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let p = self.p as usize;
        let k = k.rem_euclid(p as i64) as usize;
        let src = self.to_full();
        let mut out = vec![BigRational::zero(); p];
        for (i, v) in src.into_iter().enumerate() {
            out[(i + k) % p] = v;
        }
        Self::from_full(self.p, out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        CycloElem { p: self.p, c: self.c.iter().map(|v| v * s).collect() }
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for u in 2..self.p as i64 {
            acc = &acc * &self.galois(u);
        }
        acc.as_rational().expect("norm is rational").clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut others = Self::one(self.p);
        for u in 2..self.p as i64 {
            others = &others * &self.galois(u);
        }
        let n = (&others * self).as_rational().expect("norm is rational").clone();
        Some(others.scale(&n.recip()))
    }
}

/// `psi(a) = zeta_p^a`.
pub fn psi(p: u32, a: i64) -> CycloElem {
    CycloElem::zeta_pow(p, a)
}

/// The integer `sum_a counts[a] * zeta^a` if that sum is rational.
///
/// In the basis `1, ..., zeta^{p-2}` the sum has coordinates
/// `counts[i] - counts[p-1]`, so it is rational exactly when the counts for
/// `a = 1, ..., p-1` agree. Same answer as [`CycloElem::from_exponent_counts`]
/// without building the element.
pub fn exponent_sum_as_integer(counts: &[i64]) -> Option<i64> {
    let last = *counts.last()?;
    counts[1..].iter().all(|&c| c == last).then(|| counts[0] - last)
}

/// Algebraic conjugation `zeta -> zeta^{-1}`.
pub fn conj(z: &CycloElem) -> CycloElem {
    z.conj()
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.p, rhs.p);
        CycloElem { p: self.p, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.p, rhs.p);
        CycloElem { p: self.p, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem { p: self.p, c: self.c.iter().map(|a| -a).collect() }
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        assert_eq!(self.p, rhs.p);
        let p = self.p as usize;
        if p == 2 {
            return CycloElem { p: 2, c: vec![&self.c[0] * &rhs.c[0]] };
        }
        let mut full = vec![BigRational::zero(); p];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        CycloElem::from_full(self.p, full)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, v) in self.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let coeff = if v.is_integer() { v.to_integer().to_string() } else { v.to_string() };
            parts.push(match i {
                0 => coeff,
                1 => format!("{coeff}*z"),
                _ => format!("{coeff}*z^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem[p={}]({})", self.p, self)
    }
}

fn rational_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl Serialize for CycloElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CycloElem", 2)?;
        st.serialize_field("p", &self.p)?;
        let coeffs: Vec<String> = self.c.iter().map(rational_string).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Dense matrix over `Q(zeta_p)`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<CycloElem>,
}

impl CycloMatrix {
    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycloElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CycloMatrix { p, rows, cols, data }
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self::from_fn(p, rows, cols, |_, _| CycloElem::zero(p))
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Self::from_fn(p, n, n, |i, j| if i == j { CycloElem::one(p) } else { CycloElem::zero(p) })
    }

    pub fn diagonal(p: u32, entries: &[CycloElem]) -> Self {
        let n = entries.len();
        Self::from_fn(p, n, n, |i, j| if i == j { entries[i].clone() } else { CycloElem::zero(p) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        CycloMatrix { p: self.p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.scale(s)).collect() }
    }

    pub fn mul(&self, other: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        Self::from_fn(self.p, self.rows, other.cols, |i, j| {
            let mut acc = CycloElem::zero(self.p);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, j);
                if b.is_zero() {
                    continue;
                }
                acc = &acc + &(a * b);
            }
            acc
        })
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    /// True when the matrix equals `s * I`.
    pub fn is_scalar(&self, s: &CycloElem) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j) == s } else { self.get(i, j).is_zero() })
            })
    }

    pub fn trace(&self) -> CycloElem {
        let mut acc = CycloElem::zero(self.p);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn to_rows(&self) -> Vec<Vec<CycloElem>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn mat_inverse(m: &CycloMatrix) -> Result<CycloMatrix, CycloError> {
    if m.rows != m.cols {
        return Err(CycloError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let p = m.p;
    let mut a = m.clone();
    let mut inv = CycloMatrix::identity(p, n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(CycloError::Singular)?;
        if piv != col {
            for j in 0..n {
                a.data.swap(piv * n + j, col * n + j);
                inv.data.swap(piv * n + j, col * n + j);
            }
        }
        let pinv = a.get(col, col).inv().expect("nonzero pivot");
        for j in 0..n {
            let v = a.get(col, j) * &pinv;
            a.set(col, j, v);
            let w = inv.get(col, j) * &pinv;
            inv.set(col, j, w);
        }
        for r in 0..n {
            if r == col || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for j in 0..n {
                let v = a.get(r, j) - &(&factor * a.get(col, j));
                a.set(r, j, v);
                let w = inv.get(r, j) - &(&factor * inv.get(col, j));
                inv.set(r, j, w);
            }
        }
    }
    Ok(inv)
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycloMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|z| z.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for CycloMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CycloMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<Vec<Vec<String>>> = self
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|z| z.c.iter().map(rational_string).collect()).collect())
            .collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Float rendering for display only: `(re, im)` of the complex embedding
/// `zeta -> exp(2 pi i / p)`.
pub fn approx_complex(z: &CycloElem) -> (f64, f64) {
    use num_traits::ToPrimitive;
    let p = z.p as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for (k, v) in z.c.iter().enumerate() {
        let x = v.to_f64().unwrap_or(f64::NAN);
        let ang = if z.p == 2 { 0.0 } else { 2.0 * std::f64::consts::PI * k as f64 / p };
        re += x * ang.cos();
        im += x * ang.sin();
    }
    if z.p == 2 {
        im = 0.0;
    }
    (re, im)
}
