use std::fmt;

use super::SkewPoly;
use crate::ff::{FFElem, Field, FieldError};

/// An `s x r` matrix of skew polynomials, read as the additive map
/// `G_a^r -> G_a^s`, `x -> (sum_i F(j,i)(x_i))_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<SkewPoly>,
}

impl SkewMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        SkewMatrix { field: field.clone(), rows, cols, entries: vec![SkewPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, SkewPoly::one(field));
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<SkewPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged skew matrix");
            for e in row {
                assert!(e.field() == field);
                entries.push(e);
            }
        }
        SkewMatrix { field: field.clone(), rows: r, cols: c, entries }
    }

    pub fn single(f: SkewPoly) -> Self {
        let field = f.field().clone();
        Self::from_rows(&field, vec![vec![f]])
    }

    pub fn diagonal(field: &Field, diag: Vec<SkewPoly>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, f) in diag.into_iter().enumerate() {
            m.set(i, i, f);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of rows `s` (the target dimension).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns `r` (the source dimension).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SkewPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SkewPoly) {
        assert!(v.field() == &self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[SkewPoly] {
        &self.entries
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Entrywise adjoint of the transpose; the matrix of `F*`.
    pub fn adjoint_transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).adjoint());
            }
        }
        out
    }

    pub fn mul(&self, other: &SkewMatrix) -> SkewMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = SkewPoly::zero(&self.field);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// True when every off-diagonal entry vanishes (rectangular shapes allowed).
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SkewPoly::is_zero)
    }

    /// Applies the map to a point of `G_a^cols`.
    pub fn apply(&self, x: &[FFElem]) -> Result<Vec<FFElem>, FieldError> {
        assert_eq!(x.len(), self.cols);
        let target = x.first().map(|e| e.field().clone()).unwrap_or_else(|| self.field.clone());
        (0..self.rows)
            .map(|j| {
                let mut acc = target.zero();
                for (i, xi) in x.iter().enumerate() {
                    let e = self.get(j, i);
                    if !e.is_zero() {
                        acc += &e.evaluate(xi)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }
}

impl fmt::Debug for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewMatrix({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_transpose_of_column() {
        let f = Field::prime(3).unwrap();
        let col = SkewMatrix::from_rows(
            &f,
            vec![vec![SkewPoly::from_ints(&f, 0, &[-1, 1])], vec![SkewPoly::zero(&f)]],
        );
        let adj = col.adjoint_transpose();
        assert_eq!((adj.rows(), adj.cols()), (1, 2));
        assert_eq!(adj.get(0, 0), &SkewPoly::from_ints(&f, -1, &[1, -1]));
        assert!(adj.get(0, 1).is_zero());
        assert_eq!(adj.adjoint_transpose(), col);
    }

    #[test]
    fn apply_is_additive_and_composes() {
        let f9 = Field::standard(3, 2).unwrap();
        let a = SkewMatrix::from_rows(
            &f9,
            vec![
                vec![SkewPoly::phi(&f9, 1), SkewPoly::monomial(f9.generator(), -1)],
                vec![SkewPoly::one(&f9), SkewPoly::zero(&f9)],
            ],
        );
        let b = SkewMatrix::diagonal(&f9, vec![SkewPoly::phi(&f9, 2), SkewPoly::from_ints(&f9, 0, &[1, 1])]);
        let big = Field::standard(3, 4).unwrap();
        let x = vec![big.element(&[1, 2, 0, 1]), big.element(&[0, 1, 1])];
        let y = vec![big.element(&[2, 0, 1]), big.element(&[1])];
        let xy: Vec<FFElem> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
        let lhs = a.apply(&xy).unwrap();
        let rhs: Vec<FFElem> = a.apply(&x).unwrap().iter().zip(a.apply(&y).unwrap()).map(|(u, v)| u + &v).collect();
        assert_eq!(lhs, rhs);
        assert_eq!(a.mul(&b).apply(&x).unwrap(), a.apply(&b.apply(&x).unwrap()).unwrap());
    }
}
