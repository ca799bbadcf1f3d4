//! The biadditive pairing `B` between the component groups of `ker F` and
//! `ker F*`, its non-degeneracy certificate, and symmetry classes.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cyclo::exponent_sum_as_integer;
use crate::ff::{FFElem, FieldError, FpMatrix};
use crate::kernel::KernelData;
use crate::skew::{g_form, GForm, SkewMatrix, SkewPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("pairing value {value} is not in the prime field")]
    NotInPrimeField { value: String },
    #[error("kernel points live in different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An `F_p`-vector group with labelled elements and fixed coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelGroup {
    p: u32,
    labels: Vec<String>,
    #[serde(skip)]
    coords: Vec<Vec<u32>>,
    #[serde(skip)]
    by_coords: Vec<usize>,
}

impl LabelGroup {
    pub fn from_kernel(k: &KernelData) -> Self {
        let p = k.field().p();
        let labels = k
            .points()
            .iter()
            .map(|pt| format!("({})", pt.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        let coords: Vec<Vec<u32>> = (0..k.len()).map(|i| k.coords(i).to_vec()).collect();
        Self::from_coords(p, labels, coords)
    }

    /// `F_p^dim` with elements in counter order, labelled by coordinates.
    pub fn standard(p: u32, dim: usize) -> Self {
        let size = (p as usize).pow(dim as u32);
        let coords: Vec<Vec<u32>> = (0..size)
            .map(|mut i| {
                (0..dim)
                    .map(|_| {
                        let d = (i % p as usize) as u32;
                        i /= p as usize;
                        d
                    })
                    .collect()
            })
            .collect();
        let labels = coords.iter().map(|c| format!("{c:?}")).collect();
        Self::from_coords(p, labels, coords)
    }

    fn from_coords(p: u32, labels: Vec<String>, coords: Vec<Vec<u32>>) -> Self {
        let mut by_coords = vec![0; coords.len()];
        for (i, c) in coords.iter().enumerate() {
            by_coords[Self::key(p, c)] = i;
        }
        LabelGroup { p, labels, coords, by_coords }
    }

    fn key(p: u32, c: &[u32]) -> usize {
        c.iter().rev().fold(0usize, |acc, &d| acc * p as usize + (d % p) as usize)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `log_p` of the group order.
    pub fn dim(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self, i: usize) -> &[u32] {
        &self.coords[i]
    }

    pub fn index_of_coords(&self, c: &[u32]) -> usize {
        self.by_coords[Self::key(self.p, c)]
    }

    pub fn zero(&self) -> usize {
        self.by_coords[0]
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let p = self.p as usize;
        let key = self.coords[i].iter().zip(&self.coords[j]).rev().fold(0, |acc, (&a, &b)| acc * p + (a + b) as usize % p);
        self.by_coords[key]
    }

    pub fn neg(&self, i: usize) -> usize {
        let p = self.p as usize;
        let key = self.coords[i].iter().rev().fold(0, |acc, &a| acc * p + (p - a as usize) % p);
        self.by_coords[key]
    }
}

/// Values `B(b1, b2)` in `Z/p` for `b1` in the left group and `b2` in the
/// right group.
///
/// The table keeps the values on basis pairs (the Gram matrix). The full
/// table is stored when it was evaluated directly; otherwise values are the
/// bilinear extension of the Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingTable {
    p: u32,
    left: LabelGroup,
    right: LabelGroup,
    gram: Vec<Vec<u32>>,
    values: Option<Vec<Vec<u32>>>,
    /// Bilinear extension of `gram`, cached for fast lookups.
    #[serde(skip)]
    extended: Option<Extension>,
}

/// Cached values of the bilinear extension.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Extension {
    /// Every value, row-major.
    Full(Arc<[u8]>),
    /// `B(i, j) = lo[i][low(j)] + hi[i][high(j)]`, splitting the right
    /// coordinates into a low and a high half.
    Split { keys: Arc<[(u32, u32)]>, lo: Arc<[u8]>, hi: Arc<[u8]>, lo_size: usize, hi_size: usize },
}

/// Tables with at most this many entries are evaluated pair by pair.
pub const DIRECT_TABLE_CEILING: usize = 1 << 14;

/// Bilinear extensions with at most this many entries are cached in full;
/// larger ones are cached as two half tables of at most this many entries.
pub const EXTENDED_TABLE_CEILING: usize = 1 << 24;

struct MatrixForms {
    forms: Vec<(usize, usize, GForm)>,
}

impl MatrixForms {
    fn new(f: &SkewMatrix) -> Self {
        let mut forms = Vec::new();
        for j in 0..f.rows() {
            for i in 0..f.cols() {
                let e = f.get(j, i);
                if !e.is_zero() {
                    forms.push((j, i, g_form(e)));
                }
            }
        }
        MatrixForms { forms }
    }

    fn eval(&self, x: &[FFElem], y: &[FFElem]) -> Result<u32, PairingError> {
        let field = x.first().or(y.first()).map(|e| e.field().clone());
        let Some(field) = field else { return Ok(0) };
        let mut acc = field.zero();
        for (j, i, g) in &self.forms {
            acc += &g.eval(&x[*i], &y[*j])?;
        }
        acc.prime_value().ok_or_else(|| PairingError::NotInPrimeField { value: acc.to_string() })
    }
}

impl PairingTable {
    /// A table from explicit values on labelled groups `F_p^left_dim` and
    /// `F_p^right_dim`; used for hand-made controls.
    pub fn from_values(p: u32, left_dim: usize, right_dim: usize, values: Vec<Vec<u32>>) -> Self {
        let left = LabelGroup::standard(p, left_dim);
        let right = LabelGroup::standard(p, right_dim);
        assert_eq!(values.len(), left.len());
        assert!(values.iter().all(|r| r.len() == right.len()));
        let unit = |g: &LabelGroup, a: usize| {
            let mut c = vec![0; g.dim()];
            c[a] = 1;
            g.index_of_coords(&c)
        };
        let gram = (0..left_dim)
            .map(|a| (0..right_dim).map(|b| values[unit(&left, a)][unit(&right, b)] % p).collect())
            .collect();
        PairingTable { p, left, right, gram, values: Some(values), extended: None }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn left(&self) -> &LabelGroup {
        &self.left
    }

    pub fn right(&self) -> &LabelGroup {
        &self.right
    }

    pub fn gram(&self) -> &[Vec<u32>] {
        &self.gram
    }

    /// True when every value was evaluated directly.
    pub fn is_direct(&self) -> bool {
        self.values.is_some()
    }

    fn with_extension(self) -> Self {
        self.extend(EXTENDED_TABLE_CEILING)
    }

    fn extend(mut self, full_ceiling: usize) -> Self {
        let (n1, n2) = (self.left.len(), self.right.len());
        if self.values.is_some() || self.p > 255 {
            return self;
        }
        let p = self.p as u64;
        let r2 = self.right.dim();
        // w_i = coords(i) G, so that B(i, j) = w_i . coords(j)
        let forms: Vec<Vec<u64>> = (0..n1)
            .map(|i| {
                (0..r2)
                    .map(|b| self.left.coords(i).iter().zip(&self.gram).map(|(&x, row)| x as u64 * row[b] as u64).sum::<u64>() % p)
                    .collect()
            })
            .collect();
        let dot = |w: &[u64], c: &[u32]| (c.iter().zip(w).map(|(&y, &v)| y as u64 * v).sum::<u64>() % p) as u8;
        if n1.saturating_mul(n2) <= full_ceiling {
            let mut cache = Vec::with_capacity(n1 * n2);
            for w in &forms {
                cache.extend((0..n2).map(|j| dot(w, self.right.coords(j))));
            }
            self.extended = Some(Extension::Full(cache.into()));
            return self;
        }
        let split = r2 / 2;
        let (lo_size, hi_size) = ((p as usize).pow(split as u32), (p as usize).pow((r2 - split) as u32));
        if n1.saturating_mul(lo_size + hi_size) > EXTENDED_TABLE_CEILING {
            return self;
        }
        let digits = |mut k: usize, len: usize| -> Vec<u32> {
            (0..len)
                .map(|_| {
                    let d = (k % p as usize) as u32;
                    k /= p as usize;
                    d
                })
                .collect()
        };
        let lo_vecs: Vec<Vec<u32>> = (0..lo_size).map(|k| digits(k, split)).collect();
        let hi_vecs: Vec<Vec<u32>> = (0..hi_size).map(|k| digits(k, r2 - split)).collect();
        let (mut lo, mut hi) = (Vec::with_capacity(n1 * lo_size), Vec::with_capacity(n1 * hi_size));
        for w in &forms {
            lo.extend(lo_vecs.iter().map(|v| dot(&w[..split], v)));
            hi.extend(hi_vecs.iter().map(|v| dot(&w[split..], v)));
        }
        let key = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p as u32 + d);
        let keys: Vec<(u32, u32)> = (0..n2)
            .map(|j| {
                let c = self.right.coords(j);
                (key(&c[..split]), key(&c[split..]))
            })
            .collect();
        self.extended =
            Some(Extension::Split { keys: keys.into(), lo: lo.into(), hi: hi.into(), lo_size, hi_size });
        self
    }

    fn bilinear(&self, i: usize, j: usize) -> u32 {
        let (a, b) = (self.left.coords(i), self.right.coords(j));
        let p = self.p as u64;
        let mut acc = 0u64;
        for (x, row) in a.iter().zip(&self.gram) {
            if *x != 0 {
                for (y, g) in b.iter().zip(row) {
                    acc += *x as u64 * *y as u64 * *g as u64;
                }
            }
        }
        (acc % p) as u32
    }

    /// `B(left[i], right[j])`.
    pub fn value(&self, i: usize, j: usize) -> u32 {
        match &self.values {
            Some(v) => v[i][j],
            None => match &self.extended {
                Some(Extension::Full(e)) => e[i * self.right.len() + j] as u32,
                Some(Extension::Split { keys, lo, hi, lo_size, hi_size }) => {
                    let (a, b) = keys[j];
                    (lo[i * lo_size + a as usize] as u32 + hi[i * hi_size + b as usize] as u32) % self.p
                }
                None => self.bilinear(i, j),
            },
        }
    }

    /// Exact biadditivity test. A table is biadditive exactly when it is the
    /// bilinear extension of its Gram matrix, which is what is compared; the
    /// axis values `B(0, c)` and `B(b, 0)` are checked as well.
    pub fn is_biadditive(&self) -> bool {
        let (z1, z2) = (self.left.zero(), self.right.zero());
        (0..self.left.len()).all(|i| self.value(i, z2) == 0)
            && (0..self.right.len()).all(|j| self.value(z1, j) == 0)
            && match &self.values {
                Some(v) => (0..self.left.len()).all(|i| (0..self.right.len()).all(|j| v[i][j] == self.bilinear(i, j))),
                None => true,
            }
    }

    /// Biadditivity straight from the definition on every triple; cubic cost.
    pub fn is_biadditive_exhaustive(&self) -> bool {
        let p = self.p;
        let (n1, n2) = (self.left.len(), self.right.len());
        (0..n1).all(|a| {
            (0..n1).all(|b| {
                let ab = self.left.add(a, b);
                (0..n2).all(|c| self.value(ab, c) == (self.value(a, c) + self.value(b, c)) % p)
            })
        }) && (0..n2).all(|a| {
            (0..n2).all(|b| {
                let ab = self.right.add(a, b);
                (0..n1).all(|c| self.value(c, ab) == (self.value(c, a) + self.value(c, b)) % p)
            })
        })
    }

    /// Plain text grid with row labels from the left group.
    pub fn render_grid(&self) -> String {
        let mut out = String::new();
        let width = self.left.labels().iter().map(String::len).max().unwrap_or(0);
        for i in 0..self.left.len() {
            let _ = write!(out, "{:>width$} |", self.left.labels()[i]);
            for j in 0..self.right.len() {
                let _ = write!(out, " {}", self.value(i, j));
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates `B(b1, b2) = g_F(b1, b2)` on the kernels of `F` and `F*`.
pub fn pairing_table(f: &SkewMatrix, k1: &KernelData, k2: &KernelData) -> Result<PairingTable, PairingError> {
    if k1.field() != k2.field() {
        return Err(PairingError::FieldMismatch);
    }
    let p = f.field().p();
    let forms = MatrixForms::new(f);
    let left = LabelGroup::from_kernel(k1);
    let right = LabelGroup::from_kernel(k2);
    let gram = k1
        .fp_basis()
        .iter()
        .map(|&a| k2.fp_basis().iter().map(|&b| forms.eval(&k1.points()[a], &k2.points()[b])).collect())
        .collect::<Result<Vec<Vec<u32>>, _>>()?;
    let values = if k1.len() * k2.len() <= DIRECT_TABLE_CEILING {
        let rows = k1
            .points()
            .iter()
            .map(|x| k2.points().iter().map(|y| forms.eval(x, y)).collect())
            .collect::<Result<Vec<Vec<u32>>, _>>()?;
        Some(rows)
    } else {
        None
    };
    Ok(PairingTable { p, left, right, gram, values, extended: None }.with_extension())
}

/// Compares stored or extended values against `g_F` on seeded random pairs
/// of kernel points; returns the number of pairs checked, or the first pair
/// that disagrees.
pub fn spot_check(
    f: &SkewMatrix,
    k1: &KernelData,
    k2: &KernelData,
    t: &PairingTable,
    samples: usize,
) -> Result<Result<usize, (usize, usize)>, PairingError> {
    use rand::{Rng, SeedableRng};
    let forms = MatrixForms::new(f);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x7061_6972);
    for _ in 0..samples {
        let (i, j) = (rng.gen_range(0..k1.len()), rng.gen_range(0..k2.len()));
        if forms.eval(&k1.points()[i], &k2.points()[j])? != t.value(i, j) {
            return Ok(Err((i, j)));
        }
    }
    Ok(Ok(samples))
}

/// Outcome of the non-degeneracy checks; each route is computed on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NondegeneracyCertificate {
    /// Every nonzero element on either side pairs nontrivially with something.
    pub elementwise: bool,
    /// `C C* = |K2| I` and `C* C = |K1| I` for `C = (psi(B))`; skipped for
    /// large tables.
    pub character: Option<bool>,
    /// The Gram matrix is square and invertible over `F_p`.
    pub gram: bool,
    pub nondegenerate: bool,
    pub routes_agree: bool,
}

/// Tables up to this many `|K1|^2 |K2| + |K1| |K2|^2` steps get the character route.
pub const CHARACTER_CHECK_CEILING: usize = 1 << 26;

fn character_route(t: &PairingTable) -> bool {
    let p = t.p as usize;
    let (n1, n2) = (t.left.len(), t.right.len());
    let rows: Vec<Vec<u32>> = (0..n1).map(|i| (0..n2).map(|j| t.value(i, j)).collect()).collect();
    let gram_check = |n_outer: usize, n_inner: usize, get: &dyn Fn(usize, usize) -> u32| {
        let mut counts = vec![0i64; p];
        (0..n_outer).all(|i| {
            (0..n_outer).all(|i2| {
                counts.iter_mut().for_each(|c| *c = 0);
                for j in 0..n_inner {
                    counts[((get(i, j) + p as u32 - get(i2, j)) % p as u32) as usize] += 1;
                }
                let expect = if i == i2 { n_inner as i64 } else { 0 };
                exponent_sum_as_integer(&counts) == Some(expect)
            })
        })
    };
    gram_check(n1, n2, &|i, j| rows[i][j]) && gram_check(n2, n1, &|j, i| rows[i][j])
}

/// Checks that `B` is non-degenerate by every available route.
pub fn check_nondegenerate(t: &PairingTable) -> NondegeneracyCertificate {
    let (n1, n2) = (t.left.len(), t.right.len());
    let elementwise = (0..n1).all(|i| i == t.left.zero() || (0..n2).any(|j| t.value(i, j) != 0))
        && (0..n2).all(|j| j == t.right.zero() || (0..n1).any(|i| t.value(i, j) != 0));
    let work = n1.saturating_mul(n1).saturating_mul(n2).saturating_add(n2.saturating_mul(n2).saturating_mul(n1));
    let character = (work <= CHARACTER_CHECK_CEILING).then(|| character_route(t));
    let (r1, r2) = (t.left.dim(), t.right.dim());
    let gram = r1 == r2 && {
        let rows: Vec<Vec<i64>> = t.gram.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
        r1 == 0 || FpMatrix::from_rows(t.p, &rows).rank() == r1
    };
    let routes_agree = elementwise == gram && character.is_none_or(|c| c == elementwise);
    NondegeneracyCertificate { elementwise, character, gram, nondegenerate: elementwise && routes_agree, routes_agree }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    SkewSymmetric,
    Neither,
}

/// Symmetry class of a square skew matrix under `F -> F*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub class: Symmetry,
    /// In characteristic 2, `F = -F*` is the same condition as `F = F*`;
    /// the class is reported as symmetric and this flag is set.
    pub formal_skew_in_char_2: bool,
}

pub fn classify_matrix_symmetry(f: &SkewMatrix) -> SymmetryReport {
    let adj = f.adjoint_transpose();
    if f.rows() != f.cols() {
        return SymmetryReport { class: Symmetry::Neither, formal_skew_in_char_2: false };
    }
    let neg_adj =
        SkewMatrix::from_rows(f.field(), (0..f.rows()).map(|i| (0..f.cols()).map(|j| -adj.get(i, j)).collect()).collect());
    let char2 = f.field().p() == 2;
    let class = if &adj == f {
        Symmetry::Symmetric
    } else if &neg_adj == f {
        Symmetry::SkewSymmetric
    } else {
        Symmetry::Neither
    };
    SymmetryReport { class, formal_skew_in_char_2: char2 && class == Symmetry::Symmetric }
}

/// Symmetry class of `f` for `U1 = U2 = G_a`.
pub fn classify_symmetry(f: &SkewPoly) -> SymmetryReport {
    classify_matrix_symmetry(&SkewMatrix::single(f.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::kernel::{joint_kernels, KernelOptions};
    use crate::skew::parse_matrix;

    fn table(p: u32, text: &str) -> PairingTable {
        let field = Field::prime(p).unwrap();
        let m = parse_matrix(&field, text).unwrap();
        let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
        pairing_table(&m, &k1, &k2).unwrap()
    }

    #[test]
    fn artin_schreier_pairing_is_product() {
        let t = table(3, "[F - 1]");
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(t.value(a, b), (a * b % 3) as u32);
            }
        }
        assert!(t.is_biadditive() && t.is_biadditive_exhaustive());
        assert!(check_nondegenerate(&t).nondegenerate);
    }

    #[test]
    fn gram_extension_agrees_with_direct_values() {
        let field = Field::prime(2).unwrap();
        let m = parse_matrix(&field, "[F^3 + F + 1, F; 0, F^4 - 1]").unwrap();
        let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
        let t = pairing_table(&m, &k1, &k2).unwrap();
        assert!(t.is_direct() && t.is_biadditive());
        let stripped = PairingTable { values: None, ..t.clone() };
        let cached = stripped.clone().with_extension();
        assert!(matches!(cached.extended, Some(Extension::Full(_))));
        let split = stripped.clone().extend(0);
        assert!(matches!(split.extended, Some(Extension::Split { .. })));
        for i in 0..k1.len() {
            for j in 0..k2.len() {
                assert_eq!(stripped.value(i, j), t.value(i, j));
                assert_eq!(cached.value(i, j), t.value(i, j));
                assert_eq!(split.value(i, j), t.value(i, j));
            }
        }
        assert_eq!(spot_check(&m, &k1, &k2, &stripped, 200).unwrap(), Ok(200));
    }

    #[test]
    fn trivial_groups() {
        let t = table(5, "[F^3]");
        assert_eq!((t.left().len(), t.right().len(), t.value(0, 0)), (1, 1, 0));
        let c = check_nondegenerate(&t);
        assert!(c.nondegenerate && c.routes_agree);
    }

    #[test]
    fn diagonal_pair_over_f2() {
        let t = table(2, "[F - 1, 0; 0, F - 1]");
        // labels are (x1, x2) with x in F_2; B = x1 y1 + x2 y2
        let parse = |s: &str| -> Vec<u32> {
            s.trim_matches(|c| c == '(' || c == ')').split(", ").map(|v| v.parse().unwrap()).collect()
        };
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (parse(&t.left().labels()[i]), parse(&t.right().labels()[j]));
                assert_eq!(t.value(i, j), (x[0] * y[0] + x[1] * y[1]) % 2);
            }
        }
    }

    #[test]
    fn degenerate_control_fails() {
        let t = PairingTable::from_values(3, 1, 1, vec![vec![0; 3]; 3]);
        let c = check_nondegenerate(&t);
        assert!(!c.nondegenerate && !c.elementwise && c.character == Some(false) && !c.gram);
        assert!(c.routes_agree);
    }

    #[test]
    fn symmetry_examples() {
        let f3 = Field::prime(3).unwrap();
        let sym = |v: &[i64]| classify_symmetry(&SkewPoly::from_ints(&f3, -1, v)).class;
        assert_eq!(sym(&[1, 0, 1]), Symmetry::Symmetric);
        assert_eq!(sym(&[-1, 0, 1]), Symmetry::SkewSymmetric);
        assert_eq!(classify_symmetry(&SkewPoly::from_ints(&f3, 0, &[-1, 1])).class, Symmetry::Neither);
        let f2 = Field::prime(2).unwrap();
        let r = classify_symmetry(&SkewPoly::from_ints(&f2, -1, &[1, 0, 1]));
        assert!(r.formal_skew_in_char_2);
    }
}
