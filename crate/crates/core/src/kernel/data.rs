use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{KernelError, KernelOptions};
use crate::ff::{FFElem, Field};

/// Reduced echelon rows over `F_p`, for incremental independence tests.
pub(crate) struct Echelon {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(p: u32) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        let p = self.p as u64;
        for (pivot, row) in &self.rows {
            let c = v[*pivot] as u64;
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p - c) * r as u64) % p) as u32;
                }
            }
        }
    }

    /// Adds `v` if it is independent of the rows so far.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pivot) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p as u64;
        let inv = crate::ff::fp_poly::inv_mod(w[pivot], self.p) as u64;
        for x in w.iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot] as u64;
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = ((*x as u64 + (p - c) * r as u64) % p) as u32;
                }
            }
        }
        self.rows.push((pivot, w));
        true
    }
}

fn add_into(acc: &mut [u32], v: &[u32], p: u32) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a += b;
        if *a >= p {
            *a -= p;
        }
    }
}

/// Calls `visit(digits, point)` for every `F_p`-combination of `gens`, in
/// base-`p` counter order with the first digit least significant.
fn for_each_combination(p: u32, width: usize, gens: &[Vec<u32>], mut visit: impl FnMut(&[u32], &[u32])) {
    let mut digits = vec![0u32; gens.len()];
    let mut point = vec![0u32; width];
    loop {
        visit(&digits, &point);
        let mut i = 0;
        loop {
            if i == gens.len() {
                return;
            }
            add_into(&mut point, &gens[i], p);
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// A finite group of kernel points in a chosen field, with its connected
/// dimension and a labelled `F_p`-basis.
///
/// Points are sorted lexicographically by their coordinates, so index `i` is
/// a stable label. Each point also carries its coordinates in `fp_basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelData {
    ambient_dim: usize,
    connected_dim: usize,
    field: Field,
    points: Vec<Vec<FFElem>>,
    coords: Vec<Vec<u32>>,
    /// Point index by the base-`p` number formed from its coordinates.
    by_coords: Vec<usize>,
    fp_basis: Vec<usize>,
}

impl KernelData {
    /// Builds the group spanned by `F_p`-independent generators.
    pub fn from_generators(
        field: &Field,
        ambient_dim: usize,
        connected_dim: usize,
        gens: Vec<Vec<FFElem>>,
        opts: &KernelOptions,
    ) -> Result<KernelData, KernelError> {
        let p = field.p();
        let d = field.n();
        let width = ambient_dim * d;
        let log_size = gens.len() as u32;
        let size = (p as u64).checked_pow(log_size).filter(|&s| s <= opts.max_points as u64);
        let Some(size) = size else {
            return Err(KernelError::PointCeilingExceeded { p, log_size, ceiling: opts.max_points });
        };
        let flat: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), ambient_dim);
                g.iter().flat_map(|e| e.coeffs().iter().copied()).collect()
            })
            .collect();
        let mut check = Echelon::new(p);
        assert!(flat.iter().all(|v| check.insert(v)), "kernel generators are dependent");

        let mut sorted: Vec<Vec<u32>> = Vec::with_capacity(size as usize);
        for_each_combination(p, width, &flat, |_, pt| sorted.push(pt.to_vec()));
        sorted.sort_unstable();

        let mut ech = Echelon::new(p);
        let mut fp_basis = Vec::new();
        for (i, pt) in sorted.iter().enumerate() {
            if ech.len() == flat.len() {
                break;
            }
            if ech.insert(pt) {
                fp_basis.push(i);
            }
        }
        let basis_vecs: Vec<Vec<u32>> = fp_basis.iter().map(|&i| sorted[i].clone()).collect();
        let mut coords = vec![Vec::new(); sorted.len()];
        let mut by_coords = Vec::with_capacity(sorted.len());
        for_each_combination(p, width, &basis_vecs, |digits, pt| {
            let idx = sorted.binary_search_by(|q| q.as_slice().cmp(pt)).expect("point outside the group");
            coords[idx] = digits.to_vec();
            by_coords.push(idx);
        });
        let points = sorted
            .iter()
            .map(|v| v.chunks(d.max(1)).take(ambient_dim).map(|c| field.from_coeffs(c)).collect())
            .collect();
        Ok(KernelData { ambient_dim, connected_dim, field: field.clone(), points, coords, by_coords, fp_basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn connected_dim(&self) -> usize {
        self.connected_dim
    }

    /// The field the points are defined over.
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[Vec<FFElem>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `log_p` of the number of points.
    pub fn log_size(&self) -> usize {
        self.fp_basis.len()
    }

    /// Indices of the basis points.
    pub fn fp_basis(&self) -> &[usize] {
        &self.fp_basis
    }

    /// Coordinates of point `i` in the basis.
    pub fn coords(&self, i: usize) -> &[u32] {
        &self.coords[i]
    }

    /// Index of the point with the given basis coordinates (reduced mod `p`).
    pub fn index_of_coords(&self, c: &[u32]) -> usize {
        let p = self.field.p() as usize;
        let key = c.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize % p);
        self.by_coords[key]
    }

    /// Index of a point, if it belongs to the group.
    pub fn index_of(&self, point: &[FFElem]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(point)).ok()
    }

    /// Index of the sum of points `i` and `j`.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        let s: Vec<FFElem> = self.points[i].iter().zip(&self.points[j]).map(|(a, b)| a + b).collect();
        self.index_of(&s).expect("point group is not closed under addition")
    }

    /// Checks that the points form the `F_p`-span of the basis.
    ///
    /// A finite set containing zero and closed under adding each basis point
    /// is a union of cosets of the span, so with `p^dim` elements it is the span.
    pub fn is_closed(&self) -> bool {
        let zero = vec![self.field.zero(); self.ambient_dim];
        let expected = (self.field.p() as u128).checked_pow(self.fp_basis.len() as u32);
        expected == Some(self.len() as u128)
            && self.index_of(&zero).is_some()
            && self.fp_basis.iter().all(|&b| {
                let v = &self.points[b];
                self.points.iter().all(|pt| {
                    let s: Vec<FFElem> = pt.iter().zip(v).map(|(a, c)| a + c).collect();
                    self.index_of(&s).is_some()
                })
            })
    }

    /// Re-expresses the points in an extension field.
    pub fn embed_into(&self, target: &Field) -> Result<KernelData, KernelError> {
        if target == &self.field {
            return Ok(self.clone());
        }
        let emb = crate::ff::embedding(&self.field, target)?;
        let gens = self
            .fp_basis
            .iter()
            .map(|&i| self.points[i].iter().map(|e| emb.apply(e)).collect())
            .collect();
        let opts = KernelOptions { max_points: usize::MAX, ..KernelOptions::default() };
        KernelData::from_generators(target, self.ambient_dim, self.connected_dim, gens, &opts)
    }
}

fn point_strings(pt: &[FFElem]) -> Vec<String> {
    pt.iter().map(ToString::to_string).collect()
}

/// Points are listed only up to this many; larger groups list the basis only.
pub const MAX_LISTED_POINTS: usize = 4096;

impl Serialize for KernelData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KernelData", 6)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("connected_dim", &self.connected_dim)?;
        st.serialize_field("field", &self.field.spec_string())?;
        st.serialize_field("log_size", &self.log_size())?;
        let points: Option<Vec<Vec<String>>> =
            (self.len() <= MAX_LISTED_POINTS).then(|| self.points.iter().map(|p| point_strings(p)).collect());
        st.serialize_field("points", &points)?;
        let basis: Vec<Vec<String>> = self.fp_basis.iter().map(|&i| point_strings(&self.points[i])).collect();
        st.serialize_field("fp_basis", &basis)?;
        st.end()
    }
}
