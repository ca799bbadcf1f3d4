use std::fmt;

use super::fp_poly::inv_mod;

/// Dense matrix over the prime field `F_p`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v.rem_euclid(p as i64) as u32);
            }
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let s: u64 = row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p as u64;
        let mut out = FpMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            let mut acc = vec![0u64; other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot += a * other.get(k, j) as u64;
                }
            }
            for (j, s) in acc.into_iter().enumerate() {
                out.set(i, j, (s % p) as u32);
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, row * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(row, col), self.p) as u64;
            for j in 0..m.cols {
                let v = m.get(row, j) as u64 * inv % p;
                m.set(row, j, v as u32);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col) as u64;
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let sub = factor * m.get(row, j) as u64 % p;
                    let v = (m.get(r, j) as u64 + p - sub) % p;
                    m.set(r, j, v as u32);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`: one vector per free column, in increasing
    /// column order, with a 1 in that free position.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (ri, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - r.get(ri, fc)) % p;
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Basis of the kernel of `m`; see [`FpMatrix::kernel`].
pub fn fp_kernel(m: &FpMatrix) -> Vec<Vec<u32>> {
    m.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(fp_kernel(&FpMatrix::identity(3, 3)).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = fp_kernel(&FpMatrix::zeros(3, 2, 2));
        assert_eq!(k, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn rank_one_kernel_over_f5() {
        // brute force: the solutions of x + 2y = 0 over F_5 are the multiples of (3,1)
        let m = FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]);
        let mut sols = Vec::new();
        for x in 0..5u32 {
            for y in 0..5u32 {
                if m.mul_vec(&[x, y]).iter().all(|&c| c == 0) {
                    sols.push((x, y));
                }
            }
        }
        assert_eq!(sols.len(), 5);
        assert!(sols.contains(&(3, 1)));
        assert_eq!(fp_kernel(&m), vec![vec![3, 1]]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FpMatrix::from_rows(7, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(7, 3));
        assert!(FpMatrix::from_rows(3, &[vec![1, 2], vec![2, 1]]).inverse().is_none());
    }
}
