use serde::Serialize;

use crate::cyclo::{CycloElem, CycloMatrix};

/// A monomial matrix over `Z[zeta_p]`: column `j` has the single entry
/// `zeta^phase[j]` in row `perm[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialMatrix {
    p: u32,
    perm: Vec<usize>,
    phase: Vec<u32>,
}

impl MonomialMatrix {
    pub fn new(p: u32, perm: Vec<usize>, phase: Vec<u32>) -> Self {
        assert_eq!(perm.len(), phase.len());
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            assert!(!std::mem::replace(&mut seen[i], true), "not a permutation");
        }
        let phase = phase.into_iter().map(|a| a % p).collect();
        MonomialMatrix { p, perm, phase }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        MonomialMatrix { p, perm: (0..n).collect(), phase: vec![0; n] }
    }

    /// `zeta^a I`.
    pub fn scalar(p: u32, n: usize, a: u32) -> Self {
        MonomialMatrix { p, perm: (0..n).collect(), phase: vec![a % p; n] }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phase(&self) -> &[u32] {
        &self.phase
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.dim(), other.dim());
        let p = self.p;
        let (perm, phase) = other
            .perm
            .iter()
            .zip(&other.phase)
            .map(|(&k, &b)| (self.perm[k], (self.phase[k] + b) % p))
            .unzip();
        MonomialMatrix { p, perm, phase }
    }

    pub fn transpose(&self) -> MonomialMatrix {
        let n = self.dim();
        let mut perm = vec![0; n];
        let mut phase = vec![0; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phase[self.perm[j]] = self.phase[j];
        }
        MonomialMatrix { p: self.p, perm, phase }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let t = self.transpose();
        let p = self.p;
        MonomialMatrix { p, perm: t.perm, phase: t.phase.iter().map(|a| (p - a) % p).collect() }
    }

    /// Raises every entry to the power `u` (the Galois twist `zeta -> zeta^u`).
    pub fn galois(&self, u: u32) -> MonomialMatrix {
        let p = self.p as u64;
        let phase = self.phase.iter().map(|&a| (a as u64 * u as u64 % p) as u32).collect();
        MonomialMatrix { p: self.p, perm: self.perm.clone(), phase }
    }

    pub fn kron(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let m = other.dim();
        let mut perm = Vec::with_capacity(self.dim() * m);
        let mut phase = Vec::with_capacity(self.dim() * m);
        for j in 0..self.dim() {
            for k in 0..m {
                perm.push(self.perm[j] * m + other.perm[k]);
                phase.push((self.phase[j] + other.phase[k]) % self.p);
            }
        }
        MonomialMatrix { p: self.p, perm, phase }
    }

    pub fn direct_sum(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let n = self.dim();
        let mut perm = self.perm.clone();
        perm.extend(other.perm.iter().map(|&i| i + n));
        let mut phase = self.phase.clone();
        phase.extend(&other.phase);
        MonomialMatrix { p: self.p, perm, phase }
    }

    /// Histogram of the exponents on the diagonal: the trace is
    /// `sum_a counts[a] zeta^a`.
    pub fn trace_counts(&self) -> Vec<i64> {
        let mut counts = vec![0i64; self.p as usize];
        for (j, (&i, &a)) in self.perm.iter().zip(&self.phase).enumerate() {
            if i == j {
                counts[a as usize] += 1;
            }
        }
        counts
    }

    pub fn trace(&self) -> CycloElem {
        CycloElem::from_exponent_counts(self.p, &self.trace_counts())
    }

    pub fn to_cyclo(&self) -> CycloMatrix {
        let n = self.dim();
        let mut m = CycloMatrix::zeros(self.p, n, n);
        for j in 0..n {
            m.set(self.perm[j], j, CycloElem::zeta_pow(self.p, self.phase[j] as i64));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_dense() {
        let a = MonomialMatrix::new(3, vec![1, 2, 0], vec![1, 0, 2]);
        let b = MonomialMatrix::new(3, vec![0, 2, 1], vec![2, 2, 1]);
        assert_eq!(a.mul(&b).to_cyclo(), a.to_cyclo().mul(&b.to_cyclo()));
        assert_eq!(a.transpose().to_cyclo(), a.to_cyclo().transpose());
        assert!(a.mul(&a.inverse()).to_cyclo().is_identity());
        let k = a.kron(&b);
        assert_eq!(k.trace(), &a.trace() * &b.trace());
    }
}
