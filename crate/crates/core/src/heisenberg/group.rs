use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{HeisenbergError, EXHAUSTIVE_CEILING, SAMPLED_CHECKS};
use crate::ff::FpMatrix;
use crate::kernel::KernelData;
use crate::pairing::{LabelGroup, PairingTable};

/// An element `(b1, b2, a)`: indices into the two label groups and a
/// residue mod `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Element {
    pub b1: usize,
    pub b2: usize,
    pub a: u32,
}

/// The central extension of `K1 x K2` by `Z/p` with cocycle `B`:
/// `(b1, b2, a) * (b1', b2', a') = (b1 + b1', b2 + b2', a + a' + B(b1, b2'))`.
///
/// Cheap to clone; the pairing table is shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergGroup {
    table: Arc<PairingTable>,
}

/// Result of checking the group axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupAxioms {
    pub associative: bool,
    pub identity: bool,
    pub inverses: bool,
    /// Every triple (or pair, for the inverse and identity laws) was checked.
    pub exhaustive: bool,
    pub checked: u64,
    pub center_order: u64,
    /// The center is exactly the central `Z/p`.
    pub center_is_a: bool,
}

impl GroupAxioms {
    pub fn holds(&self) -> bool {
        self.associative && self.identity && self.inverses
    }
}

/// Builds the group of a pairing computed from the kernels `k1` and `k2`.
pub fn build_group(k1: &KernelData, k2: &KernelData, b: &PairingTable) -> Result<HeisenbergGroup, HeisenbergError> {
    if &LabelGroup::from_kernel(k1) != b.left() || &LabelGroup::from_kernel(k2) != b.right() {
        return Err(HeisenbergError::LabelMismatch);
    }
    Ok(HeisenbergGroup::from_table(b.clone()))
}

impl HeisenbergGroup {
    pub fn from_table(table: PairingTable) -> Self {
        HeisenbergGroup { table: Arc::new(table) }
    }

    pub fn table(&self) -> &PairingTable {
        &self.table
    }

    pub fn p(&self) -> u32 {
        self.table.p()
    }

    pub fn k1(&self) -> &LabelGroup {
        self.table.left()
    }

    pub fn k2(&self) -> &LabelGroup {
        self.table.right()
    }

    pub fn order(&self) -> u64 {
        self.k1().len() as u64 * self.k2().len() as u64 * self.p() as u64
    }

    pub fn b(&self, b1: usize, b2: usize) -> u32 {
        self.table.value(b1, b2)
    }

    pub fn identity(&self) -> Element {
        Element { b1: self.k1().zero(), b2: self.k2().zero(), a: 0 }
    }

    pub fn central(&self, a: u32) -> Element {
        Element { a: a % self.p(), ..self.identity() }
    }

    pub fn mul(&self, g: Element, h: Element) -> Element {
        let p = self.p();
        Element {
            b1: self.k1().add(g.b1, h.b1),
            b2: self.k2().add(g.b2, h.b2),
            a: (g.a + h.a + self.b(g.b1, h.b2)) % p,
        }
    }

    /// `(-b1, -b2, -a + B(b1, b2))`.
    pub fn inverse(&self, g: Element) -> Element {
        let p = self.p();
        Element { b1: self.k1().neg(g.b1), b2: self.k2().neg(g.b2), a: (2 * p - g.a + self.b(g.b1, g.b2)) % p }
    }

    /// Position of `g` in the enumeration order (label order, then `a`).
    pub fn index(&self, g: Element) -> u64 {
        (g.b1 as u64 * self.k2().len() as u64 + g.b2 as u64) * self.p() as u64 + g.a as u64
    }

    pub fn element(&self, index: u64) -> Element {
        let p = self.p() as u64;
        let n2 = self.k2().len() as u64;
        Element { b1: (index / p / n2) as usize, b2: (index / p % n2) as usize, a: (index % p) as u32 }
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Order of the center, from the radicals of the Gram matrix.
    pub fn center_order(&self) -> u64 {
        let (r1, r2) = (self.k1().dim(), self.k2().dim());
        let rank = if r1 == 0 || r2 == 0 {
            0
        } else {
            let rows: Vec<Vec<i64>> = self.table.gram().iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
            FpMatrix::from_rows(self.p(), &rows).rank()
        };
        (self.p() as u64).pow((1 + r1 + r2 - 2 * rank) as u32)
    }

    /// Order of the center by testing every element against every element.
    pub fn center_order_exhaustive(&self) -> u64 {
        let all: Vec<Element> = self.elements().collect();
        all.iter().filter(|&&g| all.iter().all(|&h| self.mul(g, h) == self.mul(h, g))).count() as u64
    }

    /// Checks associativity, identity and inverses: on every triple when
    /// `|G|` is at most `3^6`, otherwise on seeded random triples.
    pub fn verify_axioms(&self) -> GroupAxioms {
        let exhaustive = self.order() <= EXHAUSTIVE_CEILING;
        let e = self.identity();
        let unit_laws = |g: Element| self.mul(g, e) == g && self.mul(e, g) == g;
        let inv_laws = |g: Element| {
            let h = self.inverse(g);
            self.mul(g, h) == e && self.mul(h, g) == e
        };
        let (associative, identity, inverses, checked, center_order) = if exhaustive {
            let fast = FastGroup::new(self);
            (
                fast.associative(),
                self.elements().all(unit_laws),
                self.elements().all(inv_laws),
                self.order().pow(3),
                self.center_order_exhaustive(),
            )
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x4845_4953);
            let n = self.order();
            let mut pick = || self.element(rng.gen_range(0..n));
            let mut ok = [true; 3];
            for _ in 0..SAMPLED_CHECKS {
                let (g, h, k) = (pick(), pick(), pick());
                ok[0] &= self.mul(self.mul(g, h), k) == self.mul(g, self.mul(h, k));
                ok[1] &= unit_laws(g);
                ok[2] &= inv_laws(g);
            }
            (ok[0], ok[1], ok[2], SAMPLED_CHECKS, self.center_order())
        };
        GroupAxioms {
            associative,
            identity,
            inverses,
            exhaustive,
            checked,
            center_order,
            center_is_a: center_order == self.p() as u64,
        }
    }
}

/// Addition tables for exhaustive checks on small groups.
struct FastGroup {
    p: u32,
    n1: usize,
    n2: usize,
    add1: Vec<usize>,
    add2: Vec<usize>,
    b: Vec<u32>,
}

impl FastGroup {
    fn new(g: &HeisenbergGroup) -> Self {
        let (n1, n2) = (g.k1().len(), g.k2().len());
        let add1 = (0..n1 * n1).map(|k| g.k1().add(k / n1, k % n1)).collect();
        let add2 = (0..n2 * n2).map(|k| g.k2().add(k / n2, k % n2)).collect();
        let b = (0..n1 * n2).map(|k| g.b(k / n2, k % n2)).collect();
        FastGroup { p: g.p(), n1, n2, add1, add2, b }
    }

    fn mul(&self, g: Element, h: Element) -> Element {
        Element {
            b1: self.add1[g.b1 * self.n1 + h.b1],
            b2: self.add2[g.b2 * self.n2 + h.b2],
            a: (g.a + h.a + self.b[g.b1 * self.n2 + h.b2]) % self.p,
        }
    }

    fn associative(&self) -> bool {
        let all: Vec<Element> = (0..self.n1)
            .flat_map(|b1| (0..self.n2).flat_map(move |b2| (0..self.p).map(move |a| Element { b1, b2, a })))
            .collect();
        all.iter().all(|&g| {
            all.iter().all(|&h| {
                let gh = self.mul(g, h);
                all.iter().all(|&k| self.mul(gh, k) == self.mul(g, self.mul(h, k)))
            })
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ff::Field;
    use crate::kernel::{joint_kernels, KernelOptions};
    use crate::pairing::pairing_table;
    use crate::skew::parse_matrix;

    pub(crate) fn group(p: u32, text: &str) -> HeisenbergGroup {
        let field = Field::prime(p).unwrap();
        let m = parse_matrix(&field, text).unwrap();
        let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
        let t = pairing_table(&m, &k1, &k2).unwrap();
        build_group(&k1, &k2, &t).unwrap()
    }

    #[test]
    fn artin_schreier_group() {
        let g = group(3, "[F - 1]");
        assert_eq!(g.order(), 27);
        let ax = g.verify_axioms();
        assert!(ax.holds() && ax.exhaustive);
        assert_eq!(ax.center_order, 3);
        assert_eq!(g.center_order(), 3);
        // exponent 3
        assert!(g.elements().all(|x| g.mul(x, g.mul(x, x)) == g.identity()));
    }

    #[test]
    fn trivial_kernels_give_cyclic_group() {
        let g = group(5, "[F^2]");
        assert_eq!(g.order(), 5);
        assert!(g.verify_axioms().center_is_a);
    }

    #[test]
    fn diagonal_pair_over_f2() {
        let g = group(2, "[F - 1, 0; 0, F - 1]");
        assert_eq!(g.order(), 32);
        assert!(g.verify_axioms().center_is_a);
    }

    #[test]
    fn degenerate_pairing_has_large_center() {
        let g = HeisenbergGroup::from_table(PairingTable::from_values(3, 1, 1, vec![vec![0; 3]; 3]));
        let ax = g.verify_axioms();
        assert!(ax.holds());
        assert_eq!((ax.center_order, g.center_order()), (27, 27));
        assert!(!ax.center_is_a);
    }

    #[test]
    fn label_mismatch() {
        let field = Field::prime(3).unwrap();
        let m = parse_matrix(&field, "[F - 1]").unwrap();
        let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
        let t = PairingTable::from_values(3, 1, 1, vec![vec![0; 3]; 3]);
        assert_eq!(build_group(&k1, &k2, &t), Err(HeisenbergError::LabelMismatch));
    }

    #[test]
    fn element_indexing_round_trips() {
        let g = group(2, "[F^2 - 1]");
        for i in 0..g.order() {
            assert_eq!(g.index(g.element(i)), i);
        }
    }
}
