//! The two formal bases, the finite Fourier change of basis between them,
//! its scalars, and the inversion and intertwining certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{exponent_sum_as_integer, CycloElem, CycloMatrix};
use crate::heisenberg::{svn_rep_twisted, HeisenbergGroup, Model, MonomialMatrix, SAMPLED_CHECKS};
use crate::kernel::{dimension_report, DimReport};
use crate::pairing::PairingTable;
use crate::skew::SkewMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourierError {
    /// Only diagonal inputs get explicit scalars; the product `p^(r + r')`
    /// is still known.
    #[error("constants depend on the model for non-diagonal input (only p^(r+r') = p^{pi0_log} is determined)")]
    ModelDependentUnsupported { pi0_log: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    X,
    Y,
}

/// A formal basis: `X*` labelled by `K2` or `Y*` labelled by `K1`, sitting
/// in degree `2D` with twist `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisSpace {
    pub side: Side,
    pub labels: Vec<String>,
    pub degree: usize,
    pub twist: usize,
}

/// Both bases; their sizes are checked against the component group order.
pub fn basis_spaces(report: &DimReport, t: &PairingTable) -> Option<(BasisSpace, BasisSpace)> {
    let size = report.pi0_size(t.p())?;
    if t.left().len() as u128 != size || t.right().len() as u128 != size {
        return None;
    }
    let make = |side, labels: &[String]| BasisSpace {
        side,
        labels: labels.to_vec(),
        degree: report.support_degree,
        twist: report.big_d,
    };
    Some((make(Side::X, t.right().labels()), make(Side::Y, t.left().labels())))
}

/// `sign * p^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Scalar {
    pub sign: i8,
    pub p_exponent: i64,
}

impl Scalar {
    pub fn value(&self, p: u32) -> BigRational {
        let base = BigRational::from_integer(BigInt::from(p));
        let mag = if self.p_exponent >= 0 {
            num_traits::pow(base, self.p_exponent as usize)
        } else {
            num_traits::pow(base, self.p_exponent.unsigned_abs() as usize).recip()
        };
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantsReport {
    pub d: i64,
    pub r: i64,
    pub r_prime: i64,
    /// `(-1)^d p^-r`.
    pub scalar_forward: Scalar,
    /// `(-1)^d p^-r'`.
    pub scalar_backward: Scalar,
    pub scalar_forward_text: String,
    pub scalar_backward_text: String,
    /// `log_p |pi_0(ker F)|`.
    pub pi0_log: u64,
    /// `r + r' = log_p |pi_0|`.
    pub product_rule: bool,
    /// The per-entry `d` sum agrees with the dimension report.
    pub d_matches_report: bool,
    pub model_note: String,
}

pub const MODEL_NOTE: &str = "scalars use the models Spec k[x^(p^m)] and Spec k[x^(p^-M)] for an entry \
with exponent range [m, M], giving r = -m and r' = M per nonzero diagonal entry; zero entries contribute \
nothing; the unscaled character matrices are model independent";

/// Constants for a (rectangular) diagonal matrix; the scalars multiply over
/// the diagonal entries.
pub fn constants(f: &SkewMatrix) -> Result<ConstantsReport, FourierError> {
    let report = dimension_report(f);
    if !f.is_diagonal() {
        return Err(FourierError::ModelDependentUnsupported { pi0_log: report.pi0_log_f });
    }
    let (mut d, mut r, mut r_prime) = (0i64, 0i64, 0i64);
    for i in 0..f.rows().min(f.cols()) {
        let e = f.get(i, i);
        if let (Some(m), Some(big_m)) = (e.min_exp(), e.max_exp()) {
            d += 1;
            r -= m;
            r_prime += big_m;
        }
    }
    let sign = if d % 2 == 0 { 1 } else { -1 };
    let p = f.field().p();
    let scalar_forward = Scalar { sign, p_exponent: -r };
    let scalar_backward = Scalar { sign, p_exponent: -r_prime };
    Ok(ConstantsReport {
        d,
        r,
        r_prime,
        scalar_forward,
        scalar_backward,
        scalar_forward_text: scalar_forward.value(p).to_string(),
        scalar_backward_text: scalar_backward.value(p).to_string(),
        pi0_log: report.pi0_log_f,
        product_rule: r + r_prime >= 0 && (r + r_prime) as u64 == report.pi0_log_f,
        d_matches_report: d == report.d as i64,
        model_note: MODEL_NOTE.to_string(),
    })
}

/// A matrix whose entries are the roots of unity `zeta^exps[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    exps: Vec<u32>,
}

impl PhaseMatrix {
    pub fn from_fn(p: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let exps = (0..rows * cols).map(|k| f(k / cols, k % cols) % p).collect();
        PhaseMatrix { p, rows, cols, exps }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn exp(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.cols + j]
    }

    pub fn transpose(&self) -> Self {
        PhaseMatrix::from_fn(self.p, self.cols, self.rows, |i, j| self.exp(j, i))
    }

    pub fn conj(&self) -> Self {
        PhaseMatrix::from_fn(self.p, self.rows, self.cols, |i, j| self.p - self.exp(i, j))
    }

    pub fn to_cyclo(&self, scale: Option<&BigRational>) -> CycloMatrix {
        CycloMatrix::from_fn(self.p, self.rows, self.cols, |i, j| {
            let z = CycloElem::zeta_pow(self.p, self.exp(i, j) as i64);
            match scale {
                Some(s) => z.scale(s),
                None => z,
            }
        })
    }

    /// Is `self * a == b * self` for monomial `a` (on the column space) and
    /// `b` (on the row space)? Entries are roots of unity, so this compares
    /// exponents.
    pub fn intertwines(&self, a: &MonomialMatrix, b: &MonomialMatrix) -> bool {
        let p = self.p;
        // row d of b * self picks row d' with b.perm[d'] = d
        let b_inv = b.transpose();
        (0..self.rows).all(|d| {
            let dp = b_inv.perm()[d];
            let theta = b.phase()[dp];
            (0..self.cols).all(|c| {
                let lhs = self.exp(d, a.perm()[c]) + a.phase()[c];
                let rhs = theta + self.exp(dp, c);
                lhs % p == rhs % p
            })
        })
    }
}

/// `(psi^u(B(b1, b2)))` with rows `b1` and columns `b2`.
pub fn character_matrix(t: &PairingTable, u: u32) -> PhaseMatrix {
    let p = t.p();
    PhaseMatrix::from_fn(p, t.left().len(), t.right().len(), |i, j| {
        (t.value(i, j) as u64 * u as u64 % p as u64) as u32
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `Y*_{b1} = s sum psi(B(b1, b2)) X*_{b2}`: rows `b1`, columns `b2`.
    YFromX,
    /// `X*_{b2} = s' sum psi(-B(b1, b2)) Y*_{b1}`: rows `b2`, columns `b1`.
    XFromY,
}

/// Entries of the change of basis as roots of unity, without the scalar.
pub fn change_of_basis_phases(t: &PairingTable, u: u32, direction: Direction) -> PhaseMatrix {
    let c = character_matrix(t, u);
    match direction {
        Direction::YFromX => c,
        Direction::XFromY => c.conj().transpose(),
    }
}

/// The change-of-basis matrix, scaled by the matching constant when one is
/// given.
pub fn change_of_basis(t: &PairingTable, u: u32, constants: Option<&ConstantsReport>, direction: Direction) -> CycloMatrix {
    let scale = constants.map(|c| match direction {
        Direction::YFromX => c.scalar_forward.value(t.p()),
        Direction::XFromY => c.scalar_backward.value(t.p()),
    });
    change_of_basis_phases(t, u, direction).to_cyclo(scale.as_ref())
}

/// Largest `|K1| |K2| max(|K1|, |K2|)` for which the matrix products are
/// formed entry by entry.
pub const EXPLICIT_PRODUCT_CEILING: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InversionCertificate {
    /// `(psi B)(psi(-B))^T = |K2| I` and `(psi(-B))^T (psi B) = |K1| I`.
    pub character_identity: bool,
    /// `forward * backward = I` and `backward * forward = I`, with scalars.
    pub scaled_identity: Option<bool>,
    /// `explicit`: every entry of both products was summed. `translation`:
    /// by biadditivity each product entry depends only on a difference of
    /// labels, so one row per difference is summed.
    pub method: &'static str,
}

/// Integer value of `sum_j psi(e_j)` for an exponent histogram.
fn histogram_value(counts: &[i64]) -> Option<i64> {
    exponent_sum_as_integer(counts)
}

/// `G[i][i'] = sum_j zeta^(B(i, j) - B(i', j))` as integers, or `None` when
/// an entry is irrational.
fn explicit_gram(n_outer: usize, n_inner: usize, p: u32, get: &dyn Fn(usize, usize) -> u32) -> Option<Vec<Vec<i64>>> {
    let mut counts = vec![0i64; p as usize];
    (0..n_outer)
        .map(|i| {
            (0..n_outer)
                .map(|i2| {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for j in 0..n_inner {
                        counts[((get(i, j) + p - get(i2, j)) % p) as usize] += 1;
                    }
                    histogram_value(&counts)
                })
                .collect()
        })
        .collect()
}

/// Checks Fourier inversion exactly.
pub fn verify_inversion(t: &PairingTable, constants: Option<&ConstantsReport>) -> InversionCertificate {
    inversion_with_ceiling(t, constants, EXPLICIT_PRODUCT_CEILING)
}

fn inversion_with_ceiling(t: &PairingTable, constants: Option<&ConstantsReport>, ceiling: u64) -> InversionCertificate {
    let p = t.p();
    let (n1, n2) = (t.left().len(), t.right().len());
    let work = (n1 as u64) * (n2 as u64) * (n1.max(n2) as u64);
    // Each product is an integer matrix: c * |K| at position (i, i') when
    // the character identity holds.
    let is_identity = |n: usize, scale: i64, f: &dyn Fn(usize, usize) -> i64| {
        (0..n).all(|i| (0..n).all(|k| f(i, k) == if i == k { scale } else { 0 }))
    };
    let (character_identity, method) = if work <= ceiling {
        let a = explicit_gram(n1, n2, p, &|i, j| t.value(i, j));
        let b = explicit_gram(n2, n1, p, &|j, i| t.value(i, j));
        let ok = match (a, b) {
            (Some(a), Some(b)) => {
                is_identity(n1, n2 as i64, &|i, k| a[i][k]) && is_identity(n2, n1 as i64, &|i, k| b[i][k])
            }
            _ => false,
        };
        (ok, "explicit")
    } else {
        // entry (i, k) is the sum over j of psi(B(i - k, j)), so the product
        // is the identity exactly when this row is a delta at zero
        let row = |n_outer: usize, n_inner: usize, get: &dyn Fn(usize, usize) -> u32| -> Option<Vec<i64>> {
            let mut counts = vec![0i64; p as usize];
            (0..n_outer)
                .map(|i| {
                    counts.iter_mut().for_each(|c| *c = 0);
                    for j in 0..n_inner {
                        counts[get(i, j) as usize] += 1;
                    }
                    histogram_value(&counts)
                })
                .collect()
        };
        let delta = |r: Option<Vec<i64>>, zero: usize, scale: i64| {
            r.is_some_and(|r| r.iter().enumerate().all(|(d, &v)| v == if d == zero { scale } else { 0 }))
        };
        let a = row(n1, n2, &|i, j| t.value(i, j));
        let b = row(n2, n1, &|j, i| t.value(i, j));
        let ok = delta(a, t.left().zero(), n2 as i64) && delta(b, t.right().zero(), n1 as i64);
        (ok, "translation")
    };
    let scaled_identity = constants.map(|c| {
        let s = c.scalar_forward.value(p) * c.scalar_backward.value(p);
        let one = BigRational::one();
        // forward * backward = s * (psi B)(psi(-B))^T, which is s |K2| I when
        // the character identity holds; otherwise it is not a scalar matrix
        character_identity
            && &s * BigRational::from_integer(BigInt::from(n2)) == one
            && &s * BigRational::from_integer(BigInt::from(n1)) == one
            && !s.is_negative()
    });
    InversionCertificate { character_identity, scaled_identity, method }
}

/// Dense product check of `forward * backward = I` in `Q(zeta_p)`, used as
/// an independent cross-check on small cases.
pub fn verify_inversion_dense(t: &PairingTable, constants: &ConstantsReport) -> bool {
    let fwd = change_of_basis(t, 1, Some(constants), Direction::YFromX);
    let bwd = change_of_basis(t, 1, Some(constants), Direction::XFromY);
    fwd.mul(&bwd).is_identity() && bwd.mul(&fwd).is_identity()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntertwinerCertificate {
    /// `(psi(-B)) rho_X = rho_Y (psi(-B))` on the cycle models.
    pub cycle_models: bool,
    /// `forward rho_X* = rho_Y* forward` on the dual models.
    pub forward_dual: bool,
    /// `backward rho_Y* = rho_X* backward`.
    pub backward_dual: bool,
    pub exhaustive: bool,
    pub elements_checked: u64,
}

impl IntertwinerCertificate {
    pub fn holds(&self) -> bool {
        self.cycle_models && self.forward_dual && self.backward_dual
    }
}

/// Largest `|G| |K1| |K2|` checked on every group element.
pub const INTERTWINER_EXHAUSTIVE_CEILING: u64 = 1 << 26;

/// Fewest sampled elements when the group is too large for every element.
pub const MIN_INTERTWINER_SAMPLES: u64 = 64;

/// Checks that the unscaled change of basis intertwines the two models;
/// scalars cancel from both sides.
pub fn verify_intertwiner(g: &HeisenbergGroup, u: u32) -> IntertwinerCertificate {
    let t = g.table();
    let fwd = change_of_basis_phases(t, u, Direction::YFromX);
    let bwd = change_of_basis_phases(t, u, Direction::XFromY);
    let cyc = fwd.conj();
    let (x, y) = (svn_rep_twisted(g, Model::X, u), svn_rep_twisted(g, Model::Y, u));
    let (xd, yd) = (x.dual(), y.dual());
    let work = g.order().saturating_mul(t.left().len() as u64 * t.right().len() as u64);
    let exhaustive = work <= INTERTWINER_EXHAUSTIVE_CEILING;
    let elements: Vec<_> = if exhaustive {
        g.elements().collect()
    } else {
        // each sample costs |K1| |K2|; keep the total near the exhaustive budget
        let per_sample = (t.left().len() as u64 * t.right().len() as u64).max(1);
        let samples = (INTERTWINER_EXHAUSTIVE_CEILING / per_sample).clamp(MIN_INTERTWINER_SAMPLES, SAMPLED_CHECKS);
        let mut rng = ChaCha8Rng::seed_from_u64(0x494e_5457);
        (0..samples).map(|_| g.element(rng.gen_range(0..g.order()))).collect()
    };
    let mut cert = IntertwinerCertificate {
        cycle_models: true,
        forward_dual: true,
        backward_dual: true,
        exhaustive,
        elements_checked: elements.len() as u64,
    };
    for &e in &elements {
        let (rx, ry, rxd, ryd) = (x.matrix(e), y.matrix(e), xd.matrix(e), yd.matrix(e));
        cert.cycle_models &= cyc.intertwines(&rx, &ry);
        cert.forward_dual &= fwd.intertwines(&rxd, &ryd);
        cert.backward_dual &= bwd.intertwines(&ryd, &rxd);
    }
    cert
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::psi;
    use crate::ff::Field;
    use crate::heisenberg::build_group;
    use crate::kernel::{joint_kernels, KernelOptions};
    use crate::pairing::pairing_table;
    use crate::skew::{parse_matrix, parse_poly};

    fn setup(p: u32, text: &str) -> (SkewMatrix, PairingTable, HeisenbergGroup) {
        let field = Field::prime(p).unwrap();
        let m = parse_matrix(&field, text).unwrap();
        let (k1, k2) = joint_kernels(&m, &KernelOptions::default()).unwrap();
        let t = pairing_table(&m, &k1, &k2).unwrap();
        let g = build_group(&k1, &k2, &t).unwrap();
        (m, t, g)
    }

    #[test]
    fn artin_schreier_constants_and_matrix() {
        let (m, t, g) = setup(3, "[F - 1]");
        let c = constants(&m).unwrap();
        assert_eq!((c.d, c.r, c.r_prime), (1, 0, 1));
        assert_eq!((c.scalar_forward_text.as_str(), c.scalar_backward_text.as_str()), ("-1", "-1/3"));
        assert!(c.product_rule && c.d_matches_report);
        let fwd = change_of_basis(&t, 1, Some(&c), Direction::YFromX);
        let expect = CycloMatrix::from_fn(3, 3, 3, |a, b| -&psi(3, (a * b) as i64));
        assert_eq!(fwd, expect);
        let inv = verify_inversion(&t, Some(&c));
        assert!(inv.character_identity && inv.scaled_identity == Some(true));
        assert!(verify_inversion_dense(&t, &c));
        let w = verify_intertwiner(&g, 1);
        assert!(w.holds() && w.exhaustive);
        assert_eq!(w.elements_checked, 27);
    }

    #[test]
    fn frobenius_power_constants() {
        let f3 = Field::prime(3).unwrap();
        let c = constants(&SkewMatrix::single(parse_poly(&f3, "F^2").unwrap())).unwrap();
        assert_eq!((c.r, c.r_prime, c.pi0_log), (-2, 2, 0));
        assert_eq!(c.scalar_forward_text, "-9");
        assert!(c.product_rule);
    }

    #[test]
    fn symmetric_constants() {
        let f2 = Field::prime(2).unwrap();
        let c = constants(&SkewMatrix::single(parse_poly(&f2, "F + F^-1").unwrap())).unwrap();
        assert_eq!((c.r, c.r_prime, c.pi0_log), (1, 1, 2));
    }

    #[test]
    fn diagonal_pair_is_a_tensor_square() {
        let (m, t, g) = setup(2, "[F - 1, 0; 0, F - 1]");
        let c = constants(&m).unwrap();
        assert_eq!((c.d, c.r, c.r_prime, c.scalar_forward_text.as_str()), (2, 0, 2, "1"));
        let (_, t1, _) = setup(2, "[F - 1]");
        let c1 = constants(&SkewMatrix::single(parse_poly(&Field::prime(2).unwrap(), "F - 1").unwrap())).unwrap();
        let small = change_of_basis(&t1, 1, Some(&c1), Direction::YFromX);
        let big = change_of_basis(&t, 1, Some(&c), Direction::YFromX);
        // labels are (x1, x2) in lexicographic order, matching the Kronecker order
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(big.get(i, j), &(small.get(i / 2, j / 2) * small.get(i % 2, j % 2)));
            }
        }
        assert!(verify_inversion_dense(&t, &c));
        assert!(verify_intertwiner(&g, 1).holds());
    }

    #[test]
    fn zero_map_and_unsupported() {
        let (m, t, _) = setup(3, "[0]");
        let c = constants(&m).unwrap();
        assert_eq!((c.d, c.r, c.r_prime), (0, 0, 0));
        assert!(change_of_basis(&t, 1, Some(&c), Direction::YFromX).is_identity());
        let f3 = Field::prime(3).unwrap();
        let m = parse_matrix(&f3, "[F, 1; 1, F]").unwrap();
        assert!(matches!(constants(&m), Err(FourierError::ModelDependentUnsupported { .. })));
    }

    #[test]
    fn twisted_psi_keeps_certificates() {
        let (m, t, g) = setup(5, "[F - 2]");
        let c = constants(&m).unwrap();
        for u in 1..5 {
            assert!(verify_intertwiner(&g, u).holds());
            let inv = verify_inversion(&t, Some(&c));
            assert!(inv.character_identity);
        }
    }

    #[test]
    fn translation_route_agrees_with_explicit() {
        for (p, text) in [(2, "[F^3 + F + 1]"), (3, "[F - 1, 0; 0, F^-1 + F]")] {
            let (m, t, _) = setup(p, text);
            let c = constants(&m).ok();
            let explicit = verify_inversion(&t, c.as_ref());
            let translated = inversion_with_ceiling(&t, c.as_ref(), 0);
            assert_eq!((explicit.method, translated.method), ("explicit", "translation"));
            assert!(translated.character_identity && translated.scaled_identity != Some(false));
            assert_eq!(explicit.character_identity, translated.character_identity);
            assert_eq!(explicit.scaled_identity, translated.scaled_identity);
        }
        let degenerate = PairingTable::from_values(3, 1, 1, vec![vec![0; 3]; 3]);
        assert!(!verify_inversion(&degenerate, None).character_identity);
        assert!(!inversion_with_ceiling(&degenerate, None, 0).character_identity);
    }
}
