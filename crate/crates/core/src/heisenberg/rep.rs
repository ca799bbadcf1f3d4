use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Element, HeisenbergError, HeisenbergGroup, MonomialMatrix, EXHAUSTIVE_CEILING, SAMPLED_CHECKS};
use crate::cyclo::{exponent_sum_as_integer, CycloElem, CycloMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    /// Basis `X_c` labelled by `K2`:
    /// `rho(b1, b2, a) X_c = psi(a - B(b1, c)) X_{c - b2}`.
    X,
    /// Basis `Y_d` labelled by `K1`:
    /// `rho(b1, b2, a) Y_d = psi(a + B(d - b1, b2)) Y_{d - b1}`.
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Svn { model: Model, u: u32 },
    Linear { alpha: Vec<u32>, beta: Vec<u32> },
    Sum(Box<Rep>, Box<Rep>),
    Tensor(Box<Rep>, Box<Rep>),
    Dual(Box<Rep>),
}

/// A representation of a Heisenberg group by monomial matrices over
/// `Z[zeta_p]`. Matrices are produced on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    group: HeisenbergGroup,
    kind: Kind,
    dim: usize,
}

/// The Stone-von Neumann model with central character `psi`.
pub fn svn_rep(g: &HeisenbergGroup, model: Model) -> Rep {
    svn_rep_twisted(g, model, 1)
}

/// The model with central character `psi^u`.
pub fn svn_rep_twisted(g: &HeisenbergGroup, model: Model, u: u32) -> Rep {
    let dim = match model {
        Model::X => g.k2().len(),
        Model::Y => g.k1().len(),
    };
    Rep { group: g.clone(), kind: Kind::Svn { model, u: u % g.p() }, dim }
}

/// The character `(b1, b2, a) -> psi(alpha . b1 + beta . b2)`, trivial on
/// the center.
pub fn linear_character(g: &HeisenbergGroup, alpha: Vec<u32>, beta: Vec<u32>) -> Rep {
    assert_eq!((alpha.len(), beta.len()), (g.k1().dim(), g.k2().dim()));
    Rep { group: g.clone(), kind: Kind::Linear { alpha, beta }, dim: 1 }
}

impl Rep {
    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The model tag, e.g. `X`, `X^2`, `sum(X, X)`, `tensor(X, dual(Y))`.
    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::Svn { model, u: 1 } => format!("{model:?}"),
            Kind::Svn { model, u } => format!("{model:?}^{u}"),
            Kind::Linear { alpha, beta } => format!("chi({alpha:?}, {beta:?})"),
            Kind::Sum(a, b) => format!("sum({}, {})", a.describe(), b.describe()),
            Kind::Tensor(a, b) => format!("tensor({}, {})", a.describe(), b.describe()),
            Kind::Dual(a) => format!("dual({})", a.describe()),
        }
    }

    /// Exponent `u` of the central character `psi^u`, when the center acts
    /// by scalars.
    pub fn central_exponent(&self) -> Option<u32> {
        let p = self.group.p();
        match &self.kind {
            Kind::Svn { u, .. } => Some(*u),
            Kind::Linear { .. } => Some(0),
            Kind::Sum(a, b) => a.central_exponent().filter(|&x| b.central_exponent() == Some(x)),
            Kind::Tensor(a, b) => Some((a.central_exponent()? + b.central_exponent()?) % p),
            Kind::Dual(a) => Some((p - a.central_exponent()?) % p),
        }
    }

    fn same_group(&self, other: &Rep) -> Result<(), HeisenbergError> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(HeisenbergError::GroupMismatch)
        }
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep, HeisenbergError> {
        self.same_group(other)?;
        let kind = Kind::Sum(Box::new(self.clone()), Box::new(other.clone()));
        Ok(Rep { group: self.group.clone(), kind, dim: self.dim + other.dim })
    }

    pub fn tensor(&self, other: &Rep) -> Result<Rep, HeisenbergError> {
        self.same_group(other)?;
        let kind = Kind::Tensor(Box::new(self.clone()), Box::new(other.clone()));
        Ok(Rep { group: self.group.clone(), kind, dim: self.dim * other.dim })
    }

    /// The contragredient `g -> rho(g^-1)^T`.
    pub fn dual(&self) -> Rep {
        Rep { group: self.group.clone(), kind: Kind::Dual(Box::new(self.clone())), dim: self.dim }
    }

    pub fn matrix(&self, g: Element) -> MonomialMatrix {
        let grp = &self.group;
        let p = grp.p();
        match &self.kind {
            Kind::Svn { model: Model::X, u } => {
                let (k2, shift) = (grp.k2(), grp.k2().neg(g.b2));
                let (perm, phase) =
                    (0..k2.len()).map(|c| (k2.add(c, shift), (g.a + p - grp.b(g.b1, c)) * u)).unzip();
                MonomialMatrix::new(p, perm, phase)
            }
            Kind::Svn { model: Model::Y, u } => {
                let (k1, shift) = (grp.k1(), grp.k1().neg(g.b1));
                let (perm, phase) = (0..k1.len())
                    .map(|d| {
                        let e = k1.add(d, shift);
                        (e, (g.a + grp.b(e, g.b2)) * u)
                    })
                    .unzip();
                MonomialMatrix::new(p, perm, phase)
            }
            Kind::Linear { alpha, beta } => {
                let dot = |w: &[u32], c: &[u32]| w.iter().zip(c).map(|(x, y)| x * y).sum::<u32>();
                let e = dot(alpha, grp.k1().coords(g.b1)) + dot(beta, grp.k2().coords(g.b2));
                MonomialMatrix::new(p, vec![0], vec![e])
            }
            Kind::Sum(a, b) => a.matrix(g).direct_sum(&b.matrix(g)),
            Kind::Tensor(a, b) => a.matrix(g).kron(&b.matrix(g)),
            Kind::Dual(a) => a.matrix(grp.inverse(g)).transpose(),
        }
    }

    pub fn to_cyclo(&self, g: Element) -> CycloMatrix {
        self.matrix(g).to_cyclo()
    }

    /// JSON summary; the full matrix table is included on request.
    pub fn to_json(&self, with_matrices: bool) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            element: Element,
            perm: Vec<usize>,
            phase: Vec<u32>,
        }
        let matrices = with_matrices.then(|| {
            self.group
                .elements()
                .map(|g| {
                    let m = self.matrix(g);
                    Entry { element: g, perm: m.perm().to_vec(), phase: m.phase().to_vec() }
                })
                .collect::<Vec<_>>()
        });
        serde_json::json!({
            "model": self.describe(),
            "dimension": self.dim,
            "central_exponent": self.central_exponent(),
            "matrices": matrices,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismCertificate {
    pub homomorphism: bool,
    /// `rho(0, 0, a) = psi^u(a) I` for every `a`.
    pub central_character: bool,
    pub exhaustive: bool,
    pub pairs_checked: u64,
}

impl HomomorphismCertificate {
    pub fn holds(&self) -> bool {
        self.homomorphism && self.central_character
    }
}

/// Checks `rho(g * h) = rho(g) rho(h)` on all pairs for `|G| <= 3^6` and on
/// seeded random pairs above, and the central character.
pub fn verify_homomorphism(r: &Rep) -> HomomorphismCertificate {
    let g = r.group();
    let p = g.p();
    let central_character = match r.central_exponent() {
        Some(u) => (0..p).all(|a| r.matrix(g.central(a)) == MonomialMatrix::scalar(p, r.dim(), a * u)),
        None => false,
    };
    let exhaustive = g.order() <= EXHAUSTIVE_CEILING;
    let (homomorphism, pairs_checked) = if exhaustive {
        let all: Vec<Element> = g.elements().collect();
        let mats: Vec<MonomialMatrix> = all.iter().map(|&x| r.matrix(x)).collect();
        let ok = all.iter().enumerate().all(|(i, &x)| {
            all.iter().enumerate().all(|(j, &y)| mats[g.index(g.mul(x, y)) as usize] == mats[i].mul(&mats[j]))
        });
        (ok, g.order() * g.order())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5356_4e52);
        let ok = (0..SAMPLED_CHECKS).all(|_| {
            let x = g.element(rng.gen_range(0..g.order()));
            let y = g.element(rng.gen_range(0..g.order()));
            r.matrix(g.mul(x, y)) == r.matrix(x).mul(&r.matrix(y))
        });
        (ok, SAMPLED_CHECKS)
    };
    HomomorphismCertificate { homomorphism, central_character, exhaustive, pairs_checked }
}

/// Largest `|G| * dim` for which the character is summed over the group.
pub const CHARACTER_SUM_CEILING: u64 = 1 << 26;

fn check_work(r: &Rep) -> Result<(), HeisenbergError> {
    let work = r.group().order().saturating_mul(r.dim() as u64);
    if work > CHARACTER_SUM_CEILING {
        return Err(HeisenbergError::CeilingExceeded { work, ceiling: CHARACTER_SUM_CEILING });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityCertificate {
    /// `sum_g tr rho(g) * conj(tr rho(g))`, an integer.
    pub schur_sum: i64,
    pub group_order: u64,
    pub irreducible: bool,
}

/// Trace histograms of `r` over the group, in enumeration order.
fn character_table(r: &Rep) -> Vec<Vec<i64>> {
    r.group().elements().map(|g| r.matrix(g).trace_counts()).collect()
}

/// Histogram of `sum_g chi(g) conj(psi(g))` for two histogram-valued
/// class functions.
fn pair_counts(p: usize, a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<i64> {
    let mut acc = vec![0i64; p];
    for (x, y) in a.iter().zip(b) {
        for (i, &xi) in x.iter().enumerate().filter(|(_, v)| **v != 0) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, v)| **v != 0) {
                acc[(i + p - j) % p] += xi * yj;
            }
        }
    }
    acc
}

/// Schur test: the character norm `sum |tr|^2` equals `|G|` exactly when
/// `r` is irreducible.
pub fn verify_irreducible(r: &Rep) -> Result<IrreducibilityCertificate, HeisenbergError> {
    check_work(r)?;
    let p = r.group().p();
    let chars = character_table(r);
    let mut total = CycloElem::zero(p);
    for t in chars.iter().map(|h| CycloElem::from_exponent_counts(p, h)) {
        total = &total + &(&t * &t.conj());
    }
    let schur_sum = total
        .as_rational()
        .filter(|v| v.is_integer())
        .and_then(|v| num_traits::ToPrimitive::to_i64(&v.to_integer()))
        .expect("character norm is a rational integer");
    let order = r.group().order();
    Ok(IrreducibilityCertificate { schur_sum, group_order: order, irreducible: schur_sum as u64 == order })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub name: String,
    pub dim: usize,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Nonzero multiplicities, largest first.
    pub multiplicities: Vec<u64>,
    pub components: Vec<Component>,
    /// `sum |tr|^2 / |G|`.
    pub schur_ratio: i64,
    /// The candidate irreducibles are irreducible and `sum dim^2 = |G|`.
    pub complete_family: bool,
    /// `sum m^2` equals the Schur ratio and `sum m dim` equals `dim R`.
    pub consistent: bool,
}

/// Decomposes `r` against the linear characters and the twisted models
/// `X^u`, `u = 1..p-1`, by exact character inner products.
pub fn brute_force_decompose(r: &Rep) -> Result<Decomposition, HeisenbergError> {
    let g = r.group();
    if g.order() > EXHAUSTIVE_CEILING {
        return Err(HeisenbergError::CeilingExceeded { work: g.order(), ceiling: EXHAUSTIVE_CEILING });
    }
    check_work(r)?;
    let p = g.p();
    let order = g.order() as i64;
    let chars = character_table(r);
    let norm = exponent_sum_as_integer(&pair_counts(p as usize, &chars, &chars)).expect("character norm is rational");
    let schur_ratio = norm / order;

    let mut family: Vec<Rep> = Vec::new();
    let (r1, r2) = (g.k1().dim(), g.k2().dim());
    let count = (p as usize).pow((r1 + r2) as u32);
    for mut idx in 0..count {
        let mut digit = || {
            let d = (idx % p as usize) as u32;
            idx /= p as usize;
            d
        };
        let alpha = (0..r1).map(|_| digit()).collect();
        let beta = (0..r2).map(|_| digit()).collect();
        family.push(linear_character(g, alpha, beta));
    }
    family.extend((1..p).map(|u| svn_rep_twisted(g, super::Model::X, u)));

    let mut complete_family = family.iter().map(|f| (f.dim() * f.dim()) as u64).sum::<u64>() == g.order();
    let mut consistent = true;
    let mut components = Vec::new();
    for f in &family {
        let fc = character_table(f);
        if f.dim() > 1 {
            complete_family &= exponent_sum_as_integer(&pair_counts(p as usize, &fc, &fc)) == Some(order);
        }
        match exponent_sum_as_integer(&pair_counts(p as usize, &chars, &fc)) {
            Some(v) if v >= 0 && v % order == 0 => {
                if v > 0 {
                    components.push(Component { name: f.describe(), dim: f.dim(), multiplicity: (v / order) as u64 });
                }
            }
            _ => consistent = false,
        }
    }
    let mut multiplicities: Vec<u64> = components.iter().map(|c| c.multiplicity).collect();
    multiplicities.sort_unstable_by(|a, b| b.cmp(a));
    consistent &= norm % order == 0
        && multiplicities.iter().map(|m| m * m).sum::<u64>() == schur_ratio as u64
        && components.iter().map(|c| c.multiplicity as usize * c.dim).sum::<usize>() == r.dim();
    Ok(Decomposition { multiplicities, components, schur_ratio, complete_family, consistent })
}
