//! Field embeddings `F_{p^a} -> F_{p^b}` for `a | b`.
//!
//! The image of `t` is the smallest root (in [`FFElem`]'s order) of the source
//! modulus inside the target. Choices are cached process-wide so that repeated
//! calls agree.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{FFElem, Field};
use super::FieldError;

/// Images of the source power basis `1, t, ..., t^{a-1}` in the target.
#[derive(Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    images: Vec<FFElem>,
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, x: &FFElem) -> FFElem {
        assert!(x.field() == &self.source);
        let mut acc = self.target.zero();
        for (c, img) in x.coeffs().iter().zip(&self.images) {
            if *c != 0 {
                acc += &img.scale(*c);
            }
        }
        acc
    }
}

type CacheKey = (Field, Field);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<Embedding>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<Embedding>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The cached embedding from `source` into `target`.
pub fn embedding(source: &Field, target: &Field) -> Result<Arc<Embedding>, FieldError> {
    if source.p() != target.p() || !target.n().is_multiple_of(source.n()) {
        return Err(FieldError::NoEmbedding { from: source.spec_string(), to: target.spec_string() });
    }
    let key = (source.clone(), target.clone());
    if let Some(e) = cache().read().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let built = Arc::new(build(source, target));
    // first writer wins; the construction is deterministic anyway
    let mut w = cache().write().unwrap();
    Ok(w.entry(key).or_insert(built).clone())
}

fn build(source: &Field, target: &Field) -> Embedding {
    let images = if source == target {
        (0..source.n()).map(|i| target.generator().pow(i as u64)).collect()
    } else {
        let modulus: Vec<FFElem> =
            source.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
        let root = split_linear(&modulus)
            .into_iter()
            .min()
            .expect("an irreducible of degree dividing n splits in F_{p^n}");
        let mut out = Vec::with_capacity(source.n());
        let mut cur = target.one();
        for _ in 0..source.n() {
            out.push(cur.clone());
            cur = &cur * &root;
        }
        out
    };
    Embedding { source: source.clone(), target: target.clone(), images }
}

/// Ring-homomorphic image of `x` in `target`.
pub fn embed(x: &FFElem, target: &Field) -> Result<FFElem, FieldError> {
    if x.field() == target {
        return Ok(x.clone());
    }
    Ok(embedding(x.field(), target)?.apply(x))
}

// ---- polynomials over an extension field, used only for root finding ----

fn trim(a: &mut Vec<FFElem>) {
    while a.last().is_some_and(FFElem::is_zero) {
        a.pop();
    }
}

fn poly_rem(a: &[FFElem], m: &[FFElem]) -> Vec<FFElem> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = m[dm].inv().expect("monic-able divisor");
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = &r[top] * &lead_inv;
        for k in 0..=dm {
            let s = &factor * &m[k];
            r[top - dm + k] -= &s;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[FFElem], b: &[FFElem], m: &[FFElem], field: &Field) -> Vec<FFElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    poly_rem(&out, m)
}

fn poly_powmod(a: &[FFElem], mut e: u64, m: &[FFElem], field: &Field) -> Vec<FFElem> {
    let mut result = poly_rem(&[field.one()], m);
    let mut base = poly_rem(a, m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, m, field);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod(&base, &base, m, field);
        }
    }
    result
}

fn poly_gcd(a: &[FFElem], b: &[FFElem]) -> Vec<FFElem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        let inv = lead.inv().unwrap();
        for c in x.iter_mut() {
            *c = &*c * &inv;
        }
    }
    x
}

/// All roots of `f`, assuming it is a product of distinct linear factors over
/// the coefficient field. Splitting uses the absolute trace, so it works in
/// every characteristic.
pub(crate) fn split_linear(f: &[FFElem]) -> Vec<FFElem> {
    let mut f = f.to_vec();
    trim(&mut f);
    let field = f[0].field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut roots = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g.len() {
            0 | 1 => continue,
            2 => {
                // g1 x + g0
                let r = -(&g[0] * &g[1].inv().unwrap());
                roots.push(r);
                continue;
            }
            _ => {}
        }
        loop {
            let a = random_element(&field, &mut rng);
            if a.is_zero() {
                continue;
            }
            // trace of a*x in F[x]/(g)
            let mut z = poly_rem(&[field.zero(), a], &g);
            let mut tr = z.clone();
            for _ in 1..field.n() {
                z = poly_powmod(&z, field.p() as u64, &g, &field);
                tr = add_polys(&tr, &z);
            }
            let mut parts = Vec::new();
            for c in 0..field.p() {
                let mut h = tr.clone();
                if h.is_empty() {
                    h.push(field.zero());
                }
                h[0] -= &field.from_int(c as i64);
                let d = poly_gcd(&h, &g);
                if d.len() > 1 {
                    parts.push(d);
                }
            }
            if parts.len() > 1 {
                stack.extend(parts);
                break;
            }
        }
    }
    roots
}

fn add_polys(a: &[FFElem], b: &[FFElem]) -> Vec<FFElem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (i, y) in short.iter().enumerate() {
        out[i] += y;
    }
    trim(&mut out);
    out
}

fn random_element(field: &Field, rng: &mut ChaCha8Rng) -> FFElem {
    use rand::Rng;
    let coeffs: Vec<i64> = (0..field.n()).map(|_| rng.gen_range(0..field.p() as i64)).collect();
    field.element(&coeffs)
}
