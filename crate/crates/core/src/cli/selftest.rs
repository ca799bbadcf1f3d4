use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{analyze, oracle_kernel, parse_problem, random_poly, random_problem, Problem};
use crate::ff::Field;
use crate::kernel::{etale_kernel, splitting_degree, KernelOptions};
use crate::skew::{g_form, SkewMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelfCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

fn tally(name: &'static str, results: impl Iterator<Item = bool>) -> SelfCheck {
    let (mut cases, mut failures) = (0, 0);
    for ok in results {
        cases += 1;
        failures += usize::from(!ok);
    }
    SelfCheck { name, cases, failures }
}

/// Randomized run of the core identities with `cases` draws per check.
pub fn selftest(seed: u64, cases: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<Field> = [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]
        .iter()
        .map(|&(p, n)| Field::standard(p, n).expect("standard field"))
        .collect();
    let mut checks = Vec::new();

    let g_results: Vec<bool> = (0..cases)
        .map(|_| {
            let base = &bases[rng.gen_range(0..bases.len())];
            let big = Field::standard(base.p(), base.n() * rng.gen_range(1..=3)).expect("extension");
            let f = random_poly(&mut rng, base, -3, 3, 4);
            let size = big.size().expect("small field");
            let (x, y) = (big.element_at(rng.gen_range(0..size)), big.element_at(rng.gen_range(0..size)));
            let g = g_form(&f).eval(&x, &y).expect("embedding");
            let lhs = &g.pow(big.p() as u64) - &g;
            let rhs = &(&f.evaluate(&x).expect("embedding") * &y) - &(&x * &f.adjoint().evaluate(&y).expect("embedding"));
            lhs == rhs
        })
        .collect();
    checks.push(tally("g_equation", g_results.into_iter()));

    let adj_results: Vec<bool> = (0..cases)
        .map(|_| {
            let base = &bases[rng.gen_range(0..bases.len())];
            let f = random_poly(&mut rng, base, -3, 3, 4);
            let g = random_poly(&mut rng, base, -3, 3, 4);
            f.adjoint().adjoint() == f && (&f * &g).adjoint() == &g.adjoint() * &f.adjoint()
        })
        .collect();
    checks.push(tally("adjoint", adj_results.into_iter()));

    let opts = KernelOptions::default();
    let kernel_results: Vec<bool> = (0..cases)
        .map(|_| {
            let base = &bases[rng.gen_range(0..bases.len())];
            let f = random_poly(&mut rng, base, -2, 2, 3);
            let Ok(s) = splitting_degree(&f, 64) else { return true };
            let Ok(k) = etale_kernel(&f, &opts) else { return false };
            let size_ok = f.span().is_none_or(|span| k.log_size() as u64 == span);
            let small = (base.p() as f64).powf((base.n() * s as usize) as f64) <= (1u64 << 16) as f64;
            size_ok && (!small || oracle_kernel(&f, s).is_ok_and(|o| o.complete && o.kernel == k))
        })
        .collect();
    checks.push(tally("kernel_oracle", kernel_results.into_iter()));

    let small_fields = [Field::prime(2).expect("F_2"), Field::prime(3).expect("F_3")];
    let analyze_results: Vec<bool> = (0..cases.div_ceil(4))
        .map(|_| {
            let mut pr = random_problem(&mut rng, &small_fields, 2);
            let (rows, cols) = (pr.matrix.rows(), pr.matrix.cols());
            let entries = (0..rows).map(|_| (0..cols).map(|_| random_poly(&mut rng, &pr.field, -1, 1, 2)).collect()).collect();
            pr.matrix = SkewMatrix::from_rows(&pr.field, entries);
            analyze(&pr).all_passed()
        })
        .collect();
    checks.push(tally("analyze", analyze_results.into_iter()));

    let rt_results: Vec<bool> = (0..cases)
        .map(|_| {
            let pr: Problem = random_problem(&mut rng, &bases, 3);
            parse_problem(&pr.to_string()).is_ok_and(|q| q == pr)
        })
        .collect();
    checks.push(tally("round_trip", rt_results.into_iter()));

    let det = parse_problem("p=3 | [F - 1, 0; 0, F^-1 + F]").expect("fixed problem");
    checks.push(tally("deterministic_json", std::iter::once(analyze(&det).canonical_json() == analyze(&det).canonical_json())));

    SelftestReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selftest_passes() {
        let r = selftest(1, 8);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.checks.len(), 6);
    }
}
