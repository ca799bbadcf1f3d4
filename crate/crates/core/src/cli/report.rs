use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::{Detail, Problem};
use crate::cyclo::CycloMatrix;
use crate::fourier::{
    basis_spaces, change_of_basis, constants, verify_intertwiner, verify_inversion, ConstantsReport, Direction,
    FourierError, InversionCertificate, IntertwinerCertificate,
};
use crate::heisenberg::{
    brute_force_decompose, build_group, svn_rep_twisted, verify_homomorphism, verify_irreducible, Decomposition,
    GroupAxioms, HeisenbergGroup, HomomorphismCertificate, IrreducibilityCertificate, Model, EXHAUSTIVE_CEILING,
};
use crate::kernel::{
    count_kernel, dimension_report, fp_kernel_dimension, joint_kernels, ore_diagonalize, DimReport, KernelCount,
    KernelData, KernelOptions,
};
use crate::pairing::{
    check_nondegenerate, classify_matrix_symmetry, pairing_table, spot_check, NondegeneracyCertificate, PairingTable,
    Symmetry, SymmetryReport,
};
use crate::skew::SkewMatrix;

pub const SCHEMA_VERSION: u32 = 1;

/// Tables and matrices up to this many entries go into summary reports.
const SUMMARY_ENTRIES: usize = 81;
/// Tables and matrices up to this many entries go into full reports.
const FULL_ENTRIES: usize = 4096;
const SPOT_CHECKS: usize = 256;

/// One named check. `passed` is `None` when the check was not run; `detail`
/// says why or what was compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub millis: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantsOutcome {
    Supported(ConstantsReport),
    /// Non-diagonal input: only `r + r' = pi0_log` is determined.
    ModelDependent { pi0_log: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelSection {
    /// `explicit` when points were built, `count` when only the certified
    /// count is available.
    pub route: &'static str,
    pub field: Option<String>,
    pub k1: Option<KernelData>,
    pub k2: Option<KernelData>,
    /// Count certificates for the diagonal entries of `F` and of `F*`.
    pub counts_f: Vec<KernelCount>,
    pub counts_fstar: Vec<KernelCount>,
    pub ceiling: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingSection {
    pub direct: bool,
    pub gram: Vec<Vec<u32>>,
    pub table: Option<Vec<Vec<u32>>>,
    pub nondegeneracy: NondegeneracyCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSection {
    pub model: String,
    pub dimension: usize,
    pub homomorphism: HomomorphismCertificate,
    pub irreducibility: Option<IrreducibilityCertificate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HeisenbergSection {
    pub order: u64,
    pub axioms: GroupAxioms,
    pub x_model: ModelSection,
    pub y_model: ModelSection,
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierSection {
    pub basis_size: Option<usize>,
    pub degree: usize,
    pub twist: usize,
    pub forward: Option<CycloMatrix>,
    pub backward: Option<CycloMatrix>,
    pub inversion: InversionCertificate,
    pub intertwiner: IntertwinerCertificate,
}

/// Everything computed for one problem. Serializes deterministically;
/// timings are kept out of the canonical JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub problem: String,
    pub p: u32,
    pub psi_exponent: u32,
    pub dimensions: DimReport,
    pub symmetry: SymmetryReport,
    pub constants: ConstantsOutcome,
    pub kernels: KernelSection,
    pub pairing: Option<PairingSection>,
    pub heisenberg: Option<HeisenbergSection>,
    pub fourier: Option<FourierSection>,
    pub certificates: Vec<Certificate>,
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl Report {
    /// True when no certificate that was run failed.
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed != Some(false))
    }

    pub fn failed(&self) -> Vec<&Certificate> {
        self.certificates.iter().filter(|c| c.passed == Some(false)).collect()
    }

    pub fn certificate(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }

    /// Pretty JSON without timings, newline-terminated.
    pub fn canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn json_with_timings(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["timings"] = serde_json::to_value(&self.timings).expect("timings serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    /// Short plain-text summary.
    pub fn summary_text(&self) -> String {
        let d = &self.dimensions;
        let mut out = String::new();
        let _ = writeln!(out, "problem: {}", self.problem);
        let _ = writeln!(
            out,
            "d1={} d2={} k1={} k2={} d={} D={} |pi0|={}^{}",
            d.d1, d.d2, d.k1, d.k2, d.d, d.big_d, self.p, d.pi0_log_f
        );
        match &self.constants {
            ConstantsOutcome::Supported(c) => {
                let _ = writeln!(
                    out,
                    "r={} r'={} forward scalar {} backward scalar {}",
                    c.r, c.r_prime, c.scalar_forward_text, c.scalar_backward_text
                );
            }
            ConstantsOutcome::ModelDependent { pi0_log } => {
                let _ = writeln!(out, "constants model dependent; r + r' = {pi0_log}");
            }
        }
        let _ = writeln!(out, "kernel route: {}", self.kernels.route);
        for c in &self.certificates {
            let status = match c.passed {
                Some(true) => "pass",
                Some(false) => "FAIL",
                None => "skip",
            };
            let _ = writeln!(out, "  {status:4} {}: {}", c.name, c.detail);
        }
        out
    }
}

struct Builder {
    certificates: Vec<Certificate>,
    timings: Vec<Timing>,
    clock: Instant,
}

impl Builder {
    fn check(&mut self, name: &str, passed: Option<bool>, detail: impl Into<String>) {
        self.certificates.push(Certificate { name: name.to_string(), passed, detail: detail.into() });
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.push(Timing { stage: stage.to_string(), millis: (now - self.clock).as_secs_f64() * 1e3 });
        self.clock = now;
    }
}

fn entries_limit(detail: Detail) -> usize {
    match detail {
        Detail::Summary => SUMMARY_ENTRIES,
        Detail::Full => FULL_ENTRIES,
    }
}

fn count_route(f: &SkewMatrix) -> (Vec<KernelCount>, Vec<KernelCount>) {
    let counts = |m: &SkewMatrix| {
        let od = ore_diagonalize(m);
        od.diagonal[..od.rank].iter().map(count_kernel).collect::<Vec<_>>()
    };
    (counts(f), counts(&f.adjoint_transpose()))
}

fn kernel_sizes_check(b: &mut Builder, dims: &DimReport, counts_f: &[KernelCount], counts_fstar: &[KernelCount]) {
    let sum = |c: &[KernelCount]| c.iter().map(|k| k.log_size).sum::<u64>();
    let certified = counts_f.iter().chain(counts_fstar).all(|k| k.certified);
    let ok = certified && sum(counts_f) == dims.pi0_log_f && sum(counts_fstar) == dims.pi0_log_fstar;
    b.check(
        "kernel_count",
        Some(ok),
        format!("diagonal entries split in certified extensions; log_p sizes {} and {}", sum(counts_f), sum(counts_fstar)),
    );
}

/// Runs every stage for one problem.
pub fn analyze(problem: &Problem) -> Report {
    let f = &problem.matrix;
    let u = problem.options.psi_exponent;
    let limit = entries_limit(problem.options.detail);
    let mut b = Builder { certificates: Vec::new(), timings: Vec::new(), clock: Instant::now() };

    let dims = dimension_report(f);
    b.check(
        "dimension_identities",
        Some(dims.identities_hold()),
        "D = d1 + k2 = d2 + k1, d = d1 - k1 = d2 - k2, equal component groups and ranks",
    );
    let symmetry = classify_matrix_symmetry(f);
    let constants_outcome = match constants(f) {
        Ok(c) => ConstantsOutcome::Supported(c),
        Err(FourierError::ModelDependentUnsupported { pi0_log }) => ConstantsOutcome::ModelDependent { pi0_log },
    };
    let consts = match &constants_outcome {
        ConstantsOutcome::Supported(c) => {
            b.check(
                "product_rule",
                Some(c.product_rule && c.d_matches_report),
                format!("p^(r+r') = p^({} + {}) = |pi0| = p^{}", c.r, c.r_prime, c.pi0_log),
            );
            if symmetry.class != Symmetry::Neither {
                let ok = c.r == c.r_prime && c.pi0_log as i64 == 2 * c.r;
                b.check("symmetric_case", Some(ok), format!("r = r' = {} and |pi0| = p^{}", c.r, c.pi0_log));
            }
            Some(c.clone())
        }
        ConstantsOutcome::ModelDependent { .. } => {
            b.check("product_rule", None, "non-diagonal input: scalars are model dependent");
            None
        }
    };
    b.lap("dimensions");

    let opts = KernelOptions { max_ext_degree: problem.options.max_ext_degree, ..KernelOptions::default() };
    let (counts_f, counts_fstar) = count_route(f);
    kernel_sizes_check(&mut b, &dims, &counts_f, &counts_fstar);
    let kernels = joint_kernels(f, &opts);
    b.lap("kernels");

    let mut kernel_section = KernelSection {
        route: "count",
        field: None,
        k1: None,
        k2: None,
        counts_f,
        counts_fstar,
        ceiling: None,
    };
    let (k1, k2) = match kernels {
        Ok(pair) => pair,
        Err(e) => {
            kernel_section.ceiling = Some(e.to_string());
            b.check("explicit_kernels", None, format!("not built: {e}"));
            return finish(problem, dims, symmetry, constants_outcome, kernel_section, None, None, None, b);
        }
    };
    kernel_section.route = "explicit";
    kernel_section.field = Some(k1.field().spec_string());
    let sizes_ok = k1.log_size() as u64 == dims.pi0_log_f
        && k2.log_size() as u64 == dims.pi0_log_fstar
        && k1.connected_dim() == dims.k1
        && k2.connected_dim() == dims.k2
        && k1.is_closed()
        && k2.is_closed();
    b.check("explicit_kernels", Some(sizes_ok), format!("{} and {} points over {}", k1.len(), k2.len(), k1.field()));
    let fstar = f.adjoint_transpose();
    let fp_ok = [(f, &k1), (&fstar, &k2)].iter().all(|(m, k)| {
        fp_kernel_dimension(m, k.field()).is_ok_and(|dim| dim == k.connected_dim() * k.field().n() + k.log_size())
    });
    b.check("fp_dimension", Some(fp_ok), "F_p-linear algebra on the field of definition agrees");
    kernel_section.k1 = Some(k1.clone());
    kernel_section.k2 = Some(k2.clone());
    b.lap("kernel checks");

    let table = match pairing_table(f, &k1, &k2) {
        Ok(t) => t,
        Err(e) => {
            b.check("pairing_values", Some(false), e.to_string());
            return finish(problem, dims, symmetry, constants_outcome, kernel_section, None, None, None, b);
        }
    };
    b.check("pairing_values", Some(true), "every evaluated value lies in F_p");
    if table.is_direct() {
        b.check("biadditive", Some(table.is_biadditive()), "full table equals the extension of its Gram matrix");
    } else {
        let spot = spot_check(f, &k1, &k2, &table, SPOT_CHECKS);
        b.check(
            "biadditive",
            Some(matches!(spot, Ok(Ok(_)))),
            format!("Gram extension agrees with g_F on {SPOT_CHECKS} sampled pairs"),
        );
    }
    let nondeg = check_nondegenerate(&table);
    b.check(
        "nondegenerate",
        Some(nondeg.nondegenerate && nondeg.routes_agree),
        format!("elementwise, Gram rank and character routes (character {})", route_state(nondeg.character)),
    );
    let table_grid = (table.left().len() * table.right().len() <= limit)
        .then(|| (0..table.left().len()).map(|i| (0..table.right().len()).map(|j| table.value(i, j)).collect()).collect());
    let pairing = PairingSection {
        direct: table.is_direct(),
        gram: table.gram().to_vec(),
        table: table_grid,
        nondegeneracy: nondeg.clone(),
    };
    b.lap("pairing");

    let basis = basis_spaces(&dims, &table);
    b.check("basis_sizes", Some(basis.is_some()), "both bases have |pi0| labels");

    let group = build_group(&k1, &k2, &table).expect("labels come from the same kernels");
    let heisenberg = heisenberg_section(&mut b, &group, u, nondeg.nondegenerate);
    b.lap("heisenberg");

    let fourier = fourier_section(&mut b, &table, &group, u, consts.as_ref(), basis.map(|x| x.0.labels.len()), &dims, limit);
    b.lap("fourier");

    finish(problem, dims, symmetry, constants_outcome, kernel_section, Some(pairing), Some(heisenberg), Some(fourier), b)
}

fn route_state(r: Option<bool>) -> &'static str {
    match r {
        Some(true) => "passed",
        Some(false) => "failed",
        None => "skipped above its ceiling",
    }
}

fn model_section(b: &mut Builder, group: &HeisenbergGroup, model: Model, u: u32) -> ModelSection {
    let rep = svn_rep_twisted(group, model, u);
    let hom = verify_homomorphism(&rep);
    let name = format!("{model:?}").to_lowercase();
    b.check(
        &format!("homomorphism_{name}"),
        Some(hom.holds()),
        format!(
            "{} pairs ({}), central character psi^{u}",
            hom.pairs_checked,
            if hom.exhaustive { "all" } else { "sampled" }
        ),
    );
    let irr = verify_irreducible(&rep).ok();
    match &irr {
        Some(c) => b.check(
            &format!("irreducible_{name}"),
            Some(c.irreducible),
            format!("sum |tr|^2 = {} against |G| = {}", c.schur_sum, c.group_order),
        ),
        None => b.check(&format!("irreducible_{name}"), None, "character sum above its ceiling"),
    }
    ModelSection { model: rep.describe(), dimension: rep.dim(), homomorphism: hom, irreducibility: irr }
}

fn heisenberg_section(b: &mut Builder, group: &HeisenbergGroup, u: u32, nondegenerate: bool) -> HeisenbergSection {
    let axioms = group.verify_axioms();
    b.check(
        "group_axioms",
        Some(axioms.holds()),
        format!("{} checks ({})", axioms.checked, if axioms.exhaustive { "all" } else { "sampled" }),
    );
    b.check(
        "center",
        Some(axioms.center_is_a == nondegenerate),
        format!("center of order {}; equals Z/p exactly when B is non-degenerate", axioms.center_order),
    );
    let x_model = model_section(b, group, Model::X, u);
    let y_model = model_section(b, group, Model::Y, u);
    let dims_ok = x_model.dimension == y_model.dimension && x_model.dimension == group.k1().len();
    b.check("model_dimensions", Some(dims_ok), format!("both models have dimension {}", x_model.dimension));
    HeisenbergSection { order: group.order(), axioms, x_model, y_model }
}

#[allow(clippy::too_many_arguments)]
fn fourier_section(
    b: &mut Builder,
    table: &PairingTable,
    group: &HeisenbergGroup,
    u: u32,
    consts: Option<&ConstantsReport>,
    basis_size: Option<usize>,
    dims: &DimReport,
    limit: usize,
) -> FourierSection {
    let inversion = verify_inversion(table, consts);
    b.check(
        "inversion",
        Some(inversion.character_identity && inversion.scaled_identity != Some(false)),
        format!(
            "character identity ({}); scaled product {}",
            inversion.method,
            match inversion.scaled_identity {
                Some(true) => "is the identity",
                Some(false) => "is not the identity",
                None => "not formed without constants",
            }
        ),
    );
    let intertwiner = verify_intertwiner(group, u);
    b.check(
        "intertwiner",
        Some(intertwiner.holds()),
        format!(
            "{} elements ({}), cycle and dual models",
            intertwiner.elements_checked,
            if intertwiner.exhaustive { "all" } else { "sampled" }
        ),
    );
    let small = table.left().len() * table.right().len() <= limit;
    FourierSection {
        basis_size,
        degree: dims.support_degree,
        twist: dims.big_d,
        forward: small.then(|| change_of_basis(table, u, consts, Direction::YFromX)),
        backward: small.then(|| change_of_basis(table, u, consts, Direction::XFromY)),
        inversion,
        intertwiner,
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    problem: &Problem,
    dims: DimReport,
    symmetry: SymmetryReport,
    constants: ConstantsOutcome,
    kernels: KernelSection,
    pairing: Option<PairingSection>,
    heisenberg: Option<HeisenbergSection>,
    fourier: Option<FourierSection>,
    b: Builder,
) -> Report {
    Report {
        schema: SCHEMA_VERSION,
        problem: problem.to_string(),
        p: problem.field.p(),
        psi_exponent: problem.options.psi_exponent,
        dimensions: dims,
        symmetry,
        constants,
        kernels,
        pairing,
        heisenberg,
        fourier,
        certificates: b.certificates,
        timings: b.timings,
    }
}

/// The representation-only pipeline: group, both models, Schur tests, a
/// decomposition, the doubled control and the intertwiner.
#[derive(Debug, Clone, Serialize)]
pub struct RepCheck {
    pub schema: u32,
    pub problem: String,
    pub group_order: Option<u64>,
    pub x_model: Option<ModelSection>,
    pub y_model: Option<ModelSection>,
    pub decomposition: Option<Decomposition>,
    /// Schur sum of the doubled X-model; `4 |G|` is expected.
    pub doubled_schur_sum: Option<i64>,
    pub intertwiner: Option<IntertwinerCertificate>,
    pub certificates: Vec<Certificate>,
}

impl RepCheck {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed != Some(false))
    }
}

pub fn rep_check(problem: &Problem) -> RepCheck {
    let f = &problem.matrix;
    let u = problem.options.psi_exponent;
    let mut b = Builder { certificates: Vec::new(), timings: Vec::new(), clock: Instant::now() };
    let mut out = RepCheck {
        schema: SCHEMA_VERSION,
        problem: problem.to_string(),
        group_order: None,
        x_model: None,
        y_model: None,
        decomposition: None,
        doubled_schur_sum: None,
        intertwiner: None,
        certificates: Vec::new(),
    };
    let opts = KernelOptions { max_ext_degree: problem.options.max_ext_degree, ..KernelOptions::default() };
    let built = joint_kernels(f, &opts)
        .map_err(|e| e.to_string())
        .and_then(|(k1, k2)| pairing_table(f, &k1, &k2).map(|t| (k1, k2, t)).map_err(|e| e.to_string()));
    let (k1, k2, table) = match built {
        Ok(x) => x,
        Err(e) => {
            b.check("group", None, format!("not built: {e}"));
            out.certificates = b.certificates;
            return out;
        }
    };
    let group = build_group(&k1, &k2, &table).expect("labels come from the same kernels");
    out.group_order = Some(group.order());
    let nondeg = check_nondegenerate(&table).nondegenerate;
    let h = heisenberg_section(&mut b, &group, u, nondeg);
    let x = svn_rep_twisted(&group, Model::X, u);
    if group.order() <= EXHAUSTIVE_CEILING {
        match brute_force_decompose(&x) {
            Ok(d) => {
                b.check(
                    "decomposition",
                    Some(d.consistent && d.complete_family && d.multiplicities == [1]),
                    format!("multiplicities {:?} against a complete family", d.multiplicities),
                );
                out.decomposition = Some(d);
            }
            Err(e) => b.check("decomposition", None, e.to_string()),
        }
    } else {
        b.check("decomposition", None, format!("group order above {EXHAUSTIVE_CEILING}"));
    }
    let doubled = x.direct_sum(&x).expect("same group");
    if let Ok(c) = verify_irreducible(&doubled) {
        b.check(
            "doubled_control",
            Some(c.schur_sum as u64 == 4 * group.order() && !c.irreducible),
            format!("sum |tr|^2 = {} = 4 |G|", c.schur_sum),
        );
        out.doubled_schur_sum = Some(c.schur_sum);
    }
    let w = verify_intertwiner(&group, u);
    b.check("intertwiner", Some(w.holds()), format!("{} elements", w.elements_checked));
    out.intertwiner = Some(w);
    out.x_model = Some(h.x_model);
    out.y_model = Some(h.y_model);
    out.certificates = b.certificates;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_problem;

    fn run(text: &str) -> Report {
        analyze(&parse_problem(text).unwrap())
    }

    #[test]
    fn artin_schreier_pipeline() {
        let r = run("p=3 n=1 | [F - 1]");
        assert!(r.all_passed(), "{}", r.summary_text());
        assert_eq!(r.kernels.route, "explicit");
        let ConstantsOutcome::Supported(c) = &r.constants else { panic!() };
        assert_eq!((c.r, c.r_prime, c.pi0_log), (0, 1, 1));
        assert_eq!(r.certificates.iter().filter(|c| c.passed.is_none()).count(), 0);
    }

    #[test]
    fn zero_map() {
        let r = run("p=2 | [0]");
        assert!(r.all_passed(), "{}", r.summary_text());
        assert_eq!(r.dimensions.big_d, 2);
        assert_eq!(r.heisenberg.as_ref().unwrap().order, 2);
        let fwd = r.fourier.as_ref().unwrap().forward.as_ref().unwrap();
        assert!(fwd.is_identity());
    }

    #[test]
    fn symmetric_input() {
        let r = run("p=2 | [F + F^-1]");
        assert!(r.all_passed(), "{}", r.summary_text());
        assert_eq!(r.symmetry.class, Symmetry::Symmetric);
        assert_eq!(r.certificate("symmetric_case").unwrap().passed, Some(true));
    }

    #[test]
    fn count_route_above_ceiling() {
        let r = run("p=3 | [F^2 + F + 2] | max_ext=1");
        assert_eq!(r.kernels.route, "count");
        assert!(r.all_passed(), "{}", r.summary_text());
        assert_eq!(r.certificate("kernel_count").unwrap().passed, Some(true));
        assert!(r.pairing.is_none());
    }

    #[test]
    fn general_matrix_and_determinism() {
        let text = "p=3 | [F, 1 + F^-1; F - 1, 2*F^2] | psi=2";
        let (a, b) = (run(text), run(text));
        assert!(a.all_passed(), "{}", a.summary_text());
        assert!(matches!(a.constants, ConstantsOutcome::ModelDependent { .. }));
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert!(a.json_with_timings().contains("\"timings\""));
        assert!(!a.canonical_json().contains("\"timings\""));
    }

    #[test]
    fn rep_check_artin_schreier() {
        let r = rep_check(&parse_problem("p=3 | [F - 1]").unwrap());
        assert!(r.all_passed());
        assert_eq!(r.doubled_schur_sum, Some(108));
    }
}
