//! Problem files, the analysis pipeline and its report, the enumeration
//! oracle, and the self-test used by the command-line tool.

mod oracle;
mod problem;
mod report;
mod selftest;

pub use oracle::{oracle_kernel, OracleError, OracleKernel, ORACLE_CEILING};
pub use problem::{parse_problem, random_poly, random_problem, Detail, Problem, ProblemError, ProblemOptions};
pub use report::{
    analyze, rep_check, Certificate, ConstantsOutcome, FourierSection, HeisenbergSection, KernelSection, ModelSection,
    PairingSection, RepCheck, Report, Timing, SCHEMA_VERSION,
};
pub use selftest::{selftest, SelfCheck, SelftestReport};
