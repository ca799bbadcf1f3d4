use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biext::cli::{analyze, oracle_kernel, parse_problem, rep_check, selftest, Problem};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biext", version, about = "Pairings, Heisenberg groups and finite Fourier matrices for skew-polynomial inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and print a summary.
    Analyze {
        /// Problem file, or `-` for stdin.
        input: String,
        /// Write the canonical JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        /// Include stage timings in the JSON output.
        #[arg(long)]
        timings: bool,
    },
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Representation checks.
    Rep {
        #[command(subcommand)]
        which: RepCommand,
    },
    /// Randomized run of the core identities.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Enumerate the roots of a single entry over F_{q^s}, s <= s_max.
    Kernel {
        input: String,
        #[arg(long)]
        s_max: u32,
    },
}

#[derive(Subcommand)]
enum RepCommand {
    /// Group, models, Schur tests and intertwiner only.
    Check {
        input: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct Overrides {
    /// Use psi^u; u must be prime to p.
    #[arg(long)]
    psi_exponent: Option<u32>,
    /// Largest extension degree in which kernel points are built.
    #[arg(long)]
    max_ext_degree: Option<u32>,
}

fn read_input(input: &str) -> Result<String, String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))
    }
}

fn load(input: &str, overrides: Option<&Overrides>) -> Result<Problem, String> {
    let text = read_input(input)?;
    let mut pr = parse_problem(&text).map_err(|e| format!("{input}: {e}"))?;
    if let Some(o) = overrides {
        if let Some(u) = o.psi_exponent {
            if u % pr.field.p() == 0 {
                return Err(format!("--psi-exponent {u} is not prime to p = {}", pr.field.p()));
            }
            pr.options.psi_exponent = u % pr.field.p();
        }
        if let Some(s) = o.max_ext_degree {
            if s == 0 {
                return Err("--max-ext-degree must be positive".into());
            }
            pr.options.max_ext_degree = s;
        }
    }
    Ok(pr)
}

fn write_out(path: &Path, text: &str) -> Result<(), String> {
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Analyze { input, json, overrides, timings } => {
            let pr = load(&input, Some(&overrides))?;
            let report = analyze(&pr);
            let to_stdout = json.as_deref().is_some_and(|p| p.as_os_str() == "-");
            if to_stdout {
                eprint!("{}", report.summary_text());
            } else {
                print!("{}", report.summary_text());
            }
            if let Some(ceiling) = &report.kernels.ceiling {
                eprintln!("note: {ceiling}; points, pairing and matrices were not built");
            }
            if let Some(path) = json {
                let text = if timings { report.json_with_timings() } else { report.canonical_json() };
                write_out(&path, &text)?;
            }
            Ok(verdict(report.all_passed()))
        }
        Command::Oracle { which: OracleCommand::Kernel { input, s_max } } => {
            let pr = load(&input, None)?;
            if pr.matrix.rows() != 1 || pr.matrix.cols() != 1 {
                return Err("oracle kernel takes a 1x1 problem".into());
            }
            let f = pr.matrix.get(0, 0);
            let o = oracle_kernel(f, s_max).map_err(|e| e.to_string())?;
            let v = serde_json::json!({
                "s": o.s,
                "complete": o.complete,
                "size": o.kernel.len(),
                "points": o.kernel.points().iter().map(|pt| pt[0].to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Rep { which: RepCommand::Check { input, overrides } } => {
            let pr = load(&input, Some(&overrides))?;
            let rc = rep_check(&pr);
            println!("{}", serde_json::to_string_pretty(&rc).expect("json"));
            Ok(verdict(rc.all_passed()))
        }
        Command::Selftest { seed, cases } => {
            let r = selftest(seed, cases);
            for c in &r.checks {
                let status = if c.failures == 0 { "pass" } else { "FAIL" };
                println!("{status:4} {}: {} cases, {} failures", c.name, c.cases, c.failures);
            }
            Ok(verdict(r.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
