//! Batch command-line front end.
//!
//! Circuits are read and written in netlist form, with `-` standing for
//! the standard stream, so every subcommand composes in a pipeline. Data
//! goes to stdout and diagnostics to stderr. Exit codes: 0 means the
//! command ran and its verdict (if any) was equivalent or valid, 1 means
//! it ran and the verdict was inequivalent or invalid, 2 is a usage or
//! I/O error, and 3 means an exhaustive guard or expansion budget was
//! exceeded. Report output starts with a `#` header echoing the resolved
//! configuration, so archived runs are self-describing; with identical
//! arguments and seeds the output is byte-identical across runs.

use std::env;
use std::fs;
use std::io::Read;
use std::ops::RangeInclusive;

use clap::{Parser, Subcommand, ValueEnum};

use crate::circuit::{parse, serialize, Assignment, Circuit};
use crate::clique::{
    build_monotone_dnf_circuit, build_pon_circuit, build_shannon_circuit, clique_oracle,
    CliqueError, CliqueSpec,
};
use crate::dnf::{monotonize_dnf, to_dnf_with_budget, DnfError, DEFAULT_BUDGET};
use crate::passes::{
    constant_fold, monotonize_circuit_level, standardize, substitute_literal, PassError,
};
use crate::verify::{
    blowup_report, check_theorem1, check_theorem2, equiv_exhaustive, render_blowup_csv,
    search_counterexample, Mode, Verdict, VerifyConfig, VerifyError, DEFAULT_GUARD,
};

/// Environment variable overriding the exhaustive guard; an explicit
/// `--guard` flag wins over it.
pub const GUARD_ENV: &str = "MONOCLIQUE_GUARD";

#[derive(Parser)]
#[command(
    name = "monoclique",
    version,
    about = "Boolean-circuit toolkit for clique functions: standard form, DNF \
             expansion, negation elimination, and exhaustive verification"
)]
struct Cli {
    /// Worker threads for exhaustive sweeps (default: all cores).
    ///
    /// Output is identical regardless of the thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a netlist and echo its canonical form.
    ///
    /// An invalid netlist is a verdict, not a usage error: the command
    /// exits 1 with the diagnosis on stderr.
    Parse {
        /// Circuit file, `-` for stdin.
        file: String,
    },
    /// Evaluate a circuit on one assignment and print 0 or 1.
    Eval {
        /// Circuit file, `-` for stdin.
        file: String,
        /// Assignment bits in variable order, e.g. 0110.
        #[arg(long)]
        input: String,
    },
    /// Rewrite a circuit to standard form (negations on inputs only).
    Standardize {
        /// Circuit file, `-` for stdin.
        file: String,
    },
    /// Propagate constants and prune unreachable gates.
    Fold {
        /// Circuit file, `-` for stdin.
        file: String,
    },
    /// Expand a standard circuit to its canonical DNF.
    Dnf {
        /// Circuit file, `-` for stdin.
        file: String,
        /// Maximum monomials held at any point during expansion.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Replace one negated input with constant 1 and fold.
    Substitute {
        /// Circuit file, `-` for stdin.
        file: String,
        /// Variable index whose negated literal is replaced.
        #[arg(long)]
        var: usize,
    },
    /// Remove all negated inputs, at circuit or DNF level.
    Monotonize {
        /// Circuit file, `-` for stdin.
        file: String,
        /// circuit: substitution passes, netlist out; dnf: sound
        /// DNF-level elimination, DNF text out.
        #[arg(long, value_enum)]
        mode: LevelArg,
        /// Maximum monomials held during expansion (dnf mode only).
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Emit a clique circuit in netlist form.
    Gen {
        /// Circuit family to generate.
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Number of graph vertices.
        #[arg(long)]
        m: usize,
        /// Clique size sought.
        #[arg(long)]
        s: usize,
        /// Pivot variables for --kind shannon, e.g. 0,1.
        #[arg(long, value_delimiter = ',', value_name = "A,B,...")]
        pivots: Vec<usize>,
    },
    /// Evaluate the brute-force clique oracle on one assignment.
    Oracle {
        /// Number of graph vertices.
        #[arg(long)]
        m: usize,
        /// Clique size sought.
        #[arg(long)]
        s: usize,
        /// Edge bits in lexicographic pair order, e.g. 110100.
        #[arg(long)]
        input: String,
    },
    /// Compare two circuits on all assignments.
    Equiv {
        /// First circuit file, `-` for stdin.
        file_a: String,
        /// Second circuit file, `-` for stdin.
        file_b: String,
        /// Maximum variable count for the exhaustive sweep.
        #[arg(long)]
        guard: Option<usize>,
    },
    /// Check one negated-input substitution against the clique oracle.
    #[command(name = "check-theorem1")]
    CheckTheorem1 {
        /// Circuit file, `-` for stdin.
        file: String,
        /// Number of graph vertices.
        #[arg(long)]
        m: usize,
        /// Clique size sought.
        #[arg(long)]
        s: usize,
        /// Variable index whose negated literal is replaced.
        #[arg(long)]
        var: usize,
        /// circuit: substitute and compare; dnf: eliminate in the DNF
        /// and compare.
        #[arg(long, value_enum)]
        mode: LevelArg,
        /// Maximum variable count for the exhaustive sweep.
        #[arg(long)]
        guard: Option<usize>,
        /// Maximum monomials held during DNF expansion.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Check full negation removal against the clique oracle.
    #[command(name = "check-theorem2")]
    CheckTheorem2 {
        /// Circuit file, `-` for stdin.
        file: String,
        /// Number of graph vertices.
        #[arg(long)]
        m: usize,
        /// Clique size sought.
        #[arg(long)]
        s: usize,
        /// circuit: substitution passes; dnf: sound DNF-level
        /// elimination.
        #[arg(long, value_enum)]
        mode: LevelArg,
        /// Maximum variable count for the exhaustive sweep.
        #[arg(long)]
        guard: Option<usize>,
        /// Maximum monomials held during DNF expansion.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Hunt for substitution counterexamples over random rewrites.
    ///
    /// Each trial derives a clique circuit, applies random
    /// function-preserving rewrites, and checks every negated input at
    /// circuit level. Failure reports carry the seed and trial for
    /// replay. Exits 1 if any trial refutes the substitution claim.
    Search {
        /// Number of graph vertices.
        #[arg(long)]
        m: usize,
        /// Clique size sought.
        #[arg(long)]
        s: usize,
        /// Number of independent trials.
        #[arg(long)]
        trials: u64,
        /// Base seed; trial k uses stream k of this seed.
        #[arg(long)]
        seed: u64,
        /// Rewrites applied per trial.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Maximum variable count for the exhaustive sweep.
        #[arg(long)]
        guard: Option<usize>,
        /// Maximum monomials held during DNF expansion.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Tabulate DNF blow-up for Shannon clique circuits as CSV.
    ///
    /// Rows whose expansion exceeds the budget are kept with
    /// budget_exceeded cells; the command still exits 0 because the
    /// table itself is the result.
    Blowup {
        /// Vertex counts to sweep, inclusive on both ends.
        #[arg(long = "m-range", value_name = "A..B")]
        m_range: String,
        /// Clique size sought.
        #[arg(long)]
        s: usize,
        /// Pivot counts, one table row each; count k pivots on the
        /// first k variables.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0, 1, 2], value_name = "K,...")]
        pivot_counts: Vec<usize>,
        /// Maximum monomials held during expansion.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

/// Which level a transformation or check operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Circuit,
    Dnf,
}

impl From<LevelArg> for Mode {
    fn from(value: LevelArg) -> Mode {
        match value {
            LevelArg::Circuit => Mode::Circuit,
            LevelArg::Dnf => Mode::Dnf,
        }
    }
}

/// Clique circuit families `gen` can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Canonical monotone DNF circuit.
    Monotone,
    /// Shannon expansion around pivot variables.
    Shannon,
    /// Monotone circuit plus a dead contradictory term.
    Pon,
}

/// A diagnostic paired with the exit code it maps to.
#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn limit(message: impl Into<String>) -> CliError {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::usage(format!("I/O error: {e}"))
    }
}

impl From<PassError> for CliError {
    fn from(e: PassError) -> CliError {
        CliError::usage(e.to_string())
    }
}

impl From<crate::circuit::EvalError> for CliError {
    fn from(e: crate::circuit::EvalError) -> CliError {
        CliError::usage(e.to_string())
    }
}

impl From<CliqueError> for CliError {
    fn from(e: CliqueError) -> CliError {
        CliError::usage(e.to_string())
    }
}

impl From<DnfError> for CliError {
    fn from(e: DnfError) -> CliError {
        match e {
            DnfError::BudgetExceeded { .. } => CliError::limit(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> CliError {
        match e {
            VerifyError::GuardExceeded { .. }
            | VerifyError::GuardTooLarge { .. }
            | VerifyError::Dnf(DnfError::BudgetExceeded { .. }) => CliError::limit(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

/// Parses argv, runs one subcommand, and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure {threads} threads: {e}")))?;
    }

    match cli.command {
        Command::Parse { file } => {
            let text = read_text(&file)?;
            match parse(&text) {
                Ok(c) => {
                    print!("{}", serialize(&c));
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("invalid netlist: {e}");
                    Ok(1)
                }
            }
        }
        Command::Eval { file, input } => {
            let c = read_circuit(&file)?;
            let a = parse_assignment(&input)?;
            let value = c.eval(&a)?;
            println!("{}", u8::from(value));
            Ok(0)
        }
        Command::Standardize { file } => {
            let c = read_circuit(&file)?;
            print!("{}", serialize(&standardize(&c)?));
            Ok(0)
        }
        Command::Fold { file } => {
            let c = read_circuit(&file)?;
            print!("{}", serialize(&constant_fold(&c)?));
            Ok(0)
        }
        Command::Dnf { file, budget } => {
            let c = read_circuit(&file)?;
            println!("{}", to_dnf_with_budget(&c, budget)?);
            Ok(0)
        }
        Command::Substitute { file, var } => {
            let c = read_circuit(&file)?;
            if var >= c.num_vars() {
                return Err(CliError::usage(format!(
                    "--var {var} out of range for {} variables",
                    c.num_vars()
                )));
            }
            print!("{}", serialize(&substitute_literal(&c, var)?));
            Ok(0)
        }
        Command::Monotonize { file, mode, budget } => {
            let c = read_circuit(&file)?;
            match mode {
                LevelArg::Circuit => print!("{}", serialize(&monotonize_circuit_level(&c)?)),
                LevelArg::Dnf => println!("{}", monotonize_dnf(&to_dnf_with_budget(&c, budget)?)),
            }
            Ok(0)
        }
        Command::Gen { kind, m, s, pivots } => {
            let spec = CliqueSpec::new(m, s)?;
            if kind != KindArg::Shannon && !pivots.is_empty() {
                return Err(CliError::usage("--pivots only applies to --kind shannon"));
            }
            let c = match kind {
                KindArg::Monotone => build_monotone_dnf_circuit(spec),
                KindArg::Shannon => build_shannon_circuit(spec, &pivots)?,
                KindArg::Pon => {
                    if spec.num_vars() == 0 {
                        return Err(CliError::usage(
                            "--kind pon needs at least one edge variable; use m >= 2",
                        ));
                    }
                    build_pon_circuit(spec)
                }
            };
            print!("{}", serialize(&c));
            Ok(0)
        }
        Command::Oracle { m, s, input } => {
            let spec = CliqueSpec::new(m, s)?;
            let a = parse_assignment(&input)?;
            let value = clique_oracle(spec, &a)?;
            println!("{}", u8::from(value));
            Ok(0)
        }
        Command::Equiv {
            file_a,
            file_b,
            guard,
        } => {
            let a = read_circuit(&file_a)?;
            let b = read_circuit(&file_b)?;
            let guard = resolve_guard(guard)?;
            let report = equiv_exhaustive(&a, &b, a.num_vars(), guard)?;
            println!("# guard={guard}");
            println!("{report}");
            Ok(verdict_exit(report.verdict))
        }
        Command::CheckTheorem1 {
            file,
            m,
            s,
            var,
            mode,
            guard,
            budget,
        } => {
            let c = read_circuit(&file)?;
            let spec = CliqueSpec::new(m, s)?;
            let guard = resolve_guard(guard)?;
            let cfg = VerifyConfig { guard, budget };
            let report = check_theorem1(&c, spec, var, mode.into(), cfg)?;
            println!("# guard={guard} budget={budget}");
            println!("{report}");
            Ok(verdict_exit(report.verdict))
        }
        Command::CheckTheorem2 {
            file,
            m,
            s,
            mode,
            guard,
            budget,
        } => {
            let c = read_circuit(&file)?;
            let spec = CliqueSpec::new(m, s)?;
            let guard = resolve_guard(guard)?;
            let cfg = VerifyConfig { guard, budget };
            let report = check_theorem2(&c, spec, mode.into(), cfg)?;
            println!("# guard={guard} budget={budget}");
            println!("{report}");
            Ok(verdict_exit(report.verdict))
        }
        Command::Search {
            m,
            s,
            trials,
            seed,
            depth,
            guard,
            budget,
        } => {
            let spec = CliqueSpec::new(m, s)?;
            let guard = resolve_guard(guard)?;
            let cfg = VerifyConfig { guard, budget };
            let failures = search_counterexample(spec, depth, trials, seed, cfg)?;
            println!("# seed={seed} trials={trials} depth={depth} guard={guard} budget={budget}");
            for (i, failure) in failures.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                println!("{failure}");
            }
            if failures.is_empty() {
                Ok(0)
            } else {
                eprintln!(
                    "{} of {trials} trials refuted the substitution claim",
                    failures.len()
                );
                Ok(1)
            }
        }
        Command::Blowup {
            m_range,
            s,
            pivot_counts,
            budget,
        } => {
            let range = parse_m_range(&m_range)?;
            let rows = blowup_report(range, s, &pivot_counts, budget)?;
            println!("# budget={budget}");
            print!("{}", render_blowup_csv(&rows));
            Ok(0)
        }
    }
}

fn verdict_exit(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Equivalent => 0,
        Verdict::Inequivalent => 1,
        Verdict::BudgetExceeded => 3,
    }
}

fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))
    }
}

fn read_circuit(path: &str) -> Result<Circuit, CliError> {
    let text = read_text(path)?;
    parse(&text).map_err(|e| CliError::usage(format!("invalid netlist in {path}: {e}")))
}

fn parse_assignment(bits: &str) -> Result<Assignment, CliError> {
    bits.parse()
        .map_err(|e| CliError::usage(format!("invalid --input: {e}")))
}

/// Resolves the exhaustive guard: flag, then environment, then default.
fn resolve_guard(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(guard) = flag {
        return Ok(guard);
    }
    match env::var(GUARD_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{GUARD_ENV} must be a number, got {raw:?}"))),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_GUARD),
        Err(env::VarError::NotUnicode(_)) => {
            Err(CliError::usage(format!("{GUARD_ENV} is not valid UTF-8")))
        }
    }
}

/// Parses `A..B` (or `A..=B`) as the inclusive vertex range A through B.
fn parse_m_range(text: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::usage(format!("invalid --m-range {text:?}, expected A..B"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(CliError::usage(format!(
            "--m-range {text:?} is empty, the end is inclusive"
        )));
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_line_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn m_range_is_inclusive_and_tolerates_both_spellings() {
        assert_eq!(parse_m_range("4..8").unwrap(), 4..=8);
        assert_eq!(parse_m_range("4..=8").unwrap(), 4..=8);
        assert_eq!(parse_m_range("5..5").unwrap(), 5..=5);
        assert!(parse_m_range("8..4").is_err());
        assert!(parse_m_range("4").is_err());
        assert!(parse_m_range("a..b").is_err());
    }

    #[test]
    fn verdicts_map_to_the_documented_exit_codes() {
        assert_eq!(verdict_exit(Verdict::Equivalent), 0);
        assert_eq!(verdict_exit(Verdict::Inequivalent), 1);
        assert_eq!(verdict_exit(Verdict::BudgetExceeded), 3);
    }

    #[test]
    fn guard_and_budget_errors_exit_3_and_preconditions_exit_2() {
        let guard: CliError = VerifyError::GuardExceeded { n: 30, guard: 20 }.into();
        assert_eq!(guard.code, 3);
        let too_large: CliError = VerifyError::GuardTooLarge { guard: 30, max: 24 }.into();
        assert_eq!(too_large.code, 3);
        let budget: CliError = DnfError::BudgetExceeded {
            reached: 7,
            budget: 6,
        }
        .into();
        assert_eq!(budget.code, 3);
        let nested: CliError = VerifyError::Dnf(DnfError::BudgetExceeded {
            reached: 7,
            budget: 6,
        })
        .into();
        assert_eq!(nested.code, 3);
        let not_standard: CliError = VerifyError::NotStandard.into();
        assert_eq!(not_standard.code, 2);
        let not_clique: CliError = VerifyError::NotCliqueCircuit {
            m: 4,
            s: 3,
            witness: "000111".into(),
        }
        .into();
        assert_eq!(not_clique.code, 2);
    }
}
