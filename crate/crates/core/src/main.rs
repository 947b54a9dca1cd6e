#![allow(clippy::needless_range_loop)]

//! Command-line front end: matrix generation, factor/verify/solve
//! subcommands, and a benchmark harness with CSV output.
//!
//! Exit codes: 0 success, 1 usage or I/O failure, 2 numerical failure
//! (singular pivot, rank deficiency, or a failed invariant check).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use luvar::error::Error;
use luvar::io;
use luvar::matrix::DenseMatrix;
use luvar::nopiv::lu_nopiv;
use luvar::piv::{factor_piv, lu_piv, PackedLu};
use luvar::pivot::PivotVector;
use luvar::variant::VariantId;
use luvar::verify;
use luvar::{generate, solve};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "luvar",
    version,
    about = "Dense LU factorization variants with runtime invariant checking"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a matrix: kinds are `random`, `growth`, `singular-minor(K)`,
    /// `rankdef(K)`.
    Gen {
        kind: String,
        m: usize,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a matrix file; writes packed L\U plus pivots (or plain L\U for
    /// the no-pivot variants).
    Factor {
        input: PathBuf,
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a factorization with the loop invariant checked at every
    /// iteration, then check the postcondition.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        alg: AlgArgs,
        /// Invariant to check the state against (defaults to the variant's
        /// own; pass a different one to see it fail).
        #[arg(long)]
        invariant: Option<String>,
        /// Residual tolerance; defaults to 50*n*eps*maxabs.
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the flat key=value report stream instead of the table.
        #[arg(long)]
        raw: bool,
    },
    /// Solve A x = b given a matrix or packed factorization file and a
    /// right-hand-side vector file.
    Solve {
        system: PathBuf,
        rhs: PathBuf,
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time variants on seeded random matrices and write one CSV row per run.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Comma-separated variant families; an empty list yields a
        /// header-only CSV.
        #[arg(long, value_delimiter = ',')]
        variants: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        nb: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgArgs {
    /// One of nopiv1..nopiv5, piv3a, piv3b, piv4, piv5.
    #[arg(long, default_value = "piv5")]
    variant: String,
    /// Block size for pivoted variants; 0 means unblocked.
    #[arg(long, default_value_t = 0)]
    nb: usize,
}

impl AlgArgs {
    fn id(&self) -> Result<VariantId, Error> {
        Ok(self.variant.parse::<VariantId>()?.with_nb(self.nb))
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Singular { .. } | Error::RankDeficient { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a pipe closes (e.g. `luvar verify ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code is 2; the contract reserves 2 for
            // numerical failures, so usage problems map to 1. Help and
            // version requests still succeed.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| Failure::usage(e.to_string())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Gen {
            kind,
            m,
            n,
            seed,
            out,
        } => cmd_gen(&kind, m, n, seed, out.as_deref()),
        Cmd::Factor { input, alg, out } => cmd_factor(&input, &alg, out.as_deref()),
        Cmd::Verify {
            input,
            alg,
            invariant,
            tol,
            raw,
        } => cmd_verify(&input, &alg, invariant.as_deref(), tol, raw),
        Cmd::Solve {
            system,
            rhs,
            alg,
            out,
        } => cmd_solve(&system, &rhs, &alg, out.as_deref()),
        Cmd::Bench {
            sizes,
            variants,
            nb,
            trials,
            seed,
            out,
        } => cmd_bench(&sizes, &variants, &nb, trials, seed, out.as_deref()),
    }
}

fn cmd_gen(kind: &str, m: usize, n: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let matrix = parse_gen_kind(kind, m, n, seed)?;
    emit(out, &io::matrix_to_string(&matrix))
}

fn parse_gen_kind(kind: &str, m: usize, n: usize, seed: u64) -> Result<DenseMatrix, Failure> {
    if kind == "random" {
        return Ok(generate::random(seed, m, n));
    }
    if kind == "growth" {
        return Ok(generate::growth(m, n));
    }
    if let Some(k) = parse_parameterized(kind, "singular-minor") {
        return Ok(generate::singular_minor(seed, m, n, k?)?);
    }
    if let Some(k) = parse_parameterized(kind, "rankdef") {
        return Ok(generate::rankdef(seed, m, n, k?)?);
    }
    Err(Failure::usage(format!(
        "unknown kind {kind:?} (expected random, growth, singular-minor(K), rankdef(K))"
    )))
}

fn parse_parameterized(kind: &str, name: &str) -> Option<Result<usize, Failure>> {
    let rest = kind.strip_prefix(name)?;
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .map(|k| {
            k.parse::<usize>()
                .map_err(|_| Failure::usage(format!("bad parameter in {kind:?}")))
        });
    Some(inner.unwrap_or_else(|| Err(Failure::usage(format!("{name} needs a (K) parameter")))))
}

fn cmd_factor(input: &Path, alg: &AlgArgs, out: Option<&Path>) -> Result<(), Failure> {
    let a = io::read_matrix_file(input)?;
    match alg.id()? {
        VariantId::Nopiv(v) => {
            let mut work = a;
            lu_nopiv(&mut work, v, None)?;
            emit(out, &io::matrix_to_string(&work))
        }
        VariantId::Piv(v, mode) => {
            let lu = factor_piv(a, v, mode)?;
            emit(out, &io::packed_to_string(&lu))
        }
    }
}

fn cmd_verify(
    input: &Path,
    alg: &AlgArgs,
    invariant: Option<&str>,
    tol: Option<f64>,
    raw: bool,
) -> Result<(), Failure> {
    let a = io::read_matrix_file(input)?;
    let tol = tol.unwrap_or_else(|| verify::default_tolerance(&a));
    let reports =
        match alg.id()? {
            VariantId::Nopiv(v) => {
                let inv = match invariant {
                    None => v,
                    Some(name) => match name.parse::<VariantId>()? {
                        VariantId::Nopiv(iv) => iv,
                        VariantId::Piv(..) => return Err(Failure::usage(
                            "a no-pivot variant can only be checked against a no-pivot invariant",
                        )),
                    },
                };
                verify::run_nopiv_checked(&a, v, inv, tol)?
            }
            VariantId::Piv(v, mode) => {
                let inv =
                    match invariant {
                        None => v,
                        Some(name) => match name.parse::<VariantId>()? {
                            VariantId::Piv(iv, _) => iv,
                            VariantId::Nopiv(_) => return Err(Failure::usage(
                                "a pivoted variant can only be checked against a pivoted invariant",
                            )),
                        },
                    };
                verify::run_piv_checked(&a, v, mode, inv, tol)?
            }
        };
    if raw {
        for r in &reports {
            println!("{r}\n");
        }
    } else {
        print_report_table(&reports);
    }
    let all_passed = reports.iter().all(|r| r.passed);
    if all_passed {
        println!("verify: all {} checks passed", reports.len());
        Ok(())
    } else {
        Err(Failure::numerical(format!(
            "{} of {} checks failed",
            reports.iter().filter(|r| !r.passed).count(),
            reports.len()
        )))
    }
}

/// Renders the report stream as one table row per check.
fn print_report_table(reports: &[luvar::verify::InvariantReport]) {
    println!(
        "{:>12} {:>13} {:>7} {:>10} {:>7}",
        "check", "worst_resid", "exact", "max|l|", "result"
    );
    for r in reports {
        let label = match r.variant {
            Some(_) if r.conjunct_residuals.contains_key("reconstruction") => "post".to_string(),
            None => "post".to_string(),
            Some(_) => format!("k={}", r.iteration),
        };
        let worst = r.conjunct_residuals.values().fold(0.0f64, |m, &v| m.max(v));
        let exact = if r.exact_conjuncts_ok.is_empty() {
            "-".to_string()
        } else if r.exact_conjuncts_ok.values().all(|&b| b) {
            "ok".to_string()
        } else {
            "FAIL".to_string()
        };
        let mult = match r.multiplier_bound {
            Some(b) => format!("{b:.4}"),
            None => "-".to_string(),
        };
        println!(
            "{:>12} {:>13.3e} {:>7} {:>10} {:>7}",
            label,
            worst,
            exact,
            mult,
            if r.passed { "pass" } else { "FAIL" }
        );
    }
}

fn read_rhs(path: &Path) -> Result<Vec<f64>, Failure> {
    let m = io::read_matrix_file(path)?;
    if m.cols() == 1 {
        Ok((0..m.rows()).map(|i| m.get(i, 0)).collect())
    } else if m.rows() == 1 {
        Ok((0..m.cols()).map(|j| m.get(0, j)).collect())
    } else {
        Err(Failure::usage(format!(
            "right-hand side must be a vector, got {}x{}",
            m.rows(),
            m.cols()
        )))
    }
}

fn cmd_solve(system: &Path, rhs: &Path, alg: &AlgArgs, out: Option<&Path>) -> Result<(), Failure> {
    let b = read_rhs(rhs)?;
    let (lu, original) = match io::read_system_file(system)? {
        io::SystemFile::Packed(lu) => (lu, None),
        io::SystemFile::Matrix(a) => {
            let (v, mode) = match alg.id()? {
                VariantId::Piv(v, mode) => (v, mode),
                VariantId::Nopiv(_) => {
                    return Err(Failure::usage(
                        "solve uses the pivoted factorization; pass a piv* variant",
                    ))
                }
            };
            (factor_piv(a.clone(), v, mode)?, Some(a))
        }
    };
    let x = solve(&lu, &b)?;

    let n = x.len();
    let x_max = x.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let residual = match &original {
        Some(a) => {
            // max |b - A x| over the original system.
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let mut ax = 0.0;
                for j in 0..n {
                    ax += a.get(i, j) * x[j];
                }
                worst = worst.max((b[i] - ax).abs());
            }
            let denom = n as f64 * a.max_abs() * x_max;
            if denom == 0.0 {
                0.0
            } else {
                worst / denom
            }
        }
        None => {
            // Only the factors are available: check L U x = P b.
            let recon = lu.reconstruct();
            let mut pb = b.clone();
            lu.pivots()
                .apply_vec_forward(&mut pb)
                .map_err(Failure::from)?;
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let mut s = 0.0;
                for j in 0..n {
                    s += recon.get(i, j) * x[j];
                }
                worst = worst.max((pb[i] - s).abs());
            }
            let denom = n as f64 * recon.max_abs() * x_max;
            if denom == 0.0 {
                0.0
            } else {
                worst / denom
            }
        }
    };
    println!("relative_residual={residual}");

    let xm = DenseMatrix::from_fn(n, 1, |i, _| x[i]);
    emit(out, &io::matrix_to_string(&xm))
}

fn bench_seed(base: u64, n: usize, trial: usize) -> u64 {
    base ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (trial as u64).wrapping_mul(0x85EB_CA6B)
}

fn cmd_bench(
    sizes: &[usize],
    variants: &[String],
    nbs: &[usize],
    trials: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let parsed: Vec<VariantId> = variants
        .iter()
        .map(|s| s.parse::<VariantId>().map_err(Failure::from))
        .collect::<Result<_, _>>()?;

    let mut csv = String::from("variant,m,n,nb,trial,wall_seconds,residual,growth,c\n");
    let mut any_failed = false;
    for &n in sizes {
        for trial in 0..trials {
            let a = generate::random(bench_seed(seed, n, trial), n, n);
            for &family in &parsed {
                for &nb in nbs {
                    let id = family.with_nb(nb);
                    let row = bench_one(&a, id, trial);
                    any_failed |= row.failed;
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{},{},{},{}",
                        if row.failed {
                            format!("{}!failed", id.family())
                        } else {
                            id.family()
                        },
                        n,
                        n,
                        nb,
                        trial,
                        row.wall_seconds,
                        row.residual,
                        row.growth,
                        row.c
                    );
                }
            }
        }
    }
    emit(out, &csv)?;
    if any_failed {
        Err(Failure::numerical("one or more bench runs failed"))
    } else {
        Ok(())
    }
}

struct BenchRow {
    wall_seconds: f64,
    residual: f64,
    growth: f64,
    c: f64,
    failed: bool,
}

fn bench_one(a: &DenseMatrix, id: VariantId, _trial: usize) -> BenchRow {
    let mut failed = BenchRow {
        wall_seconds: 0.0,
        residual: f64::NAN,
        growth: f64::NAN,
        c: f64::NAN,
        failed: true,
    };
    let start = Instant::now();
    let lu: Result<PackedLu, Error> = match id {
        VariantId::Nopiv(v) => {
            let mut work = a.clone();
            lu_nopiv(&mut work, v, None).and_then(|()| {
                let n = work.cols();
                PackedLu::from_parts(work, PivotVector::identity(n, n)?)
            })
        }
        VariantId::Piv(v, mode) => {
            let mut work = a.clone();
            lu_piv(&mut work, v, mode, None).and_then(|p| PackedLu::from_parts(work, p))
        }
    };
    let wall = start.elapsed().as_secs_f64();
    failed.wall_seconds = wall;
    let lu = match lu {
        Ok(lu) => lu,
        Err(_) => return failed,
    };
    let tol = verify::default_tolerance(a);
    let post = match verify::check_postcondition(&lu, a, tol) {
        Ok(r) => r,
        Err(_) => return failed,
    };
    let report = match verify::backward_error(&lu, a) {
        Ok(r) => r,
        Err(_) => return failed,
    };
    let growth = match verify::growth_factor(a, id) {
        Ok(g) => g,
        Err(_) => return failed,
    };
    let passed = match id {
        // No-pivot runs make no multiplier claim.
        VariantId::Nopiv(_) => post.conjunct_residuals["reconstruction"] <= tol,
        VariantId::Piv(..) => post.passed,
    };
    BenchRow {
        wall_seconds: wall,
        residual: post.conjunct_residuals["reconstruction"],
        growth,
        c: report.componentwise_c,
        failed: !passed,
    }
}
