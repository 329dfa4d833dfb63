//! Command-line front end: parse polytope/polynomial files, dispatch
//! count / sum / maximize, print exact results as text or JSON, and
//! optionally cross-check against the brute-force oracle.
//!
//! Exit codes: 0 success, 1 parse error, 2 unbounded polytope, 3 oracle
//! mismatch, 4 degree budget exceeded, 5 empty polytope.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num::{BigInt, Signed};

use latsum::arith::Rational;
use latsum::genfun::SparsePolynomial;
use latsum::polyhedra::Polytope;
use latsum::{evaluate, optimize, oracle, Error};

#[derive(Parser)]
#[command(
    name = "latsum",
    version,
    about = "Exact lattice-point counting, weighted sums, and polynomial optimization over rational polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cross-check the result against brute-force enumeration
    #[arg(long, global = true)]
    oracle: bool,

    /// Emit JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,

    /// Cap on any monomial total degree handled symbolically
    #[arg(long, global = true, default_value_t = 64, value_name = "N")]
    degree_cap: u64,

    /// Cap on bounding-box points the oracle may scan
    #[arg(long, global = true, default_value_t = 1_000_000, value_name = "N")]
    oracle_cap: u64,

    /// Worker threads for parallel evaluation (output is identical for any value)
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Count the lattice points of a polytope
    Count {
        /// Polytope file: "d m" header, then m rows "a_1 .. a_d b"
        polytope: PathBuf,
    },
    /// Sum a polynomial over the lattice points of a polytope
    Sum {
        polytope: PathBuf,
        /// Polynomial file: one monomial "c e_1 .. e_d" per line
        polynomial: PathBuf,
    },
    /// Bound and approximately maximize a non-negative polynomial
    Maximize {
        polytope: PathBuf,
        polynomial: PathBuf,
        /// Approximation error as an exact rational, e.g. 1/2
        #[arg(long, value_name = "P/Q")]
        epsilon: String,
        /// Override the summation index instead of deriving it from epsilon
        #[arg(long, value_name = "N")]
        k: Option<u32>,
        /// Recover a feasible point within (1 - epsilon) of the optimum
        #[arg(long)]
        point: bool,
    },
}

/// A failed run: exit code plus the single-line stderr diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn failure_from(e: Error) -> Failure {
    let code = match e {
        Error::Unbounded => 2,
        Error::DegreeBudgetExceeded { .. } => 4,
        Error::EmptyPolytope => 5,
        _ => 1,
    };
    Failure::new(code, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> Result<Polytope, Failure> {
    Polytope::parse(&read(path)?).map_err(failure_from)
}

fn load_polynomial(path: &Path, dim: usize, cap: u64) -> Result<SparsePolynomial, Failure> {
    SparsePolynomial::parse(&read(path)?, dim, cap).map_err(failure_from)
}

fn json_string(s: &str) -> String {
    // Values here are digits, '-', and '/', so escaping is trivial.
    format!("\"{s}\"")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Count { polytope } => {
            let p = load_polytope(polytope)?;
            let n = evaluate::count(&p).map_err(failure_from)?;
            if cli.oracle {
                let points = oracle::enumerate_points(&p, cli.oracle_cap).map_err(failure_from)?;
                if BigInt::from(points.len()) != n {
                    return Err(Failure::new(
                        3,
                        format!("oracle mismatch: count {} vs enumeration {}", n, points.len()),
                    ));
                }
            }
            if cli.json {
                Ok(format!("{{\"count\":{}}}\n", json_string(&n.to_string())))
            } else {
                Ok(format!("{n}\n"))
            }
        }
        Command::Sum {
            polytope,
            polynomial,
        } => {
            let p = load_polytope(polytope)?;
            let h = load_polynomial(polynomial, p.dim(), cli.degree_cap)?;
            let s = evaluate::weighted_sum(&p, &h).map_err(failure_from)?;
            if cli.oracle {
                let brute = oracle::brute_sum(&p, &h, cli.oracle_cap).map_err(failure_from)?;
                if brute != s {
                    return Err(Failure::new(
                        3,
                        format!("oracle mismatch: sum {s} vs enumeration {brute}"),
                    ));
                }
            }
            if cli.json {
                Ok(format!("{{\"sum\":{}}}\n", json_string(&s.to_string())))
            } else {
                Ok(format!("{s}\n"))
            }
        }
        Command::Maximize {
            polytope,
            polynomial,
            epsilon,
            k,
            point,
        } => {
            let p = load_polytope(polytope)?;
            let f = load_polynomial(polynomial, p.dim(), cli.degree_cap)?;
            let eps: Rational = epsilon
                .parse()
                .map_err(|_| Failure::new(1, format!("bad epsilon '{epsilon}'")))?;
            if !eps.is_positive() {
                return Err(Failure::new(1, "epsilon must be positive"));
            }
            let result = optimize::maximize(&p, &f, &eps, *point, cli.degree_cap, *k)
                .map_err(failure_from)?;
            if cli.oracle {
                check_maximize_against_oracle(&p, &f, &eps, &result, cli.oracle_cap)?;
            }
            let b = &result.bounds;
            if cli.json {
                let mut out = format!(
                    "{{\"k\":{},\"count\":{},\"lower\":{},\"upper\":{}",
                    json_string(&b.k.to_string()),
                    json_string(&b.count.to_string()),
                    json_string(&b.lower.to_string()),
                    json_string(&b.upper.to_string()),
                );
                if let (Some(x), Some(v)) = (&result.point, &result.value) {
                    let coords: Vec<String> =
                        x.iter().map(|c| json_string(&c.to_string())).collect();
                    out.push_str(&format!(
                        ",\"point\":[{}],\"value\":{}",
                        coords.join(","),
                        json_string(&v.to_string())
                    ));
                }
                out.push_str("}\n");
                Ok(out)
            } else {
                let mut out = format!(
                    "k = {}\ncount = {}\nlower = {}\nupper = {}\n",
                    b.k, b.count, b.lower, b.upper
                );
                if let (Some(x), Some(v)) = (&result.point, &result.value) {
                    let coords: Vec<String> = x.iter().map(BigInt::to_string).collect();
                    out.push_str(&format!("point = [{}]\nvalue = {}\n", coords.join(", "), v));
                }
                Ok(out)
            }
        }
    }
}

fn check_maximize_against_oracle(
    p: &Polytope,
    f: &SparsePolynomial,
    eps: &Rational,
    result: &optimize::FptasResult,
    cap: u64,
) -> Result<(), Failure> {
    let brute = oracle::brute_max(p, f, cap).map_err(failure_from)?;
    let n = BigInt::from(brute.points.len());
    if n != result.bounds.count {
        return Err(Failure::new(
            3,
            format!("oracle mismatch: count {} vs enumeration {n}", result.bounds.count),
        ));
    }
    let lower = Rational::from_integer(result.bounds.lower.clone());
    let upper = Rational::from_integer(result.bounds.upper.clone());
    if lower > brute.max || upper < brute.max {
        return Err(Failure::new(
            3,
            format!(
                "oracle mismatch: bounds [{}, {}] do not bracket the maximum {}",
                result.bounds.lower, result.bounds.upper, brute.max
            ),
        ));
    }
    if let (Some(x), Some(v)) = (&result.point, &result.value) {
        if !p.contains_lattice_point(x) {
            return Err(Failure::new(3, "oracle mismatch: recovered point is infeasible"));
        }
        if *v != f.eval_int(x) {
            return Err(Failure::new(3, "oracle mismatch: reported value differs from f(point)"));
        }
        let needed = (Rational::from_integer(BigInt::from(1)) - eps) * &brute.max;
        if *v < needed {
            return Err(Failure::new(
                3,
                format!("oracle mismatch: value {v} below (1-eps) optimum {needed}"),
            ));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            _ => {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
        },
    };
    let threads = cli.threads.max(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot build thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("latsum: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
