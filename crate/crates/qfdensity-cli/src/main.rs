//! Command-line front end for the local-density library: single
//! evaluations, solution counting by any of the three evaluators, density
//! tables, Gauss sums, and the cross-check grids.
//!
//! Exit codes: 0 success, 2 usage or validation failure, 3 resource limit,
//! 4 verification mismatch. Stdout carries data; stderr carries diagnostics.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use qfdensity::density::{exact_count, local_density};
use qfdensity::gauss::{gauss_sum_exact, gauss_sum_float};
use qfdensity::localcount::{
    count_bruteforce_with_cap, count_via_gauss_float, DiagonalForm, DEFAULT_BRUTE_CAP,
};
use qfdensity::verify::{run_all, VerifyConfig};
use qfdensity::{Error, OddPrime};

#[derive(Parser)]
#[command(
    name = "qfdensity",
    version,
    about = "Exact p-adic local densities of diagonal ternary quadratic forms at odd primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the local density alpha_p(m, Q) in closed form
    Density(DensityArgs),
    /// Count solutions of Q = m over Z/nZ
    Count(CountArgs),
    /// Run the cross-check families over their pinned grids
    Verify(VerifyArgs),
    /// Tabulate densities over a range of targets as CSV
    Table(TableArgs),
    /// Evaluate a quadratic Gauss sum symbolically, with a float cross-check
    Gauss(GaussArgs),
}

#[derive(Args)]
struct FormArgs {
    /// Coefficient of x^2
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    /// Coefficient of y^2
    #[arg(long, allow_negative_numbers = true)]
    b: i64,
    /// Coefficient of z^2
    #[arg(long, allow_negative_numbers = true)]
    c: i64,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    form: FormArgs,
    /// The odd prime p
    #[arg(long)]
    p: u64,
    /// Target integer m
    #[arg(long, allow_negative_numbers = true)]
    m: i64,
    /// Also print the local counts r(m, Q; p^k) for k = 1..=K
    #[arg(long, value_name = "K")]
    show_counts: Option<u32>,
    /// Emit one JSON object instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    form: FormArgs,
    /// Target integer m
    #[arg(long, allow_negative_numbers = true)]
    m: i64,
    /// Modulus n (alternative to --p/--k)
    #[arg(long, conflicts_with_all = ["p", "k"])]
    n: Option<u64>,
    /// The odd prime p (with --k: modulus p^k)
    #[arg(long)]
    p: Option<u64>,
    /// Depth k (with --p: modulus p^k)
    #[arg(long)]
    k: Option<u32>,
    /// Evaluation method; repeat to cross-check several
    #[arg(long = "method", value_enum)]
    methods: Vec<Method>,
    /// Replace the brute-force modulus cap (default 10000)
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Histogram enumeration over (Z/nZ)^3
    Brute,
    /// Floating-point Gauss-sum assembly with a rounding guard
    GaussFloat,
    /// Exact symbolic stratified assembly
    Stratified,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::GaussFloat => "gauss-float",
            Method::Stratified => "stratified",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Keep only primes <= P in the grids
    #[arg(long, value_name = "P")]
    p_max: Option<u64>,
    /// Clamp the largest coefficient valuation
    #[arg(long, value_name = "C1")]
    c1_max: Option<u32>,
    /// Clamp the target valuation
    #[arg(long, value_name = "M1")]
    m1_max: Option<u32>,
    /// Replace the brute-force modulus cap (default 10000)
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    form: FormArgs,
    /// The odd prime p
    #[arg(long)]
    p: u64,
    /// Inclusive target range LO..HI
    #[arg(long, value_name = "LO..HI", allow_hyphen_values = true)]
    m_range: String,
}

#[derive(Args)]
struct GaussArgs {
    /// Numerator residue a of e(a t^2 / p^k)
    #[arg(long, allow_negative_numbers = true)]
    a: i64,
    /// The odd prime p
    #[arg(long)]
    p: u64,
    /// Exponent k of the modulus p^k
    #[arg(long)]
    k: u32,
}

// --------------------------------------------------------------------------
// Failure plumbing
// --------------------------------------------------------------------------

/// A command failure: diagnostic for stderr plus the process exit code
/// (2 usage/validation, 3 resource limit, 4 verification mismatch).
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Failure {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        let code = match err {
            Error::ResourceLimit { .. } => 3,
            Error::NumericalInstability { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn parse_prime(raw: u64) -> Result<OddPrime, Failure> {
    OddPrime::new(raw).map_err(|err| Failure::usage(format!("--p: {err}")))
}

fn parse_form(args: &FormArgs) -> Result<DiagonalForm, Failure> {
    for (flag, value) in [("--a", args.a), ("--b", args.b), ("--c", args.c)] {
        if value == 0 {
            return Err(Failure::usage(format!("{flag} must be nonzero")));
        }
    }
    DiagonalForm::new(args.a, args.b, args.c).map_err(Failure::from)
}

// --------------------------------------------------------------------------
// JSON output shape
// --------------------------------------------------------------------------

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct FormCoefficients {
    a: i64,
    b: i64,
    c: i64,
}

/// The machine-readable result of a density evaluation. The density (and
/// each count) is an exact decimal string, never a float.
#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct OutputRecord {
    form: FormCoefficients,
    p: u64,
    m: i64,
    density: String,
    branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<Vec<(u32, String)>>,
}

// --------------------------------------------------------------------------
// Subcommands
// --------------------------------------------------------------------------

/// r(m, Q; p^k), exact where the stratified evaluators reach, enumeration
/// otherwise (the null target below its stabilization depth).
fn one_count(m: &BigInt, q: &DiagonalForm, p: OddPrime, k: u32) -> Result<BigInt, Failure> {
    match exact_count(m, q, p, k) {
        Ok(r) => Ok(r),
        Err(Error::DepthTooSmall { .. }) => {
            let n = p.get().saturating_pow(k);
            Ok(BigInt::from(count_bruteforce_with_cap(
                m,
                q,
                n,
                DEFAULT_BRUTE_CAP,
            )?))
        }
        Err(err) => Err(err.into()),
    }
}

fn cmd_density(args: &DensityArgs) -> Result<(), Failure> {
    let p = parse_prime(args.p)?;
    let q = parse_form(&args.form)?;
    let m = BigInt::from(args.m);
    let result = local_density(&m, &q, p);
    let counts = match args.show_counts {
        None => None,
        Some(kmax) => {
            let mut list = Vec::with_capacity(kmax as usize);
            for k in 1..=kmax {
                list.push((k, one_count(&m, &q, p, k)?));
            }
            Some(list)
        }
    };
    if args.json {
        let record = OutputRecord {
            form: FormCoefficients {
                a: args.form.a,
                b: args.form.b,
                c: args.form.c,
            },
            p: args.p,
            m: args.m,
            density: result.value.to_string(),
            branch: result.branch.to_string(),
            counts: counts.map(|list| {
                list.into_iter()
                    .map(|(k, r)| (k, r.to_string()))
                    .collect()
            }),
        };
        println!(
            "{}",
            serde_json::to_string(&record).expect("record serializes")
        );
    } else {
        println!("alpha = {}, branch = {}", result.value, result.branch);
        if let Some(list) = counts {
            for (k, r) in list {
                println!("r({}^{}) = {}", args.p, k, r);
            }
        }
    }
    Ok(())
}

fn cmd_count(args: &CountArgs) -> Result<(), Failure> {
    let q = parse_form(&args.form)?;
    let m = BigInt::from(args.m);
    let cap = args.cap.unwrap_or(DEFAULT_BRUTE_CAP);

    let (n, prime_depth) = match (args.n, args.p, args.k) {
        (Some(n), None, None) => {
            if n == 0 {
                return Err(Failure::usage("--n must be positive"));
            }
            (n, None)
        }
        (None, Some(p), Some(k)) => {
            let p = parse_prime(p)?;
            let n = p.get().checked_pow(k).ok_or_else(|| Failure {
                code: 3,
                message: format!("--p/--k: modulus {}^{} overflows", p, k),
            })?;
            (n, Some((p, k)))
        }
        (None, _, _) => {
            return Err(Failure::usage(
                "supply either --n or both --p and --k",
            ))
        }
        _ => unreachable!("clap rejects --n together with --p/--k"),
    };

    let methods: Vec<Method> = if args.methods.is_empty() {
        vec![Method::Brute]
    } else {
        args.methods.clone()
    };

    let mut values: Vec<BigInt> = Vec::with_capacity(methods.len());
    for method in &methods {
        let value = match method {
            Method::Brute => BigInt::from(count_bruteforce_with_cap(&m, &q, n, cap)?),
            Method::GaussFloat => {
                let (p, k) = prime_depth.ok_or_else(|| {
                    Failure::usage("--method gauss-float requires --p and --k")
                })?;
                BigInt::from(count_via_gauss_float(&m, &q, p, k)?)
            }
            Method::Stratified => {
                let (p, k) = prime_depth.ok_or_else(|| {
                    Failure::usage("--method stratified requires --p and --k")
                })?;
                exact_count(&m, &q, p, k)?
            }
        };
        values.push(value);
    }

    let rendered: Vec<String> = values.iter().map(BigInt::to_string).collect();
    if values.len() == 1 {
        println!("{}", rendered[0]);
        return Ok(());
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let verdict = if agree { "MATCH" } else { "MISMATCH" };
    println!("{} {}", rendered.join(" "), verdict);
    if agree {
        Ok(())
    } else {
        let detail: Vec<String> = methods
            .iter()
            .zip(&rendered)
            .map(|(method, value)| format!("{} = {}", method.name(), value))
            .collect();
        Err(Failure::mismatch(format!(
            "evaluators disagree: {}",
            detail.join(", ")
        )))
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let cfg = VerifyConfig {
        p_max: args.p_max,
        c1_max: args.c1_max,
        m1_max: args.m1_max,
        cap: args.cap,
    };
    let reports = run_all(&cfg);
    let mut total_checks = 0u64;
    let mut total_failures = 0u64;
    let mut elapsed = std::time::Duration::ZERO;
    for report in &reports {
        println!("{}", report.headline());
        for failure in report.failures.iter().take(10) {
            println!("    {failure}");
        }
        total_checks += report.checked;
        total_failures += report.failure_count;
        elapsed += report.elapsed;
    }
    if total_failures == 0 {
        println!("all families PASS ({total_checks} checks in {elapsed:.1?})");
        Ok(())
    } else {
        Err(Failure::mismatch(format!(
            "{total_failures} of {total_checks} checks failed"
        )))
    }
}

fn parse_m_range(raw: &str) -> Result<(i64, i64), Failure> {
    let malformed =
        || Failure::usage(format!("--m-range: expected LO..HI with LO <= HI, got {raw:?}"));
    let (lo, hi) = raw.split_once("..").ok_or_else(malformed)?;
    let lo: i64 = lo.trim().parse().map_err(|_| malformed())?;
    let hi: i64 = hi.trim().parse().map_err(|_| malformed())?;
    if lo > hi {
        return Err(malformed());
    }
    Ok((lo, hi))
}

fn cmd_table(args: &TableArgs) -> Result<(), Failure> {
    let p = parse_prime(args.p)?;
    let q = parse_form(&args.form)?;
    let (lo, hi) = parse_m_range(&args.m_range)?;
    println!("m,alpha_num,alpha_den,branch");
    for m in lo..=hi {
        let result = local_density(&BigInt::from(m), &q, p);
        println!(
            "{m},{},{},{}",
            result.value.numer(),
            result.value.denom(),
            result.branch
        );
    }
    Ok(())
}

fn cmd_gauss(args: &GaussArgs) -> Result<(), Failure> {
    let p = parse_prime(args.p)?;
    if args.k == 0 {
        return Err(Failure::usage("--k must be at least 1"));
    }
    let a = BigInt::from(args.a);
    let exact = gauss_sum_exact(&a, p, args.k);
    println!("{exact}");
    let modulus = p.get().checked_pow(args.k).ok_or_else(|| Failure {
        code: 3,
        message: format!("modulus {}^{} overflows", p, args.k),
    })?;
    let direct = gauss_sum_float(&a, modulus)?;
    let residual = (exact.to_complex() - direct).norm();
    println!(
        "float check: {:.6} + {:.6}i (residual {:.1e})",
        direct.re, direct.im, residual
    );
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Density(args) => cmd_density(args),
        Command::Count(args) => cmd_count(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Table(args) => cmd_table(args),
        Command::Gauss(args) => cmd_gauss(args),
    };
    if let Err(failure) = outcome {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}
