use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use unigeo::geodesy::{geodesic_distance, polygonal_length, PolygonalPath};
use unigeo::lab::{format_real, run_suite, suite_names, thompson_decompose_with, ExperimentConfig, ThompsonOptions};
use unigeo::matcore::{principal_unitary_log, unitary_exp, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use unigeo::norms::NormSpec;
use unigeo::Error;

const ROUND_TRIP_TOL: f64 = 1e-9;

/// Symmetric-norm geometry of the unitary group.
///
/// Matrix files are plain text: the dimension `n` on the first line, then
/// `n²` lines `re im` in row-major order.
#[derive(Parser)]
#[command(name = "unigeo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rectifiable distance between two unitaries.
    Dist {
        u: PathBuf,
        v: PathBuf,
        /// schatten:<p|inf>, kyfan:<k>, operator or trace
        #[arg(long, default_value = "operator")]
        norm: String,
    },
    /// Principal Hermitian logarithm `z` with `e^{iz} = u`.
    Log {
        u: PathBuf,
        /// Check that exponentiating the result reproduces the input.
        #[arg(long)]
        verify: bool,
    },
    /// The unitary `e^{iz}` of a Hermitian `z`.
    Exp { z: PathBuf },
    /// Length of the polygonal path through the given unitaries, each leg a
    /// short geodesic.
    Pathlen {
        #[arg(required = true, num_args = 2..)]
        vertices: Vec<PathBuf>,
        #[arg(long, default_value = "operator")]
        norm: String,
    },
    /// Search for `u, v` with `e^{ia}e^{ib} = e^{i(uau* + vbv*)}`.
    Thompson {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Run a verification suite and print its CSV report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Comma-separated norm selectors; defaults to the standard family.
    #[arg(long, value_delimiter = ',')]
    norms: Vec<String>,
    /// Tolerance override `check=value`, repeatable.
    #[arg(long = "tol", value_name = "CHECK=VALUE")]
    tolerances: Vec<String>,
}

/// A failed command: exit status and message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NormSelector { .. } | Error::UnknownSuite(_) | Error::Config(_) => 2,
            Error::NotSquare { .. } | Error::NonFinite { .. } | Error::DimensionMismatch(..) => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<String, Failure>;

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let name = path.display();
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{name}: {e}")))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (first, header) = lines.next().ok_or_else(|| Failure::usage(format!("{name}: empty file")))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("{name}:{}: expected dimension, found `{}`", first + 1, header.trim())))?;
    if n == 0 {
        return Err(Failure::usage(format!("{name}:{}: dimension must be positive", first + 1)));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, line) in lines {
        let at = |msg: &str| Failure::usage(format!("{name}:{}: {msg}", i + 1));
        if entries.len() == n * n {
            return Err(at(&format!("extra data after {} entries", n * n)));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(at("expected `re im`"));
        }
        let part = |s: &str| -> Result<f64, Failure> {
            match s.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                Ok(_) => Err(at(&format!("non-finite value `{s}`"))),
                Err(_) => Err(at(&format!("invalid number `{s}`"))),
            }
        };
        entries.push(C64::new(part(fields[0])?, part(fields[1])?));
    }
    if entries.len() != n * n {
        return Err(Failure::usage(format!("{name}: expected {} entries, found {}", n * n, entries.len())));
    }
    Ok(ComplexMatrix::from_row_slice(n, &entries)?)
}

fn read_unitary(path: &Path) -> Result<UnitaryMatrix, Failure> {
    UnitaryMatrix::new(read_matrix(path)?).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })
}

fn read_hermitian(path: &Path) -> Result<HermitianMatrix, Failure> {
    HermitianMatrix::new(read_matrix(path)?).map_err(|e| Failure { code: 3, message: format!("{}: {e}", path.display()) })
}

fn write_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        for j in 0..n {
            let c = m.get(i, j);
            let _ = writeln!(out, "{} {}", format_real(c.re), format_real(c.im));
        }
    }
    out
}

fn parse_norm(s: &str) -> Result<NormSpec, Failure> {
    Ok(s.parse::<NormSpec>()?)
}

fn dist(u: &Path, v: &Path, norm: &str) -> Outcome {
    let phi = parse_norm(norm)?;
    let (u, v) = (read_unitary(u)?, read_unitary(v)?);
    Ok(format!("{}\n", format_real(geodesic_distance(&u, &v, &phi)?)))
}

fn log(u: &Path, verify: bool) -> Outcome {
    let u = read_unitary(u)?;
    let z = principal_unitary_log(&u)?;
    if verify {
        let err = unitary_exp(&z)?.mat().distance(u.mat());
        if err > ROUND_TRIP_TOL {
            return Err(Failure::check(format!(
                "round trip failed: ‖exp(i·log u) − u‖_F = {} > {}",
                format_real(err),
                format_real(ROUND_TRIP_TOL)
            )));
        }
    }
    Ok(write_matrix(z.mat()))
}

fn exp(z: &Path) -> Outcome {
    Ok(write_matrix(unitary_exp(&read_hermitian(z)?)?.mat()))
}

fn pathlen(vertices: &[PathBuf], norm: &str) -> Outcome {
    let phi = parse_norm(norm)?;
    let points = vertices.iter().map(|p| read_unitary(p)).collect::<Result<Vec<_>, _>>()?;
    let k = points.len() - 1;
    let mut pieces = Vec::with_capacity(k);
    for (i, w) in points.windows(2).enumerate() {
        let z = principal_unitary_log(&w[0].between(&w[1]))?;
        let dur = if i + 1 == k { 1.0 - (k - 1) as f64 / k as f64 } else { 1.0 / k as f64 };
        pieces.push((z.scale(k as f64), dur));
    }
    let path = PolygonalPath::new(points[0].clone(), pieces)?;
    Ok(format!("{}\n", format_real(polygonal_length(&path, &phi))))
}

fn thompson(a: &Path, b: &Path, opts: &ThompsonOptions) -> Outcome {
    let (a, b) = (read_hermitian(a)?, read_hermitian(b)?);
    let r = thompson_decompose_with(&a, &b, opts)?;
    let mut out = format!("residual {}\nconverged {}\n", format_real(r.residual), r.converged);
    out.push_str(&write_matrix(r.conjugators.0.mat()));
    out.push_str(&write_matrix(r.conjugators.1.mat()));
    if r.converged {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::check(format!("no conjugators within tolerance; best residual {}", format_real(r.residual))))
    }
}

fn verify(args: &VerifyArgs) -> Outcome {
    if !suite_names().contains(&args.suite.as_str()) {
        let list = suite_names();
        return Err(Failure::usage(format!("unknown suite `{}`; available: {}", args.suite, list.join(", "))));
    }
    let norms = args.norms.iter().map(|s| parse_norm(s)).collect::<Result<Vec<_>, _>>()?;
    let mut cfg = ExperimentConfig::new(args.seed, args.dim, args.trials)?.with_norms(norms);
    for t in &args.tolerances {
        let (check, value) = t
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("tolerance override `{t}` must be CHECK=VALUE")))?;
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| Failure::usage(format!("tolerance `{value}` is not a non-negative number")))?;
        cfg = cfg.with_tolerance(check, value);
    }
    let report = run_suite(&args.suite, &cfg)?;
    if report.ok {
        Ok(report.to_csv())
    } else {
        print!("{}", report.to_csv());
        Err(Failure::check(format!("{}: {}/{} checks passed", report.suite, report.passed, report.total)))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("UNIGEO_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("UNIGEO_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Dist { u, v, norm } => dist(u, v, norm),
        Command::Log { u, verify } => log(u, *verify),
        Command::Exp { z } => exp(z),
        Command::Pathlen { vertices, norm } => pathlen(vertices, norm),
        Command::Thompson { a, b, seed, restarts, iterations, tolerance } => {
            let opts = ThompsonOptions { seed: *seed, restarts: *restarts, iterations: *iterations, tolerance: *tolerance };
            thompson(a, b, &opts)
        }
        Command::Verify(args) => verify(args),
    });
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("unigeo: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
