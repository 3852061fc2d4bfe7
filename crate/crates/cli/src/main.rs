mod document;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use isosieve::error::{FieldError, SieveError, StrategyError};
use isosieve::make_field;
use isosieve::sieve::{compute_mq, compute_rq, IsogenySignature};
use isosieve::strategy::{run_family, run_on_field, SieveConfig};
use num_traits::Zero;

use document::{Invocation, ReportDocument, RqDocument, RqResult, TimedStep, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "isosieve", version)]
#[command(about = "Which primes p admit a semistable p-isogeny over a quadratic field?")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct SieveArgs {
    /// Largest odd auxiliary prime
    #[arg(long, default_value_t = 19)]
    aux_max: u64,
    /// Skip the q = 2 stage
    #[arg(long)]
    no_q2: bool,
    /// Emit the JSON report document
    #[arg(long)]
    json: bool,
    /// Write to this file (atomically) instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (makes output non-reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve a fixed field Q(sqrt(d))
    Field {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[command(flatten)]
        sieve: SieveArgs,
    },
    /// Sieve all real quadratic fields with a given class-group exponent
    Family {
        #[arg(long, allow_hyphen_values = true)]
        exponent: i64,
        /// Primes known to be inert, e.g. 2,3
        #[arg(long, value_delimiter = ',')]
        inert: Vec<u64>,
        #[command(flatten)]
        sieve: SieveArgs,
    },
    /// Print R_q and M_q for one auxiliary prime and signature
    Rq {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        q: u64,
        /// "a,b" with a, b in {0, 12}
        #[arg(long, allow_hyphen_values = true, value_parser = parse_signature)]
        signature: IsogenySignature,
        #[arg(long)]
        factored: bool,
        #[arg(long)]
        json: bool,
    },
}

fn parse_signature(s: &str) -> Result<IsogenySignature, String> {
    s.parse::<IsogenySignature>().map_err(|e| e.to_string())
}

enum CliError {
    /// Bad input: exit 2.
    Input(String),
    /// Internal invariant violated: exit 3.
    Internal(String),
    /// Could not write output: exit 1.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) | CliError::Io(m) => m,
        }
    }
}

fn field_error(e: FieldError) -> CliError {
    match e {
        FieldError::Internal(_) | FieldError::FieldMismatch(..) => {
            CliError::Internal(e.to_string())
        }
        _ => CliError::Input(e.to_string()),
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Field(f) | StrategyError::Sieve(SieveError::Field(f)) => field_error(f),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        field_error(e)
    }
}

/// Writes next to the target, then renames, so a failed run leaves no file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = std::fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(contents.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn config(args: &SieveArgs) -> SieveConfig {
    let mut cfg = SieveConfig::with_aux_max(args.aux_max);
    cfg.use_q2 = !args.no_q2;
    cfg
}

fn to_json<T: serde::Serialize>(doc: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(doc)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn millis(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn finish_report(
    invocation: Invocation,
    report: isosieve::SieveReport,
    steps: Vec<TimedStep>,
    args: &SieveArgs,
) -> Result<(), CliError> {
    let timing = args.timing.then_some(steps);
    let text = if args.json {
        to_json(&ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            invocation,
            report,
            timing,
        })?
    } else {
        render::report(&report, timing.as_deref())
    };
    emit(args.out.as_deref(), &text)
}

fn run(cli: Cli, invocation: Invocation) -> Result<(), CliError> {
    match cli.cmd {
        Command::Field { d, sieve } => {
            let cfg = config(&sieve);
            let t = Instant::now();
            let field = make_field(d)?;
            let setup = millis(t);
            let t = Instant::now();
            let report = run_on_field(&field, &cfg)?;
            let steps = vec![
                TimedStep {
                    name: "field_setup".into(),
                    millis: setup,
                },
                TimedStep {
                    name: "sieve".into(),
                    millis: millis(t),
                },
            ];
            finish_report(invocation, report, steps, &sieve)
        }
        Command::Family {
            exponent,
            inert,
            sieve,
        } => {
            if exponent < 1 {
                return Err(CliError::Input(format!(
                    "class-group exponent must be at least 1, got {exponent}"
                )));
            }
            let cfg = config(&sieve);
            let t = Instant::now();
            let report = run_family(exponent as u64, &inert, &cfg)?;
            let steps = vec![TimedStep {
                name: "sieve".into(),
                millis: millis(t),
            }];
            finish_report(invocation, report, steps, &sieve)
        }
        Command::Rq {
            d,
            q,
            signature,
            factored,
            json,
        } => {
            let field = make_field(d)?;
            let data = field.aux_prime_data(q)?;
            let r_q = compute_rq(&data, signature);
            let m_q = compute_mq(&data, signature);
            let fact = |x: &num_bigint::BigInt| {
                if x.is_zero() {
                    "0".to_string()
                } else {
                    render::factored(x)
                }
            };
            let res = RqResult {
                d,
                q,
                splitting: data.splitting,
                n_q: data.n_q,
                r: data.r,
                alpha: data.alpha.to_sqrt_string(),
                signature,
                r_q_factored: factored.then(|| fact(&r_q)),
                m_q_factored: factored.then(|| fact(&m_q)),
                r_q,
                m_q,
            };
            let text = if json {
                to_json(&RqDocument {
                    schema_version: SCHEMA_VERSION.to_string(),
                    invocation,
                    rq: res,
                })?
            } else {
                render::rq(&res)
            };
            emit(None, &text)
        }
    }
}

fn init_threads() {
    let Ok(v) = std::env::var("ISOSIEVE_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        _ => eprintln!("warning: ignoring ISOSIEVE_THREADS={v:?} (expected a positive integer)"),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    init_threads();
    let invocation = Invocation {
        command: argv.first().cloned().unwrap_or_default(),
        args: argv.iter().skip(1).cloned().collect(),
    };
    match run(cli, invocation) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
