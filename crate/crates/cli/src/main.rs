//! `nbi`: decide, sweep and certify interpolation for `(d, g, r; n)` tuples.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nbi_core::certificate::check_certificate;
use nbi_core::classify::{classify, max_general_points};
use nbi_core::sweep::{sweep, NMode, RangeSpec, Span};
use nbi_core::tuple::canonical_order;
use nbi_core::{
    Certificate, Config, Engine, MarkedCounts, SearchError, SearchMode, SplitBundle, Tuple, Verdict,
};

const EXIT_NOT_GOOD: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ABORTED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 74;

const EXIT_CODES: &str = "Exit codes: 0 good / ok, 1 not good / sweep mismatch / replay failure, \
2 unknown, 3 node budget exhausted, 64 usage error, 65 corrupt certificate, 74 I/O error.";

#[derive(Parser)]
#[command(name = "nbi", version, about, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a single tuple.
    Check(CheckArgs),
    /// Decide every tuple in a range and write a CSV report.
    Sweep(SweepArgs),
    /// Largest number of general points a general curve passes through.
    Points { d: i64, g: i64, r: i64 },
    /// Cohomology and interpolation of a split bundle on the line.
    Oracle {
        /// Comma-separated summand degrees, e.g. 3,3,3,3 or -1,2.
        #[arg(allow_hyphen_values = true)]
        degrees: String,
    },
    /// Replay a certificate file.
    Verify { path: PathBuf },
}

/// Engine settings. Flags override values read from `--config`.
#[derive(Args)]
struct EngineArgs {
    /// key=value file with node_budget, mode, rational_base, lengthened_high, jobs.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Rule applications allowed per query [default: 10000000].
    #[arg(long)]
    budget: Option<u64>,
    /// backtracking or greedy [default: backtracking].
    #[arg(long)]
    mode: Option<SearchMode>,
    /// Disable the genus-zero leaf and prove rational curves by induction.
    #[arg(long)]
    no_rational_base: bool,
    /// Use the lengthened threshold for the second high-dimension family.
    #[arg(long)]
    lengthened_high: bool,
}

#[derive(Args)]
struct CheckArgs {
    d: i64,
    g: i64,
    r: i64,
    /// Marked counts, nine values in the order given below.
    #[arg(long, value_parser = parse_counts, default_value = "0,0,0,0,0,0,0,0,0")]
    n: MarkedCounts,
    /// Write the certificate of a good tuple to this file.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Dimension: a value or a range such as 4..=6.
    #[arg(long, value_parser = parse_span)]
    r: Span,
    /// Range of d + g, e.g. 11..16 (inclusive) or ..20.
    #[arg(long, value_parser = parse_span)]
    dg: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    d: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    g: Option<Span>,
    /// zero-only or enumerate.
    #[arg(long, value_parser = parse_n_mode, default_value = "enumerate")]
    n_mode: NMode,
    /// CSV output path; without it no report file is written.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Expected not-good triples, e.g. "5,2,3 6,2,4". When given, the not-good
    /// rows must match this set exactly.
    #[arg(long, value_parser = parse_expect)]
    expect: Option<BTreeSet<(i64, i64, i64)>>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Debug)]
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

fn parse_counts(s: &str) -> Result<MarkedCounts, String> {
    s.parse()
        .map_err(|e: nbi_core::tuple::TupleError| e.to_string())
}

fn parse_span(s: &str) -> Result<Span, String> {
    s.parse()
        .map_err(|e: nbi_core::sweep::SweepError| e.to_string())
}

fn parse_n_mode(s: &str) -> Result<NMode, String> {
    s.parse()
        .map_err(|e: nbi_core::sweep::SweepError| e.to_string())
}

fn parse_expect(s: &str) -> Result<BTreeSet<(i64, i64, i64)>, String> {
    let mut out = BTreeSet::new();
    for item in s.split_whitespace().flat_map(|w| w.split(';')) {
        if item.is_empty() {
            continue;
        }
        let parts: Result<Vec<i64>, _> = item.split(',').map(|p| p.trim().parse()).collect();
        match parts.as_deref() {
            Ok([d, g, r]) => {
                out.insert((*d, *g, *r));
            }
            _ => return Err(format!("expected d,g,r triples, got {item:?}")),
        }
    }
    Ok(out)
}

impl EngineArgs {
    fn config(&self) -> Result<Config, Failure> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
                Config::parse(&text)
                    .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?
            }
            None => Config::default(),
        };
        if let Some(budget) = self.budget {
            config.node_budget = budget;
        }
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if self.no_rational_base {
            config.rational_base = false;
        }
        if self.lengthened_high {
            config.lengthened_high = true;
        }
        Ok(config)
    }
}

fn io_failure(path: &Path, err: io::Error) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {err}", path.display()))
}

fn search_failure(err: SearchError) -> Failure {
    match err {
        SearchError::BudgetExhausted { .. } => Failure::new(EXIT_ABORTED, err.to_string()),
        _ => Failure::new(EXIT_USAGE, err.to_string()),
    }
}

fn check(args: &CheckArgs) -> Result<u8, Failure> {
    let config = args.engine.config()?;
    let t = Tuple::new(args.d, args.g, args.r, args.n);
    let engine = Engine::new(config.clone());
    let verdict = engine.decide(&t).map_err(search_failure)?;
    let class = classify(&t, &config).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let (label, code) = match &verdict {
        Verdict::Good(_) => ("good".to_string(), 0),
        Verdict::NotGood(reason) => (format!("notgood ({reason:?})"), EXIT_NOT_GOOD),
        Verdict::Unknown => ("unknown".to_string(), EXIT_UNKNOWN),
    };
    let cert = match &verdict {
        Verdict::Good(cert) => Some(cert),
        _ => None,
    };
    if let (Some(path), Some(cert)) = (&args.certificate, cert) {
        fs::write(path, cert.to_json()).map_err(|e| io_failure(path, e))?;
    }
    if args.json {
        let report = serde_json::json!({
            "tuple": t,
            "verdict": label,
            "classification": format!("{class:?}"),
            "rule": cert.map(|c| c.rule.to_string()),
            "depth": cert.map(|c| c.depth()),
        });
        println!("{report}");
    } else {
        println!("{t}: {label}");
        println!("classifier: {class:?}");
        if let Some(cert) = cert {
            println!("root rule: {}, depth {}", cert.rule, cert.depth());
        }
    }
    Ok(code)
}

fn run_sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let mut config = args.engine.config()?;
    if let Some(jobs) = args.jobs {
        config.jobs = jobs;
    }
    let spec = RangeSpec {
        r: args.r,
        d_plus_g: args.dg.unwrap_or_default(),
        d: args.d.unwrap_or_default(),
        g: args.g.unwrap_or_default(),
        n_mode: args.n_mode,
    };
    let engine = Engine::new(config);
    let report = sweep(&engine, &spec).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    if let Some(path) = &args.out {
        let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
        report
            .write_csv(io::BufWriter::new(file))
            .map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    }
    let mut stdout = io::stdout().lock();
    for row in report.non_good() {
        let _ = writeln!(stdout, "{row}");
    }
    let _ = writeln!(stdout, "{}", report.summary());
    if report.aborted() > 0 {
        return Ok(EXIT_ABORTED);
    }
    if report.unknown() > 0 {
        return Ok(EXIT_UNKNOWN);
    }
    if let Some(expected) = &args.expect {
        let found: BTreeSet<_> = report
            .rows
            .iter()
            .filter(|row| row.verdict.is_not_good())
            .map(|row| (row.tuple.d, row.tuple.g, row.tuple.r))
            .collect();
        if &found != expected {
            eprintln!("not-good triples {found:?} differ from the expected {expected:?}");
            return Ok(EXIT_NOT_GOOD);
        }
    }
    Ok(0)
}

fn points(d: i64, g: i64, r: i64) -> Result<u8, Failure> {
    let n = max_general_points(d, g, r).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    println!("{n}");
    Ok(0)
}

fn oracle(degrees: &str) -> Result<u8, Failure> {
    let parsed: Result<Vec<i64>, _> = degrees.split(',').map(|p| p.trim().parse()).collect();
    let parsed = parsed.map_err(|_| {
        Failure::new(
            EXIT_USAGE,
            format!("expected comma-separated integer degrees, got {degrees:?}"),
        )
    })?;
    let bundle = SplitBundle::new(parsed).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    println!(
        "bundle={bundle} interpolates={} h0={} h1={} chi={}",
        bundle.interpolates(),
        bundle.h0(),
        bundle.h1(),
        bundle.chi()
    );
    Ok(0)
}

fn verify(path: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let cert = Certificate::from_json(&text)
        .map_err(|e| Failure::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
    match check_certificate(&cert) {
        Ok(()) => {
            println!(
                "ok: {} certified by {} ({} nodes, depth {})",
                cert.tuple,
                cert.rule,
                cert.node_count(),
                cert.depth()
            );
            Ok(0)
        }
        Err(failure) => {
            println!("replay failed: {failure}");
            Ok(EXIT_NOT_GOOD)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            if code == EXIT_USAGE {
                eprintln!("marked counts are given in the order {}", canonical_order());
            }
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Check(args) => check(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Points { d, g, r } => points(*d, *g, *r),
        Command::Oracle { degrees } => oracle(degrees),
        Command::Verify { path } => verify(path),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
