//! `wakimoto`: run verification suites, apply operators to Fock states,
//! tabulate `η₀` kernels and graded dimensions, and run the limit studies.
//!
//! Exit codes: 0 success, 1 a check failed or an operator is not single
//! valued on the requested state, 2 usage or configuration error, 3 a
//! resource limit was exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wakimoto::algebra::{ActError, Library};
use wakimoto::engine::EngineError;
use wakimoto::fock::{graded_dimension, parse_state};
use wakimoto::scalar::{parse_rational, Rational};
use wakimoto::verify::study::{screening_convergence_study, vertex_study, StudyParams, StudyTable};
use wakimoto::verify::{kernel_dimensions, run_resolved, ConfigError, Limits, SuiteConfig, SuiteId};
use wakimoto::Level;

#[derive(Parser)]
#[command(name = "wakimoto", version, about = "Exact free-field realization of DY(sl2) at level k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Apply an operator word to a Fock state.
    Act(ActArgs),
    /// Kernel dimensions of η₀ on F_{l,s,s}.
    Kernel(KernelArgs),
    /// Graded dimensions of a Fock module.
    Character(CharacterArgs),
    /// Residual tables for statements that hold only as J → ∞.
    Study(StudyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id, e.g. theorem31. Overrides the suite named in --config.
    #[arg(long)]
    suite: Option<String>,
    /// JSON configuration; unknown keys are rejected.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ActArgs {
    /// Operator word, e.g. "e[0]" or "eta0 eta0".
    #[arg(long)]
    expr: String,
    /// State, e.g. "achi[-1] |0,0,0>".
    #[arg(long)]
    state: String,
    /// Output components above this weight are dropped.
    #[arg(long, default_value_t = 3)]
    max_weight: usize,
    /// Level: "symbolic" or a rational.
    #[arg(long, default_value = "symbolic")]
    k: String,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    #[arg(long, allow_hyphen_values = true)]
    s: i64,
    #[arg(long)]
    max_weight: usize,
    #[arg(long, default_value = "symbolic")]
    k: String,
    /// Write JSON here instead of CSV to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharacterArgs {
    #[arg(long)]
    max_weight: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StudyKind {
    Screening,
    Vertex,
}

#[derive(Args)]
struct StudyArgs {
    kind: StudyKind,
    /// Inclusive range `a:b`.
    #[arg(long = "J")]
    j: Option<String>,
    #[arg(long, default_value = "3")]
    k: String,
    #[arg(long, default_value = "1/10")]
    hbar: String,
    /// Comma-separated δ values (vertex study).
    #[arg(long)]
    delta: Option<String>,
    /// Comma-separated l values (vertex study).
    #[arg(long = "l", default_value = "1,2")]
    ls: String,
    /// Add floating-point ratios next to the exact ones.
    #[arg(long)]
    float: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }

    fn check(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = if matches!(e, ConfigError::Limit { .. }) { 3 } else { 2 };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Invalid(_) => Failure::usage(e.to_string()),
            _ => Failure::check(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Act(a) => act(a),
        Command::Kernel(a) => kernel(a),
        Command::Character(a) => character(a),
        Command::Study(a) => study(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn level(text: &str) -> Result<Level, Failure> {
    if text == "symbolic" {
        return Ok(Level::Symbolic);
    }
    let k0 = rational(text, "k")?;
    Level::value(k0).map_err(|e| Failure::usage(e.to_string()))
}

fn rational(text: &str, what: &str) -> Result<Rational, Failure> {
    parse_rational(text).ok_or_else(|| Failure::usage(format!("{what}: not a rational: {text}")))
}

fn weight_limit(w: usize) -> Result<(), Failure> {
    let max = Limits::default().max_weight;
    if w > max {
        return Err(ConfigError::Limit {
            field: "max_weight",
            value: w as u64,
            limit: max as u64,
        }
        .into());
    }
    Ok(())
}

fn write_json(path: &PathBuf, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::check(e.to_string()))? + "\n";
    if path.as_os_str() == "-" {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(name) = &a.suite {
        cfg.suite = Some(name.parse::<SuiteId>()?);
    }
    if cfg.suite.is_none() {
        return Err(Failure::usage("no suite given; use --suite or a config with \"suite\""));
    }
    let resolved = cfg.resolve()?;
    let start = Instant::now();
    let report = run_resolved(&resolved);
    let elapsed = start.elapsed();
    for r in &report.relations {
        let s = &r.summary;
        let severity = format!("{:?}", r.severity).to_lowercase();
        println!(
            "{:<32} {:<8} pass {:>6}  fail {:>4}  skipped {:>3}",
            r.relation, severity, s.pass, s.fail, s.skipped
        );
    }
    let s = &report.summary;
    println!(
        "{}: pass {} fail {} skipped {} ({} asserted failures)",
        report.suite,
        s.pass,
        s.fail,
        s.skipped,
        report.asserted_failures()
    );
    if let Some(path) = &a.out {
        write_json(path, &report)?;
    }
    if !report.ok() {
        return Err(Failure::check(format!(
            "{} asserted checks failed",
            report.asserted_failures()
        )));
    }
    if let Some(budget) = resolved.limits.time_budget_secs {
        if elapsed.as_secs_f64() > budget as f64 {
            return Err(Failure {
                code: 3,
                msg: format!("time budget of {budget}s exceeded ({:.1}s)", elapsed.as_secs_f64()),
            });
        }
    }
    Ok(())
}

fn act(a: ActArgs) -> Result<(), Failure> {
    weight_limit(a.max_weight)?;
    let lib = Library::new(level(&a.k)?);
    let state = parse_state(&a.state, lib.level()).map_err(|e| Failure::usage(e.to_string()))?;
    let out = lib.act(&a.expr, &state, a.max_weight).map_err(|e| match e {
        ActError::Parse(e) => Failure::usage(e.to_string()),
        ActError::Engine(e) => e.into(),
    })?;
    println!("{out}");
    Ok(())
}

fn kernel(a: KernelArgs) -> Result<(), Failure> {
    weight_limit(a.max_weight)?;
    let lib = Library::new(level(&a.k)?);
    let table = kernel_dimensions(&lib, a.l, a.s, a.max_weight)?;
    match &a.out {
        Some(path) => write_json(path, &table),
        None => {
            print!("{}", table.to_csv());
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DimRow {
    weight: usize,
    dim: u64,
}

fn character(a: CharacterArgs) -> Result<(), Failure> {
    // the partition counts fit in u64 far beyond any weight the engine can reach
    if a.max_weight > 200 {
        return Err(ConfigError::Limit {
            field: "max_weight",
            value: a.max_weight as u64,
            limit: 200,
        }
        .into());
    }
    let rows: Vec<DimRow> = (0..=a.max_weight)
        .map(|w| DimRow {
            weight: w,
            dim: graded_dimension(w),
        })
        .collect();
    match &a.out {
        Some(path) => write_json(path, &rows),
        None => {
            println!("weight,dim");
            for r in &rows {
                println!("{},{}", r.weight, r.dim);
            }
            Ok(())
        }
    }
}

fn parse_range(text: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::usage(format!("J: expected a:b, got {text}"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    let max = Limits::default().max_j;
    if b > max {
        return Err(ConfigError::Limit {
            field: "J",
            value: b.into(),
            limit: max.into(),
        }
        .into());
    }
    Ok((a..=b).collect())
}

fn study(a: StudyArgs) -> Result<(), Failure> {
    let mut p = match a.kind {
        StudyKind::Screening => StudyParams::screening_default(),
        StudyKind::Vertex => StudyParams::vertex_default(),
    };
    if let Some(j) = &a.j {
        p.j_range = parse_range(j)?;
    }
    p.k0 = rational(&a.k, "k")?;
    level(&a.k)?;
    p.h0 = rational(&a.hbar, "hbar")?;
    if let Some(ds) = &a.delta {
        p.deltas = ds.split(',').map(|d| rational(d.trim(), "delta")).collect::<Result<_, _>>()?;
    }
    p.float = a.float;
    let table: StudyTable = match a.kind {
        StudyKind::Screening => screening_convergence_study(&p)?,
        StudyKind::Vertex => {
            let ls: Vec<u32> =
                a.ls.split(',')
                    .map(|l| {
                        l.trim()
                            .parse()
                            .map_err(|_| Failure::usage(format!("l: not a positive integer: {l}")))
                    })
                    .collect::<Result<_, _>>()?;
            vertex_study(&p, &ls)?
        }
    };
    match &a.out {
        Some(path) => write_json(path, &table),
        None => {
            print!("{}", table.to_csv());
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        let nsv = EngineError::Vop(wakimoto::vop::VopError::NonSingleValued {
            exponent: "1/2".into(),
            charges: "|1/2,0,0>".into(),
        });
        assert_eq!(Failure::from(nsv).code, 1);
        assert_eq!(Failure::from(EngineError::Invalid("x".into())).code, 2);
        assert_eq!(Failure::from(ConfigError::UnknownSuite("x".into())).code, 2);
        let limit = ConfigError::Limit {
            field: "J",
            value: 20,
            limit: 12,
        };
        assert_eq!(Failure::from(limit).code, 3);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:3").ok(), Some(vec![0, 1, 2, 3]));
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("3").is_err());
    }
}
