use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use rainbow_core::exact::{compute_c_with, export_cnf, ExactOptions, ExactValue};
use rainbow_core::finders::{find, FinderConfig, FinderOutcome};
use rainbow_core::generate::{generate, GeneratorKind, GeneratorSpec, DEFAULT_RESAMPLE_BUDGET};
use rainbow_core::model::io::{load_family, load_pattern, read_certificates, save_family, write_certificates, CertificateRecord};
use rainbow_core::model::make_pattern;
use rainbow_core::verify::{check_anchored, family_is_good_with_limit, DEFAULT_MAX_COPIES};
use rainbow_core::{ColoringFamily, Error, PatternGraph};

mod runlog;
mod sweep;

use runlog::{RunLog, RunRecord};

/// Exit codes shared by the subcommands.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INPUT_ERROR: u8 = 1;
    pub const REFUSED: u8 = 2;
    pub const VIOLATION: u8 = 3;
    pub const GUARD: u8 = 4;
}

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Goodness checks, violation finders and exact small cases for per-vertex rainbow coloring families")]
struct Cli {
    /// JSON-lines run log; overrides the RAINBOW_LOG environment variable.
    #[arg(long, global = true)]
    log: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify that a family is not good for a pattern.
    Find(FindArgs),
    /// Check goodness of a family, or validate certificates against it.
    Verify(VerifyArgs),
    /// Exact value (or bracket) of the minimum palette size on a small host.
    Exact(ExactArgs),
    /// Write the DIMACS encoding of "a good family with k colors exists".
    ExportCnf(ExportCnfArgs),
    /// Write a generated family to a file.
    Generate(GenerateArgs),
    /// Run finders over a grid of hosts, palette sizes and seeds; CSV out.
    Sweep(sweep::SweepArgs),
    /// Time finders at fixed points.
    Bench(sweep::BenchArgs),
}

#[derive(Args, Serialize)]
struct FindArgs {
    /// Pattern name (P4, S4, C4, K8, K7,7, P2+3K2, ...) or pattern file.
    pattern: String,
    /// Uniform random family: host size, palette size, seed.
    #[arg(long, num_args = 3, value_names = ["N", "K", "SEED"], required_unless_present = "family", conflicts_with = "family")]
    random: Option<Vec<u64>>,
    /// Family file.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Certificate output (JSON lines).
    #[arg(long, default_value = "certificate.jsonl")]
    out: PathBuf,
    /// Finder configuration as JSON; missing fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Peeling coverage, overriding the configuration.
    #[arg(long)]
    coverage: Option<f64>,
}

#[derive(Args, Serialize)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["pattern", "certificate"]))]
struct VerifyArgs {
    #[arg(long)]
    family: PathBuf,
    /// Check goodness for this pattern.
    #[arg(long)]
    pattern: Option<String>,
    /// Validate every certificate in this file.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Largest number of copies a goodness check may enumerate.
    #[arg(long, default_value_t = DEFAULT_MAX_COPIES)]
    max_copies: u128,
}

#[derive(Args, Serialize)]
struct ExactArgs {
    pattern: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    k_max: u32,
    #[arg(long, default_value_t = ExactOptions::default().node_budget)]
    node_budget: u64,
    #[arg(long, default_value_t = ExactOptions::default().max_copies)]
    max_copies: u128,
    /// Write the good family found at the upper end here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExportCnfArgs {
    pattern: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    /// uniform-random, monochromatic, injective, proper-ish or resampled-good.
    kind: GeneratorKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target pattern for resampled-good.
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value_t = DEFAULT_RESAMPLE_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: PathBuf,
}

/// A pattern file if the path exists, a pattern name otherwise.
pub fn resolve_pattern(spec: &str) -> Result<PatternGraph> {
    let path = Path::new(spec);
    if path.is_file() {
        return load_pattern(path).with_context(|| format!("reading pattern file {spec}"));
    }
    make_pattern(spec).with_context(|| format!("unknown pattern {spec:?}"))
}

pub fn load_config(path: Option<&Path>, coverage: Option<f64>) -> Result<FinderConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let mut value = serde_json::to_value(FinderConfig::default())?;
            let given: serde_json::Value = serde_json::from_str(&text)?;
            let (Some(base), Some(over)) = (value.as_object_mut(), given.as_object()) else {
                bail!("finder configuration must be a JSON object");
            };
            for (k, v) in over {
                if !base.contains_key(k) {
                    bail!("unknown finder configuration field {k:?}");
                }
                base.insert(k.clone(), v.clone());
            }
            serde_json::from_value(value)?
        }
        None => FinderConfig::default(),
    };
    if let Some(c) = coverage {
        if !(0.0..=1.0).contains(&c) || c == 0.0 {
            bail!("coverage must lie in (0, 1]");
        }
        cfg.coverage = c;
    }
    Ok(cfg)
}

/// One-word outcome plus the refusal stage, if any.
pub fn outcome_summary(out: &FinderOutcome) -> (String, String) {
    match out.refusal() {
        Some(t) => ("threshold_not_met".into(), t.stage.clone()),
        None => ("success".into(), String::new()),
    }
}

fn cmd_find(args: &FindArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let pattern = resolve_pattern(&args.pattern)?;
    let family = match (&args.random, &args.family) {
        (Some(r), _) => ColoringFamily::uniform(r[0] as usize, u32::try_from(r[1]).context("palette size")?, r[2])?,
        (None, Some(path)) => load_family(path).with_context(|| format!("reading family {}", path.display()))?,
        (None, None) => bail!("give --random N K SEED or --family FILE"),
    };
    let cfg = load_config(args.config.as_deref(), args.coverage)?;
    let out = find(&family, &pattern, &cfg)?;
    let (outcome, stage) = outcome_summary(&out);
    let mut record = RunRecord::new("find", serde_json::to_value(args)?, outcome.clone(), start.elapsed());
    let code = match out.violation() {
        Some(av) => {
            let check = check_anchored(&family, av);
            if !check.is_valid() {
                bail!("finder produced a certificate that does not verify: {:?}", check.defects);
            }
            let diag = serde_json::to_value(&out.diagnostics)?;
            let file = std::fs::File::create(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
            write_certificates(&[CertificateRecord::from_violation(av, Some(diag))], file)?;
            record.certificate = Some(args.out.display().to_string());
            exit::OK
        }
        None => exit::REFUSED,
    };
    println!(
        "{}",
        json!({
            "outcome": outcome,
            "stage": (!stage.is_empty()).then_some(stage),
            "refusal": out.refusal(),
            "certificate": record.certificate,
            "diagnostics": out.diagnostics,
        })
    );
    record.micros = start.elapsed().as_micros() as u64;
    log.append(&record)?;
    Ok(code)
}

fn cmd_verify(args: &VerifyArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let family = load_family(&args.family).with_context(|| format!("reading family {}", args.family.display()))?;
    let (code, outcome, detail) = if let Some(spec) = &args.pattern {
        let pattern = resolve_pattern(spec)?;
        match family_is_good_with_limit(&family, &pattern, args.max_copies) {
            Ok(r) if r.is_good => (exit::OK, "good", json!({ "copies_checked": r.copies_checked })),
            Ok(r) => (exit::VIOLATION, "violation", json!({ "copies_checked": r.copies_checked, "witness": r.witness })),
            Err(e @ Error::ScaleGuard { .. }) => (exit::GUARD, "scale_guard", json!({ "error": e.to_string() })),
            Err(e) => return Err(e.into()),
        }
    } else {
        let path = args.certificate.as_ref().expect("clap enforces one mode");
        let file = std::fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
        let records = read_certificates(file)?;
        if records.is_empty() {
            bail!("{} holds no certificates", path.display());
        }
        let checks: Vec<_> = records.iter().map(|r| check_anchored(&family, &r.to_violation())).collect();
        let invalid: Vec<_> = checks
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_valid())
            .map(|(i, c)| json!({ "index": i, "defects": c.defects.iter().map(|d| d.to_string()).collect::<Vec<_>>() }))
            .collect();
        if invalid.is_empty() {
            (exit::OK, "valid", json!({ "certificates": records.len() }))
        } else {
            (exit::VIOLATION, "invalid", json!({ "certificates": records.len(), "invalid": invalid }))
        }
    };
    println!("{}", json!({ "outcome": outcome, "detail": detail }));
    log.append(&RunRecord::new("verify", serde_json::to_value(args)?, outcome, start.elapsed()))?;
    Ok(code)
}

fn cmd_exact(args: &ExactArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let pattern = resolve_pattern(&args.pattern)?;
    let opts = ExactOptions { node_budget: args.node_budget, max_copies: args.max_copies };
    let r = compute_c_with(args.n, &pattern, args.k_max, &opts)?;
    if let (Some(path), Some(f)) = (&args.witness, &r.witness_family) {
        save_family(f, path).with_context(|| format!("writing {}", path.display()))?;
    }
    let outcome = match r.value {
        ExactValue::Exact(c) => format!("exact={c}"),
        ExactValue::Bracket { lower, upper: Some(u) } => format!("bracket={lower}..{u}"),
        ExactValue::Bracket { lower, upper: None } => format!("lower={lower}"),
    };
    println!(
        "{}",
        json!({ "n": r.n, "pattern": r.pattern.label(), "value": r.value, "method": r.method, "witness": args.witness })
    );
    log.append(&RunRecord::new("exact", serde_json::to_value(args)?, outcome, start.elapsed()))?;
    Ok(exit::OK)
}

fn cmd_export_cnf(args: &ExportCnfArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let pattern = resolve_pattern(&args.pattern)?;
    let counts = export_cnf(args.n, &pattern, args.k, &args.out)?;
    println!("{}", json!({ "out": args.out, "vars": counts.vars(), "counts": counts }));
    log.append(&RunRecord::new("export-cnf", serde_json::to_value(args)?, "written", start.elapsed()))?;
    Ok(exit::OK)
}

fn cmd_generate(args: &GenerateArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let pattern = args.pattern.as_deref().map(resolve_pattern).transpose()?;
    let spec = GeneratorSpec { kind: args.kind, n: args.n, k: args.k, seed: args.seed, pattern, budget: Some(args.budget) };
    let family = generate(&spec)?;
    save_family(&family, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    println!("{}", json!({ "out": args.out, "n": family.n(), "k": family.k() }));
    log.append(&RunRecord::new("generate", serde_json::to_value(args)?, "written", start.elapsed()))?;
    Ok(exit::OK)
}

fn run(cli: Cli) -> Result<u8> {
    let log = RunLog::resolve(cli.log);
    match &cli.command {
        Command::Find(a) => cmd_find(a, &log),
        Command::Verify(a) => cmd_verify(a, &log),
        Command::Exact(a) => cmd_exact(a, &log),
        Command::ExportCnf(a) => cmd_export_cnf(a, &log),
        Command::Generate(a) => cmd_generate(a, &log),
        Command::Sweep(a) => sweep::cmd_sweep(a, &log),
        Command::Bench(a) => sweep::cmd_bench(a, &log),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::INPUT_ERROR)
        }
    }
}
