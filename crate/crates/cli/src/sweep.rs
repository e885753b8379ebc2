//! Grid sweeps and benchmarks over uniform random families.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use serde_json::json;

use rainbow_core::finders::{find, FinderConfig};
use rainbow_core::verify::check_anchored;
use rainbow_core::{ColoringFamily, PatternGraph};

use crate::runlog::{RunLog, RunRecord};
use crate::{exit, load_config, outcome_summary, resolve_pattern};

pub const CSV_HEADER: [&str; 7] = ["pattern", "n", "k", "seed", "outcome", "stage", "micros"];

#[derive(Args, Serialize)]
pub struct SweepArgs {
    /// Pattern name or file; repeat for several.
    #[arg(long = "pattern")]
    patterns: Vec<String>,
    /// Host sizes, comma separated.
    #[arg(long = "n", value_delimiter = ',')]
    ns: Vec<usize>,
    /// Palette sizes, comma separated.
    #[arg(long = "k", value_delimiter = ',')]
    ks: Vec<u32>,
    /// Seeds `seed_start .. seed_start + seeds`.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    coverage: Option<f64>,
}

#[derive(Args, Serialize)]
pub struct BenchArgs {
    /// Pattern name or file; repeat for several. Defaults to a fixed set.
    #[arg(long = "pattern")]
    patterns: Vec<String>,
    /// Host size for every given pattern.
    #[arg(long)]
    n: Option<usize>,
    /// Palette size for every given pattern.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct Cell {
    pattern: usize,
    n: usize,
    k: u32,
    seed: u64,
}

#[derive(Debug, Clone)]
struct Row {
    outcome: String,
    stage: String,
    micros: u64,
}

fn run_cell(pattern: &PatternGraph, cell: &Cell, cfg: &FinderConfig) -> Row {
    let start = Instant::now();
    let result = ColoringFamily::uniform(cell.n, cell.k, cell.seed).and_then(|f| find(&f, pattern, cfg).map(|o| (f, o)));
    let (outcome, stage) = match &result {
        Ok((f, out)) => match out.violation() {
            Some(av) if !check_anchored(f, av).is_valid() => ("error".into(), "unverified".into()),
            _ => outcome_summary(out),
        },
        Err(e) => ("error".into(), e.code().into()),
    };
    Row { outcome, stage, micros: start.elapsed().as_micros() as u64 }
}

/// Runs `cells` on `jobs` workers; rows come back in cell order.
fn run_grid(patterns: &[PatternGraph], cells: &[Cell], cfg: &FinderConfig, jobs: usize, mut sink: impl FnMut(usize, Row) -> Result<()>) -> Result<()> {
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Row)>();
    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..jobs.max(1) {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                if tx.send((i, run_cell(&patterns[cell.pattern], cell, cfg))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        // single appender: buffer early arrivals, emit strictly in order
        let mut pending = BTreeMap::new();
        let mut emitted = 0;
        for (i, row) in rx {
            pending.insert(i, row);
            while let Some(row) = pending.remove(&emitted) {
                sink(emitted, row)?;
                emitted += 1;
            }
        }
        Ok(())
    })
}

pub fn cmd_sweep(args: &SweepArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let patterns: Vec<PatternGraph> = args.patterns.iter().map(|p| resolve_pattern(p)).collect::<Result<_>>()?;
    let cfg = load_config(args.config.as_deref(), args.coverage)?;
    if args.ks.contains(&0) {
        bail!("palette sizes must be at least 1");
    }
    let mut cells = Vec::new();
    for pattern in 0..patterns.len() {
        for &n in &args.ns {
            for &k in &args.ks {
                for seed in args.seed_start..args.seed_start + args.seeds {
                    cells.push(Cell { pattern, n, k, seed });
                }
            }
        }
    }
    let mut w = csv::Writer::from_path(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    w.write_record(CSV_HEADER)?;
    let mut tally: BTreeMap<(usize, usize, u32), (u64, u64)> = BTreeMap::new();
    run_grid(&patterns, &cells, &cfg, args.jobs, |i, row| {
        let c = &cells[i];
        let t = tally.entry((c.pattern, c.n, c.k)).or_default();
        t.0 += 1;
        t.1 += (row.outcome == "success") as u64;
        w.write_record([
            patterns[c.pattern].label(),
            c.n.to_string(),
            c.k.to_string(),
            c.seed.to_string(),
            row.outcome,
            row.stage,
            row.micros.to_string(),
        ])?;
        Ok(())
    })?;
    w.flush()?;
    for ((p, n, k), (runs, ok)) in &tally {
        println!(
            "{}",
            json!({ "pattern": patterns[*p].label(), "n": n, "k": k, "runs": runs, "success_rate": *ok as f64 / *runs as f64 })
        );
    }
    let total: u64 = tally.values().map(|t| t.0).sum();
    let ok: u64 = tally.values().map(|t| t.1).sum();
    log.append(&RunRecord::new("sweep", serde_json::to_value(args)?, format!("{ok}/{total} success"), start.elapsed()))?;
    Ok(exit::OK)
}

/// Default benchmark points: host and palette size per pattern.
const BENCH_POINTS: [(&str, usize, u32); 6] =
    [("P4", 600, 3), ("S4", 3000, 4), ("C4", 800, 3), ("I4", 2000, 3), ("K8", 2000, 3), ("K7,7", 3000, 5)];

pub fn cmd_bench(args: &BenchArgs, log: &RunLog) -> Result<u8> {
    let start = Instant::now();
    let cfg = load_config(args.config.as_deref(), None)?;
    let points: Vec<(String, usize, u32)> = if args.patterns.is_empty() {
        BENCH_POINTS.iter().map(|&(p, n, k)| (p.to_string(), args.n.unwrap_or(n), args.k.unwrap_or(k))).collect()
    } else {
        let (Some(n), Some(k)) = (args.n, args.k) else { bail!("--pattern needs --n and --k") };
        args.patterns.iter().map(|p| (p.clone(), n, k)).collect()
    };
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["pattern", "n", "k", "runs", "successes", "mean_micros", "max_micros"])?;
    for (spec, n, k) in &points {
        let pattern = resolve_pattern(spec)?;
        let (mut ok, mut sum, mut max) = (0u64, 0u64, 0u64);
        for seed in 0..args.seeds {
            let row = run_cell(&pattern, &Cell { pattern: 0, n: *n, k: *k, seed }, &cfg);
            ok += (row.outcome == "success") as u64;
            sum += row.micros;
            max = max.max(row.micros);
        }
        let mean = sum.checked_div(args.seeds).unwrap_or(0);
        w.write_record([pattern.label(), n.to_string(), k.to_string(), args.seeds.to_string(), ok.to_string(), mean.to_string(), max.to_string()])?;
    }
    w.flush()?;
    log.append(&RunRecord::new("bench", serde_json::to_value(args)?, format!("{} points", points.len()), start.elapsed()))?;
    Ok(exit::OK)
}
