//! Monte-Carlo BER/complexity simulator for staircase and product codes.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use sabm_fec::bch::ComponentParams;
use sabm_fec::selftest;
use sabm_fec::sim::{self, Scheme, SimConfig};
use sabm_fec::window::DecodeMode;

#[derive(Parser)]
#[command(
    name = "sabm-sim",
    about = "BER and complexity simulation for staircase/product codes with \
             standard, soft-aided bit-marking, and genie reference decoders"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the configured (mode, snr, delta) grid and emit CSV.
    Run(RunArgs),
    /// Delta sweep: overrides the delta grid (same CSV schema).
    SweepDelta(SweepArgs),
    /// SNR sweep: overrides the SNR grid (same CSV schema).
    SweepSnr(SweepArgs),
    /// Cross-check the fast paths against the naive reference
    /// implementations on the toy code.
    Selftest {
        /// Use the full word budget (slower).
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args, Debug, Default, Clone)]
struct RunArgs {
    /// Flat key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named code (r087, r083, r092, toy, pc078) or custom
    /// m:base_k:t:shorten[:x] (x marks the extended bit).
    #[arg(long)]
    code: Option<String>,
    /// scc or pc.
    #[arg(long)]
    scheme: Option<String>,
    /// Constellation size M (2, 4, 8).
    #[arg(long)]
    modulation: Option<usize>,
    /// Comma list of standard, sabm, genie_mcfree, genie_sabm_bound.
    #[arg(long)]
    mode: Option<String>,
    /// SNR grid in dB: value, comma list, or start:stop:step.
    #[arg(long)]
    snr: Option<String>,
    /// LLR threshold grid: value, comma list, or start:stop:step.
    #[arg(long)]
    delta: Option<String>,
    /// Decoding window length L.
    #[arg(long, short = 'L')]
    window_len: Option<usize>,
    /// Sweeps per window position (or product iterations).
    #[arg(long)]
    iters: Option<usize>,
    /// HUBs marked per line (default t + 2).
    #[arg(long)]
    hub_count: Option<usize>,
    /// Stop after this many bit-error events.
    #[arg(long)]
    min_errors: Option<u64>,
    /// ...or after this many information bits.
    #[arg(long)]
    max_bits: Option<u64>,
    /// ...or after this many measured windows/arrays.
    #[arg(long)]
    max_windows: Option<u64>,
    /// Master seed; stream seeds derive from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Independent streams per grid point.
    #[arg(long)]
    streams: Option<usize>,
    /// Window positions per stream per scheduling round.
    #[arg(long)]
    chunk_windows: Option<u64>,
    /// Emitted blocks excluded from scoring at chain start.
    #[arg(long)]
    warmup: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Skip remaining sweeps once a sweep changes nothing (off for
    /// complexity measurements).
    #[arg(long)]
    early_exit: bool,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Sweep grid: comma list or start:stop:step.
    #[arg(long)]
    grid: String,
}

fn named_code(name: &str) -> Option<(ComponentParams, Scheme)> {
    match name {
        "r087" | "bch256" => Some((ComponentParams::new(8, 239, 2, 0, true), Scheme::Scc)),
        "r083" | "bch228" => Some((ComponentParams::new(9, 493, 2, 284, true), Scheme::Scc)),
        "r092" | "bch504" => Some((ComponentParams::new(9, 493, 2, 8, true), Scheme::Scc)),
        "toy" | "bch32" => Some((ComponentParams::new(5, 21, 2, 0, true), Scheme::Scc)),
        "pc078" | "bch128" => Some((ComponentParams::new(7, 113, 2, 0, true), Scheme::Pc)),
        _ => None,
    }
}

fn parse_code(spec: &str) -> Result<(ComponentParams, Option<Scheme>)> {
    if let Some((params, scheme)) = named_code(spec) {
        return Ok((params, Some(scheme)));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 4 || parts.len() > 5 {
        bail!(
            "code '{spec}' is neither a known name (r087, r083, r092, toy, pc078) \
             nor m:base_k:t:shorten[:x]"
        );
    }
    let m: u32 = parts[0].parse().context("field degree m")?;
    let base_k: usize = parts[1].parse().context("base_k")?;
    let t: usize = parts[2].parse().context("t")?;
    let shorten: usize = parts[3].parse().context("shorten")?;
    let extended = match parts.get(4) {
        None => false,
        Some(&"x") => true,
        Some(other) => bail!("trailing code field '{other}', expected 'x'"),
    };
    Ok((ComponentParams::new(m, base_k, t, shorten, extended), None))
}

/// Grid expression: single value, comma list, or start:stop:step inclusive.
fn parse_grid(expr: &str) -> Result<Vec<f64>> {
    if expr.contains(':') {
        let parts: Vec<&str> = expr.split(':').collect();
        if parts.len() != 3 {
            bail!("grid '{expr}' must be start:stop:step");
        }
        let start: f64 = parts[0].parse()?;
        let stop: f64 = parts[1].parse()?;
        let step: f64 = parts[2].parse()?;
        if step <= 0.0 || stop < start {
            bail!("grid '{expr}' must ascend with positive step");
        }
        let mut out = vec![];
        let mut i = 0u32;
        loop {
            let v = start + step * f64::from(i);
            if v > stop + step * 1e-9 {
                break;
            }
            out.push(v);
            i += 1;
        }
        return Ok(out);
    }
    expr.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

fn parse_modes(expr: &str) -> Result<Vec<DecodeMode>> {
    expr.split(',')
        .map(|m| DecodeMode::parse(m.trim()).map_err(Into::into))
        .collect()
}

/// Applies config-file values, then flag values, onto `args`.
fn merge_config_file(args: &mut RunArgs, path: &PathBuf) -> Result<()> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
        let (key, value) = (key.trim(), value.trim().to_string());
        let ctx = || format!("{}:{}: key '{key}'", path.display(), lineno + 1);
        match key {
            "code" => set_if_unset(&mut args.code, value),
            "scheme" => set_if_unset(&mut args.scheme, value),
            "modulation" => set_if_unset(&mut args.modulation, value.parse().with_context(ctx)?),
            "mode" => set_if_unset(&mut args.mode, value),
            "snr" => set_if_unset(&mut args.snr, value),
            "delta" => set_if_unset(&mut args.delta, value),
            "window_len" => set_if_unset(&mut args.window_len, value.parse().with_context(ctx)?),
            "iters" => set_if_unset(&mut args.iters, value.parse().with_context(ctx)?),
            "hub_count" => set_if_unset(&mut args.hub_count, value.parse().with_context(ctx)?),
            "min_errors" => set_if_unset(&mut args.min_errors, value.parse().with_context(ctx)?),
            "max_bits" => set_if_unset(&mut args.max_bits, value.parse().with_context(ctx)?),
            "max_windows" => set_if_unset(&mut args.max_windows, value.parse().with_context(ctx)?),
            "seed" => set_if_unset(&mut args.seed, value.parse().with_context(ctx)?),
            "streams" => set_if_unset(&mut args.streams, value.parse().with_context(ctx)?),
            "chunk_windows" => {
                set_if_unset(&mut args.chunk_windows, value.parse().with_context(ctx)?)
            }
            "warmup" => set_if_unset(&mut args.warmup, value.parse().with_context(ctx)?),
            "workers" => set_if_unset(&mut args.workers, value.parse().with_context(ctx)?),
            "early_exit" => {
                if !args.early_exit {
                    args.early_exit = value.parse().with_context(ctx)?;
                }
            }
            other => bail!("{}: unknown config key '{other}'", path.display()),
        }
    }
    Ok(())
}

fn set_if_unset<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

fn build_config(mut args: RunArgs) -> Result<SimConfig> {
    if let Some(path) = args.config.clone() {
        merge_config_file(&mut args, &path)?;
    }
    let code_spec = args.code.clone().unwrap_or_else(|| "r087".into());
    let (params, implied_scheme) = parse_code(&code_spec)?;
    let scheme = match args.scheme.as_deref() {
        Some(s) => Scheme::parse(s)?,
        None => implied_scheme.unwrap_or(Scheme::Scc),
    };
    let mut cfg = SimConfig::new(params, scheme);
    if let Some(m) = args.modulation {
        cfg.modulation = m;
    }
    if let Some(modes) = args.mode.as_deref() {
        cfg.modes = parse_modes(modes)?;
    }
    if let Some(snr) = args.snr.as_deref() {
        cfg.snr_db_grid = parse_grid(snr)?;
    }
    if let Some(delta) = args.delta.as_deref() {
        cfg.delta_grid = parse_grid(delta)?;
    }
    if let Some(l) = args.window_len {
        cfg.window_len = l;
    }
    if let Some(i) = args.iters {
        cfg.iterations = i;
    }
    cfg.hub_count = args.hub_count.or(cfg.hub_count);
    if let Some(v) = args.min_errors {
        cfg.min_error_events = v;
    }
    if let Some(v) = args.max_bits {
        cfg.max_info_bits = v;
    }
    cfg.max_windows = args.max_windows.or(cfg.max_windows);
    if let Some(v) = args.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = args.streams {
        cfg.streams = v;
    }
    if let Some(v) = args.chunk_windows {
        cfg.chunk_windows = v;
    }
    if let Some(v) = args.warmup {
        cfg.warmup_blocks = v;
    }
    if let Some(v) = args.workers {
        cfg.workers = v;
    }
    cfg.early_exit = args.early_exit;
    Ok(cfg)
}

fn emit(cfg: &SimConfig, results: &[sim::GridPointResult], out: Option<&PathBuf>) -> Result<bool> {
    let csv = sim::to_csv(cfg, results)?;
    match out {
        Some(path) => fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv}"),
    }
    let violations: u64 = results
        .iter()
        .map(|r| r.window_counters.audit_violations + r.pc_counters.audit_violations)
        .sum();
    if violations > 0 {
        eprintln!("internal invariant violations detected: {violations}");
    }
    Ok(violations == 0)
}

fn main() -> ExitCode {
    match run_cli() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run_cli() -> Result<bool> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run(args) => {
            let out = args.out.clone();
            let cfg = build_config(args)?;
            let results = sim::run(&cfg)?;
            emit(&cfg, &results, out.as_ref())
        }
        Cmd::SweepDelta(sweep) => {
            let out = sweep.run.out.clone();
            let cfg = build_config(sweep.run)?;
            let grid = parse_grid(&sweep.grid)?;
            let results = sim::sweep_delta(&cfg, &grid)?;
            let mut cfg = cfg;
            cfg.delta_grid = grid;
            emit(&cfg, &results, out.as_ref())
        }
        Cmd::SweepSnr(sweep) => {
            let out = sweep.run.out.clone();
            let cfg = build_config(sweep.run)?;
            let grid = parse_grid(&sweep.grid)?;
            let results = sim::sweep_snr(&cfg, &grid)?;
            let mut cfg = cfg;
            cfg.snr_db_grid = grid;
            emit(&cfg, &results, out.as_ref())
        }
        Cmd::Selftest { full } => {
            let mut all_ok = true;
            for r in selftest::run_all(!full) {
                println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
                all_ok &= r.pass;
            }
            Ok(all_ok)
        }
    }
}
