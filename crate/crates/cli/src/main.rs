//! Command-line front end: classification, profile construction,
//! verification, energy tables, level sweeps, and the generalized-CH
//! peaked-solitary scan. All outputs are deterministic JSON (and CSV for
//! profiles): identical configuration gives byte-identical reports.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use travwave::classify::{classify_level, classify_sweep};
use travwave::error::Error as TwError;
use travwave::io::{load_profile, potential_from_json, write_profile_with_sidecar, ClassifyReport};
use travwave::models::{self, GchGrid, ModelParams};
use travwave::profile::{build_profile, BuildOptions, CompositionSpec, WaveProfile};
use travwave::verify::verify_profile;
use travwave::Potential;

#[derive(Parser)]
#[command(
    name = "travwave",
    about = "Bounded traveling waves of u u'' + u'^2/2 + F'(u) = 0 for polynomial F",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the wave types supported at one energy level.
    Classify(CommonArgs),
    /// Build sampled wave profiles (CSV + JSON sidecar) for every class at a level.
    Profile(ProfileArgs),
    /// Verify a stored profile against the weak formulation.
    Verify(VerifyArgs),
    /// Reproduce the energy-classification table of a model or potential.
    Table(CommonArgs),
    /// Classify over an energy grid (critical levels inserted automatically).
    Sweep(SweepArgs),
    /// Scan the generalized Camassa-Holm family for peaked solitary waves.
    Conjecture(ConjectureArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// JSON job configuration; explicit flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Potential coefficients "c0,c1,..." (F = sum c_i u^i).
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Model reduction instead of raw coefficients: ch | mase | gch.
    #[arg(long)]
    model: Option<String>,
    /// Wave speed c (model reductions).
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// kappa (ch, gch).
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    /// Integration constant r (ch, gch).
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Integration constant K (mase).
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Cubic parameter a (gch).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Energy level h.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Output directory (default: $TRAVWAVE_OUT or ".").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Quadrature tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed recorded in reports (reproducibility plumbing).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweep/table/scan fan-out.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Only build the class with this tag (e.g. "compacton").
    #[arg(long)]
    tag: Option<String>,
    /// Plateau gap length (plateau profiles).
    #[arg(long)]
    gap: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Profile CSV path.
    #[arg(long)]
    profile: PathBuf,
    /// Metadata sidecar path.
    #[arg(long)]
    sidecar: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Energy grid "lo:hi:n".
    #[arg(long, allow_hyphen_values = true)]
    h_grid: Option<String>,
}

#[derive(Args)]
struct ConjectureArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// JSON job file mirroring the flag set.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<String>,
    potential: Option<serde_json::Value>,
    model: Option<serde_json::Value>,
    h: Option<f64>,
    h_grid: Option<GridSpec>,
    out: Option<PathBuf>,
    tol: Option<f64>,
    seed: Option<u64>,
    jobs: Option<usize>,
    tag: Option<String>,
    gap: Option<f64>,
    placements: Option<Vec<f64>>,
    periodic: Option<f64>,
    grid: Option<GridConfig>,
}

#[derive(Debug, Clone, Deserialize)]
struct GridSpec {
    lo: f64,
    hi: f64,
    n: usize,
}

#[derive(Debug, Clone, Deserialize)]
struct GridConfig {
    a: Option<Vec<f64>>,
    c: Option<Vec<f64>>,
    kappa: Option<Vec<f64>>,
    r: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<TwError>()
                .map(exit_code_for)
                .unwrap_or(ExitCode::from(2));
            code
        }
    }
}

fn exit_code_for(e: &TwError) -> ExitCode {
    match e {
        TwError::Quadrature { .. } => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Profile(args) => cmd_profile(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Table(args) => cmd_table(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Conjecture(args) => cmd_conjecture(args),
    }
}

fn load_config(path: &Option<PathBuf>, expect_command: &str) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let cfg: FileConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    if let Some(cmd) = &cfg.command {
        if cmd != expect_command {
            return Err(anyhow!(
                "config command {cmd:?} does not match subcommand {expect_command:?}"
            ));
        }
    }
    Ok(cfg)
}

/// Resolves the potential from flags and config: exactly one of
/// coefficients or model parameters must be present.
fn resolve_potential(args: &CommonArgs, cfg: &FileConfig) -> anyhow::Result<Potential> {
    let coeffs_flag = args.coeffs.as_ref().map(|s| parse_coeffs(s)).transpose()?;
    let model_flag = build_model(args)?;

    let from_flags: Option<Potential> = match (&coeffs_flag, &model_flag) {
        (Some(_), Some(_)) => {
            return Err(anyhow!("give either --coeffs or --model, not both"));
        }
        (Some(c), None) => Some(Potential::new(c.clone())?),
        (None, Some(m)) => Some(m.reduce()?),
        (None, None) => None,
    };
    if let Some(p) = from_flags {
        return Ok(p);
    }

    match (&cfg.potential, &cfg.model) {
        (Some(_), Some(_)) => Err(anyhow!(
            "config must contain exactly one of \"potential\" and \"model\""
        )),
        (Some(v), None) => Ok(potential_from_json(v)?),
        (None, Some(v)) => {
            let m: ModelParams = serde_json::from_value(v.clone())
                .context("parsing model parameters from config")?;
            Ok(m.reduce()?)
        }
        (None, None) => Err(anyhow!(
            "no potential given: use --coeffs, --model, or a config file"
        )),
    }
}

fn build_model(args: &CommonArgs) -> anyhow::Result<Option<ModelParams>> {
    let Some(kind) = &args.model else {
        return Ok(None);
    };
    let need =
        |v: Option<f64>, name: &str| v.ok_or_else(|| anyhow!("model {kind} requires --{name}"));
    let m = match kind.as_str() {
        "ch" => ModelParams::Ch(models::ChParams {
            c: need(args.c, "c")?,
            kappa: need(args.kappa, "kappa")?,
            r: need(args.r, "r")?,
        }),
        "mase" => ModelParams::Mase(models::MaseParams {
            c: need(args.c, "c")?,
            k: need(args.k, "k")?,
        }),
        "gch" => ModelParams::Gch(models::GchParams {
            a: need(args.a, "a")?,
            c: need(args.c, "c")?,
            kappa: need(args.kappa, "kappa")?,
            r: need(args.r, "r")?,
        }),
        other => return Err(anyhow!("unknown model {other:?} (ch | mase | gch)")),
    };
    Ok(Some(m))
}

fn parse_coeffs(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("bad coefficient {x:?}: {e}"))
        })
        .collect()
}

fn out_dir(args: &CommonArgs, cfg: &FileConfig) -> anyhow::Result<PathBuf> {
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .or_else(|| std::env::var_os("TRAVWAVE_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(dir)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_classify(args: CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load_config(&args.config, "classify")?;
    let f = resolve_potential(&args, &cfg)?;
    let h = args
        .h
        .or(cfg.h)
        .ok_or_else(|| anyhow!("classify requires --h"))?;
    let dir = out_dir(&args, &cfg)?;

    let classes = classify_level(&f, h);
    let report = ClassifyReport::new(h, &classes);
    write_json(&dir.join("classify.json"), &report)?;
    println!(
        "h = {h}: {}",
        if classes.is_empty() {
            "no bounded waves".to_string()
        } else {
            classes
                .iter()
                .map(|c| c.tag.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        }
    );
    Ok(if classes.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_profile(args: ProfileArgs) -> anyhow::Result<ExitCode> {
    let cfg = load_config(&args.common.config, "profile")?;
    let f = resolve_potential(&args.common, &cfg)?;
    let h = args.common.h.or(cfg.h).unwrap_or_else(|| f.h0());
    let dir = out_dir(&args.common, &cfg)?;
    let mut opts = BuildOptions::default();
    if let Some(tol) = args.common.tol.or(cfg.tol) {
        opts.quad_tol = tol.max(1e-14);
    }
    let tag_filter = args.tag.clone().or_else(|| cfg.tag.clone());

    let mut built: Vec<(String, PathBuf, PathBuf)> = Vec::new();
    for class in classify_level(&f, h) {
        let tag = class.tag.as_str().to_string();
        if let Some(want) = &tag_filter {
            if want != &tag {
                continue;
            }
        }
        let profile: Result<WaveProfile, TwError> = match class.tag {
            travwave::classify::WaveTag::NoneSingular => continue,
            travwave::classify::WaveTag::CompositeAdmissible => {
                let spec = CompositionSpec {
                    placements: cfg.placements.clone().unwrap_or_else(|| vec![0.0, 2.0]),
                    periodic: cfg.periodic,
                };
                travwave::profile::build_composite(&f, &spec, &opts)
            }
            travwave::classify::WaveTag::Plateau => {
                travwave::profile::build_plateau(&f, args.gap.or(cfg.gap).unwrap_or(1.0), &opts)
            }
            _ => build_profile(&f, h, &class, &opts),
        };
        let profile = profile?;
        let csv = dir.join(format!("profile_{tag}.csv"));
        let sc = dir.join(format!("profile_{tag}.json"));
        write_profile_with_sidecar(&profile, &f, &csv, &sc)?;
        println!(
            "{tag}: {} samples -> {}",
            profile.samples.len(),
            csv.display()
        );
        built.push((tag, csv, sc));
    }

    if built.is_empty() {
        println!("h = {h}: no buildable wave classes");
        return Ok(ExitCode::from(1));
    }
    let listing: Vec<serde_json::Value> = built
        .iter()
        .map(|(tag, csv, sc)| {
            serde_json::json!({
                "tag": tag,
                "csv": csv.to_string_lossy(),
                "sidecar": sc.to_string_lossy(),
            })
        })
        .collect();
    write_json(
        &dir.join("profiles.json"),
        &serde_json::json!({
            "h": h,
            "seed": args.common.seed.or(cfg.seed).unwrap_or(42),
            "profiles": listing,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let cfg = load_config(&args.common.config, "verify")?;
    let dir = out_dir(&args.common, &cfg)?;
    let (profile, f) = load_profile(&args.profile, &args.sidecar)?;
    let report = verify_profile(&profile, &f);
    write_json(&dir.join("verification.json"), &report)?;
    println!(
        "verdict: {} (first integral {:.3e}, worst weak {:.3e})",
        report.verdict.as_str(),
        report.first_integral_residual,
        report
            .weak_residuals
            .iter()
            .map(|w| w.residual)
            .fold(0.0f64, f64::max),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(args: CommonArgs) -> anyhow::Result<ExitCode> {
    let cfg = load_config(&args.config, "table")?;
    let f = resolve_potential(&args, &cfg)?;
    let dir = out_dir(&args, &cfg)?;
    let table = travwave::exec::with_jobs(args.jobs.or(cfg.jobs), || models::reproduce_table(&f));
    write_json(&dir.join("table.json"), &table)?;
    let text = table.to_text();
    std::fs::write(dir.join("table.txt"), &text)?;
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let cfg = load_config(&args.common.config, "sweep")?;
    let f = resolve_potential(&args.common, &cfg)?;
    let dir = out_dir(&args.common, &cfg)?;

    let grid = match (&args.h_grid, &cfg.h_grid) {
        (Some(s), _) => parse_grid(s)?,
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(anyhow!("sweep requires --h-grid lo:hi:n")),
    };
    if grid.n < 2 {
        return Err(anyhow!("h-grid needs at least two points"));
    }
    let hs: Vec<f64> = (0..grid.n)
        .map(|i| grid.lo + (grid.hi - grid.lo) * i as f64 / (grid.n - 1) as f64)
        .collect();

    let rows = travwave::exec::with_jobs(args.common.jobs.or(cfg.jobs), || classify_sweep(&f, &hs));
    let reports: Vec<ClassifyReport> = rows
        .iter()
        .map(|(h, classes)| ClassifyReport::new(*h, classes))
        .collect();
    write_json(&dir.join("sweep.json"), &reports)?;
    let total: usize = rows.iter().map(|(_, c)| c.len()).sum();
    println!("{} levels, {} classes", rows.len(), total);
    Ok(if total == 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn parse_grid(s: &str) -> anyhow::Result<GridSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(anyhow!("h-grid must be lo:hi:n, got {s:?}"));
    }
    Ok(GridSpec {
        lo: parts[0]
            .trim()
            .parse()
            .map_err(|e| anyhow!("bad lo: {e}"))?,
        hi: parts[1]
            .trim()
            .parse()
            .map_err(|e| anyhow!("bad hi: {e}"))?,
        n: parts[2].trim().parse().map_err(|e| anyhow!("bad n: {e}"))?,
    })
}

fn cmd_conjecture(args: ConjectureArgs) -> anyhow::Result<ExitCode> {
    let cfg = load_config(&args.common.config, "conjecture")?;
    let dir = out_dir(&args.common, &cfg)?;

    let mut grid = GchGrid::default();
    if let Some(g) = &cfg.grid {
        if let Some(v) = &g.a {
            grid.a = v.clone();
        }
        if let Some(v) = &g.c {
            grid.c = v.clone();
        }
        if let Some(v) = &g.kappa {
            grid.kappa = v.clone();
        }
        if let Some(v) = &g.r {
            grid.r = v.clone();
        }
    }
    let records = travwave::exec::with_jobs(args.common.jobs.or(cfg.jobs), || {
        models::gch_conjecture_scan(&grid)
    });
    let hits: Vec<&models::GchScanRecord> = records.iter().filter(|r| r.peaked_solitary).collect();
    write_json(
        &dir.join("conjecture.json"),
        &serde_json::json!({
            "grid_points": records.len(),
            "hits": hits,
            "records": records,
        }),
    )?;
    println!(
        "{} grid points, {} peaked-solitary hits",
        records.len(),
        hits.len()
    );
    Ok(ExitCode::SUCCESS)
}
