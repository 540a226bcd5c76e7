//! The `csa` command: contact area for one pair, the synthetic benchmark,
//! and the HTTP service.
//!
//! Exit codes: 0 on success, 2 when the result was computed but no contact
//! was found, 1 on any error.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use csa_core::engine::{compute_csa, CsaConfig, MeshRole, DEFAULT_CAP_MM};
use csa_core::mesh::{export_ply_colored, load_stl, DEFAULT_WELD_EPSILON_MM};
use csa_core::synth::{generate_suite, load_suite, run_benchmark, write_suite, BenchCase, BenchReport};
use csa_core::CsaReport;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NO_CONTACT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "csa", version, about = "Contact surface area between two triangle meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the contact area between an organ and a tumor mesh.
    Compute(ComputeArgs),
    /// Score the pipeline against synthetic pairs with known contact area.
    Bench(BenchArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ComputeArgs {
    pub organ: PathBuf,
    pub tumor: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write colored PLY meshes into this directory.
    #[arg(long)]
    pub vis: Option<PathBuf>,
    /// Millimeters per model unit.
    #[arg(long, default_value_t = 1.0)]
    pub unit_scale: f64,
    #[arg(long, default_value_t = DEFAULT_CAP_MM)]
    pub cap_mm: f64,
    /// Vertices closer than this (mm) are merged.
    #[arg(long, default_value_t = DEFAULT_WELD_EPSILON_MM)]
    pub weld_epsilon: f64,
    /// Use this threshold (mm) instead of the automatic one.
    #[arg(long)]
    pub threshold_override: Option<f64>,
    #[arg(long)]
    pub no_refine: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl ComputeArgs {
    pub fn new(organ: impl Into<PathBuf>, tumor: impl Into<PathBuf>) -> Self {
        ComputeArgs {
            organ: organ.into(),
            tumor: tumor.into(),
            out: None,
            vis: None,
            unit_scale: 1.0,
            cap_mm: DEFAULT_CAP_MM,
            weld_epsilon: DEFAULT_WELD_EPSILON_MM,
            threshold_override: None,
            no_refine: false,
            format: Format::Json,
        }
    }

    pub fn config(&self) -> CsaConfig {
        CsaConfig {
            cap_mm: self.cap_mm,
            threshold_override_mm: self.threshold_override,
            refine: !self.no_refine,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.unit_scale > 0.0 && self.unit_scale.is_finite()) {
            bail!("--unit-scale must be positive, got {}", self.unit_scale);
        }
        if !(self.weld_epsilon >= 0.0 && self.weld_epsilon.is_finite()) {
            bail!("--weld-epsilon must be non-negative, got {}", self.weld_epsilon);
        }
        self.config().validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Generate a fresh suite instead of reading one.
    #[arg(long)]
    pub generate: bool,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Suite directory: read from it, or with --generate write into it.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Icosphere subdivision level for every generated pair.
    #[arg(long)]
    pub subdiv: Option<u32>,
    /// Directory for report.csv and report.json.
    #[arg(long, default_value = "bench_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value_t = 256)]
    pub max_upload_mb: usize,
    /// Idle sessions are dropped after this many seconds.
    #[arg(long, default_value_t = 3600)]
    pub ttl_secs: u64,
    /// Serve the viewer bundle from this directory.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
}

/// Loads both meshes and runs the pipeline.
pub fn compute_report(args: &ComputeArgs) -> Result<(CsaReport, csa_core::TriMesh, csa_core::TriMesh)> {
    args.validate()?;
    let organ = load_stl(&args.organ, args.unit_scale, args.weld_epsilon)?.mesh;
    let tumor = load_stl(&args.tumor, args.unit_scale, args.weld_epsilon)?.mesh;
    let result = compute_csa(&organ, &tumor, &args.config())?;
    Ok((CsaReport::from_result(&result), organ, tumor))
}

pub fn render(report: &CsaReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Csv => format!("{}\n{}\n", CsaReport::CSV_HEADER, report.csv_row()),
    }
}

/// Writes `organ.ply` and `tumor.ply`, contact faces in red.
pub fn write_vis(dir: &Path, report: &CsaReport, organ: &csa_core::TriMesh, tumor: &csa_core::TriMesh) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("{}", dir.display()))?;
    let hit: HashSet<usize> = report.csa_face_ids.iter().copied().collect();
    let none = HashSet::new();
    let (organ_hl, tumor_hl) = match report.measured_mesh {
        MeshRole::Tumor => (&none, &hit),
        MeshRole::Organ => (&hit, &none),
    };
    export_ply_colored(organ, organ_hl, dir.join("organ.ply"))?;
    export_ply_colored(tumor, tumor_hl, dir.join("tumor.ply"))?;
    Ok(())
}

/// Runs `compute`, writing the report to `--out` or `stdout`. The result is
/// written even when there is no contact.
pub fn cmd_compute(args: &ComputeArgs, stdout: &mut dyn Write) -> Result<u8> {
    let (report, organ, tumor) = compute_report(args)?;
    let text = render(&report, args.format);
    match &args.out {
        Some(p) => fs::write(p, &text).with_context(|| format!("{}", p.display()))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let Some(dir) = &args.vis {
        write_vis(dir, &report, &organ, &tumor)?;
    }
    Ok(if report.insufficient_contact || report.csa_face_ids.is_empty() {
        EXIT_NO_CONTACT
    } else {
        EXIT_OK
    })
}

/// Runs `bench`. Fails only when the suite cannot be read or every pair failed.
pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<u8> {
    let start = Instant::now();
    let cases: Vec<BenchCase> = if args.generate {
        let suite = generate_suite(args.seed, args.subdiv)?;
        let dir = args.suite.clone().unwrap_or_else(|| args.out.join("suite"));
        write_suite(&dir, &suite)?;
        suite.iter().map(BenchCase::from).collect()
    } else {
        let Some(dir) = &args.suite else {
            bail!("bench needs --suite DIR or --generate");
        };
        if args.subdiv.is_some() {
            bail!("--subdiv only applies with --generate");
        }
        load_suite(dir)?
    };
    let report = run_benchmark(&cases, &CsaConfig::default());
    let (csv, json) = report.write(&args.out)?;
    print_summary(&report, stdout)?;
    writeln!(
        stdout,
        "wrote {} and {} in {:.1} s",
        csv.display(),
        json.display(),
        start.elapsed().as_secs_f64()
    )?;
    if report.aggregate.failed == report.rows.len() {
        bail!("all {} pairs failed", report.rows.len());
    }
    Ok(EXIT_OK)
}

fn print_summary(report: &BenchReport, out: &mut dyn Write) -> std::io::Result<()> {
    for r in &report.rows {
        match (r.computed, r.percent_error, &r.error) {
            (Some(c), Some(e), _) => writeln!(out, "{:8} {:10} truth {:10.3} csa {:10.3} {:+7.3}%", r.id, r.shape, r.truth, c, e)?,
            (_, _, Some(err)) => writeln!(out, "{:8} {:10} failed: {err}", r.id, r.shape)?,
            _ => {}
        }
    }
    let a = &report.aggregate;
    let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:+.3}%"));
    writeln!(
        out,
        "median {}  q1 {}  q3 {}  within 5%: {}/{}  outliers: {}",
        f(a.median),
        f(a.q1),
        f(a.q3),
        a.within_5_percent,
        a.pairs,
        if a.outliers.is_empty() { "none".to_string() } else { a.outliers.join(" ") }
    )
}

pub fn cmd_serve(args: &ServeArgs) -> Result<u8> {
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .with_context(|| format!("bad address {}:{}", args.host, args.port))?;
    let config = csa_service::ServiceConfig {
        max_upload_bytes: args.max_upload_mb * 1024 * 1024,
        session_ttl: Duration::from_secs(args.ttl_secs),
        static_dir: args.static_dir.clone(),
    };
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("bind {addr}"))?;
        eprintln!("listening on http://{addr}");
        csa_service::serve(listener, config).await?;
        Ok(EXIT_OK)
    })
}

/// Dispatches a parsed command line; errors become exit code 1 with the
/// message on stderr.
pub fn run(cli: Cli) -> u8 {
    let mut stdout = std::io::stdout().lock();
    let outcome = match &cli.command {
        Command::Compute(a) => cmd_compute(a, &mut stdout),
        Command::Bench(a) => cmd_bench(a, &mut stdout),
        Command::Serve(a) => cmd_serve(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("csa: {e:#}");
            EXIT_ERROR
        }
    }
}
