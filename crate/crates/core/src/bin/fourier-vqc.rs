use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fourier_vqc::cesaro::{cesaro_report, DEFAULT_GRID};
use fourier_vqc::experiments::{
    emit_report, run_manifest, ExperimentManifest, ReportFormat, RunCounts, RunOptions, Suite,
};
use fourier_vqc::model::{spectrum_of, DEFAULT_DEDUP_TOLERANCE};
use fourier_vqc::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fourier-vqc",
    version,
    about = "Trainable-frequency VQC experiments"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed for every derived random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output directory; run caches and reports go here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Learning rate(s); replaces the suite's learning-rate grid.
    #[arg(long, global = true, value_delimiter = ',')]
    lr: Vec<f64>,
    /// Optimizer iterations per run.
    #[arg(long, global = true)]
    iters: Option<usize>,
    /// Targets x seeds per configuration, e.g. `3x3`; a bare `N` means `NxN`.
    #[arg(long, global = true)]
    runs_per_config: Option<RunCounts>,
    /// Report formats to emit.
    #[arg(long, global = true, value_enum, value_delimiter = ',', default_values_t = [Format::All])]
    format: Vec<Format>,
    /// Suppress per-run progress on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Ω₁/Ω₂ reachability study with the learning-rate grid.
    Reachability(SuiteArgs),
    /// R² versus N(μ, 1) spectrum shifts for all four initializations.
    ShiftSweep {
        #[command(flatten)]
        suite: SuiteArgs,
        /// Shift means; defaults to 0..=9.
        #[arg(long, value_delimiter = ',')]
        mu: Vec<f64>,
    },
    /// Airline passenger series with a four-qubit circuit.
    Flight {
        #[command(flatten)]
        suite: SuiteArgs,
        /// Month,Passengers CSV; the bundled copy is used when omitted.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Prefactor gradient magnitude after one Adam step versus initial prefactor.
    GradSweep(SuiteArgs),
    /// Fejér approximation errors and gate-count scaling table (JSON on stdout).
    Cesaro {
        #[arg(long, value_delimiter = ',', default_values_t = [2.7, 4.3])]
        w: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [13, 40, 121, 364])]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 13.0)]
        w_max: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Print the frequency spectrum generated by the given prefactors.
    Spectrum {
        #[arg(required = true, value_delimiter = ',', allow_negative_numbers = true)]
        alpha: Vec<f64>,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Start from a manifest JSON instead of the suite defaults; flags still override.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn load_manifest(suite: Suite, args: &SuiteArgs, g: &Global) -> Result<ExperimentManifest> {
    let mut m = match &args.manifest {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io {
                path: p.clone(),
                source: e,
            })?;
            let m: ExperimentManifest = serde_json::from_str(&text)?;
            if m.suite != suite {
                return Err(Error::Config(format!(
                    "{} holds a {} manifest",
                    p.display(),
                    m.suite
                )));
            }
            m
        }
        None => ExperimentManifest::for_suite(suite, g.seed),
    };
    if args.manifest.is_none() || g.seed != 0 {
        m.master_seed = g.seed;
    }
    if !g.lr.is_empty() {
        m.learning_rates = g.lr.clone();
    }
    if let Some(it) = g.iters {
        m.iterations = it;
        m.record_every = m.record_every.min(it).max(1);
    }
    if let Some(c) = g.runs_per_config {
        m.counts = c;
    }
    Ok(m)
}

fn formats(g: &Global) -> Vec<ReportFormat> {
    if g.format.contains(&Format::All) {
        return ReportFormat::ALL.to_vec();
    }
    let mut out = Vec::new();
    for f in &g.format {
        let r = match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
            Format::Svg => ReportFormat::Svg,
            Format::All => unreachable!("handled above"),
        };
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

fn run_suite(m: ExperimentManifest, g: &Global) -> Result<()> {
    let out = g
        .out
        .clone()
        .unwrap_or_else(|| Path::new("results").join(m.suite.name()));
    let opts = RunOptions {
        out_dir: Some(out.clone()),
        progress: !g.quiet,
    };
    let report = run_manifest(&m, &opts)?;
    for f in formats(g) {
        if f == ReportFormat::Svg && report.is_empty() {
            eprintln!("skipping svg: report has no runs");
            continue;
        }
        let path = emit_report(&report, f, &out)?;
        println!("wrote {}", path.display());
    }
    for grp in &report.groups {
        let med = grp
            .r2_test
            .as_ref()
            .map_or("n/a".to_string(), |s| format!("{:.4}", s.median));
        let disp = grp
            .displacement
            .as_ref()
            .map_or("n/a".to_string(), |s| format!("{:.3}", s.max));
        println!(
            "{:<50} runs {:>4} failed {:>3} median test R2 {med:>8} max |dα| {disp}",
            grp.group.to_string(),
            grp.runs,
            grp.failed
        );
    }
    if let Some(s) = &report.gradient_sweep {
        for r in &s.rows {
            println!("alpha0 {:>6.2}  mean |dL/dα| {:.6e}", r.alpha0, r.mean_abs);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Reachability(a) => run_suite(load_manifest(Suite::Reachability, a, g)?, g),
        Command::GradSweep(a) => run_suite(load_manifest(Suite::GradSweep, a, g)?, g),
        Command::ShiftSweep { suite, mu } => {
            let mut m = load_manifest(Suite::ShiftSweep, suite, g)?;
            if !mu.is_empty() {
                m.shift_means = mu.clone();
            }
            run_suite(m, g)
        }
        Command::Flight { suite, data } => {
            let mut m = load_manifest(Suite::Flight, suite, g)?;
            if data.is_some() {
                m.data_path = data.clone();
            }
            run_suite(m, g)
        }
        Command::Cesaro {
            w,
            orders,
            w_max,
            epsilon,
            grid,
        } => {
            let report = cesaro_report(w, orders, *w_max, *epsilon, *grid)?;
            let text = serde_json::to_string_pretty(&report)? + "\n";
            if let Some(dir) = &g.out {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io {
                    path: dir.clone(),
                    source: e,
                })?;
                let path = dir.join("cesaro.json");
                std::fs::write(&path, &text).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
            }
            print!("{text}");
            Ok(())
        }
        Command::Spectrum { alpha } => {
            if alpha.iter().any(|a| !a.is_finite()) {
                return Err(Error::Config("prefactors must be finite".into()));
            }
            let s = spectrum_of(alpha, DEFAULT_DEDUP_TOLERANCE);
            let values: Vec<String> = s.values.iter().map(|v| format!("{v}")).collect();
            println!("{} frequencies: {}", s.len(), values.join(" "));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
