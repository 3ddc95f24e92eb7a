use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use antnet::datagen::{save_csv, Preset};
use antnet::experiment::{
    plot_report, run_experiment, verify, with_thread_pool, write_outputs, ConfigOverrides,
    ExperimentConfig, VerifyConfig,
};
use antnet::{AcoParams, PathMode, Result, RngSeed};

#[derive(Parser)]
#[command(
    name = "antnet",
    version,
    about = "Ant-colony path features for labelled point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic preset dataset to CSV.
    Generate {
        /// Built-in preset name (dataset1..dataset4).
        #[arg(
            long,
            conflicts_with = "preset_file",
            required_unless_present = "preset_file"
        )]
        preset: Option<String>,
        /// Preset definition in TOML.
        #[arg(long)]
        preset_file: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write an `x0,..,label` header row.
        #[arg(long)]
        header: bool,
    },
    /// Run the insertion experiment and write its reports.
    Run(Box<RunArgs>),
    /// Render boxplots from a saved report.json.
    Plot {
        report: PathBuf,
        #[arg(long, default_value = "boxplots.svg")]
        out: PathBuf,
    },
    /// Check the colony against exhaustive search on small random instances.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        max_mean_gap: f64,
        #[arg(long, default_value_t = 0.95)]
        min_exact: f64,
        #[arg(long, default_value_t = PathMode::OpenPath)]
        mode: PathMode,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat TOML config; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    preset_file: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// The CSV has a header row.
    #[arg(long)]
    header: bool,
    #[arg(long)]
    label_column: Option<usize>,
    /// ground-truth or kmeans.
    #[arg(long)]
    labels: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ants: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    tau0: Option<f64>,
    /// open_path or closed_tour.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    /// Comma-separated phase ids, e.g. 1,4,5.
    #[arg(long, value_delimiter = ',')]
    phases: Option<Vec<u8>>,
    /// Comma-separated classes that receive insertions.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
    /// nearest, farthest or a class index.
    #[arg(long)]
    other_class: Option<String>,
    /// fitted (Gaussian draws) or holdout (real instances).
    #[arg(long)]
    insertion: Option<String>,
    #[arg(long)]
    points_per_phase: Option<usize>,
    /// none or per-edge.
    #[arg(long)]
    normalize: Option<String>,
    /// Z-score features before labelling.
    #[arg(long)]
    normalize_features: Option<bool>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of json,csv,svg.
    #[arg(long, value_delimiter = ',')]
    formats: Option<Vec<String>>,
}

impl RunArgs {
    fn overrides(self) -> ConfigOverrides {
        ConfigOverrides {
            preset: self.preset,
            preset_file: self.preset_file,
            csv: self.csv,
            header: self.header.then_some(true),
            label_column: self.label_column,
            normalize_features: self.normalize_features,
            labels: self.labels,
            k: self.k,
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            ants: self.ants,
            iters: self.iters,
            tau0: self.tau0,
            mode: self.mode,
            phases: self.phases,
            targets: self.targets,
            other_class: self.other_class,
            insertion: self.insertion,
            points_per_phase: self.points_per_phase,
            reps: self.reps,
            normalize: self.normalize,
            seed: self.seed,
            out: self.out,
            formats: self.formats,
            ..Default::default()
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => ConfigOverrides::from_file(path)?,
        None => ConfigOverrides::default(),
    };
    let cfg = ExperimentConfig::from_overrides(file.overlay(args.overrides()))?;
    let report = with_thread_pool(|| run_experiment(&cfg))??;
    for class in &report.classes {
        for p in &class.phases {
            eprintln!(
                "class {} phase {} ({}): median {:.4} over {} runs",
                class.class_id,
                p.phase_id,
                p.phase,
                p.stats.median,
                p.samples.len()
            );
        }
    }
    for path in write_outputs(&report, &cfg.out_dir, &cfg.formats)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            preset,
            preset_file,
            seed,
            out,
            header,
        } => {
            let preset = match (preset, preset_file) {
                (Some(name), _) => Preset::builtin(&name)?,
                (None, Some(path)) => Preset::from_file(path)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let ds = preset.generate(RngSeed(seed))?;
            save_csv(&ds, &out, header)?;
            println!(
                "{}: {} points, dim {}, class counts {:?} -> {}",
                preset.name,
                ds.len(),
                ds.dim(),
                ds.class_counts(),
                out.display()
            );
        }
        Command::Run(args) => cmd_run(*args)?,
        Command::Plot { report, out } => {
            plot_report(&report, &out)?;
            println!("{}", out.display());
        }
        Command::Verify {
            n_max,
            trials,
            seed,
            max_mean_gap,
            min_exact,
            mode,
        } => {
            let cfg = VerifyConfig {
                n_max,
                trials,
                seed: RngSeed(seed),
                params: AcoParams::default().with_mode(mode),
                max_mean_gap,
                min_exact_fraction: min_exact,
            };
            let outcome = with_thread_pool(|| verify(&cfg))??;
            print!("{}", outcome.table());
            return Ok(outcome.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
