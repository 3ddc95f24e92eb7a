//! End-to-end experiment pipeline and the brute-force verification suite.
//!
//! Configuration comes from up to three layers, lowest first: built-in
//! defaults, a flat TOML file, and command-line flags. Each layer is a
//! [`ConfigOverrides`] with the same keys:
//!
//! ```toml
//! preset = "dataset1"        # or: preset_file = "...", or: csv = "iris.csv"
//! header = true              # CSV has a header row
//! label_column = 4           # CSV label column (default: last)
//! normalize_features = true  # z-score features (default: on for CSV only)
//! labels = "kmeans"          # or "ground-truth"
//! k = 3                      # default: number of classes in the data
//! kmeans_max_iters = 300
//! kmeans_tol = 1e-6
//! alpha = 1.0
//! beta = 2.0
//! rho = 0.1
//! ants = 20                  # default: min(n, 20)
//! iters = 200
//! tau0 = 0.001               # default: 1 / (n * nearest-neighbour length)
//! mode = "open_path"         # or "closed_tour"
//! phases = [1, 2, 3, 4, 5]
//! targets = [0]              # classes receiving insertions (default: preset's, else all)
//! other_class = "nearest"    # "farthest" or a class index
//! insertion = "fitted"       # or "holdout": insert real held-out instances
//! points_per_phase = 5
//! near_min_sigma = 2.0
//! near_max_sigma = 3.0
//! intermediate_jitter = 1.0
//! reps = 30
//! normalize = "none"         # or "per-edge"
//! seed = 42
//! out = "out"
//! formats = ["json", "csv", "svg"]
//! ```
//!
//! Randomness is derived from the single `seed`: the dataset from
//! `[DATASET, class]`, k-means from `[KMEANS]`, class `c`'s insertion points
//! from `[PHASE_POINTS, c]` and its colony runs from `[CLASS, c]`.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aco::{brute_force_matrix, solve_matrix, AcoParams, PathMode};
use crate::clustering::{align_to_reference, kmeans, KMeansConfig};
use crate::datagen::{load_csv, Preset};
use crate::dataset::{zscore_normalize, LabeledDataset, Point};
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::feature::{
    generate_phases, holdout_phases, run_insertion_protocol, FeatureScale, InsertionSource,
    OtherClass, PhaseGeometry, PhaseKind, PhaseSpec,
};
use crate::network::{build_class_networks, ClassNetwork};
use crate::plot::render_svg;
use crate::report::{ClassReport, DatasetDescriptor, ExperimentReport};
use crate::seed::{stream, RngSeed};

/// Environment variable capping worker threads; unset or 0 means automatic.
pub const THREADS_ENV: &str = "ANTNET_THREADS";

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    Preset(String),
    PresetFile(PathBuf),
    Csv {
        path: PathBuf,
        has_header: bool,
        label_column: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    GroundTruth,
    #[default]
    Kmeans,
}

impl LabelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelMode::GroundTruth => "ground-truth",
            LabelMode::Kmeans => "kmeans",
        }
    }
}

impl FromStr for LabelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ground-truth" | "ground_truth" | "truth" => Ok(LabelMode::GroundTruth),
            "kmeans" | "k-means" => Ok(LabelMode::Kmeans),
            other => Err(Error::input(format!(
                "unknown labeling {other:?} (expected ground-truth or kmeans)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(Error::input(format!(
                "unknown output format {other:?} (expected json, csv or svg)"
            ))),
        }
    }
}

/// One configuration layer; every key optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub preset: Option<String>,
    pub preset_file: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub header: Option<bool>,
    pub label_column: Option<usize>,
    pub normalize_features: Option<bool>,
    pub labels: Option<String>,
    pub k: Option<usize>,
    pub kmeans_max_iters: Option<usize>,
    pub kmeans_tol: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub ants: Option<usize>,
    pub iters: Option<usize>,
    pub tau0: Option<f64>,
    pub mode: Option<String>,
    pub phases: Option<Vec<u8>>,
    pub targets: Option<Vec<usize>>,
    pub other_class: Option<String>,
    pub insertion: Option<String>,
    pub points_per_phase: Option<usize>,
    pub near_min_sigma: Option<f64>,
    pub near_max_sigma: Option<f64>,
    pub intermediate_jitter: Option<f64>,
    pub reps: Option<usize>,
    pub normalize: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
}

impl ConfigOverrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ConfigOverrides::from_toml(&text)
    }

    fn has_source(&self) -> bool {
        self.preset.is_some() || self.preset_file.is_some() || self.csv.is_some()
    }

    /// Keys set in `higher` win. A dataset source in `higher` replaces the
    /// whole source selection of `self`.
    pub fn overlay(self, higher: ConfigOverrides) -> ConfigOverrides {
        let source_from_higher = higher.has_source();
        macro_rules! pick {
            ($($field:ident),*) => {
                ConfigOverrides {
                    preset: if source_from_higher { higher.preset } else { self.preset },
                    preset_file: if source_from_higher { higher.preset_file } else { self.preset_file },
                    csv: if source_from_higher { higher.csv } else { self.csv },
                    $($field: higher.$field.or(self.$field),)*
                }
            };
        }
        pick!(
            header,
            label_column,
            normalize_features,
            labels,
            k,
            kmeans_max_iters,
            kmeans_tol,
            alpha,
            beta,
            rho,
            ants,
            iters,
            tau0,
            mode,
            phases,
            targets,
            other_class,
            insertion,
            points_per_phase,
            near_min_sigma,
            near_max_sigma,
            intermediate_jitter,
            reps,
            normalize,
            seed,
            out,
            formats
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub source: DatasetSource,
    pub normalize_features: Option<bool>,
    pub labels: LabelMode,
    pub k: Option<usize>,
    pub kmeans_max_iters: usize,
    pub kmeans_tol: f64,
    /// Colony parameters; the seed field is ignored in favour of `seed`.
    pub aco: AcoParams,
    pub phases: Option<Vec<PhaseKind>>,
    pub targets: Option<Vec<usize>>,
    pub other_class: OtherClass,
    pub insertion: InsertionSource,
    pub geometry: PhaseGeometry,
    pub repetitions: usize,
    pub scale: FeatureScale,
    pub seed: RngSeed,
    pub out_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl ExperimentConfig {
    /// Defaults for everything but the dataset source.
    pub fn new(source: DatasetSource) -> Self {
        ExperimentConfig {
            source,
            normalize_features: None,
            labels: LabelMode::Kmeans,
            k: None,
            kmeans_max_iters: 300,
            kmeans_tol: 1e-6,
            aco: AcoParams::default(),
            phases: None,
            targets: None,
            other_class: OtherClass::Nearest,
            insertion: InsertionSource::Fitted,
            geometry: PhaseGeometry::default(),
            repetitions: 30,
            scale: FeatureScale::Raw,
            seed: RngSeed(42),
            out_dir: PathBuf::from("out"),
            formats: vec![OutputFormat::Json, OutputFormat::Csv, OutputFormat::Svg],
        }
    }

    pub fn from_overrides(o: ConfigOverrides) -> Result<Self> {
        let sources = [o.preset.is_some(), o.preset_file.is_some(), o.csv.is_some()];
        let source = match (o.preset, o.preset_file, o.csv) {
            _ if sources.iter().filter(|s| **s).count() > 1 => {
                return Err(Error::input(
                    "choose exactly one of preset, preset_file and csv",
                ))
            }
            (Some(name), None, None) => DatasetSource::Preset(name),
            (None, Some(path), None) => DatasetSource::PresetFile(path),
            (None, None, Some(path)) => DatasetSource::Csv {
                path,
                has_header: o.header.unwrap_or(false),
                label_column: o.label_column,
            },
            _ => {
                return Err(Error::input(
                    "no dataset source: set preset, preset_file or csv",
                ))
            }
        };
        let mut cfg = ExperimentConfig::new(source);
        cfg.normalize_features = o.normalize_features;
        if let Some(l) = o.labels {
            cfg.labels = l.parse()?;
        }
        cfg.k = o.k;
        if let Some(v) = o.kmeans_max_iters {
            cfg.kmeans_max_iters = v;
        }
        if let Some(v) = o.kmeans_tol {
            cfg.kmeans_tol = v;
        }
        let a = &mut cfg.aco;
        if let Some(v) = o.alpha {
            a.alpha = v;
        }
        if let Some(v) = o.beta {
            a.beta = v;
        }
        if let Some(v) = o.rho {
            a.rho = v;
        }
        a.n_ants = o.ants.or(a.n_ants);
        if let Some(v) = o.iters {
            a.n_iters = v;
        }
        a.tau0 = o.tau0.or(a.tau0);
        if let Some(m) = o.mode {
            a.mode = m.parse()?;
        }
        if let Some(ids) = o.phases {
            cfg.phases = Some(
                ids.into_iter()
                    .map(PhaseKind::from_id)
                    .collect::<Result<_>>()?,
            );
        }
        cfg.targets = o.targets;
        if let Some(s) = o.other_class {
            cfg.other_class = s.parse()?;
        }
        if let Some(s) = o.insertion {
            cfg.insertion = s.parse()?;
        }
        let g = &mut cfg.geometry;
        if let Some(v) = o.points_per_phase {
            g.points_per_phase = v;
        }
        if let Some(v) = o.near_min_sigma {
            g.near_min_sigma = v;
        }
        if let Some(v) = o.near_max_sigma {
            g.near_max_sigma = v;
        }
        if let Some(v) = o.intermediate_jitter {
            g.intermediate_jitter = v;
        }
        if let Some(v) = o.reps {
            cfg.repetitions = v;
        }
        if let Some(s) = o.normalize {
            cfg.scale = s.parse()?;
        }
        if let Some(s) = o.seed {
            cfg.seed = RngSeed(s);
        }
        if let Some(p) = o.out {
            cfg.out_dir = p;
        }
        if let Some(f) = o.formats {
            cfg.formats = f.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.formats.is_empty() {
            return Err(Error::input("select at least one output format"));
        }
        if self.repetitions == 0 {
            return Err(Error::input("reps must be at least 1"));
        }
        self.aco.validate()
    }
}

struct LoadedData {
    dataset: LabeledDataset,
    source: String,
    targets: Option<Vec<usize>>,
    phases: Option<Vec<u8>>,
}

fn load_source(cfg: &ExperimentConfig) -> Result<LoadedData> {
    let (preset, source) = match &cfg.source {
        DatasetSource::Preset(name) => (Preset::builtin(name)?, name.clone()),
        DatasetSource::PresetFile(path) => (Preset::from_file(path)?, path.display().to_string()),
        DatasetSource::Csv {
            path,
            has_header,
            label_column,
        } => {
            let (ds, _) = load_csv(path, *has_header, *label_column)?;
            let ds = if cfg.normalize_features.unwrap_or(true) {
                zscore_normalize(&ds)
            } else {
                ds
            };
            return Ok(LoadedData {
                dataset: ds,
                source: path.display().to_string(),
                targets: None,
                phases: None,
            });
        }
    };
    let ds = preset.generate(cfg.seed)?;
    let ds = if cfg.normalize_features.unwrap_or(false) {
        zscore_normalize(&ds)
    } else {
        ds
    };
    Ok(LoadedData {
        dataset: ds,
        source,
        targets: preset.targets,
        phases: preset.phases,
    })
}

/// Renumbers labels to `0..m` preserving their relative order.
fn compact_labels(labels: &[usize]) -> Vec<usize> {
    let mut ids: Vec<usize> = labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    labels
        .iter()
        .map(|l| ids.binary_search(l).expect("present"))
        .collect()
}

/// Labels used to build networks: ground truth, or k-means clusters renamed
/// after the ground-truth class they overlap most.
pub fn working_labels(ds: &LabeledDataset, cfg: &ExperimentConfig) -> Result<LabeledDataset> {
    match cfg.labels {
        LabelMode::GroundTruth => Ok(ds.clone()),
        LabelMode::Kmeans => {
            let k = cfg.k.unwrap_or_else(|| ds.n_classes());
            let km = kmeans(
                ds.points(),
                &KMeansConfig {
                    k,
                    max_iters: cfg.kmeans_max_iters,
                    tol: cfg.kmeans_tol,
                    seed: cfg.seed.derive(&[stream::KMEANS]),
                },
            )?;
            let aligned = compact_labels(&align_to_reference(&km.labels, ds.labels()));
            ds.relabeled(aligned)
        }
    }
}

/// Runs `f` on a pool sized by `ANTNET_THREADS`.
pub fn with_thread_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::input(format!("{THREADS_ENV}={v:?} is not a thread count")))
        })
        .transpose()?
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::input(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let loaded = load_source(cfg)?;
    let ds = working_labels(&loaded.dataset, cfg)?;
    let networks = build_class_networks(&ds);

    let kinds: Vec<PhaseKind> = match (&cfg.phases, &loaded.phases) {
        (Some(k), _) => k.clone(),
        (None, Some(ids)) => ids
            .iter()
            .map(|&id| PhaseKind::from_id(id))
            .collect::<Result<_>>()?,
        (None, None) => PhaseKind::ALL.to_vec(),
    };
    if !kinds.contains(&PhaseKind::Baseline) {
        return Err(Error::input("phase list must include phase 1 (baseline)"));
    }
    let targets = cfg
        .targets
        .clone()
        .or(loaded.targets)
        .unwrap_or_else(|| (0..ds.n_classes()).collect());
    if let Some(t) = targets.iter().find(|&&t| t >= ds.n_classes()) {
        return Err(Error::input(format!(
            "target class {t} not present ({} classes)",
            ds.n_classes()
        )));
    }

    let classes = networks
        .par_iter()
        .map(|net| {
            let c = net.class_id();
            let targeted = targets.contains(&c);
            let phase_seed = cfg.seed.derive(&[stream::PHASE_POINTS, c as u64]);
            let (network, phases) = match (targeted, cfg.insertion) {
                (false, _) => (
                    net.clone(),
                    kinds
                        .iter()
                        .map(|&k| PhaseSpec::new(k, Vec::new()))
                        .collect::<Result<_>>()?,
                ),
                (true, InsertionSource::Fitted) => (
                    net.clone(),
                    generate_phases(&ds, c, &kinds, &cfg.geometry, cfg.other_class, phase_seed)?,
                ),
                (true, InsertionSource::Holdout) => {
                    let (kept, phases) =
                        holdout_phases(&ds, c, &kinds, &cfg.geometry, cfg.other_class, phase_seed)?;
                    (ClassNetwork::new(c, kept)?, phases)
                }
            };
            let params = AcoParams {
                seed: cfg.seed.derive(&[stream::CLASS, c as u64]),
                ..cfg.aco.clone()
            };
            Ok(ClassReport {
                class_id: c,
                members: network.len(),
                targeted,
                phases: run_insertion_protocol(
                    &network,
                    &phases,
                    &params,
                    cfg.repetitions,
                    cfg.scale,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let report = ExperimentReport {
        dataset: DatasetDescriptor {
            source: loaded.source,
            labeling: cfg.labels.as_str().to_string(),
            n: ds.len(),
            dim: ds.dim(),
            class_counts: ds.class_counts(),
        },
        params: AcoParams {
            seed: cfg.seed,
            ..cfg.aco.clone()
        },
        repetitions: cfg.repetitions,
        seed: cfg.seed,
        scale: cfg.scale,
        classes,
    };
    report.check()?;
    Ok(report)
}

/// Writes the selected formats into `dir` and reads each file back to
/// confirm it. SVG output is accompanied by a gnuplot data file.
pub fn write_outputs(
    report: &ExperimentReport,
    dir: impl AsRef<Path>,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut formats = formats.to_vec();
    formats.sort();
    formats.dedup();
    for f in formats {
        match f {
            OutputFormat::Json => {
                let path = dir.join("report.json");
                let text = report.to_json()?;
                write_checked(&path, text.as_bytes())?;
                ExperimentReport::read_json(&path)?;
                written.push(path);
            }
            OutputFormat::Csv => {
                let path = dir.join("samples.csv");
                let mut buf = Vec::new();
                report.write_samples_csv(&mut buf)?;
                write_checked(&path, &buf)?;
                written.push(path);
            }
            OutputFormat::Svg => {
                let path = dir.join("boxplots.svg");
                write_checked(&path, render_svg(report).as_bytes())?;
                written.push(path);
                let dat = dir.join("boxplots.dat");
                write_checked(&dat, report.gnuplot_data().as_bytes())?;
                written.push(dat);
            }
        }
    }
    Ok(written)
}

fn write_checked(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let back = fs::read(path).map_err(|e| Error::io(path, e))?;
    if back != bytes {
        return Err(Error::input(format!(
            "{} did not read back intact",
            path.display()
        )));
    }
    Ok(())
}

/// Reads a report and writes its boxplot SVG.
pub fn plot_report(report_json: impl AsRef<Path>, out_svg: impl AsRef<Path>) -> Result<()> {
    let report = ExperimentReport::read_json(report_json)?;
    write_checked(out_svg.as_ref(), render_svg(&report).as_bytes())
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    /// Instances use 4..=n_max points.
    pub n_max: usize,
    pub trials: usize,
    pub seed: RngSeed,
    pub params: AcoParams,
    /// Largest acceptable mean relative gap `(aco - opt) / opt`.
    pub max_mean_gap: f64,
    /// Smallest acceptable share of instances solved exactly.
    pub min_exact_fraction: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 8,
            trials: 20,
            seed: RngSeed(0),
            params: AcoParams::default(),
            max_mean_gap: 0.01,
            min_exact_fraction: 0.95,
        }
    }
}

pub const VERIFY_MIN_NODES: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    pub trial: usize,
    pub aco: f64,
    pub optimum: f64,
    /// `(aco - optimum) / optimum`, zero when both are zero.
    pub gap: f64,
}

impl VerifyRow {
    pub fn exact(&self) -> bool {
        self.aco == self.optimum
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub rows: Vec<VerifyRow>,
    pub below_optimum: usize,
    pub exact_fraction: f64,
    pub mean_gap: f64,
    pub passed: bool,
}

impl VerifyOutcome {
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>3} {:>5} {:>14} {:>14} {:>10}\n",
            "n", "trial", "aco", "optimum", "gap"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>3} {:>5} {:>14.6} {:>14.6} {:>10.2e}\n",
                r.n, r.trial, r.aco, r.optimum, r.gap
            ));
        }
        out.push_str(&format!(
            "exact {:.1}%  mean gap {:.3e}  below optimum {}  => {}\n",
            100.0 * self.exact_fraction,
            self.mean_gap,
            self.below_optimum,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Random points in `[0, 100)^2` for verification instance `(n, trial)`.
pub fn verify_instance(seed: RngSeed, n: usize, trial: usize) -> Vec<Point> {
    let mut rng = seed.derive(&[stream::VERIFY, n as u64, trial as u64]).rng();
    (0..n)
        .map(|_| {
            Point::new(vec![rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0]).expect("finite")
        })
        .collect()
}

/// Compares the colony against exhaustive enumeration on random instances.
pub fn verify(cfg: &VerifyConfig) -> Result<VerifyOutcome> {
    if cfg.n_max > crate::aco::BRUTE_FORCE_MAX_NODES {
        return Err(Error::input(format!(
            "n_max = {} exceeds the brute-force cap of {}",
            cfg.n_max,
            crate::aco::BRUTE_FORCE_MAX_NODES
        )));
    }
    if cfg.n_max < VERIFY_MIN_NODES {
        return Err(Error::input(format!(
            "n_max must be at least {VERIFY_MIN_NODES}"
        )));
    }
    if cfg.trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    cfg.params.validate()?;

    let jobs: Vec<(usize, usize)> = (VERIFY_MIN_NODES..=cfg.n_max)
        .flat_map(|n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let dist = DistanceMatrix::from_points(&verify_instance(cfg.seed, n, trial))?;
            let params = AcoParams {
                seed: cfg
                    .seed
                    .derive(&[stream::VERIFY, n as u64, trial as u64, 1]),
                ..cfg.params.clone()
            };
            let aco = solve_matrix(&dist, &params)?.best.length;
            let optimum = brute_force_matrix(&dist, params.mode)?.length;
            let gap = if optimum > 0.0 {
                (aco - optimum) / optimum
            } else {
                0.0
            };
            Ok(VerifyRow {
                n,
                trial,
                aco,
                optimum,
                gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let below_optimum = rows.iter().filter(|r| r.aco < r.optimum).count();
    let exact_fraction = rows.iter().filter(|r| r.exact()).count() as f64 / rows.len() as f64;
    let mean_gap = rows.iter().map(|r| r.gap).sum::<f64>() / rows.len() as f64;
    let passed = below_optimum == 0
        && mean_gap <= cfg.max_mean_gap
        && exact_fraction >= cfg.min_exact_fraction;
    Ok(VerifyOutcome {
        rows,
        below_optimum,
        exact_fraction,
        mean_gap,
        passed,
    })
}

/// The mode used when none is given; re-exported for the binary's help text.
pub const DEFAULT_MODE: PathMode = PathMode::OpenPath;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_precedence() {
        let file = ConfigOverrides {
            preset: Some("dataset1".into()),
            reps: Some(5),
            alpha: Some(2.0),
            ..Default::default()
        };
        let flags = ConfigOverrides {
            reps: Some(7),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!((merged.reps, merged.alpha), (Some(7), Some(2.0)));
        assert_eq!(merged.preset.as_deref(), Some("dataset1"));

        let csv_flag = ConfigOverrides {
            csv: Some("x.csv".into()),
            ..Default::default()
        };
        let merged = merged.overlay(csv_flag);
        assert!(merged.preset.is_none() && merged.csv.is_some());
    }

    #[test]
    fn config_parsing_and_errors() {
        let o = ConfigOverrides::from_toml("preset = \"dataset2\"\nmode = \"closed_tour\"\nphases = [1, 5]\nformats = [\"json\"]\n").unwrap();
        let cfg = ExperimentConfig::from_overrides(o).unwrap();
        assert_eq!(cfg.aco.mode, PathMode::ClosedTour);
        assert_eq!(
            cfg.phases,
            Some(vec![PhaseKind::Baseline, PhaseKind::FarOrOtherClass])
        );
        assert_eq!(cfg.formats, vec![OutputFormat::Json]);

        assert!(ConfigOverrides::from_toml("bogus = 1").is_err());
        assert!(ExperimentConfig::from_overrides(ConfigOverrides::default()).is_err());
        let empty_formats = ConfigOverrides {
            preset: Some("dataset1".into()),
            formats: Some(vec![]),
            ..Default::default()
        };
        assert!(ExperimentConfig::from_overrides(empty_formats).is_err());
        let two_sources = ConfigOverrides {
            preset: Some("dataset1".into()),
            csv: Some("a.csv".into()),
            ..Default::default()
        };
        assert!(ExperimentConfig::from_overrides(two_sources).is_err());
    }

    #[test]
    fn compacting_labels() {
        assert_eq!(compact_labels(&[2, 0, 2, 5]), vec![1, 0, 1, 2]);
    }

    #[test]
    fn verify_bounds() {
        let too_big = VerifyConfig {
            n_max: 12,
            ..Default::default()
        };
        assert!(verify(&too_big).is_err());
        let small = VerifyConfig {
            n_max: 4,
            trials: 5,
            ..Default::default()
        };
        let out = verify(&small).unwrap();
        assert_eq!(out.rows.len(), 5);
        assert!(out.rows.iter().all(|r| r.gap >= 0.0));
    }
}
