//! Synthetic datasets and CSV input/output.
//!
//! Normal variates come from the Box–Muller transform over the seeded ChaCha8
//! stream (see [`NormalSampler`]), so a seed pins a dataset exactly.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Fragment, LabeledDataset, Point};
use crate::error::{Error, Result};
use crate::seed::{stream, RngSeed};

/// Standard normal variates by Box–Muller, caching the second value of
/// each pair.
pub struct NormalSampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalSampler {
    pub fn new(seed: RngSeed) -> Self {
        NormalSampler {
            rng: seed.rng(),
            spare: None,
        }
    }

    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps ln finite
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        self.spare = Some(r * (TAU * u2).sin());
        r * (TAU * u2).cos()
    }

    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        mean + sd * self.standard()
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianBlobSpec {
    pub mu: Point,
    pub sigma: Vec<f64>,
    pub n: usize,
    pub label: usize,
}

impl GaussianBlobSpec {
    fn validate(&self) -> Result<()> {
        if self.sigma.len() != self.mu.dim() {
            return Err(Error::input(format!(
                "sigma has {} entries but mu has dimension {}",
                self.sigma.len(),
                self.mu.dim()
            )));
        }
        if self.sigma.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::input(
                "sigma entries must be finite and non-negative",
            ));
        }
        if self.n == 0 {
            return Err(Error::input("blob size must be positive"));
        }
        Ok(())
    }
}

pub fn gen_gaussian_blob(spec: &GaussianBlobSpec, seed: RngSeed) -> Result<Fragment> {
    spec.validate()?;
    let mut normal = NormalSampler::new(seed);
    let points = (0..spec.n)
        .map(|_| {
            let coords = spec
                .mu
                .coords()
                .iter()
                .zip(&spec.sigma)
                .map(|(&m, &s)| normal.normal(m, s))
                .collect();
            Point::new(coords)
        })
        .collect::<Result<_>>()?;
    Ok(Fragment {
        points,
        label: spec.label,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeKind {
    /// Uniform along the segment `from`–`to`.
    Line { from: Point, to: Point },
    /// Uniform inside a disk (2-D).
    CircleBlob { center: Point, radius: f64 },
    /// Uniform by arc length along the closed perimeter (2-D).
    Polygon { vertices: Vec<Point> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub noise_sigma: f64,
    pub n: usize,
    pub label: usize,
}

impl ShapeSpec {
    fn validate(&self) -> Result<()> {
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::input("noise_sigma must be finite and non-negative"));
        }
        if self.n == 0 {
            return Err(Error::input("shape size must be positive"));
        }
        match &self.kind {
            ShapeKind::Line { from, to } => {
                if from.dim() != to.dim() {
                    return Err(Error::input("line endpoints differ in dimension"));
                }
                if from == to {
                    return Err(Error::input("line endpoints coincide"));
                }
            }
            ShapeKind::CircleBlob { center, radius } => {
                if center.dim() != 2 {
                    return Err(Error::input("circle center must be 2-D"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::input("circle radius must be positive"));
                }
            }
            ShapeKind::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::input("polygon needs at least 3 vertices"));
                }
                if vertices.iter().any(|v| v.dim() != 2) {
                    return Err(Error::input("polygon vertices must be 2-D"));
                }
                if perimeter_segments(vertices).iter().all(|s| s.2 == 0.0) {
                    return Err(Error::input("polygon has zero perimeter"));
                }
            }
        }
        Ok(())
    }
}

fn perimeter_segments(vertices: &[Point]) -> Vec<(&[f64], &[f64], f64)> {
    (0..vertices.len())
        .map(|i| {
            let a = vertices[i].coords();
            let b = vertices[(i + 1) % vertices.len()].coords();
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            (a, b, len)
        })
        .collect()
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn gen_shape(spec: &ShapeSpec, seed: RngSeed) -> Result<Fragment> {
    spec.validate()?;
    let mut s = NormalSampler::new(seed);
    let mut points = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let mut coords = match &spec.kind {
            ShapeKind::Line { from, to } => lerp(from.coords(), to.coords(), s.uniform()),
            ShapeKind::CircleBlob { center, radius } => {
                let r = radius * s.uniform().sqrt();
                let theta = TAU * s.uniform();
                let c = center.coords();
                vec![c[0] + r * theta.cos(), c[1] + r * theta.sin()]
            }
            ShapeKind::Polygon { vertices } => {
                let segments = perimeter_segments(vertices);
                let total: f64 = segments.iter().map(|seg| seg.2).sum();
                let mut at = s.uniform() * total;
                let mut chosen = *segments
                    .iter()
                    .rev()
                    .find(|seg| seg.2 > 0.0)
                    .expect("validated");
                for seg in &segments {
                    if at < seg.2 {
                        chosen = *seg;
                        break;
                    }
                    at -= seg.2;
                }
                let (a, b, len) = chosen;
                lerp(a, b, (at / len).clamp(0.0, 1.0))
            }
        };
        if spec.noise_sigma > 0.0 {
            for c in coords.iter_mut() {
                *c += s.normal(0.0, spec.noise_sigma);
            }
        }
        points.push(Point::new(coords)?);
    }
    Ok(Fragment {
        points,
        label: spec.label,
    })
}

/// Row count, dimensionality and per-class counts of a loaded file, plus the
/// original label strings in class-id order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvSummary {
    pub rows: usize,
    pub dim: usize,
    pub class_counts: Vec<usize>,
    pub class_names: Vec<String>,
}

/// Reads one instance per row. The label column defaults to the last one;
/// label values are mapped to `0, 1, ...` in order of first appearance.
pub fn load_csv(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<(LabeledDataset, CsvSummary)> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, has_header, label_column)
}

pub fn read_csv<R: Read>(
    reader: R,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<(LabeledDataset, CsvSummary)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut width = None;
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();

    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::input(format!(
                "line {line}: expected {w} columns, found {}",
                record.len()
            )));
        }
        if w < 2 {
            return Err(Error::input(format!(
                "line {line}: need at least one feature column and a label column"
            )));
        }
        let label_col = label_column.unwrap_or(w - 1);
        if label_col >= w {
            return Err(Error::input(format!(
                "label column {label_col} out of range for {w} columns"
            )));
        }
        let mut coords = Vec::with_capacity(w - 1);
        for (col, cell) in record.iter().enumerate() {
            if col == label_col {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| {
                Error::input(format!(
                    "line {line}, column {col}: {cell:?} is not a number"
                ))
            })?;
            coords.push(v);
        }
        let point = Point::new(coords).map_err(|e| Error::input(format!("line {line}: {e}")))?;
        let raw = record.get(label_col).expect("checked width").to_string();
        let id = *ids.entry(raw.clone()).or_insert_with(|| {
            names.push(raw);
            names.len() - 1
        });
        points.push(point);
        labels.push(id);
    }

    let ds = LabeledDataset::new(points, labels)?;
    let summary = CsvSummary {
        rows: ds.len(),
        dim: ds.dim(),
        class_counts: ds.class_counts(),
        class_names: names,
    };
    Ok((ds, summary))
}

/// Features then the integer label, in shortest round-trip float notation.
pub fn write_csv<W: Write>(ds: &LabeledDataset, writer: W, header: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if header {
        let mut cols: Vec<String> = (0..ds.dim()).map(|j| format!("x{j}")).collect();
        cols.push("label".into());
        w.write_record(&cols)?;
    }
    for (p, l) in ds.points().iter().zip(ds.labels()) {
        let mut row: Vec<String> = p.coords().iter().map(|c| format!("{c:?}")).collect();
        row.push(l.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn save_csv(ds: &LabeledDataset, path: impl AsRef<Path>, header: bool) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(ds, std::io::BufWriter::new(file), header)
}

/// Source of one class in a preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSource {
    Gaussian {
        mu: Vec<f64>,
        sigma: Vec<f64>,
        n: Option<usize>,
    },
    Line {
        from: Vec<f64>,
        to: Vec<f64>,
        #[serde(default)]
        noise: f64,
        n: Option<usize>,
    },
    CircleBlob {
        center: Vec<f64>,
        radius: f64,
        #[serde(default)]
        noise: f64,
        n: Option<usize>,
    },
    Polygon {
        vertices: Vec<Vec<f64>>,
        #[serde(default)]
        noise: f64,
        n: Option<usize>,
    },
}

/// A named artificial dataset: one [`ClassSource`] per class, in label order.
///
/// Presets are TOML files:
///
/// ```toml
/// name = "dataset1"
/// description = "two Gaussian blobs"
/// n_per_class = 30
/// targets = [0]
///
/// [[class]]
/// kind = "gaussian"
/// mu = [2.0, 2.0]
/// sigma = [0.7, 0.7]
/// ```
///
/// `targets` lists the classes that receive insertions during an experiment;
/// omitted means every class. `phases` optionally restricts the insertion
/// phases (ids 1 to 5).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default = "default_class_size")]
    pub n_per_class: usize,
    #[serde(default)]
    pub targets: Option<Vec<usize>>,
    /// Phase ids to run; omitted means all five.
    #[serde(default)]
    pub phases: Option<Vec<u8>>,
    #[serde(rename = "class")]
    pub classes: Vec<ClassSource>,
}

fn default_class_size() -> usize {
    30
}

const BUILTIN_PRESETS: &[(&str, &str)] = &[
    ("dataset1", include_str!("../presets/dataset1.toml")),
    ("dataset2", include_str!("../presets/dataset2.toml")),
    ("dataset3", include_str!("../presets/dataset3.toml")),
    ("dataset4", include_str!("../presets/dataset4.toml")),
];

impl Preset {
    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN_PRESETS.iter().map(|(n, _)| *n).collect()
    }

    pub fn builtin(name: &str) -> Result<Preset> {
        let (_, text) = BUILTIN_PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| {
                Error::input(format!(
                    "unknown preset {name:?}; valid presets: {}",
                    Preset::builtin_names().join(", ")
                ))
            })?;
        Preset::parse(text)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Preset> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Preset::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Preset> {
        let preset: Preset = toml::from_str(text)?;
        if preset.classes.is_empty() {
            return Err(Error::input(format!(
                "preset {} defines no classes",
                preset.name
            )));
        }
        Ok(preset)
    }

    /// Class `c` is drawn from substream `seed.derive([DATASET, c])`.
    pub fn generate(&self, seed: RngSeed) -> Result<LabeledDataset> {
        let fragments = self
            .classes
            .iter()
            .enumerate()
            .map(|(label, src)| {
                let s = seed.derive(&[stream::DATASET, label as u64]);
                self.generate_class(label, src, s)
            })
            .collect::<Result<Vec<_>>>()?;
        LabeledDataset::from_fragments(fragments)
    }

    fn generate_class(&self, label: usize, src: &ClassSource, seed: RngSeed) -> Result<Fragment> {
        let size = |n: &Option<usize>| n.unwrap_or(self.n_per_class);
        match src {
            ClassSource::Gaussian { mu, sigma, n } => gen_gaussian_blob(
                &GaussianBlobSpec {
                    mu: Point::new(mu.clone())?,
                    sigma: sigma.clone(),
                    n: size(n),
                    label,
                },
                seed,
            ),
            ClassSource::Line { from, to, noise, n } => gen_shape(
                &ShapeSpec {
                    kind: ShapeKind::Line {
                        from: Point::new(from.clone())?,
                        to: Point::new(to.clone())?,
                    },
                    noise_sigma: *noise,
                    n: size(n),
                    label,
                },
                seed,
            ),
            ClassSource::CircleBlob {
                center,
                radius,
                noise,
                n,
            } => gen_shape(
                &ShapeSpec {
                    kind: ShapeKind::CircleBlob {
                        center: Point::new(center.clone())?,
                        radius: *radius,
                    },
                    noise_sigma: *noise,
                    n: size(n),
                    label,
                },
                seed,
            ),
            ClassSource::Polygon { vertices, noise, n } => gen_shape(
                &ShapeSpec {
                    kind: ShapeKind::Polygon {
                        vertices: vertices
                            .iter()
                            .map(|v| Point::new(v.clone()))
                            .collect::<Result<_>>()?,
                    },
                    noise_sigma: *noise,
                    n: size(n),
                    label,
                },
                seed,
            ),
        }
    }
}
