//! The path-length feature and the insertion protocol built on it.
//!
//! A class network is summarized by the length of the best path the ant
//! colony finds through it. The protocol measures how that value moves when
//! groups of points are inserted: nothing (baseline), fresh points from the
//! same class, points just outside it, points halfway to another class, and
//! points from the other class. Each phase restarts from the unmodified
//! network and is repeated with independent seeds; the repetitions are
//! summarized as boxplot statistics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aco::{solve, AcoParams};
use crate::datagen::NormalSampler;
use crate::dataset::{LabeledDataset, Point};
use crate::error::{Error, Result};
use crate::network::ClassNetwork;
use crate::seed::{stream, RngSeed};

/// Best path length of one seeded colony run.
pub fn aco_feature(net: &ClassNetwork, params: &AcoParams) -> Result<f64> {
    Ok(solve(net, params)?.length)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureScale {
    /// Raw path length.
    #[default]
    Raw,
    /// Path length divided by the number of path edges, `n - 1`.
    PerEdge,
}

impl FeatureScale {
    pub fn apply(self, length: f64, nodes: usize) -> f64 {
        match self {
            FeatureScale::Raw => length,
            FeatureScale::PerEdge if nodes > 1 => length / (nodes - 1) as f64,
            FeatureScale::PerEdge => 0.0,
        }
    }
}

impl FromStr for FeatureScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "raw" => Ok(FeatureScale::Raw),
            "per-edge" | "per_edge" => Ok(FeatureScale::PerEdge),
            other => Err(Error::input(format!(
                "unknown normalization {other:?} (expected none or per-edge)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Baseline,
    SameClass,
    Near,
    Intermediate,
    FarOrOtherClass,
}

impl PhaseKind {
    pub const ALL: [PhaseKind; 5] = [
        PhaseKind::Baseline,
        PhaseKind::SameClass,
        PhaseKind::Near,
        PhaseKind::Intermediate,
        PhaseKind::FarOrOtherClass,
    ];

    pub fn id(self) -> u8 {
        match self {
            PhaseKind::Baseline => 1,
            PhaseKind::SameClass => 2,
            PhaseKind::Near => 3,
            PhaseKind::Intermediate => 4,
            PhaseKind::FarOrOtherClass => 5,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        PhaseKind::ALL
            .into_iter()
            .find(|k| k.id() == id)
            .ok_or_else(|| Error::input(format!("phase id {id} outside 1..=5")))
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseKind::Baseline => "baseline",
            PhaseKind::SameClass => "same_class",
            PhaseKind::Near => "near",
            PhaseKind::Intermediate => "intermediate",
            PhaseKind::FarOrOtherClass => "far_or_other_class",
        }
    }
}

impl fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Points to insert for one phase. The baseline never inserts anything.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpec {
    kind: PhaseKind,
    points: Vec<Point>,
}

impl PhaseSpec {
    pub fn new(kind: PhaseKind, points: Vec<Point>) -> Result<Self> {
        if kind == PhaseKind::Baseline && !points.is_empty() {
            return Err(Error::input("the baseline phase cannot insert points"));
        }
        Ok(PhaseSpec { kind, points })
    }

    pub fn baseline() -> Self {
        PhaseSpec {
            kind: PhaseKind::Baseline,
            points: Vec::new(),
        }
    }

    pub fn kind(&self) -> PhaseKind {
        self.kind
    }

    pub fn phase_id(&self) -> u8 {
        self.kind.id()
    }

    pub fn points_to_insert(&self) -> &[Point] {
        &self.points
    }
}

/// Median, inclusive linearly-interpolated quartiles and Tukey whiskers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxplotStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    /// Most extreme samples within 1.5 IQR of the quartiles, `(low, high)`.
    pub whiskers: (f64, f64),
    pub outliers: Vec<f64>,
}

impl BoxplotStats {
    pub fn whisker_low(&self) -> f64 {
        self.whiskers.0
    }

    pub fn whisker_high(&self) -> f64 {
        self.whiskers.1
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn boxplot_stats(samples: &[f64]) -> Result<BoxplotStats> {
    if samples.is_empty() {
        return Err(Error::input("boxplot of an empty sample"));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("boxplot samples must be finite"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = || {
        sorted
            .iter()
            .copied()
            .filter(|&x| x >= lo_fence && x <= hi_fence)
    };
    let whisker_low = inside().next().unwrap_or(q1).min(q1);
    let whisker_high = inside().next_back().unwrap_or(q3).max(q3);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|&x| x < lo_fence || x > hi_fence)
        .collect();
    Ok(BoxplotStats {
        median,
        q1,
        q3,
        iqr,
        whiskers: (whisker_low, whisker_high),
        outliers,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub phase_id: u8,
    pub phase: PhaseKind,
    /// Number of points inserted before measuring.
    pub inserted: usize,
    pub samples: Vec<f64>,
    /// Seed of the colony run behind each sample.
    pub seeds: Vec<RngSeed>,
    #[serde(flatten)]
    pub stats: BoxplotStats,
}

/// Runs every phase `repetitions` times on a copy of `net` extended with the
/// phase's points. Sample `r` of phase `p` uses seed
/// `params.seed.derive([RUN, p, r])`.
pub fn run_insertion_protocol(
    net: &ClassNetwork,
    phases: &[PhaseSpec],
    params: &AcoParams,
    repetitions: usize,
    scale: FeatureScale,
) -> Result<Vec<PhaseReport>> {
    if repetitions == 0 {
        return Err(Error::input("repetitions must be at least 1"));
    }
    if !phases.iter().any(|p| p.kind == PhaseKind::Baseline) {
        return Err(Error::input("the phase list must include the baseline"));
    }
    params.validate()?;

    let networks = phases
        .iter()
        .map(|p| net.insert_points(&p.points))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = (0..phases.len())
        .flat_map(|p| (0..repetitions).map(move |r| (p, r)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(p, r)| {
            let seed = run_seed(params.seed, phases[p].phase_id(), r);
            let run = AcoParams {
                seed,
                ..params.clone()
            };
            let length = aco_feature(&networks[p], &run)?;
            Ok((seed, scale.apply(length, networks[p].len())))
        })
        .collect::<Result<Vec<_>>>()?;

    phases
        .iter()
        .zip(samples.chunks(repetitions))
        .map(|(phase, chunk)| {
            let values: Vec<f64> = chunk.iter().map(|s| s.1).collect();
            Ok(PhaseReport {
                phase_id: phase.phase_id(),
                phase: phase.kind,
                inserted: phase.points.len(),
                stats: boxplot_stats(&values)?,
                samples: values,
                seeds: chunk.iter().map(|s| s.0).collect(),
            })
        })
        .collect()
}

pub fn run_seed(base: RngSeed, phase_id: u8, repetition: usize) -> RngSeed {
    base.derive(&[stream::RUN, phase_id as u64, repetition as u64])
}

/// Blends a low-level score `c` and a high-level score `h` as
/// `(1 - lambda) * c + lambda * h`.
pub fn combine_scores(c: f64, h: f64, lambda: f64) -> Result<f64> {
    for (name, v) in [("C", c), ("H", h), ("lambda", lambda)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::input(format!("{name} = {v} outside [0, 1]")));
        }
    }
    Ok((1.0 - lambda) * c + lambda * h)
}

/// Per-dimension mean and population standard deviation of a point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl GaussianFit {
    pub fn fit(points: &[Point]) -> Result<Self> {
        let dim = crate::dataset::check_uniform_dim(points)?;
        let n = points.len() as f64;
        let mean: Vec<f64> = (0..dim)
            .map(|j| points.iter().map(|p| p.coords()[j]).sum::<f64>() / n)
            .collect();
        let std = (0..dim)
            .map(|j| {
                let var = points
                    .iter()
                    .map(|p| (p.coords()[j] - mean[j]).powi(2))
                    .sum::<f64>()
                    / n;
                var.sqrt()
            })
            .collect();
        Ok(GaussianFit { mean, std })
    }

    fn sample(&self, normal: &mut NormalSampler) -> Result<Point> {
        Point::new(
            self.mean
                .iter()
                .zip(&self.std)
                .map(|(&m, &s)| normal.normal(m, s))
                .collect(),
        )
    }
}

/// Geometry of the generated insertion points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGeometry {
    pub points_per_phase: usize,
    /// Radial range, in units of the class standard deviation, of the
    /// near-phase points.
    pub near_min_sigma: f64,
    pub near_max_sigma: f64,
    /// Spread of the intermediate-phase points around the midpoint between
    /// class centroids, in units of the target class's standard deviation.
    pub intermediate_jitter: f64,
}

impl Default for PhaseGeometry {
    fn default() -> Self {
        PhaseGeometry {
            points_per_phase: 5,
            near_min_sigma: 2.0,
            near_max_sigma: 3.0,
            intermediate_jitter: 1.0,
        }
    }
}

/// Which class supplies the intermediate and far-phase points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OtherClass {
    /// The class whose centroid is closest to the target's.
    #[default]
    Nearest,
    /// The class whose centroid is farthest from the target's.
    Farthest,
    Class(usize),
}

impl FromStr for OtherClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest" => Ok(OtherClass::Nearest),
            "farthest" => Ok(OtherClass::Farthest),
            other => other.parse().map(OtherClass::Class).map_err(|_| {
                Error::input(format!(
                    "other class {other:?} is not nearest, farthest or an index"
                ))
            }),
        }
    }
}

fn resolve_other(fits: &[GaussianFit], target: usize, choice: OtherClass) -> Result<usize> {
    let dist = |c: usize| {
        fits[c]
            .mean
            .iter()
            .zip(&fits[target].mean)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
    };
    let others = (0..fits.len()).filter(|&c| c != target);
    let pick = match choice {
        OtherClass::Class(c) if c != target && c < fits.len() => Some(c),
        OtherClass::Class(c) => {
            return Err(Error::input(format!(
                "class {c} cannot serve as the other class for target {target}"
            )))
        }
        OtherClass::Nearest => others.min_by(|&a, &b| dist(a).total_cmp(&dist(b))),
        OtherClass::Farthest => others.fold(None, |best: Option<usize>, c| match best {
            Some(b) if dist(b) >= dist(c) => Some(b),
            _ => Some(c),
        }),
    };
    pick.ok_or_else(|| Error::input("intermediate and far phases need a second class"))
}

/// Insertion points for `target` in each requested phase, drawn from the
/// Gaussians fitted to the classes of `ds`. Phase `p` samples from substream
/// `seed.derive([PHASE_POINTS, p])`.
pub fn generate_phases(
    ds: &LabeledDataset,
    target: usize,
    kinds: &[PhaseKind],
    geometry: &PhaseGeometry,
    other: OtherClass,
    seed: RngSeed,
) -> Result<Vec<PhaseSpec>> {
    if target >= ds.n_classes() {
        return Err(Error::input(format!(
            "target class {target} not in dataset with {} classes",
            ds.n_classes()
        )));
    }
    if !(0.0 <= geometry.near_min_sigma && geometry.near_min_sigma <= geometry.near_max_sigma) {
        return Err(Error::input(
            "near-phase radii must satisfy 0 <= min <= max",
        ));
    }
    let fits = (0..ds.n_classes())
        .map(|c| GaussianFit::fit(&ds.class_points(c)))
        .collect::<Result<Vec<_>>>()?;
    let own = &fits[target];
    let needs_other = kinds
        .iter()
        .any(|k| matches!(k, PhaseKind::Intermediate | PhaseKind::FarOrOtherClass));
    let other = if needs_other {
        Some(&fits[resolve_other(&fits, target, other)?])
    } else {
        None
    };

    kinds
        .iter()
        .map(|&kind| {
            let mut normal =
                NormalSampler::new(seed.derive(&[stream::PHASE_POINTS, kind.id() as u64]));
            let count = if kind == PhaseKind::Baseline {
                0
            } else {
                geometry.points_per_phase
            };
            let points = (0..count)
                .map(|_| match kind {
                    PhaseKind::Baseline => unreachable!("baseline inserts nothing"),
                    PhaseKind::SameClass => own.sample(&mut normal),
                    PhaseKind::Near => {
                        let dir: Vec<f64> = own.mean.iter().map(|_| normal.standard()).collect();
                        let norm = dir
                            .iter()
                            .map(|x| x * x)
                            .sum::<f64>()
                            .sqrt()
                            .max(f64::MIN_POSITIVE);
                        let r = geometry.near_min_sigma
                            + (geometry.near_max_sigma - geometry.near_min_sigma)
                                * normal.uniform();
                        Point::new(
                            own.mean
                                .iter()
                                .zip(&own.std)
                                .zip(&dir)
                                .map(|((&m, &s), &u)| m + r * s * u / norm)
                                .collect(),
                        )
                    }
                    PhaseKind::Intermediate => {
                        let far = other.expect("resolved above");
                        Point::new(
                            own.mean
                                .iter()
                                .zip(&far.mean)
                                .zip(&own.std)
                                .map(|((&a, &b), &s)| {
                                    normal.normal(0.5 * (a + b), geometry.intermediate_jitter * s)
                                })
                                .collect(),
                        )
                    }
                    PhaseKind::FarOrOtherClass => {
                        other.expect("resolved above").sample(&mut normal)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            PhaseSpec::new(kind, points)
        })
        .collect()
}

/// Where same-class and far-phase insertion points come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsertionSource {
    /// Draws from Gaussians fitted to each class.
    #[default]
    Fitted,
    /// Real instances: target members held out of the network, and members
    /// of the other class.
    Holdout,
}

impl FromStr for InsertionSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fitted" => Ok(InsertionSource::Fitted),
            "holdout" => Ok(InsertionSource::Holdout),
            other => Err(Error::input(format!(
                "unknown insertion source {other:?} (expected fitted or holdout)"
            ))),
        }
    }
}

/// Phases for `target` built from real instances. `points_per_phase` target
/// members are removed from the returned member list and become the
/// same-class phase; as many members of the other class form the far phase.
/// Near and intermediate phases are still generated from the fitted
/// Gaussians of the full dataset.
pub fn holdout_phases(
    ds: &LabeledDataset,
    target: usize,
    kinds: &[PhaseKind],
    geometry: &PhaseGeometry,
    other: OtherClass,
    seed: RngSeed,
) -> Result<(Vec<Point>, Vec<PhaseSpec>)> {
    let mut phases = generate_phases(ds, target, kinds, geometry, other, seed)?;
    let k = geometry.points_per_phase;
    let members = ds.class_points(target);
    if k >= members.len() {
        return Err(Error::input(format!(
            "cannot hold out {k} of the {} members of class {target}",
            members.len()
        )));
    }
    let mut rng = seed.derive(&[stream::PHASE_POINTS, 0]).rng();
    let mut held = rand::seq::index::sample(&mut rng, members.len(), k).into_vec();
    held.sort_unstable();
    let same: Vec<Point> = held.iter().map(|&i| members[i].clone()).collect();
    let kept: Vec<Point> = members
        .iter()
        .enumerate()
        .filter(|(i, _)| held.binary_search(i).is_err())
        .map(|(_, p)| p.clone())
        .collect();

    let far = if kinds.contains(&PhaseKind::FarOrOtherClass) {
        let fits = (0..ds.n_classes())
            .map(|c| GaussianFit::fit(&ds.class_points(c)))
            .collect::<Result<Vec<_>>>()?;
        let pool = ds.class_points(resolve_other(&fits, target, other)?);
        if k > pool.len() {
            return Err(Error::input(format!(
                "other class has fewer than {k} members"
            )));
        }
        let picked = rand::seq::index::sample(&mut rng, pool.len(), k);
        picked.iter().map(|i| pool[i].clone()).collect()
    } else {
        Vec::new()
    };

    for phase in &mut phases {
        match phase.kind {
            PhaseKind::SameClass => phase.points = same.clone(),
            PhaseKind::FarOrOtherClass => phase.points = far.clone(),
            _ => {}
        }
    }
    Ok((kept, phases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aco::{brute_force_optimum, PathMode};
    use crate::point;
    use proptest::prelude::*;

    #[test]
    fn holdout_moves_members_into_same_class_phase() {
        let pts: Vec<Point> = (0..12)
            .map(|i| point![i, if i < 6 { 0 } else { 50 }])
            .collect();
        let labels = (0..12).map(|i| usize::from(i >= 6)).collect();
        let ds = LabeledDataset::new(pts, labels).unwrap();
        let geometry = PhaseGeometry {
            points_per_phase: 2,
            ..Default::default()
        };
        let kinds = [
            PhaseKind::Baseline,
            PhaseKind::SameClass,
            PhaseKind::FarOrOtherClass,
        ];
        let (kept, phases) =
            holdout_phases(&ds, 0, &kinds, &geometry, OtherClass::Nearest, RngSeed(4)).unwrap();
        assert_eq!(kept.len(), 4);
        let same = phases[1].points_to_insert();
        assert!(same
            .iter()
            .all(|p| p.coords()[1] == 0.0 && !kept.contains(p)));
        assert!(phases[2]
            .points_to_insert()
            .iter()
            .all(|p| p.coords()[1] == 50.0));
        let too_many = PhaseGeometry {
            points_per_phase: 6,
            ..Default::default()
        };
        assert!(
            holdout_phases(&ds, 0, &kinds, &too_many, OtherClass::Nearest, RngSeed(4)).is_err()
        );
    }

    #[test]
    fn boxplot_constant() {
        let s = boxplot_stats(&[7.0, 7.0, 7.0]).unwrap();
        assert_eq!((s.median, s.iqr, s.whiskers), (7.0, 0.0, (7.0, 7.0)));
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn boxplot_inclusive_quartiles() {
        let s = boxplot_stats(&[5.0, 1.0, 4.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (2.0, 3.0, 4.0));
        assert_eq!(s.whiskers, (1.0, 5.0));
        // interpolated case: h = 0.75 and 2.25 over [1, 2, 3, 10]
        let s = boxplot_stats(&[1.0, 2.0, 3.0, 10.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 4.75));
    }

    #[test]
    fn boxplot_flags_outlier() {
        let s = boxplot_stats(&[1.0, 1.0, 1.0, 1.0, 100.0]).unwrap();
        assert_eq!((s.q3, s.iqr), (1.0, 0.0));
        assert_eq!(s.outliers, vec![100.0]);
        assert_eq!(s.whiskers, (1.0, 1.0));
        assert!(boxplot_stats(&[]).is_err());
    }

    #[test]
    fn combine_endpoints_and_value() {
        assert_eq!(combine_scores(0.3, 0.9, 0.0).unwrap(), 0.3);
        assert_eq!(combine_scores(0.3, 0.9, 1.0).unwrap(), 0.9);
        assert!((combine_scores(0.5, 0.8, 0.4).unwrap() - 0.62).abs() < 1e-15);
        assert!(combine_scores(1.2, 0.5, 0.5).is_err());
        assert!(combine_scores(0.2, 0.5, -0.1).is_err());
    }

    #[test]
    fn baseline_cannot_insert() {
        assert!(PhaseSpec::new(PhaseKind::Baseline, vec![point![1, 1]]).is_err());
        assert_eq!(PhaseKind::from_id(4).unwrap(), PhaseKind::Intermediate);
        assert!(PhaseKind::from_id(6).is_err());
    }

    #[test]
    fn singleton_feature_is_zero() {
        let net = ClassNetwork::new(0, vec![point![3, 3]]).unwrap();
        assert_eq!(aco_feature(&net, &AcoParams::default()).unwrap(), 0.0);
    }

    #[test]
    fn square_feature_is_perimeter() {
        let net = ClassNetwork::new(
            0,
            vec![point![0, 0], point![1, 0], point![1, 1], point![0, 1]],
        )
        .unwrap();
        let params = AcoParams::default().with_mode(PathMode::ClosedTour);
        assert_eq!(aco_feature(&net, &params).unwrap(), 4.0);
    }

    #[test]
    fn single_repetition_baseline() {
        let net = ClassNetwork::new(0, vec![point![0, 0], point![1, 0], point![3, 1]]).unwrap();
        let reports = run_insertion_protocol(
            &net,
            &[PhaseSpec::baseline()],
            &AcoParams::default(),
            1,
            FeatureScale::Raw,
        )
        .unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!((reports[0].samples.len(), reports[0].stats.iqr), (1, 0.0));
    }

    #[test]
    fn protocol_requires_baseline_and_reps() {
        let net = ClassNetwork::new(0, vec![point![0, 0], point![1, 0]]).unwrap();
        let same = PhaseSpec::new(PhaseKind::SameClass, vec![point![2, 0]]).unwrap();
        assert!(
            run_insertion_protocol(&net, &[same], &AcoParams::default(), 3, FeatureScale::Raw)
                .is_err()
        );
        assert!(run_insertion_protocol(
            &net,
            &[PhaseSpec::baseline()],
            &AcoParams::default(),
            0,
            FeatureScale::Raw
        )
        .is_err());
    }

    #[test]
    fn per_edge_scale() {
        assert_eq!(FeatureScale::PerEdge.apply(12.0, 5), 3.0);
        assert_eq!(FeatureScale::PerEdge.apply(0.0, 1), 0.0);
        assert_eq!(FeatureScale::Raw.apply(12.0, 5), 12.0);
    }

    fn two_blobs() -> LabeledDataset {
        let mut pts = Vec::new();
        let mut labels = Vec::new();
        for i in 0..10 {
            let t = i as f64 * 0.1;
            pts.push(point![t, -t]);
            labels.push(0);
            pts.push(point![20.0 + t, 20.0 + t * 0.5]);
            labels.push(1);
        }
        LabeledDataset::new(pts, labels).unwrap()
    }

    #[test]
    fn phase_geometry_lands_where_expected() {
        let ds = two_blobs();
        let geometry = PhaseGeometry::default();
        let phases = generate_phases(
            &ds,
            0,
            &PhaseKind::ALL,
            &geometry,
            OtherClass::Nearest,
            RngSeed(5),
        )
        .unwrap();
        assert_eq!(phases.len(), 5);
        assert!(phases[0].points_to_insert().is_empty());
        for p in &phases[1..] {
            assert_eq!(p.points_to_insert().len(), 5);
        }
        let own = GaussianFit::fit(&ds.class_points(0)).unwrap();
        for p in phases[2].points_to_insert() {
            // Mahalanobis radius under the diagonal fit lies in [2, 3]
            let r: f64 = p
                .coords()
                .iter()
                .zip(&own.mean)
                .zip(&own.std)
                .map(|((x, m), s)| ((x - m) / s).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!((2.0 - 1e-9..=3.0 + 1e-9).contains(&r), "{r}");
        }
        for p in phases[4].points_to_insert() {
            assert!(p.coords()[0] > 15.0);
        }
        let mid = phases[3].points_to_insert();
        let mean_x = mid.iter().map(|p| p.coords()[0]).sum::<f64>() / mid.len() as f64;
        assert!((mean_x - 10.2).abs() < 2.0, "{mean_x}");
    }

    #[test]
    fn single_class_cannot_generate_far_phase() {
        let ds = LabeledDataset::new(vec![point![0, 0], point![1, 1]], vec![0, 0]).unwrap();
        let kinds = [PhaseKind::Baseline, PhaseKind::FarOrOtherClass];
        assert!(generate_phases(
            &ds,
            0,
            &kinds,
            &PhaseGeometry::default(),
            OtherClass::Nearest,
            RngSeed(0)
        )
        .is_err());
        let kinds = [PhaseKind::Baseline, PhaseKind::SameClass];
        assert!(generate_phases(
            &ds,
            0,
            &kinds,
            &PhaseGeometry::default(),
            OtherClass::Nearest,
            RngSeed(0)
        )
        .is_ok());
    }

    #[test]
    fn duplicate_insertion_stays_inside_baseline_whiskers() {
        let members = vec![
            point![0, 0],
            point![1.5, 0.2],
            point![2.1, 1.9],
            point![0.3, 2.2],
            point![1.0, 1.0],
        ];
        let net = ClassNetwork::new(0, members.clone()).unwrap();
        let dup = PhaseSpec::new(PhaseKind::SameClass, vec![members[2].clone()]).unwrap();
        let reports = run_insertion_protocol(
            &net,
            &[PhaseSpec::baseline(), dup],
            &AcoParams::default(),
            10,
            FeatureScale::Raw,
        )
        .unwrap();
        let base = &reports[0].stats;
        assert!(
            reports[1].stats.median >= base.whisker_low()
                && reports[1].stats.median <= base.whisker_high()
        );

        let exact = brute_force_optimum(&net, PathMode::OpenPath)
            .unwrap()
            .length;
        let with_dup = brute_force_optimum(
            &net.insert_points(&[members[2].clone()]).unwrap(),
            PathMode::OpenPath,
        )
        .unwrap()
        .length;
        assert_eq!(exact, with_dup);
    }

    proptest! {
        #[test]
        fn combine_monotone_and_affine(c in 0.0f64..=1.0, h in 0.0f64..=1.0, l in 0.0f64..=1.0, d in 0.0f64..0.5) {
            let m = combine_scores(c, h, l).unwrap();
            prop_assert!((0.0..=1.0).contains(&m));
            prop_assert!(combine_scores((c + d).min(1.0), h, l).unwrap() >= m - 1e-15);
            prop_assert!(combine_scores(c, (h + d).min(1.0), l).unwrap() >= m - 1e-15);
            let (m0, m1) = (combine_scores(c, h, 0.0).unwrap(), combine_scores(c, h, 1.0).unwrap());
            prop_assert!((m - (m0 + l * (m1 - m0))).abs() <= 1e-15);
        }

        #[test]
        fn boxplot_invariants(xs in prop::collection::vec(-1e3f64..1e3, 1..60)) {
            let s = boxplot_stats(&xs).unwrap();
            prop_assert!(s.q1 <= s.median && s.median <= s.q3);
            prop_assert_eq!(s.iqr, s.q3 - s.q1);
            prop_assert!(s.whisker_low() >= s.q1 - 1.5 * s.iqr && s.whisker_high() <= s.q3 + 1.5 * s.iqr);
            prop_assert!(s.whisker_low() <= s.q1 && s.whisker_high() >= s.q3);
            for o in &s.outliers {
                prop_assert!(*o < s.whisker_low() || *o > s.whisker_high());
            }
        }
    }
}
