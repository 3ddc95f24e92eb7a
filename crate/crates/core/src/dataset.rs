//! Points and labeled datasets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite point in d-dimensional feature space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::input("point must have at least one coordinate"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// Shorthand for building points in tests and examples. Panics on
/// non-finite or empty input.
#[macro_export]
macro_rules! point {
    ($($x:expr),+ $(,)?) => {
        $crate::Point::new(vec![$($x as f64),+]).expect("finite coordinates")
    };
}

/// Points sharing a single label, as produced by the generators before they
/// are assembled into a [`LabeledDataset`].
#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub points: Vec<Point>,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    points: Vec<Point>,
    labels: Vec<usize>,
    dim: usize,
}

impl LabeledDataset {
    /// Validates uniform dimensionality and a contiguous label set `0..c`.
    pub fn new(points: Vec<Point>, labels: Vec<usize>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::input(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        let dim = check_uniform_dim(&points)?;
        let n_classes = labels.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; n_classes];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::input(format!(
                "labels are not contiguous: class {missing} has no members"
            )));
        }
        Ok(LabeledDataset {
            points,
            labels,
            dim,
        })
    }

    pub fn from_fragments(fragments: impl IntoIterator<Item = Fragment>) -> Result<Self> {
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for frag in fragments {
            labels.extend(std::iter::repeat_n(frag.label, frag.points.len()));
            points.extend(frag.points);
        }
        LabeledDataset::new(points, labels)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Members of `class` in dataset order.
    pub fn class_points(&self, class: usize) -> Vec<Point> {
        self.points
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == class)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Same points under a different labeling.
    pub fn relabeled(&self, labels: Vec<usize>) -> Result<Self> {
        LabeledDataset::new(self.points.clone(), labels)
    }
}

pub(crate) fn check_uniform_dim(points: &[Point]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::input("dataset has no points"));
    };
    let dim = first.dim();
    if let Some(i) = points.iter().position(|p| p.dim() != dim) {
        return Err(Error::input(format!(
            "point {i} has dimension {} but point 0 has {dim}",
            points[i].dim()
        )));
    }
    Ok(dim)
}

/// Z-score each feature column with the population standard deviation.
/// Constant columns become all zeros. Labels are untouched.
pub fn zscore_normalize(ds: &LabeledDataset) -> LabeledDataset {
    let n = ds.len() as f64;
    let mut columns: Vec<(f64, f64)> = Vec::with_capacity(ds.dim());
    for j in 0..ds.dim() {
        let mean = ds.points.iter().map(|p| p.0[j]).sum::<f64>() / n;
        let var = ds
            .points
            .iter()
            .map(|p| (p.0[j] - mean).powi(2))
            .sum::<f64>()
            / n;
        let constant = ds.points.iter().all(|p| p.0[j] == ds.points[0].0[j]);
        columns.push((mean, if constant { 0.0 } else { var.sqrt() }));
    }
    let points = ds
        .points
        .iter()
        .map(|p| {
            Point(
                p.0.iter()
                    .zip(&columns)
                    .map(|(&x, &(mean, sd))| if sd > 0.0 { (x - mean) / sd } else { 0.0 })
                    .collect(),
            )
        })
        .collect();
    LabeledDataset {
        points,
        labels: ds.labels.clone(),
        dim: ds.dim,
    }
}
