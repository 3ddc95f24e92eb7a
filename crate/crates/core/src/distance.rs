use crate::dataset::{check_uniform_dim, Point};
use crate::error::{Error, Result};

pub fn euclidean_distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(euclid(a.coords(), b.coords()))
}

#[inline]
fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense symmetric matrix of pairwise Euclidean distances, zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_points(points: &[Point]) -> Result<Self> {
        check_uniform_dim(points)?;
        let n = points.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclid(points[i].coords(), points[j].coords());
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(DistanceMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Matrix over `existing ⧺ added`. Entries among `existing` are copied,
    /// not recomputed.
    pub(crate) fn extended(&self, existing: &[Point], added: &[Point]) -> DistanceMatrix {
        debug_assert_eq!(existing.len(), self.n);
        let old = self.n;
        let n = old + added.len();
        let mut values = vec![0.0; n * n];
        for i in 0..old {
            values[i * n..i * n + old].copy_from_slice(self.row(i));
        }
        let all = || existing.iter().chain(added);
        for (j, q) in added.iter().enumerate() {
            let j = old + j;
            for (i, p) in all().enumerate().take(j) {
                let d = euclid(p.coords(), q.coords());
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        DistanceMatrix { n, values }
    }
}

/// Convenience wrapper matching the free-function style of the other operations.
pub fn build_distance_matrix(points: &[Point]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_points(points)
}
