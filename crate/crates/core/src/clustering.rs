//! Lloyd's k-means with k-means++ seeding.
//!
//! Used to derive class labels before per-class networks are built. Empty
//! clusters are repaired by moving the point farthest from its centroid into
//! the empty cluster and placing that cluster's centroid on it, which keeps
//! inertia non-increasing across iterations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{check_uniform_dim, Point};
use crate::error::{Error, Result};
use crate::seed::RngSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: RngSeed,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: RngSeed) -> Self {
        KMeansConfig {
            k,
            max_iters: 300,
            tol: 1e-6,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Point>,
    pub inertia: f64,
    pub iterations_run: usize,
    /// Inertia after every assignment step, ending with the final one.
    pub inertia_history: Vec<f64>,
}

pub fn kmeans(points: &[Point], cfg: &KMeansConfig) -> Result<KMeansResult> {
    let dim = check_uniform_dim(points)?;
    let n = points.len();
    if cfg.k == 0 {
        return Err(Error::input("k must be positive"));
    }
    if cfg.k > n {
        return Err(Error::input(format!("k = {} exceeds {n} points", cfg.k)));
    }
    if cfg.max_iters == 0 {
        return Err(Error::input("max_iters must be at least 1"));
    }
    if cfg.tol.is_nan() || cfg.tol < 0.0 {
        return Err(Error::input("tol must be non-negative"));
    }

    let data: Vec<&[f64]> = points.iter().map(Point::coords).collect();
    let mut centroids = plus_plus_seeds(&data, cfg.k, cfg.seed);
    let mut labels = vec![0; n];
    let mut history = Vec::new();
    let mut iterations_run = 0;

    for _ in 0..cfg.max_iters {
        iterations_run += 1;
        assign(&data, &centroids, &mut labels);
        repair_empty(&data, &mut centroids, &mut labels);
        history.push(inertia(&data, &centroids, &labels));

        let updated = means(&data, &labels, cfg.k, dim);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| sq_dist(a, b).sqrt())
            .fold(0.0, f64::max);
        centroids = updated;
        if shift < cfg.tol {
            break;
        }
    }

    assign(&data, &centroids, &mut labels);
    repair_empty(&data, &mut centroids, &mut labels);
    let final_inertia = inertia(&data, &centroids, &labels);
    history.push(final_inertia);

    Ok(KMeansResult {
        labels,
        centroids: centroids
            .into_iter()
            .map(|c| Point::new(c).expect("centroids of finite points are finite"))
            .collect(),
        inertia: final_inertia,
        iterations_run,
        inertia_history: history,
    })
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus_seeds(data: &[&[f64]], k: usize, seed: RngSeed) -> Vec<Vec<f64>> {
    let n = data.len();
    let mut rng = seed.rng();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![data[first].to_vec()];
    let mut d2: Vec<f64> = data.iter().map(|p| sq_dist(p, data[first])).collect();

    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                acc += w;
                pick = Some(i);
                if target < acc {
                    break;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // Every remaining point coincides with a chosen centroid.
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.gen_range(0..free.len())]
        };
        chosen[next] = true;
        for (i, p) in data.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, data[next]));
        }
        centroids.push(data[next].to_vec());
    }
    centroids
}

/// Nearest centroid per point; ties go to the lowest cluster index.
fn assign(data: &[&[f64]], centroids: &[Vec<f64>], labels: &mut [usize]) {
    for (p, label) in data.iter().zip(labels.iter_mut()) {
        let mut best = (f64::INFINITY, 0);
        for (c, centroid) in centroids.iter().enumerate() {
            let d = sq_dist(p, centroid);
            if d < best.0 {
                best = (d, c);
            }
        }
        *label = best.1;
    }
}

fn repair_empty(data: &[&[f64]], centroids: &mut [Vec<f64>], labels: &mut [usize]) {
    let k = centroids.len();
    loop {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = (0..data.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .map(|i| (sq_dist(data[i], &centroids[labels[i]]), i))
            .fold(None, |best: Option<(f64, usize)>, cand| match best {
                Some(b) if b.0 >= cand.0 => Some(b),
                _ => Some(cand),
            })
            .map(|(_, i)| i)
            .expect("k <= n guarantees a cluster with two or more points");
        labels[donor] = empty;
        centroids[empty] = data[donor].to_vec();
    }
}

fn inertia(data: &[&[f64]], centroids: &[Vec<f64>], labels: &[usize]) -> f64 {
    data.iter()
        .zip(labels)
        .map(|(p, &l)| sq_dist(p, &centroids[l]))
        .sum()
}

fn means(data: &[&[f64]], labels: &[usize], k: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in data.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p.iter()) {
            *s += x;
        }
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        for v in s.iter_mut() {
            *v /= c as f64;
        }
    }
    sums
}

/// Renames cluster ids so that each cluster takes the ground-truth class it
/// overlaps most, greedily by descending overlap. Clusters left without a
/// class keep the lowest unused ids. Only meaningful for reporting.
pub fn align_to_reference(clusters: &[usize], reference: &[usize]) -> Vec<usize> {
    let k = clusters.iter().max().map_or(0, |&m| m + 1);
    let c = reference.iter().max().map_or(0, |&m| m + 1);
    let mut table = vec![vec![0usize; c]; k];
    for (&a, &b) in clusters.iter().zip(reference) {
        table[a][b] += 1;
    }
    let mut cells: Vec<(usize, usize, usize)> = table
        .iter()
        .enumerate()
        .flat_map(|(a, row)| row.iter().enumerate().map(move |(b, &cnt)| (cnt, a, b)))
        .collect();
    cells.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let size = k.max(c);
    let mut mapping: Vec<Option<usize>> = vec![None; k];
    let mut used = vec![false; size];
    for (cnt, a, b) in cells {
        if cnt == 0 {
            break;
        }
        if mapping[a].is_none() && !used[b] {
            mapping[a] = Some(b);
            used[b] = true;
        }
    }
    let mut free = (0..size).filter(|&i| !used[i]);
    let mapping: Vec<usize> = mapping
        .into_iter()
        .map(|m| m.unwrap_or_else(|| free.next().expect("enough ids")))
        .collect();
    clusters.iter().map(|&a| mapping[a]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point;

    fn pts(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| point![x]).collect()
    }

    #[test]
    fn rejects_bad_k() {
        let p = pts(&[0.0, 1.0]);
        assert!(kmeans(&p, &KMeansConfig::new(0, RngSeed(1))).is_err());
        assert!(kmeans(&p, &KMeansConfig::new(3, RngSeed(1))).is_err());
    }

    #[test]
    fn k_equals_n_has_zero_inertia() {
        let p = pts(&[3.0, -1.0, 7.5, 2.0, 2.0]);
        for s in 0..20 {
            let r = kmeans(&p, &KMeansConfig::new(5, RngSeed(s))).unwrap();
            assert_eq!(r.inertia, 0.0);
            let mut l = r.labels.clone();
            l.sort_unstable();
            assert_eq!(l, vec![0, 1, 2, 3, 4]);
        }
    }

    #[test]
    fn one_dimensional_pairs() {
        let p = pts(&[0.0, 1.0, 10.0, 11.0]);
        for s in 0..20 {
            let r = kmeans(&p, &KMeansConfig::new(2, RngSeed(s))).unwrap();
            assert_eq!(r.labels[0], r.labels[1]);
            assert_eq!(r.labels[2], r.labels[3]);
            assert_ne!(r.labels[0], r.labels[2]);
            assert!((r.inertia - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn alignment_follows_majority() {
        assert_eq!(
            align_to_reference(&[1, 1, 0, 0], &[0, 0, 1, 1]),
            vec![0, 0, 1, 1]
        );
        assert_eq!(
            align_to_reference(&[2, 0, 1, 1], &[0, 1, 2, 2]),
            vec![0, 1, 2, 2]
        );
        // three clusters, two classes: leftover cluster gets the spare id
        assert_eq!(align_to_reference(&[0, 1, 2], &[1, 1, 0]), vec![1, 2, 0]);
    }
}
