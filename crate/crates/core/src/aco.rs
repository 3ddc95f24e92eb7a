//! Ant Colony Optimization for the shortest path (or tour) through every node
//! of a [`ClassNetwork`].
//!
//! Each iteration, every ant builds a solution by repeatedly moving from its
//! current node `i` to an unvisited node `j` with probability proportional to
//! `tau[i][j]^alpha * eta[i][j]^beta`, where `eta = 1 / distance`. After all
//! ants of the iteration have finished, the pheromone evaporates by a factor
//! `1 - rho` and the iteration-best solution `S` deposits `rho / f(S)` on each
//! of its edges.
//!
//! Ant `k` of iteration `t` starts at node `k mod n` and samples from its own
//! substream `seed.derive([ANT, t, k])`, so a run is fully determined by its
//! parameters and independent of evaluation order.
//!
//! Tour lengths are always summed in a canonical orientation (see
//! [`tour_length`]), so equivalent tours compare bit-for-bit equal and the
//! brute-force oracle can be compared against the solver without tolerance.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::network::ClassNetwork;
use crate::seed::{stream, RngSeed};

/// Lower bound applied to distances before inverting them, so coincident
/// points get a large but finite desirability.
pub const DISTANCE_FLOOR: f64 = 1e-9;

/// Largest network [`brute_force_optimum`] accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// Hamiltonian path, no return edge.
    #[default]
    OpenPath,
    /// Hamiltonian cycle, the last node connects back to the first.
    ClosedTour,
}

impl FromStr for PathMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open_path" | "open" | "path" => Ok(PathMode::OpenPath),
            "closed_tour" | "closed" | "tour" => Ok(PathMode::ClosedTour),
            other => Err(Error::input(format!(
                "unknown mode {other:?} (expected open_path or closed_tour)"
            ))),
        }
    }
}

impl fmt::Display for PathMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathMode::OpenPath => "open_path",
            PathMode::ClosedTour => "closed_tour",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcoParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    /// `None` uses `min(n, 20)` ants for an `n`-node network.
    pub n_ants: Option<usize>,
    pub n_iters: usize,
    /// `None` uses `1 / (n * L_nn)` with `L_nn` the nearest-neighbour
    /// solution length from node 0.
    pub tau0: Option<f64>,
    pub mode: PathMode,
    pub seed: RngSeed,
}

impl Default for AcoParams {
    fn default() -> Self {
        AcoParams {
            alpha: 1.0,
            beta: 2.0,
            rho: 0.1,
            n_ants: None,
            n_iters: 200,
            tau0: None,
            mode: PathMode::OpenPath,
            seed: RngSeed(0),
        }
    }
}

impl AcoParams {
    pub fn with_seed(mut self, seed: RngSeed) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: PathMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::input(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::input(format!(
                "beta must be >= 0, got {}",
                self.beta
            )));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::input(format!(
                "rho must lie in [0, 1], got {}",
                self.rho
            )));
        }
        if self.n_ants == Some(0) {
            return Err(Error::input("n_ants must be at least 1"));
        }
        if self.n_iters == 0 {
            return Err(Error::input("n_iters must be at least 1"));
        }
        if let Some(t) = self.tau0 {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::input(format!("tau0 must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn ants_for(&self, n: usize) -> usize {
        self.n_ants.unwrap_or_else(|| n.clamp(1, 20))
    }
}

/// A visiting order over all nodes and its total length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TourSolution {
    pub order: Vec<usize>,
    pub length: f64,
    pub mode: PathMode,
}

impl TourSolution {
    pub fn from_order(dist: &DistanceMatrix, order: Vec<usize>, mode: PathMode) -> Result<Self> {
        if !is_permutation(&order, dist.n()) {
            return Err(Error::input(format!(
                "order {order:?} is not a permutation of 0..{}",
                dist.n()
            )));
        }
        let length = tour_length(dist, &order, mode);
        Ok(TourSolution {
            order,
            length,
            mode,
        })
    }

    /// Undirected edges `(min, max)` traversed by the solution, each once.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.order.len();
        let mut edges: Vec<(usize, usize)> = self
            .order
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect();
        if self.mode == PathMode::ClosedTour && n > 2 {
            let (a, b) = (self.order[n - 1], self.order[0]);
            edges.push((a.min(b), a.max(b)));
        }
        edges
    }

    /// Checks the permutation property and that `length` matches a fresh
    /// summation within `1e-9` relative tolerance.
    pub fn check(&self, dist: &DistanceMatrix) -> Result<()> {
        if !is_permutation(&self.order, dist.n()) {
            return Err(Error::input(format!(
                "order {:?} is not a permutation",
                self.order
            )));
        }
        let fresh = raw_length(dist, &self.order, self.mode);
        if (fresh - self.length).abs() > 1e-9 * fresh.abs().max(1.0) {
            return Err(Error::numeric(format!(
                "stored length {} differs from recomputed {fresh}",
                self.length
            )));
        }
        Ok(())
    }
}

pub fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn raw_length(dist: &DistanceMatrix, order: &[usize], mode: PathMode) -> f64 {
    let mut total = 0.0;
    for w in order.windows(2) {
        total += dist.get(w[0], w[1]);
    }
    if mode == PathMode::ClosedTour && order.len() > 1 {
        total += dist.get(order[order.len() - 1], order[0]);
    }
    total
}

/// Canonical orientation of a solution: open paths start at the smaller
/// endpoint; closed tours start at the smallest node and continue toward the
/// smaller of its two neighbours.
pub fn canonical_order(order: &[usize], mode: PathMode) -> Vec<usize> {
    let n = order.len();
    let mut out = order.to_vec();
    if n < 2 {
        return out;
    }
    match mode {
        PathMode::OpenPath => {
            if out[0] > out[n - 1] {
                out.reverse();
            }
        }
        PathMode::ClosedTour => {
            let min_pos = (0..n).min_by_key(|&i| out[i]).expect("non-empty");
            out.rotate_left(min_pos);
            if n > 2 && out[1] > out[n - 1] {
                out[1..].reverse();
            }
        }
    }
    out
}

/// Total length of `order`, summed in canonical orientation.
pub fn tour_length(dist: &DistanceMatrix, order: &[usize], mode: PathMode) -> f64 {
    raw_length(dist, &canonical_order(order, mode), mode)
}

/// Greedy nearest-neighbour solution from `start`; ties go to the lowest index.
pub fn nearest_neighbor(dist: &DistanceMatrix, start: usize, mode: PathMode) -> TourSolution {
    let n = dist.n();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    order.push(cur);
    while order.len() < n {
        let next = (0..n)
            .filter(|&j| !visited[j])
            .fold(None, |best: Option<usize>, j| match best {
                Some(b) if dist.get(cur, b) <= dist.get(cur, j) => Some(b),
                _ => Some(j),
            })
            .expect("unvisited nodes remain");
        visited[next] = true;
        order.push(next);
        cur = next;
    }
    let length = tour_length(dist, &order, mode);
    TourSolution {
        order,
        length,
        mode,
    }
}

pub fn default_tau0(dist: &DistanceMatrix, mode: PathMode) -> f64 {
    let n = dist.n();
    if n < 2 {
        return 1.0;
    }
    let l_nn = nearest_neighbor(dist, 0, mode).length;
    if l_nn > 0.0 {
        1.0 / (n as f64 * l_nn)
    } else {
        1.0
    }
}

/// Dense `n x n` matrix with row access, shared by the heuristic, weight and
/// pheromone tables.
#[derive(Clone, Debug, PartialEq)]
struct Square {
    n: usize,
    values: Vec<f64>,
}

impl Square {
    fn filled(n: usize, v: f64) -> Self {
        Square {
            n,
            values: vec![v; n * n],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

/// Static edge desirability `eta[i][j] = 1 / max(d_ij, DISTANCE_FLOOR)`,
/// zero on the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicMatrix(Square);

impl HeuristicMatrix {
    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }
}

pub fn heuristic_matrix(dist: &DistanceMatrix) -> HeuristicMatrix {
    let n = dist.n();
    let mut m = Square::filled(n, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m.values[i * n + j] = 1.0 / dist.get(i, j).max(DISTANCE_FLOOR);
            }
        }
    }
    HeuristicMatrix(m)
}

/// Symmetric, strictly positive pheromone levels `tau[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneMatrix(Square);

impl PheromoneMatrix {
    pub fn new(n: usize, tau0: f64) -> Result<Self> {
        if !(tau0 > 0.0 && tau0.is_finite()) {
            return Err(Error::input(format!("tau0 must be positive, got {tau0}")));
        }
        Ok(PheromoneMatrix(Square::filled(n, tau0)))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    /// Evaporates every edge by `1 - rho` and deposits `rho / f(S)` on the
    /// edges of `best`. Diagonal entries are not edges and are left alone.
    pub fn update(&mut self, best: &TourSolution, rho: f64) -> Result<()> {
        let n = self.n();
        if best.order.len() != n {
            return Err(Error::input(format!(
                "solution covers {} nodes, pheromone matrix has {n}",
                best.order.len()
            )));
        }
        if n < 2 {
            return Ok(());
        }
        if !(best.length > 0.0 && best.length.is_finite()) {
            return Err(Error::numeric(format!(
                "cannot deposit pheromone for solution length {}",
                best.length
            )));
        }
        let deposit = 1.0 / best.length;
        let mut on_path = vec![false; n * n];
        for (a, b) in best.edges() {
            on_path[a * n + b] = true;
            on_path[b * n + a] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let idx = i * n + j;
                let delta = if on_path[idx] { deposit } else { 0.0 };
                self.0.values[idx] = (1.0 - rho) * self.0.values[idx] + rho * delta;
            }
        }
        Ok(())
    }
}

pub fn update_pheromone(
    pheromone: &PheromoneMatrix,
    best: &TourSolution,
    params: &AcoParams,
) -> Result<PheromoneMatrix> {
    let mut next = pheromone.clone();
    next.update(best, params.rho)?;
    Ok(next)
}

/// State of one ant about to choose its next node. `tau_row` and `eta_row`
/// are full rows indexed by node id.
#[derive(Clone, Copy, Debug)]
pub struct TransitionContext<'a> {
    pub current: usize,
    pub unvisited: &'a [usize],
    pub tau_row: &'a [f64],
    pub eta_row: &'a [f64],
}

/// Probability of moving to each node; zero for nodes not in `unvisited`.
pub fn transition_probabilities(
    ctx: &TransitionContext<'_>,
    params: &AcoParams,
) -> Result<Vec<f64>> {
    if ctx.unvisited.is_empty() {
        return Err(Error::Logic(
            "no unvisited nodes left to choose from".into(),
        ));
    }
    if ctx.unvisited.contains(&ctx.current) {
        return Err(Error::Logic(format!(
            "current node {} is listed as unvisited",
            ctx.current
        )));
    }
    let mut probs = vec![0.0; ctx.tau_row.len()];
    let mut total = 0.0;
    for &j in ctx.unvisited {
        let w = ctx.tau_row[j].powf(params.alpha) * ctx.eta_row[j].powf(params.beta);
        if !w.is_finite() || w < 0.0 {
            return Err(Error::numeric(format!(
                "edge ({}, {j}) has weight {w}",
                ctx.current
            )));
        }
        probs[j] = w;
        total += w;
    }
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::numeric(format!(
            "transition weights from node {} sum to {total}",
            ctx.current
        )));
    }
    for &j in ctx.unvisited {
        probs[j] /= total;
    }
    Ok(probs)
}

/// `tau^alpha * eta^beta` for every edge, frozen for one iteration.
struct WeightTable(Square);

impl WeightTable {
    fn build(pheromone: &PheromoneMatrix, eta_pow: &Square, alpha: f64) -> Self {
        let values = pheromone
            .0
            .values
            .iter()
            .zip(&eta_pow.values)
            .map(|(&tau, &e)| {
                if alpha == 1.0 {
                    tau * e
                } else {
                    tau.powf(alpha) * e
                }
            })
            .collect();
        WeightTable(Square {
            n: pheromone.n(),
            values,
        })
    }
}

fn eta_powers(eta: &HeuristicMatrix, beta: f64) -> Square {
    Square {
        n: eta.n(),
        values: eta.0.values.iter().map(|&e| e.powf(beta)).collect(),
    }
}

fn construct_with_weights<R: Rng + ?Sized>(
    weights: &WeightTable,
    dist: &DistanceMatrix,
    start: usize,
    mode: PathMode,
    rng: &mut R,
) -> Result<TourSolution> {
    let n = dist.n();
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let mut unvisited: Vec<usize> = (0..n).filter(|&j| j != start).collect();

    while !unvisited.is_empty() {
        let cur = *order.last().expect("non-empty");
        let row = weights.0.row(cur);
        let total: f64 = unvisited.iter().map(|&j| row[j]).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::numeric(format!(
                "transition weights from node {cur} sum to {total}"
            )));
        }
        let pos = if unvisited.len() == 1 {
            0
        } else {
            roulette(unvisited.iter().map(|&j| row[j]), rng.gen::<f64>() * total)
        };
        order.push(unvisited.remove(pos));
    }

    let length = tour_length(dist, &order, mode);
    Ok(TourSolution {
        order,
        length,
        mode,
    })
}

/// Index of the bucket containing `target` on the cumulative sum of
/// `weights`. Rounding residue past the last bucket falls to the last
/// positive-weight bucket.
fn roulette(weights: impl Iterator<Item = f64>, target: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return i;
            }
        }
    }
    last_positive
}

/// One ant's walk from `start` under the current pheromone levels.
pub fn construct_solution<R: Rng + ?Sized>(
    dist: &DistanceMatrix,
    pheromone: &PheromoneMatrix,
    params: &AcoParams,
    start: usize,
    rng: &mut R,
) -> Result<TourSolution> {
    let n = dist.n();
    if n == 0 || start >= n || pheromone.n() != n {
        return Err(Error::input(format!(
            "start {start} / pheromone size {} invalid for {n} nodes",
            pheromone.n()
        )));
    }
    let eta_pow = eta_powers(&heuristic_matrix(dist), params.beta);
    let weights = WeightTable::build(pheromone, &eta_pow, params.alpha);
    construct_with_weights(&weights, dist, start, params.mode, rng)
}

/// Best solution found plus the best-so-far length after each iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveTrace {
    pub best: TourSolution,
    pub history: Vec<f64>,
}

pub fn solve(net: &ClassNetwork, params: &AcoParams) -> Result<TourSolution> {
    solve_traced(net, params).map(|t| t.best)
}

pub fn solve_traced(net: &ClassNetwork, params: &AcoParams) -> Result<SolveTrace> {
    solve_matrix(net.dist(), params)
}

/// Runs the colony directly on a distance matrix.
pub fn solve_matrix(dist: &DistanceMatrix, params: &AcoParams) -> Result<SolveTrace> {
    params.validate()?;
    let n = dist.n();
    if n == 0 {
        return Err(Error::input("cannot solve an empty network"));
    }
    if n == 1 {
        return Ok(SolveTrace {
            best: TourSolution {
                order: vec![0],
                length: 0.0,
                mode: params.mode,
            },
            history: vec![0.0; params.n_iters],
        });
    }

    let eta_pow = eta_powers(&heuristic_matrix(dist), params.beta);
    let tau0 = params
        .tau0
        .unwrap_or_else(|| default_tau0(dist, params.mode));
    let mut pheromone = PheromoneMatrix::new(n, tau0)?;
    let ants = params.ants_for(n);

    let mut best: Option<TourSolution> = None;
    let mut history = Vec::with_capacity(params.n_iters);

    for t in 0..params.n_iters {
        let weights = WeightTable::build(&pheromone, &eta_pow, params.alpha);
        let mut iter_best: Option<TourSolution> = None;
        for k in 0..ants {
            let mut rng = params.seed.derive(&[stream::ANT, t as u64, k as u64]).rng();
            let sol = construct_with_weights(&weights, dist, k % n, params.mode, &mut rng)?;
            if iter_best.as_ref().is_none_or(|b| sol.length < b.length) {
                iter_best = Some(sol);
            }
        }
        let iter_best = iter_best.expect("at least one ant");
        if best.as_ref().is_none_or(|b| iter_best.length < b.length) {
            best = Some(iter_best.clone());
        }
        let best_len = best.as_ref().expect("set above").length;
        history.push(best_len);

        if best_len == 0.0 {
            // All points coincide; nothing can improve on zero.
            history.resize(params.n_iters, 0.0);
            break;
        }
        pheromone.update(&iter_best, params.rho)?;
    }

    Ok(SolveTrace {
        best: best.expect("n_iters >= 1"),
        history,
    })
}

/// Exact optimum by enumerating every distinct solution: open paths up to
/// reversal, closed tours up to rotation and reversal.
pub fn brute_force_optimum(net: &ClassNetwork, mode: PathMode) -> Result<TourSolution> {
    brute_force_matrix(net.dist(), mode)
}

pub fn brute_force_matrix(dist: &DistanceMatrix, mode: PathMode) -> Result<TourSolution> {
    let n = dist.n();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::input(format!(
            "brute force is capped at {BRUTE_FORCE_MAX_NODES} nodes, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::input("cannot solve an empty network"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = (raw_length(dist, &order, mode), order.clone());
    // Closed tours keep node 0 fixed in front.
    let free = match mode {
        PathMode::OpenPath => 0,
        PathMode::ClosedTour => 1,
    };
    loop {
        let canonical = match mode {
            PathMode::OpenPath => n < 2 || order[0] < order[n - 1],
            PathMode::ClosedTour => n < 3 || order[1] < order[n - 1],
        };
        if canonical {
            let len = raw_length(dist, &order, mode);
            if len < best.0 {
                best = (len, order.clone());
            }
        }
        if !next_permutation(&mut order[free..]) {
            break;
        }
    }
    Ok(TourSolution {
        order: best.1,
        length: best.0,
        mode,
    })
}

/// Advances `xs` to the next lexicographic permutation; false after the last.
fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let Some(i) = (0..xs.len() - 1).rev().find(|&i| xs[i] < xs[i + 1]) else {
        return false;
    };
    let j = (i + 1..xs.len())
        .rev()
        .find(|&j| xs[j] > xs[i])
        .expect("exists");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}
