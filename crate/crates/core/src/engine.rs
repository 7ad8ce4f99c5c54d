//! The K-sets+ iteration with incremental `O(Kn + m)` state.
//!
//! [`EngineState`] caches, for every set `S_k`, the normalized within-set
//! measure `ḡ(S_k,S_k) = γ(S_k,S_k)/|S_k|²` and, for every point `x` and set
//! `S_k`, the sum `γ(x,S_k)`. With those, the adjusted Δ-distance of a point to
//! any set is an `O(1)` expression, and moving a point touches only its
//! neighbour list.
//!
//! A pass visits points in ascending index order and moves each to the set
//! with the smallest adjusted Δ-distance, but only when that set is strictly
//! better than the current one. Every such move raises the objective
//! `R = Σ_k γ(S_k,S_k)/|S_k|` by exactly `Δ̂(x,S_from) − Δ̂(x,S_to)`, so passes
//! are monotone and the iteration terminates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::delta::adjust;
use crate::error::{Error, Result};
use crate::measure::{Partition, SparseSymmetricMeasure};
use crate::scalar::Scalar;

/// How the first partition of each restart is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Init {
    /// Point `i` goes to set `π(i) mod K` for a permutation `π` seeded per restart.
    RandomBalanced,
    /// Every restart starts from this partition.
    Given(Partition),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub k: usize,
    pub max_passes: usize,
    pub seed: u64,
    pub restarts: usize,
    pub init: Init,
}

impl RunConfig {
    pub const DEFAULT_MAX_PASSES: usize = 100;

    pub fn new(k: usize) -> Self {
        Self { k, max_passes: Self::DEFAULT_MAX_PASSES, seed: 0, restarts: 1, init: Init::RandomBalanced }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_passes(mut self, max_passes: usize) -> Self {
        self.max_passes = max_passes;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    /// Checks `2 ≤ K ≤ n` and the remaining fields against `n` points.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k < 2 || self.k > n {
            return Err(Error::KOutOfRange { k: self.k, n });
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be at least 1".into()));
        }
        if let Init::Given(p) = &self.init {
            if p.n() != n {
                return Err(Error::ArityMismatch { expected: n, got: p.n() });
            }
            if p.k() != self.k {
                return Err(Error::InvalidConfig(format!(
                    "initial partition has {} sets, K = {}",
                    p.k(),
                    self.k
                )));
            }
        }
        Ok(())
    }
}

/// Result of [`run`] (best restart) or [`run_from`] (single run).
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub partition: Partition,
    /// Objective of `partition`, recomputed from scratch.
    pub objective: T,
    /// Passes executed, including the final pass without moves.
    pub passes: usize,
    /// Objective before the first pass followed by the objective after each pass.
    pub history: Vec<T>,
    /// False when `max_passes` ran out before a pass without moves.
    pub converged: bool,
    /// Index of the restart that produced this result.
    pub restart: usize,
    /// Counted update operations over the whole run.
    pub ops: u64,
}

/// Incremental state of one K-sets+ run over a borrowed measure.
#[derive(Debug, Clone)]
pub struct EngineState<'g, T> {
    g: &'g SparseSymmetricMeasure<T>,
    partition: Partition,
    gbar: Vec<T>,
    // row-major n × K
    point_to_set: Vec<T>,
    objective: T,
    ops: u64,
}

impl<'g, T: Scalar> EngineState<'g, T> {
    /// Computes the cached sums from scratch in `O(Kn + m)`.
    pub fn new(g: &'g SparseSymmetricMeasure<T>, partition: Partition) -> Result<Self> {
        let n = g.n();
        if partition.n() != n {
            return Err(Error::ArityMismatch { expected: n, got: partition.n() });
        }
        let k = partition.k();
        if let Some(empty) = partition.sizes().iter().position(|&s| s == 0) {
            return Err(Error::EmptySetInPartition(empty));
        }
        let assign = partition.assign();
        let mut point_to_set = vec![T::zero(); n * k];
        for i in 0..n {
            let row = &mut point_to_set[i * k..(i + 1) * k];
            for (j, v) in g.row(i) {
                row[assign[j]] += v;
            }
        }
        let mut within = vec![T::zero(); k];
        for i in 0..n {
            within[assign[i]] += point_to_set[i * k + assign[i]];
        }
        let gbar: Vec<T> = within
            .iter()
            .zip(partition.sizes())
            .map(|(&w, &s)| {
                let s = T::count(s);
                w / (s * s)
            })
            .collect();
        let objective = gbar.iter().zip(partition.sizes()).map(|(&gb, &s)| T::count(s) * gb).sum();
        Ok(Self { g, partition, gbar, point_to_set, objective, ops: 0 })
    }

    pub fn measure(&self) -> &'g SparseSymmetricMeasure<T> {
        self.g
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn into_partition(self) -> Partition {
        self.partition
    }

    pub fn k(&self) -> usize {
        self.gbar.len()
    }

    /// `ḡ(S_k,S_k)` for every set.
    pub fn gbar(&self) -> &[T] {
        &self.gbar
    }

    /// Cached `γ(x, S_k)`.
    pub fn point_to_set(&self, x: usize, k: usize) -> T {
        self.point_to_set[x * self.k() + k]
    }

    /// Incrementally maintained `Σ_k γ(S_k,S_k)/|S_k|`.
    pub fn objective(&self) -> T {
        self.objective
    }

    /// Update operations counted so far: `K` per visited point, and
    /// `|Nei(x)| + 1` per move.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Adjusted Δ-distance from `x` to set `k` in `O(1)`.
    #[inline]
    pub fn adjusted_delta(&self, x: usize, k: usize) -> T {
        let size = self.partition.sizes()[k];
        let member = self.partition.set_of(x) == k;
        if member && size == 1 {
            return T::neg_infinity();
        }
        let s = T::count(size);
        let delta = self.g.diagonal()[x] - T::lit(2.0) / s * self.point_to_set(x, k) + self.gbar[k];
        adjust(delta, size, member)
    }

    /// Moves `x` into set `to`, updating the cached sums in `O(|Nei(x)| + 1)`.
    pub fn reassign(&mut self, x: usize, to: usize) -> Result<()> {
        let k = self.k();
        if to >= k {
            return Err(Error::IndexOutOfRange { index: to, n: k });
        }
        let from = self.partition.set_of(x);
        if from == to {
            return Ok(());
        }
        let size_from = self.partition.sizes()[from];
        if size_from == 1 {
            return Err(Error::WouldEmptySet { point: x, set: from });
        }
        let gain = self.adjusted_delta(x, from) - self.adjusted_delta(x, to);

        let gxx = self.g.diagonal()[x];
        let two = T::lit(2.0);
        let a = T::count(size_from);
        let b = T::count(self.partition.sizes()[to]);
        let b1 = b + T::one();
        let a1 = a - T::one();
        self.gbar[to] = (b * b * self.gbar[to] + two * self.point_to_set(x, to) + gxx) / (b1 * b1);
        self.gbar[from] = (a * a * self.gbar[from] - two * self.point_to_set(x, from) + gxx) / (a1 * a1);

        let row = self.g.row(x);
        self.ops += row.len() as u64 + 1;
        for (y, v) in row {
            self.point_to_set[y * k + to] += v;
            self.point_to_set[y * k + from] -= v;
        }
        self.partition.move_point(x, to);
        self.objective += gain;
        Ok(())
    }

    /// One pass over all points in index order. Returns the number of moves.
    pub fn run_pass(&mut self) -> usize {
        self.run_pass_observed(|_, _, _| {})
    }

    /// Like [`run_pass`](Self::run_pass), reporting each move as
    /// `(point, from, to)`.
    pub fn run_pass_observed(&mut self, mut on_move: impl FnMut(usize, usize, usize)) -> usize {
        let k = self.k();
        let mut moves = 0;
        for x in 0..self.g.n() {
            let current = self.partition.set_of(x);
            let mut best = current;
            let mut best_value = self.adjusted_delta(x, current);
            for cand in 0..k {
                if cand == current {
                    continue;
                }
                let v = self.adjusted_delta(x, cand);
                if v < best_value {
                    best = cand;
                    best_value = v;
                }
            }
            self.ops += k as u64;
            if best != current {
                self.reassign(x, best).expect("a set chosen over its own singleton is impossible");
                on_move(x, current, best);
                moves += 1;
            }
        }
        moves
    }

    /// Objective of the current partition computed from scratch.
    pub fn objective_from_scratch(&self) -> T {
        Self::new(self.g, self.partition.clone()).expect("state partition is valid").objective
    }

    /// Largest relative gap between the cached sums and a from-scratch
    /// recomputation, with gaps measured as `|a − b| / max(1, |a|, |b|)`.
    pub fn drift(&self) -> T {
        let fresh = Self::new(self.g, self.partition.clone()).expect("state partition is valid");
        let gap = |a: T, b: T| (a - b).abs() / T::one().max(a.abs()).max(b.abs());
        let cached = self.gbar.iter().zip(&fresh.gbar).chain(self.point_to_set.iter().zip(&fresh.point_to_set));
        cached
            .map(|(&a, &b)| gap(a, b))
            .fold(gap(self.objective, fresh.objective), T::max)
    }
}

/// Runs passes from `initial` until a pass makes no move or `max_passes`
/// passes have run.
pub fn run_from<T: Scalar>(
    g: &SparseSymmetricMeasure<T>,
    initial: Partition,
    max_passes: usize,
) -> Result<RunResult<T>> {
    let mut state = EngineState::new(g, initial)?;
    let mut history = vec![state.objective()];
    let mut best = (state.objective(), state.partition().clone());
    let mut passes = 0;
    let mut converged = false;
    while passes < max_passes {
        let moves = state.run_pass();
        passes += 1;
        history.push(state.objective());
        if moves == 0 {
            converged = true;
            break;
        }
        if state.objective() > best.0 {
            best = (state.objective(), state.partition().clone());
        }
    }
    let ops = state.ops();
    let partition = if converged { state.into_partition() } else { best.1 };
    let objective = EngineState::new(g, partition.clone())?.objective();
    Ok(RunResult { partition, objective, passes, history, converged, restart: 0, ops })
}

/// Initial partition for restart `restart` under `config`.
pub fn initial_partition(n: usize, config: &RunConfig, restart: usize) -> Result<Partition> {
    match &config.init {
        Init::Given(p) => Ok(p.clone()),
        Init::RandomBalanced => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
            Partition::random_balanced(n, config.k, &mut rng)
        }
    }
}

/// K-sets+ with `config.restarts` independent restarts (run in parallel);
/// returns the restart with the largest objective, ties going to the lowest
/// restart index.
pub fn run<T: Scalar>(g: &SparseSymmetricMeasure<T>, config: &RunConfig) -> Result<RunResult<T>> {
    config.validate(g.n())?;
    let results: Vec<RunResult<T>> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut out = run_from(g, initial_partition(g.n(), config, r)?, config.max_passes)?;
            out.restart = r;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut best: Option<RunResult<T>> = None;
    for r in results {
        match &best {
            Some(b) if r.objective <= b.objective => {}
            _ => best = Some(r),
        }
    }
    Ok(best.expect("at least one restart"))
}
