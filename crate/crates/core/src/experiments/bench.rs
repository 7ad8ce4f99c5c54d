//! Synthetic sparse workloads and per-pass timing.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mix_seed;
use crate::engine::{initial_partition, run_from, EngineState, RunConfig};
use crate::error::Result;
use crate::measure::{MeasureKind, SparseSymmetricMeasure};

/// Random symmetric similarity with about `avg_degree·n` stored entries:
/// `avg_degree·n/2` distinct random pairs, weights uniform in `[-1, 1)`.
pub fn random_sparse_similarity(n: usize, avg_degree: f64, seed: u64) -> Result<SparseSymmetricMeasure<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = ((avg_degree * n as f64) / 2.0).round() as usize;
    let max_pairs = n * n.saturating_sub(1) / 2;
    let target = target.min(max_pairs);
    let mut seen = HashSet::with_capacity(target);
    let mut triples = Vec::with_capacity(target);
    while triples.len() < target {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j || !seen.insert((i.min(j), i.max(j))) {
            continue;
        }
        let mut w: f64 = rng.gen_range(-1.0..1.0);
        if w == 0.0 {
            w = 1.0;
        }
        triples.push((i, j, w));
    }
    SparseSymmetricMeasure::from_triples(n, MeasureKind::Similarity, &triples)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PassTiming {
    /// Best (over repeats) mean wall time of one pass.
    pub per_pass: Duration,
    /// Counted operations per pass, averaged over the timed passes.
    pub ops_per_pass: f64,
    pub passes: usize,
}

/// Times the first `passes` passes from a seeded random-balanced start,
/// keeping the fastest of `repeats` repetitions.
pub fn time_passes(
    g: &SparseSymmetricMeasure<f64>,
    k: usize,
    seed: u64,
    passes: usize,
    repeats: usize,
) -> Result<PassTiming> {
    let cfg = RunConfig::new(k).with_seed(seed);
    let mut best = Duration::MAX;
    let mut ops_per_pass = 0.0;
    let mut done = 0;
    for _ in 0..repeats.max(1) {
        let mut state = EngineState::new(g, initial_partition(g.n(), &cfg, 0)?)?;
        let start = Instant::now();
        done = 0;
        while done < passes {
            let moves = state.run_pass();
            done += 1;
            if moves == 0 {
                break;
            }
        }
        let per = start.elapsed() / done as u32;
        best = best.min(per);
        ops_per_pass = state.ops() as f64 / done as f64;
    }
    Ok(PassTiming { per_pass: best, ops_per_pass, passes: done })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub passes: usize,
    pub wall_time: Duration,
    /// `wall_time / passes / (K·n + m)` in nanoseconds.
    pub normalized_ns: f64,
}

/// Full runs on random sparse similarities of increasing size.
pub fn scaling_table(n_list: &[usize], avg_degree: f64, k: usize, seed: u64) -> Result<Vec<BenchRow>> {
    n_list
        .iter()
        .map(|&n| {
            let g = random_sparse_similarity(n, avg_degree, mix_seed(seed, n as u64))?;
            let cfg = RunConfig::new(k).with_seed(seed);
            let start = Instant::now();
            let out = run_from(&g, initial_partition(n, &cfg, 0)?, cfg.max_passes)?;
            let wall_time = start.elapsed();
            let work = (k * n + g.nnz()) as f64;
            Ok(BenchRow {
                n,
                m: g.nnz(),
                passes: out.passes,
                wall_time,
                normalized_ns: wall_time.as_nanos() as f64 / out.passes as f64 / work,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_matches_target() {
        let g = random_sparse_similarity(1000, 10.0, 1).unwrap();
        assert_eq!(g.nnz(), 10_000);
        assert!(g.diagonal().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tiny_bench_runs() {
        let rows = scaling_table(&[10], 4.0, 2, 3).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].passes >= 1);
        let t = time_passes(&random_sparse_similarity(50, 4.0, 2).unwrap(), 3, 1, 2, 2).unwrap();
        assert!(t.passes >= 1);
    }
}
