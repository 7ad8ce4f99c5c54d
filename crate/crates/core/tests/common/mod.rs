//! Instance generators and brute-force oracles shared by the integration
//! tests. Oracles here only use direct double sums over dense matrices and
//! never touch the engine.
#![allow(dead_code)]

use ksetsplus::{Measure, MeasureKind, Partition};
use rand::Rng;

/// Random semi-metric with integer-free values in `[0, hi]`.
pub fn random_semimetric<R: Rng>(n: usize, hi: f64, rng: &mut R) -> Measure {
    let mut t = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            t.push((i, j, rng.gen_range(0.0..hi)));
        }
    }
    Measure::from_triples(n, MeasureKind::Distance, &t).unwrap()
}

/// Random symmetric similarity; each upper-triangle entry (diagonal
/// included) is present with probability `density`, values in `[-1, 1)`.
pub fn random_similarity<R: Rng>(n: usize, density: f64, rng: &mut R) -> Measure {
    let mut t = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(density) {
                t.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    Measure::from_triples(n, MeasureKind::Similarity, &t).unwrap()
}

/// Random subset of `0..n` (possibly empty).
pub fn random_subset<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Random partition into exactly `k` nonempty sets.
pub fn random_partition<R: Rng>(n: usize, k: usize, rng: &mut R) -> Partition {
    loop {
        let assign: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        if let Ok(p) = Partition::new(assign, k) {
            return p;
        }
    }
}

pub fn dense(g: &Measure) -> Vec<Vec<f64>> {
    g.to_dense()
}

pub fn set_sum(m: &[Vec<f64>], a: &[usize], b: &[usize]) -> f64 {
    a.iter().map(|&x| b.iter().map(|&y| m[x][y]).sum::<f64>()).sum()
}

/// `Σ_k γ(S_k,S_k)/|S_k|` by direct double sums.
pub fn objective_oracle(m: &[Vec<f64>], assign: &[usize], k: usize) -> f64 {
    (0..k)
        .map(|c| {
            let s: Vec<usize> = (0..assign.len()).filter(|&i| assign[i] == c).collect();
            set_sum(m, &s, &s) / s.len() as f64
        })
        .sum()
}

/// Global maximum of the objective over all 2-partitions with nonempty sides.
pub fn best_two_partition(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut best = f64::NEG_INFINITY;
    // point n-1 fixed in set 1 to skip mirrored labelings
    for mask in 0u32..(1 << (n - 1)) {
        let assign: Vec<usize> = (0..n).map(|i| if i + 1 < n && mask >> i & 1 == 1 { 1 } else { 0 }).collect();
        let assign: Vec<usize> = assign
            .iter()
            .enumerate()
            .map(|(i, &a)| if i + 1 == n { 1 } else { a })
            .collect();
        if assign.iter().all(|&a| a == 1) {
            continue;
        }
        best = best.max(objective_oracle(m, &assign, 2));
    }
    best
}

/// True when no single-point move between sets (keeping every set
/// nonempty) raises the objective by more than `tol`.
pub fn is_local_optimum(m: &[Vec<f64>], p: &Partition, tol: f64) -> bool {
    let k = p.k();
    let base = objective_oracle(m, p.assign(), k);
    for x in 0..p.n() {
        let from = p.set_of(x);
        if p.sizes()[from] == 1 {
            continue;
        }
        for to in 0..k {
            if to == from {
                continue;
            }
            let mut a = p.assign().to_vec();
            a[x] = to;
            if objective_oracle(m, &a, k) > base + tol {
                return false;
            }
        }
    }
    true
}

pub fn rel_gap(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}
