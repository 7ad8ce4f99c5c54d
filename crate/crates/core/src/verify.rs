//! Executable cluster definitions.
//!
//! A nonempty set `S` is a cluster under a semi-cohesion measure when
//! `γ(S,S) ≥ 0`. [`is_cluster`] evaluates that together with five equivalent
//! formulations, two of them through the induced semi-metric `d` and its set
//! averages `d̄(S₁,S₂) = d(S₁,S₂)/(|S₁||S₂|)`. [`pairwise_isolation_check`]
//! checks that every two sets of a partition are clusters when viewed in
//! isolation, which converged K-sets+ partitions always satisfy.

use crate::error::{Error, Result};
use crate::measure::{Partition, SparseSymmetricMeasure};
use crate::scalar::Scalar;
use crate::transforms::{dual_distance, SemiCohesionMeasure};

/// Slacks of the six equivalent cluster statements; a statement holds when
/// its slack is at least `-tolerance`.
///
/// 0. `γ(S,S)`
/// 1. `γ(Sᶜ,Sᶜ)`
/// 2. `−γ(S,Sᶜ)`
/// 3. `γ(S,S) − γ(S,Sᶜ)`
/// 4. `2d̄(S,Ω) − d̄(Ω,Ω) − d̄(S,S)`
/// 5. `2d̄(S,Sᶜ) − d̄(S,S) − d̄(Sᶜ,Sᶜ)`
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport<T> {
    /// Six slacks, or only the first when `S = Ω`.
    pub slacks: Vec<T>,
    pub tolerance: T,
    /// Set when `S = Ω` and only statement 0 was evaluated.
    pub partial: bool,
}

impl<T: Scalar> ClusterReport<T> {
    pub fn holds(&self) -> Vec<bool> {
        self.slacks.iter().map(|&s| s >= -self.tolerance).collect()
    }

    /// `γ(S,S) ≥ 0`.
    pub fn is_cluster(&self) -> bool {
        self.slacks[0] >= -self.tolerance
    }

    /// True when every evaluated statement has the same truth value.
    pub fn consistent(&self) -> bool {
        let h = self.holds();
        h.iter().all(|&b| b == h[0])
    }
}

fn scaled_tolerance<T: Scalar>(g: &SparseSymmetricMeasure<T>) -> T {
    T::tolerance_floor() * T::one().max(g.max_abs()) * T::count(g.n())
}

fn mean<T: Scalar>(d: &SparseSymmetricMeasure<T>, a: &[usize], b: &[usize]) -> Result<T> {
    Ok(d.measure_of_sets(a, b)? / (T::count(a.len()) * T::count(b.len())))
}

/// Evaluates all cluster statements for `set` under `g`.
pub fn is_cluster<T: Scalar>(g: &SemiCohesionMeasure<T>, set: &[usize]) -> Result<ClusterReport<T>> {
    let m = g.measure();
    m.check_set(set)?;
    let mut inside = vec![false; m.n()];
    for &i in set {
        inside[i] = true;
    }
    let s: Vec<usize> = (0..m.n()).filter(|&i| inside[i]).collect();
    let sc: Vec<usize> = (0..m.n()).filter(|&i| !inside[i]).collect();
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let tolerance = scaled_tolerance(m);
    let g_ss = m.measure_of_sets(&s, &s)?;
    if sc.is_empty() {
        return Ok(ClusterReport { slacks: vec![g_ss], tolerance, partial: true });
    }
    let g_cc = m.measure_of_sets(&sc, &sc)?;
    let g_sc = m.measure_of_sets(&s, &sc)?;
    let d = dual_distance(g);
    let all: Vec<usize> = (0..m.n()).collect();
    let two = T::lit(2.0);
    let d_ss = mean(&d, &s, &s)?;
    let slacks = vec![
        g_ss,
        g_cc,
        -g_sc,
        g_ss - g_sc,
        two * mean(&d, &s, &all)? - mean(&d, &all, &all)? - d_ss,
        two * mean(&d, &s, &sc)? - d_ss - mean(&d, &sc, &sc)?,
    ];
    Ok(ClusterReport { slacks, tolerance, partial: false })
}

/// Pairwise isolation slacks `2d̄(S_i,S_j) − d̄(S_i,S_i) − d̄(S_j,S_j)` of a
/// partition under the semi-metric induced by `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsolationReport<T> {
    /// `K × K`, zero on the diagonal.
    pub slack: Vec<Vec<T>>,
    /// Minimum over `i ≠ j` (positive infinity when `K < 2`).
    pub min_slack: T,
}

impl<T: Scalar> IsolationReport<T> {
    /// Minimum slack at least `-1e-9` (or a few ulps for `f32`).
    pub fn passes(&self) -> bool {
        self.min_slack >= -T::tolerance_floor()
    }
}

pub fn pairwise_isolation_check<T: Scalar>(
    g: &SemiCohesionMeasure<T>,
    partition: &Partition,
) -> Result<IsolationReport<T>> {
    if partition.n() != g.n() {
        return Err(Error::ArityMismatch { expected: g.n(), got: partition.n() });
    }
    let d = dual_distance(g);
    let k = partition.k();
    let assign = partition.assign();
    let mut sums = vec![vec![T::zero(); k]; k];
    for (x, y, v) in d.entries() {
        sums[assign[x]][assign[y]] += v;
    }
    let sizes = partition.sizes();
    let mean = |a: usize, b: usize| sums[a][b] / (T::count(sizes[a]) * T::count(sizes[b]));
    let mut slack = vec![vec![T::zero(); k]; k];
    let mut min_slack = T::infinity();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let s = T::lit(2.0) * mean(i, j) - mean(i, i) - mean(j, j);
                slack[i][j] = s;
                min_slack = min_slack.min(s);
            }
        }
    }
    Ok(IsolationReport { slack, min_slack })
}
