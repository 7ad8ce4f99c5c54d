//! Signed two-block stochastic block model.
//!
//! Within-block pairs get a positive edge with probability `p_in`, cross-block
//! pairs a negative edge with probability `p_out`; every edge then has its
//! sign flipped independently with the crossover probability `p`. Isolated
//! nodes are dropped and the survivors renumbered densely.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::{MeasureKind, Partition, SparseSymmetricMeasure};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmParams {
    /// Node count before isolated nodes are removed; must be even.
    pub n: usize,
    /// Target average degree `c = (n/2 − 1)p_in + (n/2)p_out`.
    pub c: f64,
    /// `c_in − c_out = n·p_in − n·p_out`.
    pub diff: f64,
    /// Crossover (sign flip) probability.
    pub p: f64,
    pub seed: u64,
}

impl SbmParams {
    /// Solves the two linear constraints for `(p_in, p_out)`:
    /// `p_in = (c + diff/2)/(n − 1)` and `p_out = p_in − diff/n`.
    pub fn probabilities(&self) -> Result<(f64, f64)> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("n = {} must be even and at least 2", self.n)));
        }
        let n = self.n as f64;
        let p_in = (self.c + self.diff / 2.0) / (n - 1.0);
        let p_out = p_in - self.diff / n;
        for (name, v) in [("p_in", p_in), ("p_out", p_out)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidProbability(format!("{name} = {v}")));
            }
        }
        Ok((p_in, p_out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedEdge {
    pub i: usize,
    pub j: usize,
    /// Observed sign after flipping.
    pub sign: i8,
    /// Sign before flipping: +1 within a block, −1 across.
    pub truth: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    pub n: usize,
    /// Edges with `i < j`.
    pub edges: Vec<SignedEdge>,
    /// Ground-truth block (0 or 1) of every node.
    pub block: Vec<usize>,
}

impl SignedGraph {
    /// The ground-truth blocks as a partition.
    pub fn truth_partition(&self) -> Result<Partition> {
        Partition::from_labels(&self.block)
    }

    /// Fraction of edges whose observed sign differs from the truth.
    pub fn flipped_fraction(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        self.edges.iter().filter(|e| e.sign != e.truth).count() as f64 / self.edges.len() as f64
    }
}

pub fn sbm_generate(params: &SbmParams) -> Result<SignedGraph> {
    let (p_in, p_out) = params.probabilities()?;
    sbm_generate_with(params.n, p_in, p_out, params.p, params.seed)
}

/// Generates a signed SBM graph from explicit edge probabilities.
pub fn sbm_generate_with(n: usize, p_in: f64, p_out: f64, p: f64, seed: u64) -> Result<SignedGraph> {
    for (name, v) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidProbability(format!("{name} = {v}")));
        }
    }
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::InvalidProbability(format!("crossover p = {p} outside [0, 0.5]")));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!("n = {n} must be even")));
    }
    let half = n / 2;
    let block_of = |i: usize| usize::from(i >= half);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let same = block_of(i) == block_of(j);
            let prob = if same { p_in } else { p_out };
            if rng.gen_bool(prob) {
                let truth: i8 = if same { 1 } else { -1 };
                let sign = if rng.gen_bool(p) { -truth } else { truth };
                raw.push(SignedEdge { i, j, sign, truth });
            }
        }
    }
    let mut keep = vec![false; n];
    for e in &raw {
        keep[e.i] = true;
        keep[e.j] = true;
    }
    let mut new_index = vec![usize::MAX; n];
    let mut block = Vec::new();
    for i in (0..n).filter(|&i| keep[i]) {
        new_index[i] = block.len();
        block.push(block_of(i));
    }
    let edges = raw
        .into_iter()
        .map(|e| SignedEdge { i: new_index[e.i], j: new_index[e.j], ..e })
        .collect();
    Ok(SignedGraph { n: block.len(), edges, block })
}

/// `G = A + 0.5·A²` for the signed adjacency `A` (post-flip signs), computed
/// by sparse row-by-row multiplication.
pub fn similarity_from_signed(graph: &SignedGraph) -> SparseSymmetricMeasure<f64> {
    let n = graph.n;
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &graph.edges {
        let s = f64::from(e.sign);
        adj[e.i].push((e.j, s));
        adj[e.j].push((e.i, s));
    }
    let mut acc = vec![0.0f64; n];
    let mut touched = vec![false; n];
    let mut list = Vec::new();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut visit = |k: usize, v: f64, acc: &mut [f64]| {
            if !touched[k] {
                touched[k] = true;
                list.push(k);
            }
            acc[k] += v;
        };
        for &(j, a_ij) in &adj[i] {
            visit(j, a_ij, &mut acc);
            for &(k, a_jk) in &adj[j] {
                visit(k, 0.5 * a_ij * a_jk, &mut acc);
            }
        }
        let mut row: Vec<(usize, f64)> = list.iter().map(|&k| (k, acc[k])).filter(|&(_, v)| v != 0.0).collect();
        row.sort_unstable_by_key(|&(k, _)| k);
        for &k in &list {
            acc[k] = 0.0;
            touched[k] = false;
        }
        list.clear();
        rows.push(row);
    }
    SparseSymmetricMeasure::from_symmetric_rows(n, MeasureKind::Similarity, rows)
        .expect("A + 0.5A² of a symmetric A is symmetric")
}

/// Which sign an edge is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccuracyReference {
    /// Ground-truth sign before flipping.
    #[default]
    PreFlip,
    /// Observed sign after flipping.
    PostFlip,
}

/// Fraction of edges whose reference sign agrees with the partition: positive
/// edges inside a set, negative edges across sets.
pub fn edge_accuracy(graph: &SignedGraph, partition: &Partition, reference: AccuracyReference) -> Result<f64> {
    if partition.n() != graph.n {
        return Err(Error::ArityMismatch { expected: graph.n, got: partition.n() });
    }
    if graph.edges.is_empty() {
        return Err(Error::EmptySet);
    }
    let correct = graph
        .edges
        .iter()
        .filter(|e| {
            let sign = match reference {
                AccuracyReference::PreFlip => e.truth,
                AccuracyReference::PostFlip => e.sign,
            };
            (partition.set_of(e.i) == partition.set_of(e.j)) == (sign > 0)
        })
        .count();
    Ok(correct as f64 / graph.edges.len() as f64)
}
