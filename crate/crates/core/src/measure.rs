//! Sparse symmetric measures, partitions and dataset identity.
//!
//! A [`SparseSymmetricMeasure`] stores a symmetric `n × n` bivariate function
//! in compressed adjacency-list form. Exact zeros are never stored, so the
//! neighbour list of a point is exactly the set of points with a nonzero
//! value, and [`SparseSymmetricMeasure::nnz`] is the `m` that drives the cost
//! of the clustering engine.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// What the stored values mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureKind {
    Similarity,
    Distance,
    Cohesion,
}

/// A set of `n` points with optional external labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl DataSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySet);
        }
        Ok(Self { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { n: labels.len(), labels: Some(labels) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of point `i`, falling back to its index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Index of the point carrying `label` (or, without labels, the index it spells).
    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(l) => l.iter().position(|x| x == label),
            None => label.parse::<usize>().ok().filter(|&i| i < self.n),
        }
    }
}

/// Symmetric `n × n` measure in compressed row (adjacency list) storage.
///
/// Invariants: `(i, j, v)` is stored iff `(j, i, v)` is stored, no stored value
/// is zero, and neighbour lists are sorted by index.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMeasure<T> {
    n: usize,
    kind: MeasureKind,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
    diag: Vec<T>,
}

impl<T: Scalar> SparseSymmetricMeasure<T> {
    /// The all-zero measure on `n` points.
    pub fn zeros(n: usize, kind: MeasureKind) -> Self {
        Self {
            n,
            kind,
            offsets: vec![0; n + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            diag: vec![T::zero(); n],
        }
    }

    /// Builds a measure from `(i, j, value)` triples, applying symmetric closure.
    ///
    /// Giving both `(i, j)` and `(j, i)` is allowed when the values agree.
    /// The same directed pair twice is rejected.
    pub fn from_triples(n: usize, kind: MeasureKind, triples: &[(usize, usize, T)]) -> Result<Self> {
        let mut directed: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for &(i, j, v) in triples {
            for index in [i, j] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if directed.insert((i, j), v).is_some() {
                return Err(Error::DuplicateEntry { i, j });
            }
        }
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for (&(i, j), &v) in &directed {
            if let Some(&w) = directed.get(&(j, i)) {
                if w != v {
                    return Err(Error::AsymmetricDuplicate { i: i.min(j), j: i.max(j) });
                }
                if j < i {
                    // mirror already handled when (j, i) was visited
                    continue;
                }
            }
            if v == T::zero() {
                continue;
            }
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        Self::assemble(n, kind, rows)
    }

    /// Builds a measure from per-point neighbour lists that must already be
    /// symmetric. Zero values are dropped.
    pub fn from_symmetric_rows(n: usize, kind: MeasureKind, mut rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::ArityMismatch { expected: n, got: rows.len() });
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row.retain(|&(_, v)| v != T::zero());
            row.sort_by_key(|&(j, _)| j);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::DuplicateEntry { i, j: w[0].0 });
                }
            }
            if let Some(&(j, _)) = row.last() {
                if j >= n {
                    return Err(Error::IndexOutOfRange { index: j, n });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for &(j, v) in row {
                match rows[j].binary_search_by_key(&i, |&(c, _)| c) {
                    Ok(pos) if rows[j][pos].1 == v => {}
                    _ => return Err(Error::AsymmetricDuplicate { i: i.min(j), j: i.max(j) }),
                }
            }
        }
        Self::assemble(n, kind, rows)
    }

    /// Builds a measure from a dense square matrix that must be exactly symmetric.
    pub fn from_dense(kind: MeasureKind, dense: &[Vec<T>]) -> Result<Self> {
        let n = dense.len();
        if dense.iter().any(|r| r.len() != n) {
            return Err(Error::NonSquareInput);
        }
        for i in 0..n {
            for j in 0..i {
                if dense[i][j] != dense[j][i] {
                    return Err(Error::AsymmetricDuplicate { i: j, j: i });
                }
            }
        }
        Self::from_upper(n, kind, |i, j| dense[i][j]).with_kind(kind)
    }

    /// Averages a possibly asymmetric square matrix with its transpose.
    pub fn symmetrize(kind: MeasureKind, raw: &[Vec<T>]) -> Result<Self> {
        let n = raw.len();
        if raw.iter().any(|r| r.len() != n) {
            return Err(Error::NonSquareInput);
        }
        let half = T::lit(0.5);
        Self::from_upper(n, kind, |i, j| (raw[i][j] + raw[j][i]) * half).with_kind(kind)
    }

    /// Evaluates `f` on the upper triangle (diagonal included) and mirrors it,
    /// so the result is exactly symmetric.
    pub(crate) fn from_upper(n: usize, kind: MeasureKind, f: impl Fn(usize, usize) -> T) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if v == T::zero() {
                    continue;
                }
                rows[i].push((j, v));
                if i != j {
                    rows[j].push((i, v));
                }
            }
        }
        let mut g = Self::assemble(n, MeasureKind::Similarity, rows).expect("upper-triangle construction is well formed");
        // callers that take untrusted values re-validate through `with_kind`
        g.kind = kind;
        g
    }

    fn assemble(n: usize, kind: MeasureKind, mut rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let nnz = rows.iter().map(Vec::len).sum();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        let mut diag = vec![T::zero(); n];
        offsets.push(0);
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            for &(j, v) in row.iter() {
                if j == i {
                    diag[i] = v;
                }
                cols.push(j);
                vals.push(v);
            }
            offsets.push(cols.len());
        }
        let g = Self { n, kind, offsets, cols, vals, diag };
        if kind == MeasureKind::Distance {
            g.require_distance()?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// Reinterprets the stored values under another kind.
    pub fn with_kind(mut self, kind: MeasureKind) -> Result<Self> {
        self.kind = kind;
        if kind == MeasureKind::Distance {
            self.require_distance()?;
        }
        Ok(self)
    }

    /// Total number of stored (nonzero) entries, diagonal entries counted once.
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Neighbour indices of point `i` (points with a nonzero value), sorted.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.cols[self.offsets[i]..self.offsets[i + 1]]
    }

    /// `(neighbour, value)` pairs of point `i`.
    pub fn row(&self, i: usize) -> impl ExactSizeIterator<Item = (usize, T)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    /// Iterates all stored entries `(i, j, v)`, both orientations.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.offsets[i]..self.offsets[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(pos) => self.vals[r.start + pos],
            Err(_) => T::zero(),
        }
    }

    /// Diagonal values `γ(x, x)`.
    pub fn diagonal(&self) -> &[T] {
        &self.diag
    }

    /// `γ(x, Ω)` for every point.
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }

    /// Largest absolute stored value (0 for an empty measure).
    pub fn max_abs(&self) -> T {
        self.vals.iter().fold(T::zero(), |a, v| a.max(v.abs()))
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.n]; self.n];
        for (i, j, v) in self.entries() {
            out[i][j] = v;
        }
        out
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n {
            Err(Error::IndexOutOfRange { index, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_set(&self, set: &[usize]) -> Result<()> {
        set.iter().try_for_each(|&i| self.check_index(i))
    }

    /// Checks nonnegative entries and a zero diagonal; symmetry holds by storage.
    pub fn require_distance(&self) -> Result<()> {
        if let Some(i) = self.diag.iter().position(|&v| v != T::zero()) {
            return Err(Error::NotADistance(format!("nonzero self-distance at point {i}")));
        }
        if let Some((i, j, v)) = self.entries().find(|&(_, _, v)| v < T::zero() || v.is_nan()) {
            return Err(Error::NotADistance(format!("value {v} at ({i}, {j})")));
        }
        Ok(())
    }

    fn membership(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &i in set {
            mask[i] = true;
        }
        mask
    }

    /// `γ(x, S) = Σ_{y∈S} γ(x, y)`.
    pub fn point_to_set(&self, x: usize, set: &[usize]) -> Result<T> {
        self.check_index(x)?;
        self.check_set(set)?;
        let mask = self.membership(set);
        Ok(self.row(x).filter(|&(j, _)| mask[j]).map(|(_, v)| v).sum())
    }

    /// `γ(S₁, S₂) = Σ_{x∈S₁} Σ_{y∈S₂} γ(x, y)` by direct summation.
    pub fn measure_of_sets(&self, s1: &[usize], s2: &[usize]) -> Result<T> {
        self.check_set(s1)?;
        self.check_set(s2)?;
        let mask = self.membership(s2);
        Ok(s1
            .iter()
            .map(|&x| self.row(x).filter(|&(j, _)| mask[j]).map(|(_, v)| v).sum::<T>())
            .sum())
    }

    /// `γ(Ω, Ω)`.
    pub fn total(&self) -> T {
        self.vals.iter().copied().sum()
    }
}

/// Assignment of `n` points into `K` nonempty disjoint sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assign: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    /// Validates an assignment into `k` sets; every set must be nonempty.
    pub fn new(assign: Vec<usize>, k: usize) -> Result<Self> {
        let mut sizes = vec![0usize; k];
        for &a in &assign {
            if a >= k {
                return Err(Error::IndexOutOfRange { index: a, n: k });
            }
            sizes[a] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptySetInPartition(empty));
        }
        Ok(Self { assign, sizes })
    }

    /// Builds a partition from arbitrary labels, numbering sets in
    /// first-occurrence order.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(labels: &[L]) -> Result<Self> {
        let mut ids = std::collections::HashMap::new();
        let assign: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l.clone()).or_insert(next)
            })
            .collect();
        Self::new(assign, ids.len())
    }

    /// Point `i` goes to set `π(i) mod k` for a uniformly random permutation `π`.
    pub fn random_balanced<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::KOutOfRange { k, n });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        Self::new(perm.into_iter().map(|p| p % k).collect(), k)
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn set_of(&self, i: usize) -> usize {
        self.assign[i]
    }

    pub fn members(&self, k: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.assign[i] == k).collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (i, &a) in self.assign.iter().enumerate() {
            out[a].push(i);
        }
        out
    }

    /// Relabels sets so ids appear in first-occurrence order of points.
    pub fn canonical(&self) -> Self {
        Self::from_labels(&self.assign).expect("relabelling keeps sets nonempty")
    }

    pub(crate) fn move_point(&mut self, x: usize, to: usize) {
        let from = self.assign[x];
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.assign[x] = to;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri3() -> SparseSymmetricMeasure<f64> {
        SparseSymmetricMeasure::from_triples(
            3,
            MeasureKind::Distance,
            &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 6.0)],
        )
        .unwrap()
    }

    #[test]
    fn tri3_from_triples() {
        let d = tri3();
        assert_eq!(d.nnz(), 6);
        assert_eq!(d.get(1, 2), 6.0);
        assert_eq!(d.get(2, 1), 6.0);
        assert_eq!(d.get(0, 0), 0.0);
        assert_eq!(d.neighbors(0), &[1, 2]);
    }

    #[test]
    fn empty_triples_give_zero_measure() {
        let g = SparseSymmetricMeasure::<f64>::from_triples(2, MeasureKind::Similarity, &[]).unwrap();
        assert_eq!(g.nnz(), 0);
        assert_eq!(g.get(0, 1), 0.0);
    }

    #[test]
    fn conflicting_pair_rejected() {
        let err = SparseSymmetricMeasure::from_triples(2, MeasureKind::Similarity, &[(0, 1, 2.0), (1, 0, 3.0)]);
        assert!(matches!(err, Err(Error::AsymmetricDuplicate { i: 0, j: 1 })));
    }

    #[test]
    fn agreeing_mirror_accepted_and_duplicates_rejected() {
        let g = SparseSymmetricMeasure::from_triples(2, MeasureKind::Similarity, &[(0, 1, 2.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.nnz(), 2);
        let err = SparseSymmetricMeasure::from_triples(2, MeasureKind::Similarity, &[(0, 1, 2.0), (0, 1, 2.0)]);
        assert!(matches!(err, Err(Error::DuplicateEntry { .. })));
        let err = SparseSymmetricMeasure::from_triples(2, MeasureKind::Similarity, &[(0, 5, 2.0)]);
        assert!(matches!(err, Err(Error::IndexOutOfRange { index: 5, n: 2 })));
    }

    #[test]
    fn self_similarity_stored_once() {
        let g = SparseSymmetricMeasure::from_triples(2, MeasureKind::Similarity, &[(0, 0, 1.5), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.nnz(), 3);
        assert_eq!(g.diagonal(), &[1.5, 0.0]);
        assert_eq!(g.neighbors(0), &[0, 1]);
    }

    #[test]
    fn distance_kind_is_validated() {
        let err = SparseSymmetricMeasure::from_triples(2, MeasureKind::Distance, &[(0, 1, -1.0)]);
        assert!(matches!(err, Err(Error::NotADistance(_))));
        let err = SparseSymmetricMeasure::from_triples(2, MeasureKind::Distance, &[(1, 1, 1.0)]);
        assert!(matches!(err, Err(Error::NotADistance(_))));
    }

    #[test]
    fn symmetrize_averages() {
        let g = SparseSymmetricMeasure::symmetrize(MeasureKind::Similarity, &[vec![0.0, 2.0], vec![4.0, 0.0]]).unwrap();
        assert_eq!(g.get(0, 1), 3.0);
        assert_eq!(g.get(1, 0), 3.0);

        let raw = vec![vec![0.0, 1.0, 0.0], vec![3.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]];
        let g = SparseSymmetricMeasure::symmetrize(MeasureKind::Similarity, &raw).unwrap();
        assert_eq!(g.nnz(), 2);
        assert_eq!(g.get(0, 1), 2.0);

        let sym = vec![vec![1.0, 2.0], vec![2.0, 5.0]];
        let g = SparseSymmetricMeasure::symmetrize(MeasureKind::Similarity, &sym).unwrap();
        assert_eq!(g.to_dense(), sym);

        let err = SparseSymmetricMeasure::<f64>::symmetrize(MeasureKind::Similarity, &[vec![0.0, 1.0]]);
        assert!(matches!(err, Err(Error::NonSquareInput)));
    }

    #[test]
    fn set_sums_on_tri3() {
        let d = tri3();
        assert_eq!(d.measure_of_sets(&[1, 2], &[1, 2]).unwrap(), 12.0);
        assert_eq!(d.measure_of_sets(&[0], &[1, 2]).unwrap(), 2.0);
        assert_eq!(d.measure_of_sets(&[], &[0, 1, 2]).unwrap(), 0.0);
        assert!(d.measure_of_sets(&[3], &[0]).is_err());
    }

    #[test]
    fn symmetric_rows_checked() {
        let rows = vec![vec![(1, 1.0)], vec![(0, 2.0)]];
        let err = SparseSymmetricMeasure::from_symmetric_rows(2, MeasureKind::Similarity, rows);
        assert!(matches!(err, Err(Error::AsymmetricDuplicate { .. })));
        let rows = vec![vec![(1, 1.0), (0, 0.0)], vec![(0, 1.0)]];
        let g = SparseSymmetricMeasure::from_symmetric_rows(2, MeasureKind::Similarity, rows).unwrap();
        assert_eq!(g.nnz(), 2);
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(Partition::new(vec![0, 0, 2], 3), Err(Error::EmptySetInPartition(1))));
        let p = Partition::new(vec![1, 0, 1], 2).unwrap();
        assert_eq!(p.sizes(), &[1, 2]);
        assert_eq!(p.canonical().assign(), &[0, 1, 0]);
        assert_eq!(p.members(1), vec![0, 2]);
    }

    #[test]
    fn dataset_labels_unique() {
        assert!(DataSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        let ds = DataSet::with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(ds.index_of("b"), Some(1));
        assert_eq!(DataSet::new(3).unwrap().label(2), "2");
        assert!(DataSet::new(0).is_err());
    }
}
