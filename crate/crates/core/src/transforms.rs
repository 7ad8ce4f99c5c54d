//! Semi-metric / semi-cohesion duality and the σ-lifting of similarities.
//!
//! A semi-cohesion measure is symmetric, has zero row sums, and satisfies
//! `γ(x,x) + γ(y,y) ≥ 2γ(x,y)`. Every semi-metric induces one and vice versa
//! ([`induced_cohesion`], [`dual_distance`]). An arbitrary symmetric
//! similarity becomes one after centring and adding `σ` on the diagonal
//! ([`lift_similarity`]); the adjusted Δ-distances then shift by exactly `σ`,
//! so K-sets+ makes the same moves on either measure.
//!
//! The outputs here are dense. The engine never needs them; they exist for
//! verification and small instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta;
use crate::error::{Error, Result};
use crate::measure::{MeasureKind, SparseSymmetricMeasure};
use crate::scalar::Scalar;

/// A measure validated to be symmetric, with zero row sums and
/// `γ(x,x) + γ(y,y) ≥ 2γ(x,y)` for every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiCohesionMeasure<T> {
    measure: SparseSymmetricMeasure<T>,
    sigma_used: Option<T>,
}

impl<T: Scalar> SemiCohesionMeasure<T> {
    /// Validates `measure` and tags it as a cohesion measure.
    ///
    /// Row sums must vanish within `tol·n·max|γ|`; the pair condition
    /// `γ(x,x) + γ(y,y) − 2γ(x,y) ≥ −tol·n·max|γ|` is checked for every pair.
    pub fn new(measure: SparseSymmetricMeasure<T>) -> Result<Self> {
        check_cohesion(&measure)?;
        Ok(Self { measure: measure.with_kind(MeasureKind::Cohesion)?, sigma_used: None })
    }

    pub fn measure(&self) -> &SparseSymmetricMeasure<T> {
        &self.measure
    }

    pub fn into_measure(self) -> SparseSymmetricMeasure<T> {
        self.measure
    }

    /// The σ applied when this measure came from [`lift_similarity`].
    pub fn sigma_used(&self) -> Option<T> {
        self.sigma_used
    }

    pub fn n(&self) -> usize {
        self.measure.n()
    }
}

fn validation_tolerance<T: Scalar>(g: &SparseSymmetricMeasure<T>) -> T {
    T::tolerance_floor() * T::count(g.n().max(1)) * T::one().max(g.max_abs())
}

fn check_cohesion<T: Scalar>(g: &SparseSymmetricMeasure<T>) -> Result<()> {
    let tol = validation_tolerance(g);
    for (x, s) in g.row_sums().into_iter().enumerate() {
        if s.abs() > tol || s.is_nan() {
            return Err(Error::NotACohesion(format!("row {x} sums to {s}")));
        }
    }
    if g.n() >= 2 {
        let excess = max_pair_excess(g);
        // γ(x,x) + γ(y,y) − 2γ(x,y) = −2·excess at the worst pair
        if excess * T::lit(2.0) > tol {
            return Err(Error::NotACohesion(format!(
                "pair condition violated by {}",
                excess * T::lit(2.0)
            )));
        }
    }
    Ok(())
}

/// Smallest `γ(x,x) + γ(y,y)` over pairs `x ≠ y` with no stored entry.
///
/// Walks points in ascending diagonal order; for each `x` the first
/// non-neighbour in that order is its best partner, and reaching it skips at
/// most `|Nei(x)| + 1` points.
fn min_unstored_diag_sum<T: Scalar>(g: &SparseSymmetricMeasure<T>) -> Option<T> {
    let diag = g.diagonal();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut best: Option<T> = None;
    for x in 0..g.n() {
        let nei = g.neighbors(x);
        let partner = order.iter().copied().find(|&y| y != x && nei.binary_search(&y).is_err());
        if let Some(y) = partner {
            let s = diag[x] + diag[y];
            best = Some(best.map_or(s, |b| b.min(s)));
        }
    }
    best
}

/// `max_{x≠y} [γ(x,y) − (γ(x,x) + γ(y,y))/2]` without an `O(n²)` pair loop.
fn max_pair_excess<T: Scalar>(g: &SparseSymmetricMeasure<T>) -> T {
    let diag = g.diagonal();
    let half = T::lit(0.5);
    let stored = g
        .entries()
        .filter(|&(i, j, _)| i != j)
        .map(|(i, j, v)| v - (diag[i] + diag[j]) * half)
        .fold(T::neg_infinity(), T::max);
    let unstored = min_unstored_diag_sum(g).map_or(T::neg_infinity(), |s| -(s * half));
    stored.max(unstored)
}

/// Induced semi-cohesion measure of a semi-metric:
/// `γ(x,y) = d(x,Ω)/n + d(Ω,y)/n − d(Ω,Ω)/n² − d(x,y)`.
pub fn induced_cohesion<T: Scalar>(d: &SparseSymmetricMeasure<T>) -> Result<SemiCohesionMeasure<T>> {
    d.require_distance()?;
    let n = T::count(d.n());
    let rows = d.row_sums();
    let grand: T = rows.iter().copied().sum();
    let dense = d.to_dense();
    let g = SparseSymmetricMeasure::from_upper(d.n(), MeasureKind::Cohesion, |i, j| {
        rows[i] / n + rows[j] / n - grand / (n * n) - dense[i][j]
    });
    SemiCohesionMeasure::new(g)
}

/// Induced semi-metric of a semi-cohesion measure:
/// `d(x,y) = (γ(x,x) + γ(y,y))/2 − γ(x,y)`.
///
/// Values that fall below zero only by rounding are clamped to zero.
pub fn dual_distance<T: Scalar>(g: &SemiCohesionMeasure<T>) -> SparseSymmetricMeasure<T> {
    let m = g.measure();
    let diag = m.diagonal();
    let dense = m.to_dense();
    let half = T::lit(0.5);
    SparseSymmetricMeasure::from_upper(m.n(), MeasureKind::Distance, |i, j| {
        if i == j {
            T::zero()
        } else {
            ((diag[i] + diag[j]) * half - dense[i][j]).max(T::zero())
        }
    })
}

/// Smallest σ for which [`lift_similarity`] yields a semi-cohesion measure:
/// `max_{x≠y} [γ(x,y) − (γ(x,x) + γ(y,y))/2]`.
///
/// Runs in `O((m + n) log n)`.
pub fn sigma_min<T: Scalar>(g: &SparseSymmetricMeasure<T>) -> Result<T> {
    if g.n() < 2 {
        return Err(Error::TooFewPoints);
    }
    Ok(max_pair_excess(g))
}

/// Centres a similarity and adds `σ` on the diagonal:
/// `γ̃(x,y) = γ(x,y) − γ(x,Ω)/n − γ(y,Ω)/n + γ(Ω,Ω)/n² + σδ(x,y) − σ/n`.
pub fn lift_similarity<T: Scalar>(g: &SparseSymmetricMeasure<T>, sigma: T) -> Result<SemiCohesionMeasure<T>> {
    let minimum = sigma_min(g)?;
    let too_small = || Error::SigmaTooSmall {
        sigma: sigma.to_f64().unwrap_or(f64::NAN),
        minimum: minimum.to_f64().unwrap_or(f64::NAN),
    };
    if sigma < minimum - validation_tolerance(g) {
        return Err(too_small());
    }
    let n = T::count(g.n());
    let rows = g.row_sums();
    let total: T = rows.iter().copied().sum();
    let dense = g.to_dense();
    let lifted = SparseSymmetricMeasure::from_upper(g.n(), MeasureKind::Cohesion, |i, j| {
        let delta = if i == j { sigma } else { T::zero() };
        dense[i][j] - rows[i] / n - rows[j] / n + total / (n * n) + delta - sigma / n
    });
    let mut out = SemiCohesionMeasure::new(lifted).map_err(|_| too_small())?;
    out.sigma_used = Some(sigma);
    Ok(out)
}

/// `Σ_k γ̃(S_k,S_k)/|S_k| − Σ_k γ(S_k,S_k)/|S_k|` for any `K`-partition:
/// `(K − 1)σ − γ(Ω,Ω)/n`.
pub fn lifted_objective_offset<T: Scalar>(g: &SparseSymmetricMeasure<T>, sigma: T, k: usize) -> T {
    T::count(k.saturating_sub(1)) * sigma - g.total() / T::count(g.n())
}

/// Outcome of [`check_shift_lemma`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReport<T> {
    pub samples: usize,
    /// Largest relative deviation of `Δ̃(x,S)` from `Δ(x,S) + σ(1 ∓ 1/|S|)`.
    pub max_unadjusted_deviation: T,
    /// Largest relative deviation of `Δ̂̃(x,S)` from `Δ̂(x,S) + σ`.
    pub max_adjusted_deviation: T,
    /// Probes whose deviation exceeded the tolerance.
    pub failures: usize,
    pub tolerance: T,
}

impl<T: Scalar> ShiftReport<T> {
    pub fn max_deviation(&self) -> T {
        self.max_unadjusted_deviation.max(self.max_adjusted_deviation)
    }

    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

fn relative_gap<T: Scalar>(a: T, b: T) -> T {
    if a == b {
        // covers −∞ = −∞
        return T::zero();
    }
    (a - b).abs() / T::one().max(a.abs()).max(b.abs())
}

/// Probes random `(x, S)` pairs and measures how far the lifted measure's
/// Δ-distances are from the σ-shift identities.
///
/// For `x ∈ S`, `Δ̃ = Δ + σ(1 − 1/|S|)`; for `x ∉ S`, `Δ̃ = Δ + σ(1 + 1/|S|)`;
/// in both cases the adjusted values satisfy `Δ̂̃ = Δ̂ + σ`.
pub fn check_shift_lemma<T: Scalar>(
    g: &SparseSymmetricMeasure<T>,
    sigma: T,
    samples: usize,
    seed: u64,
) -> Result<ShiftReport<T>> {
    let lifted = lift_similarity(g, sigma)?;
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tolerance = T::tolerance_floor();
    let mut report = ShiftReport {
        samples,
        max_unadjusted_deviation: T::zero(),
        max_adjusted_deviation: T::zero(),
        failures: 0,
        tolerance,
    };
    for _ in 0..samples {
        let x = rng.gen_range(0..n);
        let size = rng.gen_range(1..=n);
        let set = sample(&mut rng, n, size).into_vec();
        let s = T::count(size);
        let member = set.contains(&x);
        let base = delta::delta(g, x, &set)?;
        let shifted = delta::delta(lifted.measure(), x, &set)?;
        let factor = if member { T::one() - T::one() / s } else { T::one() + T::one() / s };
        let gap = relative_gap(shifted, base + sigma * factor);
        let adj_gap = relative_gap(
            delta::adjusted_delta(lifted.measure(), x, &set)?,
            delta::adjusted_delta(g, x, &set)? + sigma,
        );
        report.max_unadjusted_deviation = report.max_unadjusted_deviation.max(gap);
        report.max_adjusted_deviation = report.max_adjusted_deviation.max(adj_gap);
        if gap > tolerance || adj_gap > tolerance || gap.is_nan() || adj_gap.is_nan() {
            report.failures += 1;
        }
    }
    Ok(report)
}
