//! Reference Δ-distances.
//!
//! Everything here is computed by direct summation, `O(|S|²)` in the worst
//! case, and carries no state. These functions are the oracle the fast engine
//! is tested against; they are not meant for production-sized inputs.

use crate::error::{Error, Result};
use crate::measure::SparseSymmetricMeasure;
use crate::scalar::Scalar;

fn nonempty(set: &[usize]) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// Δ-distance `γ(x,x) − (2/|S|)γ(x,S) + γ(S,S)/|S|²`.
pub fn delta<T: Scalar>(g: &SparseSymmetricMeasure<T>, x: usize, set: &[usize]) -> Result<T> {
    nonempty(set)?;
    let s = T::count(set.len());
    let to_set = g.point_to_set(x, set)?;
    let within = g.measure_of_sets(set, set)?;
    Ok(g.get(x, x) - T::lit(2.0) / s * to_set + within / (s * s))
}

/// Δ-distance written directly in terms of a semi-metric:
/// `(1/|S|²) Σ_{z₁,z₂∈S} (d(x,z₁) + d(x,z₂) − d(z₁,z₂))`.
pub fn delta_triangular<T: Scalar>(d: &SparseSymmetricMeasure<T>, x: usize, set: &[usize]) -> Result<T> {
    nonempty(set)?;
    d.require_distance()?;
    d.check_index(x)?;
    d.check_set(set)?;
    let mut acc = T::zero();
    for &a in set {
        for &b in set {
            acc += d.get(x, a) + d.get(x, b) - d.get(a, b);
        }
    }
    let s = T::count(set.len());
    Ok(acc / (s * s))
}

/// Rescales a Δ-distance into the adjusted Δ-distance for a set of `size`
/// points, `member` telling whether the point belongs to the set.
///
/// Returns negative infinity for a point alone in its own set.
#[inline]
pub fn adjust<T: Scalar>(delta: T, size: usize, member: bool) -> T {
    let s = T::count(size);
    if !member {
        s / (s + T::one()) * delta
    } else if size > 1 {
        s / (s - T::one()) * delta
    } else {
        T::neg_infinity()
    }
}

/// Adjusted Δ-distance from `x` to `set`.
pub fn adjusted_delta<T: Scalar>(g: &SparseSymmetricMeasure<T>, x: usize, set: &[usize]) -> Result<T> {
    let member = set.contains(&x);
    if member && set.len() == 1 {
        g.check_index(x)?;
        return Ok(T::neg_infinity());
    }
    Ok(adjust(delta(g, x, set)?, set.len(), member))
}

/// Average distance `d̄(S₁,S₂) = d(S₁,S₂) / (|S₁||S₂|)`.
pub fn mean_distance<T: Scalar>(d: &SparseSymmetricMeasure<T>, s1: &[usize], s2: &[usize]) -> Result<T> {
    nonempty(s1)?;
    nonempty(s2)?;
    Ok(d.measure_of_sets(s1, s2)? / (T::count(s1.len()) * T::count(s2.len())))
}

/// Returns `Σ_{x∈S} Δ(x,S)` for a semi-metric, after checking that it equals
/// `|S|·d̄(S,S)` and is nonnegative.
pub fn check_nonnegativity<T: Scalar>(d: &SparseSymmetricMeasure<T>, set: &[usize]) -> Result<T> {
    nonempty(set)?;
    d.require_distance()?;
    let mut sum = T::zero();
    for &x in set {
        sum += delta_triangular(d, x, set)?;
    }
    let expected = T::count(set.len()) * mean_distance(d, set, set)?;
    let tol = T::tolerance_floor() * T::one().max(expected.abs()) * T::count(set.len());
    if (sum - expected).abs() > tol {
        return Err(Error::CheckFailed(format!("sum of deltas {sum} != |S|·mean distance {expected}")));
    }
    if sum < -tol {
        return Err(Error::CheckFailed(format!("sum of deltas {sum} is negative")));
    }
    Ok(sum)
}
