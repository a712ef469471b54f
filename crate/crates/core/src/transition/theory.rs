use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Critical inter-community probability `√(p1·p2)`.
pub fn theoretical_threshold<T: Real>(p1: T, p2: T) -> T {
    (p1 * p2).sqrt()
}

/// Limit of `λ_max(B)/n` below the threshold:
/// `(p1·p2 − p²) / (c·p1 + 2p + p2/c)` with `c = n1/n2`.
///
/// Negative above the threshold; callers that want a prediction curve use
/// [`predicted_lambda_over_n`].
pub fn subcritical_lambda_over_n<T: Real>(p1: T, p2: T, p: T, c: T) -> Result<T> {
    if c.is_nan() || c <= T::zero() {
        return Err(Error::InvalidParameter(format!(
            "size ratio must be positive, got {c}"
        )));
    }
    let denom = c * p1 + T::of(2.0) * p + p2 / c;
    if denom.is_nan() || denom <= T::zero() {
        return Err(Error::InvalidParameter(format!(
            "denominator c·p1 + 2p + p2/c = {denom} is not positive"
        )));
    }
    // p1·p2 − p² factored through √(p1·p2) so it vanishes exactly at p*.
    let star = theoretical_threshold(p1, p2);
    Ok((star - p) * (star + p) / denom)
}

/// Predicted `λ_max/n`: the sub-critical limit, clamped to 0 at and above
/// the threshold.
pub fn predicted_lambda_over_n<T: Real>(p1: T, p2: T, p: T, c: T) -> Result<T> {
    if p >= theoretical_threshold(p1, p2) {
        return Ok(T::zero());
    }
    Ok(subcritical_lambda_over_n(p1, p2, p, c)?.max(T::zero()))
}

/// Limiting magnitudes of the leading eigenvector's entries in each block,
/// `(√(n2/(n·n1)), √(n1/(n·n2)))`.
pub fn eigvec_entry_limits<T: Real>(n1: usize, n2: usize) -> Result<(T, T)> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter(
            "community sizes must be at least 1".into(),
        ));
    }
    let (a, b) = (T::of_usize(n1), T::of_usize(n2));
    let n = a + b;
    Ok(((b / (n * a)).sqrt(), (a / (n * b)).sqrt()))
}

/// Theory values for one parameter setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryPoint<T> {
    pub p_star: T,
    pub lambda_over_n_subcritical: T,
    pub y1_entry_limit: T,
    pub y2_entry_limit: T,
}

pub fn theory_point<T: Real>(n1: usize, n2: usize, p1: T, p2: T, p: T) -> Result<TheoryPoint<T>> {
    let (y1_entry_limit, y2_entry_limit) = eigvec_entry_limits(n1, n2)?;
    let c = T::of_usize(n1) / T::of_usize(n2);
    Ok(TheoryPoint {
        p_star: theoretical_threshold(p1, p2),
        lambda_over_n_subcritical: subcritical_lambda_over_n(p1, p2, p, c)?,
        y1_entry_limit,
        y2_entry_limit,
    })
}
