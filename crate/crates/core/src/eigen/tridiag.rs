//! Symmetric tridiagonal helpers for the Lanczos projection.
//!
//! `diag` has length `k`, `off` has length `k − 1`.

use crate::scalar::Real;

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
fn count_below<T: Real>(diag: &[T], off: &[T], x: T, pivmin: T) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < T::zero() {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn gershgorin<T: Real>(diag: &[T], off: &[T]) -> (T, T) {
    let k = diag.len();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..k {
        let r = if i > 0 { off[i - 1].abs() } else { T::zero() }
            + if i + 1 < k { off[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// Largest eigenvalue by bisection.
pub fn largest_eigenvalue<T: Real>(diag: &[T], off: &[T]) -> T {
    let k = diag.len();
    debug_assert!(k >= 1 && off.len() + 1 == k);
    if k == 1 {
        return diag[0];
    }
    let (mut lo, mut hi) = gershgorin(diag, off);
    let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
    let eps = T::epsilon();
    let pivmin = T::min_positive_value() * scale * T::of(1e3);
    // Widen a little so the bracket strictly contains the spectrum.
    let pad = eps * scale * T::of(4.0) + pivmin;
    lo = lo - pad;
    hi = hi + pad;
    for _ in 0..256 {
        let mid = (lo + hi) * T::of(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, off, mid, pivmin) == k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= eps * T::of(2.0) * lo.abs().max(hi.abs()) + pivmin {
            break;
        }
    }
    (lo + hi) * T::of(0.5)
}

/// Solves `(T − shift·I) x = rhs` in place with partial pivoting.
/// Exactly singular pivots are replaced by a tiny value, which is what
/// inverse iteration wants.
fn solve_shifted<T: Real>(diag: &[T], off: &[T], shift: T, rhs: &mut [T]) {
    let k = diag.len();
    let scale = diag
        .iter()
        .chain(off)
        .fold(T::zero(), |m, v| m.max(v.abs()))
        .max(T::one());
    let tiny = T::epsilon() * scale;
    let mut d: Vec<T> = diag.iter().map(|&a| a - shift).collect();
    let mut dl = off.to_vec();
    let mut du = off.to_vec();
    let mut du2 = vec![T::zero(); k.saturating_sub(2)];
    let mut swapped = vec![false; k.saturating_sub(1)];

    for i in 0..k.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == T::zero() {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] = d[i + 1] - fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < k {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if d[k - 1] == T::zero() {
        d[k - 1] = tiny;
    }

    for i in 0..k.saturating_sub(1) {
        if swapped[i] {
            rhs.swap(i, i + 1);
        }
        rhs[i + 1] = rhs[i + 1] - dl[i] * rhs[i];
    }
    rhs[k - 1] = rhs[k - 1] / d[k - 1];
    if k >= 2 {
        rhs[k - 2] = (rhs[k - 2] - du[k - 2] * rhs[k - 1]) / d[k - 2];
    }
    for i in (0..k.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

/// Unit eigenvector for eigenvalue `lambda` by inverse iteration.
pub fn eigenvector<T: Real>(diag: &[T], off: &[T], lambda: T) -> Vec<T> {
    let k = diag.len();
    if k == 1 {
        return vec![T::one()];
    }
    // Deterministic, non-symmetric start so no eigenvector is orthogonal to it.
    let mut x: Vec<T> = (0..k)
        .map(|i| T::one() + T::of(0.5) * T::of(((i * 7919) % 101) as f64 / 101.0))
        .collect();
    for _ in 0..3 {
        solve_shifted(diag, off, lambda, &mut x);
        let nrm = crate::scalar::norm2(&x);
        if !(nrm > T::zero() && nrm.is_finite()) {
            break;
        }
        crate::scalar::scale(T::one() / nrm, &mut x);
    }
    x
}
