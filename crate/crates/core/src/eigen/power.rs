//! Shifted power iteration on the complement of the ones vector.
//!
//! Iterates `x ← P(B + s·I)x / ‖·‖` with `P = I − 11ᵀ/n`. For `s` at least
//! the magnitude of the most negative eigenvalue of `B`, the shifted
//! operator is positive semidefinite on `1⊥` and the iteration converges to
//! the algebraically largest eigenvalue there.

use super::{EigenResult, SolverConfig};
use crate::modularity::SymmetricOperator;
use crate::scalar::{axpy, dot, norm2, project_off_ones, scale, Real};

pub(super) fn solve<T: Real, Op: SymmetricOperator<T>>(
    op: &Op,
    cfg: &SolverConfig<T>,
    start: Vec<T>,
) -> EigenResult<T> {
    let n = op.dim();
    let shift = cfg.shift.unwrap_or_else(|| T::of_usize(2 * n));
    let tol = cfg.tol;

    let mut x = start;
    let mut bx = vec![T::zero(); n];
    let mut r = vec![T::zero(); n];
    op.apply_into(&x, &mut bx);
    let mut lambda = dot(&x, &bx);
    let mut residual = T::infinity();

    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        // x ← P(Bx + s·x), normalised
        let mut next = bx.clone();
        axpy(shift, &x, &mut next);
        project_off_ones(&mut next);
        let nrm = norm2(&next);
        if nrm.is_nan() || nrm <= T::zero() {
            break;
        }
        scale(T::one() / nrm, &mut next);
        x = next;

        op.apply_into(&x, &mut bx);
        let lambda_new = dot(&x, &bx);
        r.copy_from_slice(&bx);
        axpy(-lambda_new, &x, &mut r);
        project_off_ones(&mut r);
        residual = norm2(&r);

        let scale_l = T::one().max(lambda_new.abs());
        let settled = (lambda_new - lambda).abs() <= tol * scale_l;
        lambda = lambda_new;
        if settled && residual <= tol * scale_l {
            return EigenResult {
                lambda_max: lambda,
                y: x,
                iterations,
                residual,
                converged: true,
            };
        }
    }
    EigenResult {
        lambda_max: lambda,
        y: x,
        iterations,
        residual,
        converged: false,
    }
}
