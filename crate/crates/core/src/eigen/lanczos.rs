//! Restarted Lanczos with full reorthogonalization, confined to the
//! complement of the all-ones vector.

use super::{tridiag, EigenResult, SolverConfig};
use crate::modularity::SymmetricOperator;
use crate::scalar::{axpy, dot, norm2, project_off_ones, scale, Real};

pub(super) fn solve<T: Real, Op: SymmetricOperator<T>>(
    op: &Op,
    cfg: &SolverConfig<T>,
    start: Vec<T>,
) -> EigenResult<T> {
    let n = op.dim();
    let tol = cfg.tol;
    // Dimension of the complement of the ones vector.
    let max_dim = cfg.krylov_dim.clamp(1, n.saturating_sub(1).max(1));
    let mut matvecs = 0usize;
    let mut v0 = start;
    let mut best: Option<EigenResult<T>> = None;
    let mut w = vec![T::zero(); n];

    loop {
        let mut basis: Vec<Vec<T>> = Vec::with_capacity(max_dim);
        let mut alpha: Vec<T> = Vec::with_capacity(max_dim);
        let mut beta: Vec<T> = Vec::with_capacity(max_dim);
        basis.push(v0);
        let mut theta_prev = T::nan();
        let mut ritz_vec: Vec<T>;
        let mut anorm = T::zero();

        loop {
            let j = basis.len() - 1;
            op.apply_into(&basis[j], &mut w);
            matvecs += 1;
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            let a = dot(&w, &basis[j]);
            axpy(-a, &basis[j], &mut w);
            alpha.push(a);

            // Two passes of classical Gram-Schmidt against the locked ones
            // vector and the whole basis.
            for _ in 0..2 {
                project_off_ones(&mut w);
                let coeffs: Vec<T> = basis.iter().map(|q| dot(&w, q)).collect();
                for (c, q) in coeffs.iter().zip(&basis) {
                    axpy(-*c, q, &mut w);
                }
            }
            let b = norm2(&w);
            anorm = anorm.max(a.abs()).max(b);

            let ritz = tridiag::largest_eigenvalue(&alpha, &beta);
            ritz_vec = tridiag::eigenvector(&alpha, &beta, ritz);
            let resid_est = b * ritz_vec[j].abs();
            let scale_l = T::one().max(ritz.abs());
            let settled = (ritz - theta_prev).abs() <= tol * scale_l;
            theta_prev = ritz;

            let breakdown = b <= T::of(100.0) * T::epsilon() * anorm.max(T::one());
            let converged = settled && resid_est <= T::of(0.1) * tol * scale_l;
            if converged || breakdown || basis.len() >= max_dim || matvecs >= cfg.max_iter {
                break;
            }
            beta.push(b);
            let mut next = w.clone();
            scale(T::one() / b, &mut next);
            basis.push(next);
        }

        // Ritz vector in the full space, re-projected and normalised.
        let mut y = vec![T::zero(); n];
        for (c, q) in ritz_vec.iter().zip(&basis) {
            axpy(*c, q, &mut y);
        }
        project_off_ones(&mut y);
        let nrm = norm2(&y);
        scale(T::one() / nrm, &mut y);

        op.apply_into(&y, &mut w);
        matvecs += 1;
        let lambda = dot(&y, &w);
        axpy(-lambda, &y, &mut w);
        let residual = norm2(&w);
        let converged = residual <= tol * T::one().max(lambda.abs());

        let candidate = EigenResult {
            lambda_max: lambda,
            y,
            iterations: matvecs,
            residual,
            converged,
        };
        if converged || matvecs >= cfg.max_iter {
            return match best {
                Some(b) if !converged && b.residual < candidate.residual => b,
                _ => candidate,
            };
        }
        v0 = candidate.y.clone();
        if best
            .as_ref()
            .is_none_or(|b| candidate.residual < b.residual)
        {
            best = Some(candidate);
        }
    }
}
