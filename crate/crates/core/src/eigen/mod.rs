//! Leading eigenpair of the modularity matrix on `1⊥`, and the leading
//! singular value of a rectangular 0/1 block.

mod dense;
mod lanczos;
mod power;
pub mod tridiag;

pub use dense::{dense_eigen_oracle, dense_spectrum_on_ones_complement, DenseSpectrum};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modularity::{ModularityOperator, SymmetricOperator};
use crate::rng;
use crate::sbm::BinaryMatrix;
use crate::scalar::{dot, norm2, project_off_ones, scale, Real};

/// Entries at or below this magnitude count as zero for sign decisions.
pub const ZERO_ENTRY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    /// Restarted Lanczos with full reorthogonalization.
    Lanczos,
    /// Shifted power iteration.
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig<T> {
    /// Residual tolerance, relative to `max(1, |λ|)`.
    pub tol: T,
    /// Budget of operator applications.
    pub max_iter: usize,
    /// Spectral shift for [`EigenMethod::Power`]; `None` means `2n`.
    pub shift: Option<T>,
    pub seed: u64,
    pub method: EigenMethod,
    /// Krylov subspace size before a Lanczos restart.
    pub krylov_dim: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            tol: T::of(1e-8),
            max_iter: 20_000,
            shift: None,
            seed: 0,
            method: EigenMethod::Lanczos,
            krylov_dim: 256,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= T::zero() {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if self.krylov_dim < 2 && self.method == EigenMethod::Lanczos {
            return Err(Error::InvalidParameter(
                "krylov_dim must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// Leading eigenpair of `B` on `1⊥`.
///
/// `lambda_max` is the (unnormalised) modularity. When `converged` is false
/// the fields hold the best iterate found within the budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult<T> {
    pub lambda_max: T,
    pub y: Vec<T>,
    /// Operator applications used.
    pub iterations: usize,
    /// `‖By − λy‖₂`.
    pub residual: T,
    pub converged: bool,
}

/// Computes the largest eigenvalue of the modularity matrix restricted to
/// vectors orthogonal to `1ₙ`, with its unit eigenvector.
///
/// The eigenvector sign is fixed so that its first entry with magnitude
/// above [`ZERO_ENTRY`] is positive.
pub fn leading_eigenpair<T: Real>(
    op: &ModularityOperator<'_, T>,
    cfg: &SolverConfig<T>,
) -> Result<EigenResult<T>> {
    cfg.validate()?;
    let n = op.dim();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "need at least two nodes for a nontrivial complement of 1".into(),
        ));
    }
    let start = start_vector::<T>(n, cfg.seed);
    let mut result = match cfg.method {
        EigenMethod::Lanczos => lanczos::solve(op, cfg, start),
        EigenMethod::Power => power::solve(op, cfg, start),
    };
    fix_sign(&mut result.y);
    Ok(result)
}

/// Seeded uniform vector projected off `1` and normalised. Reseeds while
/// the projection is numerically zero.
fn start_vector<T: Real>(n: usize, seed: u64) -> Vec<T> {
    for attempt in 0u64.. {
        let mut r = rng::stream(rng::mix(&[seed, 0x0057_4741_5254, attempt]));
        let mut v: Vec<T> = (0..n).map(|_| T::of(rng::unit_f64(&mut r) - 0.5)).collect();
        project_off_ones(&mut v);
        let nrm = norm2(&v);
        if nrm.as_f64() >= 1e-12 {
            scale(T::one() / nrm, &mut v);
            return v;
        }
    }
    unreachable!("some attempt yields a non-constant vector")
}

/// Flips `y` so its first non-negligible entry is positive.
pub fn fix_sign<T: Real>(y: &mut [T]) {
    let eps = T::of(ZERO_ENTRY);
    if let Some(first) = y.iter().find(|v| v.abs() > eps) {
        if *first < T::zero() {
            for v in y.iter_mut() {
                *v = -*v;
            }
        }
    }
}

/// Leading singular value of a 0/1 block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularValue<T> {
    pub sigma: T,
    pub iterations: usize,
    /// `‖CᵀCx − σ²x‖₂` at the final iterate.
    pub residual: T,
    pub converged: bool,
}

/// `σ₁(C)` by power iteration on `x ↦ Cᵀ(Cx)`.
///
/// The start vector has strictly positive entries, so for a nonnegative `C`
/// it is never orthogonal to the leading right singular vector, and `Cx = 0`
/// only when `C` is the zero matrix.
pub fn leading_singular_value<T: Real>(
    c: &BinaryMatrix,
    cfg: &SolverConfig<T>,
) -> Result<SingularValue<T>> {
    cfg.validate()?;
    let (rows, cols) = c.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("matrix is empty".into()));
    }
    if c.nnz() == rows * cols {
        // All-ones block: rank one with σ₁ = √(rows·cols).
        return Ok(SingularValue {
            sigma: T::of_usize(rows * cols).sqrt(),
            iterations: 0,
            residual: T::zero(),
            converged: true,
        });
    }
    let mut r = rng::stream(rng::mix(&[cfg.seed, 0x0053_5644]));
    let mut x: Vec<T> = (0..cols)
        .map(|_| T::of(0.5 + 0.5 * rng::unit_f64(&mut r)))
        .collect();
    let nrm = norm2(&x);
    scale(T::one() / nrm, &mut x);

    let mut u = vec![T::zero(); rows];
    let mut w = vec![T::zero(); cols];
    let mut lambda = T::nan();
    let mut residual = T::infinity();
    for it in 1..=cfg.max_iter {
        gram_apply(c, &x, &mut u, &mut w);
        let lambda_new = dot(&x, &w);
        if lambda_new == T::zero() {
            return Ok(SingularValue {
                sigma: T::zero(),
                iterations: it,
                residual: T::zero(),
                converged: true,
            });
        }
        residual = w
            .iter()
            .zip(&x)
            .map(|(&wi, &xi)| (wi - lambda_new * xi) * (wi - lambda_new * xi))
            .sum::<T>()
            .sqrt();
        let scale_l = T::one().max(lambda_new.abs());
        let settled = (lambda_new - lambda).abs() <= cfg.tol * scale_l;
        lambda = lambda_new;
        if settled && residual <= cfg.tol * scale_l {
            return Ok(SingularValue {
                sigma: lambda.sqrt(),
                iterations: it,
                residual,
                converged: true,
            });
        }
        let wn = norm2(&w);
        x.copy_from_slice(&w);
        scale(T::one() / wn, &mut x);
    }
    Ok(SingularValue {
        sigma: lambda.max(T::zero()).sqrt(),
        iterations: cfg.max_iter,
        residual,
        converged: false,
    })
}

/// `w = Cᵀ(Cx)`, with `u = Cx` as scratch.
fn gram_apply<T: Real>(c: &BinaryMatrix, x: &[T], u: &mut [T], w: &mut [T]) {
    for (i, ui) in u.iter_mut().enumerate() {
        *ui = c
            .row(i)
            .iter()
            .fold(T::zero(), |acc, &j| acc + x[j as usize]);
    }
    w.iter_mut().for_each(|v| *v = T::zero());
    for (i, &ui) in u.iter().enumerate() {
        for &j in c.row(i) {
            w[j as usize] = w[j as usize] + ui;
        }
    }
}
