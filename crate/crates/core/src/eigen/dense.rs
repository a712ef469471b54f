//! Brute-force dense symmetric eigendecomposition, used as a test oracle.

use nalgebra::{DMatrix, DVector, RealField};

use crate::error::{Error, Result};
use crate::modularity::DENSE_CAP;
use crate::scalar::Real;

/// Eigenvalues in descending order with matching unit eigenvectors as
/// columns.
#[derive(Debug, Clone)]
pub struct DenseSpectrum<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<T>,
}

impl<T: Real> DenseSpectrum<T> {
    pub fn largest(&self) -> T {
        self.values[0]
    }

    pub fn vector(&self, k: usize) -> Vec<T> {
        self.vectors.column(k).iter().copied().collect()
    }
}

fn sorted<T: Real + RealField>(m: DMatrix<T>) -> DenseSpectrum<T> {
    let eig = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, c| {
        eig.eigenvectors[(i, order[c])]
    });
    DenseSpectrum { values, vectors }
}

/// Full spectrum of a dense symmetric matrix.
pub fn dense_eigen_oracle<T: Real + RealField>(m: &DMatrix<T>) -> Result<DenseSpectrum<T>> {
    check_square(m)?;
    Ok(sorted(m.clone()))
}

/// Spectrum of `m` compressed to the complement of the all-ones vector.
///
/// Uses the Householder reflector `H` that maps `1/√n` to `e₀`; columns
/// `1..n` of `H` are an orthonormal basis of `1⊥`. Returned eigenvectors
/// live in the original `n`-dimensional space.
pub fn dense_spectrum_on_ones_complement<T: Real + RealField>(
    m: &DMatrix<T>,
) -> Result<DenseSpectrum<T>> {
    let n = check_square(m)?;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "complement of the ones vector is trivial for n < 2".into(),
        ));
    }
    let inv_sqrt_n = T::one() / num_traits::Float::sqrt(T::of_usize(n));
    let mut v = DVector::from_element(n, inv_sqrt_n);
    v[0] -= T::one();
    let vtv = v.dot(&v);
    let h = DMatrix::<T>::identity(n, n) - (&v * v.transpose()) * (T::of(2.0) / vtv);
    let basis = h.columns(1, n - 1).into_owned();
    let reduced = basis.transpose() * m * &basis;
    let spec = sorted(reduced);
    let vectors = &basis * spec.vectors;
    Ok(DenseSpectrum {
        values: spec.values,
        vectors,
    })
}

fn check_square<T: Real>(m: &DMatrix<T>) -> Result<usize> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "matrix is {}x{}, expected square",
            n,
            m.ncols()
        )));
    }
    if n > DENSE_CAP {
        return Err(Error::TooLarge { n, cap: DENSE_CAP });
    }
    Ok(n)
}
