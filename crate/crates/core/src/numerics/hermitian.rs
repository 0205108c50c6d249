//! Extreme eigenvalues of dense Hermitian matrices.
//!
//! Small matrices go through a full dense decomposition. Larger ones use
//! Lanczos with full reorthogonalization from a fixed-seed start vector, so
//! results are reproducible run to run.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Matrices up to this order are decomposed densely.
pub const DENSE_LIMIT: usize = 256;

const LANCZOS_SEED: u64 = 0x5eed_1a2c;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremeEigen {
    pub largest: f64,
    pub smallest: f64,
    /// Krylov dimension used (equals the order for dense solves).
    pub iterations: usize,
    /// Residual norm bound of the extreme Ritz pairs (0 for dense solves).
    pub residual: f64,
}

pub fn dense_extremes(matrix: &DMatrix<Complex64>) -> ExtremeEigen {
    let values = matrix.clone().symmetric_eigenvalues();
    let largest = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let smallest = values.iter().copied().fold(f64::INFINITY, f64::min);
    ExtremeEigen {
        largest,
        smallest,
        iterations: matrix.nrows(),
        residual: 0.0,
    }
}

/// Largest and smallest eigenvalue of a Hermitian matrix, each to relative
/// accuracy `rel_tol` with respect to the spectral radius.
pub fn extreme_eigenvalues(matrix: &DMatrix<Complex64>, rel_tol: f64) -> Result<ExtremeEigen> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::invalid("eigenvalues need a nonempty square matrix"));
    }
    if n <= DENSE_LIMIT {
        return Ok(dense_extremes(matrix));
    }
    lanczos_extremes(matrix, rel_tol, n)
}

pub fn lanczos_extremes(
    matrix: &DMatrix<Complex64>,
    rel_tol: f64,
    max_iter: usize,
) -> Result<ExtremeEigen> {
    let n = matrix.nrows();
    let max_iter = max_iter.min(n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut q = DVector::<Complex64>::from_fn(n, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    q /= Complex64::from(q.norm());

    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(max_iter);
    let mut alphas: Vec<f64> = Vec::with_capacity(max_iter);
    let mut betas: Vec<f64> = Vec::with_capacity(max_iter);
    let mut last = ExtremeEigen {
        largest: 0.0,
        smallest: 0.0,
        iterations: 0,
        residual: f64::INFINITY,
    };

    for k in 0..max_iter {
        let mut w = matrix * &q;
        let alpha = q.dotc(&w).re;
        w.axpy(Complex64::from(-alpha), &q, Complex64::from(1.0));
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            w.axpy(Complex64::from(-beta), prev, Complex64::from(1.0));
        }
        basis.push(q.clone());
        alphas.push(alpha);
        // Two passes of classical Gram–Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let proj = v.dotc(&w);
                w.axpy(-proj, v, Complex64::from(1.0));
            }
        }
        let beta = w.norm();

        let dim = k + 1;
        let check = dim <= 24 || dim % 8 == 0 || dim == max_iter;
        let scale_guess = alphas.iter().map(|a| a.abs()).fold(0.0, f64::max);
        let breakdown = beta <= 1e-14 * scale_guess.max(f64::MIN_POSITIVE);
        if check || breakdown {
            let t = DMatrix::<f64>::from_fn(dim, dim, |i, j| {
                if i == j {
                    alphas[i]
                } else if i + 1 == j {
                    betas[i]
                } else if j + 1 == i {
                    betas[j]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let (imax, imin) = argextremes(eig.eigenvalues.as_slice());
            let res_max = beta * eig.eigenvectors[(dim - 1, imax)].abs();
            let res_min = beta * eig.eigenvectors[(dim - 1, imin)].abs();
            let largest = eig.eigenvalues[imax];
            let smallest = eig.eigenvalues[imin];
            let radius = largest.abs().max(smallest.abs());
            last = ExtremeEigen {
                largest,
                smallest,
                iterations: dim,
                residual: res_max.max(res_min),
            };
            if breakdown || last.residual <= rel_tol * radius {
                return Ok(last);
            }
        }
        betas.push(beta);
        q = w / Complex64::from(beta);
    }

    if last.iterations == n {
        // A full Krylov basis makes the tridiagonal similar to the matrix.
        return Ok(last);
    }
    Err(Error::numeric(
        format!("Lanczos did not converge in {max_iter} iterations"),
        last.residual,
    ))
}

fn argextremes(values: &[f64]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[imax] {
            imax = i;
        }
        if v < values[imin] {
            imin = i;
        }
    }
    (imax, imin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let h = &a + a.adjoint();
        h * Complex64::from(0.5)
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        for (n, seed) in [(40, 1), (300, 2)] {
            let h = random_hermitian(n, seed);
            let dense = dense_extremes(&h);
            let lz = lanczos_extremes(&h, 1e-12, n).unwrap();
            assert!((dense.largest - lz.largest).abs() < 1e-9 * dense.largest.abs());
            assert!((dense.smallest - lz.smallest).abs() < 1e-9 * dense.largest.abs());
        }
    }

    #[test]
    fn identity_breaks_down_immediately() {
        let h = DMatrix::<Complex64>::identity(400, 400) * Complex64::from(2.0);
        let e = extreme_eigenvalues(&h, 1e-10).unwrap();
        assert_eq!(e.iterations, 1);
        assert!((e.largest - 2.0).abs() < 1e-14);
    }

    #[test]
    fn low_rank_psd() {
        let n = 350;
        let v = DVector::<Complex64>::from_fn(n, |i, _| Complex64::new((i as f64).sin(), 0.3));
        let h = &v * v.adjoint();
        let e = extreme_eigenvalues(&h, 1e-12).unwrap();
        assert!((e.largest - v.norm_squared()).abs() < 1e-10 * v.norm_squared());
        assert!(e.smallest.abs() < 1e-10 * v.norm_squared());
    }

    #[test]
    fn rejects_empty() {
        assert!(extreme_eigenvalues(&DMatrix::<Complex64>::zeros(0, 0), 1e-10).is_err());
    }
}
