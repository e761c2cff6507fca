use nalgebra::SymmetricEigen;

use super::{cholesky, CMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Iteration cap handed to the implicit QR sweep, per unit of dimension.
const ITERATIONS_PER_ROW: usize = 200;

/// Ascending eigenvalues with orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Ascending generalized eigenvalues; vectors, when requested, are `B`-orthonormal.
#[derive(Debug, Clone)]
pub struct GeneralizedEigh {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
}

/// Hermitian eigendecomposition (Householder tridiagonalization + implicit
/// symmetric QR), sorted ascending. Fails after `200·n` QR iterations.
pub fn eigh(a: &HermitianMatrix) -> Result<Eigh> {
    let n = a.dim();
    if n == 0 {
        return Ok(Eigh {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let cap = ITERATIONS_PER_ROW * n;
    let eig = SymmetricEigen::try_new(a.as_matrix().clone(), f64::EPSILON, cap)
        .ok_or(Error::NoConvergence { iterations: cap })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigh { values, vectors })
}

/// Solves `A x = μ B x` for positive definite `B` by reduction to
/// `R^{-*} A R^{-1}` with `B = R* R`.
pub fn eigh_gen(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    want_vectors: bool,
) -> Result<GeneralizedEigh> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            what: "generalized eigenproblem",
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let f = cholesky(b)?;
    let y = f.solve_upper_adjoint(a.as_matrix());
    let c = HermitianMatrix::symmetrized(f.solve_upper_adjoint(&y.adjoint()))?;
    let e = eigh(&c)?;
    let vectors = want_vectors.then(|| f.solve_upper(&e.vectors));
    Ok(GeneralizedEigh {
        values: e.values,
        vectors,
    })
}
