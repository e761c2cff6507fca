use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SolverConfig;
use crate::hermat::{eigh, HermitianMatrix};
use crate::pencil::{OperatorFunctionPencil, RiggedBlockPencil};
use crate::{Error, Result};

/// Values `⟨S′(μ)y, y⟩` over an orthonormal kernel basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeTypeCertificate {
    pub values: Vec<f64>,
    pub certified: bool,
}

impl NegativeTypeCertificate {
    fn from_values(values: Vec<f64>, cfg: &SolverConfig) -> Self {
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let certified = !values.is_empty() && values.iter().all(|&v| v < -cfg.zero_tol * scale);
        Self { values, certified }
    }

    /// Largest derivative value, `None` for an empty basis.
    pub fn max_value(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::max)
    }
}

/// Eigenvectors of `s` with `|μ| ≤ kernel_tol · ‖s‖₂`.
pub(crate) fn kernel_of(s: &HermitianMatrix, cfg: &SolverConfig) -> Result<Vec<Vec<Complex64>>> {
    let e = eigh(s)?;
    let norm = e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = cfg.kernel_tol * norm.max(f64::MIN_POSITIVE);
    Ok(e.values
        .iter()
        .enumerate()
        .filter(|(_, w)| w.abs() <= cut)
        .map(|(k, _)| e.vectors.column(k).iter().copied().collect())
        .collect())
}

/// The `k` eigenvectors of `s` with smallest `|μ|`, ordered by `|μ|`.
pub(crate) fn smallest_vectors(s: &HermitianMatrix, k: usize) -> Result<Vec<Vec<Complex64>>> {
    let e = eigh(s)?;
    let mut order: Vec<usize> = (0..e.values.len()).collect();
    order.sort_by(|&a, &b| e.values[a].abs().total_cmp(&e.values[b].abs()));
    Ok(order
        .into_iter()
        .take(k)
        .map(|j| e.vectors.column(j).iter().copied().collect())
        .collect())
}

/// Orthonormal basis of the approximate kernel of `S(λ)`; empty away from eigenvalues.
pub fn kernel_basis(
    p: &RiggedBlockPencil,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<Vec<Vec<Complex64>>> {
    kernel_of(&p.schur(lambda)?, cfg)
}

/// Kernel vectors for a hit: the `multiplicity` eigenvectors of `S(λ)` nearest zero.
pub fn hit_kernel(
    p: &RiggedBlockPencil,
    hit: &super::EigenvalueHit,
) -> Result<Vec<Vec<Complex64>>> {
    smallest_vectors(&p.schur(hit.lambda)?, hit.multiplicity)
}

/// `(y, −D(λ)⁻¹ A12* y)`.
pub fn lift(p: &RiggedBlockPencil, lambda: f64, y: &[Complex64]) -> Result<Vec<Complex64>> {
    p.lift(lambda, y)
}

/// Certificate for a linear pencil from `S′(μ) = −G1 − X*G2X`.
pub fn linear_certificate(
    p: &RiggedBlockPencil,
    mu: f64,
    kernel: &[Vec<Complex64>],
    cfg: &SolverConfig,
) -> Result<NegativeTypeCertificate> {
    let d = p.schur_derivative(mu)?;
    let values = kernel.iter().map(|y| d.quadratic_form(y)).collect();
    Ok(NegativeTypeCertificate::from_values(values, cfg))
}

/// Certificate for an operator function: `μ` has negative type when
/// `⟨S′(μ)y, y⟩ < 0` for every kernel vector.
pub fn negative_type_certificate(
    f: &OperatorFunctionPencil,
    mu: f64,
    kernel: &[Vec<Complex64>],
    cfg: &SolverConfig,
) -> Result<NegativeTypeCertificate> {
    if kernel.is_empty() {
        return Err(Error::invalid(
            "negative-type certificate needs a kernel vector",
        ));
    }
    let values = kernel
        .iter()
        .map(|y| f.schur_derivative_form(mu, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(NegativeTypeCertificate::from_values(values, cfg))
}
