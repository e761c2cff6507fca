//! Discrete self-adjoint block pencils.
//!
//! A [`RiggedBlockPencil`] stores the forms `A11`, `A12`, `A22` together with
//! the positive definite Grams `G1`, `G2` of the embeddings into the pivot
//! spaces. `A21 = A12*` is never stored, so the pencil is Hermitian by
//! construction. Inside a gap of the `(A22, G2)` spectrum the lower-right block
//! `D(λ) = A22 − λG2` is invertible and the pencil is congruent to
//! `diag(S(λ), D(λ))`.

mod opfunc;

pub use opfunc::{opfunc_from_linear, OperatorFunctionPencil, PencilBlocks};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hermat::{
    cholesky, eigh, eigh_gen, ldl_factor, max_abs, CMatrix, HermitianMatrix, LdlFactorization,
};
use crate::{Error, Result};

/// Default relative guard between a spectral parameter and the `(A22, G2)` spectrum.
pub const DEFAULT_GUARD_REL: f64 = 1e-8;
/// Default smallest admissible pivot ratio of `D(λ)`.
pub const DEFAULT_COND_GUARD: f64 = 1e-13;

/// An open interval free of `(A22, G2)` eigenvalues, already shrunk by `guard`
/// at finite ends. Points `lo ≤ λ ≤ hi` are valid spectral parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapInterval {
    pub lo: f64,
    pub hi: f64,
    /// Absolute distance kept from the lower-right spectrum.
    pub guard: f64,
    /// Number of `(A22, G2)` eigenvalues below the gap.
    pub index: usize,
}

impl GapInterval {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lo <= lambda && lambda <= self.hi
    }
}

/// Which quadratic form sign the D₁ Gram is validated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FormSign {
    #[default]
    Positive,
    Negative,
}

#[derive(Debug, Clone)]
pub struct RiggedBlockPencil {
    a11: HermitianMatrix,
    a12: CMatrix,
    a22: HermitianMatrix,
    g1: HermitianMatrix,
    g2: HermitianMatrix,
    label: Option<String>,
    guard_rel: f64,
    cond_guard: f64,
    t22: Vec<f64>,
}

/// Pieces of one Schur complement evaluation.
pub(crate) struct SchurParts {
    pub s: HermitianMatrix,
    /// `X = D(λ)⁻¹ A12*`, `n2 × n1`.
    pub x: CMatrix,
    pub d: HermitianMatrix,
}

impl RiggedBlockPencil {
    /// Validates shapes and Gram definiteness and computes the `(A22, G2)` spectrum.
    pub fn new(
        a11: HermitianMatrix,
        a12: CMatrix,
        a22: HermitianMatrix,
        g1: HermitianMatrix,
        g2: HermitianMatrix,
    ) -> Result<Self> {
        let (n1, n2) = (a11.dim(), a22.dim());
        let checks = [
            ("A12 rows", n1, a12.nrows()),
            ("A12 columns", n2, a12.ncols()),
            ("G1 dimension", n1, g1.dim()),
            ("G2 dimension", n2, g2.dim()),
        ];
        for (what, expected, actual) in checks {
            if expected != actual {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    actual,
                });
            }
        }
        cholesky(&g1)?;
        cholesky(&g2)?;
        let t22 = eigh_gen(&a22, &g2, false)?.values;
        Ok(Self {
            a11,
            a12,
            a22,
            g1,
            g2,
            label: None,
            guard_rel: DEFAULT_GUARD_REL,
            cond_guard: DEFAULT_COND_GUARD,
            t22,
        })
    }

    /// Single-block pencil `A11 − λG1` (`n2 = 0`).
    pub fn single_block(a11: HermitianMatrix, g1: HermitianMatrix) -> Result<Self> {
        let n1 = a11.dim();
        Self::new(
            a11,
            CMatrix::zeros(n1, 0),
            HermitianMatrix::zeros(0),
            g1,
            HermitianMatrix::zeros(0),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_guards(mut self, guard_rel: f64, cond_guard: f64) -> Self {
        self.guard_rel = guard_rel;
        self.cond_guard = cond_guard;
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn n1(&self) -> usize {
        self.a11.dim()
    }

    pub fn n2(&self) -> usize {
        self.a22.dim()
    }

    pub fn a11(&self) -> &HermitianMatrix {
        &self.a11
    }

    pub fn a12(&self) -> &CMatrix {
        &self.a12
    }

    pub fn a22(&self) -> &HermitianMatrix {
        &self.a22
    }

    pub fn g1(&self) -> &HermitianMatrix {
        &self.g1
    }

    pub fn g2(&self) -> &HermitianMatrix {
        &self.g2
    }

    pub fn guard_rel(&self) -> f64 {
        self.guard_rel
    }

    pub fn cond_guard(&self) -> f64 {
        self.cond_guard
    }

    /// `[[A11 − λG1, A12], [A12*, A22 − λG2]]`.
    pub fn assemble_full(&self, lambda: f64) -> HermitianMatrix {
        let (n1, n2) = (self.n1(), self.n2());
        let mut m = CMatrix::zeros(n1 + n2, n1 + n2);
        let top = self.a11.as_matrix() - self.g1.as_matrix().scale(lambda);
        let bottom = self.a22.as_matrix() - self.g2.as_matrix().scale(lambda);
        m.view_mut((0, 0), (n1, n1)).copy_from(&top);
        m.view_mut((0, n1), (n1, n2)).copy_from(&self.a12);
        m.view_mut((n1, 0), (n2, n1)).copy_from(&self.a12.adjoint());
        m.view_mut((n1, n1), (n2, n2)).copy_from(&bottom);
        HermitianMatrix::symmetrized(m).expect("square by construction")
    }

    /// `diag(G1, G2)`.
    pub fn full_gram(&self) -> HermitianMatrix {
        let (n1, n2) = (self.n1(), self.n2());
        let mut m = CMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(self.g1.as_matrix());
        m.view_mut((n1, n1), (n2, n2))
            .copy_from(self.g2.as_matrix());
        HermitianMatrix::symmetrized(m).expect("square by construction")
    }

    /// Ascending eigenvalues of `A22 x = θ G2 x`.
    pub fn t22_spectrum(&self) -> &[f64] {
        &self.t22
    }

    /// `D(λ) = A22 − λG2`.
    pub fn d_block(&self, lambda: f64) -> HermitianMatrix {
        self.a22.shifted(lambda, &self.g2).expect("same dimension")
    }

    /// Absolute guard for a relative `guard_rel`: scaled by the spectral
    /// diameter of `(A22, G2)`, floored at 1.
    pub fn guard_for(&self, guard_rel: f64) -> f64 {
        match (self.t22.first(), self.t22.last()) {
            (Some(lo), Some(hi)) => guard_rel * (hi - lo).max(1.0),
            _ => guard_rel,
        }
    }

    /// The gap of the `(A22, G2)` spectrum containing `λ`.
    pub fn gap_of(&self, lambda: f64, guard_rel: f64) -> Result<GapInterval> {
        let guard = self.guard_for(guard_rel);
        if !lambda.is_finite() {
            return Err(Error::invalid(format!(
                "spectral parameter {lambda} is not finite"
            )));
        }
        if let Some(&nearest) = self
            .t22
            .iter()
            .min_by(|a, b| (*a - lambda).abs().total_cmp(&(*b - lambda).abs()))
        {
            if lambda > nearest - guard && lambda < nearest + guard {
                return Err(Error::InsideT22Spectrum { lambda, nearest });
            }
        }
        let index = self.t22.partition_point(|&t| t < lambda);
        let lo = if index == 0 {
            f64::NEG_INFINITY
        } else {
            self.t22[index - 1] + guard
        };
        let hi = self.t22.get(index).map_or(f64::INFINITY, |t| t - guard);
        Ok(GapInterval {
            lo,
            hi,
            guard,
            index,
        })
    }

    /// [`gap_of`](Self::gap_of) with the pencil's own guard.
    pub fn gap(&self, lambda: f64) -> Result<GapInterval> {
        self.gap_of(lambda, self.guard_rel)
    }

    /// All gaps in ascending order (`n2 + 1` of them, fewer when the
    /// `(A22, G2)` spectrum has repeated eigenvalues).
    pub fn gaps(&self) -> Vec<GapInterval> {
        let guard = self.guard_for(self.guard_rel);
        let mut bounds = vec![f64::NEG_INFINITY];
        bounds.extend_from_slice(&self.t22);
        bounds.push(f64::INFINITY);
        let mut out = Vec::new();
        for (index, w) in bounds.windows(2).enumerate() {
            let lo = if w[0].is_finite() { w[0] + guard } else { w[0] };
            let hi = if w[1].is_finite() { w[1] - guard } else { w[1] };
            if lo < hi {
                out.push(GapInterval {
                    lo,
                    hi,
                    guard,
                    index,
                });
            }
        }
        out
    }

    fn factor_d(&self, lambda: f64) -> Result<(HermitianMatrix, LdlFactorization)> {
        self.gap(lambda)?;
        let d = self.d_block(lambda);
        let f = ldl_factor(&d, 0.0);
        let ratio = f.pivot_ratio();
        if ratio < self.cond_guard {
            return Err(Error::IllConditioned { lambda, ratio });
        }
        Ok((d, f))
    }

    pub(crate) fn schur_parts(&self, lambda: f64) -> Result<SchurParts> {
        let (d, f) = self.factor_d(lambda)?;
        let x = f.solve_with(&self.a12.adjoint())?;
        let mut s = self.a11.as_matrix() - self.g1.as_matrix().scale(lambda);
        if self.n2() > 0 {
            s -= &self.a12 * &x;
        }
        Ok(SchurParts {
            s: HermitianMatrix::symmetrized(s)?,
            x,
            d,
        })
    }

    /// `S(λ) = A11 − λG1 − A12 D(λ)⁻¹ A12*`.
    pub fn schur(&self, lambda: f64) -> Result<HermitianMatrix> {
        Ok(self.schur_parts(lambda)?.s)
    }

    /// `S′(λ) = −G1 − A12 D⁻¹ G2 D⁻¹ A12*`, negative definite.
    pub fn schur_derivative(&self, lambda: f64) -> Result<HermitianMatrix> {
        let (_, f) = self.factor_d(lambda)?;
        let x = f.solve_with(&self.a12.adjoint())?;
        let mut m = -self.g1.as_matrix().clone();
        if self.n2() > 0 {
            m -= x.adjoint() * self.g2.as_matrix() * &x;
        }
        HermitianMatrix::symmetrized(m)
    }

    /// Relative max-norm residual of the congruence
    /// `T(λ) = U* diag(S(λ), D(λ)) U` with `U = [[1, 0], [D⁻¹A12*, 1]]`.
    pub fn fs_residual(&self, lambda: f64) -> Result<f64> {
        let SchurParts { s, x, d } = self.schur_parts(lambda)?;
        let (n1, n2) = (self.n1(), self.n2());
        let n = n1 + n2;
        let mut u = CMatrix::identity(n, n);
        u.view_mut((n1, 0), (n2, n1)).copy_from(&x);
        let mut block = CMatrix::zeros(n, n);
        block.view_mut((0, 0), (n1, n1)).copy_from(s.as_matrix());
        block.view_mut((n1, n1), (n2, n2)).copy_from(d.as_matrix());
        let rebuilt = u.adjoint() * block * &u;
        let full = self.assemble_full(lambda);
        let scale = full.max_abs();
        let diff = max_abs(&(full.as_matrix() - rebuilt));
        Ok(if scale > 0.0 { diff / scale } else { diff })
    }

    /// D₁-norm Gram `(A11 − κG1) + A12 (τG2 − A22)⁻¹ A12*`, validated positive
    /// definite by Cholesky.
    pub fn d1_gram(&self, kappa: f64, tau: f64) -> Result<HermitianMatrix> {
        self.d1_gram_signed(kappa, tau, FormSign::Positive)
    }

    /// As [`d1_gram`](Self::d1_gram), but for [`FormSign::Negative`] the form
    /// must be negative definite and its negation is returned.
    pub fn d1_gram_signed(&self, kappa: f64, tau: f64, sign: FormSign) -> Result<HermitianMatrix> {
        let mut g = self.a11.as_matrix() - self.g1.as_matrix().scale(kappa);
        if self.n2() > 0 {
            let e = self.g2.combine(tau, &self.a22, -1.0)?;
            let chol = cholesky(&e)?;
            let w = chol.solve_upper_adjoint(&self.a12.adjoint());
            g += w.adjoint() * w;
        }
        let g = HermitianMatrix::symmetrized(match sign {
            FormSign::Positive => g,
            FormSign::Negative => -g,
        })?;
        cholesky(&g)?;
        Ok(g)
    }

    /// Shifts that make [`d1_gram`](Self::d1_gram) positive definite for any
    /// pencil: `κ = λ_min(A11, G1) − 1`, `τ = λ_max(A22, G2) + 1`.
    pub fn default_shifts(&self) -> Result<(f64, f64)> {
        let lo = eigh_gen(&self.a11, &self.g1, false)?
            .values
            .first()
            .copied()
            .unwrap_or(0.0);
        let hi = self.t22.last().copied().unwrap_or(0.0);
        Ok((lo - 1.0, hi + 1.0))
    }

    /// Bound on the modulus of every pencil eigenvalue:
    /// `‖T(0)‖_F / λ_min(diag(G1, G2))`.
    pub fn spectral_bound(&self) -> Result<f64> {
        let full = self.assemble_full(0.0);
        let gmin = [&self.g1, &self.g2]
            .iter()
            .filter(|g| g.dim() > 0)
            .map(|g| eigh(g).map(|e| e.values[0]))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        Ok(full.as_matrix().norm() / gmin * (1.0 + 1e-8) + 1e-12)
    }

    /// `(y, −D(λ)⁻¹ A12* y)`: lifts a kernel vector of `S(λ)` to one of `T(λ)`.
    pub fn lift(&self, lambda: f64, y: &[Complex64]) -> Result<Vec<Complex64>> {
        if y.len() != self.n1() {
            return Err(Error::DimensionMismatch {
                what: "lift vector",
                expected: self.n1(),
                actual: y.len(),
            });
        }
        let (_, f) = self.factor_d(lambda)?;
        let yv = CMatrix::from_column_slice(y.len(), 1, y);
        let z = f.solve_with(&(self.a12.adjoint() * yv))?;
        let mut out = y.to_vec();
        out.extend(z.iter().map(|v| -v));
        Ok(out)
    }
}
