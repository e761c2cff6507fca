//! Dense Hermitian linear algebra.
//!
//! Everything is complex; real problems embed with zero imaginary parts.
//! [`ldl_factor`] is the inertia workhorse: a Bunch–Kaufman symmetric-pivoted
//! `LDL*` whose block diagonal is classified into `(n_neg, n_zero, n_pos)`.
//! [`cholesky`] gates positive definiteness of Gram matrices, and
//! [`eigh`]/[`eigh_gen`] are the reference eigensolvers.

mod cholesky;
mod eigen;
mod ldl;

pub use cholesky::{cholesky, CholeskyFactor};
pub use eigen::{eigh, eigh_gen, Eigh, GeneralizedEigh};
pub use ldl::{inertia_of, ldl_factor, LdlFactorization, PivotBlock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense complex matrix, column-major.
pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance on `‖A − A*‖_max / ‖A‖_max` accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default relative zero tolerance for inertia classification of an `n × n` matrix.
pub fn default_zero_tol(n: usize) -> f64 {
    1e-10 * n.max(1) as f64
}

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Max-abs entry norm.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Dense Hermitian matrix. Stored exactly Hermitian: construction replaces the
/// input by `(A + A*)/2` and keeps the relative defect it removed.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
    defect: f64,
}

impl HermitianMatrix {
    /// Accepts `m` if its relative Hermitian defect is at most [`HERMITIAN_TOL`].
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = Self::symmetrized(m)?;
        if h.defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect: h.defect });
        }
        Ok(h)
    }

    /// Symmetrizes `m` unconditionally. Used for computed matrices (Schur
    /// complements, congruences) whose asymmetry is pure rounding.
    pub fn symmetrized(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let n = m.nrows();
        let scale = max_abs(&m);
        let mut data = m;
        let mut defect = 0.0f64;
        for j in 0..n {
            for i in j..n {
                let a = data[(i, j)];
                let b = data[(j, i)].conj();
                defect = defect.max((a - b).norm());
                let avg = (a + b) * 0.5;
                data[(i, j)] = avg;
                data[(j, i)] = avg.conj();
            }
            data[(j, j)].im = 0.0;
        }
        let defect = if scale > 0.0 { defect / scale } else { 0.0 };
        Ok(Self { data, defect })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            data: CMatrix::zeros(n, n),
            defect: 0.0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: CMatrix::identity(n, n),
            defect: 0.0,
        }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = CMatrix::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            data[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { data, defect: 0.0 }
    }

    /// Builds from real row-major entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    /// Relative defect `‖A − A*‖_max / ‖A‖_max` of the matrix before symmetrization.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    /// Real diagonal.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)].re).collect()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &HermitianMatrix, b: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "Hermitian combination",
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self {
            data: self.data.scale(a) + other.data.scale(b),
            defect: 0.0,
        })
    }

    /// `self − λ·gram`, the diagonal block of a linear pencil.
    pub fn shifted(&self, lambda: f64, gram: &HermitianMatrix) -> Result<Self> {
        self.combine(1.0, gram, -lambda)
    }

    /// Congruence `C* A C`.
    pub fn congruence(&self, c: &CMatrix) -> Result<Self> {
        if c.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "congruence factor rows",
                expected: self.dim(),
                actual: c.nrows(),
            });
        }
        Self::symmetrized(c.adjoint() * &self.data * c)
    }

    /// Real quadratic form `y* A y`.
    pub fn quadratic_form(&self, y: &[Complex64]) -> f64 {
        let n = self.dim();
        let mut acc = ZERO;
        for j in 0..n {
            let mut col = ZERO;
            for i in 0..n {
                col += y[i].conj() * self.data[(i, j)];
            }
            acc += col * y[j];
        }
        acc.re
    }
}

/// Inertia `(n_neg, n_zero, n_pos)` of a Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Inertia {
    pub n_neg: usize,
    pub n_zero: usize,
    pub n_pos: usize,
}

impl Inertia {
    pub fn new(n_neg: usize, n_zero: usize, n_pos: usize) -> Self {
        Self {
            n_neg,
            n_zero,
            n_pos,
        }
    }

    pub fn dim(&self) -> usize {
        self.n_neg + self.n_zero + self.n_pos
    }
}

impl std::ops::Add for Inertia {
    type Output = Inertia;

    fn add(self, rhs: Inertia) -> Inertia {
        Inertia::new(
            self.n_neg + rhs.n_neg,
            self.n_zero + rhs.n_zero,
            self.n_pos + rhs.n_pos,
        )
    }
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n_neg, self.n_zero, self.n_pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrization_records_defect() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.5, 0.1);
        m[(1, 0)] = Complex64::new(0.5, -0.1);
        let h = HermitianMatrix::new(m.clone()).unwrap();
        assert_eq!(h.defect(), 0.0);

        m[(1, 0)] = Complex64::new(0.6, -0.1);
        assert!(matches!(
            HermitianMatrix::new(m.clone()),
            Err(Error::NotHermitian { .. })
        ));
        let s = HermitianMatrix::symmetrized(m).unwrap();
        assert!((s.defect() - 0.1).abs() < 1e-15);
        assert_eq!(s.as_matrix()[(1, 0)], Complex64::new(0.55, -0.1));
        assert_eq!(s.as_matrix()[(0, 1)], Complex64::new(0.55, 0.1));
    }

    #[test]
    fn empty_matrix_is_allowed() {
        let h = HermitianMatrix::new(CMatrix::zeros(0, 0)).unwrap();
        assert_eq!(h.dim(), 0);
        assert_eq!(inertia_of(&h, 1e-10), Inertia::default());
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(
            HermitianMatrix::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn quadratic_form_of_diagonal() {
        let h = HermitianMatrix::from_real_diagonal(&[2.0, -1.0]);
        let y = [Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0)];
        assert!((h.quadratic_form(&y) - (2.0 * 2.0 - 4.0)).abs() < 1e-15);
    }
}
