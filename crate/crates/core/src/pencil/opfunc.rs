use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::RiggedBlockPencil;
use crate::hermat::{cholesky, eigh, CMatrix, CholeskyFactor, HermitianMatrix};
use crate::{Error, Result};

/// Blocks `(A11, A12, A22)` of an operator function, or their derivatives.
#[derive(Debug, Clone)]
pub struct PencilBlocks {
    pub a11: HermitianMatrix,
    pub a12: CMatrix,
    pub a22: HermitianMatrix,
}

type BlockFn = Arc<dyn Fn(f64) -> PencilBlocks + Send + Sync>;

/// Nonlinear pencil `λ ↦ [[A11(λ), A12(λ)], [A12(λ)*, A22(λ)]]` whose
/// lower-right block is uniformly negative definite:
/// `A22(λ) ≤ −ε·λ_min(G2)` when a Gram `G2` is supplied, `A22(λ) ≤ −ε` otherwise.
#[derive(Clone)]
pub struct OperatorFunctionPencil {
    n1: usize,
    n2: usize,
    eval: BlockFn,
    deriv: BlockFn,
    epsilon: f64,
    gram2_min: Option<f64>,
    reentrant: bool,
}

impl fmt::Debug for OperatorFunctionPencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorFunctionPencil")
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .field("epsilon", &self.epsilon)
            .field("gram2_min", &self.gram2_min)
            .field("reentrant", &self.reentrant)
            .finish_non_exhaustive()
    }
}

/// Intermediate data of one evaluation at `λ`.
pub(crate) struct OpfuncParts {
    pub s: HermitianMatrix,
    /// `−A22(λ) = R*R`.
    neg_a22: Option<CholeskyFactor>,
    a12: CMatrix,
}

impl OperatorFunctionPencil {
    pub fn new<E, D>(n1: usize, n2: usize, eval: E, deriv: D, epsilon: f64) -> Result<Self>
    where
        E: Fn(f64) -> PencilBlocks + Send + Sync + 'static,
        D: Fn(f64) -> PencilBlocks + Send + Sync + 'static,
    {
        if !(epsilon > 0.0) {
            return Err(Error::invalid(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self {
            n1,
            n2,
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            epsilon,
            gram2_min: None,
            reentrant: false,
        })
    }

    /// Measures the negativity margin against `G2` instead of the identity.
    pub fn with_gram2(mut self, g2: &HermitianMatrix) -> Result<Self> {
        if g2.dim() != self.n2 {
            return Err(Error::DimensionMismatch {
                what: "G2 dimension",
                expected: self.n2,
                actual: g2.dim(),
            });
        }
        cholesky(g2)?;
        self.gram2_min = eigh(g2)?.values.first().copied();
        Ok(self)
    }

    /// Declares `eval` and `deriv` safe to call concurrently.
    pub fn with_reentrant(mut self, reentrant: bool) -> Self {
        self.reentrant = reentrant;
        self
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_reentrant(&self) -> bool {
        self.reentrant
    }

    /// Absolute margin below which `A22(λ)` must stay.
    pub fn margin(&self) -> f64 {
        self.epsilon * self.gram2_min.unwrap_or(1.0)
    }

    fn checked(&self, blocks: PencilBlocks) -> Result<PencilBlocks> {
        let dims = [
            ("A11(λ) dimension", self.n1, blocks.a11.dim()),
            ("A12(λ) rows", self.n1, blocks.a12.nrows()),
            ("A12(λ) columns", self.n2, blocks.a12.ncols()),
            ("A22(λ) dimension", self.n2, blocks.a22.dim()),
        ];
        for (what, expected, actual) in dims {
            if expected != actual {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    actual,
                });
            }
        }
        Ok(blocks)
    }

    pub fn eval(&self, lambda: f64) -> Result<PencilBlocks> {
        self.checked((self.eval)(lambda))
    }

    pub fn deriv(&self, lambda: f64) -> Result<PencilBlocks> {
        self.checked((self.deriv)(lambda))
    }

    pub(crate) fn parts(&self, lambda: f64) -> Result<OpfuncParts> {
        let PencilBlocks { a11, a12, a22 } = self.eval(lambda)?;
        if self.n2 == 0 {
            return Ok(OpfuncParts {
                s: a11,
                neg_a22: None,
                a12,
            });
        }
        let neg = HermitianMatrix::zeros(self.n2).combine(0.0, &a22, -1.0)?;
        let margin = self.margin();
        let shifted = neg.combine(1.0, &HermitianMatrix::identity(self.n2), -margin)?;
        if cholesky(&shifted).is_err() {
            return Err(Error::NegativityViolated { lambda });
        }
        let r = cholesky(&neg).map_err(|_| Error::NegativityViolated { lambda })?;
        // A12 A22⁻¹ A12* = −W*W with W = R⁻* A12*.
        let w = r.solve_upper_adjoint(&a12.adjoint());
        let s = HermitianMatrix::symmetrized(a11.as_matrix() + w.adjoint() * w)?;
        Ok(OpfuncParts {
            s,
            neg_a22: Some(r),
            a12,
        })
    }

    /// `S(λ) = A11(λ) − A12(λ) A22(λ)⁻¹ A12(λ)*`.
    pub fn schur(&self, lambda: f64) -> Result<HermitianMatrix> {
        Ok(self.parts(lambda)?.s)
    }

    /// `⟨S′(λ)y, y⟩ = ⟨A11′y, y⟩ − 2 Re⟨A12′b, y⟩ + ⟨A22′b, b⟩` with
    /// `b = A22(λ)⁻¹ A12(λ)* y`.
    pub fn schur_derivative_form(&self, lambda: f64, y: &[Complex64]) -> Result<f64> {
        if y.len() != self.n1 {
            return Err(Error::DimensionMismatch {
                what: "kernel vector",
                expected: self.n1,
                actual: y.len(),
            });
        }
        let parts = self.parts(lambda)?;
        let d = self.deriv(lambda)?;
        let mut v = d.a11.quadratic_form(y);
        if let Some(r) = &parts.neg_a22 {
            let yv = CMatrix::from_column_slice(self.n1, 1, y);
            let b = -r.solve(&(parts.a12.adjoint() * &yv));
            let cross = (yv.adjoint() * &d.a12 * &b)[(0, 0)];
            v -= 2.0 * cross.re;
            v += d.a22.quadratic_form(b.as_slice());
        }
        Ok(v)
    }
}

/// Linear pencil as an operator function: blocks `(A11 − λG1, A12, A22 − λG2)`,
/// derivatives `(−G1, 0, −G2)`. The margin is the pencil's gap guard in the
/// `G2` norm, so the negativity check passes exactly on the guarded gap above
/// the `(A22, G2)` spectrum.
pub fn opfunc_from_linear(p: &RiggedBlockPencil) -> OperatorFunctionPencil {
    let (n1, n2) = (p.n1(), p.n2());
    let (a11, a12, a22) = (p.a11().clone(), p.a12().clone(), p.a22().clone());
    let (g1, g2) = (p.g1().clone(), p.g2().clone());
    let (dg1, dg2) = (g1.combine(-1.0, &g1, 0.0), g2.combine(-1.0, &g2, 0.0));
    let (dg1, dg2) = (dg1.expect("same dimension"), dg2.expect("same dimension"));
    let eval = move |lambda: f64| PencilBlocks {
        a11: a11.shifted(lambda, &g1).expect("same dimension"),
        a12: a12.clone(),
        a22: a22.shifted(lambda, &g2).expect("same dimension"),
    };
    let deriv = move |_: f64| PencilBlocks {
        a11: dg1.clone(),
        a12: CMatrix::zeros(n1, n2),
        a22: dg2.clone(),
    };
    let epsilon = p.guard_for(p.guard_rel());
    let f = OperatorFunctionPencil::new(n1, n2, eval, deriv, epsilon)
        .expect("guard is positive")
        .with_reentrant(true);
    if n2 > 0 {
        f.with_gram2(p.g2()).expect("G2 validated by the pencil")
    } else {
        f
    }
}
