//! Counting function, eigenvalue localization and Λₙ curves.
//!
//! `ν(λ) = ind S(λ)` counts pencil eigenvalues below `λ` inside a gap, up to
//! an additive constant. Every operation here is a pure function of the pencil
//! and the configuration; results do not depend on the number of threads.

mod bisect;
mod curves;
mod kernel;

pub use bisect::{locate, locate_general, nth_eigenvalue, NthEigenvalue};
pub use curves::{lambda_curves, LambdaCurveTable};
pub use kernel::{
    hit_kernel, kernel_basis, lift, linear_certificate, negative_type_certificate,
    NegativeTypeCertificate,
};

use serde::{Deserialize, Serialize};

use crate::hermat::{inertia_of, Inertia};
use crate::pencil::{OperatorFunctionPencil, RiggedBlockPencil};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Absolute bracket width at which bisection stops.
    pub lambda_tol_abs: f64,
    /// Relative bracket width, scaled by `|λ|`.
    pub lambda_tol_rel: f64,
    /// Relative zero threshold for inertia classification.
    pub zero_tol: f64,
    /// Relative threshold `|μ| ≤ kernel_tol·‖S‖` for approximate kernel vectors.
    pub kernel_tol: f64,
    /// Cap ε of the Λₙ curves.
    pub epsilon_cap: f64,
    /// Total number of counting-function evaluations one call may spend.
    pub max_bisections: usize,
    /// Pre-warm bisection midpoints on the rayon pool.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda_tol_abs: 1e-10,
            lambda_tol_rel: 1e-10,
            zero_tol: 1e-14,
            kernel_tol: 1e-8,
            epsilon_cap: 1.0,
            max_bisections: 200_000,
            parallel: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_tol_abs", self.lambda_tol_abs),
            ("lambda_tol_rel", self.lambda_tol_rel),
            ("zero_tol", self.zero_tol),
            ("kernel_tol", self.kernel_tol),
            ("epsilon_cap", self.epsilon_cap),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.zero_tol >= 1.0 {
            return Err(Error::invalid("zero_tol must be below 1"));
        }
        if self.max_bisections == 0 {
            return Err(Error::invalid("max_bisections must be at least 1"));
        }
        Ok(())
    }

    /// Bracket width accepted at `λ`.
    pub fn width_tol(&self, lambda: f64) -> f64 {
        self.lambda_tol_abs + self.lambda_tol_rel * lambda.abs()
    }
}

/// A located eigenvalue. The eigenvalue lies in `[bracket.0, bracket.1)` and
/// `ν(bracket.1) − ν(bracket.0) = multiplicity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueHit {
    pub lambda: f64,
    pub multiplicity: usize,
    pub bracket: (f64, f64),
    pub negative_type: Option<NegativeTypeCertificate>,
    /// Kernel dimension found at the bracket midpoint when it disagreed with
    /// the jump of `ν`.
    pub kernel_mismatch: Option<usize>,
}

/// Which inertia count [`count_between`] differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountBy {
    /// `ν(ζ⁺) − ν(ζ⁻)`: eigenvalues in `[ζ⁻, ζ⁺)`.
    #[default]
    Neg,
    /// `n_pos S(ζ⁻) − n_pos S(ζ⁺)`: eigenvalues in `(ζ⁻, ζ⁺]`.
    Pos,
}

/// Inertia of `S(λ)`.
pub fn schur_inertia(p: &RiggedBlockPencil, lambda: f64, cfg: &SolverConfig) -> Result<Inertia> {
    Ok(inertia_of(&p.schur(lambda)?, cfg.zero_tol))
}

/// `ν(λ) = n_neg S(λ)`.
pub fn nu(p: &RiggedBlockPencil, lambda: f64, cfg: &SolverConfig) -> Result<usize> {
    Ok(schur_inertia(p, lambda, cfg)?.n_neg)
}

/// `ν_F(λ) = n_neg S_F(λ)` for an operator function.
pub fn nu_general(f: &OperatorFunctionPencil, lambda: f64, cfg: &SolverConfig) -> Result<usize> {
    Ok(inertia_of(&f.schur(lambda)?, cfg.zero_tol).n_neg)
}

/// Checks `lo < hi` and that both lie in one gap; returns that gap.
pub(crate) fn common_gap(
    p: &RiggedBlockPencil,
    lo: f64,
    hi: f64,
) -> Result<crate::pencil::GapInterval> {
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let (a, b) = (p.gap(lo)?, p.gap(hi)?);
    if a.index != b.index {
        return Err(Error::GapMismatch { lo, hi });
    }
    Ok(a)
}

/// Total multiplicity of pencil eigenvalues between `ζ⁻` and `ζ⁺`.
pub fn count_between(
    p: &RiggedBlockPencil,
    lo: f64,
    hi: f64,
    cfg: &SolverConfig,
    by: CountBy,
) -> Result<usize> {
    common_gap(p, lo, hi)?;
    let (a, b) = (schur_inertia(p, lo, cfg)?, schur_inertia(p, hi, cfg)?);
    Ok(match by {
        CountBy::Neg => b.n_neg.saturating_sub(a.n_neg),
        CountBy::Pos => a.n_pos.saturating_sub(b.n_pos),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{CMatrix, HermitianMatrix};
    use crate::oracle::dense_spectrum;
    use crate::random::{random_pencil, seeded};

    pub(crate) fn decoupled(a11: &[f64], a22: &[f64]) -> RiggedBlockPencil {
        RiggedBlockPencil::new(
            HermitianMatrix::from_real_diagonal(a11),
            CMatrix::zeros(a11.len(), a22.len()),
            HermitianMatrix::from_real_diagonal(a22),
            HermitianMatrix::identity(a11.len()),
            HermitianMatrix::identity(a22.len()),
        )
        .unwrap()
    }

    #[test]
    fn config_roundtrip_and_validation() {
        let cfg = SolverConfig::default();
        cfg.validate().unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<SolverConfig>(&json).unwrap(), cfg);
        let partial: SolverConfig = serde_json::from_str(r#"{"zero_tol": 1e-12}"#).unwrap();
        assert_eq!(partial.zero_tol, 1e-12);
        assert_eq!(partial.lambda_tol_abs, 1e-10);
        let bad = SolverConfig {
            max_bisections: 0,
            ..cfg
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn nu_decoupled() {
        let p = decoupled(&[1.0, 3.0], &[10.0]);
        let cfg = SolverConfig::default();
        assert_eq!(nu(&p, 2.0, &cfg).unwrap(), 1);
        assert_eq!(nu(&p, 0.0, &cfg).unwrap(), 0);
        assert_eq!(nu(&p, 5.0, &cfg).unwrap(), 2);
    }

    #[test]
    fn nu_hand_example() {
        let mut a12 = CMatrix::zeros(2, 1);
        a12[(0, 0)] = crate::Complex64::new(1.0, 0.0);
        let p = RiggedBlockPencil::new(
            HermitianMatrix::from_real_diagonal(&[2.0, 3.0]),
            a12,
            HermitianMatrix::from_real_diagonal(&[-1.0]),
            HermitianMatrix::identity(2),
            HermitianMatrix::identity(1),
        )
        .unwrap();
        assert_eq!(nu(&p, 0.0, &SolverConfig::default()).unwrap(), 0);
    }

    #[test]
    fn count_between_cases() {
        let p = decoupled(&[1.0, 1.0, 4.0], &[10.0]);
        let cfg = SolverConfig::default();
        assert_eq!(count_between(&p, 2.0, 3.0, &cfg, CountBy::Neg).unwrap(), 0);
        assert_eq!(count_between(&p, 0.0, 5.0, &cfg, CountBy::Neg).unwrap(), 3);
        assert_eq!(count_between(&p, 1.0, 4.0, &cfg, CountBy::Neg).unwrap(), 2);
        assert_eq!(count_between(&p, 1.0, 4.0, &cfg, CountBy::Pos).unwrap(), 1);
        assert!(matches!(
            count_between(&p, 5.0, 11.0, &cfg, CountBy::Neg),
            Err(Error::GapMismatch { .. })
        ));
    }

    #[test]
    fn nu_matches_dense_oracle_on_grids() {
        let mut rng = seeded(31);
        let cfg = SolverConfig::default();
        for _ in 0..30 {
            let p = random_pencil(&mut rng, 6, 6);
            let bound = p.spectral_bound().unwrap();
            for gap in p.gaps() {
                let lo = gap.lo.max(-bound);
                let hi = gap.hi.min(bound);
                if !(lo < hi) {
                    continue;
                }
                let base = nu(&p, lo, &cfg).unwrap();
                let dense = dense_spectrum(&p, (lo, hi)).unwrap();
                for k in 0..=20 {
                    let x = (lo + (hi - lo) * k as f64 / 20.0).min(hi);
                    let want: usize = dense
                        .iter()
                        .filter(|e| e.lambda < x && e.lambda >= lo)
                        .map(|e| e.multiplicity)
                        .sum();
                    // Skip samples that sit on top of an eigenvalue.
                    if dense.iter().any(|e| (e.lambda - x).abs() < 1e-8 * bound) {
                        continue;
                    }
                    assert_eq!(nu(&p, x, &cfg).unwrap(), base + want);
                }
            }
        }
    }

    #[test]
    fn nu_is_monotone_on_gaps() {
        let mut rng = seeded(32);
        let cfg = SolverConfig::default();
        for _ in 0..30 {
            let p = random_pencil(&mut rng, 7, 7);
            let bound = p.spectral_bound().unwrap();
            for gap in p.gaps() {
                let (lo, hi) = (gap.lo.max(-bound), gap.hi.min(bound));
                if !(lo < hi) {
                    continue;
                }
                let mut last = 0;
                for k in 0..=200 {
                    let x = (lo + (hi - lo) * k as f64 / 200.0).min(hi);
                    let v = nu(&p, x, &cfg).unwrap();
                    assert!(v >= last);
                    last = v;
                }
            }
        }
    }
}
