//! Problem files.
//!
//! ```json
//! { "builtin": { "name": "quartic", "N": 64, "kappa": 0.0, "tau": 1.0 },
//!   "solver": { "lambda_tol_abs": 1e-12 } }
//! ```
//!
//! or an explicit pencil with every matrix given as rows of `[re, im]` pairs:
//!
//! ```json
//! { "explicit": { "n1": 1, "n2": 1,
//!     "A11": [[[2, 0]]], "A12": [[[1, 0]]], "A22": [[[0, 0]]],
//!     "G1": [[[1, 0]]], "G2": [[[1, 0]]] } }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use spectra_core::galerkin::{
    build_example_dirac, build_example_quartic, build_example_transport, QUARTIC_SHIFTS,
};
use spectra_core::{CMatrix, Complex64, HermitianMatrix, RiggedBlockPencil, SolverConfig};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinName {
    Quartic,
    Dirac,
    Transport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinSpec {
    pub name: BuiltinName,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
}

/// Rows of `[re, im]` pairs.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub n1: usize,
    pub n2: usize,
    #[serde(rename = "A11")]
    pub a11: MatrixRows,
    #[serde(rename = "A12")]
    pub a12: MatrixRows,
    #[serde(rename = "A22")]
    pub a22: MatrixRows,
    #[serde(rename = "G1")]
    pub g1: MatrixRows,
    #[serde(rename = "G2")]
    pub g2: MatrixRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Builtin(BuiltinSpec),
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(flatten)]
    pub problem: Problem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
}

/// A loaded problem: the pencil and the shifts used for Λ-curves.
#[derive(Debug, Clone)]
pub struct LoadedProblem {
    pub pencil: RiggedBlockPencil,
    pub kappa: f64,
    pub tau: f64,
}

fn matrix(name: &'static str, rows: &MatrixRows, r: usize, c: usize) -> Result<CMatrix, CliError> {
    // An r×0 block may be written as [] or as r empty rows.
    if c == 0 && rows.is_empty() {
        return Ok(CMatrix::zeros(r, 0));
    }
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(CliError::Spec(format!("{name} must be {r}x{c}")));
    }
    Ok(CMatrix::from_fn(r, c, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    }))
}

fn rows_of(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn hermitian(name: &'static str, rows: &MatrixRows, n: usize) -> Result<HermitianMatrix, CliError> {
    HermitianMatrix::new(matrix(name, rows, n, n)?)
        .map_err(|e| CliError::Spec(format!("{name}: {e}")))
}

impl ExplicitSpec {
    pub fn from_pencil(p: &RiggedBlockPencil) -> Self {
        Self {
            n1: p.n1(),
            n2: p.n2(),
            a11: rows_of(p.a11().as_matrix()),
            a12: rows_of(p.a12()),
            a22: rows_of(p.a22().as_matrix()),
            g1: rows_of(p.g1().as_matrix()),
            g2: rows_of(p.g2().as_matrix()),
        }
    }

    pub fn pencil(&self) -> Result<RiggedBlockPencil, CliError> {
        let (n1, n2) = (self.n1, self.n2);
        if n1 == 0 {
            return Err(CliError::Spec("n1 must be positive".into()));
        }
        Ok(RiggedBlockPencil::new(
            hermitian("A11", &self.a11, n1)?,
            matrix("A12", &self.a12, n1, n2)?,
            hermitian("A22", &self.a22, n2)?,
            hermitian("G1", &self.g1, n1)?,
            hermitian("G2", &self.g2, n2)?,
        )?)
    }
}

impl ProblemSpec {
    pub fn builtin(name: BuiltinName, n: usize) -> Self {
        Self {
            problem: Problem::Builtin(BuiltinSpec {
                name,
                n,
                kappa: None,
                tau: None,
            }),
            solver: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs serialize")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn build(&self) -> Result<LoadedProblem, CliError> {
        match &self.problem {
            Problem::Builtin(b) => {
                let ex = match b.name {
                    BuiltinName::Quartic => build_example_quartic(
                        b.n,
                        b.kappa.unwrap_or(QUARTIC_SHIFTS.0),
                        b.tau.unwrap_or(QUARTIC_SHIFTS.1),
                    )?,
                    BuiltinName::Dirac => build_example_dirac(b.n)?,
                    BuiltinName::Transport => build_example_transport(b.n)?,
                };
                Ok(LoadedProblem {
                    pencil: ex.pencil,
                    kappa: b.kappa.unwrap_or(ex.kappa),
                    tau: b.tau.unwrap_or(ex.tau),
                })
            }
            Problem::Explicit(e) => {
                let pencil = e.pencil()?;
                let (kappa, tau) = pencil.default_shifts()?;
                Ok(LoadedProblem { pencil, kappa, tau })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_with_overrides() {
        let s = ProblemSpec::from_json(
            r#"{"builtin": {"name": "quartic", "N": 8, "tau": 2.0}, "solver": {"zero_tol": 1e-12}}"#,
        )
        .unwrap();
        let Problem::Builtin(b) = &s.problem else {
            panic!("expected builtin");
        };
        assert_eq!(
            (b.name, b.n, b.kappa, b.tau),
            (BuiltinName::Quartic, 8, None, Some(2.0))
        );
        let cfg = s.solver.unwrap();
        assert_eq!(cfg.zero_tol, 1e-12);
        assert_eq!(cfg.lambda_tol_abs, SolverConfig::default().lambda_tol_abs);
        let loaded = s.build().unwrap();
        assert_eq!((loaded.kappa, loaded.tau), (0.0, 2.0));
    }

    #[test]
    fn explicit_pencil_and_empty_second_block() {
        let s = ProblemSpec::from_json(
            r#"{"explicit": {"n1": 1, "n2": 0, "A11": [[[2, 0]]], "A12": [],
                "A22": [], "G1": [[[1, 0]]], "G2": []}}"#,
        )
        .unwrap();
        let p = s.build().unwrap().pencil;
        assert_eq!((p.n1(), p.n2()), (1, 0));
    }

    #[test]
    fn rejects_bad_explicit_input() {
        let bad_dims = r#"{"explicit": {"n1": 2, "n2": 0, "A11": [[[2, 0]]], "A12": [],
            "A22": [], "G1": [[[1, 0]]], "G2": []}}"#;
        assert!(matches!(
            ProblemSpec::from_json(bad_dims).unwrap().build(),
            Err(CliError::Spec(_))
        ));
        let indefinite = r#"{"explicit": {"n1": 1, "n2": 0, "A11": [[[2, 0]]], "A12": [],
            "A22": [], "G1": [[[-1, 0]]], "G2": []}}"#;
        assert!(matches!(
            ProblemSpec::from_json(indefinite).unwrap().build(),
            Err(CliError::Core(
                spectra_core::Error::NotPositiveDefinite { .. }
            ))
        ));
        assert!(ProblemSpec::from_json(r#"{"builtin": {"name": "beam", "N": 4}}"#).is_err());
        assert!(ProblemSpec::from_json(
            r#"{"builtin": {"name": "dirac", "N": 4}, "solver": {"bogus": 1}}"#
        )
        .is_err());
    }

    #[test]
    fn explicit_roundtrip_through_pencil() {
        let p = ProblemSpec::builtin(BuiltinName::Dirac, 4)
            .build()
            .unwrap()
            .pencil;
        let e = ExplicitSpec::from_pencil(&p);
        let q = e.pencil().unwrap();
        assert_eq!(q.a12(), p.a12());
        assert_eq!(q.a11(), p.a11());
    }
}
