//! Eigenvalue localization for self-adjoint block operator pencils.
//!
//! A discretized block pencil
//!
//! ```text
//! T(λ) = [ A11 − λ G1    A12        ]
//!        [ A12*          A22 − λ G2 ]
//! ```
//!
//! is reduced, inside each spectral gap of the lower-right block, to its Schur
//! complement `S(λ) = A11 − λG1 − A12 (A22 − λG2)⁻¹ A12*`. The negative inertia
//! index `ν(λ) = ind S(λ)` is a nondecreasing step function whose jumps are the
//! pencil eigenvalues with their multiplicities, so eigenvalues are found by
//! bisection on inertia counts alone.
//!
//! Modules:
//! - [`hermat`]: dense Hermitian linear algebra (Bunch–Kaufman LDL*, Cholesky, eigensolvers).
//! - [`pencil`]: block pencils, gaps, Schur complements, operator-function pencils.
//! - [`solver`]: counting function, bisection localization, Λₙ curves, certificates.
//! - [`galerkin`]: 1D finite-element builders for the model problems.
//! - [`oracle`]: independent reference spectra (dense, shooting, closed form).
//! - [`verify`]: the verification suites run by tests and the CLI.

pub mod error;
pub mod galerkin;
pub mod hermat;
pub mod oracle;
pub mod pencil;
pub mod random;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use hermat::{CMatrix, HermitianMatrix, Inertia, LdlFactorization};
pub use pencil::{GapInterval, OperatorFunctionPencil, PencilBlocks, RiggedBlockPencil};
pub use solver::{EigenvalueHit, LambdaCurveTable, NegativeTypeCertificate, SolverConfig};

pub use num_complex::Complex64;
