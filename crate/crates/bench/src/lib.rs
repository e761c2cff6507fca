//! Fixtures shared by the benchmarks.

use spectra_core::galerkin::{build_example_quartic, QUARTIC_SHIFTS};
use spectra_core::random::{random_hermitian, random_pencil_with_dims, seeded};
use spectra_core::{HermitianMatrix, RiggedBlockPencil};

pub const SEED: u64 = 7;

pub fn hermitian(n: usize) -> HermitianMatrix {
    random_hermitian(&mut seeded(SEED), n)
}

/// Random pencil of the given block sizes and a spectral parameter above the
/// lower-right spectrum.
pub fn pencil(n1: usize, n2: usize) -> (RiggedBlockPencil, f64) {
    let p = random_pencil_with_dims(&mut seeded(SEED), n1, n2);
    let lambda = p.t22_spectrum().last().copied().unwrap_or(0.0) + 0.5;
    (p, lambda)
}

pub fn quartic(n: usize) -> RiggedBlockPencil {
    build_example_quartic(n, QUARTIC_SHIFTS.0, QUARTIC_SHIFTS.1)
        .expect("quartic builder accepts N >= 2")
        .pencil
}
