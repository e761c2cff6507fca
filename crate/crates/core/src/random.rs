//! Seeded random matrices and pencils for tests, verification suites and benchmarks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hermat::{CMatrix, HermitianMatrix};
use crate::pencil::RiggedBlockPencil;

pub type TestRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry(rng: &mut TestRng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Entries uniform on the unit square `[-1, 1] + i[-1, 1]`.
pub fn random_complex(rng: &mut TestRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| entry(rng))
}

pub fn random_hermitian(rng: &mut TestRng, n: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrized(random_complex(rng, n, n)).expect("square")
}

/// `M* M + I`, a positive definite Gram matrix.
pub fn random_gram(rng: &mut TestRng, n: usize) -> HermitianMatrix {
    let m = random_complex(rng, n, n);
    HermitianMatrix::symmetrized(m.adjoint() * &m + CMatrix::identity(n, n)).expect("square")
}

/// Haar-like unitary from the QR factor of a random matrix.
pub fn random_unitary(rng: &mut TestRng, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    random_complex(rng, n, n).qr().q()
}

/// `U diag(spectrum) U*` for a random unitary `U`.
pub fn planted_hermitian(rng: &mut TestRng, spectrum: &[f64]) -> HermitianMatrix {
    let n = spectrum.len();
    let u = random_unitary(rng, n);
    let d = HermitianMatrix::from_real_diagonal(spectrum);
    HermitianMatrix::symmetrized(&u * d.as_matrix() * u.adjoint()).expect("square")
}

/// `U diag(σ) V` with `σ` log-uniform on `[1, max_cond]`, so `cond(C) ≤ max_cond`.
pub fn random_invertible(rng: &mut TestRng, n: usize, max_cond: f64) -> CMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let log_max = max_cond.ln();
    let mut s = CMatrix::zeros(n, n);
    for i in 0..n {
        let t: f64 = rng.random_range(0.0..=1.0);
        s[(i, i)] = Complex64::new((t * log_max).exp(), 0.0);
    }
    u * s * v
}

/// Random pencil with `1 ≤ n1 ≤ max_n1`, `0 ≤ n2 ≤ max_n2`, Hermitian diagonal
/// blocks and Grams `M* M + I`.
pub fn random_pencil(rng: &mut TestRng, max_n1: usize, max_n2: usize) -> RiggedBlockPencil {
    let n1 = rng.random_range(1..=max_n1);
    let n2 = rng.random_range(0..=max_n2);
    random_pencil_with_dims(rng, n1, n2)
}

pub fn random_pencil_with_dims(rng: &mut TestRng, n1: usize, n2: usize) -> RiggedBlockPencil {
    let a11 = random_hermitian(rng, n1);
    let a12 = random_complex(rng, n1, n2);
    let a22 = random_hermitian(rng, n2);
    let g1 = random_gram(rng, n1);
    let g2 = random_gram(rng, n2);
    RiggedBlockPencil::new(a11, a12, a22, g1, g2).expect("random Grams are positive definite")
}
