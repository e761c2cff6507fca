use num_complex::Complex64;

use super::{build_example_transport, BasisKind, BasisSpec};
use crate::hermat::{ldl_factor, CMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Subintervals per element for the reference quadrature.
const SUBDIVISIONS: usize = 10;

const GAUSS_X: [f64; 5] = [
    0.046_910_077_030_668,
    0.230_765_344_947_158_45,
    0.5,
    0.769_234_655_052_841_6,
    0.953_089_922_969_332,
];
const GAUSS_W: [f64; 5] = [
    0.118_463_442_528_094_54,
    0.239_314_335_249_683_23,
    0.284_444_444_444_444_44,
    0.239_314_335_249_683_23,
    0.118_463_442_528_094_54,
];

/// Kernel of `(T − I)⁻¹` for `T = −i d/dx` with `y(0) = y(1)`:
/// `i e^{i(x−t)} / (1 − e^i)` for `x ≥ t`, `−i e^{i(x−t)} / (1 − e^{−i})` for `x < t`.
pub fn resolvent_kernel_value(x: f64, t: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let phase = (i * (x - t)).exp();
    if x >= t {
        i * phase / (1.0 - i.exp())
    } else {
        -i * phase / (1.0 - (-i).exp())
    }
}

/// Relative `G1`-norm error between the Galerkin solution of
/// `(A11 − G1)u = G1 f` and nodal values of `∫ K(x, t) f(t) dt`, where `f`
/// holds periodic P1 coefficients on `n` uniform elements.
pub fn resolvent_check_transport(n: usize, f: &[Complex64]) -> Result<f64> {
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            what: "right-hand side coefficients",
            expected: n,
            actual: f.len(),
        });
    }
    let ex = build_example_transport(n)?;
    let p = ex.pencil;
    let shifted = p.a11().shifted(1.0, p.g1())?;
    let fv = CMatrix::from_column_slice(n, 1, f);
    let rhs = p.g1().as_matrix() * &fv;
    let u = ldl_factor(&shifted, 0.0).solve_with(&rhs)?;

    let basis = BasisSpec::uniform(BasisKind::P1Periodic, n)?;
    let h = 1.0 / n as f64;
    let sub = h / SUBDIVISIONS as f64;
    // Quadrature points and weights for f_h(t) dt over [0, 1].
    let mut samples = Vec::with_capacity(n * SUBDIVISIONS * GAUSS_X.len());
    for e in 0..n {
        for s in 0..SUBDIVISIONS {
            let a = e as f64 * h + s as f64 * sub;
            for (xi, w) in GAUSS_X.iter().zip(GAUSS_W) {
                let t = a + sub * xi;
                samples.push((t, basis.evaluate(f, t) * (sub * w)));
            }
        }
    }
    let reference: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = i as f64 * h;
            samples
                .iter()
                .map(|&(t, fw)| resolvent_kernel_value(x, t) * fw)
                .sum()
        })
        .collect();
    let r = CMatrix::from_column_slice(n, 1, &reference);
    let diff = &u - &r;
    let g1: &HermitianMatrix = p.g1();
    let num = g1.quadratic_form(diff.as_slice());
    let den = g1.quadratic_form(r.as_slice());
    Ok((num.max(0.0) / den).sqrt())
}
