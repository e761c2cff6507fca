use super::{form_matrix, BasisKind, BasisSpec, Form};
use crate::hermat::{CMatrix, HermitianMatrix};
use crate::pencil::RiggedBlockPencil;
use crate::{Error, Result};

/// Default `(κ, τ)` for the quartic example.
pub const QUARTIC_SHIFTS: (f64, f64) = (0.0, 1.0);
/// Default `(κ, τ)` for the first-order periodic example.
pub const DIRAC_SHIFTS: (f64, f64) = (-1.0, 1.0);

/// A model pencil together with the shifts used for its D₁ Gram.
#[derive(Debug, Clone)]
pub struct ExamplePencil {
    pub pencil: RiggedBlockPencil,
    pub kappa: f64,
    pub tau: f64,
}

fn hermitian(m: CMatrix) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m)
}

/// `[[−d²/dx², −d²/dx²], [−d²/dx², 0]]` on clamped Hermite cubics ⊕
/// discontinuous linears. Equivalent on `ℝ ∖ {0}` to
/// `y⁗ − λy″ − λ²y = 0`, `y(0) = y′(0) = y(1) = y′(1) = 0`.
pub fn build_example_quartic(n: usize, kappa: f64, tau: f64) -> Result<ExamplePencil> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "quartic example needs N ≥ 2, got {n}"
        )));
    }
    let herm = BasisSpec::uniform(BasisKind::HermiteClamped, n)?;
    let disc = BasisSpec::uniform(BasisKind::P1Discontinuous, n)?;
    let a11 = hermitian(form_matrix(&herm, &herm, Form::Grad)?)?;
    let a21 = -form_matrix(&herm, &disc, Form::DdVsVal)?;
    let a22 = HermitianMatrix::zeros(disc.dim());
    let g1 = hermitian(form_matrix(&herm, &herm, Form::Mass)?)?;
    let g2 = hermitian(form_matrix(&disc, &disc, Form::Mass)?)?;
    let pencil = RiggedBlockPencil::new(a11, a21.adjoint(), a22, g1, g2)?
        .with_label(format!("quartic N={n}"));
    Ok(ExamplePencil { pencil, kappa, tau })
}

/// `[[i d/dx, −d/dx], [d/dx, 0]]` on periodic linears ⊕ piecewise constants.
/// Equivalent on `ℝ ∖ {0}` to `−y″ + iλy′ − λ²y = 0` with periodic conditions.
pub fn build_example_dirac(n: usize) -> Result<ExamplePencil> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "Dirac example needs N ≥ 3, got {n}"
        )));
    }
    let p1 = BasisSpec::uniform(BasisKind::P1Periodic, n)?;
    let p0 = BasisSpec::uniform(BasisKind::P0, n)?;
    let a11 = HermitianMatrix::symmetrized(form_matrix(&p1, &p1, Form::IDVsVal)?)?;
    let a21 = form_matrix(&p1, &p0, Form::DVsVal)?;
    let g1 = hermitian(form_matrix(&p1, &p1, Form::Mass)?)?;
    let g2 = hermitian(form_matrix(&p0, &p0, Form::Mass)?)?;
    let pencil = RiggedBlockPencil::new(a11, a21.adjoint(), HermitianMatrix::zeros(n), g1, g2)?
        .with_label(format!("dirac N={n}"));
    let (kappa, tau) = DIRAC_SHIFTS;
    Ok(ExamplePencil { pencil, kappa, tau })
}

/// Single block `−i d/dx` on periodic linears; exact spectrum `2πℤ`.
pub fn build_example_transport(n: usize) -> Result<ExamplePencil> {
    if n < 3 {
        return Err(Error::invalid(format!(
            "transport example needs N ≥ 3, got {n}"
        )));
    }
    let p1 = BasisSpec::uniform(BasisKind::P1Periodic, n)?;
    let a11 = HermitianMatrix::symmetrized(-form_matrix(&p1, &p1, Form::IDVsVal)?)?;
    let g1 = hermitian(form_matrix(&p1, &p1, Form::Mass)?)?;
    let pencil = RiggedBlockPencil::single_block(a11, g1)?.with_label(format!("transport N={n}"));
    let (kappa, tau) = pencil.default_shifts()?;
    Ok(ExamplePencil { pencil, kappa, tau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{cholesky, eigh_gen};
    use crate::oracle::{dense_spectrum, transport_exact};

    #[test]
    fn quartic_structure() {
        let ex = build_example_quartic(16, 0.0, 1.0).unwrap();
        let p = &ex.pencil;
        assert_eq!((p.n1(), p.n2()), (30, 32));
        assert!(p.t22_spectrum().iter().all(|&t| t == 0.0));
        let gaps = p.gaps();
        assert_eq!(gaps.len(), 2);
        assert_eq!(gaps[0].lo, f64::NEG_INFINITY);
        assert_eq!(gaps[1].hi, f64::INFINITY);
        assert!(gaps[0].hi < 0.0 && gaps[1].lo > 0.0);
        let g = p.d1_gram(ex.kappa, ex.tau).unwrap();
        cholesky(&g).unwrap();
    }

    #[test]
    fn dirac_structure() {
        let ex = build_example_dirac(12).unwrap();
        let p = &ex.pencil;
        assert_eq!(p.a11().defect(), 0.0);
        assert!(p.a11().diagonal().iter().all(|d| d.abs() < 1e-15));
        assert!(p.t22_spectrum().iter().all(|&t| t == 0.0));
        p.d1_gram(ex.kappa, ex.tau).unwrap();
        assert!(build_example_dirac(2).is_err());
    }

    #[test]
    fn transport_spectrum() {
        let ex = build_example_transport(256).unwrap();
        let p = &ex.pencil;
        assert_eq!(p.n2(), 0);
        let w = eigh_gen(p.a11(), p.g1(), false).unwrap().values;
        let nearest = |x: f64| {
            w.iter()
                .copied()
                .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
                .unwrap()
        };
        assert!(nearest(0.0).abs() < 1e-12);
        let two_pi = std::f64::consts::TAU;
        for x in [two_pi, -two_pi] {
            assert!((nearest(x) - x).abs() / two_pi < 1e-2);
        }
        let dense = dense_spectrum(p, (-7.0, 7.0)).unwrap();
        assert_eq!(dense.len(), transport_exact((-7.0, 7.0)).len());
    }
}
