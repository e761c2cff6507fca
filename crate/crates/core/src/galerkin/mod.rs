//! One-dimensional Galerkin assembly on `[0, 1]`.
//!
//! All integrands are piecewise polynomials, so element integrals are computed
//! exactly from monomial coefficients on the reference element `ξ ∈ [0, 1]`.
//! Matrices are indexed `[test, trial]`: entry `(k, j)` is the form evaluated
//! on trial function `φ_j` and test function `ψ_k`.

mod examples;
mod resolvent;

pub use examples::{
    build_example_dirac, build_example_quartic, build_example_transport, ExamplePencil,
    DIRAC_SHIFTS, QUARTIC_SHIFTS,
};
pub use resolvent::{resolvent_check_transport, resolvent_kernel_value};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hermat::CMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a mesh needs at least one element"));
        }
        let mut nodes: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        nodes[n] = 1.0;
        Ok(Self { nodes })
    }

    /// Graded mesh from explicit nodes: `0 = x₀ < x₁ < … < x_N = 1`.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes[0] != 0.0 || *nodes.last().unwrap() != 1.0 {
            return Err(Error::invalid("mesh nodes must start at 0 and end at 1"));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("mesh nodes must be strictly increasing"));
        }
        Ok(Self { nodes })
    }

    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn width(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// C¹ cubics with `y(0) = y′(0) = y(1) = y′(1) = 0`, dimension `2(N − 1)`.
    HermiteClamped,
    /// Continuous piecewise linears with `y(0) = y(1)`, dimension `N`.
    P1Periodic,
    /// Piecewise linears without continuity, dimension `2N`.
    P1Discontinuous,
    /// Piecewise constants, dimension `N`.
    P0,
}

impl BasisKind {
    pub fn name(&self) -> &'static str {
        match self {
            BasisKind::HermiteClamped => "hermite_clamped",
            BasisKind::P1Periodic => "p1_periodic",
            BasisKind::P1Discontinuous => "p1_discontinuous",
            BasisKind::P0 => "p0",
        }
    }

    /// Highest derivative order that is square integrable.
    fn max_order(&self) -> usize {
        match self {
            BasisKind::HermiteClamped => 2,
            BasisKind::P1Periodic => 1,
            BasisKind::P1Discontinuous | BasisKind::P0 => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub mesh: Mesh1D,
}

/// Shape function restricted to one element: global index and physical
/// values as a polynomial in `ξ`.
struct LocalShape {
    dof: Option<usize>,
    poly: Vec<f64>,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, mesh: Mesh1D) -> Result<Self> {
        let n = mesh.elements();
        let min = match kind {
            BasisKind::HermiteClamped => 2,
            BasisKind::P1Periodic => 2,
            _ => 1,
        };
        if n < min {
            return Err(Error::invalid(format!(
                "{} needs at least {min} elements, got {n}",
                kind.name()
            )));
        }
        Ok(Self { kind, mesh })
    }

    pub fn uniform(kind: BasisKind, n: usize) -> Result<Self> {
        Self::new(kind, Mesh1D::uniform(n)?)
    }

    pub fn dim(&self) -> usize {
        let n = self.mesh.elements();
        match self.kind {
            BasisKind::HermiteClamped => 2 * (n - 1),
            BasisKind::P1Periodic | BasisKind::P0 => n,
            BasisKind::P1Discontinuous => 2 * n,
        }
    }

    fn local(&self, e: usize) -> Vec<LocalShape> {
        let n = self.mesh.elements();
        let h = self.mesh.width(e);
        match self.kind {
            BasisKind::HermiteClamped => {
                let value = |node: usize| (node > 0 && node < n).then(|| 2 * (node - 1));
                let slope = |node: usize| value(node).map(|d| d + 1);
                vec![
                    LocalShape {
                        dof: value(e),
                        poly: vec![1.0, 0.0, -3.0, 2.0],
                    },
                    LocalShape {
                        dof: slope(e),
                        poly: vec![0.0, h, -2.0 * h, h],
                    },
                    LocalShape {
                        dof: value(e + 1),
                        poly: vec![0.0, 0.0, 3.0, -2.0],
                    },
                    LocalShape {
                        dof: slope(e + 1),
                        poly: vec![0.0, 0.0, -h, h],
                    },
                ]
            }
            BasisKind::P1Periodic => vec![
                LocalShape {
                    dof: Some(e),
                    poly: vec![1.0, -1.0],
                },
                LocalShape {
                    dof: Some((e + 1) % n),
                    poly: vec![0.0, 1.0],
                },
            ],
            BasisKind::P1Discontinuous => vec![
                LocalShape {
                    dof: Some(2 * e),
                    poly: vec![1.0, -1.0],
                },
                LocalShape {
                    dof: Some(2 * e + 1),
                    poly: vec![0.0, 1.0],
                },
            ],
            BasisKind::P0 => vec![LocalShape {
                dof: Some(e),
                poly: vec![1.0],
            }],
        }
    }

    /// Value of `Σ c_j φ_j` at `x`.
    pub fn evaluate(&self, coeffs: &[Complex64], x: f64) -> Complex64 {
        let nodes = self.mesh.nodes();
        let e = nodes
            .partition_point(|&v| v <= x)
            .saturating_sub(1)
            .min(self.mesh.elements() - 1);
        let xi = (x - nodes[e]) / self.mesh.width(e);
        self.local(e)
            .iter()
            .filter_map(|s| s.dof.map(|d| coeffs[d] * poly_eval(&s.poly, xi)))
            .sum()
    }
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_deriv(p: &[f64], order: usize) -> Vec<f64> {
    let mut q = p.to_vec();
    for _ in 0..order {
        q = q
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
    }
    q
}

/// `∫₀¹ p(ξ) q(ξ) dξ`.
fn integrate_product(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            acc += a * b / (i + j + 1) as f64;
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// `∫ y z̄`
    Mass,
    /// `∫ y′ z̄′`
    Grad,
    /// `∫ y″ z̄`
    DdVsVal,
    /// `∫ y′ z̄`
    DVsVal,
    /// `∫ i y′ z̄`
    IDVsVal,
    /// `∫ y″ z̄″`
    DdVsDd,
}

impl Form {
    pub fn name(&self) -> &'static str {
        match self {
            Form::Mass => "mass",
            Form::Grad => "grad",
            Form::DdVsVal => "dd_vs_val",
            Form::DVsVal => "d_vs_val",
            Form::IDVsVal => "i_d_vs_val",
            Form::DdVsDd => "dd_vs_dd",
        }
    }

    /// Derivative orders on (trial, test).
    fn orders(&self) -> (usize, usize) {
        match self {
            Form::Mass => (0, 0),
            Form::Grad => (1, 1),
            Form::DdVsVal => (2, 0),
            Form::DVsVal | Form::IDVsVal => (1, 0),
            Form::DdVsDd => (2, 2),
        }
    }

    fn factor(&self) -> Complex64 {
        match self {
            Form::IDVsVal => Complex64::new(0.0, 1.0),
            _ => Complex64::new(1.0, 0.0),
        }
    }
}

/// Exact Galerkin matrix of `form`, shape `test.dim() × trial.dim()`.
pub fn form_matrix(trial: &BasisSpec, test: &BasisSpec, form: Form) -> Result<CMatrix> {
    let (p, q) = form.orders();
    for (basis, order) in [(trial, p), (test, q)] {
        if order > basis.kind.max_order() {
            return Err(Error::IncompatibleForm {
                form: form.name(),
                basis: basis.kind.name(),
            });
        }
    }
    if trial.mesh != test.mesh {
        return Err(Error::invalid(
            "trial and test bases live on different meshes",
        ));
    }
    let mesh = &trial.mesh;
    let factor = form.factor();
    let mut m = CMatrix::zeros(test.dim(), trial.dim());
    for e in 0..mesh.elements() {
        let h = mesh.width(e);
        // d/dx = h⁻¹ d/dξ and dx = h dξ.
        let scale = h.powi(1 - (p + q) as i32);
        let trial_shapes = trial.local(e);
        let test_shapes = test.local(e);
        for s in &trial_shapes {
            let Some(j) = s.dof else { continue };
            let ds = poly_deriv(&s.poly, p);
            for t in &test_shapes {
                let Some(k) = t.dof else { continue };
                let dt = poly_deriv(&t.poly, q);
                m[(k, j)] += factor * (scale * integrate_product(&ds, &dt));
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{cholesky, eigh_gen, max_abs, HermitianMatrix};
    use crate::oracle::clamped_beam_constant;

    fn herm(n: usize) -> BasisSpec {
        BasisSpec::uniform(BasisKind::HermiteClamped, n).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(herm(4).dim(), 6);
        assert_eq!(
            BasisSpec::uniform(BasisKind::P1Periodic, 4).unwrap().dim(),
            4
        );
        assert_eq!(
            BasisSpec::uniform(BasisKind::P1Discontinuous, 4)
                .unwrap()
                .dim(),
            8
        );
        assert_eq!(BasisSpec::uniform(BasisKind::P0, 4).unwrap().dim(), 4);
        assert!(BasisSpec::uniform(BasisKind::HermiteClamped, 1).is_err());
        assert!(Mesh1D::from_nodes(vec![0.0, 0.6, 0.5, 1.0]).is_err());
        assert!(Mesh1D::from_nodes(vec![0.0, 0.3, 1.0]).is_ok());
    }

    #[test]
    fn p0_mass_is_diagonal_h() {
        let b = BasisSpec::uniform(BasisKind::P0, 8).unwrap();
        let m = form_matrix(&b, &b, Form::Mass).unwrap();
        let want = CMatrix::identity(8, 8) * Complex64::new(1.0 / 8.0, 0.0);
        assert!(max_abs(&(m - want)) < 1e-16);
    }

    #[test]
    fn periodic_grad_kills_constants() {
        let b = BasisSpec::uniform(BasisKind::P1Periodic, 7).unwrap();
        let m = form_matrix(&b, &b, Form::Grad).unwrap();
        for k in 0..7 {
            let s: Complex64 = m.row(k).iter().sum();
            assert!(s.norm() < 1e-12);
        }
    }

    #[test]
    fn incompatible_forms() {
        let p0 = BasisSpec::uniform(BasisKind::P0, 4).unwrap();
        let p1 = BasisSpec::uniform(BasisKind::P1Periodic, 4).unwrap();
        let disc = BasisSpec::uniform(BasisKind::P1Discontinuous, 4).unwrap();
        assert!(matches!(
            form_matrix(&p1, &p1, Form::DdVsVal),
            Err(Error::IncompatibleForm {
                form: "dd_vs_val",
                basis: "p1_periodic"
            })
        ));
        assert!(form_matrix(&p0, &p0, Form::Grad).is_err());
        assert!(form_matrix(&disc, &p0, Form::DVsVal).is_err());
        assert!(form_matrix(&p1, &p0, Form::DVsVal).is_ok());
        let other = BasisSpec::uniform(BasisKind::P0, 5).unwrap();
        assert!(form_matrix(&p1, &other, Form::DVsVal).is_err());
    }

    /// Second derivatives of the four Hermite shapes on an element of width `h`.
    fn hermite_dd(xi: f64, h: f64) -> [f64; 4] {
        [
            (-6.0 + 12.0 * xi) / (h * h),
            (-4.0 + 6.0 * xi) / h,
            (6.0 - 12.0 * xi) / (h * h),
            (-2.0 + 6.0 * xi) / h,
        ]
    }

    #[test]
    fn patch_test_x_cubed() {
        // For clamped φ, ∫ (x³)″ φ″ = [6xφ′ − 6φ]₀¹ = 0. The interpolant of x³
        // is the interior part plus the right-boundary shapes with data (1, 3).
        let n = 8;
        let b = herm(n);
        let h = 1.0 / n as f64;
        let dd = form_matrix(&b, &b, Form::DdVsDd).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); b.dim()];
        for i in 1..n {
            let x = i as f64 * h;
            c[2 * (i - 1)] = Complex64::new(x.powi(3), 0.0);
            c[2 * (i - 1) + 1] = Complex64::new(3.0 * x * x, 0.0);
        }
        let mut got: Vec<f64> = (&dd * CMatrix::from_column_slice(b.dim(), 1, &c))
            .iter()
            .map(|z| z.re)
            .collect();
        let (gx, gw) = gauss5();
        for (xi, w) in gx.iter().zip(&gw) {
            let s = hermite_dd(*xi, h);
            let boundary = s[2] + 3.0 * s[3];
            got[2 * (n - 2)] += h * w * boundary * s[0];
            got[2 * (n - 2) + 1] += h * w * boundary * s[1];
        }
        let scale = dd.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        for (k, v) in got.iter().enumerate() {
            assert!(v.abs() <= 1e-12 * scale, "dof {k}: {v}");
        }
    }

    pub(crate) fn gauss5() -> ([f64; 5], [f64; 5]) {
        let x = [
            0.046_910_077_030_668,
            0.230_765_344_947_158_45,
            0.5,
            0.769_234_655_052_841_6,
            0.953_089_922_969_332,
        ];
        let w = [
            0.118_463_442_528_094_54,
            0.239_314_335_249_683_23,
            0.284_444_444_444_444_44,
            0.239_314_335_249_683_23,
            0.118_463_442_528_094_54,
        ];
        (x, w)
    }

    #[test]
    fn grams_are_positive_definite() {
        for kind in [
            BasisKind::HermiteClamped,
            BasisKind::P1Periodic,
            BasisKind::P1Discontinuous,
            BasisKind::P0,
        ] {
            let b = BasisSpec::uniform(kind, 9).unwrap();
            let m = HermitianMatrix::new(form_matrix(&b, &b, Form::Mass).unwrap()).unwrap();
            cholesky(&m).unwrap();
        }
    }

    #[test]
    fn clamped_beam_constant_converges() {
        let b = herm(64);
        let k = HermitianMatrix::new(form_matrix(&b, &b, Form::DdVsDd).unwrap()).unwrap();
        let m = HermitianMatrix::new(form_matrix(&b, &b, Form::Mass).unwrap()).unwrap();
        let w = eigh_gen(&k, &m, false).unwrap().values[0];
        let exact = clamped_beam_constant();
        assert!((w - exact).abs() / exact <= 1e-6, "{w} vs {exact}");
    }

    #[test]
    fn coupling_reproduces_second_derivative() {
        let n = 5;
        let h = 1.0 / n as f64;
        let b = herm(n);
        let disc = BasisSpec::uniform(BasisKind::P1Discontinuous, n).unwrap();
        let a = form_matrix(&b, &disc, Form::DdVsVal).unwrap();
        let y: Vec<Complex64> = (0..b.dim())
            .map(|i| Complex64::new(0.3 * i as f64 - 1.0, 0.1 * i as f64))
            .collect();
        let ay = &a * CMatrix::from_column_slice(b.dim(), 1, &y);
        let (gx, gw) = gauss5();
        for e in 0..n {
            let dofs = |node: usize| (node > 0 && node < n).then(|| 2 * (node - 1));
            let ids = [
                dofs(e),
                dofs(e).map(|d| d + 1),
                dofs(e + 1),
                dofs(e + 1).map(|d| d + 1),
            ];
            let ydd = |xi: f64| -> Complex64 {
                let s = hermite_dd(xi, h);
                ids.iter()
                    .zip(s)
                    .filter_map(|(d, v)| d.map(|d| y[d] * v))
                    .sum()
            };
            for (local, w_poly) in [(0, [1.0, -1.0]), (1, [0.0, 1.0])] {
                let mut want = Complex64::new(0.0, 0.0);
                for (xi, w) in gx.iter().zip(&gw) {
                    want += ydd(*xi) * (h * w * poly_eval(&w_poly, *xi));
                }
                assert!((ay[(2 * e + local, 0)] - want).norm() < 1e-12);
            }
        }
    }
}
