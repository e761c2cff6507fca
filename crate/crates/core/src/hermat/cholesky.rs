use num_complex::Complex64;

use super::{CMatrix, HermitianMatrix, ZERO};
use crate::{Error, Result};

/// Upper-triangular `R` with `A = R* R`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    r: CMatrix,
}

/// Cholesky factorization; fails at the first nonpositive pivot.
pub fn cholesky(a: &HermitianMatrix) -> Result<CholeskyFactor> {
    let n = a.dim();
    let m = a.as_matrix();
    let mut r = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= r[(k, j)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j });
        }
        let rjj = d.sqrt();
        r[(j, j)] = Complex64::new(rjj, 0.0);
        for i in (j + 1)..n {
            let mut s = m[(j, i)];
            for k in 0..j {
                s -= r[(k, j)].conj() * r[(k, i)];
            }
            r[(j, i)] = s / rjj;
        }
    }
    Ok(CholeskyFactor { r })
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn upper(&self) -> &CMatrix {
        &self.r
    }

    /// Smallest diagonal entry of `R`; its square bounds `λ_min(A)` from above.
    pub fn min_diagonal(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.r[(i, i)].re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `R X = B`.
    pub fn solve_upper(&self, b: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut x = b.clone();
        for c in 0..x.ncols() {
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in (i + 1)..n {
                    s -= self.r[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.r[(i, i)].re;
            }
        }
        x
    }

    /// Solves `R* X = B`.
    pub fn solve_upper_adjoint(&self, b: &CMatrix) -> CMatrix {
        let n = self.dim();
        let mut x = b.clone();
        for c in 0..x.ncols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    let rki = self.r[(k, i)];
                    if rki != ZERO {
                        s -= rki.conj() * x[(k, c)];
                    }
                }
                x[(i, c)] = s / self.r[(i, i)].re;
            }
        }
        x
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        self.solve_upper(&self.solve_upper_adjoint(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::max_abs;
    use crate::random::{random_complex, seeded};

    #[test]
    fn identity_factor_is_identity() {
        let f = cholesky(&HermitianMatrix::identity(4)).unwrap();
        assert_eq!(f.upper(), &CMatrix::identity(4, 4));
    }

    #[test]
    fn indefinite_fails_at_index_one() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            cholesky(&a),
            Err(Error::NotPositiveDefinite { index: 1 })
        ));
    }

    #[test]
    fn reconstructs_gram_matrices() {
        let mut rng = seeded(3);
        for n in [1, 3, 10, 30] {
            let m = random_complex(&mut rng, n, n);
            let a =
                HermitianMatrix::symmetrized(m.adjoint() * &m + CMatrix::identity(n, n)).unwrap();
            let f = cholesky(&a).unwrap();
            let r = f.upper();
            let res = max_abs(&(r.adjoint() * r - a.as_matrix()));
            assert!(res <= 1e-12 * a.max_abs(), "n={n} res={res}");

            let b = random_complex(&mut rng, n, 2);
            let x = f.solve(&b);
            assert!(
                max_abs(&(a.as_matrix() * &x - &b)) <= 1e-10 * a.max_abs() * max_abs(&x).max(1.0)
            );
        }
    }
}
