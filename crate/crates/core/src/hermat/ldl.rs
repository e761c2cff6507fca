use num_complex::Complex64;

use super::{CMatrix, HermitianMatrix, Inertia, ONE, ZERO};
use crate::{Error, Result};

/// Bunch–Kaufman pivot growth constant `(1 + √17)/8`.
const ALPHA: f64 = 0.640_388_203_202_208_4;

/// One diagonal block of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PivotBlock {
    One(f64),
    /// Hermitian 2×2 block `[[d11, conj(d21)], [d21, d22]]`.
    Two {
        d11: f64,
        d21: Complex64,
        d22: f64,
    },
}

impl PivotBlock {
    pub fn size(&self) -> usize {
        match self {
            PivotBlock::One(_) => 1,
            PivotBlock::Two { .. } => 2,
        }
    }

    fn max_abs(&self) -> f64 {
        match *self {
            PivotBlock::One(d) => d.abs(),
            PivotBlock::Two { d11, d21, d22 } => d11.abs().max(d22.abs()).max(d21.norm()),
        }
    }

    /// Eigenvalue magnitudes of the block, used for conditioning checks.
    fn magnitudes(&self) -> (f64, f64) {
        match *self {
            PivotBlock::One(d) => (d.abs(), d.abs()),
            PivotBlock::Two { d11, d21, d22 } => {
                let mean = 0.5 * (d11 + d22);
                let rad = (0.25 * (d11 - d22).powi(2) + d21.norm_sqr()).sqrt();
                let (a, b) = ((mean - rad).abs(), (mean + rad).abs());
                (a.min(b), a.max(b))
            }
        }
    }
}

/// `P A Pᵀ = L D L*` with `L` unit lower triangular and `D` block diagonal.
///
/// `permutation[i]` is the original index placed at position `i`, so
/// `A[p[i], p[j]] = (L D L*)[i, j]`.
#[derive(Debug, Clone)]
pub struct LdlFactorization {
    n: usize,
    permutation: Vec<usize>,
    /// Row-major unit lower factor (strict lower part meaningful).
    lower: Vec<Complex64>,
    blocks: Vec<PivotBlock>,
    inertia: Inertia,
    zero_tol_used: f64,
}

/// Factors `a` with Bunch–Kaufman partial pivoting and classifies the
/// block diagonal. 1×1 pivots `d` with `|d| ≤ t` count as zero, where
/// `t = zero_tol · max |D entry|`; 2×2 blocks are indefinite and count `(1, 0, 1)`.
pub fn ldl_factor(a: &HermitianMatrix, zero_tol: f64) -> LdlFactorization {
    let n = a.dim();
    let m = a.as_matrix();
    let mut w = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = m[(i, j)];
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::with_capacity(n);
    let mut col = vec![ZERO; n];
    let mut col2 = vec![ZERO; n];

    let mut k = 0;
    while k < n {
        let absakk = w[k * n + k].re.abs();
        let (imax, colmax) =
            ((k + 1)..n)
                .map(|i| (i, w[i * n + k].norm()))
                .fold(
                    (k, 0.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );

        let (kstep, kp) = if absakk.max(colmax) == 0.0 || absakk >= ALPHA * colmax {
            (1, k)
        } else {
            let rowmax = (k..n)
                .filter(|&j| j != imax)
                .map(|j| w[imax * n + j].norm())
                .fold(0.0f64, f64::max);
            if absakk * rowmax >= ALPHA * colmax * colmax {
                (1, k)
            } else if w[imax * n + imax].re.abs() >= ALPHA * rowmax {
                (1, imax)
            } else {
                (2, imax)
            }
        };

        let kk = k + kstep - 1;
        if kp != kk {
            symmetric_swap(&mut w, n, kk, kp);
            perm.swap(kk, kp);
        }

        if kstep == 1 {
            let d = w[k * n + k].re;
            blocks.push(PivotBlock::One(d));
            if d != 0.0 {
                let inv = 1.0 / d;
                for j in (k + 1)..n {
                    col[j] = w[j * n + k];
                }
                for i in (k + 1)..n {
                    let li = col[i] * inv;
                    if li == ZERO {
                        continue;
                    }
                    let row = &mut w[i * n + k + 1..i * n + n];
                    for (x, c) in row.iter_mut().zip(&col[k + 1..n]) {
                        *x -= li * c.conj();
                    }
                }
                for i in (k + 1)..n {
                    w[i * n + k] = col[i] * inv;
                }
            } else {
                // Zero column: nothing to eliminate.
                for i in (k + 1)..n {
                    w[i * n + k] = ZERO;
                }
            }
        } else {
            let d11 = w[k * n + k].re;
            let d21 = w[(k + 1) * n + k];
            let d22 = w[(k + 1) * n + k + 1].re;
            blocks.push(PivotBlock::Two { d11, d21, d22 });
            let det = d11 * d22 - d21.norm_sqr();
            let inv_det = 1.0 / det;
            for j in (k + 2)..n {
                col[j] = w[j * n + k];
                col2[j] = w[j * n + k + 1];
            }
            for i in (k + 2)..n {
                let (a, b) = (col[i], col2[i]);
                let l1 = (a * d22 - b * d21) * inv_det;
                let l2 = (b * d11 - a * d21.conj()) * inv_det;
                if l1 == ZERO && l2 == ZERO {
                    continue;
                }
                let row = &mut w[i * n + k + 2..i * n + n];
                for ((x, c1), c2) in row.iter_mut().zip(&col[k + 2..n]).zip(&col2[k + 2..n]) {
                    *x -= l1 * c1.conj() + l2 * c2.conj();
                }
                w[i * n + k] = l1;
                w[i * n + k + 1] = l2;
            }
            w[(k + 1) * n + k] = ZERO;
        }
        k += kstep;
    }

    let dmax = blocks
        .iter()
        .map(PivotBlock::max_abs)
        .fold(0.0f64, f64::max);
    let t = zero_tol * dmax;
    let mut inertia = Inertia::default();
    for b in &blocks {
        match *b {
            PivotBlock::One(d) if d < -t => inertia.n_neg += 1,
            PivotBlock::One(d) if d > t => inertia.n_pos += 1,
            PivotBlock::One(_) => inertia.n_zero += 1,
            PivotBlock::Two { .. } => {
                inertia.n_neg += 1;
                inertia.n_pos += 1;
            }
        }
    }

    LdlFactorization {
        n,
        permutation: perm,
        lower: w,
        blocks,
        inertia,
        zero_tol_used: t,
    }
}

/// Inertia of `a` via [`ldl_factor`].
pub fn inertia_of(a: &HermitianMatrix, zero_tol: f64) -> Inertia {
    ldl_factor(a, zero_tol).inertia
}

/// Swaps rows and columns `p` and `q` of a full row-major Hermitian buffer.
fn symmetric_swap(w: &mut [Complex64], n: usize, p: usize, q: usize) {
    for j in 0..n {
        w.swap(p * n + j, q * n + j);
    }
    for i in 0..n {
        w.swap(i * n + p, i * n + q);
    }
}

impl LdlFactorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn block_diag(&self) -> &[PivotBlock] {
        &self.blocks
    }

    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    /// Absolute threshold `t` that separated zero from nonzero 1×1 pivots.
    pub fn zero_tol_used(&self) -> f64 {
        self.zero_tol_used
    }

    /// Ratio of the smallest to the largest pivot magnitude (2×2 blocks
    /// contribute their eigenvalue magnitudes). `1` for an empty factor.
    pub fn pivot_ratio(&self) -> f64 {
        let (lo, hi) = self
            .blocks
            .iter()
            .map(PivotBlock::magnitudes)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), (a, b)| {
                (lo.min(a), hi.max(b))
            });
        if self.blocks.is_empty() {
            1.0
        } else if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    fn l(&self, i: usize, j: usize) -> Complex64 {
        if i == j {
            ONE
        } else if i > j {
            self.lower[i * self.n + j]
        } else {
            ZERO
        }
    }

    pub fn unit_lower(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |i, j| self.l(i, j))
    }

    /// Dense block diagonal `D`.
    pub fn d_matrix(&self) -> CMatrix {
        let mut d = CMatrix::zeros(self.n, self.n);
        let mut k = 0;
        for b in &self.blocks {
            match *b {
                PivotBlock::One(v) => d[(k, k)] = Complex64::new(v, 0.0),
                PivotBlock::Two { d11, d21, d22 } => {
                    d[(k, k)] = Complex64::new(d11, 0.0);
                    d[(k + 1, k)] = d21;
                    d[(k, k + 1)] = d21.conj();
                    d[(k + 1, k + 1)] = Complex64::new(d22, 0.0);
                }
            }
            k += b.size();
        }
        d
    }

    /// `Pᵀ L D L* P`, which should reproduce the factored matrix.
    pub fn reconstruct(&self) -> CMatrix {
        let l = self.unit_lower();
        let ldl = &l * self.d_matrix() * l.adjoint();
        let mut out = CMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(self.permutation[i], self.permutation[j])] = ldl[(i, j)];
            }
        }
        out
    }

    /// Solves `A X = B`.
    pub fn solve_with(&self, b: &CMatrix) -> Result<CMatrix> {
        let n = self.n;
        if b.nrows() != n {
            return Err(Error::DimensionMismatch {
                what: "right-hand side rows",
                expected: n,
                actual: b.nrows(),
            });
        }
        if self.inertia.n_zero > 0 || self.blocks.contains(&PivotBlock::One(0.0)) {
            return Err(Error::SingularFactor);
        }
        let k = b.ncols();
        // Row-major work array, rows permuted.
        let mut x = vec![ZERO; n * k];
        for i in 0..n {
            let src = self.permutation[i];
            for c in 0..k {
                x[i * k + c] = b[(src, c)];
            }
        }

        // L z = y
        for i in 1..n {
            let (done, rest) = x.split_at_mut(i * k);
            let xi = &mut rest[..k];
            for j in 0..i {
                let lij = self.lower[i * n + j];
                if lij == ZERO {
                    continue;
                }
                let xj = &done[j * k..(j + 1) * k];
                for (a, b) in xi.iter_mut().zip(xj) {
                    *a -= lij * b;
                }
            }
        }

        // D w = z
        let mut r = 0;
        for blk in &self.blocks {
            match *blk {
                PivotBlock::One(d) => {
                    let inv = 1.0 / d;
                    for v in &mut x[r * k..(r + 1) * k] {
                        *v *= inv;
                    }
                }
                PivotBlock::Two { d11, d21, d22 } => {
                    let inv_det = 1.0 / (d11 * d22 - d21.norm_sqr());
                    for c in 0..k {
                        let z1 = x[r * k + c];
                        let z2 = x[(r + 1) * k + c];
                        x[r * k + c] = (z1 * d22 - z2 * d21.conj()) * inv_det;
                        x[(r + 1) * k + c] = (z2 * d11 - z1 * d21) * inv_det;
                    }
                }
            }
            r += blk.size();
        }

        // L* v = w, sweeping rows of L from the bottom.
        for j in (1..n).rev() {
            let (head, tail) = x.split_at_mut(j * k);
            let xj = &tail[..k];
            for i in 0..j {
                let lji = self.lower[j * n + i];
                if lji == ZERO {
                    continue;
                }
                let lc = lji.conj();
                for (a, b) in head[i * k..(i + 1) * k].iter_mut().zip(xj) {
                    *a -= lc * b;
                }
            }
        }

        let mut out = CMatrix::zeros(n, k);
        for i in 0..n {
            let dst = self.permutation[i];
            for c in 0..k {
                out[(dst, c)] = x[i * k + c];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{default_zero_tol, max_abs};
    use crate::random::{planted_hermitian, random_hermitian, seeded};

    fn rel_reconstruction_error(a: &HermitianMatrix, f: &LdlFactorization) -> f64 {
        let diff = f.reconstruct() - a.as_matrix();
        max_abs(&diff) / a.max_abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn diagonal_inertia() {
        let a = HermitianMatrix::from_real_diagonal(&[-1.0, 0.0, 2.0]);
        assert_eq!(inertia_of(&a, 1e-10), Inertia::new(1, 1, 1));
    }

    #[test]
    fn zero_matrix_inertia() {
        let a = HermitianMatrix::zeros(3);
        let f = ldl_factor(&a, 1e-10);
        assert_eq!(f.inertia(), Inertia::new(0, 3, 0));
        assert_eq!(f.zero_tol_used(), 0.0);
    }

    #[test]
    fn identity_inertia() {
        assert_eq!(
            inertia_of(&HermitianMatrix::identity(4), 1e-10),
            Inertia::new(0, 0, 4)
        );
    }

    #[test]
    fn hilbert_matrix_is_positive() {
        let rows: Vec<Vec<f64>> = (1..=5)
            .map(|i| (1..=5).map(|j| 1.0 / (i + j - 1) as f64).collect())
            .collect();
        let h = HermitianMatrix::from_real_rows(&rows).unwrap();
        // Cholesky is the independent positivity witness.
        assert!(crate::hermat::cholesky(&h).is_ok());
        assert_eq!(inertia_of(&h, default_zero_tol(5)), Inertia::new(0, 0, 5));
    }

    #[test]
    fn zero_diagonal_forces_two_by_two_pivot() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let a = HermitianMatrix::from_real_rows(&rows).unwrap();
        let f = ldl_factor(&a, 1e-10);
        assert_eq!(f.block_diag().len(), 1);
        assert_eq!(f.inertia(), Inertia::new(1, 0, 1));
        assert!(rel_reconstruction_error(&a, &f) < 1e-15);
    }

    #[test]
    fn planted_spectrum_negative_count() {
        let mut rng = seeded(11);
        let spectrum = [-3.0, -1.0, -1e-14, 2.0, 5.0, 0.5, 7.0, 1.0];
        let a = planted_hermitian(&mut rng, &spectrum);
        let tol = 1e-10;
        let f = ldl_factor(&a, tol);
        // The planted -1e-14 sits far inside the zero band.
        let t = f.zero_tol_used();
        let expected_neg = spectrum.iter().filter(|&&x| x < -t).count();
        assert_eq!(f.inertia().n_neg, expected_neg);
        assert_eq!(f.inertia().n_neg, 2);
        assert_eq!(f.inertia().n_zero, 1);
        assert_eq!(f.inertia().n_pos, 5);
        assert!(rel_reconstruction_error(&a, &f) < 1e-10);
    }

    #[test]
    fn two_by_two_blocks_are_indefinite() {
        let mut rng = seeded(5);
        for n in [2, 5, 9, 16, 33] {
            let a = random_hermitian(&mut rng, n);
            let f = ldl_factor(&a, 0.0);
            for b in f.block_diag() {
                if let PivotBlock::Two { d11, d21, d22 } = *b {
                    assert!(d11 * d22 - d21.norm_sqr() < 0.0);
                }
            }
        }
    }

    #[test]
    fn solve_scaled_identity() {
        let a = HermitianMatrix::identity(3)
            .combine(2.0, &HermitianMatrix::zeros(3), 0.0)
            .unwrap();
        let f = ldl_factor(&a, 1e-10);
        let mut b = CMatrix::zeros(3, 1);
        b[(0, 0)] = ONE;
        let x = f.solve_with(&b).unwrap();
        assert_eq!(x[(0, 0)], Complex64::new(0.5, 0.0));
        assert_eq!(x[(1, 0)], ZERO);
    }

    #[test]
    fn solve_residual_random() {
        let mut rng = seeded(21);
        for n in [1, 4, 12, 40] {
            let a = random_hermitian(&mut rng, n);
            let b = crate::random::random_complex(&mut rng, n, 3);
            let f = ldl_factor(&a, 0.0);
            let x = f.solve_with(&b).unwrap();
            let res = max_abs(&(a.as_matrix() * &x - &b));
            let scale = a.as_matrix().norm() * x.norm();
            assert!(res <= 1e-9 * scale, "n={n} res={res} scale={scale}");
        }
    }

    #[test]
    fn solve_rejects_singular_factor() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let f = ldl_factor(&a, 1e-10);
        assert!(matches!(
            f.solve_with(&CMatrix::zeros(2, 1)),
            Err(Error::SingularFactor)
        ));
    }

    #[test]
    fn pivot_ratio_flags_near_singular() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 1e-15]);
        assert!(ldl_factor(&a, 0.0).pivot_ratio() < 1e-13);
        assert_eq!(
            ldl_factor(&HermitianMatrix::zeros(0), 0.0).pivot_ratio(),
            1.0
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn reconstruction(seed in any::<u64>(), n in 0usize..=64) {
                let mut rng = seeded(seed);
                let a = random_hermitian(&mut rng, n);
                let f = ldl_factor(&a, default_zero_tol(n));
                prop_assert!(rel_reconstruction_error(&a, &f) <= 1e-10);
                prop_assert_eq!(f.inertia().dim(), n);
            }

            #[test]
            fn reconstruction_with_exact_zero_rows(seed in any::<u64>(), n in 2usize..=20) {
                let mut rng = seeded(seed);
                let mut m = random_hermitian(&mut rng, n).into_matrix();
                for j in 0..n {
                    m[(0, j)] = ZERO;
                    m[(j, 0)] = ZERO;
                }
                let a = HermitianMatrix::new(m).unwrap();
                let f = ldl_factor(&a, 0.0);
                prop_assert!(rel_reconstruction_error(&a, &f) <= 1e-10);
                prop_assert!(f.inertia().n_zero >= 1);
            }

            #[test]
            fn inertia_matches_eigenvalue_signs(seed in any::<u64>(), n in 1usize..=24) {
                let mut rng = seeded(seed);
                let a = random_hermitian(&mut rng, n);
                let zero_tol = default_zero_tol(n);
                let f = ldl_factor(&a, zero_tol);
                let t = f.zero_tol_used();
                let w = crate::hermat::eigh(&a).unwrap().values;
                // Only compare when no eigenvalue is near the threshold.
                prop_assume!(w.iter().all(|x| (x + t).abs() > 2.0 * t && (x - t).abs() > 2.0 * t));
                let neg = w.iter().filter(|&&x| x < -t).count();
                prop_assert_eq!(f.inertia().n_neg, neg);
            }
        }
    }
}
