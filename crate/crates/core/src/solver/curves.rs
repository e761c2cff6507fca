use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SolverConfig;
use crate::hermat::{eigh_gen, inertia_of};
use crate::pencil::RiggedBlockPencil;
use crate::{Error, Result};

/// Capped min-max values `Λₙ(λ) = min(ε, μₙ(λ))`, where `μ₀ ≤ μ₁ ≤ …` are the
/// eigenvalues of `S(λ)` relative to the D₁ Gram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaCurveTable {
    pub grid: Vec<f64>,
    pub epsilon: f64,
    /// `curves[n][i] = Λₙ(grid[i])`.
    pub curves: Vec<Vec<f64>>,
    /// Number of negative `μₙ(grid[i])` over all `n`.
    pub negative_counts: Vec<usize>,
    /// `ν(grid[i])` from the inertia of `S`.
    pub nu: Vec<usize>,
}

impl LambdaCurveTable {
    /// `Λₙ` at every grid point, row by row.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.curves.iter().map(|c| c[i]).collect()
    }
}

/// Tabulates the first `m` curves on `grid`, which must be ascending and lie in one gap.
pub fn lambda_curves(
    p: &RiggedBlockPencil,
    kappa: f64,
    tau: f64,
    grid: &[f64],
    m: usize,
    cfg: &SolverConfig,
) -> Result<LambdaCurveTable> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::invalid("empty grid"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("grid must be strictly ascending"));
    }
    if m > p.n1() {
        return Err(Error::invalid(format!(
            "{m} curves requested but S(λ) has dimension {}",
            p.n1()
        )));
    }
    let first = p.gap(grid[0])?;
    let last = p.gap(grid[grid.len() - 1])?;
    if first.index != last.index {
        return Err(Error::GapMismatch {
            lo: grid[0],
            hi: grid[grid.len() - 1],
        });
    }
    let gram = p.d1_gram(kappa, tau)?;
    let point = |&lambda: &f64| -> Result<(Vec<f64>, usize, usize)> {
        let s = p.schur(lambda)?;
        let mu = eigh_gen(&s, &gram, false)?.values;
        let negative = mu.iter().filter(|&&v| v < 0.0).count();
        let nu = inertia_of(&s, cfg.zero_tol).n_neg;
        Ok((mu, negative, nu))
    };
    let rows: Vec<(Vec<f64>, usize, usize)> = if cfg.parallel {
        grid.par_iter().map(point).collect::<Result<_>>()?
    } else {
        grid.iter().map(point).collect::<Result<_>>()?
    };
    let eps = cfg.epsilon_cap;
    let curves = (0..m)
        .map(|n| rows.iter().map(|(mu, _, _)| mu[n].min(eps)).collect())
        .collect();
    Ok(LambdaCurveTable {
        grid: grid.to_vec(),
        epsilon: eps,
        curves,
        negative_counts: rows.iter().map(|r| r.1).collect(),
        nu: rows.iter().map(|r| r.2).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::HermitianMatrix;
    use crate::random::{random_pencil, seeded};
    use crate::solver::locate;

    #[test]
    fn scalar_case() {
        let p = RiggedBlockPencil::single_block(
            HermitianMatrix::from_real_diagonal(&[1.0]),
            HermitianMatrix::identity(1),
        )
        .unwrap();
        let grid = [-3.0, 0.0, 0.5, 1.5, 4.0];
        // κ = 0 makes the D₁ Gram equal to A11 = I.
        let t = lambda_curves(&p, 0.0, 1.0, &grid, 1, &SolverConfig::default()).unwrap();
        for (i, &l) in grid.iter().enumerate() {
            assert!((t.curves[0][i] - (1.0 - l).min(1.0)).abs() < 1e-14);
        }
        assert_eq!(t.nu, vec![0, 0, 0, 1, 1]);
        assert_eq!(t.negative_counts, t.nu);
    }

    #[test]
    fn counts_agree_and_values_capped() {
        let mut rng = seeded(61);
        let cfg = SolverConfig::default();
        for _ in 0..15 {
            let p = random_pencil(&mut rng, 6, 5);
            let (kappa, tau) = p.default_shifts().unwrap();
            let gap = *p.gaps().last().unwrap();
            let hi = p.spectral_bound().unwrap();
            let lo = gap.lo.max(-hi);
            if lo >= hi {
                continue;
            }
            let grid: Vec<f64> = (0..=40)
                .map(|i| (lo + (hi - lo) * i as f64 / 40.0).min(hi))
                .collect();
            let t = lambda_curves(&p, kappa, tau, &grid, p.n1(), &cfg).unwrap();
            assert_eq!(t.negative_counts, t.nu);
            assert!(t.curves.iter().flatten().all(|&v| v <= cfg.epsilon_cap));
            let below: Vec<usize> = (0..grid.len())
                .map(|i| t.row(i).iter().filter(|&&v| v < 0.0).count())
                .collect();
            assert_eq!(below, t.nu);

            // Each located eigenvalue sits where the negative count steps up.
            let hits = locate(&p, lo, hi, &cfg).unwrap();
            for h in hits {
                let i = grid.partition_point(|&g| g <= h.lambda);
                if i == 0 || i == grid.len() {
                    continue;
                }
                assert!(t.nu[i] >= t.nu[i - 1] + h.multiplicity);
            }
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let p = RiggedBlockPencil::new(
            HermitianMatrix::identity(1),
            crate::hermat::CMatrix::zeros(1, 1),
            HermitianMatrix::zeros(1),
            HermitianMatrix::identity(1),
            HermitianMatrix::identity(1),
        )
        .unwrap();
        let cfg = SolverConfig::default();
        assert!(matches!(
            lambda_curves(&p, 0.0, 1.0, &[-1.0, 1.0], 1, &cfg),
            Err(Error::GapMismatch { .. })
        ));
        assert!(lambda_curves(&p, 0.0, 1.0, &[1.0, 0.5], 1, &cfg).is_err());
        assert!(lambda_curves(&p, 0.0, 1.0, &[1.0], 2, &cfg).is_err());
        assert!(matches!(
            lambda_curves(&p, 2.0, 1.0, &[1.0], 1, &cfg),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
