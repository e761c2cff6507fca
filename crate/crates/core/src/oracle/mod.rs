//! Reference spectra that do not go through the Schur complement: dense
//! generalized eigenvalues, RK4 shooting for the clamped quartic problem and
//! closed forms for the periodic first-order problems.

mod shooting;

pub use shooting::{
    quartic_char_roots, quartic_char_roots_with, quartic_determinant, RootReport, ShootingRoot,
};

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::hermat::eigh_gen;
use crate::pencil::RiggedBlockPencil;
use crate::{Error, Result};

/// Relative clustering tolerance of [`dense_spectrum`].
pub const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseEigenvalue {
    pub lambda: f64,
    pub multiplicity: usize,
}

/// Eigenvalues of `T(0) x = λ diag(G1, G2) x` in `[lo, hi)`, clustered at
/// `CLUSTER_TOL · max(1, max |λ|)`.
pub fn dense_spectrum(p: &RiggedBlockPencil, interval: (f64, f64)) -> Result<Vec<DenseEigenvalue>> {
    let (lo, hi) = interval;
    let w = eigh_gen(&p.assemble_full(0.0), &p.full_gram(), false)?.values;
    let scale = w.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok(cluster(&w, CLUSTER_TOL * scale)
        .into_iter()
        .filter(|e| lo <= e.lambda && e.lambda < hi)
        .collect())
}

/// Groups ascending values whose consecutive gaps are at most `tol`.
pub fn cluster(sorted: &[f64], tol: f64) -> Vec<DenseEigenvalue> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &v in sorted {
        match out.last_mut() {
            Some((sum, count)) if v - last <= tol => {
                *sum += v;
                *count += 1;
            }
            _ => out.push((v, 1)),
        }
        last = v;
    }
    out.into_iter()
        .map(|(sum, multiplicity)| DenseEigenvalue {
            lambda: sum / multiplicity as f64,
            multiplicity,
        })
        .collect()
}

fn reject_zero(interval: (f64, f64), what: &str) -> Result<()> {
    if interval.0 <= 0.0 && 0.0 <= interval.1 {
        return Err(Error::invalid(format!(
            "{what}: interval [{}, {}] contains 0",
            interval.0, interval.1
        )));
    }
    Ok(())
}

/// `{πn(−1 ± √5) : n ∈ ℤ ∖ {0}}` inside the open interval, ascending.
/// These are the roots of `λ² + 2πnλ − 4π²n² = 0`.
pub fn dirac_exact(interval: (f64, f64)) -> Result<Vec<f64>> {
    reject_zero(interval, "dirac_exact")?;
    let (lo, hi) = interval;
    let s5 = 5f64.sqrt();
    let reach = lo.abs().max(hi.abs());
    let nmax = (reach / (PI * (s5 - 1.0))).ceil() as i64 + 1;
    let mut out: Vec<f64> = (-nmax..=nmax)
        .filter(|&n| n != 0)
        .flat_map(|n| {
            let n = n as f64;
            [PI * n * (s5 - 1.0), -PI * n * (1.0 + s5)]
        })
        .filter(|&l| lo < l && l < hi)
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// `λ² + 2πnλ − 4π²n²`, the characteristic polynomial of `e^{2πinx}`.
pub fn dirac_characteristic(lambda: f64, n: i64) -> f64 {
    let k = TAU * n as f64;
    lambda * lambda + k * lambda - k * k
}

/// `2πℤ` inside the open interval, ascending.
pub fn transport_exact(interval: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = interval;
    let first = (lo / TAU).floor() as i64;
    let last = (hi / TAU).ceil() as i64;
    (first..=last)
        .map(|n| TAU * n as f64)
        .filter(|&l| lo < l && l < hi)
        .collect()
}

/// Smallest `κ = k⁴` with `cos k · cosh k = 1`, `k > 0`: the first
/// eigenvalue of `y⁗ = κy` with clamped ends.
pub fn clamped_beam_constant() -> f64 {
    let g = |k: f64| k.cos() * k.cosh() - 1.0;
    let (mut a, mut b) = (4.0f64, 5.0f64);
    let ga = g(a);
    while b - a > 1e-15 * b {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (g(m) > 0.0) == (ga > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    (0.5 * (a + b)).powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{CMatrix, HermitianMatrix};
    use crate::random::{random_pencil, seeded};
    use crate::solver::{count_between, CountBy, SolverConfig};

    #[test]
    fn dense_decoupled() {
        let p = RiggedBlockPencil::new(
            HermitianMatrix::from_real_diagonal(&[1.0, 1.0, 4.0]),
            CMatrix::zeros(3, 1),
            HermitianMatrix::from_real_diagonal(&[10.0]),
            HermitianMatrix::identity(3),
            HermitianMatrix::identity(1),
        )
        .unwrap();
        let d = dense_spectrum(&p, (0.0, 20.0)).unwrap();
        let want = [(1.0, 2), (4.0, 1), (10.0, 1)];
        assert_eq!(d.len(), 3);
        for (e, (l, m)) in d.iter().zip(want) {
            assert!((e.lambda - l).abs() < 1e-14);
            assert_eq!(e.multiplicity, m);
        }
        assert_eq!(dense_spectrum(&p, (1.5, 9.0)).unwrap().len(), 1);
    }

    #[test]
    fn dense_totals_equal_inertia_differences() {
        let mut rng = seeded(71);
        let cfg = SolverConfig::default();
        for _ in 0..20 {
            let p = random_pencil(&mut rng, 6, 5);
            let b = p.spectral_bound().unwrap();
            for gap in p.gaps() {
                let (lo, hi) = (gap.lo.max(-b), gap.hi.min(b));
                if lo >= hi {
                    continue;
                }
                let mid = 0.5 * (lo + hi);
                let total: usize = dense_spectrum(&p, (lo, mid))
                    .unwrap()
                    .iter()
                    .map(|e| e.multiplicity)
                    .sum();
                assert_eq!(
                    total,
                    count_between(&p, lo, mid, &cfg, CountBy::Neg).unwrap()
                );
            }
        }
    }

    #[test]
    fn dirac_values() {
        let w = dirac_exact((1.0, 12.0)).unwrap();
        let s5 = 5f64.sqrt();
        assert!((w[0] - PI * (s5 - 1.0)).abs() < 1e-14);
        assert!((w[0] - 3.8832).abs() < 1e-4);
        assert!(w.iter().any(|&l| (l - PI * (1.0 + s5)).abs() < 1e-14));
        assert!(w.iter().any(|&l| (l - 10.1664).abs() < 1e-4));
        let neg = dirac_exact((-12.0, -1.0)).unwrap();
        let mirrored: Vec<f64> = w.iter().rev().map(|l| -l).collect();
        assert_eq!(neg.len(), mirrored.len());
        for (a, b) in neg.iter().zip(&mirrored) {
            assert!((a - b).abs() < 1e-12);
        }
        for n in 1..4i64 {
            for l in [PI * n as f64 * (s5 - 1.0), -PI * n as f64 * (1.0 + s5)] {
                assert!(dirac_characteristic(l, n).abs() <= 1e-14 * l * l);
            }
        }
        assert!(dirac_exact((-1.0, 1.0)).is_err());
    }

    #[test]
    fn transport_values() {
        assert_eq!(transport_exact((-1.0, 1.0)), vec![0.0]);
        let w = transport_exact((1.0, 13.0));
        assert_eq!(w, vec![TAU, 2.0 * TAU]);
        let many = transport_exact((-30.0, 30.0));
        assert!(many.windows(2).all(|p| (p[1] - p[0] - TAU).abs() < 1e-12));
    }

    #[test]
    fn beam_constant() {
        let k = clamped_beam_constant();
        assert!((k - 500.5639).abs() < 1e-4);
        let r = k.powf(0.25);
        assert!((r.cos() * r.cosh() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn clustering() {
        let c = cluster(&[1.0, 1.0 + 1e-12, 2.0, 3.0, 3.0], 1e-9);
        assert_eq!(
            c.iter().map(|e| e.multiplicity).collect::<Vec<_>>(),
            vec![2, 1, 2]
        );
    }
}
