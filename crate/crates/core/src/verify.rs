//! Verification suites shared by the acceptance tests and the CLI.
//!
//! Each suite returns a list of [`Check`]s tagged with the acceptance
//! criterion they belong to. A criterion passes when all of its checks pass.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::galerkin::{
    build_example_dirac, build_example_quartic, build_example_transport, resolvent_check_transport,
    QUARTIC_SHIFTS,
};
use crate::hermat::{eigh, inertia_of, CMatrix, HermitianMatrix};
use crate::oracle::{dense_spectrum, dirac_exact, quartic_char_roots};
use crate::pencil::{OperatorFunctionPencil, PencilBlocks, RiggedBlockPencil};
use crate::random::{random_complex, random_hermitian, random_invertible, random_pencil, seeded};
use crate::solver::{
    hit_kernel, lambda_curves, locate, locate_general, nu, nu_general, EigenvalueHit, SolverConfig,
};
use crate::{Error, Result};

/// Default seed of the random suite.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(criterion: u8, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            relation: Relation::AtMost,
            threshold,
            passed: measured <= threshold,
        }
    }

    fn at_least(criterion: u8, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            relation: Relation::AtLeast,
            threshold,
            passed: measured >= threshold,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        write!(
            f,
            "[{}] criterion {:>2} {}: {:.3e} {op} {:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.measured,
            self.threshold
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Random,
    Quartic,
    Dirac,
    Transport,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Random,
        Suite::Quartic,
        Suite::Dirac,
        Suite::Transport,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Random => "random",
            Suite::Quartic => "quartic",
            Suite::Dirac => "dirac",
            Suite::Transport => "transport",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Options of the random suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomOptions {
    pub seed: u64,
    pub pencils: usize,
    pub congruences: usize,
    pub max_n: usize,
}

impl Default for RandomOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            pencils: 100,
            congruences: 200,
            max_n: 8,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SolverConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match suite {
        Suite::Random => random_suite(&RandomOptions::default(), cfg)?,
        Suite::Quartic => quartic_suite(cfg)?,
        Suite::Dirac => dirac_suite(cfg)?,
        Suite::Transport => transport_suite(cfg)?,
    };
    Ok(SuiteReport {
        suite,
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// `‖T(λ)·lift(y)‖ / (‖T(λ)‖₂ ‖lift(y)‖)` maximized over the kernel of each hit.
pub fn lift_residual(p: &RiggedBlockPencil, hit: &EigenvalueHit) -> Result<f64> {
    let t = p.assemble_full(hit.lambda);
    let tnorm = eigh(&t)?.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for y in hit_kernel(p, hit)? {
        let full = p.lift(hit.lambda, &y)?;
        let v = CMatrix::from_column_slice(full.len(), 1, &full);
        let r = (t.as_matrix() * &v).norm();
        if r > 0.0 {
            worst = worst.max(r / (tnorm * v.norm()));
        }
    }
    Ok(worst)
}

/// Finite search window of a gap: infinite ends are replaced by `±bound`.
fn window(lo: f64, hi: f64, bound: f64) -> Option<(f64, f64)> {
    let (lo, hi) = (lo.max(-bound), hi.min(bound));
    (lo < hi).then_some((lo, hi))
}

/// Aggregates over the runs of one pencil family.
#[derive(Default)]
struct RunStats {
    identity_mismatch: usize,
    curve_mismatch: usize,
    curve_points: usize,
    uncertified: usize,
    worst_lift: f64,
}

impl RunStats {
    fn record(
        &mut self,
        p: &RiggedBlockPencil,
        lo: f64,
        hi: f64,
        hits: &[EigenvalueHit],
        cfg: &SolverConfig,
    ) -> Result<()> {
        let total: usize = hits.iter().map(|h| h.multiplicity).sum();
        if total != nu(p, hi, cfg)? - nu(p, lo, cfg)? {
            self.identity_mismatch += 1;
        }
        for h in hits {
            if !h.negative_type.as_ref().is_some_and(|c| c.certified) {
                self.uncertified += 1;
            }
            self.worst_lift = self.worst_lift.max(lift_residual(p, h)?);
        }
        Ok(())
    }

    fn record_curves(
        &mut self,
        p: &RiggedBlockPencil,
        kappa: f64,
        tau: f64,
        lo: f64,
        hi: f64,
        points: usize,
        cfg: &SolverConfig,
    ) -> Result<()> {
        let grid: Vec<f64> = (0..points)
            .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / points as f64)
            .collect();
        let t = lambda_curves(p, kappa, tau, &grid, p.n1(), cfg)?;
        self.curve_points += grid.len();
        for i in 0..grid.len() {
            let below = t.row(i).iter().filter(|&&v| v < 0.0).count();
            if below != t.nu[i] {
                self.curve_mismatch += 1;
            }
        }
        Ok(())
    }

    fn checks(&self, family: &str) -> Vec<Check> {
        let mut out = vec![Check::at_most(
            8,
            format!("{family}: runs where hit multiplicities differ from the ν difference"),
            self.identity_mismatch as f64,
            0.0,
        )];
        if self.curve_points > 0 {
            out.push(Check::at_most(
                8,
                format!("{family}: grid points where #{{Λₙ < 0}} differs from ν"),
                self.curve_mismatch as f64,
                0.0,
            ));
        }
        out.extend([
            Check::at_most(
                9,
                format!("{family}: hits without a negative-type certificate"),
                self.uncertified as f64,
                0.0,
            ),
            Check::at_most(
                10,
                format!("{family}: worst relative lift residual"),
                self.worst_lift,
                1e-8,
            ),
        ]);
        out
    }
}

/// Criteria 1–4 and the random-pencil parts of 8–10, plus the quadratic
/// operator-function test of criterion 9.
pub fn random_suite(opts: &RandomOptions, cfg: &SolverConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut stats = RunStats::default();

    let start = Instant::now();
    let mut rng = seeded(opts.seed);
    let (mut worst, mut total_mismatch, mut mult_mismatch) = (0.0f64, 0usize, 0usize);
    for _ in 0..opts.pencils {
        let p = random_pencil(&mut rng, opts.max_n, opts.max_n);
        let bound = p.spectral_bound()?;
        let all = dense_spectrum(&p, (f64::NEG_INFINITY, f64::INFINITY))?;
        let scale = all.iter().fold(1.0f64, |m, e| m.max(e.lambda.abs()));
        let (kappa, tau) = p.default_shifts()?;
        for gap in p.gaps() {
            let Some((lo, hi)) = window(gap.lo, gap.hi, bound) else {
                continue;
            };
            let hits = locate(&p, lo, hi, cfg)?;
            let dense = dense_spectrum(&p, (lo, hi))?;
            let located: usize = hits.iter().map(|h| h.multiplicity).sum();
            let expected: usize = dense.iter().map(|e| e.multiplicity).sum();
            if located != expected {
                total_mismatch += 1;
            }
            let clustered = crate::oracle::cluster(
                &hits
                    .iter()
                    .flat_map(|h| vec![h.lambda; h.multiplicity])
                    .collect::<Vec<_>>(),
                crate::oracle::CLUSTER_TOL * scale,
            );
            if clustered.len() != dense.len() {
                mult_mismatch += 1;
            }
            for (h, e) in clustered.iter().zip(&dense) {
                if h.multiplicity != e.multiplicity {
                    mult_mismatch += 1;
                }
                worst = worst.max((h.lambda - e.lambda).abs() / scale);
            }
            stats.record(&p, lo, hi, &hits, cfg)?;
            stats.record_curves(&p, kappa, tau, lo, hi, 20, cfg)?;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    checks.push(Check::at_most(
        1,
        "gaps with a total multiplicity mismatch",
        total_mismatch as f64,
        0.0,
    ));
    checks.push(Check::at_most(
        1,
        "clusters with a multiplicity mismatch",
        mult_mismatch as f64,
        0.0,
    ));
    checks.push(Check::at_most(
        1,
        "max |λ_locate − λ_dense| / scale",
        worst,
        1e-9,
    ));
    checks.push(Check::at_most(
        1,
        "oracle-equivalence runtime [s]",
        elapsed,
        30.0,
    ));

    let start = Instant::now();
    let mut changed = 0;
    for _ in 0..opts.congruences {
        let n = rng.random_range(1..=12);
        let a = random_hermitian(&mut rng, n);
        let c = random_invertible(&mut rng, n, 1e3);
        let tol = crate::hermat::default_zero_tol(n);
        if inertia_of(&a, tol) != inertia_of(&a.congruence(&c)?, tol) {
            changed += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    checks.push(Check::at_most(
        2,
        "congruences changing the inertia",
        changed as f64,
        0.0,
    ));
    checks.push(Check::at_most(2, "Sylvester runtime [s]", elapsed, 5.0));

    let mut worst_fs = 0.0f64;
    let mut done = 0;
    while done < opts.pencils {
        let p = random_pencil(&mut rng, opts.max_n, opts.max_n);
        let bound = p.spectral_bound()?;
        let lambda = rng.random_range(-bound..bound);
        match p.fs_residual(lambda) {
            Ok(r) => {
                worst_fs = worst_fs.max(r);
                done += 1;
            }
            Err(Error::InsideT22Spectrum { .. } | Error::IllConditioned { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    checks.push(Check::at_most(
        3,
        "max Frobenius–Schur residual",
        worst_fs,
        1e-12,
    ));

    let mut worst_mono = f64::NEG_INFINITY;
    let mut done = 0;
    while done < opts.pencils {
        let p = random_pencil(&mut rng, opts.max_n, opts.max_n);
        let bound = p.spectral_bound()?;
        let gaps = p.gaps();
        let gap = gaps[rng.random_range(0..gaps.len())];
        let Some((lo, hi)) = window(gap.lo, gap.hi, bound) else {
            continue;
        };
        let mut l1 = rng.random_range(lo..hi);
        let mut l2 = rng.random_range(lo..hi);
        if l1 == l2 {
            continue;
        }
        if l1 > l2 {
            std::mem::swap(&mut l1, &mut l2);
        }
        let (s1, s2) = (p.schur(l1)?, p.schur(l2)?);
        let m = s2.as_matrix() - s1.as_matrix() + p.g1().as_matrix().scale(l2 - l1);
        let top = *eigh(&HermitianMatrix::symmetrized(m)?)?
            .values
            .last()
            .unwrap();
        let scale = s1
            .max_abs()
            .max(s2.max_abs())
            .max((l2 - l1) * p.g1().max_abs());
        worst_mono = worst_mono.max(top / scale);
        done += 1;
    }
    checks.push(Check::at_most(
        4,
        "max λ_max(S(λ2) − S(λ1) + (λ2−λ1)G1) / scale",
        worst_mono,
        1e-10,
    ));

    checks.extend(stats.checks("random pencils"));
    checks.extend(quadratic_operator_function(opts.seed, cfg)?);
    Ok(checks)
}

/// `A11(λ) = A11 − λG1 − λ²C` with `C = 10⁻³ M*M`, checked against a
/// `10⁴`-point scan of `ν_F`.
fn quadratic_operator_function(seed: u64, cfg: &SolverConfig) -> Result<Vec<Check>> {
    let mut rng = seeded(seed ^ 0x9E37_79B9);
    let p = crate::random::random_pencil_with_dims(&mut rng, 8, 6);
    let m = random_complex(&mut rng, 8, 8);
    let c = HermitianMatrix::symmetrized((m.adjoint() * &m).scale(1e-3))?;
    let (a11, a12, a22, g1, g2) = (
        p.a11().clone(),
        p.a12().clone(),
        p.a22().clone(),
        p.g1().clone(),
        p.g2().clone(),
    );
    let (g1d, g2d, cd) = (g1.clone(), g2.clone(), c.clone());
    let f = OperatorFunctionPencil::new(
        8,
        6,
        move |l| PencilBlocks {
            a11: a11
                .shifted(l, &g1)
                .and_then(|s| s.combine(1.0, &c, -l * l))
                .expect("same dimension"),
            a12: a12.clone(),
            a22: a22.shifted(l, &g2).expect("same dimension"),
        },
        move |l| PencilBlocks {
            a11: g1d.combine(-1.0, &cd, -2.0 * l).expect("same dimension"),
            a12: CMatrix::zeros(8, 6),
            a22: g2d.combine(-1.0, &g2d, 0.0).expect("same dimension"),
        },
        1e-6,
    )?
    .with_gram2(p.g2())?
    .with_reentrant(true);
    let lo = p.t22_spectrum().last().copied().unwrap_or(0.0) + 1e-3;
    let hi = lo + 5.0;
    let hits = locate_general(&f, lo, hi, cfg)?;

    let points = 10_000;
    let grid: Vec<f64> = (0..=points)
        .map(|i| {
            if i == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / points as f64
            }
        })
        .collect();
    let scan = grid
        .iter()
        .map(|&x| nu_general(&f, x, cfg))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = hits.iter().map(|h| h.multiplicity).sum();
    let mut misplaced = 0usize;
    for i in 0..points {
        let jump = scan[i + 1].saturating_sub(scan[i]);
        let inside: usize = hits
            .iter()
            .filter(|h| grid[i] <= h.lambda && h.lambda < grid[i + 1])
            .map(|h| h.multiplicity)
            .sum();
        if inside != jump {
            misplaced += 1;
        }
    }
    let uncertified = hits
        .iter()
        .filter(|h| !h.negative_type.as_ref().is_some_and(|c| c.certified))
        .count();
    Ok(vec![
        Check::at_least(
            9,
            "quadratic operator function: eigenvalues found",
            total as f64,
            1.0,
        ),
        Check::at_most(
            9,
            "quadratic operator function: |count − scan count|",
            (total as f64 - (scan[points] - scan[0]) as f64).abs(),
            0.0,
        ),
        Check::at_most(
            9,
            "quadratic operator function: scan cells with misplaced hits",
            misplaced as f64,
            0.0,
        ),
        Check::at_most(
            9,
            "quadratic operator function: uncertified hits",
            uncertified as f64,
            0.0,
        ),
    ])
}

/// Relative errors of `hits` against `exact`, or `None` on a count mismatch.
fn relative_errors(hits: &[EigenvalueHit], exact: &[f64]) -> Option<Vec<f64>> {
    let values: Vec<f64> = hits
        .iter()
        .flat_map(|h| vec![h.lambda; h.multiplicity])
        .collect();
    (values.len() == exact.len()).then(|| {
        values
            .iter()
            .zip(exact)
            .map(|(v, e)| ((v - e) / e).abs())
            .collect()
    })
}

/// Smallest error ratio `coarse / fine` over matched eigenvalues.
fn min_ratio(coarse: &[f64], fine: &[f64]) -> f64 {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| c / f)
        .fold(f64::INFINITY, f64::min)
}

const QUARTIC_WINDOW: (f64, f64) = (0.5, 200.0);

/// Criterion 5 and the quartic parts of 8–10.
pub fn quartic_suite(cfg: &SolverConfig) -> Result<Vec<Check>> {
    let start = Instant::now();
    let (lo, hi) = QUARTIC_WINDOW;
    let roots: Vec<f64> = quartic_char_roots(QUARTIC_WINDOW, 0.25, 1e-8)?
        .roots
        .iter()
        .map(|r| r.lambda)
        .collect();
    let mut checks = Vec::new();
    let mut stats = RunStats::default();
    let mut errors = Vec::new();
    for n in [64usize, 128] {
        let ex = build_example_quartic(n, QUARTIC_SHIFTS.0, QUARTIC_SHIFTS.1)?;
        let hits = locate(&ex.pencil, lo, hi, cfg)?;
        let located: usize = hits.iter().map(|h| h.multiplicity).sum();
        checks.push(Check::at_most(
            5,
            format!("N={n}: |#hits − #oracle roots|"),
            (located as f64 - roots.len() as f64).abs(),
            0.0,
        ));
        let errs = relative_errors(&hits, &roots).unwrap_or_default();
        if n == 64 {
            let worst = if errs.is_empty() {
                f64::INFINITY
            } else {
                errs.iter().copied().fold(0.0, f64::max)
            };
            checks.push(Check::at_most(
                5,
                "N=64: max relative error vs shooting",
                worst,
                1e-4,
            ));
            stats.record(&ex.pencil, lo, hi, &hits, cfg)?;
            stats.record_curves(&ex.pencil, ex.kappa, ex.tau, lo, hi, 40, cfg)?;
        }
        errors.push(errs);
    }
    let ratio = if errors[0].is_empty() || errors[0].len() != errors[1].len() {
        0.0
    } else {
        min_ratio(&errors[0], &errors[1])
    };
    checks.push(Check::at_least(
        5,
        "min error ratio N=64 → N=128",
        ratio,
        8.0,
    ));
    checks.push(Check::at_most(
        5,
        "quartic runtime [s]",
        start.elapsed().as_secs_f64(),
        60.0,
    ));
    checks.extend(stats.checks("quartic N=64"));
    Ok(checks)
}

const DIRAC_WINDOW: (f64, f64) = (1.0, 12.0);

/// Criterion 6 against every closed-form eigenvalue in the window.
pub fn dirac_suite(cfg: &SolverConfig) -> Result<Vec<Check>> {
    let exact = dirac_exact(DIRAC_WINDOW)?;
    let mut checks = Vec::new();
    let mut stats = RunStats::default();
    let mut errors = Vec::new();
    for n in [128usize, 256] {
        let ex = build_example_dirac(n)?;
        let hits = locate(&ex.pencil, DIRAC_WINDOW.0, DIRAC_WINDOW.1, cfg)?;
        let errs = relative_errors(&hits, &exact);
        if n == 256 {
            checks.push(Check::at_most(
                6,
                "N=256: |#hits − #closed-form eigenvalues|",
                (hits.iter().map(|h| h.multiplicity).sum::<usize>() as f64 - exact.len() as f64)
                    .abs(),
                0.0,
            ));
            let worst = errs
                .as_ref()
                .map_or(f64::INFINITY, |e| e.iter().copied().fold(0.0, f64::max));
            checks.push(Check::at_most(6, "N=256: max relative error", worst, 1e-2));
            stats.record(&ex.pencil, DIRAC_WINDOW.0, DIRAC_WINDOW.1, &hits, cfg)?;
        }
        errors.push(errs.unwrap_or_default());
    }
    let orders: Vec<f64> = errors[0]
        .iter()
        .zip(&errors[1])
        .map(|(c, f)| (c / f).log2())
        .collect();
    let deviation = if orders.is_empty() || errors[0].len() != exact.len() {
        f64::INFINITY
    } else {
        orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max)
    };
    checks.push(Check::at_most(
        6,
        "max |observed order − 2|, N=128 → 256",
        deviation,
        0.5,
    ));
    checks.extend(stats.checks("Dirac N=256"));
    Ok(checks)
}

/// Criterion 7.
pub fn transport_suite(cfg: &SolverConfig) -> Result<Vec<Check>> {
    use std::f64::consts::TAU;
    let tight = SolverConfig {
        lambda_tol_abs: cfg.lambda_tol_abs.min(1e-13),
        ..*cfg
    };
    let ex = build_example_transport(256)?;
    let hits = locate(&ex.pencil, -7.0, 7.0, &tight)?;
    let mut stats = RunStats::default();
    stats.record(&ex.pencil, -7.0, 7.0, &hits, &tight)?;
    let nearest = |x: f64| {
        hits.iter()
            .map(|h| h.lambda)
            .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
            .unwrap_or(f64::INFINITY)
    };
    let zero = nearest(0.0).abs();
    let pm = [TAU, -TAU]
        .iter()
        .map(|&x| ((nearest(x) - x) / x).abs())
        .fold(0.0, f64::max);
    let rhs = |n: usize| -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new((TAU * i as f64 / n as f64).cos(), 0.0))
            .collect()
    };
    let e128 = resolvent_check_transport(128, &rhs(128))?;
    let e256 = resolvent_check_transport(256, &rhs(256))?;
    let mut checks = vec![
        Check::at_most(7, "N=256: |eigenvalue nearest 0|", zero, 1e-12),
        Check::at_most(7, "N=256: max relative error at ±2π", pm, 1e-2),
        Check::at_most(7, "N=256: resolvent error for cos 2πx", e256, 1e-3),
        Check::at_most(7, "resolvent error ratio N=128 → 256", e256 / e128, 0.3),
    ];
    checks.extend(stats.checks("transport N=256"));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_random_suite_passes() {
        let opts = RandomOptions {
            pencils: 10,
            congruences: 20,
            ..RandomOptions::default()
        };
        let checks = random_suite(&opts, &SolverConfig::default()).unwrap();
        for c in &checks {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn check_display() {
        let c = Check::at_most(3, "x", 1e-13, 1e-12);
        assert!(c.to_string().starts_with("[PASS] criterion  3 x"));
        assert!(!Check::at_least(5, "y", 2.0, 8.0).passed);
    }
}
