use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{kernel_of, linear_certificate, negative_type_certificate, smallest_vectors};
use super::{common_gap, nu, nu_general, EigenvalueHit, SolverConfig};
use crate::hermat::eigh;
use crate::pencil::{OperatorFunctionPencil, RiggedBlockPencil};
use crate::{Error, Result};

/// Initial number of sample intervals of the monotonicity scan in [`locate_general`].
const SCAN_INTERVALS: usize = 16;
/// Number of grid doublings of that scan.
const SCAN_REFINEMENTS: u32 = 6;
/// Newton steps applied to a simple eigenvalue after bisection.
const POLISH_STEPS: usize = 4;

type CountFn<'a> = dyn Fn(f64) -> Result<usize> + Sync + 'a;
type KernelDimFn<'a> = dyn Fn(f64) -> Result<usize> + 'a;

/// Bracket `[lo, hi)` with `ν(hi) − ν(lo) = multiplicity`, before kernel data is attached.
#[derive(Debug, Clone, Copy)]
struct RawHit {
    lo: f64,
    hi: f64,
    multiplicity: usize,
    mismatch: Option<usize>,
}

impl RawHit {
    fn bare(&self) -> EigenvalueHit {
        EigenvalueHit {
            lambda: 0.5 * (self.lo + self.hi),
            multiplicity: self.multiplicity,
            bracket: (self.lo, self.hi),
            negative_type: None,
            kernel_mismatch: self.mismatch,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Item {
    a: f64,
    b: f64,
    na: usize,
    nb: usize,
    refined: bool,
    mismatch: Option<usize>,
}

/// Left-to-right bisection on a step function with an explicit stack. The
/// sequence of probed points depends only on the counts, so results do not
/// depend on which values were pre-computed.
struct Engine<'a> {
    count: &'a CountFn<'a>,
    cache: HashMap<u64, usize>,
    used: usize,
    budget: usize,
    strict: bool,
}

enum Stop {
    Budget,
    Fail(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

impl<'a> Engine<'a> {
    fn new(count: &'a CountFn<'a>, cfg: &SolverConfig, strict: bool) -> Self {
        Self {
            count,
            cache: HashMap::new(),
            used: 0,
            budget: cfg.max_bisections,
            strict,
        }
    }

    fn eval(&mut self, x: f64) -> std::result::Result<usize, Stop> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Stop::Budget);
        }
        if let Some(&v) = self.cache.get(&x.to_bits()) {
            return Ok(v);
        }
        let v = (self.count)(x)?;
        self.cache.insert(x.to_bits(), v);
        Ok(v)
    }

    /// Evaluates the midpoints of the first `depth` levels of the bisection
    /// tree of `[a, b]` on the rayon pool.
    fn prewarm(&mut self, a: f64, b: f64, depth: u32) {
        let mut level = vec![(a, b)];
        let mut points = Vec::new();
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * 2);
            for (lo, hi) in level {
                let mid = 0.5 * (lo + hi);
                points.push(mid);
                next.push((lo, mid));
                next.push((mid, hi));
            }
            level = next;
        }
        self.prewarm_points(&points);
    }

    fn prewarm_points(&mut self, points: &[f64]) {
        let count = self.count;
        let values: Vec<(u64, Result<usize>)> = points
            .par_iter()
            .filter(|x| !self.cache.contains_key(&x.to_bits()))
            .map(|&x| (x.to_bits(), count(x)))
            .collect();
        for (k, v) in values {
            if let Ok(v) = v {
                self.cache.insert(k, v);
            }
        }
    }

    fn run(
        &mut self,
        a: f64,
        b: f64,
        na: usize,
        nb: usize,
        cfg: &SolverConfig,
        kernel_dim: &KernelDimFn<'_>,
        hits: &mut Vec<RawHit>,
    ) -> std::result::Result<(), Stop> {
        let mut stack = vec![Item {
            a,
            b,
            na,
            nb,
            refined: false,
            mismatch: None,
        }];
        while let Some(it) = stack.pop() {
            if it.nb <= it.na {
                continue;
            }
            let mid = 0.5 * (it.a + it.b);
            let narrow = it.b - it.a <= cfg.width_tol(mid) || mid <= it.a || mid >= it.b;
            if narrow {
                let multiplicity = it.nb - it.na;
                if multiplicity > 1 && !it.refined {
                    let kd = kernel_dim(mid)?;
                    if kd != multiplicity && mid > it.a && mid < it.b {
                        log::warn!(
                            "kernel dimension {kd} disagrees with count jump {multiplicity} near λ = {mid}; refining"
                        );
                        let nm = self.checked(mid, it.na, it.nb)?;
                        stack.push(Item {
                            a: mid,
                            na: nm,
                            refined: true,
                            mismatch: Some(kd),
                            ..it
                        });
                        stack.push(Item {
                            b: mid,
                            nb: nm,
                            refined: true,
                            mismatch: Some(kd),
                            ..it
                        });
                        continue;
                    }
                }
                hits.push(RawHit {
                    lo: it.a,
                    hi: it.b,
                    multiplicity,
                    mismatch: it.mismatch,
                });
                continue;
            }
            let nm = self.checked(mid, it.na, it.nb)?;
            stack.push(Item {
                a: mid,
                na: nm,
                ..it
            });
            stack.push(Item {
                b: mid,
                nb: nm,
                ..it
            });
        }
        Ok(())
    }

    /// Count at `x`, which must lie between the end counts. Linear pencils
    /// clamp rounding wobble; operator functions treat it as a type violation.
    fn checked(&mut self, x: f64, na: usize, nb: usize) -> std::result::Result<usize, Stop> {
        let v = self.eval(x)?;
        if v < na || v > nb {
            if self.strict {
                return Err(Stop::Fail(Error::TypeViolation { lambda: x }));
            }
            log::debug!("count {v} at λ = {x} outside [{na}, {nb}]; clamped");
            return Ok(v.clamp(na, nb));
        }
        Ok(v)
    }
}

fn prewarm_depth(cfg: &SolverConfig) -> Option<u32> {
    let threads = rayon::current_num_threads();
    (cfg.parallel && threads > 1).then(|| threads.next_power_of_two().trailing_zeros() + 2)
}

fn budget_error(cfg: &SolverConfig, raw: &[RawHit]) -> Error {
    Error::BisectionBudgetExceeded {
        budget: cfg.max_bisections,
        partial: raw.iter().map(RawHit::bare).collect(),
    }
}

/// Replaces infinite interval ends by the spectral bound.
fn finite_interval(p: &RiggedBlockPencil, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if lo.is_finite() && hi.is_finite() {
        return Ok((lo, hi));
    }
    let bound = p.spectral_bound()?;
    let lo = if lo.is_finite() { lo } else { -bound };
    let hi = if hi.is_finite() { hi } else { bound };
    Ok((lo, hi))
}

/// Newton steps on the eigenvalue of `S(λ)` nearest zero, kept inside the
/// bracket and stopped once `|μ|` no longer decreases. Near a pole of
/// `D(λ)⁻¹` the bisection width alone leaves a visible lift residual.
fn polish(p: &RiggedBlockPencil, (lo, hi): (f64, f64), start: f64) -> Result<f64> {
    let mut best = start;
    let (mut mu, mut y) = nearest_zero(p, start)?;
    for _ in 0..POLISH_STEPS {
        let slope = p.schur_derivative(best)?.quadratic_form(&y);
        if !(slope < 0.0) {
            break;
        }
        let next = best - mu / slope;
        if !(next > lo && next <= hi) || next == best {
            break;
        }
        let (mu_next, y_next) = nearest_zero(p, next)?;
        if mu_next.abs() >= mu.abs() {
            break;
        }
        (best, mu, y) = (next, mu_next, y_next);
    }
    Ok(best)
}

fn nearest_zero(p: &RiggedBlockPencil, lambda: f64) -> Result<(f64, Vec<Complex64>)> {
    let e = eigh(&p.schur(lambda)?)?;
    let k = (0..e.values.len())
        .min_by(|&a, &b| e.values[a].abs().total_cmp(&e.values[b].abs()))
        .ok_or_else(|| Error::invalid("empty Schur complement"))?;
    Ok((e.values[k], e.vectors.column(k).iter().copied().collect()))
}

/// All eigenvalues in `[ζ⁻, ζ⁺)` with multiplicities, in ascending order.
/// Every hit carries a negative-type certificate built from `S′`.
pub fn locate(
    p: &RiggedBlockPencil,
    lo: f64,
    hi: f64,
    cfg: &SolverConfig,
) -> Result<Vec<EigenvalueHit>> {
    cfg.validate()?;
    let (lo, hi) = finite_interval(p, lo, hi)?;
    common_gap(p, lo, hi)?;
    let count = |x: f64| nu(p, x, cfg);
    let kernel_dim = |x: f64| -> Result<usize> { Ok(kernel_of(&p.schur(x)?, cfg)?.len()) };
    let mut engine = Engine::new(&count, cfg, false);
    let mut raw = Vec::new();
    let outcome = (|| {
        let na = engine.eval(lo)?;
        let nb = engine.eval(hi)?;
        if let Some(depth) = prewarm_depth(cfg) {
            engine.prewarm(lo, hi, depth);
        }
        engine.run(lo, hi, na, nb.max(na), cfg, &kernel_dim, &mut raw)
    })();
    match outcome {
        Ok(()) => {}
        Err(Stop::Budget) => return Err(budget_error(cfg, &raw)),
        Err(Stop::Fail(e)) => return Err(e),
    }
    raw.into_iter()
        .map(|r| {
            let mut hit = r.bare();
            if hit.multiplicity == 1 {
                hit.lambda = polish(p, hit.bracket, hit.lambda)?;
            }
            let kernel = smallest_vectors(&p.schur(hit.lambda)?, hit.multiplicity)?;
            hit.negative_type = Some(linear_certificate(p, hit.lambda, &kernel, cfg)?);
            Ok(hit)
        })
        .collect()
}

/// Outcome of [`nth_eigenvalue`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NthEigenvalue {
    /// Bracket around `inf{λ > ζ : ν(λ) > ν(ζ) + n}`.
    Found(EigenvalueHit),
    /// Fewer than `n + 1` eigenvalues lie between `ζ` and the end of its gap.
    AboveGap { available: usize },
}

/// `inf{λ ∈ (ζ, gap end) : ν(λ) > ν(ζ) + n}`.
pub fn nth_eigenvalue(
    p: &RiggedBlockPencil,
    zeta: f64,
    n: usize,
    cfg: &SolverConfig,
) -> Result<NthEigenvalue> {
    cfg.validate()?;
    let gap = p.gap(zeta)?;
    let hi = if gap.hi.is_finite() {
        gap.hi
    } else {
        p.spectral_bound()?.max(zeta.abs() + 1.0)
    };
    let count = |x: f64| nu(p, x, cfg);
    let mut engine = Engine::new(&count, cfg, false);
    let found = (|| {
        let base = engine.eval(zeta)?;
        let top = engine.eval(hi)?;
        let target = base + n;
        if top <= target {
            return Ok(NthEigenvalue::AboveGap {
                available: top.saturating_sub(base),
            });
        }
        let (mut a, mut b, mut na, mut nb) = (zeta, hi, base, top);
        loop {
            let mid = 0.5 * (a + b);
            if b - a <= cfg.width_tol(mid) || mid <= a || mid >= b {
                break;
            }
            let v = engine.checked(mid, na, nb)?;
            if v > target {
                (b, nb) = (mid, v);
            } else {
                (a, na) = (mid, v);
            }
        }
        Ok(NthEigenvalue::Found(EigenvalueHit {
            lambda: 0.5 * (a + b),
            multiplicity: nb - na,
            bracket: (a, b),
            negative_type: None,
            kernel_mismatch: None,
        }))
    })();
    match found {
        Ok(NthEigenvalue::Found(mut hit)) => {
            if hit.multiplicity == 1 {
                hit.lambda = polish(p, hit.bracket, hit.lambda)?;
            }
            let kernel = smallest_vectors(&p.schur(hit.lambda)?, hit.multiplicity)?;
            hit.negative_type = Some(linear_certificate(p, hit.lambda, &kernel, cfg)?);
            Ok(NthEigenvalue::Found(hit))
        }
        Ok(other) => Ok(other),
        Err(Stop::Budget) => Err(budget_error(cfg, &[])),
        Err(Stop::Fail(e)) => Err(e),
    }
}

/// Localization for an operator function. `ν_F` is first sampled on a
/// uniform grid that is doubled until every sample interval holds at most one
/// eigenvalue (at most six doublings); any decrease of `ν_F` is a
/// [`Error::TypeViolation`]. The interval is then bisected exactly as in
/// [`locate`], and every hit must certify negative type.
pub fn locate_general(
    f: &OperatorFunctionPencil,
    lo: f64,
    hi: f64,
    cfg: &SolverConfig,
) -> Result<Vec<EigenvalueHit>> {
    cfg.validate()?;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::invalid(format!(
            "locate_general needs a finite interval, got [{lo}, {hi}]"
        )));
    }
    let count = |x: f64| nu_general(f, x, cfg);
    let kernel_dim = |x: f64| -> Result<usize> { Ok(kernel_of(&f.schur(x)?, cfg)?.len()) };
    let mut engine = Engine::new(&count, cfg, true);
    let parallel = cfg.parallel && f.is_reentrant();
    let mut raw = Vec::new();
    let outcome = (|| {
        for level in 0..=SCAN_REFINEMENTS {
            let m = SCAN_INTERVALS << level;
            let points: Vec<f64> = (0..=m)
                .map(|i| {
                    if i == m {
                        hi
                    } else {
                        lo + (hi - lo) * i as f64 / m as f64
                    }
                })
                .collect();
            if parallel {
                engine.prewarm_points(&points);
            }
            let values = points
                .iter()
                .map(|&x| engine.eval(x))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let mut separated = true;
            for (k, w) in values.windows(2).enumerate() {
                if w[1] < w[0] {
                    return Err(Stop::Fail(Error::TypeViolation {
                        lambda: points[k + 1],
                    }));
                }
                separated &= w[1] - w[0] <= 1;
            }
            if separated {
                break;
            }
        }
        let na = engine.eval(lo)?;
        let nb = engine.eval(hi)?;
        if parallel {
            if let Some(depth) = prewarm_depth(cfg) {
                engine.prewarm(lo, hi, depth);
            }
        }
        engine.run(lo, hi, na, nb, cfg, &kernel_dim, &mut raw)
    })();
    match outcome {
        Ok(()) => {}
        Err(Stop::Budget) => return Err(budget_error(cfg, &raw)),
        Err(Stop::Fail(e)) => return Err(e),
    }
    raw.into_iter()
        .map(|r| {
            let mut hit = r.bare();
            let kernel = smallest_vectors(&f.schur(hit.lambda)?, hit.multiplicity)?;
            let cert = negative_type_certificate(f, hit.lambda, &kernel, cfg)?;
            if !cert.certified {
                return Err(Error::TypeViolation { lambda: hit.lambda });
            }
            hit.negative_type = Some(cert);
            Ok(hit)
        })
        .collect()
}
