use serde::{Deserialize, Serialize};

use super::reject_zero;
use crate::{Error, Result};

/// Default RK4 steps on `[0, 1]`.
pub const RK4_STEPS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingRoot {
    pub lambda: f64,
    /// 1 for a sign change, 2 for a touching minimum of `|d|` below tolerance.
    pub multiplicity: usize,
    /// Scan interval holding the root.
    pub bracket: (f64, f64),
    /// `d` at the bracket ends.
    pub signs: (f64, f64),
    /// Root shift when the RK4 step is halved.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub roots: Vec<ShootingRoot>,
    pub interval: (f64, f64),
    pub step: f64,
    pub rk4_steps: usize,
    /// Bisection iterations spent over all roots.
    pub refinements: usize,
}

type State = [f64; 4];

fn rhs(lambda: f64, y: &State) -> State {
    [y[1], y[2], y[3], lambda * y[2] + lambda * lambda * y[0]]
}

fn integrate(lambda: f64, mut y: State, steps: usize) -> State {
    let h = 1.0 / steps as f64;
    let axpy = |y: &State, k: &State, a: f64| -> State {
        [
            y[0] + a * k[0],
            y[1] + a * k[1],
            y[2] + a * k[2],
            y[3] + a * k[3],
        ]
    };
    for _ in 0..steps {
        let k1 = rhs(lambda, &y);
        let k2 = rhs(lambda, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(lambda, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(lambda, &axpy(&y, &k3, h));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// `d(λ) = u₁(1)u₂′(1) − u₂(1)u₁′(1)` for `y⁗ = λy″ + λ²y` with
/// `(y, y′, y″, y‴)(0) = (0, 0, 1, 0)` and `(0, 0, 0, 1)`. Zeros of `d` are
/// the eigenvalues of the clamped problem.
pub fn quartic_determinant(lambda: f64, steps: usize) -> f64 {
    let u1 = integrate(lambda, [0.0, 0.0, 1.0, 0.0], steps);
    let u2 = integrate(lambda, [0.0, 0.0, 0.0, 1.0], steps);
    u1[0] * u2[1] - u2[0] * u1[1]
}

fn bisect(mut a: f64, mut b: f64, tol: f64, steps: usize, iterations: &mut usize) -> f64 {
    let mut da = quartic_determinant(a, steps);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        *iterations += 1;
        let dm = quartic_determinant(m, steps);
        if dm == 0.0 {
            return m;
        }
        if (dm > 0.0) == (da > 0.0) {
            a = m;
            da = dm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Roots of the shooting determinant on `interval`, scanned with spacing
/// `step` and bisected to width `tol`, using [`RK4_STEPS`] integration steps.
pub fn quartic_char_roots(interval: (f64, f64), step: f64, tol: f64) -> Result<RootReport> {
    quartic_char_roots_with(interval, step, tol, RK4_STEPS)
}

/// As [`quartic_char_roots`] with an explicit RK4 step count (at least 2048).
/// Each root is recomputed with twice as many steps; the refined value is
/// reported and a shift above `10·tol` is [`Error::StepTooCoarse`].
pub fn quartic_char_roots_with(
    interval: (f64, f64),
    step: f64,
    tol: f64,
    rk4_steps: usize,
) -> Result<RootReport> {
    reject_zero(interval, "quartic_char_roots")?;
    let (lo, hi) = interval;
    if !(lo < hi && step > 0.0 && tol > 0.0 && lo.is_finite() && hi.is_finite()) {
        return Err(Error::invalid(
            "scan needs lo < hi and positive step and tol",
        ));
    }
    if rk4_steps < RK4_STEPS {
        return Err(Error::invalid(format!(
            "at least {RK4_STEPS} RK4 steps are required"
        )));
    }
    let count = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=count)
        .map(|k| if k == count { hi } else { lo + k as f64 * step })
        .collect();
    let ds: Vec<f64> = xs
        .iter()
        .map(|&x| quartic_determinant(x, rk4_steps))
        .collect();

    let mut roots = Vec::new();
    let mut refinements = 0;
    for k in 0..count {
        let (a, b) = (xs[k], xs[k + 1]);
        if (ds[k] > 0.0) != (ds[k + 1] > 0.0) || ds[k + 1] == 0.0 {
            let coarse = bisect(a, b, tol, rk4_steps, &mut refinements);
            let fine = bisect(a, b, tol, 2 * rk4_steps, &mut refinements);
            let shift = (fine - coarse).abs();
            if shift > 10.0 * tol {
                return Err(Error::StepTooCoarse { shift, tol });
            }
            roots.push(ShootingRoot {
                lambda: fine,
                multiplicity: 1,
                bracket: (a, b),
                signs: (ds[k], ds[k + 1]),
                shift,
            });
        } else if k > 0 {
            // Touching minimum at xs[k]: no sign change on either side.
            let (dl, dm, dr) = (ds[k - 1], ds[k], ds[k + 1]);
            let same = (dl > 0.0) == (dm > 0.0) && (dm > 0.0) == (dr > 0.0);
            if same && dm.abs() < dl.abs().min(dr.abs()) && dm.abs() <= tol * dl.abs().max(dr.abs())
            {
                roots.push(ShootingRoot {
                    lambda: xs[k],
                    multiplicity: 2,
                    bracket: (xs[k - 1], b),
                    signs: (dl, dr),
                    shift: 0.0,
                });
            }
        }
    }
    Ok(RootReport {
        roots,
        interval,
        step,
        rk4_steps,
        refinements,
    })
}
