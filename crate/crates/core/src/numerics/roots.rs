//! Bracketing root finder: bisection with secant acceleration.

use super::{Interval, NumericsError};

const MAX_ITER: usize = 1000;

/// Find a root of `f` inside `bracket`, shrinking the bracket to width ≤ `tol`.
///
/// Requires f(lo)·f(hi) ≤ 0. The probe point is the Illinois-weighted false
/// position (a secant candidate that is forced to alternate sides, so both
/// bracket ends converge); it falls back to plain bisection whenever the
/// candidate is not safely interior, and every eighth step bisects outright so
/// the bracket provably shrinks. The returned point is the final bracket end
/// with the smaller |f|, so |f(r)| is no larger than at either end.
///
/// The function may itself be fallible (for example a quadrature-backed
/// residual); evaluation errors are propagated.
pub fn find_root<F>(mut f: F, bracket: Interval, tol: f64) -> Result<f64, NumericsError>
where
    F: FnMut(f64) -> Result<f64, NumericsError>,
{
    if !(tol.is_finite() && tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(tol));
    }
    let mut lo = bracket.lo();
    let mut hi = bracket.hi();
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let mut f_hi = f(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
    }

    // Illinois interpolation weights; reset to the true value when the
    // corresponding end moves, halved when the opposite end stagnates.
    let mut w_lo = f_lo;
    let mut w_hi = f_hi;
    let mut last_side = 0i8;

    for iter in 0..MAX_ITER {
        let width = hi - lo;
        if width <= tol {
            return Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi });
        }
        let mid = lo + 0.5 * width;
        if mid <= lo || mid >= hi {
            // Bracket is at f64 resolution but still wider than tol: the
            // width contract cannot be met.
            return Err(NumericsError::RootNoConvergence {
                lo,
                hi,
                tol,
                max_iter: MAX_ITER,
            });
        }
        let mut x = mid;
        if iter % 8 != 7 {
            let secant = (lo * w_hi - hi * w_lo) / (w_hi - w_lo);
            let margin = f64::EPSILON * width.max(lo.abs()).max(hi.abs());
            if secant.is_finite() && secant > lo + margin && secant < hi - margin {
                x = secant;
            }
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
            w_lo = fx;
            if last_side == -1 {
                w_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            f_hi = fx;
            w_hi = fx;
            if last_side == 1 {
                w_lo *= 0.5;
            }
            last_side = 1;
        }
    }
    Err(NumericsError::RootNoConvergence {
        lo,
        hi,
        tol,
        max_iter: MAX_ITER,
    })
}
