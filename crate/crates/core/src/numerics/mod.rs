//! Shared scalar quadrature and bracketing root-finding.
//!
//! Everything in this module is a pure function of its inputs and safe to call
//! concurrently.

mod quadrature;
mod roots;

pub use quadrature::{integrate, QuadratureRule};
pub use roots::find_root;

use thiserror::Error;

/// Errors raised by the scalar numerics layer.
#[derive(Debug, Clone, Error)]
pub enum NumericsError {
    #[error("invalid interval [{lo}, {hi}]: bounds must be finite with lo < hi")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("quadrature rule needs at least 2 nodes, got {0}")]
    RuleTooSmall(usize),

    #[error(
        "quadrature did not converge: best estimate {best:e}, \
         error estimate {error_estimate:e} exceeds target {target:e}"
    )]
    QuadratureNoConvergence {
        best: f64,
        error_estimate: f64,
        target: f64,
    },

    #[error("integrand returned a non-finite value at {x}")]
    NonFiniteEvaluation { x: f64 },

    #[error(
        "bracket [{lo}, {hi}] does not straddle a sign change: \
         f(lo) = {f_lo:e}, f(hi) = {f_hi:e}"
    )]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error(
        "root finding did not converge within {max_iter} iterations: \
         bracket [{lo}, {hi}] wider than {tol:e}"
    )]
    RootNoConvergence {
        lo: f64,
        hi: f64,
        tol: f64,
        max_iter: usize,
    },
}

/// A finite interval with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(NumericsError::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// tanh with explicit saturation for large arguments.
///
/// Arguments of the form s/(2T) blow up as T → 0; beyond |z| = 40 the value
/// is 1 to well below f64 resolution.
#[inline]
pub fn tanh_safe(z: f64) -> f64 {
    if z > 40.0 {
        1.0
    } else if z < -40.0 {
        -1.0
    } else {
        z.tanh()
    }
}

/// 1/cosh²(z) computed from exponentials of −|z| so that no intermediate
/// overflows for large |z|.
#[inline]
pub fn sech2(z: f64) -> f64 {
    let e = (-2.0 * z.abs()).exp();
    let denom = 1.0 + e;
    4.0 * e / (denom * denom)
}
