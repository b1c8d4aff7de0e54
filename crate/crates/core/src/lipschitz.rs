//! The coupling-window constants a, b and the temperature-Lipschitz constant
//! γ = U₂b/(1 − U₂a), valid whenever the window condition U₂a < 1 holds.
//!
//! γ depends only on (ħω_D, U₁, U₂, τ): it is a property of the model, not of
//! any particular solution.

use serde::Serialize;
use thiserror::Error;

use crate::constant_gap::{self, CurveError, GapCurve};

/// Grid size for the max defining `a`; one doubling serves as a convergence
/// gate.
const A_GRID: usize = 256;

/// Relative change allowed between the two `a` grids.
const A_GRID_RTOL: f64 = 1e-8;

#[derive(Debug, Clone, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Curve(#[from] CurveError),

    #[error("horizon must satisfy 0 < tau < tau0, got tau={tau}, tau0={tau0}")]
    BadHorizon { tau: f64, tau0: f64 },

    #[error("curve vanishes at tau={tau}; b is undefined there")]
    CurveVanishes { tau: f64 },

    #[error(
        "coupling window violated: U2*a = {u2_a} >= 1 \
         (largest admissible U2 at this tau is {max_u2}); reduce U2 or tau"
    )]
    CouplingWindow { u2_a: f64, max_u2: f64 },

    #[error("grid max for a did not converge: {coarse} vs {fine}")]
    GridNotConverged { coarse: f64, fine: f64 },
}

/// The working horizon τ and the constants derived at it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundConstants {
    pub tau: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
}

/// Everything the theory pins down before a surface is solved.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalConstants {
    /// Solution of 2/z = tanh z.
    pub z0: f64,
    /// Solution of Δ1(τ0) = 2z0·τ0.
    pub tau0: f64,
    /// Vanishing temperature of the U1 curve; lower bound on T_c.
    pub tau1: f64,
    /// Vanishing temperature of the U2 curve; upper bound on T_c.
    pub tau2: f64,
    /// Δ1(0) = ħω_D/sinh(1/U1).
    pub delta1_zero: f64,
    /// Δ2(0) = ħω_D/sinh(1/U2).
    pub delta2_zero: f64,
    /// Working horizon, tau_fraction · τ0.
    pub tau: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
}

/// Outcome of the window check 1 > U₂a, with the admissible headroom.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CouplingWindowReport {
    pub tau: f64,
    pub a: f64,
    pub u2: f64,
    pub u2_a: f64,
    /// 1 − U₂a; positive iff the window is satisfied.
    pub margin: f64,
    /// Largest admissible U₂ at this τ, i.e. 1/a.
    pub max_admissible_u2: f64,
    pub satisfied: bool,
}

/// a = max over T ∈ [0, τ] of F(T), with the tanh factor frozen at 2τ₀.
///
/// F is nondecreasing so the max sits at T = τ; it is still taken over a grid,
/// recomputed once at doubled resolution as a convergence gate.
pub fn compute_a(
    curve1: &GapCurve,
    tau: f64,
    tau0: f64,
    quad_tol: f64,
) -> Result<f64, BoundsError> {
    if !(tau > 0.0 && tau < tau0) {
        return Err(BoundsError::BadHorizon { tau, tau0 });
    }
    let coarse = grid_max_f(curve1, tau, tau0, quad_tol, A_GRID)?;
    let fine = grid_max_f(curve1, tau, tau0, quad_tol, 2 * A_GRID - 1)?;
    if (fine - coarse).abs() > A_GRID_RTOL * fine.abs().max(1.0) {
        return Err(BoundsError::GridNotConverged { coarse, fine });
    }
    Ok(fine)
}

fn grid_max_f(
    curve1: &GapCurve,
    tau: f64,
    tau0: f64,
    quad_tol: f64,
    n: usize,
) -> Result<f64, BoundsError> {
    let mut max = f64::NEG_INFINITY;
    for i in 0..n {
        let t = tau * i as f64 / (n - 1) as f64;
        let f = constant_gap::eval_f(t, tau0, curve1, quad_tol)?;
        if f > max {
            max = f;
        }
    }
    Ok(max)
}

/// Diagnostic variant of `a` that evaluates the tanh factor at each T itself
/// instead of at the frozen reference temperature.
///
/// By the defining equation of the curve this integral equals 1/U₁ identically
/// on [0, τ₁), so this variant can never satisfy the window 1 > U₂a with
/// U₂ > U₁. It exists purely for comparison and is never used for γ.
pub fn compute_a_raw(curve1: &GapCurve, tau: f64, quad_tol: f64) -> Result<f64, BoundsError> {
    use crate::numerics::{integrate, tanh_safe, Interval};
    let n = A_GRID;
    let hbar = curve1.problem().hbar_omega_d();
    let mut max = f64::NEG_INFINITY;
    for i in 0..n {
        let t = tau * i as f64 / (n - 1) as f64;
        let d2 = curve1.value(t).powi(2);
        let domain = Interval::new(0.0, hbar).map_err(CurveError::from)?;
        let v = integrate(
            |xi: f64| {
                let s = (xi * xi + d2).sqrt();
                let th = if t == 0.0 { 1.0 } else { tanh_safe(s / (2.0 * t)) };
                th / s
            },
            domain,
            quad_tol,
        )
        .map_err(CurveError::from)?;
        if v > max {
            max = v;
        }
    }
    Ok(max)
}

/// b = (32τ²/Δ₁(τ)²)·arctan(ħω_D/Δ₁(τ)), from the curve itself.
pub fn compute_b(curve1: &GapCurve, tau: f64) -> Result<f64, BoundsError> {
    let delta_tau = curve1.value_exact(tau)?;
    if delta_tau <= 0.0 {
        return Err(BoundsError::CurveVanishes { tau });
    }
    Ok(b_from_parts(
        tau,
        delta_tau,
        curve1.problem().hbar_omega_d(),
    ))
}

/// The closed form of b for explicit inputs.
pub fn b_from_parts(tau: f64, delta_at_tau: f64, hbar_omega_d: f64) -> f64 {
    32.0 * tau * tau / (delta_at_tau * delta_at_tau) * (hbar_omega_d / delta_at_tau).atan()
}

/// γ = U₂b/(1 − U₂a); errors when the window U₂a < 1 fails.
pub fn compute_gamma(a: f64, b: f64, u2: f64) -> Result<f64, BoundsError> {
    let u2_a = u2 * a;
    if u2_a >= 1.0 {
        return Err(BoundsError::CouplingWindow {
            u2_a,
            max_u2: 1.0 / a,
        });
    }
    Ok(u2 * b / (1.0 - u2_a))
}

/// Evaluate the window condition 1 > U₂a at the given horizon and report the
/// margin and the largest admissible U₂. Always reports, never errors.
pub fn check_coupling_window(
    curve1: &GapCurve,
    u2: f64,
    tau: f64,
    tau0: f64,
    quad_tol: f64,
) -> Result<CouplingWindowReport, BoundsError> {
    let a = compute_a(curve1, tau, tau0, quad_tol)?;
    let u2_a = u2 * a;
    Ok(CouplingWindowReport {
        tau,
        a,
        u2,
        u2_a,
        margin: 1.0 - u2_a,
        max_admissible_u2: 1.0 / a,
        satisfied: u2_a < 1.0,
    })
}

/// Compute the full constants chain for a model: curves, z₀, τ₀, horizon,
/// a, b, γ. Fails with `CouplingWindow` when 1 > U₂a cannot be met.
pub fn critical_constants(
    curve1: &GapCurve,
    curve2: &GapCurve,
    u2: f64,
    tau_fraction: f64,
    quad_tol: f64,
    root_tol: f64,
) -> Result<CriticalConstants, BoundsError> {
    let z0 = constant_gap::solve_z0(root_tol.min(1e-12))?;
    let tau0 = constant_gap::solve_tau0(curve1, z0, root_tol)?;
    let tau = tau_fraction * tau0;
    let a = compute_a(curve1, tau, tau0, quad_tol)?;
    let b = compute_b(curve1, tau)?;
    let gamma = compute_gamma(a, b, u2)?;
    Ok(CriticalConstants {
        z0,
        tau0,
        tau1: curve1.tau_c(),
        tau2: curve2.tau_c(),
        delta1_zero: curve1.delta0(),
        delta2_zero: curve2.delta0(),
        tau,
        a,
        b,
        gamma,
    })
}
