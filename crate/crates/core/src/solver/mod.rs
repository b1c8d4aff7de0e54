//! Nyström discretization of the gap operator and the two-sided monotone
//! fixed-point solver.
//!
//! The unknown lives on the quadrature nodes, so collocation and quadrature
//! coincide and the fixed-point structure of the integral operator is
//! preserved exactly at the discrete level. Each temperature slice is an
//! independent problem; the slice solver iterates the operator from the two
//! constant starting functions Δ₂(T) (from above) and Δ₁(T) (from below),
//! which gives monotone, bounded sequences whose limits enclose the unique
//! solution. The gap between the limits is a computable error certificate —
//! the operator is not a contraction (U₂/U₁ > 1), so a Banach-style error
//! bound would not be available.

mod discretization;
mod slice;
mod surface;

pub use discretization::{apply_a, build_discretization, Discretization};
pub use slice::GapSlice;
pub use surface::{assemble_surface, evaluate, temperature_derivatives, GapSurface};

use thiserror::Error;

use crate::constant_gap::{CouplingProblem, CurveError, GapCurve};
use crate::lipschitz::{self, BoundsError, CriticalConstants};
use crate::model::{ModelError, ModelParams, PotentialSpec, SolverConfig};

/// Absolute slack for the per-iteration monotonicity assertions.
const ORDER_SLACK: f64 = 1e-12;

/// Outward relative nudge applied to the starting iterates so that root-solve
/// error in Δ₁(T), Δ₂(T) cannot place a start on the wrong side of the fixed
/// point, which would break the monotone induction.
const START_NUDGE_PER_TOL: f64 = 1e3;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Curve(#[from] CurveError),

    #[error(transparent)]
    Bounds(#[from] BoundsError),

    #[error("operator input must be nonnegative, got {value} at node {index}")]
    NegativeInput { index: usize, value: f64 },

    #[error("operator input length {got} does not match the {expected} nodes")]
    LengthMismatch { got: usize, expected: usize },

    #[error(
        "slice at T={t} did not converge within {max_iter} iterations: \
         last sup-change {sup_change:e}, enclosure {enclosure:e}"
    )]
    NonConvergence {
        t: f64,
        max_iter: usize,
        sup_change: f64,
        enclosure: f64,
    },

    #[error(
        "monotone iteration violated at T={t}, iteration {iteration}, node {node}: \
         step {delta:e} crosses the admissible slack"
    )]
    MonotoneViolation {
        t: f64,
        iteration: usize,
        node: usize,
        delta: f64,
    },

    #[error(
        "iterate left the bracket band at T={t}, iteration {iteration}, node {node}: \
         value {value} outside [{lo}, {hi}]"
    )]
    BandViolation {
        t: f64,
        iteration: usize,
        node: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("temperature grid needs at least {min} points, got {got}")]
    GridTooSmall { got: usize, min: usize },

    #[error("temperature grid must be uniform for finite differences")]
    NonUniformGrid,

    #[error("query (T={t}, x={x}) outside the solved domain [0, {tau}] x [0, {hbar_omega_d}]")]
    OutOfDomain {
        t: f64,
        x: f64,
        tau: f64,
        hbar_omega_d: f64,
    },

    #[error("temperature {t} outside the horizon [0, {tau}]")]
    TemperatureOutsideHorizon { t: f64, tau: f64 },
}

/// A fully prepared gap problem: validated parameters, both reference curves,
/// the critical constants, and the Nyström discretization.
///
/// Everything here is immutable after construction; slices can be solved
/// concurrently.
#[derive(Debug)]
pub struct GapProblem {
    params: ModelParams,
    cfg: SolverConfig,
    constants: CriticalConstants,
    curve1: GapCurve,
    curve2: GapCurve,
    disc: Discretization,
}

impl GapProblem {
    pub fn new(params: ModelParams, cfg: SolverConfig) -> Result<Self, SolverError> {
        params.validate()?;
        cfg.validate()?;
        let curve1 = GapCurve::build(
            CouplingProblem::new(params.hbar_omega_d, params.u1)?,
            cfg.quad_tol,
            cfg.root_tol,
        )?;
        let curve2 = GapCurve::build(
            CouplingProblem::new(params.hbar_omega_d, params.u2)?,
            cfg.quad_tol,
            cfg.root_tol,
        )?;
        Self::from_parts(params, cfg, curve1, curve2)
    }

    /// Rebuild with a different potential, reusing the already-solved curves
    /// (they depend only on ħω_D, U1, U2).
    pub fn with_potential(&self, potential: PotentialSpec) -> Result<Self, SolverError> {
        let params = ModelParams {
            potential,
            ..self.params.clone()
        };
        params.validate()?;
        Self::from_parts(
            params,
            self.cfg.clone(),
            self.curve1.clone(),
            self.curve2.clone(),
        )
    }

    pub(crate) fn from_parts(
        params: ModelParams,
        cfg: SolverConfig,
        curve1: GapCurve,
        curve2: GapCurve,
    ) -> Result<Self, SolverError> {
        let constants = lipschitz::critical_constants(
            &curve1,
            &curve2,
            params.u2,
            cfg.tau_fraction,
            cfg.quad_tol,
            cfg.root_tol,
        )?;
        let disc = build_discretization(&params, cfg.n_nodes)?;
        Ok(Self {
            params,
            cfg,
            constants,
            curve1,
            curve2,
            disc,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn constants(&self) -> &CriticalConstants {
        &self.constants
    }

    pub fn curve1(&self) -> &GapCurve {
        &self.curve1
    }

    pub fn curve2(&self) -> &GapCurve {
        &self.curve2
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    /// The uniform temperature grid [0, τ] with `n_T` points.
    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.cfg.n_t;
        let tau = self.constants.tau;
        (0..n).map(|i| tau * i as f64 / (n - 1) as f64).collect()
    }

    /// Apply the discretized operator once.
    pub fn apply(&self, u: &[f64], t: f64) -> Result<Vec<f64>, SolverError> {
        apply_a(&self.disc, u, t)
    }

    /// Solve one temperature slice by two-sided monotone iteration.
    pub fn solve_slice(&self, t: f64) -> Result<GapSlice, SolverError> {
        slice::solve_slice(self, t)
    }

    /// Solve every slice of the temperature grid and assemble the surface
    /// with its finite-difference derivative tables.
    pub fn solve_surface(&self) -> Result<GapSurface, SolverError> {
        surface::solve_surface(self)
    }

    /// Sup-norm residual ‖u − Au‖ of the slice midpoint: the convergence
    /// certificate complementing the enclosure width.
    pub fn slice_residual(&self, slice: &GapSlice) -> Result<f64, SolverError> {
        let mid = slice.midpoint();
        let image = self.apply(&mid, slice.t)?;
        Ok(mid
            .iter()
            .zip(&image)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
