//! Solver and verification suite for the BCS-Bogoliubov gap equation.
//!
//! The gap equation is a nonlinear integral self-consistency condition for the
//! superconducting energy gap `u(T, x)` as a function of temperature `T` and
//! energy `x`:
//!
//! ```text
//! u(T, x) = ∫₀^{ħω_D} U(x, ξ) u(T, ξ) / √(ξ² + u(T, ξ)²) · tanh(√(ξ² + u(T, ξ)²) / 2T) dξ
//! ```
//!
//! For a pairing potential squeezed between two constants, `U₁ ≤ U(x, ξ) ≤ U₂`,
//! the solution is squeezed between the two constant-potential gap curves
//! `Δ₁(T) ≤ u(T, x) ≤ Δ₂(T)`. This crate computes
//!
//! * the constant-potential curves `Δ₁`, `Δ₂` and their vanishing temperatures
//!   `τ₁`, `τ₂` (which bracket the physical transition temperature),
//! * the auxiliary constants `z₀`, `τ₀`, `a`, `b` and the temperature-Lipschitz
//!   constant `γ = U₂b / (1 − U₂a)`,
//! * the full solution surface `u₀(T, x)` by Nyström discretization and
//!   two-sided monotone fixed-point iteration, with a certified enclosure, and
//! * a conformance report checking every numerically testable property of the
//!   underlying theory against the computed data.

pub mod constant_gap;
pub mod lipschitz;
pub mod model;
pub mod numerics;
pub mod solver;
pub mod verify;

pub use constant_gap::{CouplingProblem, GapCurve};
pub use lipschitz::{BoundConstants, CouplingWindowReport, CriticalConstants};
pub use model::{ModelParams, PotentialSpec, SolverConfig};
pub use numerics::{Interval, QuadratureRule};
pub use solver::{Discretization, GapProblem, GapSlice, GapSurface};
pub use verify::CheckResult;
