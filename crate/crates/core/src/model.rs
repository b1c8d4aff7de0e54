//! Problem definition: physical parameters, potential specification, and
//! solver configuration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of points per axis of the potential validation grid.
const VALIDATION_GRID: usize = 64;

/// Relative slack allowed when checking the potential against its bounds,
/// absorbing interpolation rounding.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("hbar_omega_D must be finite and positive, got {0}")]
    BadCutoff(f64),

    #[error("couplings must satisfy 0 < U1 < U2 and be finite, got U1={u1}, U2={u2}")]
    BadCouplings { u1: f64, u2: f64 },

    #[error("potential value {value} at (x={x}, xi={xi}) lies outside [U1, U2] = [{u1}, {u2}]")]
    PotentialOutOfBounds {
        x: f64,
        xi: f64,
        value: f64,
        u1: f64,
        u2: f64,
    },

    #[error("separable amplitude must lie in [0, 1], got {0}")]
    BadAmplitude(f64),

    #[error("table grid must be strictly increasing and span [0, hbar_omega_D]")]
    BadTableGrid,

    #[error("table values shape {rows}x{cols} does not match grids {nx}x{nxi}")]
    BadTableShape {
        rows: usize,
        cols: usize,
        nx: usize,
        nxi: usize,
    },

    #[error("solver config: {0}")]
    BadSolverConfig(String),
}

/// The pairing potential U(x, ξ) on [0, ħω_D]².
///
/// Every variant must evaluate into [U1, U2]; this is checked on a
/// 64x64 validation grid when the model is validated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// U(x, ξ) = value everywhere.
    Constant { value: f64 },
    /// U(x, ξ) = U1 + (U2 − U1)·amplitude·k(x)·k(ξ) with k(x) = sin(πx/ħω_D).
    Separable { amplitude: f64 },
    /// Bilinear interpolation of `values[i][j]` at (x_grid[i], xi_grid[j]).
    Table {
        x_grid: Vec<f64>,
        xi_grid: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

/// The physical problem: cutoff, coupling bounds, and the potential.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(rename = "hbar_omega_D")]
    pub hbar_omega_d: f64,
    #[serde(rename = "U1")]
    pub u1: f64,
    #[serde(rename = "U2")]
    pub u2: f64,
    pub potential: PotentialSpec,
}

impl ModelParams {
    /// Evaluate the potential at (x, ξ).
    pub fn coupling(&self, x: f64, xi: f64) -> f64 {
        match &self.potential {
            PotentialSpec::Constant { value } => *value,
            PotentialSpec::Separable { amplitude } => {
                let k = |s: f64| (std::f64::consts::PI * s / self.hbar_omega_d).sin();
                self.u1 + (self.u2 - self.u1) * amplitude * k(x) * k(xi)
            }
            PotentialSpec::Table {
                x_grid,
                xi_grid,
                values,
            } => {
                let (i, tx) = locate(x_grid, x);
                let (j, ty) = locate(xi_grid, xi);
                let v00 = values[i][j];
                let v01 = values[i][j + 1];
                let v10 = values[i + 1][j];
                let v11 = values[i + 1][j + 1];
                (1.0 - tx) * ((1.0 - ty) * v00 + ty * v01) + tx * ((1.0 - ty) * v10 + ty * v11)
            }
        }
    }

    /// Check field invariants and the bound condition U1 ≤ U(x, ξ) ≤ U2 on the
    /// validation grid. Returns the first offending (x, ξ) on failure.
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.hbar_omega_d.is_finite() && self.hbar_omega_d > 0.0) {
            return Err(ModelError::BadCutoff(self.hbar_omega_d));
        }
        if !(self.u1.is_finite() && self.u2.is_finite() && 0.0 < self.u1 && self.u1 < self.u2) {
            return Err(ModelError::BadCouplings {
                u1: self.u1,
                u2: self.u2,
            });
        }
        match &self.potential {
            PotentialSpec::Constant { .. } => {}
            PotentialSpec::Separable { amplitude } => {
                if !(amplitude.is_finite() && (0.0..=1.0).contains(amplitude)) {
                    return Err(ModelError::BadAmplitude(*amplitude));
                }
            }
            PotentialSpec::Table {
                x_grid,
                xi_grid,
                values,
            } => {
                for grid in [x_grid, xi_grid] {
                    if grid.len() < 2
                        || grid.windows(2).any(|p| p[0] >= p[1])
                        || grid[0] != 0.0
                        || (grid[grid.len() - 1] - self.hbar_omega_d).abs()
                            > BOUND_SLACK * self.hbar_omega_d
                    {
                        return Err(ModelError::BadTableGrid);
                    }
                }
                let rows = values.len();
                let cols = values.first().map_or(0, Vec::len);
                if rows != x_grid.len()
                    || values.iter().any(|r| r.len() != cols)
                    || cols != xi_grid.len()
                {
                    return Err(ModelError::BadTableShape {
                        rows,
                        cols,
                        nx: x_grid.len(),
                        nxi: xi_grid.len(),
                    });
                }
            }
        }
        let slack = BOUND_SLACK * self.u2;
        let n = VALIDATION_GRID;
        for i in 0..n {
            let x = self.hbar_omega_d * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let xi = self.hbar_omega_d * j as f64 / (n - 1) as f64;
                let v = self.coupling(x, xi);
                if !(v >= self.u1 - slack && v <= self.u2 + slack) {
                    return Err(ModelError::PotentialOutOfBounds {
                        x,
                        xi,
                        value: v,
                        u1: self.u1,
                        u2: self.u2,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Locate `x` in a strictly increasing grid: returns (cell index, local coordinate).
/// Queries outside the grid hull are clamped to the boundary cells.
fn locate(grid: &[f64], x: f64) -> (usize, f64) {
    let n = grid.len();
    if x <= grid[0] {
        return (0, 0.0);
    }
    if x >= grid[n - 1] {
        return (n - 2, 1.0);
    }
    let i = match grid.binary_search_by(|g| g.total_cmp(&x)) {
        Ok(k) => k.min(n - 2),
        Err(k) => k - 1,
    };
    let t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    (i, t)
}

/// All tolerances, grid sizes, iteration caps, and the τ-fraction.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Quadrature nodes of the Nyström discretization.
    pub n_nodes: usize,
    /// Temperature grid points on [0, τ], endpoints included.
    #[serde(rename = "n_T")]
    pub n_t: usize,
    /// τ = tau_fraction · τ0, must lie strictly in (0, 1).
    pub tau_fraction: f64,
    /// Mixed absolute/relative tolerance of adaptive quadrature.
    pub quad_tol: f64,
    /// Bracket width tolerance of scalar root solves, relative to scale.
    pub root_tol: f64,
    /// Sup-norm stopping tolerance of the fixed-point iteration.
    pub fp_tol: f64,
    /// Iteration cap per direction of the two-sided iteration.
    pub max_iter: usize,
    /// Seed for the randomized conformance checks.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_nodes: 64,
            n_t: 33,
            tau_fraction: 0.95,
            quad_tol: 1e-12,
            root_tol: 1e-12,
            fp_tol: 1e-10,
            max_iter: 10_000,
            seed: 42,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::BadSolverConfig(msg));
        if self.n_nodes < 16 {
            return bad(format!("n_nodes must be >= 16, got {}", self.n_nodes));
        }
        if self.n_t < 5 {
            return bad(format!("n_T must be >= 5, got {}", self.n_t));
        }
        if !(self.tau_fraction > 0.0 && self.tau_fraction < 1.0) {
            return bad(format!(
                "tau_fraction must lie in (0, 1), got {}",
                self.tau_fraction
            ));
        }
        for (name, v) in [
            ("quad_tol", self.quad_tol),
            ("root_tol", self.root_tol),
            ("fp_tol", self.fp_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        Ok(())
    }
}
