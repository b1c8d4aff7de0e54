//! The solution surface over the temperature grid, with interpolation and
//! finite-difference temperature derivatives.

use serde::Serialize;

use super::{GapProblem, GapSlice, SolverError};
use crate::model::ModelParams;

/// Minimum temperature-grid size for second-order finite differences.
const MIN_T_POINTS: usize = 5;

/// Relative non-uniformity tolerated in the grid spacing.
const UNIFORMITY_RTOL: f64 = 1e-9;

/// The solved surface u₀(T, x): one certified slice per grid temperature plus
/// finite-difference derivative tables.
#[derive(Debug, Clone, Serialize)]
pub struct GapSurface {
    pub params: ModelParams,
    pub t_grid: Vec<f64>,
    pub slices: Vec<GapSlice>,
    /// Temperature-Lipschitz constant attached to this surface.
    pub gamma: f64,
    /// ∂u/∂T table, row per grid temperature, column per node.
    pub dt1: Vec<Vec<f64>>,
    /// ∂²u/∂T² table, same layout.
    pub dt2: Vec<Vec<f64>>,
}

impl GapSurface {
    /// Midpoint values, row per grid temperature.
    pub fn midpoints(&self) -> Vec<Vec<f64>> {
        self.slices.iter().map(GapSlice::midpoint).collect()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.slices[0].nodes
    }

    /// Largest enclosure width over all slices.
    pub fn max_enclosure(&self) -> f64 {
        self.slices
            .iter()
            .map(|s| s.enclosure_width)
            .fold(0.0, f64::max)
    }
}

/// Solve every slice of the problem's temperature grid. Slices are
/// independent problems; failures carry their temperature.
pub(super) fn solve_surface(problem: &GapProblem) -> Result<GapSurface, SolverError> {
    let t_grid = problem.t_grid();
    let mut slices = Vec::with_capacity(t_grid.len());
    for &t in &t_grid {
        slices.push(problem.solve_slice(t)?);
    }
    assemble_surface(problem, slices)
}

/// Assemble a surface from slices already solved on the problem's grid
/// (for callers that drive the slice loop themselves) and fill the
/// finite-difference derivative tables.
pub fn assemble_surface(
    problem: &GapProblem,
    slices: Vec<GapSlice>,
) -> Result<GapSurface, SolverError> {
    let t_grid: Vec<f64> = slices.iter().map(|s| s.t).collect();
    let mut surface = GapSurface {
        params: problem.params().clone(),
        t_grid,
        slices,
        gamma: problem.constants().gamma,
        dt1: Vec::new(),
        dt2: Vec::new(),
    };
    let (dt1, dt2) = temperature_derivatives(&surface)?;
    surface.dt1 = dt1;
    surface.dt2 = dt2;
    Ok(surface)
}

/// Bilinear interpolation of the midpoint values over (T-grid × nodes).
///
/// Exact at grid points; energies outside the node hull are clamped to the
/// boundary node (the hull misses only a thin strip at each end of [0, ħω_D]).
pub fn evaluate(surface: &GapSurface, t: f64, x: f64) -> Result<f64, SolverError> {
    let tau = *surface.t_grid.last().expect("surface has slices");
    let hbar_omega_d = surface.params.hbar_omega_d;
    if !(t >= 0.0 && t <= tau && x >= 0.0 && x <= hbar_omega_d) {
        return Err(SolverError::OutOfDomain {
            t,
            x,
            tau,
            hbar_omega_d,
        });
    }
    let (i, wt) = locate(&surface.t_grid, t);
    let nodes = surface.nodes();
    let (j, wx) = locate(nodes, x);

    let value = |row: usize, col: usize| -> f64 {
        let s = &surface.slices[row];
        0.5 * (s.upper[col] + s.lower[col])
    };
    let v00 = value(i, j);
    let v01 = value(i, j + 1);
    let v10 = value(i + 1, j);
    let v11 = value(i + 1, j + 1);
    Ok((1.0 - wt) * ((1.0 - wx) * v00 + wx * v01) + wt * ((1.0 - wx) * v10 + wx * v11))
}

fn locate(grid: &[f64], q: f64) -> (usize, f64) {
    let n = grid.len();
    if q <= grid[0] {
        return (0, 0.0);
    }
    if q >= grid[n - 1] {
        return (n - 2, 1.0);
    }
    let i = match grid.binary_search_by(|g| g.total_cmp(&q)) {
        // Exact hit; the top end was handled above, so k <= n-2.
        Ok(k) => return (k, 0.0),
        Err(k) => k - 1,
    };
    (i, (q - grid[i]) / (grid[i + 1] - grid[i]))
}

/// First and second finite-difference temperature derivatives of the midpoint
/// values: central differences at interior points, second-order one-sided
/// stencils at the ends. Requires a uniform grid of at least 5 points.
pub fn temperature_derivatives(
    surface: &GapSurface,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), SolverError> {
    let nt = surface.t_grid.len();
    if nt < MIN_T_POINTS {
        return Err(SolverError::GridTooSmall {
            got: nt,
            min: MIN_T_POINTS,
        });
    }
    let h = surface.t_grid[1] - surface.t_grid[0];
    for pair in surface.t_grid.windows(2) {
        if ((pair[1] - pair[0]) - h).abs() > UNIFORMITY_RTOL * h {
            return Err(SolverError::NonUniformGrid);
        }
    }
    let u = surface.midpoints();
    let nx = u[0].len();
    let mut dt1 = vec![vec![0.0; nx]; nt];
    let mut dt2 = vec![vec![0.0; nx]; nt];
    for j in 0..nx {
        for i in 0..nt {
            dt1[i][j] = if i == 0 {
                (-3.0 * u[0][j] + 4.0 * u[1][j] - u[2][j]) / (2.0 * h)
            } else if i == nt - 1 {
                (3.0 * u[nt - 1][j] - 4.0 * u[nt - 2][j] + u[nt - 3][j]) / (2.0 * h)
            } else {
                (u[i + 1][j] - u[i - 1][j]) / (2.0 * h)
            };
            dt2[i][j] = if i == 0 {
                (2.0 * u[0][j] - 5.0 * u[1][j] + 4.0 * u[2][j] - u[3][j]) / (h * h)
            } else if i == nt - 1 {
                (2.0 * u[nt - 1][j] - 5.0 * u[nt - 2][j] + 4.0 * u[nt - 3][j] - u[nt - 4][j])
                    / (h * h)
            } else {
                (u[i + 1][j] - 2.0 * u[i][j] + u[i - 1][j]) / (h * h)
            };
        }
    }
    Ok((dt1, dt2))
}
