//! Per-temperature slice solve by two-sided monotone iteration.

use serde::Serialize;

use super::{apply_a, GapProblem, SolverError, ORDER_SLACK, START_NUDGE_PER_TOL};

/// The certified solution of one temperature slice.
///
/// `lower` ascends from Δ₁(T), `upper` descends from Δ₂(T); both converge to
/// the unique solution, and their final gap is the enclosure certificate.
#[derive(Debug, Clone, Serialize)]
pub struct GapSlice {
    /// Temperature of this slice.
    pub t: f64,
    /// Quadrature nodes (energies) the values live on.
    pub nodes: Vec<f64>,
    /// Iterate descending from Δ₂(T).
    pub upper: Vec<f64>,
    /// Iterate ascending from Δ₁(T).
    pub lower: Vec<f64>,
    /// Sup-norm gap between upper and lower at convergence.
    pub enclosure_width: f64,
    /// Iteration counters (lower direction, upper direction).
    pub iterations: (usize, usize),
}

impl GapSlice {
    /// Midpoint of the enclosure, the reported solution values.
    pub fn midpoint(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| 0.5 * (u + l))
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Descending,
    Ascending,
}

#[derive(Clone, Copy)]
struct Band {
    lo: f64,
    hi: f64,
}

pub(super) fn solve_slice(problem: &GapProblem, t: f64) -> Result<GapSlice, SolverError> {
    let tau = problem.constants().tau;
    if !(0.0..=tau * (1.0 + 1e-12)).contains(&t) {
        return Err(SolverError::TemperatureOutsideHorizon { t, tau });
    }
    let cfg = problem.config();
    let d1 = problem.curve1().value_exact(t)?;
    let d2 = problem.curve2().value_exact(t)?;

    // Start strictly outside [Δ1, Δ2] so the first operator application moves
    // inward despite root-solve error in d1, d2.
    let nudge = START_NUDGE_PER_TOL * (cfg.root_tol + cfg.quad_tol);
    let start_lower = d1 * (1.0 - nudge);
    let start_upper = d2 * (1.0 + nudge);
    let band = Band {
        lo: start_lower - ORDER_SLACK,
        hi: start_upper + ORDER_SLACK,
    };

    let n = problem.discretization().len();
    let mut upper = vec![start_upper; n];
    let mut lower = vec![start_lower; n];
    let mut upper_iters = 0usize;
    let mut lower_iters = 0usize;
    let mut upper_change = f64::INFINITY;
    let mut lower_change = f64::INFINITY;

    for iteration in 1..=cfg.max_iter {
        if upper_change >= cfg.fp_tol {
            upper_change = step(problem, t, &mut upper, Direction::Descending, band, iteration)?;
            upper_iters = iteration;
        }
        if lower_change >= cfg.fp_tol {
            lower_change = step(problem, t, &mut lower, Direction::Ascending, band, iteration)?;
            lower_iters = iteration;
        }
        if upper_change < cfg.fp_tol && lower_change < cfg.fp_tol {
            break;
        }
    }

    let enclosure_width = upper
        .iter()
        .zip(&lower)
        .map(|(u, l)| u - l)
        .fold(0.0f64, f64::max)
        .max(0.0);

    if upper_change >= cfg.fp_tol || lower_change >= cfg.fp_tol {
        return Err(SolverError::NonConvergence {
            t,
            max_iter: cfg.max_iter,
            sup_change: upper_change.max(lower_change),
            enclosure: enclosure_width,
        });
    }

    for (j, (u, l)) in upper.iter().zip(&lower).enumerate() {
        if l - u > ORDER_SLACK {
            return Err(SolverError::BandViolation {
                t,
                iteration: lower_iters.max(upper_iters),
                node: j,
                value: *l,
                lo: band.lo,
                hi: *u,
            });
        }
    }

    Ok(GapSlice {
        t,
        nodes: problem.discretization().nodes().to_vec(),
        upper,
        lower,
        enclosure_width,
        iterations: (lower_iters, upper_iters),
    })
}

/// Advance one iterate in place, asserting monotonicity and band membership at
/// every node; returns the sup-norm change.
fn step(
    problem: &GapProblem,
    t: f64,
    u: &mut Vec<f64>,
    direction: Direction,
    band: Band,
    iteration: usize,
) -> Result<f64, SolverError> {
    let next = apply_a(problem.discretization(), u, t)?;
    let mut sup_change = 0.0f64;
    for (node, (&prev, &curr)) in u.iter().zip(&next).enumerate() {
        let step = curr - prev;
        let violation = match direction {
            Direction::Descending => step > ORDER_SLACK,
            Direction::Ascending => step < -ORDER_SLACK,
        };
        if violation {
            return Err(SolverError::MonotoneViolation {
                t,
                iteration,
                node,
                delta: step,
            });
        }
        if curr < band.lo || curr > band.hi {
            return Err(SolverError::BandViolation {
                t,
                iteration,
                node,
                value: curr,
                lo: band.lo,
                hi: band.hi,
            });
        }
        sup_change = sup_change.max(step.abs());
    }
    *u = next;
    Ok(sup_change)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ModelParams, PotentialSpec, SolverConfig};

    fn problem(potential: PotentialSpec) -> GapProblem {
        let params = ModelParams {
            hbar_omega_d: 1.0,
            u1: 0.3,
            u2: 0.3002,
            potential,
        };
        GapProblem::new(params, SolverConfig::default()).unwrap()
    }

    #[test]
    fn constant_u1_slice_reproduces_the_scalar_curve() {
        let p = problem(PotentialSpec::Constant { value: 0.3 });
        let tau = p.constants().tau;
        for t in [0.0, 0.5 * tau, tau] {
            let slice = p.solve_slice(t).unwrap();
            let oracle = p.curve1().value_exact(t).unwrap();
            for (u, l) in slice.upper.iter().zip(&slice.lower) {
                assert!(
                    (0.5 * (u + l) - oracle).abs() < 1e-8,
                    "slice value {} vs curve {oracle} at T={t}",
                    0.5 * (u + l)
                );
            }
            assert!(slice.iterations.0 >= 1 && slice.iterations.1 >= 1);
        }
    }

    #[test]
    fn separable_slice_encloses_tightly_and_sits_in_band() {
        let p = problem(PotentialSpec::Separable { amplitude: 1.0 });
        let tau = p.constants().tau;
        let slice = p.solve_slice(0.5 * tau).unwrap();
        assert!(
            slice.enclosure_width < 10.0 * p.config().fp_tol,
            "enclosure {} too wide",
            slice.enclosure_width
        );
        let d1 = p.curve1().value_exact(slice.t).unwrap();
        let d2 = p.curve2().value_exact(slice.t).unwrap();
        let slack = slice.enclosure_width + 1e-8;
        for (u, l) in slice.upper.iter().zip(&slice.lower) {
            assert!(*l >= d1 - slack && *u <= d2 + slack);
            assert!(l <= u);
        }
    }

    #[test]
    fn zero_temperature_slice_is_well_defined() {
        let p = problem(PotentialSpec::Separable { amplitude: 1.0 });
        let slice = p.solve_slice(0.0).unwrap();
        assert!(slice.enclosure_width < 1e-8);
        let d1 = p.constants().delta1_zero;
        for v in slice.midpoint() {
            assert!(v >= d1 - 1e-8);
        }
    }

    #[test]
    fn horizon_is_enforced() {
        let p = problem(PotentialSpec::Constant { value: 0.3 });
        let tau = p.constants().tau;
        assert!(matches!(
            p.solve_slice(1.5 * tau),
            Err(SolverError::TemperatureOutsideHorizon { .. })
        ));
        assert!(p.solve_slice(-0.1).is_err());
    }

    #[test]
    fn iteration_cap_reports_non_convergence_with_temperature() {
        let params = ModelParams {
            hbar_omega_d: 1.0,
            u1: 0.3,
            u2: 0.3002,
            potential: PotentialSpec::Separable { amplitude: 1.0 },
        };
        let cfg = SolverConfig {
            max_iter: 1,
            fp_tol: 1e-15,
            ..SolverConfig::default()
        };
        let p = GapProblem::new(params, cfg).unwrap();
        let tau = p.constants().tau;
        match p.solve_slice(0.3 * tau) {
            Err(SolverError::NonConvergence { t, enclosure, .. }) => {
                assert!((t - 0.3 * tau).abs() < 1e-15);
                assert!(enclosure.is_finite() && enclosure >= 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn residual_certificate_tracks_the_enclosure() {
        let p = problem(PotentialSpec::Separable { amplitude: 1.0 });
        let slice = p.solve_slice(0.25 * p.constants().tau).unwrap();
        let residual = p.slice_residual(&slice).unwrap();
        assert!(
            residual <= 2.0 * slice.enclosure_width + 1e-8,
            "residual {residual} vs enclosure {}",
            slice.enclosure_width
        );
    }
}
