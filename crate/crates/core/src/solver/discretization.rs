//! Nyström discretization: quadrature rule plus kernel table.

use super::SolverError;
use crate::model::{ModelError, ModelParams};
use crate::numerics::{tanh_safe, Interval, QuadratureRule};

/// The discretized operator context: nodes, weights, and the kernel table
/// U(xᵢ, ξⱼ) evaluated on the node grid.
#[derive(Debug, Clone)]
pub struct Discretization {
    rule: QuadratureRule,
    /// Row-major n×n table, row = collocation point x, column = quadrature node ξ.
    kernel: Vec<f64>,
    n: usize,
}

impl Discretization {
    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kernel(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.n + j]
    }

    /// Evaluate the Nyström extension of node values `u` at an arbitrary
    /// energy `x`: the discrete operator applied with a fresh kernel row.
    pub fn extend(&self, params: &ModelParams, u: &[f64], t: f64, x: f64) -> f64 {
        let mut acc = 0.0;
        for (j, (&xi, &w)) in self.nodes().iter().zip(self.weights()).enumerate() {
            acc += w * params.coupling(x, xi) * integrand_factor(u[j], xi, t);
        }
        acc
    }
}

/// Build the operator context for `params` on an `n_nodes`-point
/// Gauss-Legendre rule over [0, ħω_D].
///
/// The potential is validated first; every kernel entry must lie in [U1, U2],
/// and a violation is reported with the offending (x, ξ).
pub fn build_discretization(
    params: &ModelParams,
    n_nodes: usize,
) -> Result<Discretization, SolverError> {
    params.validate()?;
    let domain = Interval::new(0.0, params.hbar_omega_d).map_err(crate::constant_gap::CurveError::from)?;
    let rule = QuadratureRule::gauss_legendre(n_nodes, domain)
        .map_err(crate::constant_gap::CurveError::from)?;
    let n = n_nodes;
    let slack = 1e-12 * params.u2;
    let mut kernel = Vec::with_capacity(n * n);
    for &x in rule.nodes() {
        for &xi in rule.nodes() {
            let v = params.coupling(x, xi);
            if !(v >= params.u1 - slack && v <= params.u2 + slack) {
                return Err(SolverError::Model(ModelError::PotentialOutOfBounds {
                    x,
                    xi,
                    value: v,
                    u1: params.u1,
                    u2: params.u2,
                }));
            }
            kernel.push(v);
        }
    }
    Ok(Discretization { rule, kernel, n })
}

/// The scalar factor u/√(ξ²+u²)·tanh(√(ξ²+u²)/2T) of the integrand.
///
/// At T = 0 the tanh factor is exactly 1 wherever the argument is positive;
/// a zero gap value contributes nothing.
#[inline]
fn integrand_factor(u: f64, xi: f64, t: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let s = (xi * xi + u * u).sqrt();
    let th = if t == 0.0 { 1.0 } else { tanh_safe(s / (2.0 * t)) };
    u / s * th
}

/// One application of the discretized operator:
/// (Au)ᵢ = Σⱼ wⱼ·U(xᵢ, ξⱼ)·uⱼ/√(ξⱼ²+uⱼ²)·tanh(√(ξⱼ²+uⱼ²)/2T).
///
/// Inputs must be nonnegative; the image is nonnegative by construction.
pub fn apply_a(disc: &Discretization, u: &[f64], t: f64) -> Result<Vec<f64>, SolverError> {
    let n = disc.len();
    if u.len() != n {
        return Err(SolverError::LengthMismatch {
            got: u.len(),
            expected: n,
        });
    }
    for (index, &value) in u.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(SolverError::NegativeInput { index, value });
        }
    }
    let weighted: Vec<f64> = disc
        .nodes()
        .iter()
        .zip(disc.weights())
        .zip(u)
        .map(|((&xi, &w), &uj)| w * integrand_factor(uj, xi, t))
        .collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let row = &disc.kernel[i * n..(i + 1) * n];
        let mut acc = 0.0;
        for (k, q) in row.iter().zip(&weighted) {
            acc += k * q;
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constant_gap::{delta_curve_value, solve_tau_c, CouplingProblem};
    use crate::model::PotentialSpec;

    fn constant_params(u: f64) -> ModelParams {
        ModelParams {
            hbar_omega_d: 1.0,
            u1: 0.3,
            u2: 0.3002,
            potential: PotentialSpec::Constant { value: u },
        }
    }

    #[test]
    fn constant_potential_gives_constant_kernel() {
        let disc = build_discretization(&constant_params(0.3), 24).unwrap();
        for i in 0..disc.len() {
            for j in 0..disc.len() {
                assert_eq!(disc.kernel(i, j), 0.3);
            }
        }
    }

    #[test]
    fn weights_integrate_unity_to_the_cutoff() {
        let disc = build_discretization(&constant_params(0.3), 64).unwrap();
        let sum: f64 = disc.weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(disc.nodes().windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn separable_potential_floors_at_the_edges() {
        let params = ModelParams {
            potential: PotentialSpec::Separable { amplitude: 1.0 },
            ..constant_params(0.3)
        };
        let disc = build_discretization(&params, 32).unwrap();
        // Collocation nodes are interior, so check the potential itself at
        // x = 0, where the separable profile collapses to U1 for every ξ.
        for &xi in disc.nodes() {
            assert_eq!(params.coupling(0.0, xi), params.u1);
        }
        // All kernel entries live inside the coupling band.
        for i in 0..disc.len() {
            for j in 0..disc.len() {
                let v = disc.kernel(i, j);
                assert!(v >= params.u1 && v <= params.u2);
            }
        }
    }

    #[test]
    fn zero_input_maps_to_zero() {
        let disc = build_discretization(&constant_params(0.3), 24).unwrap();
        let out = apply_a(&disc, &vec![0.0; 24], 0.01).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_curve_value_is_a_fixed_point() {
        let params = constant_params(0.3);
        let disc = build_discretization(&params, 64).unwrap();
        let p = CouplingProblem::new(1.0, 0.3).unwrap();
        let tau_c = solve_tau_c(&p, 1e-12, 1e-12).unwrap();
        for frac in [0.0, 0.2, 0.4] {
            let t = frac * tau_c * 0.5;
            let d = delta_curve_value(&p, tau_c, t, 1e-12, 1e-12).unwrap();
            let u = vec![d; 64];
            let au = apply_a(&disc, &u, t).unwrap();
            for v in &au {
                assert!(
                    (v - d).abs() < 1e-10,
                    "fixed point drifted: {v} vs {d} at T={t}"
                );
            }
        }
    }

    #[test]
    fn rejects_negative_input_and_wrong_length() {
        let disc = build_discretization(&constant_params(0.3), 24).unwrap();
        let mut u = vec![0.01; 24];
        u[5] = -1e-9;
        assert!(matches!(
            apply_a(&disc, &u, 0.01),
            Err(SolverError::NegativeInput { index: 5, .. })
        ));
        assert!(matches!(
            apply_a(&disc, &[0.0; 3], 0.01),
            Err(SolverError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn out_of_band_potential_names_the_offender() {
        match build_discretization(&constant_params(0.5), 24) {
            Err(SolverError::Model(ModelError::PotentialOutOfBounds { value, x, xi, .. })) => {
                assert_eq!(value, 0.5);
                assert!(x.is_finite() && xi.is_finite());
            }
            other => panic!("expected potential bound violation, got {other:?}"),
        }
    }
}
