//! Gauss-Legendre rules and globally adaptive Gauss-Kronrod integration.

use std::collections::BinaryHeap;

use super::{Interval, NumericsError};

/// 15-point Kronrod abscissae on [-1, 1] (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// 7-point Gauss weights for the embedded rule (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Refinement limit: maximum number of panels held by the adaptive scheme.
const MAX_PANELS: usize = 4096;

/// One G7-K15 evaluation over [lo, hi]: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64), NumericsError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let eval = |x: f64| -> Result<f64, NumericsError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFiniteEvaluation { x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &xj) in XGK.iter().enumerate().take(7) {
        let dx = half * xj;
        let fsum = eval(center - dx)? + eval(center + dx)?;
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    Ok((kronrod, (kronrod - gauss).abs()))
}

#[derive(Debug)]
struct Panel {
    err: f64,
    val: f64,
    lo: f64,
    hi: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.lo == other.lo
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Worst error first; tie-break on position for determinism.
        self.err
            .total_cmp(&other.err)
            .then(other.lo.total_cmp(&self.lo))
    }
}

/// Integrate `f` over `interval` to a mixed absolute/relative tolerance:
/// the result `I` satisfies |I − ∫f| ≤ tol·max(1, |I|) for smooth integrands.
///
/// Globally adaptive bisection on G7-K15 panels. Removable singularities must
/// already be regularized by the caller (supply the limit value).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    interval: Interval,
    tol: f64,
) -> Result<f64, NumericsError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(NumericsError::InvalidTolerance(tol));
    }

    let (val, err) = gk15(&f, interval.lo(), interval.hi())?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        err,
        val,
        lo: interval.lo(),
        hi: interval.hi(),
    });
    let mut total_val = val;
    let mut total_err = err;

    loop {
        let target = tol * total_val.abs().max(1.0);
        if total_err <= target {
            return Ok(total_val);
        }
        if heap.len() >= MAX_PANELS {
            return Err(NumericsError::QuadratureNoConvergence {
                best: total_val,
                error_estimate: total_err,
                target,
            });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel is at f64 resolution; cannot refine further.
            return Err(NumericsError::QuadratureNoConvergence {
                best: total_val,
                error_estimate: total_err,
                target,
            });
        }
        let (lv, le) = gk15(&f, worst.lo, mid)?;
        let (rv, re) = gk15(&f, mid, worst.hi)?;
        total_val += lv + rv - worst.val;
        total_err += le + re - worst.err;
        heap.push(Panel {
            err: le,
            val: lv,
            lo: worst.lo,
            hi: mid,
        });
        heap.push(Panel {
            err: re,
            val: rv,
            lo: mid,
            hi: worst.hi,
        });
    }
}

/// A positive-weight quadrature rule with strictly increasing nodes.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
}

impl QuadratureRule {
    /// Gauss-Legendre rule with `n` nodes mapped onto `interval`.
    ///
    /// Exact for polynomials of degree up to 2n − 1; weights sum to the
    /// interval width.
    pub fn gauss_legendre(n: usize, interval: Interval) -> Result<Self, NumericsError> {
        if n < 2 {
            return Err(NumericsError::RuleTooSmall(n));
        }
        let (ref_nodes, ref_weights) = legendre_nodes_weights(n);
        let c = interval.midpoint();
        let h = 0.5 * interval.width();
        let nodes: Vec<f64> = ref_nodes.iter().map(|&x| c + h * x).collect();
        let weights: Vec<f64> = ref_weights.iter().map(|&w| h * w).collect();
        Ok(Self {
            nodes,
            weights,
            order: n,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Apply the rule to node samples `values`.
    pub fn apply(&self, values: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence, seeded with the Chebyshev
/// approximation of the roots; the node set is symmetrized explicitly.
fn legendre_nodes_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Root of P_n closest to this Chebyshev angle.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_eval(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // cos runs the roots from +1 downward; store symmetrically.
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial P_n at x.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_integrand() {
        let v = integrate(|_| 1.0, unit(), 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_integrand() {
        let v = integrate(|x| x, unit(), 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cubic_matches_closed_form() {
        // 3x³ − 2x² + 5x − 1 over [0,1] = 3/4 − 2/3 + 5/2 − 1 = 19/12
        let v = integrate(|x| 3.0 * x.powi(3) - 2.0 * x * x + 5.0 * x - 1.0, unit(), 1e-10)
            .unwrap();
        assert!((v - 19.0 / 12.0).abs() < 1e-10);
    }

    #[test]
    fn regularized_tanh_kernel_matches_dense_trapezoid() {
        // Oracle: 10^6-point trapezoid on the same regularized integrand.
        let tau = 0.1; // tanh(xi/(2*0.1)) / xi with limit 1/(2*0.1) = 5 at 0
        let f = |x: f64| {
            if x == 0.0 {
                1.0 / (2.0 * tau)
            } else {
                (x / (2.0 * tau)).tanh() / x
            }
        };
        let n = 1_000_000usize;
        let h = 1.0 / n as f64;
        let mut oracle = 0.5 * (f(0.0) + f(1.0));
        for i in 1..n {
            oracle += f(i as f64 * h);
        }
        oracle *= h;

        let v = integrate(f, unit(), 1e-10).unwrap();
        assert!(
            (v - oracle).abs() < 1e-8,
            "adaptive {v} vs trapezoid {oracle}"
        );
    }

    #[test]
    fn additivity_across_split_point() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp() + 1.0;
        let tol = 1e-11;
        let whole = integrate(f, Interval::new(0.0, 2.0).unwrap(), tol).unwrap();
        let left = integrate(f, Interval::new(0.0, 0.7).unwrap(), tol).unwrap();
        let right = integrate(f, Interval::new(0.7, 2.0).unwrap(), tol).unwrap();
        assert!((whole - left - right).abs() <= 3.0 * tol * whole.abs().max(1.0));
    }

    #[test]
    fn oscillatory_integrand_hits_refinement_limit() {
        let err = integrate(|x| (1e6 * x).sin(), unit(), 1e-14).unwrap_err();
        match err {
            NumericsError::QuadratureNoConvergence {
                best,
                error_estimate,
                ..
            } => {
                assert!(best.is_finite());
                assert!(error_estimate > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(matches!(
            integrate(|_| 1.0, unit(), 0.0),
            Err(NumericsError::InvalidTolerance(_))
        ));
        assert!(matches!(
            integrate(|_| 1.0, unit(), -1e-3),
            Err(NumericsError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn propagates_non_finite_integrand() {
        let err = integrate(|x| 1.0 / x, Interval::new(-1.0, 1.0).unwrap(), 1e-8).unwrap_err();
        assert!(matches!(err, NumericsError::NonFiniteEvaluation { .. }));
    }

    #[test]
    fn gauss_legendre_rule_is_valid() {
        for n in [2, 5, 10, 17, 64, 65] {
            let rule = QuadratureRule::gauss_legendre(n, unit()).unwrap();
            assert_eq!(rule.order(), n);
            assert_eq!(rule.nodes().len(), n);
            for w in rule.weights() {
                assert!(*w > 0.0);
            }
            for pair in rule.nodes().windows(2) {
                assert!(pair[0] < pair[1]);
            }
            let sum: f64 = rule.weights().iter().sum();
            assert!(
                (sum - 1.0).abs() < 1e-12,
                "n={n}: weights sum to {sum}"
            );
        }
    }

    #[test]
    fn gauss_legendre_polynomial_exactness() {
        // 10-point rule integrates x^19 on [0,1] exactly (degree 2n−1).
        let rule = QuadratureRule::gauss_legendre(10, unit()).unwrap();
        let vals: Vec<f64> = rule.nodes().iter().map(|x| x.powi(19)).collect();
        assert!((rule.apply(&vals) - 1.0 / 20.0).abs() < 1e-14);
    }

    #[test]
    fn rule_rejects_tiny_order() {
        assert!(QuadratureRule::gauss_legendre(1, unit()).is_err());
    }
}
