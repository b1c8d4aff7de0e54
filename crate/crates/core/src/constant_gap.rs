//! The constant-potential problem: gap curves Δ(T), their vanishing
//! temperatures, the reference constants z₀ and τ₀, and the auxiliary
//! functions F and G.
//!
//! For a constant coupling U the gap equation collapses to a scalar
//! self-consistency condition per temperature,
//!
//! ```text
//! 1 = U ∫₀^{ħω_D} tanh(√(ξ² + Δ²) / 2T) / √(ξ² + Δ²) dξ,
//! ```
//!
//! whose solution Δ(T) starts at ħω_D/sinh(1/U), decreases strictly, and
//! vanishes at a temperature τ_c defined by the Δ = 0 form of the same
//! equation. Curves are memoized on a dense temperature grid with monotone
//! cubic interpolation; direct root solves remain available for verification.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{find_root, integrate, sech2, tanh_safe, Interval, NumericsError};

/// The bracket [1, 4] provably contains the solution of 2/z = tanh z:
/// z·tanh z − 2 is −1.24 at z = 1 and +1.997 at z = 4, and is strictly
/// increasing.
const Z0_BRACKET: (f64, f64) = (1.0, 4.0);

/// Lower end of the Δ-bracket, relative to Δ(0).
const DELTA_BRACKET_FLOOR: f64 = 1e-12;

/// Upward nudge of the Δ-bracket's upper end so quadrature noise cannot spoil
/// the sign change at Δ(0) when T is tiny.
const DELTA_BRACKET_NUDGE: f64 = 1e-6;

/// Memoization grid points per curve.
const MEMO_POINTS: usize = 257;

#[derive(Debug, Clone, Error)]
pub enum CurveError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),

    #[error("hbar_omega_D and the coupling must be finite and positive, got ({hbar_omega_d}, {coupling})")]
    BadProblem { hbar_omega_d: f64, coupling: f64 },

    #[error("temperature {t} outside the admissible range {lo}..{hi}")]
    TemperatureOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("squared-gap argument {x} lies below the admissible floor {floor}")]
    ArgumentBelowFloor { x: f64, floor: f64 },
}

/// Cutoff energy plus one constant coupling: the data of a simple gap equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingProblem {
    hbar_omega_d: f64,
    coupling: f64,
}

impl CouplingProblem {
    pub fn new(hbar_omega_d: f64, coupling: f64) -> Result<Self, CurveError> {
        if !(hbar_omega_d.is_finite() && hbar_omega_d > 0.0 && coupling.is_finite() && coupling > 0.0)
        {
            return Err(CurveError::BadProblem {
                hbar_omega_d,
                coupling,
            });
        }
        Ok(Self {
            hbar_omega_d,
            coupling,
        })
    }

    pub fn hbar_omega_d(&self) -> f64 {
        self.hbar_omega_d
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }
}

/// z₀, the unique positive solution of 2/z = tanh z (≈ 2.07).
pub fn solve_z0(tol: f64) -> Result<f64, CurveError> {
    let bracket = Interval::new(Z0_BRACKET.0, Z0_BRACKET.1)?;
    let z0 = find_root(|z| Ok(z * tanh_safe(z) - 2.0), bracket, tol)?;
    Ok(z0)
}

/// The closed form Δ(0) = ħω_D / sinh(1/U).
pub fn delta_at_zero(p: &CouplingProblem) -> f64 {
    p.hbar_omega_d / (1.0 / p.coupling).sinh()
}

/// Residual of the vanishing-temperature equation,
/// U·∫₀^{ħω_D} tanh(ξ/2τ)/ξ dξ − 1, with the ξ = 0 limit value 1/(2τ).
pub fn tau_c_residual(p: &CouplingProblem, tau: f64, quad_tol: f64) -> Result<f64, CurveError> {
    let domain = Interval::new(0.0, p.hbar_omega_d)?;
    let integral = integrate(
        |xi| {
            if xi == 0.0 {
                1.0 / (2.0 * tau)
            } else {
                tanh_safe(xi / (2.0 * tau)) / xi
            }
        },
        domain,
        quad_tol,
    )?;
    Ok(p.coupling * integral - 1.0)
}

/// The temperature τ_c at which the gap curve of `p` vanishes.
///
/// The residual decreases strictly from +∞ (logarithmic divergence as τ → 0)
/// to −1, so a sign-changing bracket always exists; it is found by expanding
/// outward from [ħω_D·1e-6, ħω_D]. The returned τ satisfies
/// |residual(τ)| ≤ tol.
pub fn solve_tau_c(p: &CouplingProblem, quad_tol: f64, tol: f64) -> Result<f64, CurveError> {
    let inner_quad = (0.01 * quad_tol.min(tol)).max(1e-15);
    let mut lo = p.hbar_omega_d * 1e-6;
    let mut hi = p.hbar_omega_d;
    for _ in 0..60 {
        if tau_c_residual(p, lo, inner_quad)? > 0.0 {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..60 {
        if tau_c_residual(p, hi, inner_quad)? < 0.0 {
            break;
        }
        hi *= 2.0;
    }

    let mut width = (tol * hi).max(f64::EPSILON * 8.0 * hi);
    let mut tau = 0.0;
    for _ in 0..4 {
        tau = find_root(
            |t| tau_c_residual(p, t, inner_quad).map_err(flatten),
            Interval::new(lo, hi)?,
            width,
        )?;
        if tau_c_residual(p, tau, inner_quad)?.abs() <= tol {
            return Ok(tau);
        }
        width *= 1e-2;
    }
    // One final residual check; the loop above almost always exits early.
    let res = tau_c_residual(p, tau, inner_quad)?.abs();
    if res <= tol {
        Ok(tau)
    } else {
        Err(CurveError::Numerics(NumericsError::RootNoConvergence {
            lo,
            hi,
            tol,
            max_iter: 4,
        }))
    }
}

fn flatten(e: CurveError) -> NumericsError {
    match e {
        CurveError::Numerics(n) => n,
        other => unreachable!("curve residuals only fail through numerics: {other}"),
    }
}

/// Residual of the simple gap equation at (Δ, T):
/// U·∫₀^{ħω_D} tanh(√(ξ²+Δ²)/2T)/√(ξ²+Δ²) dξ − 1, with tanh factor 1 at T = 0.
pub fn gap_residual(
    p: &CouplingProblem,
    delta: f64,
    t: f64,
    quad_tol: f64,
) -> Result<f64, CurveError> {
    let domain = Interval::new(0.0, p.hbar_omega_d)?;
    let d2 = delta * delta;
    let integral = integrate(
        |xi| {
            let s = (xi * xi + d2).sqrt();
            let th = if t == 0.0 { 1.0 } else { tanh_safe(s / (2.0 * t)) };
            th / s
        },
        domain,
        quad_tol,
    )?;
    Ok(p.coupling * integral - 1.0)
}

/// The gap curve value Δ(T) of the simple gap equation.
///
/// T = 0 is treated exactly (tanh factor ≡ 1), in which case the equation has
/// the closed-form solution ħω_D/sinh(1/U). For T ≥ τ_c the curve is zero by
/// definition. Otherwise the unique root is bracketed in (0, Δ(0)] and the
/// equation's right side decreases strictly in Δ, so the bracket solve is safe.
pub fn delta_curve_value(
    p: &CouplingProblem,
    tau_c: f64,
    t: f64,
    quad_tol: f64,
    root_tol: f64,
) -> Result<f64, CurveError> {
    if t >= tau_c {
        return Ok(0.0);
    }
    let delta0 = delta_at_zero(p);
    if t == 0.0 {
        return Ok(delta0);
    }
    let lo = DELTA_BRACKET_FLOOR * delta0;
    let hi = delta0 * (1.0 + DELTA_BRACKET_NUDGE);
    // If quadrature cannot resolve the sign at the ends, the root coincides
    // with the end within tolerance.
    if gap_residual(p, lo, t, quad_tol)? <= 0.0 {
        return Ok(0.0);
    }
    if gap_residual(p, hi, t, quad_tol)? >= 0.0 {
        return Ok(delta0);
    }
    let root = find_root(
        |d| gap_residual(p, d, t, quad_tol).map_err(flatten),
        Interval::new(lo, hi)?,
        root_tol * delta0,
    )?;
    Ok(root.min(delta0))
}

/// Δ′(T) by implicit differentiation of the simple gap equation:
/// Δ′ = −(∂g/∂T)/(∂g/∂Δ), both partials by quadrature of the analytically
/// differentiated integrand. Valid for 0 < T < τ_c; the value is ≤ 0.
pub fn delta_curve_derivative(
    p: &CouplingProblem,
    tau_c: f64,
    t: f64,
    quad_tol: f64,
    root_tol: f64,
) -> Result<f64, CurveError> {
    if !(t > 0.0 && t < tau_c) {
        return Err(CurveError::TemperatureOutOfRange {
            t,
            lo: 0.0,
            hi: tau_c,
        });
    }
    let delta = delta_curve_value(p, tau_c, t, quad_tol, root_tol)?;
    let domain = Interval::new(0.0, p.hbar_omega_d)?;
    let d2 = delta * delta;

    // ∂g/∂Δ = U ∫ (Δ/s)·[sech²(s/2T)/(2Ts) − tanh(s/2T)/s²] dξ  (< 0)
    let dg_ddelta = p.coupling
        * integrate(
            |xi| {
                let s = (xi * xi + d2).sqrt();
                let z = s / (2.0 * t);
                (delta / s) * (sech2(z) / (2.0 * t * s) - tanh_safe(z) / (s * s))
            },
            domain,
            quad_tol,
        )?;

    // ∂g/∂T = −U ∫ sech²(s/2T)/(2T²) dξ  (< 0)
    let dg_dt = -p.coupling
        * integrate(
            |xi| {
                let s = (xi * xi + d2).sqrt();
                sech2(s / (2.0 * t)) / (2.0 * t * t)
            },
            domain,
            quad_tol,
        )?;

    Ok(-dg_dt / dg_ddelta)
}

/// τ₀, the unique temperature in (0, τ₁) with Δ₁(τ₀) = 2z₀τ₀.
///
/// Uniqueness holds because the left side decreases strictly while the right
/// side increases. Solved against direct curve evaluations, not the memo.
pub fn solve_tau0(curve1: &GapCurve, z0: f64, tol: f64) -> Result<f64, CurveError> {
    let tau1 = curve1.tau_c();
    find_root(
        |t| {
            let delta = curve1.value_exact(t).map_err(flatten)?;
            Ok(delta - 2.0 * z0 * t)
        },
        Interval::new(0.0, tau1)?,
        tol * tau1,
    )
    .map_err(CurveError::from)
}

/// F(T) = ∫₀^{ħω_D} tanh(√(ξ²+Δ₁(T)²)/2τ₀) / √(ξ²+Δ₁(T)²) dξ.
///
/// The tanh factor is frozen at the reference temperature τ₀, which keeps
/// F(T) strictly below 1/U₁ for T < τ₀. Consults the curve memo.
pub fn eval_f(t: f64, tau0: f64, curve1: &GapCurve, quad_tol: f64) -> Result<f64, CurveError> {
    let delta = curve1.value(t);
    let d2 = delta * delta;
    let domain = Interval::new(0.0, curve1.problem().hbar_omega_d())?;
    let v = integrate(
        |xi| {
            let s = (xi * xi + d2).sqrt();
            tanh_safe(s / (2.0 * tau0)) / s
        },
        domain,
        quad_tol,
    )?;
    Ok(v)
}

/// G(T, X, ξ) = ξ²·tanh(√(ξ²+X)/2T) + 4XT/√(ξ²+X).
///
/// Monotone increasing in T as long as X stays at or above the squared gap at
/// the reference temperature, Δ₁(τ₀)²; `x_floor` supplies that threshold and
/// arguments below it are rejected. At T = 0 the tanh factor saturates to 1
/// and the value is ξ².
pub fn eval_g(t: f64, x: f64, xi: f64, x_floor: f64) -> Result<f64, CurveError> {
    if x < x_floor {
        return Err(CurveError::ArgumentBelowFloor { x, floor: x_floor });
    }
    if t < 0.0 {
        return Err(CurveError::TemperatureOutOfRange {
            t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let s = (xi * xi + x).sqrt();
    let th = if t == 0.0 { 1.0 } else { tanh_safe(s / (2.0 * t)) };
    Ok(xi * xi * th + 4.0 * x * t / s)
}

/// A solved constant-potential gap curve.
///
/// Carries the vanishing temperature, the value at T = 0, and a dense memo
/// with monotone cubic (Fritsch-Carlson limited Hermite) interpolation. The
/// memo is immutable after construction; `value_exact` re-solves the defining
/// equation and is the verification path.
#[derive(Debug, Clone)]
pub struct GapCurve {
    problem: CouplingProblem,
    tau_c: f64,
    delta0: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
    quad_tol: f64,
    root_tol: f64,
}

impl GapCurve {
    /// Solve τ_c and memoize the curve on a uniform grid over [0, τ_c].
    pub fn build(
        problem: CouplingProblem,
        quad_tol: f64,
        root_tol: f64,
    ) -> Result<Self, CurveError> {
        let tau_c = solve_tau_c(&problem, quad_tol, root_tol)?;
        let delta0 = delta_at_zero(&problem);
        let n = MEMO_POINTS;
        let step = tau_c / (n - 1) as f64;

        let mut values = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for i in 0..n {
            let t = step * i as f64;
            let v = if i == n - 1 {
                0.0
            } else {
                delta_curve_value(&problem, tau_c, t, quad_tol, root_tol)?
            };
            values.push(v);
            // Δ′(0) = 0; the slope at τ_c diverges and is clamped below.
            let m = if i == 0 || i == n - 1 {
                0.0
            } else {
                delta_curve_derivative(&problem, tau_c, t, quad_tol, root_tol)?
            };
            slopes.push(m);
        }
        limit_slopes_monotone(&values, &mut slopes, step);

        Ok(Self {
            problem,
            tau_c,
            delta0,
            step,
            values,
            slopes,
            quad_tol,
            root_tol,
        })
    }

    pub fn problem(&self) -> &CouplingProblem {
        &self.problem
    }

    /// The vanishing temperature of this curve.
    pub fn tau_c(&self) -> f64 {
        self.tau_c
    }

    /// Δ(0) = ħω_D/sinh(1/U).
    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// Interpolated curve value; exact at memo nodes, monotone in between,
    /// and 0 for T ≥ τ_c. Temperatures must be nonnegative.
    pub fn value(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "curve queried at negative temperature {t}");
        if t >= self.tau_c {
            return 0.0;
        }
        let n = self.values.len();
        let mut i = (t / self.step) as usize;
        if i >= n - 1 {
            i = n - 2;
        }
        let t0 = self.step * i as f64;
        let u = (t - t0) / self.step;
        if u == 0.0 {
            return self.values[i];
        }
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i], self.slopes[i + 1]);
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        (h00 * y0 + h01 * y1 + self.step * (h10 * m0 + h11 * m1)).max(0.0)
    }

    /// Direct root solve of the defining equation (no memo).
    pub fn value_exact(&self, t: f64) -> Result<f64, CurveError> {
        delta_curve_value(&self.problem, self.tau_c, t, self.quad_tol, self.root_tol)
    }

    /// Δ′(T) by implicit differentiation (no memo); 0 < T < τ_c.
    pub fn derivative(&self, t: f64) -> Result<f64, CurveError> {
        delta_curve_derivative(&self.problem, self.tau_c, t, self.quad_tol, self.root_tol)
    }
}

/// Fritsch-Carlson slope limiting for monotone nonincreasing data: every slope
/// must stay within [3·s, 0] for the secants s of both adjacent intervals,
/// which guarantees a monotone Hermite interpolant.
fn limit_slopes_monotone(values: &[f64], slopes: &mut [f64], step: f64) {
    let n = values.len();
    let secant = |i: usize| (values[i + 1] - values[i]) / step;
    for i in 0..n {
        // A node slope is admissible when |m| ≤ 3|s| for the secants of both
        // adjacent intervals; with nonpositive secants the binding one is the
        // larger (less negative).
        let most_negative = if i == 0 {
            3.0 * secant(0)
        } else if i == n - 1 {
            3.0 * secant(n - 2)
        } else {
            3.0 * secant(i - 1).max(secant(i))
        };
        slopes[i] = slopes[i].clamp(most_negative.min(0.0), 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QT: f64 = 1e-12;
    const RT: f64 = 1e-12;

    fn problem(u: f64) -> CouplingProblem {
        CouplingProblem::new(1.0, u).unwrap()
    }

    /// Plain bisection oracle, independent of `find_root`.
    fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
        let rising = f(lo) < 0.0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if (f(mid) < 0.0) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn z0_matches_oracle_and_rounds_to_2_07() {
        let z0 = solve_z0(1e-13).unwrap();
        let oracle = bisect(|z| z * z.tanh() - 2.0, 1.0, 4.0, 1e-12);
        assert!((z0 - oracle).abs() < 2e-12);
        assert!((2.0 / z0 - z0.tanh()).abs() <= 1e-12, "defining residual");
        assert!(z0 > 2.0 && z0 < 2.1);
        assert_eq!((z0 * 100.0).round() / 100.0, 2.07);
    }

    #[test]
    fn delta_at_zero_closed_form() {
        let p = problem(0.5);
        let expect = 1.0 / 2.0f64.sinh();
        assert!((delta_at_zero(&p) - expect).abs() < 1e-15);
        assert!((expect - 0.275721).abs() < 1e-6);

        // linear scaling in the cutoff
        let p2 = CouplingProblem::new(2.0, 0.5).unwrap();
        assert!((delta_at_zero(&p2) - 2.0 * delta_at_zero(&p)).abs() < 1e-15);
    }

    #[test]
    fn delta_at_zero_weak_coupling_asymptote() {
        // Δ(0) → 2ħω_D·e^{−1/U} as U → 0; at U = 0.15 the ratio is within 1%.
        let p = problem(0.15);
        let ratio = delta_at_zero(&p) / (2.0 * (-1.0 / 0.15f64).exp());
        assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn tau_c_weak_coupling_value_and_monotonicity() {
        let p3 = problem(0.3);
        let tau3 = solve_tau_c(&p3, QT, RT).unwrap();
        let bcs = 1.134 * (-1.0 / 0.3f64).exp();
        assert!(
            (tau3 - bcs).abs() / bcs < 0.02,
            "tau_c {tau3} vs BCS asymptote {bcs}"
        );
        assert!(tau_c_residual(&p3, tau3, QT).unwrap().abs() <= RT);

        let tau4 = solve_tau_c(&problem(0.4), QT, RT).unwrap();
        assert!(tau4 > tau3, "tau_c must increase with the coupling");
    }

    #[test]
    fn delta_curve_endpoints_and_monotonicity() {
        let p = problem(0.3);
        let tau_c = solve_tau_c(&p, QT, RT).unwrap();

        let at0 = delta_curve_value(&p, tau_c, 0.0, QT, RT).unwrap();
        assert!((at0 - delta_at_zero(&p)).abs() < 1e-12);

        assert_eq!(delta_curve_value(&p, tau_c, tau_c, QT, RT).unwrap(), 0.0);
        assert_eq!(
            delta_curve_value(&p, tau_c, 2.0 * tau_c, QT, RT).unwrap(),
            0.0
        );

        let t1 = 0.3 * tau_c;
        let t2 = 0.7 * tau_c;
        let d1 = delta_curve_value(&p, tau_c, t1, QT, RT).unwrap();
        let d2 = delta_curve_value(&p, tau_c, t2, QT, RT).unwrap();
        assert!(d1 > d2 && d2 > 0.0, "strict decrease: {d1} vs {d2}");
        assert!(d1 < at0);
    }

    #[test]
    fn delta_curve_residual_round_trip() {
        let p = problem(0.3);
        let tau_c = solve_tau_c(&p, QT, RT).unwrap();
        for frac in [0.1, 0.5, 0.9] {
            let t = frac * tau_c;
            let d = delta_curve_value(&p, tau_c, t, QT, RT).unwrap();
            let res = gap_residual(&p, d, t, QT).unwrap();
            assert!(res.abs() <= 5.0 * 1e-11, "residual {res:e} at frac {frac}");
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = problem(0.3);
        let tau_c = solve_tau_c(&p, QT, RT).unwrap();
        let t = 0.6 * tau_c;
        let h = 1e-4 * tau_c;
        let analytic = delta_curve_derivative(&p, tau_c, t, QT, RT).unwrap();
        let fd = (delta_curve_value(&p, tau_c, t + h, QT, RT).unwrap()
            - delta_curve_value(&p, tau_c, t - h, QT, RT).unwrap())
            / (2.0 * h);
        assert!(
            (analytic - fd).abs() < 1e-5 * analytic.abs().max(1.0),
            "implicit {analytic} vs finite difference {fd}"
        );
        assert!(analytic < 0.0);
    }

    #[test]
    fn derivative_flat_near_zero_and_steep_near_tau_c() {
        let p = problem(0.3);
        let tau_c = solve_tau_c(&p, QT, RT).unwrap();
        let delta0 = delta_at_zero(&p);
        let scale = delta0 / tau_c;

        let flat = delta_curve_derivative(&p, tau_c, 0.05 * tau_c, QT, RT).unwrap();
        assert!(flat.abs() < 1e-3 * scale, "flat region slope {flat}");

        let steep = delta_curve_derivative(&p, tau_c, 0.999 * tau_c, QT, RT).unwrap();
        assert!(steep < -10.0 * scale, "blow-up region slope {steep}");
    }

    #[test]
    fn derivative_domain_errors() {
        let p = problem(0.3);
        let tau_c = solve_tau_c(&p, QT, RT).unwrap();
        assert!(delta_curve_derivative(&p, tau_c, 0.0, QT, RT).is_err());
        assert!(delta_curve_derivative(&p, tau_c, tau_c, QT, RT).is_err());
    }

    #[test]
    fn tau0_sits_below_tau1_and_satisfies_its_equation() {
        let curve = GapCurve::build(problem(0.3), QT, RT).unwrap();
        let z0 = solve_z0(1e-13).unwrap();
        let tau0 = solve_tau0(&curve, z0, RT).unwrap();
        assert!(tau0 > 0.0 && tau0 < curve.tau_c());

        let residual = curve.value_exact(tau0).unwrap() - 2.0 * z0 * tau0;
        assert!(residual.abs() <= 1e-12, "defining residual {residual:e}");

        // The curve is nearly flat near zero, so τ0 ≈ Δ(0)/(2z0) within 5%.
        let approx = curve.delta0() / (2.0 * z0);
        assert!((tau0 - approx).abs() / approx < 0.05);
    }

    #[test]
    fn memo_matches_direct_solves() {
        let curve = GapCurve::build(problem(0.3), QT, RT).unwrap();
        // Compare on the region used by the bound computations, [0, τ_c/2].
        for i in 0..40 {
            let t = curve.tau_c() * 0.5 * i as f64 / 39.0;
            let memo = curve.value(t);
            let exact = curve.value_exact(t).unwrap();
            assert!(
                (memo - exact).abs() < 1e-9,
                "memo {memo} vs exact {exact} at t={t}"
            );
        }
        assert_eq!(curve.value(curve.tau_c() * 1.01), 0.0);
    }

    #[test]
    fn memo_is_monotone_nonincreasing() {
        let curve = GapCurve::build(problem(0.3), QT, RT).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..=2000 {
            let t = curve.tau_c() * 1.02 * i as f64 / 2000.0;
            let v = curve.value(t);
            assert!(v <= prev + 1e-13, "memo not monotone at t={t}");
            assert!(v >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn eval_f_below_coupling_inverse_and_nondecreasing() {
        let u1 = 0.3;
        let curve = GapCurve::build(problem(u1), QT, RT).unwrap();
        let z0 = solve_z0(1e-13).unwrap();
        let tau0 = solve_tau0(&curve, z0, RT).unwrap();
        let tau = 0.95 * tau0;

        let mut prev = -f64::INFINITY;
        for i in 0..50 {
            let t = tau * i as f64 / 49.0;
            let f = eval_f(t, tau0, &curve, QT).unwrap();
            assert!(f > 0.0);
            assert!(f < 1.0 / u1, "F(T) = {f} must stay below 1/U1");
            assert!(f >= prev - 1e-11, "F must be nondecreasing");
            prev = f;
        }
    }

    #[test]
    fn eval_f_continuity_modulus() {
        let curve = GapCurve::build(problem(0.3), QT, RT).unwrap();
        let z0 = solve_z0(1e-13).unwrap();
        let tau0 = solve_tau0(&curve, z0, RT).unwrap();
        let tau = 0.95 * tau0;
        let hbar = curve.problem().hbar_omega_d();
        let delta_tau = curve.value(tau);
        let modulus = (hbar / delta_tau).atan() / (2.0 * tau0 * delta_tau);

        for i in 0..20 {
            let t = tau * i as f64 / 20.0;
            let h = tau / 20.0;
            let lhs = (eval_f(t + h, tau0, &curve, QT).unwrap()
                - eval_f(t, tau0, &curve, QT).unwrap())
                .abs();
            let d_sq = |x: f64| {
                let v = curve.value(x);
                v * v
            };
            let rhs = (d_sq(t + h) - d_sq(t)).abs() * modulus;
            assert!(lhs <= rhs + 1e-10, "modulus violated at t={t}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn eval_g_special_cases_and_domain() {
        let floor = 0.0049; // ~Δ1(τ0)² for the defaults
        // T = 0 collapses to ξ²
        let g = eval_g(0.0, 0.01, 0.5, floor).unwrap();
        assert!((g - 0.25).abs() < 1e-15);
        // ξ = 0 leaves only the 4XT/√X = 4T√X term
        let g0 = eval_g(0.008, 0.01, 0.0, floor).unwrap();
        assert!((g0 - 4.0 * 0.008 * 0.1).abs() < 1e-12);
        // below the floor: domain error
        assert!(matches!(
            eval_g(0.005, 0.001, 0.5, floor),
            Err(CurveError::ArgumentBelowFloor { .. })
        ));
    }

    #[test]
    fn eval_g_monotone_in_temperature() {
        let curve = GapCurve::build(problem(0.3), QT, RT).unwrap();
        let z0 = solve_z0(1e-13).unwrap();
        let tau0 = solve_tau0(&curve, z0, RT).unwrap();
        let floor = curve.value(tau0).powi(2);

        // Deterministic sample sweep within the hypotheses.
        for i in 0..10 {
            let x = floor * (1.0 + i as f64);
            for j in 0..5 {
                let xi = j as f64 * 0.25;
                let mut prev = -f64::INFINITY;
                for k in 0..=20 {
                    let t = tau0 * k as f64 / 20.0;
                    let g = eval_g(t, x, xi, floor).unwrap();
                    assert!(g >= prev - 1e-12, "G not monotone at ({t},{x},{xi})");
                    prev = g;
                }
            }
        }
    }

    #[test]
    fn coupling_problem_rejects_bad_fields() {
        assert!(CouplingProblem::new(0.0, 0.3).is_err());
        assert!(CouplingProblem::new(1.0, 0.0).is_err());
        assert!(CouplingProblem::new(f64::NAN, 0.3).is_err());
        assert!(CouplingProblem::new(1.0, f64::INFINITY).is_err());
    }
}
