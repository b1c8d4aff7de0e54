//! Conformance suite: checks every numerically testable property of the
//! underlying theory against computed curves, constants, and surfaces.
//!
//! Each check reports the raw worst violation net of its explicitly stated
//! slack (a sum of the contributing tolerances — quadrature, root, fixed
//! point, enclosure), so a check passes exactly when its worst violation is
//! zero. Every check is deterministic under a fixed seed, and the report is
//! assembled in check-id order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constant_gap::{self, GapCurve};
use crate::lipschitz;
use crate::model::{ModelParams, PotentialSpec, SolverConfig};
use crate::solver::{GapProblem, GapSurface, SolverError};

/// Outcome of one conformance check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    /// Numbered result of the underlying theory this check certifies.
    pub paper_anchor: String,
    pub passed: bool,
    /// Worst violation beyond the check's slack; 0 for a pass, non-finite
    /// (serialized as null) when the check was skipped.
    pub worst_violation: f64,
    /// (T, x) of the worst violation, when meaningful.
    pub location: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    fn skipped(id: &str, anchor: &str, reason: &str) -> Self {
        Self {
            check_id: id.into(),
            paper_anchor: anchor.into(),
            passed: false,
            worst_violation: f64::INFINITY,
            location: None,
            note: Some(format!("skipped: {reason}")),
        }
    }
}

/// Accumulates the worst violation and its location across sub-checks.
struct Tracker {
    id: &'static str,
    anchor: &'static str,
    worst: f64,
    location: Option<(f64, f64)>,
}

impl Tracker {
    fn new(id: &'static str, anchor: &'static str) -> Self {
        Self {
            id,
            anchor,
            worst: 0.0,
            location: None,
        }
    }

    /// Record the excess of one inequality, already net of its slack.
    fn record(&mut self, excess: f64, location: Option<(f64, f64)>) {
        if excess > self.worst {
            self.worst = excess;
            self.location = location;
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            check_id: self.id.into(),
            paper_anchor: self.anchor.into(),
            passed: self.worst <= 0.0,
            worst_violation: self.worst.max(0.0),
            location: self.location,
            note: None,
        }
    }
}

/// Which edge of the coupling band a constant-potential run is compared to.
#[derive(Debug, Clone, Copy)]
pub enum CurveSide {
    Lower,
    Upper,
}

/// Registered check ids with their anchors, in report (lexicographic) order.
const REGISTRY: &[(&str, &str)] = &[
    ("band_map", "Lemma 2.4"),
    ("bracketing", "Theorem 1.5"),
    ("constant_equiv_u1", "Eq. (1.3)"),
    ("constant_equiv_u2", "Eq. (1.3)"),
    ("coupling_window", "Eqs. (2.1)-(2.2)"),
    ("curve_ordering", "Lemma 1.3"),
    ("derivative_shape", "Proposition 1.1"),
    ("enclosure_residual", "Theorem 1.5"),
    ("f_modulus", "Lemma 2.1"),
    ("g_monotone", "Lemma 2.2"),
    ("lipschitz_in_t", "Lemma 2.5"),
    ("monotone_lipschitz", "Theorem 1.10"),
    ("operator_bound", "Lemma 2.10"),
    ("tau0_defining", "Eq. (1.6)"),
];

/// Number of checks `run_all` reports.
pub fn registered_check_count() -> usize {
    REGISTRY.len()
}

fn anchor_of(id: &str) -> &'static str {
    REGISTRY
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, a)| *a)
        .expect("registered check id")
}

/// Piecewise-linear profile λ(x) on [0, ħω_D] from seeded uniforms, evaluated
/// at the given nodes. Convex combinations λΔ₁ + (1−λ)Δ₂ built from it lie in
/// the bracket band by construction.
fn band_profile(rng: &mut ChaCha8Rng, nodes: &[f64], hbar_omega_d: f64) -> Vec<f64> {
    const KNOTS: usize = 9;
    let knot_vals: Vec<f64> = (0..KNOTS).map(|_| rng.gen::<f64>()).collect();
    nodes
        .iter()
        .map(|&x| {
            let pos = x / hbar_omega_d * (KNOTS - 1) as f64;
            let i = (pos as usize).min(KNOTS - 2);
            let w = pos - i as f64;
            knot_vals[i] * (1.0 - w) + knot_vals[i + 1] * w
        })
        .collect()
}

fn band_member(profile: &[f64], d1: f64, d2: f64) -> Vec<f64> {
    profile.iter().map(|&l| l * d1 + (1.0 - l) * d2).collect()
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Theorem 1.5 bracket: Δ₁(T) ≤ u₀(T, x) ≤ Δ₂(T) at every grid point, with
/// slack enclosure_width + curve tolerance.
pub fn check_bracketing(problem: &GapProblem, surface: &GapSurface) -> CheckResult {
    let mut tr = Tracker::new("bracketing", anchor_of("bracketing"));
    for slice in &surface.slices {
        let d1 = problem.curve1().value(slice.t);
        let d2 = problem.curve2().value(slice.t);
        let slack = slice.enclosure_width + 1e-8;
        for (j, &x) in slice.nodes.iter().enumerate() {
            let loc = Some((slice.t, x));
            tr.record(d1 - slice.lower[j] - slack, loc);
            tr.record(slice.upper[j] - d2 - slack, loc);
        }
    }
    tr.finish()
}

/// Theorem 1.10 / V-membership: 0 ≤ u(T, x) − u(T', x) ≤ γ(T' − T) for
/// adjacent grid temperatures, slack 2·enclosure_width.
pub fn check_monotone_lipschitz(surface: &GapSurface) -> CheckResult {
    let mut tr = Tracker::new("monotone_lipschitz", anchor_of("monotone_lipschitz"));
    let mids = surface.midpoints();
    for i in 1..surface.t_grid.len() {
        let dt = surface.t_grid[i] - surface.t_grid[i - 1];
        let slack = 2.0 * surface.slices[i]
            .enclosure_width
            .max(surface.slices[i - 1].enclosure_width);
        for (j, &x) in surface.nodes().iter().enumerate() {
            let drop = mids[i - 1][j] - mids[i][j];
            let loc = Some((surface.t_grid[i], x));
            tr.record(-drop - slack, loc);
            tr.record(drop - surface.gamma * dt - slack, loc);
        }
    }
    tr.finish()
}

/// Constant-potential equivalence: a Nyström run with U ≡ U₁ (or U₂) must
/// reproduce the matching scalar curve within 10·(fp_tol + root_tol).
pub fn check_constant_equivalence(
    problem: &GapProblem,
    side: CurveSide,
) -> Result<CheckResult, SolverError> {
    let (id, value, curve): (_, f64, &GapCurve) = match side {
        CurveSide::Lower => ("constant_equiv_u1", problem.params().u1, problem.curve1()),
        CurveSide::Upper => ("constant_equiv_u2", problem.params().u2, problem.curve2()),
    };
    let constant = problem.with_potential(PotentialSpec::Constant { value })?;
    let surface = constant.solve_surface()?;
    let cfg = problem.config();
    let slack = 10.0 * (cfg.fp_tol + cfg.root_tol);
    let mut tr = Tracker::new(id, anchor_of(id));
    for slice in &surface.slices {
        let oracle = curve.value_exact(slice.t)?;
        for (j, &x) in slice.nodes.iter().enumerate() {
            let mid = 0.5 * (slice.upper[j] + slice.lower[j]);
            tr.record((mid - oracle).abs() - slack, Some((slice.t, x)));
        }
    }
    Ok(tr.finish())
}

/// Lemma 2.10 proof bound: sup|Au − Av| ≤ (U₂/U₁)·sup|u − v| + 1e-10 for
/// seeded random band pairs at temperature `t`.
pub fn check_operator_bound(
    problem: &GapProblem,
    t: f64,
    trials: usize,
    seed: u64,
) -> Result<CheckResult, SolverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = problem.params();
    let nodes = problem.discretization().nodes().to_vec();
    let d1 = problem.curve1().value(t);
    let d2 = problem.curve2().value(t);
    let ratio = params.u2 / params.u1;
    let mut tr = Tracker::new("operator_bound", anchor_of("operator_bound"));
    for _ in 0..trials {
        let u = band_member(&band_profile(&mut rng, &nodes, params.hbar_omega_d), d1, d2);
        let v = band_member(&band_profile(&mut rng, &nodes, params.hbar_omega_d), d1, d2);
        let au = problem.apply(&u, t)?;
        let av = problem.apply(&v, t)?;
        let lhs = sup_diff(&au, &av);
        let rhs = ratio * sup_diff(&u, &v) + 1e-10;
        tr.record(lhs - rhs, Some((t, f64::NAN)));
    }
    // u = v must map to identical images.
    let u = band_member(&band_profile(&mut rng, &nodes, params.hbar_omega_d), d1, d2);
    let au = problem.apply(&u, t)?;
    let av = problem.apply(&u.clone(), t)?;
    tr.record(sup_diff(&au, &av), Some((t, f64::NAN)));
    Ok(tr.finish())
}

fn check_tau0_defining(problem: &GapProblem) -> Result<CheckResult, SolverError> {
    let c = problem.constants();
    let cfg = problem.config();
    let mut tr = Tracker::new("tau0_defining", anchor_of("tau0_defining"));
    // Defining residual of z0, solved to root_tol.
    let z0_residual = (2.0 / c.z0 - c.z0.tanh()).abs();
    tr.record(z0_residual - 1e-12, None);
    tr.record(2.06 - c.z0, None);
    tr.record(c.z0 - 2.08, None);
    // Defining residual of tau0 against a direct curve solve.
    let delta_tau0 = problem.curve1().value_exact(c.tau0)?;
    let slack = 10.0 * (cfg.root_tol * c.tau1 + cfg.root_tol * c.delta1_zero + cfg.quad_tol);
    tr.record((delta_tau0 - 2.0 * c.z0 * c.tau0).abs() - slack, None);
    // Ordering (0 <) tau0 < tau1.
    tr.record(-c.tau0, None);
    tr.record(c.tau0 - c.tau1, None);
    Ok(tr.finish())
}

fn check_derivative_shape(problem: &GapProblem) -> Result<CheckResult, SolverError> {
    let curve = problem.curve1();
    let cfg = problem.config();
    let p = curve.problem();
    let tau1 = curve.tau_c();
    let delta0 = curve.delta0();
    let mut tr = Tracker::new("derivative_shape", anchor_of("derivative_shape"));

    // Closed form at T = 0: the defining equation evaluated by quadrature
    // must vanish at ħω_D/sinh(1/U).
    let residual = constant_gap::gap_residual(p, delta0, 0.0, cfg.quad_tol)?;
    tr.record(residual.abs() - 100.0 * cfg.quad_tol, Some((0.0, f64::NAN)));

    // Strict decrease across the curve.
    let quarters: Vec<f64> = (0..5)
        .map(|k| curve.value(0.245 * k as f64 * tau1))
        .collect();
    for w in quarters.windows(2) {
        tr.record(w[1] - w[0] + 1e-6 * delta0, None);
    }
    // Nonincreasing on a fine grid.
    let mut prev = f64::INFINITY;
    for i in 0..=100 {
        let t = tau1 * i as f64 / 100.0;
        let v = curve.value(t);
        tr.record(v - prev - 1e-12, Some((t, f64::NAN)));
        prev = v;
    }

    // Flat start, divergent finish, nonpositive everywhere sampled.
    let scale = delta0 / tau1;
    let flat = curve.derivative(0.05 * tau1)?;
    tr.record(flat.abs() - 1e-3 * scale, Some((0.05 * tau1, f64::NAN)));
    let steep = curve.derivative(0.999 * tau1)?;
    tr.record(steep + 10.0 * scale, Some((0.999 * tau1, f64::NAN)));
    for frac in [0.05, 0.3, 0.6, 0.9, 0.999] {
        let d = curve.derivative(frac * tau1)?;
        tr.record(d, Some((frac * tau1, f64::NAN)));
    }
    Ok(tr.finish())
}

fn check_curve_ordering(problem: &GapProblem) -> Result<CheckResult, SolverError> {
    let c = problem.constants();
    let cfg = problem.config();
    let mut tr = Tracker::new("curve_ordering", anchor_of("curve_ordering"));
    // tau1 < tau2 beyond combined root tolerances.
    let tol = 10.0 * cfg.root_tol * c.tau2;
    tr.record(c.tau1 - c.tau2 + tol, None);
    // Δ1 < Δ2 on a 100-point grid of [0, tau2), both zero at tau2.
    let margin = 10.0 * (cfg.root_tol * c.delta2_zero + cfg.quad_tol);
    for i in 0..100 {
        let t = c.tau2 * i as f64 / 100.0;
        let d1 = problem.curve1().value_exact(t)?;
        let d2 = problem.curve2().value_exact(t)?;
        tr.record(d1 - d2 + margin, Some((t, f64::NAN)));
    }
    let d1_end = problem.curve1().value_exact(c.tau2)?;
    let d2_end = problem.curve2().value_exact(c.tau2)?;
    tr.record(d1_end.abs(), Some((c.tau2, f64::NAN)));
    tr.record(d2_end.abs(), Some((c.tau2, f64::NAN)));
    Ok(tr.finish())
}

fn check_f_modulus(problem: &GapProblem) -> Result<CheckResult, SolverError> {
    let c = problem.constants();
    let cfg = problem.config();
    let curve = problem.curve1();
    let u1 = problem.params().u1;
    let hbar = problem.params().hbar_omega_d;
    let delta_tau = curve.value(c.tau);
    let modulus = (hbar / delta_tau).atan() / (2.0 * c.tau0 * delta_tau);
    let slack = 100.0 * cfg.quad_tol + 1e-12;
    let mut tr = Tracker::new("f_modulus", anchor_of("f_modulus"));
    let n = 50;
    let h = c.tau / n as f64;
    let mut prev_f = f64::NEG_INFINITY;
    for i in 0..=n {
        let t = h * i as f64;
        let f = constant_gap::eval_f(t, c.tau0, curve, cfg.quad_tol)?;
        // Below 1/U1, nondecreasing, positive.
        tr.record(f - 1.0 / u1, Some((t, f64::NAN)));
        tr.record(prev_f - f - 1e-11, Some((t, f64::NAN)));
        tr.record(-f, Some((t, f64::NAN)));
        if i < n {
            let f_next = constant_gap::eval_f(t + h, c.tau0, curve, cfg.quad_tol)?;
            let lhs = (f_next - f).abs();
            let dsq = (curve.value(t + h).powi(2) - curve.value(t).powi(2)).abs();
            tr.record(lhs - dsq * modulus - slack, Some((t, f64::NAN)));
        }
        prev_f = f;
    }
    Ok(tr.finish())
}

fn check_g_monotone(problem: &GapProblem, seed: u64) -> Result<CheckResult, SolverError> {
    let c = problem.constants();
    let floor = problem.curve1().value(c.tau0).powi(2);
    let hbar = problem.params().hbar_omega_d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tr = Tracker::new("g_monotone", anchor_of("g_monotone"));
    for _ in 0..200 {
        let t_hi = rng.gen::<f64>() * c.tau0;
        let t_lo = rng.gen::<f64>() * t_hi;
        let x = floor * (1.0 + 10.0 * rng.gen::<f64>());
        let xi = rng.gen::<f64>() * hbar;
        let g_lo = constant_gap::eval_g(t_lo, x, xi, floor)?;
        let g_hi = constant_gap::eval_g(t_hi, x, xi, floor)?;
        tr.record(g_lo - g_hi - 1e-12, Some((t_lo, xi)));
    }
    Ok(tr.finish())
}

fn check_band_map(problem: &GapProblem, seed: u64) -> Result<CheckResult, SolverError> {
    let c = problem.constants();
    let cfg = problem.config();
    let params = problem.params();
    let nodes = problem.discretization().nodes().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Curve tolerance plus discrete-quadrature budget.
    let slack = 100.0 * (cfg.root_tol * c.delta2_zero + cfg.quad_tol) + 1e-12;
    let mut tr = Tracker::new("band_map", anchor_of("band_map"));
    for frac in [0.0, 0.5, 1.0] {
        let t = frac * c.tau;
        let d1 = problem.curve1().value_exact(t)?;
        let d2 = problem.curve2().value_exact(t)?;
        for _ in 0..8 {
            let u = band_member(&band_profile(&mut rng, &nodes, params.hbar_omega_d), d1, d2);
            let au = problem.apply(&u, t)?;
            for (j, &x) in nodes.iter().enumerate() {
                tr.record(d1 - au[j] - slack, Some((t, x)));
                tr.record(au[j] - d2 - slack, Some((t, x)));
            }
        }
    }
    Ok(tr.finish())
}

fn check_lipschitz_in_t(problem: &GapProblem, seed: u64) -> Result<CheckResult, SolverError> {
    let c = problem.constants();
    let params = problem.params();
    let nodes = problem.discretization().nodes().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // One profile fixed across temperatures defines a V-member
    // u(T, x) = λ(x)Δ1(T) + (1−λ(x))Δ2(T).
    let profile = band_profile(&mut rng, &nodes, params.hbar_omega_d);
    let t_grid = problem.t_grid();
    let slack = 2e-9 + 1e-12;
    let mut tr = Tracker::new("lipschitz_in_t", anchor_of("lipschitz_in_t"));
    let mut prev: Option<(f64, Vec<f64>)> = None;
    for &t in &t_grid {
        let d1 = problem.curve1().value(t);
        let d2 = problem.curve2().value(t);
        let au = problem.apply(&band_member(&profile, d1, d2), t)?;
        if let Some((t_prev, au_prev)) = prev {
            // t_prev < t, so the colder image must dominate.
            let dt = t - t_prev;
            for (j, &x) in nodes.iter().enumerate() {
                let diff = au_prev[j] - au[j];
                tr.record(-diff - slack, Some((t, x)));
                tr.record(diff - c.gamma * dt - slack, Some((t, x)));
            }
        }
        prev = Some((t, au));
    }
    Ok(tr.finish())
}

fn check_enclosure_residual(
    problem: &GapProblem,
    surface: &GapSurface,
) -> Result<CheckResult, SolverError> {
    let mut tr = Tracker::new("enclosure_residual", anchor_of("enclosure_residual"));
    for slice in &surface.slices {
        let loc = Some((slice.t, f64::NAN));
        tr.record(slice.enclosure_width - 1e-8, loc);
        let residual = problem.slice_residual(slice)?;
        tr.record(residual - 2.0 * slice.enclosure_width - 1e-8, loc);
    }
    Ok(tr.finish())
}

fn coupling_window_result(report: &lipschitz::CouplingWindowReport) -> CheckResult {
    CheckResult {
        check_id: "coupling_window".into(),
        paper_anchor: anchor_of("coupling_window").into(),
        passed: report.satisfied,
        worst_violation: (-report.margin).max(0.0),
        location: None,
        note: Some(format!(
            "U2*a = {:.6}, margin = {:.3e}, max admissible U2 = {:.6}",
            report.u2_a, report.margin, report.max_admissible_u2
        )),
    }
}

/// Run the full conformance suite. Individual check failures are reported,
/// never raised; a violated coupling window short-circuits the checks that
/// depend on γ, which are then reported as skipped. Deterministic for a fixed
/// seed; results are sorted by check id.
pub fn run_all(params: &ModelParams, cfg: &SolverConfig) -> Result<Vec<CheckResult>, SolverError> {
    params.validate()?;
    cfg.validate()?;

    let curve1 = GapCurve::build(
        crate::constant_gap::CouplingProblem::new(params.hbar_omega_d, params.u1)?,
        cfg.quad_tol,
        cfg.root_tol,
    )?;
    let curve2 = GapCurve::build(
        crate::constant_gap::CouplingProblem::new(params.hbar_omega_d, params.u2)?,
        cfg.quad_tol,
        cfg.root_tol,
    )?;
    let z0 = constant_gap::solve_z0(cfg.root_tol.min(1e-12))?;
    let tau0 = constant_gap::solve_tau0(&curve1, z0, cfg.root_tol)?;
    let tau = cfg.tau_fraction * tau0;
    let window = lipschitz::check_coupling_window(&curve1, params.u2, tau, tau0, cfg.quad_tol)?;

    let mut results = vec![coupling_window_result(&window)];
    if !window.satisfied {
        let reason = format!(
            "coupling window violated (U2*a = {:.6} >= 1)",
            window.u2_a
        );
        for (id, anchor) in REGISTRY {
            if *id != "coupling_window" {
                results.push(CheckResult::skipped(id, anchor, &reason));
            }
        }
        results.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        return Ok(results);
    }

    let problem = GapProblem::from_parts(params.clone(), cfg.clone(), curve1, curve2)?;
    let seed = cfg.seed;

    results.push(check_tau0_defining(&problem)?);
    results.push(check_derivative_shape(&problem)?);
    results.push(check_curve_ordering(&problem)?);
    results.push(check_f_modulus(&problem)?);
    results.push(check_g_monotone(&problem, seed ^ 0x67)?);
    results.push(check_band_map(&problem, seed ^ 0xb4)?);
    results.push(check_lipschitz_in_t(&problem, seed ^ 0x15)?);
    results.push(check_operator_bound(
        &problem,
        0.5 * problem.constants().tau,
        50,
        seed ^ 0x210,
    )?);
    results.push(check_constant_equivalence(&problem, CurveSide::Lower)?);
    results.push(check_constant_equivalence(&problem, CurveSide::Upper)?);

    match problem.solve_surface() {
        Ok(surface) => {
            results.push(check_bracketing(&problem, &surface));
            results.push(check_monotone_lipschitz(&surface));
            results.push(check_enclosure_residual(&problem, &surface)?);
        }
        Err(err) => {
            let reason = format!("surface solve failed: {err}");
            for id in ["bracketing", "monotone_lipschitz", "enclosure_residual"] {
                results.push(CheckResult::skipped(id, anchor_of(id), &reason));
            }
        }
    }

    results.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn default_params() -> ModelParams {
        ModelParams {
            hbar_omega_d: 1.0,
            u1: 0.3,
            u2: 0.3002,
            potential: PotentialSpec::Separable { amplitude: 1.0 },
        }
    }

    fn default_problem() -> &'static GapProblem {
        static CELL: OnceLock<GapProblem> = OnceLock::new();
        CELL.get_or_init(|| {
            GapProblem::new(default_params(), SolverConfig::default()).unwrap()
        })
    }

    fn default_report() -> &'static Vec<CheckResult> {
        static CELL: OnceLock<Vec<CheckResult>> = OnceLock::new();
        CELL.get_or_init(|| run_all(&default_params(), &SolverConfig::default()).unwrap())
    }

    #[test]
    fn default_configuration_passes_every_check() {
        let report = default_report();
        for r in report.iter() {
            assert!(
                r.passed,
                "{} failed with violation {} ({:?})",
                r.check_id, r.worst_violation, r.note
            );
            assert!(r.worst_violation == 0.0);
        }
    }

    #[test]
    fn report_covers_the_registry_in_order() {
        let report = default_report();
        assert_eq!(report.len(), registered_check_count());
        let ids: Vec<&str> = report.iter().map(|r| r.check_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        assert_eq!(ids, sorted);

        let anchors: std::collections::BTreeSet<&str> =
            report.iter().map(|r| r.paper_anchor.as_str()).collect();
        for required in [
            "Proposition 1.1",
            "Lemma 1.3",
            "Theorem 1.5",
            "Eq. (1.6)",
            "Lemma 2.1",
            "Lemma 2.2",
            "Lemma 2.4",
            "Lemma 2.5",
            "Lemma 2.10",
            "Theorem 1.10",
        ] {
            assert!(anchors.contains(required), "anchor {required} missing");
        }
    }

    #[test]
    fn report_is_deterministic_for_a_fixed_seed() {
        let a = run_all(&default_params(), &SolverConfig::default()).unwrap();
        let b = run_all(&default_params(), &SolverConfig::default()).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn violated_window_fails_and_skips_the_rest() {
        let params = ModelParams {
            u2: 0.9,
            ..default_params()
        };
        let report = run_all(&params, &SolverConfig::default()).unwrap();
        assert_eq!(report.len(), registered_check_count());
        let window = report
            .iter()
            .find(|r| r.check_id == "coupling_window")
            .unwrap();
        assert!(!window.passed);
        assert!(window.worst_violation > 0.0);
        for r in report.iter().filter(|r| r.check_id != "coupling_window") {
            assert!(!r.passed);
            assert!(r.note.as_deref().unwrap_or("").starts_with("skipped"));
            assert!(!r.worst_violation.is_finite());
        }
    }

    #[test]
    fn perturbed_surface_fails_monotonicity_and_is_located() {
        let problem = default_problem();
        let mut surface = problem.solve_surface().unwrap();
        // Raise one value above its colder neighbor.
        let node = 7;
        let row = 5;
        let bump = 1e-4;
        surface.slices[row].upper[node] += bump;
        surface.slices[row].lower[node] += bump;
        let result = check_monotone_lipschitz(&surface);
        assert!(!result.passed);
        let (t, x) = result.location.unwrap();
        assert_eq!(t, surface.t_grid[row]);
        assert_eq!(x, surface.nodes()[node]);
    }

    #[test]
    fn tampered_gamma_fails_the_lipschitz_bound() {
        let problem = default_problem();
        let mut surface = problem.solve_surface().unwrap();
        // A gamma far below the observed |du/dT| breaks the upper bound.
        surface.gamma = 1e-9;
        let result = check_monotone_lipschitz(&surface);
        assert!(!result.passed, "check must be sensitive to gamma");
    }

    #[test]
    fn bracketing_attains_the_edges_for_constant_potentials() {
        let problem = default_problem();
        for (side, curve) in [
            (CurveSide::Lower, problem.curve1()),
            (CurveSide::Upper, problem.curve2()),
        ] {
            let value = match side {
                CurveSide::Lower => problem.params().u1,
                CurveSide::Upper => problem.params().u2,
            };
            let constant = problem.with_potential(PotentialSpec::Constant { value }).unwrap();
            let surface = constant.solve_surface().unwrap();
            let res = check_bracketing(&constant, &surface);
            assert!(res.passed, "violation {}", res.worst_violation);
            // The solution coincides with the matching curve edge.
            let mid = surface.slices[0].midpoint()[0];
            let edge = curve.value_exact(0.0).unwrap();
            assert!((mid - edge).abs() < 1e-8);
        }
    }

    #[test]
    fn mid_band_constant_sits_strictly_inside() {
        let problem = default_problem();
        let params = problem.params();
        let mid_u = 0.5 * (params.u1 + params.u2);
        let constant = problem
            .with_potential(PotentialSpec::Constant { value: mid_u })
            .unwrap();
        let surface = constant.solve_surface().unwrap();
        for slice in &surface.slices {
            let d1 = problem.curve1().value_exact(slice.t).unwrap();
            let d2 = problem.curve2().value_exact(slice.t).unwrap();
            for v in slice.midpoint() {
                assert!(v > d1 && v < d2, "{v} not strictly inside ({d1}, {d2})");
            }
        }
    }

    #[test]
    fn operator_bound_on_identical_inputs_is_tight() {
        let problem = default_problem();
        let res = check_operator_bound(problem, 0.5 * problem.constants().tau, 5, 1).unwrap();
        assert!(res.passed);
    }

    #[test]
    fn skipped_results_serialize_violation_as_null() {
        let r = CheckResult::skipped("x", "Lemma 0", "because");
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"worst_violation\":null"));
    }
}
