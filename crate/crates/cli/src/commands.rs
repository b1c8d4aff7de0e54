//! Subcommand implementations.

use serde::Serialize;

use bcsgap::constant_gap::{self, CouplingProblem, GapCurve};
use bcsgap::lipschitz::{self, CriticalConstants};
use bcsgap::solver::{assemble_surface, GapProblem, GapSlice};
use bcsgap::verify::{self, CheckResult};

use crate::config::RunConfig;
use crate::output::{self, TOOL_VERSION};
use crate::CliError;

/// JSON Schema the verification report validates against; written next to the
/// report itself.
pub const REPORT_SCHEMA: &str = r##"{
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "bcsgap verification report",
  "type": "object",
  "required": ["tool_version", "config_hash", "checks"],
  "additionalProperties": false,
  "properties": {
    "tool_version": { "type": "string" },
    "config_hash": { "type": "string" },
    "checks": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["check_id", "paper_anchor", "passed", "worst_violation", "location"],
        "additionalProperties": false,
        "properties": {
          "check_id": { "type": "string" },
          "paper_anchor": { "type": "string" },
          "passed": { "type": "boolean" },
          "worst_violation": { "type": ["number", "null"] },
          "location": {
            "type": ["array", "null"],
            "items": { "type": ["number", "null"] },
            "minItems": 2,
            "maxItems": 2
          },
          "note": { "type": "string" }
        }
      }
    }
  }
}
"##;

fn build_curves(cfg: &RunConfig) -> Result<(GapCurve, GapCurve), CliError> {
    let m = &cfg.model;
    m.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let qt = cfg.solver.quad_tol;
    let rt = cfg.solver.root_tol;
    let curve1 = GapCurve::build(
        CouplingProblem::new(m.hbar_omega_d, m.u1).map_err(CliError::from)?,
        qt,
        rt,
    )?;
    let curve2 = GapCurve::build(
        CouplingProblem::new(m.hbar_omega_d, m.u2).map_err(CliError::from)?,
        qt,
        rt,
    )?;
    Ok((curve1, curve2))
}

#[derive(Serialize)]
struct ConstantsDoc {
    tool_version: &'static str,
    config_hash: String,
    z0: f64,
    tau0: f64,
    tau1: f64,
    tau2: f64,
    delta1_0: f64,
    delta2_0: f64,
    tau: f64,
    a: f64,
    b: f64,
    gamma: f64,
    /// T_c is only bracketed: tau1 <= T_c <= tau2.
    tc_lower: f64,
    tc_upper: f64,
    /// Diagnostic ratios (tau0 is empirically near T_c/2); reported, never asserted.
    tau0_over_tau1: f64,
    tau0_over_tau2: f64,
}

#[derive(Serialize)]
struct WindowDoc<'a> {
    tool_version: &'static str,
    config_hash: String,
    coupling_window: &'a lipschitz::CouplingWindowReport,
}

pub fn constants(cfg: &RunConfig) -> Result<(), CliError> {
    let hash = cfg.hash();
    let (curve1, curve2) = build_curves(cfg)?;
    let rt = cfg.solver.root_tol;
    let qt = cfg.solver.quad_tol;
    let z0 = constant_gap::solve_z0(rt.min(1e-12))?;
    let tau0 = constant_gap::solve_tau0(&curve1, z0, rt)?;
    let tau = cfg.solver.tau_fraction * tau0;
    let window = lipschitz::check_coupling_window(&curve1, cfg.model.u2, tau, tau0, qt)
        .map_err(|e| CliError::Config(e.to_string()))?;

    output::ensure_dir(&cfg.output.dir)?;
    if !window.satisfied {
        let doc = WindowDoc {
            tool_version: TOOL_VERSION,
            config_hash: hash,
            coupling_window: &window,
        };
        let path = cfg.output.dir.join("coupling_window.json");
        output::write_json(&path, &doc)?;
        eprintln!(
            "coupling window violated: U2*a = {:.6} >= 1 (max admissible U2 = {:.6}); \
             report written to {}",
            window.u2_a,
            window.max_admissible_u2,
            path.display()
        );
        return Err(CliError::Config(format!(
            "coupling window violated: U2*a = {:.6} >= 1",
            window.u2_a
        )));
    }

    let b = lipschitz::compute_b(&curve1, tau).map_err(|e| CliError::Config(e.to_string()))?;
    let gamma = lipschitz::compute_gamma(window.a, b, cfg.model.u2)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let doc = ConstantsDoc {
        tool_version: TOOL_VERSION,
        config_hash: hash,
        z0,
        tau0,
        tau1: curve1.tau_c(),
        tau2: curve2.tau_c(),
        delta1_0: curve1.delta0(),
        delta2_0: curve2.delta0(),
        tau,
        a: window.a,
        b,
        gamma,
        tc_lower: curve1.tau_c(),
        tc_upper: curve2.tau_c(),
        tau0_over_tau1: tau0 / curve1.tau_c(),
        tau0_over_tau2: tau0 / curve2.tau_c(),
    };
    if cfg.output.write_json {
        output::write_json(&cfg.output.dir.join("constants.json"), &doc)?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).expect("constants document serializes")
    );
    Ok(())
}

pub fn curve(cfg: &RunConfig) -> Result<(), CliError> {
    let hash = cfg.hash();
    let (curve1, curve2) = build_curves(cfg)?;
    let tau2 = curve2.tau_c();
    let n = cfg.solver.n_t;

    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let t = tau2 * i as f64 / (n - 1) as f64;
        let d1 = curve1.value_exact(t)?;
        let d2 = curve2.value_exact(t)?;
        rows.push(vec![t, d1, d2]);
    }
    output::ensure_dir(&cfg.output.dir)?;
    let path = cfg.output.dir.join("curve.csv");
    output::write_csv(&path, &hash, &["T", "delta1", "delta2"], rows.into_iter())?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct SliceMeta {
    t: f64,
    iterations: (usize, usize),
    enclosure_width: f64,
    residual: f64,
}

#[derive(Serialize)]
struct SolveMeta {
    tool_version: &'static str,
    config_hash: String,
    constants: CriticalConstants,
    max_enclosure: f64,
    slices: Vec<SliceMeta>,
}

#[derive(Serialize)]
struct Manifest {
    tool_version: &'static str,
    config_hash: String,
    status: &'static str,
    failed_t: f64,
    completed_slices: usize,
    error: String,
}

fn surface_rows(slices: &[GapSlice]) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    for slice in slices {
        for (j, &x) in slice.nodes.iter().enumerate() {
            let lower = slice.lower[j];
            let upper = slice.upper[j];
            rows.push(vec![
                slice.t,
                x,
                0.5 * (lower + upper),
                lower,
                upper,
                upper - lower,
            ]);
        }
    }
    rows
}

const SURFACE_COLUMNS: [&str; 6] = ["T", "x", "u_mid", "u_lower", "u_upper", "enclosure"];

/// Solve all slices; on non-convergence flush what is done plus a manifest
/// naming the failed temperature, then exit 5.
fn solve_slices(cfg: &RunConfig, problem: &GapProblem, hash: &str) -> Result<Vec<GapSlice>, CliError> {
    let mut slices = Vec::new();
    for t in problem.t_grid() {
        match problem.solve_slice(t) {
            Ok(slice) => slices.push(slice),
            Err(err) => {
                output::ensure_dir(&cfg.output.dir)?;
                output::write_csv(
                    &cfg.output.dir.join("surface.csv"),
                    hash,
                    &SURFACE_COLUMNS,
                    surface_rows(&slices).into_iter(),
                )?;
                output::write_json(
                    &cfg.output.dir.join("MANIFEST.json"),
                    &Manifest {
                        tool_version: TOOL_VERSION,
                        config_hash: hash.to_string(),
                        status: "partial",
                        failed_t: t,
                        completed_slices: slices.len(),
                        error: err.to_string(),
                    },
                )?;
                return Err(CliError::from(err));
            }
        }
    }
    Ok(slices)
}

pub fn solve(cfg: &RunConfig) -> Result<(), CliError> {
    let hash = cfg.hash();
    let problem = GapProblem::new(cfg.model.clone(), cfg.solver.clone())?;
    let slices = solve_slices(cfg, &problem, &hash)?;

    let mut slice_meta = Vec::with_capacity(slices.len());
    for slice in &slices {
        slice_meta.push(SliceMeta {
            t: slice.t,
            iterations: slice.iterations,
            enclosure_width: slice.enclosure_width,
            residual: problem.slice_residual(slice)?,
        });
    }
    let surface = assemble_surface(&problem, slices)?;

    output::ensure_dir(&cfg.output.dir)?;
    if cfg.output.write_csv {
        let path = cfg.output.dir.join("surface.csv");
        output::write_csv(
            &path,
            &hash,
            &SURFACE_COLUMNS,
            surface_rows(&surface.slices).into_iter(),
        )?;
        println!("wrote {}", path.display());
    }
    if cfg.output.write_json {
        let meta = SolveMeta {
            tool_version: TOOL_VERSION,
            config_hash: hash,
            constants: *problem.constants(),
            max_enclosure: surface.max_enclosure(),
            slices: slice_meta,
        };
        let path = cfg.output.dir.join("solve.json");
        output::write_json(&path, &meta)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn derivatives(cfg: &RunConfig) -> Result<(), CliError> {
    let hash = cfg.hash();
    let problem = GapProblem::new(cfg.model.clone(), cfg.solver.clone())?;
    let slices = solve_slices(cfg, &problem, &hash)?;
    let surface = assemble_surface(&problem, slices)?;

    let mut rows = Vec::new();
    for (i, &t) in surface.t_grid.iter().enumerate() {
        for (j, &x) in surface.nodes().iter().enumerate() {
            rows.push(vec![t, x, surface.dt1[i][j], surface.dt2[i][j]]);
        }
    }
    output::ensure_dir(&cfg.output.dir)?;
    let path = cfg.output.dir.join("derivatives.csv");
    output::write_csv(
        &path,
        &hash,
        &["T", "x", "du_dT", "d2u_dT2"],
        rows.into_iter(),
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct Report {
    tool_version: &'static str,
    config_hash: String,
    checks: Vec<CheckResult>,
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let hash = cfg.hash();
    let checks = verify::run_all(&cfg.model, &cfg.solver)?;

    output::ensure_dir(&cfg.output.dir)?;
    let report = Report {
        tool_version: TOOL_VERSION,
        config_hash: hash,
        checks,
    };
    let report_path = cfg.output.dir.join("report.json");
    output::write_json(&report_path, &report)?;
    std::fs::write(cfg.output.dir.join("report.schema.json"), REPORT_SCHEMA)?;

    let mut failed = 0usize;
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({})", check.check_id, check.paper_anchor);
        if !check.passed {
            failed += 1;
        }
    }
    println!(
        "{}/{} checks passed; report at {}",
        report.checks.len() - failed,
        report.checks.len(),
        report_path.display()
    );

    let window_failed = report
        .checks
        .iter()
        .any(|c| c.check_id == "coupling_window" && !c.passed);
    if window_failed {
        return Err(CliError::Config(
            "coupling window violated; see report.json".into(),
        ));
    }
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}
