//! `psh` subcommands.

use std::time::Instant;

use lckspace_core::psh::grid::{
    complex_hessian, is_pluriharmonic, is_strongly_psh, max_entry_over, min_eigenvalue_over, GridFunction, Point, Region, Witness,
};
use lckspace_core::psh::plan::{
    glue, plan_epsilon, tune_epsilon, verify_glued_psh, verify_plan, verify_plan_pointwise, EpsilonPlan, GlueCheck, PlanCheck,
    PlanSample, SafetyFactors,
};
use lckspace_core::psh::wellrelated::{validate_sampled, ChartWitness, SampledSpec, WellRelatedSpec};
use serde_json::{json, Value};

use crate::cech::stage_failed;
use crate::cli::{path_str, Global, PshCmd};
use crate::format::{grid_json, load_grid, load_spec, parse_floats, InputError};
use crate::report::{Outcome, RunReport};
use crate::{load_doc, write_json};

/// Interior nodes keep this many layers from the boundary for stencils.
const STENCIL_MARGIN: usize = 2;

pub(crate) fn run(r: &mut RunReport, g: &Global, cmd: &PshCmd) -> Result<(), InputError> {
    match cmd {
        PshCmd::Hessian { grid, at } => {
            let f = load_grid_file(r, grid)?;
            hessian(r, &f, at.as_deref())
        }
        PshCmd::Check { grid, margin, pluriharmonic, region } => {
            let f = load_grid_file(r, grid)?;
            check(r, &f, *margin, *pluriharmonic, g.tol, region.as_deref())
        }
        PshCmd::Wellrelated { spec, margin } => with_spec(r, spec, |r, s| {
            validate(r, s, *margin);
            Ok(())
        }),
        PshCmd::Plan { spec } => with_spec(r, spec, |r, s| {
            if let Some(plan) = plan(r, s) {
                verify_plan_checks(r, s, &plan.epsilon);
            }
            Ok(())
        }),
        PshCmd::Glue { spec, epsilon, out } => with_spec(r, spec, |r, s| {
            let Some(eps) = epsilon_for(r, s, epsilon.as_deref())? else { return Ok(()) };
            match glue(s, &eps) {
                Ok(glued) => {
                    let values = glued.phi_eps.values();
                    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    r.check("glue", Outcome::Pass, format!("glued {} charts", glued.charts().len()), None);
                    r.result("epsilon", &eps);
                    r.result("correction_range", [lo, hi]);
                    if let Some(path) = out {
                        write_json(path, &grid_json(&glued.phi_eps))?;
                    }
                }
                Err(e) => stage_failed(r, "glue", e),
            }
            Ok(())
        }),
        PshCmd::Verify { spec, epsilon, margin } => with_spec(r, spec, |r, s| {
            let Some(eps) = epsilon_for(r, s, epsilon.as_deref())? else { return Ok(()) };
            match glue(s, &eps).and_then(|glued| verify_glued_psh(s, &glued, *margin, g.tol)) {
                Ok(c) => glue_checks(r, s, &c),
                Err(e) => stage_failed(r, "verify", e),
            }
            r.result("epsilon", &eps);
            Ok(())
        }),
        PshCmd::Pipeline { spec, margin } => with_spec(r, spec, |r, s| {
            pipeline(r, s, *margin, g.tol);
            Ok(())
        }),
    }
}

fn load_grid_file(r: &mut RunReport, path: &std::path::Path) -> Result<GridFunction, InputError> {
    let (name, doc) = load_doc(r, path)?;
    let start = Instant::now();
    let f = load_grid(&name, &doc)?;
    r.lap("load", start);
    Ok(f)
}

fn with_spec(
    r: &mut RunReport,
    path: &std::path::Path,
    f: impl FnOnce(&mut RunReport, &SampledSpec<'_>) -> Result<(), InputError>,
) -> Result<(), InputError> {
    let (name, doc) = load_doc(r, path)?;
    let start = Instant::now();
    let spec: WellRelatedSpec = load_spec(&name, &doc)?;
    let sampled = SampledSpec::new(&spec).map_err(|e| InputError::new(&path_str(path), "document root", e))?;
    r.lap("sample", start);
    f(r, &sampled)
}

pub(crate) fn point_json(p: &Point, dim: usize) -> Value {
    json!(p[..2 * dim])
}

fn witness_json(w: &Witness, dim: usize) -> Value {
    json!({ "node": w.node, "point": point_json(&w.point, dim), "value": w.value })
}

fn chart_witness_json(w: &ChartWitness, dim: usize) -> Value {
    json!({ "chart": w.chart, "point": point_json(&w.point, dim), "value": w.value })
}

fn hessian(r: &mut RunReport, f: &GridFunction, at: Option<&str>) -> Result<(), InputError> {
    let d = f.domain();
    let dim = d.dim();
    match at {
        Some(text) => {
            let coords = parse_floats("--at", text)?;
            if coords.len() != 2 * dim {
                return Err(InputError::new("--at", text, format!("expected {} coordinates", 2 * dim)));
            }
            let mut p: Point = [0.0; 4];
            p[..coords.len()].copy_from_slice(&coords);
            let node = d.nearest_node(&p).ok_or_else(|| InputError::new("--at", text, "point is outside the grid"))?;
            let h = complex_hessian(f, node).map_err(|e| InputError::new("--at", text, e))?;
            let entries: Vec<Vec<[f64; 2]>> =
                (0..dim).map(|j| (0..dim).map(|k| [h.get(j, k).re, h.get(j, k).im]).collect()).collect();
            let eig = h.eigenvalues();
            r.check("hessian", Outcome::Pass, format!("Levi form at node {node}, eigenvalues {:?}", &eig[..dim]), None);
            r.result("node", node);
            r.result("point", point_json(&d.point(node), dim));
            r.result("entries", entries);
            r.result("eigenvalues", &eig[..dim]);
        }
        None => {
            let nodes = d.interior(&(0..d.len()).collect::<Vec<_>>(), STENCIL_MARGIN);
            let lo = min_eigenvalue_over(f, &nodes).map_err(|e| InputError::new("grid", "values", e))?;
            let hi = max_entry_over(f, &nodes).map_err(|e| InputError::new("grid", "values", e))?;
            match (lo, hi) {
                (Some(lo), Some(hi)) => {
                    r.check("hessian", Outcome::Pass, format!("{} interior nodes", nodes.len()), None);
                    r.result("min_eigenvalue", witness_json(&lo, dim));
                    r.result("max_entry", witness_json(&hi, dim));
                }
                _ => return Err(InputError::new("grid", "domain", "no interior nodes")),
            }
        }
    }
    Ok(())
}

fn check(r: &mut RunReport, f: &GridFunction, margin: f64, pluriharmonic: bool, tol: f64, region: Option<&str>) -> Result<(), InputError> {
    let d = f.domain();
    let dim = d.dim();
    let region = match region {
        None => Region::boxed(d.boxes().to_vec()),
        Some(text) => {
            let v = parse_floats("--region", text)?;
            if v.len() != 4 * dim {
                return Err(InputError::new("--region", text, format!("expected {} numbers", 4 * dim)));
            }
            Region::boxed(v.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect())
        }
    };
    let result = if pluriharmonic { is_pluriharmonic(f, &region, tol) } else { is_strongly_psh(f, &region, margin) };
    let c = result.map_err(|e| InputError::new("--region", "region", e))?;
    let (name, detail) = if pluriharmonic {
        ("pluriharmonic", format!("largest Hessian entry {:.3e} against tolerance {tol:e}", c.worst.value))
    } else {
        ("strongly_psh", format!("smallest Levi eigenvalue {:.6} against margin {margin:e}", c.worst.value))
    };
    r.check(name, Outcome::of(c.passed), format!("{detail} over {} nodes", c.samples), Some(witness_json(&c.worst, dim)));
    Ok(())
}

fn validate(r: &mut RunReport, s: &SampledSpec<'_>, margin: f64) -> bool {
    let dim = s.domain().dim();
    match validate_sampled(s, margin) {
        Ok(report) => {
            for c in &report.conditions {
                r.check(
                    &format!("condition_{}", c.condition),
                    Outcome::of(c.passed),
                    c.detail.clone(),
                    c.witness.as_ref().map(|w| chart_witness_json(w, dim)),
                );
            }
            report.passed()
        }
        Err(e) => {
            stage_failed(r, "validate", e);
            false
        }
    }
}

fn plan(r: &mut RunReport, s: &SampledSpec<'_>) -> Option<EpsilonPlan> {
    let start = Instant::now();
    let plan = match plan_epsilon(s, SafetyFactors::default()) {
        Ok(p) => p,
        Err(e) => {
            stage_failed(r, "plan", e);
            return None;
        }
    };
    r.lap("plan", start);
    let constants: Vec<Value> = plan
        .constants
        .iter()
        .map(|k| json!({ "chart": k.chart, "region": k.region, "samples": k.samples, "p": k.p, "q": k.q, "b": k.b, "c": k.c }))
        .collect();
    r.check("plan", Outcome::Pass, format!("{} chart-region constants", constants.len()), None);
    r.result("levi_constants", constants);
    r.result("region_delta", &plan.region_delta);
    r.result("planned_epsilon", &plan.epsilon);
    Some(plan)
}

fn plan_sample_json(s: &PlanSample, dim: usize) -> Value {
    json!({ "point": point_json(&s.point, dim), "p": s.p, "b": s.b, "c": s.c, "q": s.q, "gap": (s.p - s.b) * s.q - s.c * s.c })
}

fn plan_check(r: &mut RunReport, name: &str, what: &str, c: &PlanCheck, dim: usize) -> bool {
    r.check(
        name,
        Outcome::of(c.passed()),
        format!("(P-B)Q > C^2 and B <= P/2 at {} of {} {what}", c.samples - c.failures, c.samples),
        c.worst.as_ref().map(|w| plan_sample_json(w, dim)),
    );
    c.passed()
}

fn verify_plan_checks(r: &mut RunReport, s: &SampledSpec<'_>, eps: &[f64]) -> bool {
    let dim = s.domain().dim();
    let start = Instant::now();
    let grid = verify_plan(s, eps);
    let fine = verify_plan_pointwise(s, eps);
    r.lap("verify plan", start);
    let mut ok = true;
    match grid {
        Ok(c) => ok &= plan_check(r, "plan_grid", "grid samples", &c, dim),
        Err(e) => {
            stage_failed(r, "plan_grid", e);
            ok = false;
        }
    }
    match fine {
        Ok(c) => ok &= plan_check(r, "plan_pointwise", "samples on the half-spacing lattice", &c, dim),
        Err(e) => {
            stage_failed(r, "plan_pointwise", e);
            ok = false;
        }
    }
    ok
}

fn epsilon_for(r: &mut RunReport, s: &SampledSpec<'_>, given: Option<&str>) -> Result<Option<Vec<f64>>, InputError> {
    match given {
        Some(text) => {
            let eps = parse_floats("--epsilon", text)?;
            if eps.len() != s.chart_count() || eps.iter().any(|&e| e <= 0.0) {
                return Err(InputError::new("--epsilon", text, format!("expected {} positive values", s.chart_count())));
            }
            Ok(Some(eps))
        }
        None => Ok(plan(r, s).map(|p| p.epsilon)),
    }
}

fn glue_checks(r: &mut RunReport, s: &SampledSpec<'_>, c: &GlueCheck) {
    let dim = s.domain().dim();
    r.check(
        "glued_psh",
        Outcome::of(c.psh_passed()),
        format!("smallest Levi eigenvalue {:.6} over {} support samples (margin {:e})", c.min_eigenvalue, c.samples, c.margin),
        c.worst.as_ref().map(|w| chart_witness_json(w, dim)),
    );
    r.check(
        "overlaps_pluriharmonic",
        Outcome::of(c.overlaps_passed()),
        format!("largest Hessian entry of overlap differences {:.3e} (tolerance {:e})", c.overlap_max, c.overlap_tol),
        (!c.overlaps_passed()).then(|| json!({ "overlap_max": c.overlap_max })),
    );
    r.result("min_eigenvalue", c.min_eigenvalue);
    r.result("overlap_max", c.overlap_max);
}

fn pipeline(r: &mut RunReport, s: &SampledSpec<'_>, margin: f64, tol: f64) {
    let start = Instant::now();
    let valid = validate(r, s, margin);
    r.lap("validate", start);
    if !valid {
        r.result("stopped_at", "validate");
        return;
    }
    let Some(plan) = plan(r, s) else {
        r.result("stopped_at", "plan");
        return;
    };
    verify_plan_checks(r, s, &plan.epsilon);
    let start = Instant::now();
    let tuned = match tune_epsilon(s, &plan.epsilon, margin, tol) {
        Ok(t) => t,
        Err(e) => {
            stage_failed(r, "tune", e);
            r.result("stopped_at", "tune");
            return;
        }
    };
    r.lap("glue and verify", start);
    r.check(
        "tune",
        Outcome::of(tuned.check.passed()),
        format!("{} halvings of the planned epsilon", tuned.halvings),
        (!tuned.check.passed()).then(|| json!({ "halvings": tuned.halvings })),
    );
    glue_checks(r, s, &tuned.check);
    r.result("epsilon", &tuned.epsilon);
    r.result("halvings", tuned.halvings);
}
