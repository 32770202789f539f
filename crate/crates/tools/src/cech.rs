//! `cech` subcommands.

use std::sync::Arc;
use std::time::Instant;

use lckspace_core::cech::{Exactness, NonExactWitness, Period};
use lckspace_core::random::random_path;
use lckspace_core::{ClosedOneForm, CoveringMap, EdgePath, EdgePathGroup, FormError, SimplicialComplex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cli::{CechCmd, Global};
use crate::format::{form_json, load_form, parse_path, InputError};
use crate::report::{Outcome, RunReport};
use crate::scalar_text::{Numeric, TextScalar};
use crate::{load_doc, with_scalar, write_json};

pub(crate) fn run(r: &mut RunReport, g: &Global, cmd: &CechCmd) -> Result<(), InputError> {
    let (CechCmd::Integrate { form, .. }
    | CechCmd::Monodromy { form, .. }
    | CechCmd::Exact { form, .. }
    | CechCmd::Primitive { form, .. }
    | CechCmd::Pullback { form, .. }) = cmd;
    let (name, doc) = load_doc(r, form)?;
    let mode = Numeric::detect(&doc, g.float);
    r.result("scalars", mode.name());
    with_scalar!(mode, S => {
        let start = Instant::now();
        let form = load_form::<S>(&name, &doc)?;
        r.lap("load", start);
        dispatch(r, g, cmd, &form)
    })
}

fn dispatch<S: TextScalar>(r: &mut RunReport, g: &Global, cmd: &CechCmd, form: &ClosedOneForm<S>) -> Result<(), InputError> {
    let start = Instant::now();
    let out = match cmd {
        CechCmd::Integrate { path, .. } => integrate(r, form, path),
        CechCmd::Monodromy { basepoint, .. } => monodromy(r, form, *basepoint),
        CechCmd::Exact { basepoint, .. } => exact(r, form, *basepoint),
        CechCmd::Primitive { basepoint, .. } => primitive(r, form, *basepoint),
        CechCmd::Pullback { basepoint, samples, out, .. } => {
            pullback(r, form, *basepoint, g.radius, *samples, g.seed, out.as_deref())
        }
    };
    r.lap("compute", start);
    out
}

pub(crate) fn text<S: TextScalar>(s: &S) -> Value {
    Value::String(s.to_text())
}

pub(crate) fn texts<S: TextScalar>(values: &[S]) -> Value {
    Value::Array(values.iter().map(text).collect())
}

pub(crate) fn period_json<S: TextScalar>(p: &Period<S>) -> Value {
    json!({ "generator": p.generator, "edge": p.edge, "loop": p.loop_path.vertices(), "integral": text(&p.integral) })
}

pub(crate) fn non_exact_json<S: TextScalar>(w: &NonExactWitness<S>) -> Value {
    json!({
        "generator": w.generator,
        "edge": w.edge,
        "loop": w.loop_path.vertices(),
        "integral": text(&w.integral),
        "periods": w.periods.iter().map(period_json).collect::<Vec<_>>(),
    })
}

pub(crate) fn basepoint_group(complex: &SimplicialComplex, basepoint: usize) -> Result<EdgePathGroup, InputError> {
    EdgePathGroup::new(complex, basepoint).map_err(|e| InputError::new("--basepoint", basepoint.to_string(), e))
}

/// Fails `stage` with the error as witness.
pub(crate) fn stage_failed(r: &mut RunReport, stage: &str, err: impl ToString) {
    let message = err.to_string();
    r.check(stage, Outcome::Fail, format!("{stage} failed: {message}"), Some(json!({ "stage": stage, "error": message })));
}

fn integrate<S: TextScalar>(r: &mut RunReport, form: &ClosedOneForm<S>, path: &str) -> Result<(), InputError> {
    let vertices = parse_path(path)?;
    let p = EdgePath::new(form.complex(), vertices).map_err(|e| InputError::new("--path", path, e))?;
    match form.integrate(&p) {
        Ok(v) => {
            r.check("integral", Outcome::Pass, format!("integral along {:?} is {}", p.vertices(), v.to_text()), None);
            r.result("integral", text(&v));
            r.result("path", p.vertices());
        }
        Err(e) => stage_failed(r, "integral", e),
    }
    Ok(())
}

fn monodromy<S: TextScalar>(r: &mut RunReport, form: &ClosedOneForm<S>, basepoint: usize) -> Result<(), InputError> {
    let group = basepoint_group(form.complex(), basepoint)?;
    let chi = match form.monodromy_character(basepoint) {
        Ok(c) => c.restrict(&group.simplification),
        Err(e) => {
            stage_failed(r, "monodromy", e);
            return Ok(());
        }
    };
    let generators: Vec<Value> = group
        .simplification
        .kept
        .iter()
        .zip(chi.values())
        .map(|(&g, v)| json!({ "generator": g, "edge": group.generator_edges[g], "loop": group.generator_loop(g).vertices(), "value": text(v) }))
        .collect();
    let shown: Vec<String> = chi.values().iter().map(|v| v.to_text()).collect();
    r.check(
        "monodromy",
        Outcome::Pass,
        format!("{} generator(s) after simplification: [{}]", shown.len(), shown.join(", ")),
        None,
    );
    r.result("character", texts(chi.values()));
    r.result("generators", generators);
    Ok(())
}

fn exact<S: TextScalar>(r: &mut RunReport, form: &ClosedOneForm<S>, basepoint: usize) -> Result<(), InputError> {
    basepoint_group(form.complex(), basepoint)?;
    match form.is_exact(basepoint) {
        Ok(Exactness::Exact(f)) => {
            r.check("exact", Outcome::Pass, "the form is the differential of a global function", None);
            r.result("primitive", texts(f.values()));
        }
        Ok(Exactness::NotExact(w)) => r.check(
            "exact",
            Outcome::Fail,
            format!("loop {:?} has integral {}", w.loop_path.vertices(), w.integral.to_text()),
            Some(non_exact_json(&w)),
        ),
        Err(e) => stage_failed(r, "exact", e),
    }
    Ok(())
}

fn primitive<S: TextScalar>(r: &mut RunReport, form: &ClosedOneForm<S>, basepoint: usize) -> Result<(), InputError> {
    basepoint_group(form.complex(), basepoint)?;
    match form.primitive_on_simply_connected(basepoint) {
        Ok(f) => {
            r.check("primitive", Outcome::Pass, "primitive found and checked on every chart component", None);
            r.result("primitive", texts(f.values()));
        }
        Err(FormError::NotSimplyConnected { generator, edge }) => {
            let group = basepoint_group(form.complex(), basepoint)?;
            r.check(
                "primitive",
                Outcome::Fail,
                format!("complex is not simply connected: generator {generator} on edge {edge:?} survives"),
                Some(json!({ "generator": generator, "edge": edge, "loop": group.generator_loop(generator).vertices() })),
            );
        }
        Err(e) => stage_failed(r, "primitive", e),
    }
    Ok(())
}

fn pullback<S: TextScalar>(
    r: &mut RunReport,
    form: &ClosedOneForm<S>,
    basepoint: usize,
    radius: usize,
    samples: usize,
    seed: u64,
    out: Option<&std::path::Path>,
) -> Result<(), InputError> {
    basepoint_group(form.complex(), basepoint)?;
    let map = match CoveringMap::universal_at(form.complex().clone(), basepoint, radius) {
        Ok(m) => m,
        Err(e) => {
            stage_failed(r, "cover", e);
            return Ok(());
        }
    };
    cover_summary(r, &map);
    let pulled = match form.pullback(&map) {
        Ok(p) => p,
        Err(e) => {
            stage_failed(r, "pullback", e);
            return Ok(());
        }
    };
    let total: &Arc<SimplicialComplex> = map.total();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = None;
    for _ in 0..samples {
        let p = random_path(&mut rng, total, 8);
        let up = pulled.form.integrate(&p);
        let down = form.integrate(&map.project_path(&p));
        match (up, down) {
            (Ok(a), Ok(b)) if a.near(&b) => {}
            (a, b) => {
                bad = Some(json!({
                    "path": p.vertices(),
                    "upstairs": a.map(|v| v.to_text()).unwrap_or_else(|e| e.to_string()),
                    "downstairs": b.map(|v| v.to_text()).unwrap_or_else(|e| e.to_string()),
                }));
                break;
            }
        }
    }
    match bad {
        None => r.check(
            "naturality",
            Outcome::Pass,
            format!("{samples} random paths upstairs integrate like their projections (seed {seed})"),
            None,
        ),
        Some(w) => r.check("naturality", Outcome::Fail, "a lifted path integrates differently", Some(w)),
    }
    r.result("pulled_charts", pulled.form.cover().len());
    r.result("incomplete_charts", pulled.incomplete.len());
    if let Some(path) = out {
        write_json(path, &form_json(&pulled.form))?;
    }
    Ok(())
}

pub(crate) fn cover_summary(r: &mut RunReport, map: &CoveringMap) {
    let deck = map.deck().len();
    let total = map.total();
    if map.is_complete() {
        r.check("cover", Outcome::Pass, format!("complete universal cover with {deck} sheets"), None);
    } else {
        r.check(
            "cover",
            Outcome::Partial,
            format!("deck group not found finite; truncated to {deck} sheets within radius {}", map.radius().unwrap_or(0)),
            None,
        );
    }
    r.result(
        "cover",
        json!({
            "sheets": deck,
            "complete": map.is_complete(),
            "vertices": total.vertex_count(),
            "edges": total.edges().len(),
            "triangles": total.triangles().len(),
            "deck_generators": map.deck_generator_count(),
        }),
    );
}
