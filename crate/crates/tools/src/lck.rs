//! `lck` subcommands.

use std::time::Instant;

use lckspace_core::cech::Exactness;
use lckspace_core::conformal::{descend_to_lck, lift_to_kahler, Descent, KahlerLift};
use lckspace_core::{Character, CoveringMap, LckData};
use serde_json::json;

use crate::cech::{basepoint_group, cover_summary, non_exact_json, stage_failed, texts};
use crate::cli::{Global, LckCmd};
use crate::format::{form_json, lck_json, load_lck, InputError};
use crate::report::{Outcome, RunReport};
use crate::scalar_text::{Numeric, TextScalar};
use crate::{load_doc, with_scalar, write_json};

pub(crate) fn run(r: &mut RunReport, g: &Global, cmd: &LckCmd) -> Result<(), InputError> {
    let (LckCmd::Lee { lck, basepoint, .. }
    | LckCmd::Gck { lck, basepoint }
    | LckCmd::Character { lck, basepoint }
    | LckCmd::Lift { lck, basepoint }
    | LckCmd::Descend { lck, basepoint, .. }
    | LckCmd::Roundtrip { lck, basepoint }) = cmd;
    let (name, doc) = load_doc(r, lck)?;
    let mode = Numeric::detect(&doc, g.float);
    r.result("scalars", mode.name());
    with_scalar!(mode, S => {
        let start = Instant::now();
        let data = load_lck::<S>(&name, &doc)?;
        basepoint_group(data.complex(), *basepoint)?;
        r.lap("load", start);
        let start = Instant::now();
        let out = match cmd {
            LckCmd::Lee { out, .. } => lee(r, &data, *basepoint, out.as_deref()),
            LckCmd::Gck { .. } => gck(r, &data, *basepoint),
            LckCmd::Character { .. } => character(r, &data, *basepoint),
            LckCmd::Lift { .. } => lift(r, &data, *basepoint, g.radius).map(|_| ()),
            LckCmd::Descend { out, .. } => descend(r, &data, *basepoint, g.radius, out.as_deref()),
            LckCmd::Roundtrip { .. } => roundtrip(r, &data, *basepoint, g.radius),
        };
        r.lap("compute", start);
        out
    })
}

fn character_json<S: TextScalar>(chi: &Character<S>) -> serde_json::Value {
    json!({ "log": texts(chi.values()), "multiplicative": chi.multiplicative() })
}

fn lee<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize, out: Option<&std::path::Path>) -> Result<(), InputError> {
    let theta = lck.lee_form();
    let group = basepoint_group(lck.complex(), basepoint)?;
    match theta.monodromy_character(basepoint) {
        Ok(chi) => {
            let chi = chi.restrict(&group.simplification);
            r.check("lee", Outcome::Pass, format!("Lee form on {} charts", theta.cover().len()), None);
            r.result("periods", texts(chi.values()));
        }
        Err(e) => stage_failed(r, "lee", e),
    }
    r.result("lee_form", form_json(&theta));
    if let Some(path) = out {
        write_json(path, &form_json(&theta))?;
    }
    Ok(())
}

fn gck<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize) -> Result<(), InputError> {
    match lck.is_gck(basepoint) {
        Ok(Exactness::Exact(f)) => {
            r.check("gck", Outcome::Pass, "Lee form is exact; rescaling by exp(-f) gives Kähler data", None);
            r.result("lee_primitive", texts(f.values()));
        }
        Ok(Exactness::NotExact(w)) => r.check(
            "gck",
            Outcome::Fail,
            format!("not GCK: the Lee form integrates to {} along {:?}", w.integral.to_text(), w.loop_path.vertices()),
            Some(non_exact_json(&w)),
        ),
        Err(e) => stage_failed(r, "gck", e),
    }
    Ok(())
}

fn character<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize) -> Result<(), InputError> {
    let group = basepoint_group(lck.complex(), basepoint)?;
    match lck.lee_form().monodromy_character(basepoint) {
        Ok(chi) => {
            let chi = chi.restrict(&group.simplification);
            let shown: Vec<String> = chi.values().iter().map(|v| v.to_text()).collect();
            r.check("character", Outcome::Pass, format!("log character [{}]", shown.join(", ")), None);
            r.result("character", character_json(&chi));
        }
        Err(e) => stage_failed(r, "character", e),
    }
    Ok(())
}

fn cover<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize, radius: usize) -> Option<CoveringMap> {
    match CoveringMap::universal_at(lck.complex().clone(), basepoint, radius) {
        Ok(m) => {
            cover_summary(r, &m);
            Some(m)
        }
        Err(e) => {
            stage_failed(r, "cover", e);
            None
        }
    }
}

fn lift<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize, radius: usize) -> Result<Option<(CoveringMap, KahlerLift<S>)>, InputError> {
    let Some(map) = cover(r, lck, basepoint, radius) else { return Ok(None) };
    let lifted = match lift_to_kahler(lck, &map) {
        Ok(l) => l,
        Err(e) => {
            stage_failed(r, "lift", e);
            return Ok(None);
        }
    };
    let shown: Vec<String> = lifted.deck_character.values().iter().map(|v| v.to_text()).collect();
    r.check(
        "lift",
        if lifted.complete { Outcome::Pass } else { Outcome::Partial },
        format!("Kähler data on {} charts upstairs; homothety character [{}]", lifted.kahler.cover().len(), shown.join(", ")),
        None,
    );
    r.result("character", character_json(&lifted.deck_character));
    r.result("incomplete_charts", lifted.kahler.incomplete().len());
    Ok(Some((map, lifted)))
}

fn descend_from<S: TextScalar>(r: &mut RunReport, map: &CoveringMap, lifted: &KahlerLift<S>) -> Option<Descent<S>> {
    let down = match descend_to_lck(&lifted.kahler, &lifted.character, map) {
        Ok(d) => d,
        Err(e) => {
            stage_failed(r, "descend", e);
            return None;
        }
    };
    let outcome = if down.homothety_checks == 0 {
        Outcome::Fail
    } else if down.partial {
        Outcome::Partial
    } else {
        Outcome::Pass
    };
    let witness = (down.homothety_checks == 0).then(|| json!({ "homothety_checks": 0, "deck_generators": map.deck_generator_count() }));
    r.check(
        "homothety",
        outcome,
        format!("{} deck-translate chart pairs scale by the character", down.homothety_checks),
        witness,
    );
    Some(down)
}

fn descend<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize, radius: usize, out: Option<&std::path::Path>) -> Result<(), InputError> {
    let Some((map, lifted)) = lift(r, lck, basepoint, radius)? else { return Ok(()) };
    if let Some(down) = descend_from(r, &map, &lifted) {
        r.result("descended", lck_json(&down.lck));
        if let Some(path) = out {
            write_json(path, &lck_json(&down.lck))?;
        }
    }
    Ok(())
}

fn roundtrip<S: TextScalar>(r: &mut RunReport, lck: &LckData<S>, basepoint: usize, radius: usize) -> Result<(), InputError> {
    let Some((map, lifted)) = lift(r, lck, basepoint, radius)? else { return Ok(()) };
    let Some(down) = descend_from(r, &map, &lifted) else { return Ok(()) };
    match lck.conformal_difference(&down.lck) {
        Ok(Some(h)) => {
            r.check("rescale", Outcome::Pass, "descended data is a conformal rescale of the input", None);
            r.result("rescale_function", texts(h.values()));
        }
        Ok(None) => r.check(
            "rescale",
            Outcome::Fail,
            "descended factors do not differ from the input by one global function",
            Some(json!({ "input": lck_json(lck), "descended": lck_json(&down.lck) })),
        ),
        Err(e) => stage_failed(r, "rescale", e),
    }
    let group = basepoint_group(lck.complex(), basepoint)?;
    match (lck.lee_form().monodromy_character(basepoint), down.lck.lee_form().monodromy_character(basepoint)) {
        (Ok(a), Ok(b)) => {
            let (a, b) = (a.restrict(&group.simplification), b.restrict(&group.simplification));
            let same = a.values().len() == b.values().len() && a.values().iter().zip(b.values()).all(|(x, y)| x.near(y));
            r.check(
                "lee_character",
                Outcome::of(same),
                if same { "Lee characters agree" } else { "Lee characters differ" },
                (!same).then(|| json!({ "input": texts(a.values()), "descended": texts(b.values()) })),
            );
        }
        (Err(e), _) | (_, Err(e)) => stage_failed(r, "lee_character", e),
    }
    let conclusion = match lck.is_gck(basepoint) {
        Ok(Exactness::Exact(_)) if map.is_complete() => "finite fundamental group, so the structure is GCK".to_string(),
        Ok(Exactness::Exact(_)) => "Lee form is exact: GCK".to_string(),
        Ok(Exactness::NotExact(w)) => format!("not GCK: Lee period {} along {:?}", w.integral.to_text(), w.loop_path.vertices()),
        Err(e) => format!("GCK test failed: {e}"),
    };
    if map.is_complete() {
        let gck = matches!(lck.is_gck(basepoint), Ok(Exactness::Exact(_)));
        r.check(
            "finite_group_gck",
            Outcome::of(gck),
            "a finite fundamental group forces an exact Lee form",
            (!gck).then(|| json!({ "sheets": map.deck().len() })),
        );
    }
    r.result("conclusion", conclusion);
    r.result("lifted_character", texts(lifted.character.values()));
    Ok(())
}
