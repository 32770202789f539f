//! JSON formats for complexes, covers, forms, LCK data, grids, maps and
//! well-related specs.
//!
//! Loaders report problems as [`InputError`] with a location inside the
//! document, e.g. `potentials[2].values."5"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use lckspace_core::psh::grid::{ComplexBox, GridDomain, GridFunction, Region};
use lckspace_core::psh::poly::{format_monomial, parse_monomial, PolyMap, Polynomial};
use lckspace_core::psh::wellrelated::{SourceChart, TargetChart, WellRelatedSpec};
use lckspace_core::psh::{FieldExpr, PshError};
use lckspace_core::{ClosedOneForm, Cover, LckData, Mode, PotentialHandle, SimplicialComplex, Subcomplex};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::scalar_text::{scalar_source, TextScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{file}: at {location}: {message}")]
pub struct InputError {
    pub file: String,
    pub location: String,
    pub message: String,
}

impl InputError {
    pub fn new(file: &str, location: impl Into<String>, message: impl ToString) -> Self {
        Self { file: file.into(), location: location.into(), message: message.to_string() }
    }
}

/// Parses text into a JSON value; syntax errors carry line and column.
pub fn parse_value(file: &str, text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::new(file, format!("line {}, column {}", e.line(), e.column()), e))
}

/// Deserializes a value; shape errors carry the path of the offending
/// field.
pub fn from_value<T: DeserializeOwned>(file: &str, value: &Value) -> Result<T, InputError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        InputError::new(file, if path == "." { "document root".into() } else { path }, e.into_inner())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
}

/// A chart: a vertex list for the full subcomplex on those vertices, or
/// explicit simplices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChartJson {
    Induced(Vec<usize>),
    Explicit {
        vertices: Vec<usize>,
        #[serde(default)]
        edges: Vec<[usize; 2]>,
        #[serde(default)]
        triangles: Vec<[usize; 3]>,
    },
}

/// `"star"`, `"single"` or `{"charts": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverJson {
    Named(String),
    Charts { charts: Vec<ChartJson> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuesJson {
    pub chart: usize,
    pub values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormJson {
    pub complex: ComplexJson,
    pub cover: CoverJson,
    pub potentials: Vec<ValuesJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HandleKind {
    Abstract,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleJson {
    pub chart: usize,
    pub kind: HandleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_ref: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeJson {
    #[default]
    Lck,
    Lcpk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LckJson {
    pub complex: ComplexJson,
    pub cover: CoverJson,
    #[serde(default)]
    pub mode: ModeJson,
    pub conformal_factors: Vec<ValuesJson>,
    /// Charts without an entry get `phi_<chart>`.
    #[serde(default)]
    pub potentials: Vec<HandleJson>,
}

pub fn build_complex(file: &str, c: &ComplexJson) -> Result<Arc<SimplicialComplex>, InputError> {
    SimplicialComplex::build(c.vertices, &c.edges, &c.triangles)
        .map(Arc::new)
        .map_err(|e| InputError::new(file, "complex", e))
}

fn edge_list(complex: &SimplicialComplex, ids: &[usize]) -> Vec<[usize; 2]> {
    ids.iter().map(|&e| complex.edges()[e]).collect()
}

pub fn build_cover(file: &str, complex: &Arc<SimplicialComplex>, c: &CoverJson) -> Result<Cover, InputError> {
    let charts = match c {
        CoverJson::Named(name) if name == "star" => return Ok(Cover::star(complex.clone())),
        CoverJson::Named(name) if name == "single" => return Ok(Cover::single(complex.clone())),
        CoverJson::Named(name) => {
            return Err(InputError::new(file, "cover", format!("unknown cover {name:?}; use \"star\", \"single\" or charts")))
        }
        CoverJson::Charts { charts } => charts,
    };
    let subs = charts
        .iter()
        .enumerate()
        .map(|(i, chart)| {
            let sub = match chart {
                ChartJson::Induced(v) => Subcomplex::induced(complex, v),
                ChartJson::Explicit { vertices, edges, triangles } => {
                    Subcomplex::from_simplices(complex, vertices, edges, triangles)
                }
            };
            sub.map_err(|e| InputError::new(file, format!("cover.charts[{i}]"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Cover::new(complex.clone(), subs).map_err(|e| InputError::new(file, "cover.charts", e))
}

pub fn cover_json(cover: &Cover) -> CoverJson {
    let complex = cover.complex();
    if *cover == Cover::star(complex.clone()) {
        return CoverJson::Named("star".into());
    }
    let charts = cover
        .charts()
        .iter()
        .map(|c| {
            if Subcomplex::induced(complex, c.vertices()).as_ref() == Ok(c) {
                ChartJson::Induced(c.vertices().to_vec())
            } else {
                ChartJson::Explicit {
                    vertices: c.vertices().to_vec(),
                    edges: edge_list(complex, c.edge_ids()),
                    triangles: c.triangle_ids().iter().map(|&t| complex.triangles()[t]).collect(),
                }
            }
        })
        .collect();
    CoverJson::Charts { charts }
}

pub fn complex_json(complex: &SimplicialComplex) -> ComplexJson {
    let mut edges = complex.edges().to_vec();
    // Faces of listed triangles are implied.
    edges.retain(|&[a, b]| complex.triangle_apexes(a, b).is_empty());
    ComplexJson { vertices: complex.vertex_count(), edges, triangles: complex.triangles().to_vec() }
}

/// Per-chart `(vertex, value)` lists read from `field`.
fn build_values<S: TextScalar>(
    file: &str,
    cover: &Cover,
    entries: &[ValuesJson],
    field: &str,
) -> Result<Vec<Vec<(usize, S)>>, InputError> {
    let mut maps: Vec<Option<Vec<(usize, S)>>> = vec![None; cover.len()];
    for (i, entry) in entries.iter().enumerate() {
        let here = format!("{field}[{i}]");
        let slot = maps
            .get_mut(entry.chart)
            .ok_or_else(|| InputError::new(file, format!("{here}.chart"), format!("no chart {} in a cover of {}", entry.chart, cover.len())))?;
        if slot.is_some() {
            return Err(InputError::new(file, format!("{here}.chart"), format!("chart {} listed twice", entry.chart)));
        }
        let mut row = Vec::with_capacity(entry.values.len());
        for (key, v) in &entry.values {
            let at = format!("{here}.values.{key:?}");
            let vertex: usize = key.trim().parse().map_err(|_| InputError::new(file, &at, "keys are vertex indices"))?;
            let text = scalar_source(v).ok_or_else(|| InputError::new(file, &at, "expected a string or number"))?;
            row.push((vertex, S::parse_text(&text).map_err(|e| InputError::new(file, &at, e))?));
        }
        *slot = Some(row);
    }
    maps.into_iter()
        .enumerate()
        .map(|(a, m)| m.ok_or_else(|| InputError::new(file, field, format!("chart {a} has no entry"))))
        .collect()
}

fn values_json<S: TextScalar>(cover: &Cover, rows: &[Vec<S>]) -> Vec<ValuesJson> {
    cover
        .charts()
        .iter()
        .zip(rows)
        .enumerate()
        .map(|(a, (chart, row))| ValuesJson {
            chart: a,
            values: chart.vertices().iter().zip(row).map(|(v, s)| (v.to_string(), Value::String(s.to_text()))).collect(),
        })
        .collect()
}

pub fn load_form<S: TextScalar>(file: &str, doc: &Value) -> Result<ClosedOneForm<S>, InputError> {
    let f: FormJson = from_value(file, doc)?;
    let complex = build_complex(file, &f.complex)?;
    let cover = build_cover(file, &complex, &f.cover)?;
    let maps = build_values(file, &cover, &f.potentials, "potentials")?;
    ClosedOneForm::from_maps(cover, maps).map_err(|e| InputError::new(file, "potentials", e))
}

pub fn form_json<S: TextScalar>(form: &ClosedOneForm<S>) -> FormJson {
    FormJson {
        complex: complex_json(form.complex()),
        cover: cover_json(form.cover()),
        potentials: values_json(form.cover(), form.potentials()),
    }
}

pub fn load_lck<S: TextScalar>(file: &str, doc: &Value) -> Result<LckData<S>, InputError> {
    let l: LckJson = from_value(file, doc)?;
    let complex = build_complex(file, &l.complex)?;
    let cover = build_cover(file, &complex, &l.cover)?;
    let maps = build_values(file, &cover, &l.conformal_factors, "conformal_factors")?;
    let factors = ClosedOneForm::from_maps(cover.clone(), maps).map_err(|e| InputError::new(file, "conformal_factors", e))?;
    let mut handles = PotentialHandle::numbered(cover.len());
    let mut seen = vec![false; cover.len()];
    for (i, h) in l.potentials.iter().enumerate() {
        let here = format!("potentials[{i}]");
        if h.chart >= cover.len() || seen[h.chart] {
            return Err(InputError::new(file, format!("{here}.chart"), format!("chart {} is out of range or repeated", h.chart)));
        }
        seen[h.chart] = true;
        handles[h.chart] = match h.kind {
            HandleKind::Abstract => PotentialHandle::Abstract(h.name.clone().unwrap_or_else(|| format!("phi_{}", h.chart))),
            HandleKind::Grid => PotentialHandle::Grid(
                h.grid_ref.clone().ok_or_else(|| InputError::new(file, format!("{here}.grid_ref"), "grid potentials need a grid_ref"))?,
            ),
        };
    }
    let mode = match l.mode {
        ModeJson::Lck => Mode::Lck,
        ModeJson::Lcpk => Mode::Lcpk,
    };
    LckData::from_form(factors, handles, mode).map_err(|e| InputError::new(file, "potentials", e))
}

pub fn lck_json<S: TextScalar>(lck: &LckData<S>) -> LckJson {
    let potentials = lck
        .handles()
        .iter()
        .enumerate()
        .map(|(a, h)| match h {
            PotentialHandle::Abstract(name) => HandleJson { chart: a, kind: HandleKind::Abstract, name: Some(name.clone()), grid_ref: None },
            PotentialHandle::Grid(r) => HandleJson { chart: a, kind: HandleKind::Grid, name: None, grid_ref: Some(r.clone()) },
        })
        .collect();
    LckJson {
        complex: complex_json(lck.complex()),
        cover: cover_json(lck.cover()),
        mode: match lck.mode() {
            Mode::Lck => ModeJson::Lck,
            Mode::Lcpk => ModeJson::Lcpk,
        },
        conformal_factors: values_json(lck.cover(), lck.conformal_factors()),
        potentials,
    }
}

/// `"0,1,2,0"`, `"0 1 2 0"` or `"[0,1,2,0]"`.
pub fn parse_path(text: &str) -> Result<Vec<usize>, InputError> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| s.parse().map_err(|_| InputError::new("--path", format!("entry {i}"), format!("{s:?} is not a vertex index"))))
        .collect()
}

/// Comma-separated floats, e.g. for `--epsilon` and `--at`.
pub fn parse_floats(flag: &str, text: &str) -> Result<Vec<f64>, InputError> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| InputError::new(flag, format!("entry {i}"), format!("{s:?} is not a finite number")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainJson {
    pub dim: usize,
    #[serde(rename = "box")]
    pub boxes: Vec<ComplexBox>,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridJson {
    pub domain: DomainJson,
    pub values: Vec<f64>,
}

pub fn build_domain(file: &str, at: &str, d: &DomainJson) -> Result<GridDomain, InputError> {
    if d.dim != d.boxes.len() {
        return Err(InputError::new(file, format!("{at}.box"), format!("dim is {} but {} boxes are given", d.dim, d.boxes.len())));
    }
    GridDomain::new(d.boxes.clone(), d.h).map_err(|e| InputError::new(file, at, e))
}

pub fn domain_json(d: &GridDomain) -> DomainJson {
    DomainJson { dim: d.dim(), boxes: d.boxes().to_vec(), h: d.h() }
}

pub fn load_grid(file: &str, doc: &Value) -> Result<GridFunction, InputError> {
    let g: GridJson = from_value(file, doc)?;
    let domain = build_domain(file, "domain", &g.domain)?;
    GridFunction::new(domain, g.values).map_err(|e| {
        let at = match e {
            PshError::NonFinite { node } => format!("values[{node}]"),
            _ => "values".into(),
        };
        InputError::new(file, at, e)
    })
}

pub fn grid_json(f: &GridFunction) -> GridJson {
    GridJson { domain: domain_json(f.domain()), values: f.values().to_vec() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    /// Monomial (`"1"`, `"z1^2*z2"`) to `[re, im]`.
    pub coeffs: BTreeMap<String, [f64; 2]>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub dim_in: usize,
    pub dim_out: usize,
    pub polys: Vec<PolyJson>,
    #[serde(default = "yes")]
    pub discrete_fibers: bool,
}

pub fn build_map(file: &str, at: &str, m: &MapJson) -> Result<PolyMap, InputError> {
    if m.polys.len() != m.dim_out {
        return Err(InputError::new(file, format!("{at}.polys"), format!("dim_out is {} but {} polynomials are given", m.dim_out, m.polys.len())));
    }
    let comps = m
        .polys
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let terms = p
                .coeffs
                .iter()
                .map(|(k, &[re, im])| {
                    parse_monomial(k)
                        .map(|mono| (mono, Complex64::new(re, im)))
                        .map_err(|e| InputError::new(file, format!("{at}.polys[{i}].coeffs.{k:?}"), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Polynomial::new(terms))
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    PolyMap::new(m.dim_in, comps, m.discrete_fibers).map_err(|e| InputError::new(file, at, e))
}

pub fn map_json(map: &PolyMap) -> MapJson {
    MapJson {
        dim_in: map.dim_in(),
        dim_out: map.dim_out(),
        polys: map
            .components()
            .iter()
            .map(|p| PolyJson { coeffs: p.terms().iter().map(|(m, c)| (format_monomial(m), [c.re, c.im])).collect() })
            .collect(),
        discrete_fibers: map.has_discrete_fibers(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetJson {
    #[serde(rename = "box")]
    pub boxes: Vec<ComplexBox>,
    pub psi: String,
    pub tau: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceChartJson {
    pub target: usize,
    #[serde(rename = "box")]
    pub boxes: Vec<ComplexBox>,
    pub phi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionJson {
    #[serde(rename = "box")]
    pub boxes: Vec<ComplexBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub source: DomainJson,
    pub target: DomainJson,
    pub map: MapJson,
    pub targets: Vec<TargetJson>,
    pub charts: Vec<SourceChartJson>,
    pub regions: Vec<RegionJson>,
}

fn expr(file: &str, at: String, source: &str) -> Result<FieldExpr, InputError> {
    FieldExpr::parse(source).map_err(|e| InputError::new(file, at, e))
}

pub fn load_spec(file: &str, doc: &Value) -> Result<WellRelatedSpec, InputError> {
    let s: SpecJson = from_value(file, doc)?;
    let targets = s
        .targets
        .iter()
        .enumerate()
        .map(|(t, j)| {
            Ok(TargetChart {
                bounds: j.boxes.clone(),
                psi: expr(file, format!("targets[{t}].psi"), &j.psi)?,
                tau: expr(file, format!("targets[{t}].tau"), &j.tau)?,
            })
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    let charts = s
        .charts
        .iter()
        .enumerate()
        .map(|(a, j)| Ok(SourceChart { target: j.target, bounds: j.boxes.clone(), phi: expr(file, format!("charts[{a}].phi"), &j.phi)? }))
        .collect::<Result<Vec<_>, InputError>>()?;
    let regions = s
        .regions
        .iter()
        .map(|r| match r.radii {
            Some([lo, hi]) => Region::shell(r.boxes.clone(), lo, hi),
            None => Region::boxed(r.boxes.clone()),
        })
        .collect();
    let spec = WellRelatedSpec {
        source: build_domain(file, "source", &s.source)?,
        target: build_domain(file, "target", &s.target)?,
        map: build_map(file, "map", &s.map)?,
        targets,
        charts,
        regions,
    };
    spec.check_shape().map_err(|e| {
        let at = match &e {
            PshError::MapDimension { .. } => "map".to_string(),
            PshError::ChartTarget { chart, .. } => format!("charts[{chart}].target"),
            PshError::ChartShape { chart } => format!("targets[{chart}] or charts[{chart}]"),
            _ => "document root".to_string(),
        };
        InputError::new(file, at, e)
    })?;
    Ok(spec)
}

pub fn spec_json(spec: &WellRelatedSpec) -> SpecJson {
    SpecJson {
        source: domain_json(&spec.source),
        target: domain_json(&spec.target),
        map: map_json(&spec.map),
        targets: spec
            .targets
            .iter()
            .map(|t| TargetJson { boxes: t.bounds.clone(), psi: t.psi.source().into(), tau: t.tau.source().into() })
            .collect(),
        charts: spec
            .charts
            .iter()
            .map(|c| SourceChartJson { target: c.target, boxes: c.bounds.clone(), phi: c.phi.source().into() })
            .collect(),
        regions: spec
            .regions
            .iter()
            .map(|r| RegionJson { boxes: r.boxes.clone(), radii: r.radii.map(|(a, b)| [a, b]) })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lckspace_core::Rational;
    use serde_json::json;

    fn c3_form() -> Value {
        json!({
            "complex": {"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]},
            "cover": "star",
            "potentials": [
                {"chart": 0, "values": {"0": "0", "1": "1/3", "2": "-1/3"}},
                {"chart": 1, "values": {"0": "0", "1": "1/3", "2": "2/3"}},
                {"chart": 2, "values": {"0": "1", "1": "1/3", "2": "2/3"}}
            ]
        })
    }

    #[test]
    fn form_round_trips_through_json() {
        let form: ClosedOneForm<Rational> = load_form("f", &c3_form()).unwrap();
        let back = serde_json::to_value(form_json(&form)).unwrap();
        let again: ClosedOneForm<Rational> = load_form("g", &back).unwrap();
        assert_eq!(form, again);
    }

    #[test]
    fn bad_scalar_is_located() {
        let mut doc = c3_form();
        doc["potentials"][1]["values"]["2"] = json!("2/0");
        let e = load_form::<Rational>("f.json", &doc).unwrap_err();
        assert_eq!(e.location, "potentials[1].values.\"2\"");
    }

    #[test]
    fn shape_errors_carry_a_path() {
        let mut doc = c3_form();
        doc["potentials"][0]["chart"] = json!("zero");
        let e = load_form::<Rational>("f.json", &doc).unwrap_err();
        assert_eq!(e.location, "potentials[0].chart");
        let e = parse_value("f.json", "{\n \"a\": }").unwrap_err();
        assert_eq!(e.location, "line 2, column 7");
    }

    #[test]
    fn non_constant_overlap_is_rejected() {
        let mut doc = c3_form();
        doc["potentials"][2]["values"]["0"] = json!("5");
        let e = load_form::<Rational>("f.json", &doc).unwrap_err();
        assert_eq!(e.location, "potentials");
        assert!(e.message.contains("not constant"), "{}", e.message);
    }

    #[test]
    fn explicit_charts_survive_writing() {
        let complex = Arc::new(SimplicialComplex::build(4, &[[0, 1], [1, 2], [2, 3], [3, 0], [0, 2]], &[]).unwrap());
        let cover = Cover::new(complex.clone(), vec![Subcomplex::closed_star(&complex, 0).unwrap(), Subcomplex::full(&complex)]).unwrap();
        let json = cover_json(&cover);
        assert!(matches!(&json, CoverJson::Charts { charts } if matches!(charts[0], ChartJson::Explicit { .. })));
        assert_eq!(build_cover("c", &complex, &json).unwrap(), cover);
    }

    #[test]
    fn paths_and_floats() {
        assert_eq!(parse_path("0,1, 2 0").unwrap(), vec![0, 1, 2, 0]);
        assert_eq!(parse_path("[3]").unwrap(), vec![3]);
        assert!(parse_path("0,x").is_err());
        assert_eq!(parse_floats("--at", "0.5, -1").unwrap(), vec![0.5, -1.0]);
        assert!(parse_floats("--at", "inf").is_err());
    }
}
