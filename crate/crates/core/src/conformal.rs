//! Locally conformally Kähler data on finite models.
//!
//! An LCK structure is recorded by its cover, one potential handle per chart
//! and the conformal factors `f_α`, which form a closed 1-form (the Lee
//! form). Lifting to the universal cover rescales by a primitive of the
//! pulled-back Lee form; deck transformations then act by homotheties whose
//! logarithms form the monodromy character. Descent runs the other way
//! through a flat weight bundle built from the character.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cech::{preimage_cover, ChartOrigin, ClosedOneForm, Exactness, FormError, GlobalFunction};
use crate::complex::{Cover, SimplicialComplex, Subcomplex, TopologyError};
use crate::covering::{CoverError, CoveringMap};
use crate::group::{Character, CharacterError, EdgePathGroup, Word};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LckError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("{got} potential handles for {expected} charts")]
    HandleCount { expected: usize, got: usize },
    #[error("character is defined on a different presentation")]
    CharacterGroupMismatch,
    #[error("transition for charts {alpha}, {beta} does not match an overlap component")]
    StrayTransition { alpha: usize, beta: usize },
    #[error("overlap component of charts {alpha}, {beta} has no transition")]
    MissingTransition { alpha: usize, beta: usize },
    #[error("cocycle fails at vertex {vertex} on charts {charts:?}: log-sum {sum}")]
    Cocycle { vertex: usize, charts: [usize; 3], sum: String },
    #[error("no flat section: chart cycle {cycle:?} has log-holonomy {holonomy}")]
    Holonomy { cycle: Vec<usize>, holonomy: String },
    #[error("section breaks s_{alpha} = t s_{beta} at vertex {vertex}")]
    SectionMismatch { alpha: usize, beta: usize, vertex: usize },
    #[error(
        "deck word {word} is not a homothety on chart {chart} at vertex {vertex}: \
         expected log-scale shift {expected}, found {found}"
    )]
    NotHomothetic { word: Word, chart: usize, vertex: usize, expected: String, found: String },
    #[error("deck word {word} moves chart {chart} onto a chart with another potential")]
    HandleMismatch { word: Word, chart: usize },
    #[error("base chart {0} has no complete lift")]
    MissingLift(usize),
    #[error("the two structures live on different covers")]
    DifferentCovers,
}

/// Local Kähler potential `φ_α` of a chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PotentialHandle {
    /// A tag; only carried along.
    Abstract(String),
    /// Reference to a sampled function, e.g. `"grids.json#phi0"`.
    Grid(String),
}

impl PotentialHandle {
    pub fn tag(name: impl Into<String>) -> Self {
        Self::Abstract(name.into())
    }

    /// `phi_0, phi_1, …`.
    pub fn numbered(n: usize) -> Vec<Self> {
        (0..n).map(|a| Self::Abstract(format!("phi_{a}"))).collect()
    }
}

/// LCK needs strongly psh potentials, LCpK only psh ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Lck,
    Lcpk,
}

/// Charts `(U_α, φ_α, f_α)` with `e^{f_α} i∂∂̄φ_α` agreeing on overlaps.
#[derive(Debug, Clone, PartialEq)]
pub struct LckData<S> {
    handles: Vec<PotentialHandle>,
    factors: ClosedOneForm<S>,
    mode: Mode,
}

impl<S: Scalar> LckData<S> {
    /// `factors` are per chart, aligned with the chart's sorted vertices.
    pub fn new(cover: Cover, handles: Vec<PotentialHandle>, factors: Vec<Vec<S>>, mode: Mode) -> Result<Self, LckError> {
        Self::from_form(ClosedOneForm::new(cover, factors)?, handles, mode)
    }

    pub fn from_form(factors: ClosedOneForm<S>, handles: Vec<PotentialHandle>, mode: Mode) -> Result<Self, LckError> {
        if handles.len() != factors.cover().len() {
            return Err(LckError::HandleCount { expected: factors.cover().len(), got: handles.len() });
        }
        Ok(Self { handles, factors, mode })
    }

    pub fn cover(&self) -> &Cover {
        self.factors.cover()
    }

    pub fn complex(&self) -> &alloc::sync::Arc<SimplicialComplex> {
        self.factors.complex()
    }

    pub fn handles(&self) -> &[PotentialHandle] {
        &self.handles
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn conformal_factors(&self) -> &[Vec<S>] {
        self.factors.potentials()
    }

    /// `f_chart(v)`.
    pub fn factor(&self, chart: usize, v: usize) -> Option<&S> {
        self.factors.potential(chart, v)
    }

    /// The closed 1-form with local primitives `f_α`.
    pub fn lee_form(&self) -> ClosedOneForm<S> {
        self.factors.clone()
    }

    /// `(U_α, φ_α, f + f_α)`.
    pub fn conformal_rescale(&self, f: &GlobalFunction<S>) -> Result<Self, LckError> {
        check_function(self.complex(), f)?;
        Ok(Self { handles: self.handles.clone(), factors: self.factors.add_function(f)?, mode: self.mode })
    }

    /// Primitive of the Lee form when it is exact; otherwise a loop with
    /// nonzero integral.
    pub fn is_gck(&self, basepoint: usize) -> Result<Exactness<S>, LckError> {
        Ok(self.factors.is_exact(basepoint)?)
    }

    /// Charts become the components of chart preimages; handles and
    /// factors are composed with the projection.
    pub fn pullback(&self, map: &CoveringMap) -> Result<PulledBackLck<S>, LckError> {
        let pulled = self.factors.pullback(map)?;
        let handles = pulled.origin.iter().map(|o| self.handles[o.base_chart].clone()).collect();
        let lck = Self::from_form(pulled.form, handles, self.mode)?;
        Ok(PulledBackLck { lck, origin: pulled.origin, incomplete: pulled.incomplete })
    }

    /// The function `h` with `other = conformal_rescale(self, h)`, if any.
    pub fn conformal_difference(&self, other: &Self) -> Result<Option<GlobalFunction<S>>, LckError> {
        if self.cover() != other.cover() {
            return Err(LckError::DifferentCovers);
        }
        if self.handles != other.handles {
            return Ok(None);
        }
        let cover = self.cover();
        let mut h = Vec::with_capacity(self.complex().vertex_count());
        for v in 0..self.complex().vertex_count() {
            let charts = cover.charts_of_vertex(v);
            let diff = |a: usize| other.factor(a, v).cloned().expect("in chart") - self.factor(a, v).cloned().expect("in chart");
            let d = diff(charts[0]);
            if charts[1..].iter().any(|&a| !diff(a).near(&d)) {
                return Ok(None);
            }
            h.push(d);
        }
        Ok(Some(GlobalFunction::new(h)))
    }
}

fn check_function<S: Scalar>(complex: &SimplicialComplex, f: &GlobalFunction<S>) -> Result<(), LckError> {
    if f.len() != complex.vertex_count() {
        return Err(FormError::FunctionLength { expected: complex.vertex_count(), got: f.len() }.into());
    }
    Ok(())
}

pub fn lee_form<S: Scalar>(lck: &LckData<S>) -> ClosedOneForm<S> {
    lck.lee_form()
}

pub fn conformal_rescale<S: Scalar>(lck: &LckData<S>, f: &GlobalFunction<S>) -> Result<LckData<S>, LckError> {
    lck.conformal_rescale(f)
}

pub fn is_gck<S: Scalar>(lck: &LckData<S>, basepoint: usize) -> Result<Exactness<S>, LckError> {
    lck.is_gck(basepoint)
}

pub fn pullback_lck<S: Scalar>(map: &CoveringMap, lck: &LckData<S>) -> Result<PulledBackLck<S>, LckError> {
    lck.pullback(map)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulledBackLck<S> {
    pub lck: LckData<S>,
    pub origin: Vec<ChartOrigin>,
    /// Charts cut by the truncation boundary.
    pub incomplete: Vec<usize>,
}

/// `ψ = e^{log_scale} φ` on one chart of the total space.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPotential<S> {
    pub handle: PotentialHandle,
    pub log_scale: S,
}

/// Kähler potentials on a preimage cover of the universal cover.
///
/// Each chart's potential is a constant multiple of a base potential, so
/// differences on overlaps are pluriharmonic whenever the base data is LCK.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerData<S> {
    cover: Cover,
    potentials: Vec<ScaledPotential<S>>,
    origin: Vec<ChartOrigin>,
    incomplete: Vec<usize>,
    base_cover: Cover,
    mode: Mode,
}

impl<S: Scalar> KahlerData<S> {
    /// Charts are the components of preimages of `base_cover`; `scale`
    /// picks each chart's potential from its origin.
    pub fn over_preimage(
        map: &CoveringMap,
        base_cover: &Cover,
        mode: Mode,
        scale: impl Fn(ChartOrigin) -> ScaledPotential<S>,
    ) -> Result<Self, LckError> {
        let pre = preimage_cover(map, base_cover)?;
        let potentials = pre.origin.iter().map(|&o| scale(o)).collect();
        Ok(Self { cover: pre.cover, potentials, origin: pre.origin, incomplete: pre.incomplete, base_cover: base_cover.clone(), mode })
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn potentials(&self) -> &[ScaledPotential<S>] {
        &self.potentials
    }

    pub fn origin(&self) -> &[ChartOrigin] {
        &self.origin
    }

    pub fn incomplete(&self) -> &[usize] {
        &self.incomplete
    }

    pub fn base_cover(&self) -> &Cover {
        &self.base_cover
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn chart_lookup(&self) -> BTreeMap<(usize, usize), usize> {
        let mut index = BTreeMap::new();
        for (c, chart) in self.cover.charts().iter().enumerate() {
            for &x in chart.vertices() {
                index.insert((self.origin[c].base_chart, x), c);
            }
        }
        index
    }

    /// Checks `log_scale(η·U) − log_scale(U) = −χ(η)` for the deck element
    /// `word` on every complete chart whose image is materialised.
    /// `deck_character` lives on the deck group's generators.
    pub fn check_homothety(&self, map: &CoveringMap, deck_character: &Character<S>, word: &Word) -> Result<usize, LckError> {
        let eta = map.deck().element(word).ok_or_else(|| CoverError::WordOutsideRegion(word.clone()))?;
        let expected = -deck_character.evaluate(word);
        let index = self.chart_lookup();
        let mut checked = 0;
        for (c, o) in self.origin.iter().enumerate() {
            let Some(m) = o.sheet else { continue };
            if self.incomplete.contains(&c) {
                continue;
            }
            let anchor = self.base_cover.chart(o.base_chart).vertices()[0];
            let x = map.lift(anchor, m).ok_or(CoverError::MissingLift(anchor))?;
            let Some(y) = map.deck_mul(eta, m).and_then(|h| map.lift(anchor, h)) else { continue };
            let Some(&d) = index.get(&(o.base_chart, y)) else { continue };
            if self.incomplete.contains(&d) {
                continue;
            }
            if self.potentials[d].handle != self.potentials[c].handle {
                return Err(LckError::HandleMismatch { word: word.clone(), chart: c });
            }
            let found = self.potentials[d].log_scale.clone() - self.potentials[c].log_scale.clone();
            if !found.near(&expected) {
                return Err(LckError::NotHomothetic {
                    word: word.clone(),
                    chart: c,
                    vertex: x,
                    expected: format!("{expected}"),
                    found: format!("{found}"),
                });
            }
            checked += 1;
        }
        Ok(checked)
    }
}

/// Result of lifting LCK data to the universal cover.
#[derive(Debug, Clone, PartialEq)]
pub struct KahlerLift<S> {
    pub kahler: KahlerData<S>,
    /// Homothety character on the edge-path generators of the base.
    pub character: Character<S>,
    /// The same character on the deck group's generators.
    pub deck_character: Character<S>,
    /// Primitive of the pulled-back Lee form, zero at the base lift.
    pub primitive: GlobalFunction<S>,
    pub complete: bool,
}

/// Pulls back, integrates the Lee form to `f` and rescales by `e^{−f}`.
/// The character sends `η` to `f(η·x̃₀) − f(x̃₀)`.
pub fn lift_to_kahler<S: Scalar>(lck: &LckData<S>, map: &CoveringMap) -> Result<KahlerLift<S>, LckError> {
    let pulled = lck.pullback(map)?;
    let total_lee = pulled.lck.lee_form();
    let x0 = map.base_lift();
    let f = total_lee.primitive_on_simply_connected(x0)?;
    let group = map.edge_path_group();
    let bp = map.basepoint();
    let values = (0..map.deck_generator_count())
        .map(|g| {
            let w = Word::generator(g);
            let eta = map.deck().element(&w).ok_or(CoverError::WordOutsideRegion(w))?;
            let x = map.lift(bp, eta).ok_or(CoverError::MissingLift(bp))?;
            Ok(f.get(x).clone() - f.get(x0).clone())
        })
        .collect::<Result<Vec<S>, LckError>>()?;
    let deck_character = Character::new(group.simplification.group.clone(), values)?;
    let character = Character::extend(&deck_character, &group.group, &group.simplification);
    let potentials = pulled
        .lck
        .cover()
        .charts()
        .iter()
        .enumerate()
        .map(|(c, chart)| {
            let v = chart.vertices()[0];
            let log_scale = pulled.lck.factor(c, v).cloned().expect("in chart") - f.get(v).clone();
            ScaledPotential { handle: pulled.lck.handles[c].clone(), log_scale }
        })
        .collect();
    let complete = map.is_complete() && pulled.incomplete.is_empty();
    let kahler = KahlerData {
        cover: pulled.lck.cover().clone(),
        potentials,
        origin: pulled.origin,
        incomplete: pulled.incomplete,
        base_cover: lck.cover().clone(),
        mode: lck.mode,
    };
    Ok(KahlerLift { kahler, character, deck_character, primitive: f, complete })
}

/// `log t_{αβ}` on one overlap component, `α < β`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition<S> {
    pub alpha: usize,
    pub beta: usize,
    pub component: Subcomplex,
    pub log_value: S,
}

/// Flat real line bundle with positive transitions, stored as logs, with
/// the convention `s_α = t_{αβ} s_β`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineBundle<S> {
    cover: Cover,
    transitions: Vec<Transition<S>>,
    index: BTreeMap<(usize, usize, usize), usize>,
}

impl<S: Scalar> LineBundle<S> {
    /// Needs exactly one transition per overlap component and the cocycle
    /// identity on triple overlaps.
    pub fn new(cover: Cover, transitions: Vec<Transition<S>>) -> Result<Self, LckError> {
        let mut index = BTreeMap::new();
        for (i, t) in transitions.iter().enumerate() {
            let known = t.alpha < t.beta
                && t.beta < cover.len()
                && cover.overlap_components(t.alpha, t.beta).contains(&t.component);
            if !known {
                return Err(LckError::StrayTransition { alpha: t.alpha, beta: t.beta });
            }
            for &v in t.component.vertices() {
                if index.insert((t.alpha, t.beta, v), i).is_some() {
                    return Err(LckError::StrayTransition { alpha: t.alpha, beta: t.beta });
                }
            }
        }
        for (a, b) in cover.overlapping_pairs() {
            for comp in cover.overlap_components(a, b) {
                if !index.contains_key(&(a, b, comp.vertices()[0])) {
                    return Err(LckError::MissingTransition { alpha: a, beta: b });
                }
            }
        }
        let this = Self { cover, transitions, index };
        this.check_cocycle()?;
        Ok(this)
    }

    /// All transitions 1.
    pub fn trivial(cover: Cover) -> Self {
        let transitions = transitions_from(&cover, |_, _, _| S::zero());
        Self::new(cover, transitions).expect("zero logs form a cocycle")
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn transitions(&self) -> &[Transition<S>] {
        &self.transitions
    }

    /// `log t_{ab}` at vertex `v`, for any order of `a` and `b`.
    pub fn log_transition(&self, a: usize, b: usize, v: usize) -> Option<S> {
        if a == b {
            return self.cover.chart(a).contains_vertex(v).then(S::zero);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let t = self.transitions[*self.index.get(&(lo, hi, v))?].log_value.clone();
        Some(if a < b { t } else { -t })
    }

    pub fn check_cocycle(&self) -> Result<(), LckError> {
        for v in 0..self.cover.complex().vertex_count() {
            let charts = self.cover.charts_of_vertex(v);
            for (i, &a) in charts.iter().enumerate() {
                for (j, &b) in charts.iter().enumerate().skip(i + 1) {
                    for &c in &charts[j + 1..] {
                        let t = |x, y| self.log_transition(x, y, v).expect("charts share v");
                        let sum = t(a, b) + t(b, c) + t(c, a);
                        if !sum.is_zero() {
                            return Err(LckError::Cocycle { vertex: v, charts: [a, b, c], sum: format!("{sum}") });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Transitions composed with the projection on the preimage cover.
    pub fn pullback(&self, map: &CoveringMap) -> Result<PulledBackBundle<S>, LckError> {
        let pre = preimage_cover(map, &self.cover)?;
        let transitions = transitions_from(&pre.cover, |a, b, v| {
            self.log_transition(pre.origin[a].base_chart, pre.origin[b].base_chart, map.project(v)).expect("projects to an overlap")
        });
        let bundle = Self::new(pre.cover, transitions)?;
        Ok(PulledBackBundle { bundle, origin: pre.origin, incomplete: pre.incomplete })
    }
}

fn transitions_from<S: Scalar>(cover: &Cover, log_value: impl Fn(usize, usize, usize) -> S) -> Vec<Transition<S>> {
    let mut out = Vec::new();
    for (a, b) in cover.overlapping_pairs() {
        for component in cover.overlap_components(a, b) {
            let log_value = log_value(a, b, component.vertices()[0]);
            out.push(Transition { alpha: a, beta: b, component, log_value });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulledBackBundle<S> {
    pub bundle: LineBundle<S>,
    pub origin: Vec<ChartOrigin>,
    pub incomplete: Vec<usize>,
}

/// The bundle `X̃ ×_χ ℝ` on the star cover of `complex` (chart `a` is the
/// star of vertex `a`). On the component of `St(a) ∩ St(b)` through `x`,
/// `log t_{ab} = χ(w(b→x)) − χ(w(a→x))`, with `w` the word of a single step.
pub fn weight_bundle<S: Scalar>(
    character: &Character<S>,
    complex: alloc::sync::Arc<SimplicialComplex>,
    basepoint: usize,
) -> Result<LineBundle<S>, LckError> {
    let group = EdgePathGroup::new(&complex, basepoint)?;
    if *character.group() != group.group {
        return Err(LckError::CharacterGroupMismatch);
    }
    let reach = |a: usize, x: usize| -> S {
        if a == x {
            S::zero()
        } else {
            character.evaluate(&group.step_word(&complex, a, x))
        }
    };
    let cover = Cover::star(complex.clone());
    let transitions = transitions_from(&cover, |a, b, x| reach(b, x) - reach(a, x));
    LineBundle::new(cover, transitions)
}

/// Positive section, stored as `log s_α` per chart vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Section<S> {
    cover: Cover,
    log_values: Vec<Vec<S>>,
}

impl<S: Scalar> Section<S> {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn log_values(&self) -> &[Vec<S>] {
        &self.log_values
    }

    pub fn log_value(&self, chart: usize, v: usize) -> Option<&S> {
        self.cover.chart(chart).position(v).map(|p| &self.log_values[chart][p])
    }

    /// `s_α(v)` as a float; always positive.
    pub fn value(&self, chart: usize, v: usize) -> Option<f64> {
        self.log_value(chart, v).map(|s| libm::exp(s.to_f64()))
    }

    /// Checks `s_α = t_{αβ} s_β` on every overlap.
    pub fn check(&self, bundle: &LineBundle<S>) -> Result<(), LckError> {
        if self.cover != bundle.cover {
            return Err(LckError::DifferentCovers);
        }
        for t in &bundle.transitions {
            for &v in t.component.vertices() {
                let lhs = self.log_value(t.alpha, v).cloned().expect("in chart");
                let rhs = t.log_value.clone() + self.log_value(t.beta, v).cloned().expect("in chart");
                if !lhs.near(&rhs) {
                    return Err(LckError::SectionMismatch { alpha: t.alpha, beta: t.beta, vertex: v });
                }
            }
        }
        Ok(())
    }
}

/// Flat section by propagation along a spanning forest of the chart graph,
/// each chart rooted at log-value 0 when first reached. Fails with a chart
/// cycle of nonzero log-holonomy when the bundle has no flat trivialisation.
pub fn trivializing_section<S: Scalar>(bundle: &LineBundle<S>) -> Result<Section<S>, LckError> {
    let cover = &bundle.cover;
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); cover.len()];
    for (i, t) in bundle.transitions.iter().enumerate() {
        adjacent[t.alpha].push(i);
        adjacent[t.beta].push(i);
    }
    let mut sigma: Vec<Option<S>> = vec![None; cover.len()];
    let mut parent: Vec<Option<usize>> = vec![None; cover.len()];
    let mut via: Vec<Option<usize>> = vec![None; cover.len()];
    for root in 0..cover.len() {
        if sigma[root].is_some() {
            continue;
        }
        sigma[root] = Some(S::zero());
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &i in &adjacent[a] {
                let t = &bundle.transitions[i];
                let (b, next) = if t.alpha == a {
                    (t.beta, sigma[a].clone().expect("visited") - t.log_value.clone())
                } else {
                    (t.alpha, sigma[a].clone().expect("visited") + t.log_value.clone())
                };
                if sigma[b].is_none() {
                    sigma[b] = Some(next);
                    parent[b] = Some(a);
                    via[b] = Some(i);
                    queue.push_back(b);
                }
            }
        }
    }
    let sigma: Vec<S> = sigma.into_iter().map(|s| s.expect("every chart reached")).collect();
    for (i, t) in bundle.transitions.iter().enumerate() {
        if via[t.beta] == Some(i) || via[t.alpha] == Some(i) {
            continue;
        }
        let holonomy = t.log_value.clone() - (sigma[t.alpha].clone() - sigma[t.beta].clone());
        if !holonomy.is_zero() {
            let up = |mut c: usize| {
                let mut path = vec![c];
                while let Some(p) = parent[c] {
                    path.push(p);
                    c = p;
                }
                path.reverse();
                path
            };
            let (pa, pb) = (up(t.alpha), up(t.beta));
            let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
            let mut cycle: Vec<usize> = pa[common - 1..].to_vec();
            cycle.extend(pb[common - 1..].iter().rev());
            return Err(LckError::Holonomy { cycle, holonomy: format!("{holonomy}") });
        }
    }
    let log_values = cover.charts().iter().zip(&sigma).map(|(c, s)| vec![s.clone(); c.vertices().len()]).collect();
    Ok(Section { cover: cover.clone(), log_values })
}

/// Section from uniform averaging: `log s_α(x)` is the mean of
/// `log t_{αβ}(x)` over the charts `β` containing `x`. Exists for every
/// bundle; flat only when the transitions are coboundaries.
pub fn positive_section<S: Scalar>(bundle: &LineBundle<S>) -> Section<S> {
    let cover = &bundle.cover;
    let log_values = cover
        .charts()
        .iter()
        .enumerate()
        .map(|(a, chart)| {
            chart
                .vertices()
                .iter()
                .map(|&x| {
                    let charts = cover.charts_of_vertex(x);
                    let sum = charts
                        .iter()
                        .fold(S::zero(), |acc, &b| acc + bundle.log_transition(a, b, x).expect("charts share x"));
                    sum.scale(1, charts.len() as u64)
                })
                .collect()
        })
        .collect();
    Section { cover: cover.clone(), log_values }
}

/// Result of descending Kähler data along a covering.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent<S> {
    pub lck: LckData<S>,
    /// `f̃ = −log ṽ` on the total space; `f̃(η·x) = f̃(x) + χ(η)`.
    pub f_tilde: GlobalFunction<S>,
    /// Deck generator checks that found a materialised image.
    pub homothety_checks: usize,
    pub partial: bool,
}

/// Descends Kähler data on which deck transformations act by the
/// homotheties of `character` (given on the base's edge-path generators).
pub fn descend_to_lck<S: Scalar>(kahler: &KahlerData<S>, character: &Character<S>, map: &CoveringMap) -> Result<Descent<S>, LckError> {
    let group = map.edge_path_group();
    if *character.group() != group.group {
        return Err(LckError::CharacterGroupMismatch);
    }
    let deck_character = character.restrict(&group.simplification);
    let mut homothety_checks = 0;
    for g in 0..map.deck_generator_count() {
        for w in [Word::generator(g), Word::generator(g).inverse()] {
            homothety_checks += kahler.check_homothety(map, &deck_character, &w)?;
        }
    }
    let base = map.base().clone();
    let bundle = weight_bundle(character, base.clone(), map.basepoint())?;
    let section = positive_section(&bundle);
    let total = map.total();
    let f_tilde = GlobalFunction::from_fn(total.vertex_count(), |x| {
        let v = map.project(x);
        let sheet_value = deck_character.evaluate(map.deck().word(map.sheet(x)));
        sheet_value - section.log_value(v, v).cloned().expect("a vertex lies in its star")
    });
    let base_cover = kahler.base_cover();
    let mut handles = Vec::with_capacity(base_cover.len());
    let mut factors = Vec::with_capacity(base_cover.len());
    for (a, chart) in base_cover.charts().iter().enumerate() {
        let candidates = || (0..kahler.origin.len()).filter(move |&c| kahler.origin[c].base_chart == a && !kahler.incomplete.contains(&c));
        let lift = candidates()
            .find(|&c| kahler.origin[c].sheet == Some(0))
            .or_else(|| candidates().next())
            .ok_or(LckError::MissingLift(a))?;
        let upstairs = kahler.cover.chart(lift);
        let scaled = &kahler.potentials[lift];
        let values = chart
            .vertices()
            .iter()
            .map(|&x| {
                let lifted = upstairs.vertices().iter().copied().find(|&y| map.project(y) == x).ok_or(LckError::MissingLift(a))?;
                Ok(f_tilde.get(lifted).clone() + scaled.log_scale.clone())
            })
            .collect::<Result<Vec<S>, LckError>>()?;
        handles.push(scaled.handle.clone());
        factors.push(values);
    }
    let lck = LckData::new(base_cover.clone(), handles, factors, kahler.mode)?;
    let partial = !map.is_complete() || !kahler.incomplete.is_empty();
    Ok(Descent { lck, f_tilde, homothety_checks, partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::tests::{c3, q};
    use crate::group::tests::rp2;
    use crate::group::PresentedGroup;
    use crate::scalar::{LogSum, Rational};
    use alloc::sync::Arc;

    /// C3 star cover with `f` equal to `0, t/3, 2t/3` at `a − 1, a, a + 1`
    /// on the star of `a`: the Lee form integrates to `t` around the loop.
    fn hopf<S: Scalar>(t: S) -> LckData<S> {
        let cover = Cover::star(c3());
        let third = t.scale(1, 3);
        let factors = (0..3)
            .map(|a| {
                let mut row = vec![S::zero(); 3];
                row[(a + 2) % 3] = S::zero();
                row[a] = third.clone();
                row[(a + 1) % 3] = third.clone() + third.clone();
                row
            })
            .collect();
        LckData::new(cover, PotentialHandle::numbered(3), factors, Mode::Lck).unwrap()
    }

    fn loop_integral<S: Scalar>(lck: &LckData<S>) -> S {
        let path = crate::complex::EdgePath::new(lck.complex(), vec![0, 1, 2, 0]).unwrap();
        lck.lee_form().integrate(&path).unwrap()
    }

    fn rp2_lck() -> LckData<Rational> {
        let complex = Arc::new(rp2());
        let f = GlobalFunction::from_fn(6, |v| q((v * v) as i64, 7));
        let cochain: Vec<Rational> = complex.edges().iter().map(|&[u, v]| f.get(v).clone() - f.get(u).clone()).collect();
        let form = ClosedOneForm::from_cochain(Cover::star(complex), &cochain).unwrap();
        LckData::from_form(form, PotentialHandle::numbered(6), Mode::Lck).unwrap()
    }

    #[test]
    fn zero_factors_give_zero_lee_form() {
        let cover = Cover::star(c3());
        let lck = LckData::<Rational>::from_form(ClosedOneForm::zero(cover.clone()), PotentialHandle::numbered(3), Mode::Lck).unwrap();
        assert!(lck.lee_form().equivalent(&ClosedOneForm::zero(cover)).unwrap());
        assert_eq!(lck.is_gck(0).unwrap().primitive().unwrap().values(), &[q(0, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn handle_count_is_checked() {
        let cover = Cover::star(c3());
        let err = LckData::<Rational>::from_form(ClosedOneForm::zero(cover), PotentialHandle::numbered(2), Mode::Lck).unwrap_err();
        assert_eq!(err, LckError::HandleCount { expected: 3, got: 2 });
    }

    #[test]
    fn hopf_lee_form_integrates_to_one() {
        let lck = hopf(q(1, 1));
        assert_eq!(loop_integral(&lck), q(1, 1));
        match lck.is_gck(0).unwrap() {
            Exactness::NotExact(w) => assert_eq!(w.integral, q(1, 1)),
            Exactness::Exact(_) => panic!("the Hopf model is not GCK"),
        }
    }

    #[test]
    fn rescale_adds_a_differential() {
        let lck = hopf(q(1, 1));
        let f = GlobalFunction::new(vec![q(3, 2), q(-1, 5), q(7, 1)]);
        let rescaled = lck.conformal_rescale(&f).unwrap();
        let expected = lck.lee_form().add_function(&f).unwrap();
        assert!(rescaled.lee_form().equivalent(&expected).unwrap());
        assert_eq!(loop_integral(&rescaled), q(1, 1));
        let back = rescaled.conformal_rescale(&f.neg()).unwrap();
        assert_eq!(back, lck);
        assert_eq!(lck.conformal_difference(&rescaled).unwrap(), Some(f));
    }

    #[test]
    fn rp2_is_always_gck() {
        let lck = rp2_lck();
        let f = lck.is_gck(0).unwrap();
        let f = f.primitive().expect("torsion character");
        let rescaled = lck.conformal_rescale(&f.neg()).unwrap();
        let zero = ClosedOneForm::zero(lck.cover().clone());
        assert!(rescaled.lee_form().equivalent(&zero).unwrap());
    }

    #[test]
    fn hopf_pullback_is_exact_upstairs() {
        let lck = hopf(q(1, 1));
        let map = CoveringMap::universal(c3(), 3).unwrap();
        let pulled = lck.pullback(&map).unwrap();
        let f = pulled.lck.lee_form().primitive_on_simply_connected(map.base_lift()).unwrap();
        for k in -3i64..=3 {
            let eta = map.deck().element(&Word::from_powers(&[(0, k)])).unwrap();
            let x = map.lift(0, eta).unwrap();
            assert_eq!(*f.get(x), q(k, 1), "sheet g^{k}");
        }
        assert!(!pulled.incomplete.is_empty());
    }

    #[test]
    fn lift_returns_the_monodromy_character() {
        for t in [LogSum::ln_int(2).unwrap(), LogSum::ln_e(), LogSum::ln_int(10).unwrap()] {
            let lck = hopf(t.clone());
            let map = CoveringMap::universal(c3(), 4).unwrap();
            let lift = lift_to_kahler(&lck, &map).unwrap();
            assert_eq!(lift.character.values(), core::slice::from_ref(&t));
            let monodromy = lck.lee_form().monodromy_character(0).unwrap();
            assert_eq!(lift.character, monodromy);
            assert!(!lift.complete);
            for (c, o) in lift.kahler.origin().iter().enumerate() {
                let Some(m) = o.sheet else { continue };
                let k = map.deck().word(m).exponent_sums(1)[0];
                let base = lift.kahler.potentials()[c].log_scale.clone() + t.scale(k, 1);
                let at_identity = lift
                    .kahler
                    .origin()
                    .iter()
                    .position(|p| p.base_chart == o.base_chart && p.sheet == Some(0))
                    .map(|d| lift.kahler.potentials()[d].log_scale.clone())
                    .unwrap();
                assert_eq!(base, at_identity, "potential at g^{k} scaled by lambda^-k");
            }
        }
    }

    #[test]
    fn rp2_lift_has_trivial_character_and_round_trips() {
        let lck = rp2_lck();
        let map = CoveringMap::universal(Arc::new(rp2()), 2).unwrap();
        let lift = lift_to_kahler(&lck, &map).unwrap();
        assert!(lift.complete);
        assert!(lift.character.is_trivial());
        assert_eq!(lift.deck_character.values().len(), 1);
        let down = descend_to_lck(&lift.kahler, &lift.character, &map).unwrap();
        assert!(!down.partial);
        let h = lck.conformal_difference(&down.lck).unwrap().expect("differs by a rescale");
        assert!(down.lck.lee_form().equivalent(&lck.lee_form().add_function(&h).unwrap()).unwrap());
    }

    #[test]
    fn hopf_round_trip_is_a_rescale() {
        let t = LogSum::ln_int(3).unwrap();
        let lck = hopf(t.clone());
        let map = CoveringMap::universal(c3(), 4).unwrap();
        let lift = lift_to_kahler(&lck, &map).unwrap();
        let down = descend_to_lck(&lift.kahler, &lift.character, &map).unwrap();
        assert!(down.partial);
        assert!(down.homothety_checks > 0);
        assert!(lck.conformal_difference(&down.lck).unwrap().is_some());
        assert_eq!(down.lck.lee_form().monodromy_character(0).unwrap(), lck.lee_form().monodromy_character(0).unwrap());
        assert_eq!(loop_integral(&down.lck), t);
    }

    #[test]
    fn descend_from_scaled_line_cover() {
        let log2 = LogSum::ln_int(2).unwrap();
        let map = CoveringMap::universal(c3(), 5).unwrap();
        let base_cover = Cover::star(c3());
        let handles = PotentialHandle::numbered(3);
        let kahler = KahlerData::over_preimage(&map, &base_cover, Mode::Lck, |o| {
            let k = o.sheet.map(|m| map.deck().word(m).exponent_sums(1)[0]).unwrap_or(0);
            ScaledPotential { handle: handles[o.base_chart].clone(), log_scale: log2.scale(-k, 1) }
        })
        .unwrap();
        let group = map.edge_path_group().group.clone();
        let chi = Character::new(group, vec![log2.clone()]).unwrap();
        let down = descend_to_lck(&kahler, &chi, &map).unwrap();
        assert_eq!(loop_integral(&down.lck), log2);
        for k in -4i64..=4 {
            let w = Word::from_powers(&[(0, k)]);
            assert!(kahler.check_homothety(&map, &chi.restrict(&map.edge_path_group().simplification), &w).is_ok());
        }
        let x0 = map.base_lift();
        let eta = map.deck().element(&Word::generator(0)).unwrap();
        let x1 = map.lift(0, eta).unwrap();
        assert_eq!(down.f_tilde.get(x1).clone() - down.f_tilde.get(x0).clone(), log2);
    }

    #[test]
    fn wrong_scaling_is_rejected_with_a_witness() {
        let log2 = LogSum::ln_int(2).unwrap();
        let map = CoveringMap::universal(c3(), 3).unwrap();
        let kahler = KahlerData::over_preimage(&map, &Cover::star(c3()), Mode::Lck, |o| {
            let k = o.sheet.map(|m| map.deck().word(m).exponent_sums(1)[0]).unwrap_or(0);
            ScaledPotential { handle: PotentialHandle::tag("phi"), log_scale: log2.scale(k, 1) }
        })
        .unwrap();
        let chi = Character::new(map.edge_path_group().group.clone(), vec![log2]).unwrap();
        let err = descend_to_lck(&kahler, &chi, &map).unwrap_err();
        assert!(matches!(err, LckError::NotHomothetic { .. }), "{err}");
    }

    #[test]
    fn trivial_character_gives_trivial_bundle() {
        let complex = Arc::new(rp2());
        let group = EdgePathGroup::new(&complex, 0).unwrap();
        let chi = Character::<Rational>::trivial(group.group.clone());
        let bundle = weight_bundle(&chi, complex, 0).unwrap();
        assert!(bundle.transitions().iter().all(|t| t.log_value == q(0, 1)));
        let s = trivializing_section(&bundle).unwrap();
        assert!(s.log_values().iter().flatten().all(|v| *v == q(0, 1)));
        s.check(&bundle).unwrap();
    }

    #[test]
    fn c3_bundle_has_holonomy_log_two() {
        let log2 = LogSum::ln_int(2).unwrap();
        let complex = c3();
        let group = EdgePathGroup::new(&complex, 0).unwrap();
        let chi = Character::new(group.group.clone(), vec![log2.clone()]).unwrap();
        let bundle = weight_bundle(&chi, complex.clone(), 0).unwrap();
        let edge_sum = bundle
            .transitions()
            .iter()
            .filter(|t| !t.component.edge_ids().is_empty())
            .fold(LogSum::zero(), |acc, t| acc + t.log_value.clone());
        assert!(edge_sum == log2 || edge_sum == -log2.clone(), "{edge_sum}");
        match trivializing_section(&bundle).unwrap_err() {
            LckError::Holonomy { cycle, holonomy } => {
                assert_eq!(cycle.first(), cycle.last());
                assert!(holonomy == "log(2)" || holonomy == "-log(2)", "{holonomy}");
            }
            e => panic!("{e}"),
        }
        let positive = positive_section(&bundle);
        positive.check(&bundle).unwrap();

        let map = CoveringMap::universal(complex, 4).unwrap();
        let pulled = bundle.pullback(&map).unwrap();
        let s = trivializing_section(&pulled.bundle).unwrap();
        s.check(&pulled.bundle).unwrap();
        let chart_at = |k: i64| {
            let m = map.deck().element(&Word::from_powers(&[(0, k)])).unwrap();
            pulled.origin.iter().position(|o| o.base_chart == 0 && o.sheet == Some(m)).unwrap()
        };
        let root = s.log_values()[chart_at(0)][0].clone();
        for k in -3i64..=3 {
            let c = chart_at(k);
            assert_eq!(s.log_values()[c][0].clone() - root.clone(), log2.scale(k, 1), "s at g^{k} ~ 2^k");
        }
    }

    #[test]
    fn two_chart_transition_propagates() {
        let complex = Arc::new(SimplicialComplex::build(3, &[[0, 1], [1, 2]], &[]).unwrap());
        let a = Subcomplex::induced(&complex, &[0, 1]).unwrap();
        let b = Subcomplex::induced(&complex, &[1, 2]).unwrap();
        let cover = Cover::new(complex, vec![a, b]).unwrap();
        let component = cover.overlap_components(0, 1).remove(0);
        let t = Transition { alpha: 0, beta: 1, component, log_value: -q(5, 2) };
        let bundle = LineBundle::new(cover, vec![t]).unwrap();
        let s = trivializing_section(&bundle).unwrap();
        assert_eq!(s.log_value(0, 1), Some(&q(0, 1)));
        assert_eq!(s.log_value(1, 1), Some(&q(5, 2)));
    }

    #[test]
    fn bundle_rejects_missing_transitions_and_bad_cocycles() {
        let cover = Cover::star(c3());
        let err = LineBundle::<Rational>::new(cover.clone(), Vec::new()).unwrap_err();
        assert!(matches!(err, LckError::MissingTransition { .. }));
        let complex = Arc::new(SimplicialComplex::build(3, &[], &[[0, 1, 2]]).unwrap());
        let cover = Cover::star(complex);
        let transitions = transitions_from(&cover, |a, b, _| q((a + b) as i64, 1));
        assert!(matches!(LineBundle::new(cover, transitions).unwrap_err(), LckError::Cocycle { .. }));
    }

    #[test]
    fn character_on_wrong_group_is_rejected() {
        let g = PresentedGroup::new(2, Vec::new()).unwrap();
        let chi = Character::<Rational>::trivial(g);
        assert_eq!(weight_bundle(&chi, c3(), 0).unwrap_err(), LckError::CharacterGroupMismatch);
    }

    #[test]
    fn float_mode_round_trip() {
        let t = core::f64::consts::LN_10;
        let lck = hopf(t);
        let map = CoveringMap::universal(c3(), 3).unwrap();
        let lift = lift_to_kahler(&lck, &map).unwrap();
        assert!((lift.character.values()[0] - t).abs() <= 1e-12);
        let down = descend_to_lck(&lift.kahler, &lift.character, &map).unwrap();
        assert!((loop_integral(&down.lck) - t).abs() <= 1e-12);
    }
}
