//! Closed 1-forms in Čech style: local potentials whose pairwise differences
//! are constant on each component of each chart overlap.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{elementary_homotopy_moves, Cover, EdgePath, SimplicialComplex, Subcomplex, TopologyError};
use crate::covering::{CoverError, CoveringMap};
use crate::group::{Character, CharacterError, EdgePathGroup};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("chart {chart}: expected {expected} potential values, got {got}")]
    PotentialLength { chart: usize, expected: usize, got: usize },
    #[error("chart {chart}: no potential value at vertex {vertex}")]
    MissingValue { chart: usize, vertex: usize },
    #[error("chart {chart}: vertex {vertex} is not in the chart")]
    StrayValue { chart: usize, vertex: usize },
    #[error(
        "f_{alpha} - f_{beta} is not constant on overlap component {component}: \
         {difference_a} at vertex {vertex_a}, {difference_b} at vertex {vertex_b}"
    )]
    NotLocallyConstant {
        alpha: usize,
        beta: usize,
        component: usize,
        vertex_a: usize,
        vertex_b: usize,
        difference_a: String,
        difference_b: String,
    },
    #[error("edge {0:?} lies in no chart of the cover")]
    EdgeNotInCover([usize; 2]),
    #[error("the two objects live on different complexes")]
    DifferentComplexes,
    #[error("paths have different endpoints: {0:?} and {1:?}")]
    EndpointsDiffer((usize, usize), (usize, usize)),
    #[error("complex is not simply connected: generator {generator} on edge {edge:?} survives")]
    NotSimplyConnected { generator: usize, edge: [usize; 2] },
    #[error("elementary move changed the integral: {from:?} -> {to:?}")]
    HomotopyViolation { from: EdgePath, to: EdgePath },
    #[error("primitive minus f_{chart} is not constant on a chart component near vertex {vertex}")]
    PrimitiveMismatch { chart: usize, vertex: usize },
    #[error("function has {got} values for {expected} vertices")]
    FunctionLength { expected: usize, got: usize },
}

/// Scalar function on the vertices of a complex.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalFunction<S> {
    values: Vec<S>,
}

impl<S: Scalar> GlobalFunction<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> S) -> Self {
        Self { values: (0..n).map(f).collect() }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, v: usize) -> &S {
        &self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn neg(&self) -> Self {
        Self { values: self.values.iter().cloned().map(|v| -v).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn near(&self, other: &Self) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a.near(b))
    }
}

/// Constant value of `f_α − f_β` on one component of `U_α ∩ U_β`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapConstant<S> {
    pub alpha: usize,
    pub beta: usize,
    pub component: Subcomplex,
    pub value: S,
}

/// Čech representative of a closed 1-form.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedOneForm<S> {
    cover: Cover,
    potentials: Vec<Vec<S>>,
    overlaps: Vec<OverlapConstant<S>>,
}

impl<S: Scalar> ClosedOneForm<S> {
    /// Validates potentials given per chart, aligned with the chart's sorted
    /// vertex list.
    pub fn new(cover: Cover, potentials: Vec<Vec<S>>) -> Result<Self, FormError> {
        if potentials.len() != cover.len() {
            return Err(FormError::PotentialLength { chart: potentials.len().min(cover.len()), expected: cover.len(), got: potentials.len() });
        }
        for (i, p) in potentials.iter().enumerate() {
            let expected = cover.chart(i).vertices().len();
            if p.len() != expected {
                return Err(FormError::PotentialLength { chart: i, expected, got: p.len() });
            }
        }
        let mut overlaps = Vec::new();
        for (a, b) in cover.overlapping_pairs() {
            for (ci, comp) in cover.overlap_components(a, b).into_iter().enumerate() {
                let diff = |v: usize| value_at(&cover, &potentials, a, v) - value_at(&cover, &potentials, b, v);
                let v0 = comp.vertices()[0];
                let d0 = diff(v0);
                for &v in &comp.vertices()[1..] {
                    let d = diff(v);
                    if !d.near(&d0) {
                        return Err(FormError::NotLocallyConstant {
                            alpha: a,
                            beta: b,
                            component: ci,
                            vertex_a: v0,
                            vertex_b: v,
                            difference_a: format!("{d0}"),
                            difference_b: format!("{d}"),
                        });
                    }
                }
                overlaps.push(OverlapConstant { alpha: a, beta: b, component: comp, value: d0 });
            }
        }
        Ok(Self { cover, potentials, overlaps })
    }

    /// Potentials given as `(vertex, value)` lists per chart.
    pub fn from_maps(cover: Cover, maps: Vec<Vec<(usize, S)>>) -> Result<Self, FormError> {
        let mut potentials = Vec::with_capacity(maps.len());
        for (i, map) in maps.into_iter().enumerate() {
            if i >= cover.len() {
                return Err(FormError::PotentialLength { chart: i, expected: cover.len(), got: i + 1 });
            }
            let chart = cover.chart(i);
            let mut slot: Vec<Option<S>> = vec![None; chart.vertices().len()];
            for (v, x) in map {
                let pos = chart.position(v).ok_or(FormError::StrayValue { chart: i, vertex: v })?;
                slot[pos] = Some(x);
            }
            let values = slot
                .into_iter()
                .enumerate()
                .map(|(k, x)| x.ok_or(FormError::MissingValue { chart: i, vertex: chart.vertices()[k] }))
                .collect::<Result<Vec<_>, _>>()?;
            potentials.push(values);
        }
        Self::new(cover, potentials)
    }

    /// Form whose increment along the edge `u → v` (`u < v`) is
    /// `edge_values[edge id]`. Each chart component is integrated from its
    /// least vertex; fails unless the cochain is closed on every chart.
    pub fn from_cochain(cover: Cover, edge_values: &[S]) -> Result<Self, FormError> {
        let complex = cover.complex().clone();
        let mut potentials = Vec::with_capacity(cover.len());
        for chart in cover.charts() {
            let mut values: Vec<Option<S>> = vec![None; chart.vertices().len()];
            for comp in chart.components(&complex) {
                let root = comp.vertices()[0];
                values[chart.position(root).expect("in chart")] = Some(S::zero());
                let mut queue = VecDeque::from([root]);
                while let Some(x) = queue.pop_front() {
                    let fx = values[chart.position(x).expect("in chart")].clone().expect("visited");
                    for &y in complex.neighbors(x) {
                        let e = complex.edge_index(x, y).expect("edge");
                        if !comp.contains_edge(e) {
                            continue;
                        }
                        let slot = &mut values[chart.position(y).expect("in chart")];
                        if slot.is_none() {
                            let w = edge_values[e].clone();
                            *slot = Some(if x < y { fx.clone() + w } else { fx.clone() - w });
                            queue.push_back(y);
                        }
                    }
                }
            }
            potentials.push(values.into_iter().map(|v| v.expect("every vertex reached")).collect());
        }
        let form = Self::new(cover, potentials)?;
        for (e, &[u, v]) in complex.edges().iter().enumerate() {
            let got = form.edge_increment(u, v)?;
            if !got.near(&edge_values[e]) {
                return Err(FormError::NotLocallyConstant {
                    alpha: form.cover.charts_of_edge(e)[0],
                    beta: form.cover.charts_of_edge(e)[0],
                    component: 0,
                    vertex_a: u,
                    vertex_b: v,
                    difference_a: format!("{got}"),
                    difference_b: format!("{}", edge_values[e]),
                });
            }
        }
        Ok(form)
    }

    /// The zero form on `cover`.
    pub fn zero(cover: Cover) -> Self {
        let potentials = cover.charts().iter().map(|c| vec![S::zero(); c.vertices().len()]).collect();
        Self::new(cover, potentials).expect("zero potentials are locally constant")
    }

    /// `df` as a single-chart form.
    pub fn differential(complex: Arc<SimplicialComplex>, f: &GlobalFunction<S>) -> Result<Self, FormError> {
        if f.len() != complex.vertex_count() {
            return Err(FormError::FunctionLength { expected: complex.vertex_count(), got: f.len() });
        }
        Self::new(Cover::single(complex), vec![f.values.clone()])
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.cover.complex()
    }

    pub fn potentials(&self) -> &[Vec<S>] {
        &self.potentials
    }

    pub fn overlaps(&self) -> &[OverlapConstant<S>] {
        &self.overlaps
    }

    /// `f_chart(v)`; `None` when `v` is not in the chart.
    pub fn potential(&self, chart: usize, v: usize) -> Option<&S> {
        self.cover.chart(chart).position(v).map(|p| &self.potentials[chart][p])
    }

    /// Adds `g|_{U_α}` to every potential.
    pub fn add_function(&self, g: &GlobalFunction<S>) -> Result<Self, FormError> {
        let potentials = self
            .cover
            .charts()
            .iter()
            .zip(&self.potentials)
            .map(|(c, p)| c.vertices().iter().zip(p).map(|(&v, x)| x.clone() + g.get(v).clone()).collect())
            .collect();
        Self::new(self.cover.clone(), potentials)
    }

    pub fn neg(&self) -> Self {
        let potentials = self.potentials.iter().map(|p| p.iter().cloned().map(|x| -x).collect()).collect();
        Self::new(self.cover.clone(), potentials).expect("negation keeps overlaps constant")
    }

    /// Increment along `u → v` in the lowest chart containing the edge.
    pub fn edge_increment(&self, u: usize, v: usize) -> Result<S, FormError> {
        self.edge_increment_with(u, v, |_, charts| charts[0])
    }

    fn edge_increment_with(
        &self,
        u: usize,
        v: usize,
        mut choose: impl FnMut([usize; 2], &[usize]) -> usize,
    ) -> Result<S, FormError> {
        let complex = self.cover.complex();
        let e = complex
            .edge_index(u, v)
            .filter(|_| u != v)
            .ok_or(TopologyError::NotAdjacent { from: u, to: v })?;
        let charts = self.cover.charts_of_edge(e);
        if charts.is_empty() {
            return Err(FormError::EdgeNotInCover([u, v]));
        }
        let a = choose([u, v], charts);
        if !charts.contains(&a) {
            return Err(FormError::EdgeNotInCover([u, v]));
        }
        let fa = |x: usize| self.potential(a, x).cloned().expect("edge endpoints lie in the chart");
        Ok(fa(v) - fa(u))
    }

    /// `Σ f_{α_k}(v_{k+1}) − f_{α_k}(v_k)` with `α_k` the lowest chart
    /// containing the k-th edge.
    pub fn integrate(&self, path: &EdgePath) -> Result<S, FormError> {
        self.integrate_with(path, |_, charts| charts[0])
    }

    /// As [`integrate`](Self::integrate), with the chart for each step picked
    /// by `choose(edge, candidate charts)`.
    pub fn integrate_with(
        &self,
        path: &EdgePath,
        mut choose: impl FnMut([usize; 2], &[usize]) -> usize,
    ) -> Result<S, FormError> {
        let n = self.cover.complex().vertex_count();
        if let Some(&v) = path.vertices().iter().find(|&&v| v >= n) {
            return Err(TopologyError::VertexOutOfRange { vertex: v, count: n }.into());
        }
        path.steps().try_fold(S::zero(), |acc, (u, v)| Ok(acc + self.edge_increment_with(u, v, &mut choose)?))
    }

    /// Compares against another representative: `Ok(None)` when the union
    /// of both chart families is still a closed 1-form, otherwise a witness.
    pub fn compare(&self, other: &Self) -> Result<Option<CrossWitness<S>>, FormError> {
        let (ca, cb) = (self.cover.complex(), other.cover.complex());
        if !Arc::ptr_eq(ca, cb) && **ca != **cb {
            return Err(FormError::DifferentComplexes);
        }
        let mut pairs = BTreeSet::new();
        for v in 0..ca.vertex_count() {
            for &i in self.cover.charts_of_vertex(v) {
                for &j in other.cover.charts_of_vertex(v) {
                    pairs.insert((i, j));
                }
            }
        }
        for (i, j) in pairs {
            let inter = self.cover.chart(i).intersection(other.cover.chart(j));
            for comp in inter.components(ca) {
                let diff = |v: usize| self.potential(i, v).cloned().expect("in chart") - other.potential(j, v).cloned().expect("in chart");
                let v0 = comp.vertices()[0];
                let d0 = diff(v0);
                for &v in &comp.vertices()[1..] {
                    let d = diff(v);
                    if !d.near(&d0) {
                        return Ok(Some(CrossWitness { chart_a: i, chart_b: j, vertex_a: v0, vertex_b: v, difference_a: d0, difference_b: d }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// True iff both representatives define the same form.
    pub fn equivalent(&self, other: &Self) -> Result<bool, FormError> {
        Ok(self.compare(other)?.is_none())
    }

    /// Whether two paths with common endpoints have equal integrals.
    pub fn endpoints_criterion_check(&self, a: &EdgePath, b: &EdgePath) -> Result<bool, FormError> {
        if (a.start(), a.end()) != (b.start(), b.end()) {
            return Err(FormError::EndpointsDiffer((a.start(), a.end()), (b.start(), b.end())));
        }
        Ok(self.integrate(a)?.near(&self.integrate(b)?))
    }

    /// Integral together with a bounded breadth-first search over elementary
    /// moves, every visited path checked to give the same value.
    pub fn homotopy_invariant_integrate(
        &self,
        path: &EdgePath,
        budget: usize,
        seed: u64,
    ) -> Result<(S, HomotopyCertificate), FormError> {
        let value = self.integrate(path)?;
        let complex = self.cover.complex().clone();
        let mut seen = BTreeSet::from([path.clone()]);
        let mut queue = VecDeque::from([path.clone()]);
        let mut explored = Vec::new();
        while let Some(p) = queue.pop_front() {
            if explored.len() >= budget {
                queue.push_front(p);
                break;
            }
            for q in elementary_homotopy_moves(&p, &complex) {
                if seen.insert(q.clone()) {
                    if !self.integrate(&q)?.near(&value) {
                        return Err(FormError::HomotopyViolation { from: p.clone(), to: q });
                    }
                    queue.push_back(q);
                }
            }
            explored.push(p);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sample: Vec<EdgePath> = explored.choose_multiple(&mut rng, SAMPLE_SIZE).cloned().collect();
        sample.sort();
        let cert = HomotopyCertificate { explored: explored.len(), reached: seen.len(), partial: !queue.is_empty(), sample };
        Ok((value, cert))
    }

    /// Function `f` with `f(basepoint) = 0` and `df = θ`, or a witness loop.
    pub fn is_exact(&self, basepoint: usize) -> Result<Exactness<S>, FormError> {
        let complex = self.cover.complex().clone();
        let group = EdgePathGroup::new(&complex, basepoint)?;
        let f = self.tree_primitive(&group)?;
        let mut first = None;
        for g in 0..group.generator_edges.len() {
            let value = self.integrate(&group.generator_loop(g))?;
            if !value.is_zero() {
                first = Some((g, value));
                break;
            }
        }
        let Some((generator, integral)) = first else {
            return Ok(Exactness::Exact(f));
        };
        let periods = group
            .simplification
            .kept
            .iter()
            .map(|&g| {
                let loop_path = group.generator_loop(g);
                Ok(Period { generator: g, edge: group.generator_edges[g], integral: self.integrate(&loop_path)?, loop_path })
            })
            .collect::<Result<Vec<_>, FormError>>()?;
        Ok(Exactness::NotExact(NonExactWitness {
            generator,
            edge: group.generator_edges[generator],
            loop_path: group.generator_loop(generator),
            integral,
            periods,
        }))
    }

    fn tree_primitive(&self, group: &EdgePathGroup) -> Result<GlobalFunction<S>, FormError> {
        let complex = self.cover.complex();
        let mut values = vec![S::zero(); complex.vertex_count()];
        for &v in &group.tree.order {
            if let Some(p) = group.tree.parent[v] {
                values[v] = values[p].clone() + self.edge_increment(p, v)?;
            }
        }
        Ok(GlobalFunction::new(values))
    }

    /// Primitive on a simply connected complex, normalised to vanish at the
    /// basepoint, with `f − f_α` checked constant on every chart component.
    pub fn primitive_on_simply_connected(&self, basepoint: usize) -> Result<GlobalFunction<S>, FormError> {
        let complex = self.cover.complex().clone();
        let group = EdgePathGroup::new(&complex, basepoint)?;
        if !group.is_trivial() {
            let g = group.simplification.kept[0];
            return Err(FormError::NotSimplyConnected { generator: g, edge: group.generator_edges[g] });
        }
        let f = self.tree_primitive(&group)?;
        for (a, chart) in self.cover.charts().iter().enumerate() {
            for comp in chart.components(&complex) {
                let d = |v: usize| f.get(v).clone() - self.potential(a, v).cloned().expect("in chart");
                let d0 = d(comp.vertices()[0]);
                if let Some(&v) = comp.vertices().iter().find(|&&v| !d(v).near(&d0)) {
                    return Err(FormError::PrimitiveMismatch { chart: a, vertex: v });
                }
            }
        }
        Ok(f)
    }

    /// Additive character of the edge-path group: each generator goes to
    /// the integral over its loop.
    pub fn monodromy_character(&self, basepoint: usize) -> Result<Character<S>, FormError> {
        let complex = self.cover.complex().clone();
        let group = EdgePathGroup::new(&complex, basepoint)?;
        let values = (0..group.generator_edges.len())
            .map(|g| self.integrate(&group.generator_loop(g)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Character::new(group.group.clone(), values)?)
    }

    /// Pullback along a covering: charts are the components of chart
    /// preimages, potentials are composed with the projection.
    pub fn pullback(&self, map: &CoveringMap) -> Result<PulledBackForm<S>, FormError> {
        let base = self.cover.complex();
        if !Arc::ptr_eq(base, map.base()) && **base != **map.base() {
            return Err(FormError::DifferentComplexes);
        }
        let pre = preimage_cover(map, &self.cover)?;
        let potentials = pre
            .cover
            .charts()
            .iter()
            .zip(&pre.origin)
            .map(|(c, o)| {
                c.vertices().iter().map(|&x| self.potential(o.base_chart, map.project(x)).cloned().expect("over the chart")).collect()
            })
            .collect();
        let form = Self::new(pre.cover, potentials)?;
        Ok(PulledBackForm { form, origin: pre.origin, incomplete: pre.incomplete })
    }
}

const SAMPLE_SIZE: usize = 8;

/// Two vertices of one cross overlap with different differences.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossWitness<S> {
    pub chart_a: usize,
    pub chart_b: usize,
    pub vertex_a: usize,
    pub vertex_b: usize,
    pub difference_a: S,
    pub difference_b: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyCertificate {
    /// Paths whose moves were all expanded.
    pub explored: usize,
    /// Distinct paths seen, each with the same integral.
    pub reached: usize,
    /// The search stopped on the budget with paths left unexpanded.
    pub partial: bool,
    /// Seeded sample of explored paths.
    pub sample: Vec<EdgePath>,
}

/// Loop integral of one generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Period<S> {
    pub generator: usize,
    pub edge: [usize; 2],
    pub loop_path: EdgePath,
    pub integral: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonExactWitness<S> {
    /// First generator (in edge order) with a nonzero loop integral.
    pub generator: usize,
    pub edge: [usize; 2],
    pub loop_path: EdgePath,
    pub integral: S,
    /// Periods over the generators kept by Tietze simplification.
    pub periods: Vec<Period<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exactness<S> {
    Exact(GlobalFunction<S>),
    NotExact(NonExactWitness<S>),
}

impl<S> Exactness<S> {
    pub fn primitive(&self) -> Option<&GlobalFunction<S>> {
        match self {
            Exactness::Exact(f) => Some(f),
            Exactness::NotExact(_) => None,
        }
    }
}

/// Where a chart of a preimage cover came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChartOrigin {
    pub base_chart: usize,
    /// Least sheet over the chart's least vertex within this component.
    pub sheet: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulledBackForm<S> {
    pub form: ClosedOneForm<S>,
    pub origin: Vec<ChartOrigin>,
    /// Charts cut by the truncation boundary.
    pub incomplete: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PreimageCover {
    pub cover: Cover,
    pub origin: Vec<ChartOrigin>,
    pub incomplete: Vec<usize>,
}

/// Components of the preimages of every chart of `cover`.
pub(crate) fn preimage_cover(map: &CoveringMap, cover: &Cover) -> Result<PreimageCover, FormError> {
    let base = map.base();
    let total = map.total();
    let mut charts = Vec::new();
    let mut origin = Vec::new();
    let mut incomplete = Vec::new();
    for (a, chart) in cover.charts().iter().enumerate() {
        let vertices: Vec<usize> = (0..total.vertex_count()).filter(|&x| chart.contains_vertex(map.project(x))).collect();
        let edges: Vec<usize> = (0..total.edges().len())
            .filter(|&e| {
                let [x, y] = total.edges()[e];
                chart.contains_edge(base.edge_index(map.project(x), map.project(y)).expect("simplicial"))
            })
            .collect();
        let triangles: Vec<usize> = (0..total.triangles().len())
            .filter(|&t| {
                let [x, y, z] = total.triangles()[t];
                let img = [map.project(x), map.project(y), map.project(z)];
                chart.contains_triangle(base.triangle_index(img).expect("simplicial"))
            })
            .collect();
        let sub = Subcomplex::from_sorted_ids(vertices, edges, triangles);
        let mut chart_degree = vec![0usize; base.vertex_count()];
        for &e in chart.edge_ids() {
            for v in base.edges()[e] {
                chart_degree[v] += 1;
            }
        }
        let anchor = chart.vertices()[0];
        for comp in sub.components(total) {
            let mut degree = alloc::collections::BTreeMap::new();
            for &e in comp.edge_ids() {
                for x in total.edges()[e] {
                    *degree.entry(x).or_insert(0usize) += 1;
                }
            }
            let cut = comp.vertices().iter().any(|&x| degree.get(&x).copied().unwrap_or(0) < chart_degree[map.project(x)]);
            let sheet = comp.vertices().iter().filter(|&&x| map.project(x) == anchor).map(|&x| map.sheet(x)).min();
            if cut {
                incomplete.push(charts.len());
            }
            origin.push(ChartOrigin { base_chart: a, sheet });
            charts.push(comp);
        }
    }
    let cover = Cover::new(total.clone(), charts)?;
    Ok(PreimageCover { cover, origin, incomplete })
}

/// `f ∘ π`.
pub fn pullback_function<S: Scalar>(map: &CoveringMap, f: &GlobalFunction<S>) -> GlobalFunction<S> {
    GlobalFunction::from_fn(map.total().vertex_count(), |x| f.get(map.project(x)).clone())
}

/// Orbit of a path under elementary moves, limited to `max_len` edges and
/// `budget` paths.
pub fn homotopy_orbit(path: &EdgePath, complex: &SimplicialComplex, budget: usize, max_len: usize) -> HomotopyOrbit {
    let mut seen = BTreeSet::from([path.clone()]);
    let mut queue = VecDeque::from([path.clone()]);
    while let Some(p) = queue.pop_front() {
        if seen.len() >= budget {
            return HomotopyOrbit { paths: seen, exhausted: false };
        }
        for q in elementary_homotopy_moves(&p, complex) {
            if q.len() <= max_len && seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    HomotopyOrbit { paths: seen, exhausted: true }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyOrbit {
    pub paths: BTreeSet<EdgePath>,
    /// Every path of length at most the bound was reached.
    pub exhausted: bool,
}

fn value_at<S: Scalar>(cover: &Cover, potentials: &[Vec<S>], chart: usize, v: usize) -> S {
    potentials[chart][cover.chart(chart).position(v).expect("vertex in chart")].clone()
}
