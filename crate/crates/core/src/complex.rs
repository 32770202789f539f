//! Finite simplicial 2-complexes, subcomplexes, covers and edge paths.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("vertex {vertex} out of range (complex has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge([usize; 2]),
    #[error("duplicate triangle {0:?}")]
    DuplicateTriangle([usize; 3]),
    #[error("degenerate edge {0:?}")]
    DegenerateEdge([usize; 2]),
    #[error("degenerate triangle {0:?}")]
    DegenerateTriangle([usize; 3]),
    #[error("vertices {from} and {to} are not joined by an edge")]
    NotAdjacent { from: usize, to: usize },
    #[error("a path needs at least one vertex")]
    EmptyPath,
    #[error("cannot concatenate a path ending at {end} with one starting at {start}")]
    NotComposable { end: usize, start: usize },
    #[error("chart {0} is empty")]
    EmptyChart(usize),
    #[error("vertex {0} lies in no chart")]
    UncoveredVertex(usize),
    #[error("edge {0:?} lies in no chart")]
    UncoveredEdge([usize; 2]),
    #[error("triangle {0:?} lies in no chart")]
    UncoveredTriangle([usize; 3]),
    #[error("subcomplex is not closed under faces: {0}")]
    NotClosed(&'static str),
    #[error("complex is disconnected: no path from {a} to {b}")]
    Disconnected { a: usize, b: usize },
    #[error("cover and subcomplex refer to different complexes")]
    ForeignComplex,
}

/// Finite abstract simplicial complex of dimension at most two.
///
/// Edges are stored as sorted pairs and triangles as sorted triples, both in
/// lexicographic order, so simplex indices are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    neighbors: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds a complex. Triangle edges missing from `edges` are inserted.
    pub fn build(
        vertex_count: usize,
        edges: &[[usize; 2]],
        triangles: &[[usize; 3]],
    ) -> Result<Self, TopologyError> {
        let check = |v: usize| {
            if v >= vertex_count {
                Err(TopologyError::VertexOutOfRange { vertex: v, count: vertex_count })
            } else {
                Ok(())
            }
        };
        let mut edge_set = BTreeSet::new();
        for &[a, b] in edges {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(TopologyError::DegenerateEdge([a, b]));
            }
            if !edge_set.insert(sorted2(a, b)) {
                return Err(TopologyError::DuplicateEdge([a, b]));
            }
        }
        let mut tri_set = BTreeSet::new();
        for &t in triangles {
            for v in t {
                check(v)?;
            }
            let s = sorted3(t);
            if s[0] == s[1] || s[1] == s[2] {
                return Err(TopologyError::DegenerateTriangle(t));
            }
            if !tri_set.insert(s) {
                return Err(TopologyError::DuplicateTriangle(t));
            }
            edge_set.insert([s[0], s[1]]);
            edge_set.insert([s[1], s[2]]);
            edge_set.insert([s[0], s[2]]);
        }
        let edges: Vec<_> = edge_set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); vertex_count];
        for &[a, b] in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        Ok(Self { vertex_count, edges, triangles: tri_set.into_iter().collect(), neighbors })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Index of the edge joining `a` and `b`, in either orientation.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&sorted2(a, b)).ok()
    }

    pub fn triangle_index(&self, t: [usize; 3]) -> Option<usize> {
        self.triangles.binary_search(&sorted3(t)).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edge_index(a, b).is_some()
    }

    /// Vertices `w` with `{a, b, w}` a triangle.
    pub fn triangle_apexes(&self, a: usize, b: usize) -> Vec<usize> {
        self.neighbors(a)
            .iter()
            .copied()
            .filter(|&w| w != b && self.triangle_index([a, b, w]).is_some())
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Breadth-first spanning tree rooted at `root`, visiting neighbours in
    /// ascending index order.
    pub fn bfs_tree(&self, root: usize) -> Result<BfsTree, TopologyError> {
        if root >= self.vertex_count {
            return Err(TopologyError::VertexOutOfRange { vertex: root, count: self.vertex_count });
        }
        let mut parent = vec![None; self.vertex_count];
        let mut depth = vec![usize::MAX; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.neighbors[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        if let Some(b) = (0..self.vertex_count).find(|&v| depth[v] == usize::MAX) {
            return Err(TopologyError::Disconnected { a: root, b });
        }
        let mut tree_edge = vec![false; self.edges.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                tree_edge[self.edge_index(v, p).expect("tree edge")] = true;
            }
        }
        Ok(BfsTree { root, parent, depth, order, tree_edge })
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.bfs_tree(0).is_ok()
    }
}

pub(crate) fn sorted2(a: usize, b: usize) -> [usize; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub(crate) fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    /// Vertices in visiting order.
    pub order: Vec<usize>,
    /// Indexed by edge id.
    pub tree_edge: Vec<bool>,
}

impl BfsTree {
    /// Vertex sequence of the tree path from the root to `v`.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }
}

/// A subcomplex given by sorted vertex, edge and triangle index sets.
///
/// Charts need not be induced: the closed star of a vertex on a triangulated
/// circle omits the opposite edge.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Subcomplex {
    vertices: Vec<usize>,
    edges: Vec<usize>,
    triangles: Vec<usize>,
}

impl Subcomplex {
    /// Full subcomplex spanned by `vertices`.
    pub fn induced(parent: &SimplicialComplex, vertices: &[usize]) -> Result<Self, TopologyError> {
        let set = vertex_set(parent, vertices)?;
        let edges = (0..parent.edges.len())
            .filter(|&e| parent.edges[e].iter().all(|v| set.contains(v)))
            .collect();
        let triangles = (0..parent.triangles.len())
            .filter(|&t| parent.triangles[t].iter().all(|v| set.contains(v)))
            .collect();
        Ok(Self { vertices: set.into_iter().collect(), edges, triangles })
    }

    /// Smallest subcomplex containing the given simplices (faces are added).
    pub fn from_simplices(
        parent: &SimplicialComplex,
        vertices: &[usize],
        edges: &[[usize; 2]],
        triangles: &[[usize; 3]],
    ) -> Result<Self, TopologyError> {
        let mut vset = vertex_set(parent, vertices)?;
        let mut eset = BTreeSet::new();
        let mut tset = BTreeSet::new();
        for &t in triangles {
            let id = parent
                .triangle_index(t)
                .ok_or(TopologyError::NotClosed("triangle not in the parent complex"))?;
            tset.insert(id);
            let [a, b, c] = parent.triangles[id];
            eset.insert(parent.edge_index(a, b).expect("face"));
            eset.insert(parent.edge_index(b, c).expect("face"));
            eset.insert(parent.edge_index(a, c).expect("face"));
        }
        for &[a, b] in edges {
            let id = parent
                .edge_index(a, b)
                .filter(|_| a != b)
                .ok_or(TopologyError::NotAdjacent { from: a, to: b })?;
            eset.insert(id);
        }
        for &e in &eset {
            vset.extend(parent.edges[e]);
        }
        Ok(Self {
            vertices: vset.into_iter().collect(),
            edges: eset.into_iter().collect(),
            triangles: tset.into_iter().collect(),
        })
    }

    /// Closed star of `v`: every simplex containing `v`, with all faces.
    pub fn closed_star(parent: &SimplicialComplex, v: usize) -> Result<Self, TopologyError> {
        if v >= parent.vertex_count {
            return Err(TopologyError::VertexOutOfRange { vertex: v, count: parent.vertex_count });
        }
        let edges: Vec<_> = parent.neighbors(v).iter().map(|&w| [v, w]).collect();
        let triangles: Vec<_> =
            parent.triangles.iter().copied().filter(|t| t.contains(&v)).collect();
        Self::from_simplices(parent, &[v], &edges, &triangles)
    }

    /// From sorted, face-closed id lists (not checked).
    pub(crate) fn from_sorted_ids(vertices: Vec<usize>, edges: Vec<usize>, triangles: Vec<usize>) -> Self {
        Self { vertices, edges, triangles }
    }

    pub fn full(parent: &SimplicialComplex) -> Self {
        Self {
            vertices: (0..parent.vertex_count).collect(),
            edges: (0..parent.edges.len()).collect(),
            triangles: (0..parent.triangles.len()).collect(),
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edge ids into the parent complex.
    pub fn edge_ids(&self) -> &[usize] {
        &self.edges
    }

    pub fn triangle_ids(&self) -> &[usize] {
        &self.triangles
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, edge_id: usize) -> bool {
        self.edges.binary_search(&edge_id).is_ok()
    }

    pub fn contains_triangle(&self, triangle_id: usize) -> bool {
        self.triangles.binary_search(&triangle_id).is_ok()
    }

    /// Position of `v` in the sorted vertex list.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            vertices: intersect(&self.vertices, &other.vertices),
            edges: intersect(&self.edges, &other.edges),
            triangles: intersect(&self.triangles, &other.triangles),
        }
    }

    /// Checks closure under faces against `parent`.
    pub fn validate(&self, parent: &SimplicialComplex) -> Result<(), TopologyError> {
        if self.vertices.iter().any(|&v| v >= parent.vertex_count)
            || self.edges.iter().any(|&e| e >= parent.edges.len())
            || self.triangles.iter().any(|&t| t >= parent.triangles.len())
        {
            return Err(TopologyError::NotClosed("index outside the parent complex"));
        }
        for &e in &self.edges {
            if !parent.edges[e].iter().all(|&v| self.contains_vertex(v)) {
                return Err(TopologyError::NotClosed("edge without its endpoints"));
            }
        }
        for &t in &self.triangles {
            let [a, b, c] = parent.triangles[t];
            for (x, y) in [(a, b), (b, c), (a, c)] {
                if !self.contains_edge(parent.edge_index(x, y).expect("face")) {
                    return Err(TopologyError::NotClosed("triangle without its edges"));
                }
            }
        }
        Ok(())
    }

    /// Edge-connected components, each with the simplices of `self` on it.
    pub fn components(&self, parent: &SimplicialComplex) -> Vec<Subcomplex> {
        let n = self.vertices.len();
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for &e in &self.edges {
            let [a, b] = parent.edges[e];
            let (ia, ib) = (self.position(a).expect("closed"), self.position(b).expect("closed"));
            let (ra, rb) = (find(&mut uf, ia), find(&mut uf, ib));
            if ra != rb {
                uf[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label = BTreeMap::new();
        let mut out: Vec<Subcomplex> = Vec::new();
        let mut comp_of = vec![0; n];
        for i in 0..n {
            let r = find(&mut uf, i);
            let next = label.len();
            let c = *label.entry(r).or_insert(next);
            if c == out.len() {
                out.push(Subcomplex::default());
            }
            out[c].vertices.push(self.vertices[i]);
            comp_of[i] = c;
        }
        for &e in &self.edges {
            let c = comp_of[self.position(parent.edges[e][0]).expect("closed")];
            out[c].edges.push(e);
        }
        for &t in &self.triangles {
            let c = comp_of[self.position(parent.triangles[t][0]).expect("closed")];
            out[c].triangles.push(t);
        }
        out
    }
}

fn vertex_set(parent: &SimplicialComplex, vertices: &[usize]) -> Result<BTreeSet<usize>, TopologyError> {
    let mut set = BTreeSet::new();
    for &v in vertices {
        if v >= parent.vertex_count {
            return Err(TopologyError::VertexOutOfRange { vertex: v, count: parent.vertex_count });
        }
        set.insert(v);
    }
    Ok(set)
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Edge-connected components of `sub` inside `parent`.
pub fn connected_components(parent: &SimplicialComplex, sub: &Subcomplex) -> Vec<Subcomplex> {
    sub.components(parent)
}

/// A family of subcomplexes covering every simplex of one complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    complex: Arc<SimplicialComplex>,
    charts: Vec<Subcomplex>,
    vertex_charts: Vec<Vec<usize>>,
    edge_charts: Vec<Vec<usize>>,
}

impl Cover {
    pub fn new(complex: Arc<SimplicialComplex>, charts: Vec<Subcomplex>) -> Result<Self, TopologyError> {
        let mut vertex_charts = vec![Vec::new(); complex.vertex_count()];
        let mut edge_charts = vec![Vec::new(); complex.edges().len()];
        let mut tri_covered = vec![false; complex.triangles().len()];
        for (i, chart) in charts.iter().enumerate() {
            if chart.is_empty() {
                return Err(TopologyError::EmptyChart(i));
            }
            chart.validate(&complex)?;
            for &v in chart.vertices() {
                vertex_charts[v].push(i);
            }
            for &e in chart.edge_ids() {
                edge_charts[e].push(i);
            }
            for &t in chart.triangle_ids() {
                tri_covered[t] = true;
            }
        }
        if let Some(v) = vertex_charts.iter().position(Vec::is_empty) {
            return Err(TopologyError::UncoveredVertex(v));
        }
        if let Some(e) = edge_charts.iter().position(Vec::is_empty) {
            return Err(TopologyError::UncoveredEdge(complex.edges()[e]));
        }
        if let Some(t) = tri_covered.iter().position(|c| !c) {
            return Err(TopologyError::UncoveredTriangle(complex.triangles()[t]));
        }
        Ok(Self { complex, charts, vertex_charts, edge_charts })
    }

    /// One chart per vertex: its closed star.
    pub fn star(complex: Arc<SimplicialComplex>) -> Self {
        let charts = (0..complex.vertex_count())
            .map(|v| Subcomplex::closed_star(&complex, v).expect("vertex in range"))
            .collect();
        Self::new(complex, charts).expect("stars cover every simplex")
    }

    /// The cover with the whole complex as its only chart.
    pub fn single(complex: Arc<SimplicialComplex>) -> Self {
        let chart = Subcomplex::full(&complex);
        Self::new(complex, vec![chart]).expect("the full chart covers")
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn charts(&self) -> &[Subcomplex] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &Subcomplex {
        &self.charts[i]
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    /// Charts containing vertex `v`, ascending.
    pub fn charts_of_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_charts[v]
    }

    /// Charts containing edge `edge_id`, ascending.
    pub fn charts_of_edge(&self, edge_id: usize) -> &[usize] {
        &self.edge_charts[edge_id]
    }

    /// Pairs `a < b` of charts sharing at least one vertex.
    pub fn overlapping_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = BTreeSet::new();
        for list in &self.vertex_charts {
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    pairs.insert((a, b));
                }
            }
        }
        pairs.into_iter().collect()
    }

    /// Components of `chart(a) ∩ chart(b)`.
    pub fn overlap_components(&self, a: usize, b: usize) -> Vec<Subcomplex> {
        self.charts[a].intersection(&self.charts[b]).components(&self.complex)
    }
}

/// Closed star cover of `complex`.
pub fn star_cover(complex: Arc<SimplicialComplex>) -> Cover {
    Cover::star(complex)
}

/// A walk along edges; a single vertex is the constant path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgePath {
    vertices: Vec<usize>,
}

impl EdgePath {
    pub fn new(complex: &SimplicialComplex, vertices: Vec<usize>) -> Result<Self, TopologyError> {
        if vertices.is_empty() {
            return Err(TopologyError::EmptyPath);
        }
        for &v in &vertices {
            if v >= complex.vertex_count() {
                return Err(TopologyError::VertexOutOfRange { vertex: v, count: complex.vertex_count() });
            }
        }
        for w in vertices.windows(2) {
            if !complex.has_edge(w[0], w[1]) {
                return Err(TopologyError::NotAdjacent { from: w[0], to: w[1] });
            }
        }
        Ok(Self { vertices })
    }

    pub fn constant(v: usize) -> Self {
        Self { vertices: vec![v] }
    }

    pub(crate) fn from_raw(vertices: Vec<usize>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("nonempty")
    }

    /// Number of edges traversed.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_constant(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_loop(&self) -> bool {
        self.start() == self.end()
    }

    /// Consecutive vertex pairs.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn concat(&self, other: &Self) -> Result<Self, TopologyError> {
        if self.end() != other.start() {
            return Err(TopologyError::NotComposable { end: self.end(), start: other.start() });
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(Self { vertices })
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    /// Image of the path under a vertex map (assumed simplicial).
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        Self { vertices: self.vertices.iter().map(|&v| f(v)).collect() }
    }
}

/// Every path one elementary move away from `path`: inserting or deleting a
/// backtrack `v, w, v`, or swapping two sides of a triangle for the third (in
/// either direction). Endpoints are fixed. Sorted, without duplicates.
pub fn elementary_homotopy_moves(path: &EdgePath, complex: &SimplicialComplex) -> Vec<EdgePath> {
    let p = &path.vertices;
    let mut out = BTreeSet::new();
    let splice = |i: usize, j: usize, middle: &[usize]| {
        let mut v = Vec::with_capacity(p.len() + middle.len());
        v.extend_from_slice(&p[..i]);
        v.extend_from_slice(middle);
        v.extend_from_slice(&p[j..]);
        EdgePath { vertices: v }
    };
    for i in 0..p.len() {
        for &w in complex.neighbors(p[i]) {
            out.insert(splice(i + 1, i + 1, &[w, p[i]]));
        }
    }
    for i in 0..p.len().saturating_sub(2) {
        if p[i] == p[i + 2] {
            out.insert(splice(i + 1, i + 3, &[]));
        }
    }
    for i in 0..p.len().saturating_sub(1) {
        for w in complex.triangle_apexes(p[i], p[i + 1]) {
            out.insert(splice(i + 1, i + 1, &[w]));
        }
    }
    for i in 0..p.len().saturating_sub(2) {
        let (a, b, c) = (p[i], p[i + 1], p[i + 2]);
        if a != c && complex.triangle_index([a, b, c]).is_some() {
            out.insert(splice(i + 1, i + 2, &[]));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn circle(n: usize) -> SimplicialComplex {
        let edges: Vec<_> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        SimplicialComplex::build(n, &edges, &[]).unwrap()
    }

    fn icosahedron() -> SimplicialComplex {
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 6], [2, 3, 7], [3, 4, 8], [4, 5, 9], [5, 1, 10],
            [6, 7, 2], [7, 8, 3], [8, 9, 4], [9, 10, 5], [10, 6, 1],
            [11, 6, 7], [11, 7, 8], [11, 8, 9], [11, 9, 10], [11, 10, 6],
        ];
        SimplicialComplex::build(12, &[], &tris).unwrap()
    }

    #[test]
    fn builds_circle_and_disk() {
        let c = circle(3);
        assert_eq!(c.edges().len(), 3);
        assert_eq!(c.euler_characteristic(), 0);
        let d = SimplicialComplex::build(3, &[[0, 1], [1, 2], [2, 0]], &[[0, 1, 2]]).unwrap();
        assert_eq!(d.euler_characteristic(), 1);
    }

    #[test]
    fn icosahedron_is_a_sphere() {
        let ico = icosahedron();
        assert_eq!((ico.vertex_count(), ico.edges().len(), ico.triangles().len()), (12, 30, 20));
        assert_eq!(ico.euler_characteristic(), 2);
        let cover = Cover::star(Arc::new(ico));
        assert!(cover.charts().iter().all(|c| c.triangle_ids().len() == 5));
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            SimplicialComplex::build(2, &[[0, 2]], &[]),
            Err(TopologyError::VertexOutOfRange { vertex: 2, count: 2 })
        );
        assert_eq!(
            SimplicialComplex::build(2, &[[0, 1], [1, 0]], &[]),
            Err(TopologyError::DuplicateEdge([1, 0]))
        );
        assert_eq!(
            SimplicialComplex::build(3, &[], &[[0, 1, 2], [2, 1, 0]]),
            Err(TopologyError::DuplicateTriangle([2, 1, 0]))
        );
        assert!(matches!(
            SimplicialComplex::build(3, &[[1, 1]], &[]),
            Err(TopologyError::DegenerateEdge(_))
        ));
    }

    #[test]
    fn hexagon_components() {
        let c6 = circle(6);
        let sub = Subcomplex::induced(&c6, &[0, 1, 3, 4]).unwrap();
        let comps = connected_components(&c6, &sub);
        let verts: Vec<_> = comps.iter().map(|c| c.vertices().to_vec()).collect();
        assert_eq!(verts, vec![vec![0, 1], vec![3, 4]]);
        let two = Subcomplex::induced(&c6, &[0, 3]).unwrap();
        assert_eq!(two.components(&c6).len(), 2);
        assert!(Subcomplex::default().components(&c6).is_empty());
    }

    #[test]
    fn circle_stars_are_two_edge_paths() {
        let cover = Cover::star(Arc::new(circle(3)));
        for chart in cover.charts() {
            assert_eq!(chart.vertices().len(), 3);
            assert_eq!(chart.edge_ids().len(), 2);
        }
        let tri = SimplicialComplex::build(3, &[], &[[0, 1, 2]]).unwrap();
        let cover = Cover::star(Arc::new(tri.clone()));
        assert!(cover.charts().iter().all(|c| *c == Subcomplex::full(&tri)));
    }

    #[test]
    fn cover_requires_every_simplex() {
        let c = Arc::new(circle(4));
        let charts = vec![
            Subcomplex::induced(&c, &[0, 1]).unwrap(),
            Subcomplex::induced(&c, &[2, 3]).unwrap(),
        ];
        assert!(matches!(Cover::new(c, charts), Err(TopologyError::UncoveredEdge(_))));
    }

    #[test]
    fn moves_on_constant_path_are_backtracks() {
        let c = circle(3);
        let moves = elementary_homotopy_moves(&EdgePath::constant(0), &c);
        let got: Vec<_> = moves.iter().map(|p| p.vertices().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1, 0], vec![0, 2, 0]]);
    }

    #[test]
    fn triangle_move_shortcuts() {
        let tri = SimplicialComplex::build(3, &[], &[[0, 1, 2]]).unwrap();
        let p = EdgePath::new(&tri, vec![0, 1, 2]).unwrap();
        let moves = elementary_homotopy_moves(&p, &tri);
        assert!(moves.contains(&EdgePath::new(&tri, vec![0, 2]).unwrap()));
    }

    #[test]
    fn circle_loop_never_becomes_constant() {
        let c = circle(3);
        let p = EdgePath::new(&c, vec![0, 1, 2, 0]).unwrap();
        let moves = elementary_homotopy_moves(&p, &c);
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|q| q.len() == p.len() + 2));
    }

    #[test]
    fn disconnected_bfs_names_vertices() {
        let c = SimplicialComplex::build(3, &[[0, 1]], &[]).unwrap();
        assert_eq!(c.bfs_tree(0), Err(TopologyError::Disconnected { a: 0, b: 2 }));
    }
}
