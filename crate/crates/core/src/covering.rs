//! Universal covers of finite complexes and their deck transformations.
//!
//! The total space has vertices `(v, h)` with `v` a base vertex and `h` an
//! element of the (simplified) edge-path group; the edge `{u, v}` with `u < v`
//! lifts to the edge from `(u, h)` to `(v, h·w)`, where `w` is the group word the edge carries.
//! Deck transformations act by left multiplication on `h`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::complex::{sorted2, EdgePath, SimplicialComplex, TopologyError};
use crate::group::{EdgePathGroup, ElementTable, GroupError, Word, COSET_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("radius 0 requested for a nontrivial fundamental group: the cover would be degenerate")]
    DegenerateRadius,
    #[error("image of {cell:?} under {word} leaves the materialised region")]
    Truncated { word: Word, cell: Cell },
    #[error("deck word {0} is not materialised")]
    WordOutsideRegion(Word),
    #[error("{0:?} is not a cell of the total complex")]
    NotACell(Cell),
    #[error("vertex {0} of the total complex has no lift at the requested sheet")]
    MissingLift(usize),
}

/// A simplex of the total complex, by vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Vertex(usize),
    Edge([usize; 2]),
    Triangle([usize; 3]),
}

/// The projection from a (possibly truncated) universal cover to its base.
#[derive(Debug, Clone)]
pub struct CoveringMap {
    total: Arc<SimplicialComplex>,
    base: Arc<SimplicialComplex>,
    projection: Vec<usize>,
    sheet: Vec<usize>,
    lifts: BTreeMap<(usize, usize), usize>,
    elements: ElementTable,
    group: EdgePathGroup,
}

impl CoveringMap {
    /// Universal cover based at vertex 0.
    pub fn universal(base: Arc<SimplicialComplex>, radius: usize) -> Result<Self, CoverError> {
        Self::universal_at(base, 0, radius)
    }

    /// Universal cover based at `basepoint`. `radius` bounds deck word length
    /// when the group is not found to be finite.
    pub fn universal_at(base: Arc<SimplicialComplex>, basepoint: usize, radius: usize) -> Result<Self, CoverError> {
        let group = EdgePathGroup::new(&base, basepoint)?;
        let simplified = &group.simplification.group;
        let elements = ElementTable::build(simplified, radius, COSET_LIMIT)?;
        if !elements.is_complete() && radius == 0 {
            return Err(CoverError::DegenerateRadius);
        }
        let n = base.vertex_count();
        let edge_words: Vec<Word> =
            base.edges().iter().map(|&[u, v]| group.simplified_step(&base, u, v)).collect();
        let mut projection = Vec::new();
        let mut sheet = Vec::new();
        let mut lifts = BTreeMap::new();
        for h in 0..elements.len() {
            for v in 0..n {
                lifts.insert((v, h), projection.len());
                projection.push(v);
                sheet.push(h);
            }
        }
        let mut edges = Vec::new();
        for (e, &[u, v]) in base.edges().iter().enumerate() {
            for h in 0..elements.len() {
                if let Some(k) = elements.right_mul(h, &edge_words[e]) {
                    edges.push([lifts[&(u, h)], lifts[&(v, k)]]);
                }
            }
        }
        let mut triangles = Vec::new();
        for &[a, b, c] in base.triangles() {
            let wab = &edge_words[base.edge_index(a, b).expect("face")];
            let wbc = &edge_words[base.edge_index(b, c).expect("face")];
            let wac = &edge_words[base.edge_index(a, c).expect("face")];
            for h in 0..elements.len() {
                let hb = elements.right_mul(h, wab);
                let hc = hb.and_then(|x| elements.right_mul(x, wbc));
                let hc2 = elements.right_mul(h, wac);
                if let (Some(hb), Some(hc), Some(hc2)) = (hb, hc, hc2) {
                    if hc == hc2 {
                        triangles.push([lifts[&(a, h)], lifts[&(b, hb)], lifts[&(c, hc)]]);
                    }
                }
            }
        }
        let total = SimplicialComplex::build(projection.len(), &edges, &triangles)?;
        Ok(Self { total: Arc::new(total), base, projection, sheet, lifts, elements, group })
    }

    /// The identity map of `base`, viewed as a trivial covering.
    pub fn identity(base: Arc<SimplicialComplex>) -> Result<Self, CoverError> {
        let group = EdgePathGroup::new(&base, 0)?;
        let trivial = crate::group::PresentedGroup::new(0, Vec::new())?;
        let elements = ElementTable::build(&trivial, 0, COSET_LIMIT)?;
        let n = base.vertex_count();
        let lifts = (0..n).map(|v| ((v, 0), v)).collect();
        Ok(Self {
            total: base.clone(),
            base,
            projection: (0..n).collect(),
            sheet: vec![0; n],
            lifts,
            elements,
            group,
        })
    }

    pub fn total(&self) -> &Arc<SimplicialComplex> {
        &self.total
    }

    pub fn base(&self) -> &Arc<SimplicialComplex> {
        &self.base
    }

    /// Base vertex under a total vertex.
    pub fn project(&self, v: usize) -> usize {
        self.projection[v]
    }

    pub fn project_path(&self, p: &EdgePath) -> EdgePath {
        p.map(|v| self.projection[v])
    }

    /// Deck element indexing the sheet of a total vertex.
    pub fn sheet(&self, v: usize) -> usize {
        self.sheet[v]
    }

    /// Total vertex over `v` at sheet `h`.
    pub fn lift(&self, v: usize, h: usize) -> Option<usize> {
        self.lifts.get(&(v, h)).copied()
    }

    /// Total vertices over `v`.
    pub fn fiber(&self, v: usize) -> Vec<usize> {
        (0..self.elements.len()).filter_map(|h| self.lift(v, h)).collect()
    }

    pub fn basepoint(&self) -> usize {
        self.group.basepoint
    }

    /// Lift of the base basepoint at the identity sheet.
    pub fn base_lift(&self) -> usize {
        self.lift(self.basepoint(), 0).expect("identity sheet")
    }

    pub fn is_complete(&self) -> bool {
        self.elements.is_complete()
    }

    pub fn radius(&self) -> Option<usize> {
        self.elements.radius()
    }

    /// Materialised deck elements (index 0 is the identity).
    pub fn deck(&self) -> &ElementTable {
        &self.elements
    }

    /// Edge-path presentation of the base; deck words use its simplified
    /// generators.
    pub fn edge_path_group(&self) -> &EdgePathGroup {
        &self.group
    }

    pub fn deck_generator_count(&self) -> usize {
        self.elements.generator_count()
    }

    /// `η · h` for deck element `eta` and sheet `h`.
    pub fn deck_mul(&self, eta: usize, h: usize) -> Option<usize> {
        self.elements.mul(eta, h)
    }

    fn act_vertex(&self, eta: usize, v: usize) -> Option<usize> {
        let h = self.deck_mul(eta, self.sheet[v])?;
        self.lift(self.projection[v], h)
    }

    /// Image of a cell under the deck transformation given by `word`.
    pub fn deck_action(&self, word: &Word, cell: Cell) -> Result<Cell, CoverError> {
        let eta = self.elements.element(word).ok_or_else(|| CoverError::WordOutsideRegion(word.clone()))?;
        let truncated = || CoverError::Truncated { word: word.clone(), cell };
        let n = self.total.vertex_count();
        let image = |v: usize| -> Result<usize, CoverError> {
            if v >= n {
                return Err(CoverError::NotACell(cell));
            }
            self.act_vertex(eta, v).ok_or_else(truncated)
        };
        match cell {
            Cell::Vertex(v) => Ok(Cell::Vertex(image(v)?)),
            Cell::Edge([a, b]) => {
                if !self.total.has_edge(a, b) {
                    return Err(CoverError::NotACell(cell));
                }
                let (x, y) = (image(a)?, image(b)?);
                if !self.total.has_edge(x, y) {
                    return Err(truncated());
                }
                Ok(Cell::Edge(sorted2(x, y)))
            }
            Cell::Triangle(t) => {
                if self.total.triangle_index(t).is_none() {
                    return Err(CoverError::NotACell(cell));
                }
                let mut img = [image(t[0])?, image(t[1])?, image(t[2])?];
                img.sort_unstable();
                if self.total.triangle_index(img).is_none() {
                    return Err(truncated());
                }
                Ok(Cell::Triangle(img))
            }
        }
    }

    /// Vertex permutation of a deck generator (partial when truncated).
    pub fn deck_permutation(&self, generator: usize) -> Vec<Option<usize>> {
        let w = Word::generator(generator);
        (0..self.total.vertex_count())
            .map(|v| match self.deck_action(&w, Cell::Vertex(v)) {
                Ok(Cell::Vertex(x)) => Some(x),
                _ => None,
            })
            .collect()
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }
}

/// Universal cover of `complex` based at vertex 0.
pub fn universal_cover(complex: Arc<SimplicialComplex>, radius: usize) -> Result<CoveringMap, CoverError> {
    CoveringMap::universal(complex, radius)
}

/// Deck action of `word` on `cell`.
pub fn deck_action(cover: &CoveringMap, word: &Word, cell: Cell) -> Result<Cell, CoverError> {
    cover.deck_action(word, cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> Arc<SimplicialComplex> {
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        Arc::new(SimplicialComplex::build(6, &[], &tris).unwrap())
    }

    fn c3() -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::build(3, &[[0, 1], [1, 2], [2, 0]], &[]).unwrap())
    }

    #[test]
    fn triangle_covers_itself() {
        let tri = Arc::new(SimplicialComplex::build(3, &[], &[[0, 1, 2]]).unwrap());
        let cover = universal_cover(tri.clone(), 0).unwrap();
        assert!(cover.is_complete());
        assert_eq!(cover.deck().len(), 1);
        assert_eq!(**cover.total(), *tri);
    }

    #[test]
    fn projective_plane_double_cover() {
        let cover = universal_cover(rp2(), 5).unwrap();
        let t = cover.total();
        assert_eq!((t.vertex_count(), t.edges().len(), t.triangles().len()), (12, 30, 20));
        assert_eq!(t.euler_characteristic(), 2);
        assert!(t.is_connected());
        assert_eq!(cover.deck().len(), 2);
        for v in 0..6 {
            assert_eq!(cover.fiber(v).len(), 2);
        }
        let g = Word::generator(0);
        for v in 0..12 {
            let Cell::Vertex(x) = cover.deck_action(&g, Cell::Vertex(v)).unwrap() else { panic!() };
            assert_ne!(x, v);
            assert_eq!(cover.project(x), cover.project(v));
            assert_eq!(cover.deck_action(&g.pow(2), Cell::Vertex(v)).unwrap(), Cell::Vertex(v));
        }
        for &tri in t.triangles() {
            assert_eq!(cover.deck_action(&g.pow(2), Cell::Triangle(tri)).unwrap(), Cell::Triangle(tri));
            assert_ne!(cover.deck_action(&g, Cell::Triangle(tri)).unwrap(), Cell::Triangle(tri));
        }
    }

    #[test]
    fn circle_line_cover() {
        let cover = universal_cover(c3(), 3).unwrap();
        assert!(!cover.is_complete());
        let t = cover.total();
        assert_eq!(t.vertex_count(), 21);
        assert_eq!(t.edges().len(), 20);
        assert_eq!(t.euler_characteristic(), 1);
        assert_eq!(cover.fiber(0).len(), 7);
        let x0 = cover.base_lift();
        let Cell::Vertex(y) = cover.deck_action(&Word::generator(0), Cell::Vertex(x0)).unwrap() else { panic!() };
        assert_eq!(cover.deck().word(cover.sheet(y)), &Word::generator(0));
        let far = cover.lift(0, cover.deck().element(&Word::generator(0).pow(3)).unwrap()).unwrap();
        assert!(matches!(
            cover.deck_action(&Word::generator(0), Cell::Vertex(far)),
            Err(CoverError::Truncated { .. })
        ));
    }

    #[test]
    fn zero_radius_on_circle_is_rejected() {
        assert!(matches!(universal_cover(c3(), 0), Err(CoverError::DegenerateRadius)));
    }

    #[test]
    fn identity_cover() {
        let cover = CoveringMap::identity(rp2()).unwrap();
        assert_eq!(cover.total().vertex_count(), 6);
        assert_eq!(cover.project(4), 4);
    }
}
