//! Finitely presented groups from edge-path presentations.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::complex::{BfsTree, EdgePath, SimplicialComplex, TopologyError};
use crate::scalar::Scalar;

/// Default cap on live cosets during enumeration.
pub const COSET_LIMIT: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    /// Column of a coset table: `2g` for `g`, `2g + 1` for `g⁻¹`.
    pub fn column(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }
}

/// Freely reduced word in the generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Self(vec![Letter::new(g, false)])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Self::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Builds from signed exponents: `(g, k)` is `g^k`.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        Self::from_letters(powers.iter().flat_map(|&(g, k)| {
            core::iter::repeat_n(Letter::new(g, k < 0), k.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for &l in &other.0 {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    /// Replaces every letter by a word.
    pub fn substitute(&self, image: impl Fn(usize) -> Word) -> Self {
        let mut out = Self::identity();
        for l in &self.0 {
            let w = image(l.generator);
            let w = if l.inverse { w.inverse() } else { w };
            out = out.mul(&w);
        }
        out
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut out = vec![0; generator_count];
        for l in &self.0 {
            out[l.generator] += if l.inverse { -1 } else { 1 };
        }
        out
    }

    /// Cyclic reduction.
    pub fn cyclically_reduced(&self) -> Self {
        let mut v = self.0.clone();
        while v.len() >= 2 && v[0] == v[v.len() - 1].inv() {
            v.pop();
            v.remove(0);
        }
        Self(v)
    }

    /// Least representative among cyclic rotations of the word and its inverse.
    fn canonical_relator(&self) -> Self {
        let w = self.cyclically_reduced();
        let mut best = w.clone();
        for cand in [w.clone(), w.inverse()] {
            for r in 0..cand.0.len() {
                let mut rot = cand.0[r..].to_vec();
                rot.extend_from_slice(&cand.0[..r]);
                let rot = Self(rot);
                if rot < best {
                    best = rot;
                }
            }
        }
        best
    }
}

impl core::fmt::Display for Word {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}{}", l.generator, if l.inverse { "^-1" } else { "" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("coset enumeration exceeded {limit} cosets")]
    Overflow { limit: usize },
    #[error("word length ball of radius {radius} is not fully enumerated")]
    BallIncomplete { radius: usize },
    #[error("generator {0} out of range")]
    GeneratorOutOfRange(usize),
}

/// `⟨ generators | relators ⟩`. Inverses of relators are implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedGroup {
    generator_count: usize,
    relators: Vec<Word>,
}

impl PresentedGroup {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        for r in &relators {
            if let Some(l) = r.letters().iter().find(|l| l.generator >= generator_count) {
                return Err(GroupError::GeneratorOutOfRange(l.generator));
            }
        }
        Ok(Self { generator_count, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Relators together with their inverses.
    pub fn relators_with_inverses(&self) -> Vec<Word> {
        self.relators.iter().flat_map(|r| [r.clone(), r.inverse()]).collect()
    }

    /// Tietze simplification: repeatedly eliminates a generator occurring
    /// exactly once in some relator. Kept generators are a subset of the
    /// originals, renumbered in ascending order.
    pub fn simplify(&self) -> Simplification {
        let n = self.generator_count;
        let mut images: Vec<Word> = (0..n).map(Word::generator).collect();
        let mut alive = vec![true; n];
        let mut relators: Vec<Word> =
            self.relators.iter().map(Word::cyclically_reduced).filter(|r| !r.is_identity()).collect();
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (ri, r) in relators.iter().enumerate() {
                let mut counts = BTreeMap::new();
                for l in r.letters() {
                    *counts.entry(l.generator).or_insert(0usize) += 1;
                }
                if let Some((&g, _)) = counts.iter().find(|(_, &c)| c == 1) {
                    let key = (r.len(), g, ri);
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
            let Some((_, g, ri)) = best else { break };
            let r = relators.remove(ri);
            let pos = r.letters().iter().position(|l| l.generator == g).expect("occurs once");
            // r = u x^{±1} v = 1 gives x^{±1} = u⁻¹ v⁻¹.
            let u = Word(r.letters()[..pos].to_vec());
            let v = Word(r.letters()[pos + 1..].to_vec());
            let mut value = u.inverse().mul(&v.inverse());
            if r.letters()[pos].inverse {
                value = value.inverse();
            }
            let sub = |w: &Word| w.substitute(|h| if h == g { value.clone() } else { Word::generator(h) });
            relators = relators.iter().map(|w| sub(w).cyclically_reduced()).filter(|w| !w.is_identity()).collect();
            for img in &mut images {
                *img = sub(img);
            }
            alive[g] = false;
        }
        let kept: Vec<usize> = (0..n).filter(|&g| alive[g]).collect();
        let renumber: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let rename = |w: &Word| Word(w.letters().iter().map(|l| Letter::new(renumber[&l.generator], l.inverse)).collect());
        let mut relators: Vec<Word> = relators.iter().map(rename).collect();
        if kept.len() == 1 {
            // One generator: the group is cyclic of order gcd of exponent sums.
            let d = relators.iter().fold(0i64, |acc, r| gcd(acc, r.exponent_sums(1)[0]));
            relators = if d == 0 { Vec::new() } else { vec![Word::generator(0).pow(d)] };
        }
        let set: BTreeSet<Word> = relators.iter().map(Word::canonical_relator).collect();
        let group = PresentedGroup { generator_count: kept.len(), relators: set.into_iter().collect() };
        Simplification { group, kept, images: images.iter().map(rename).collect() }
    }

    /// Coset enumeration over the trivial subgroup, stopping at `limit` cosets.
    pub fn enumerate(&self, limit: usize) -> CosetTable {
        enumerate_cosets(self, limit)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Result of Tietze simplification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplification {
    pub group: PresentedGroup,
    /// Original index of each kept generator.
    pub kept: Vec<usize>,
    /// Image of every original generator as a word in kept generators.
    pub images: Vec<Word>,
}

impl Simplification {
    /// Rewrites a word in the original generators.
    pub fn rewrite(&self, w: &Word) -> Word {
        w.substitute(|g| self.images[g].clone())
    }
}

/// Coset table of the trivial subgroup, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    generator_count: usize,
    rows: Vec<Vec<Option<usize>>>,
    /// Cosets whose rows were closed against every relator.
    processed: usize,
    complete: bool,
}

impl CosetTable {
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn act(&self, coset: usize, l: Letter) -> Option<usize> {
        self.rows[coset][l.column()]
    }

    /// Follows `w` from `coset`; `None` when it leaves the table.
    pub fn walk(&self, coset: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(coset, |c, &l| self.act(c, l))
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    live: usize,
    limit: usize,
}

struct Overflow;

impl Enumerator {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, col: usize) -> Result<(), Overflow> {
        if self.live >= self.limit {
            return Err(Overflow);
        }
        let n = self.table.len();
        self.table.push(vec![None; self.cols]);
        self.parent.push(n);
        self.live += 1;
        self.table[c][col] = Some(n);
        self.table[n][col ^ 1] = Some(c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            self.live -= 1;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                if let Some(f) = self.table[e][x] {
                    if self.table[f][x ^ 1] == Some(e) {
                        self.table[f][x ^ 1] = None;
                    }
                    let (e1, f1) = (self.rep(e), self.rep(f));
                    if let Some(t) = self.table[e1][x] {
                        self.merge(f1, t);
                    } else if let Some(t) = self.table[f1][x ^ 1] {
                        self.merge(e1, t);
                    } else {
                        self.table[e1][x] = Some(f1);
                        self.table[f1][x ^ 1] = Some(e1);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), Overflow> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][w[j as usize] ^ 1] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

fn enumerate_cosets(group: &PresentedGroup, limit: usize) -> CosetTable {
    let cols = 2 * group.generator_count;
    let relators: Vec<Vec<usize>> = group
        .relators_with_inverses()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.column()).collect())
        .collect();
    let mut en = Enumerator {
        cols,
        table: vec![vec![None; cols]],
        parent: vec![0],
        queue: Vec::new(),
        live: 1,
        limit: limit.max(1),
    };
    let mut c = 0;
    let mut overflow = false;
    'outer: while c < en.table.len() {
        if en.alive(c) {
            for r in &relators {
                if !en.alive(c) {
                    break;
                }
                if en.scan_and_fill(c, r).is_err() {
                    overflow = true;
                    break 'outer;
                }
            }
            for x in 0..cols {
                if en.alive(c) && en.table[c][x].is_none() && en.define(c, x).is_err() {
                    overflow = true;
                    break 'outer;
                }
            }
        }
        c += 1;
    }
    // Compact live cosets, preserving order.
    let reps: Vec<usize> = (0..en.table.len()).map(|i| en.rep(i)).collect();
    let live: Vec<usize> = (0..en.table.len()).filter(|&i| reps[i] == i).collect();
    let index: BTreeMap<usize, usize> = live.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let processed = live.iter().take_while(|&&x| x < c).count();
    let rows = live
        .iter()
        .map(|&r| en.table[r].iter().map(|e| e.map(|t| index[&reps[t]])).collect())
        .collect();
    CosetTable { generator_count: group.generator_count, rows, processed, complete: !overflow }
}

/// Enumerated elements of a group: complete, or a word-length ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementTable {
    table: CosetTable,
    /// Members, in breadth-first order from the identity (index 0).
    members: Vec<usize>,
    index: BTreeMap<usize, usize>,
    words: Vec<Word>,
    depth: Vec<usize>,
    radius: Option<usize>,
}

impl ElementTable {
    /// All elements of a finite group, or the ball of `radius` otherwise.
    pub fn build(group: &PresentedGroup, radius: usize, limit: usize) -> Result<Self, GroupError> {
        let table = group.enumerate(limit);
        let complete = table.is_complete();
        let bound = if complete { usize::MAX } else { radius };
        let mut index = BTreeMap::from([(0usize, 0usize)]);
        let mut members = vec![0];
        let mut words = vec![Word::identity()];
        let mut depth = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let c = members[i];
            if depth[i] >= bound {
                continue;
            }
            if c >= table.processed() && !complete {
                return Err(GroupError::BallIncomplete { radius });
            }
            for col in 0..2 * group.generator_count() {
                let l = Letter::new(col / 2, col % 2 == 1);
                let Some(n) = table.act(c, l) else {
                    return Err(GroupError::BallIncomplete { radius });
                };
                if let alloc::collections::btree_map::Entry::Vacant(slot) = index.entry(n) {
                    slot.insert(members.len());
                    members.push(n);
                    let mut w = words[i].clone();
                    w.push(l);
                    words.push(w);
                    depth.push(depth[i] + 1);
                    queue.push_back(members.len() - 1);
                }
            }
        }
        Ok(Self { table, members, index, words, depth, radius: (!complete).then_some(radius) })
    }

    pub fn is_complete(&self) -> bool {
        self.radius.is_none()
    }

    /// Materialisation radius of a truncated table.
    pub fn radius(&self) -> Option<usize> {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.table.generator_count()
    }

    /// Shortest word of element `i`.
    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    /// Element represented by `w`, if it lies in the table.
    pub fn element(&self, w: &Word) -> Option<usize> {
        self.right_mul(0, w)
    }

    /// `x · w`.
    pub fn right_mul(&self, x: usize, w: &Word) -> Option<usize> {
        let c = self.table.walk(self.members[x], w)?;
        self.index.get(&c).copied()
    }

    /// `x · y`.
    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        self.right_mul(x, &self.words[y])
    }
}

/// Edge-path presentation of the fundamental group of a connected complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePathGroup {
    pub group: PresentedGroup,
    pub basepoint: usize,
    pub tree: BfsTree,
    /// Non-tree edges `[u, v]` with `u < v`, oriented `u → v`.
    pub generator_edges: Vec<[usize; 2]>,
    edge_generator: Vec<Option<usize>>,
    pub simplification: Simplification,
}

impl EdgePathGroup {
    pub fn new(complex: &SimplicialComplex, basepoint: usize) -> Result<Self, TopologyError> {
        let tree = complex.bfs_tree(basepoint)?;
        let mut edge_generator = vec![None; complex.edges().len()];
        let mut generator_edges = Vec::new();
        for (e, &edge) in complex.edges().iter().enumerate() {
            if !tree.tree_edge[e] {
                edge_generator[e] = Some(generator_edges.len());
                generator_edges.push(edge);
            }
        }
        let mut this = Self {
            group: PresentedGroup { generator_count: generator_edges.len(), relators: Vec::new() },
            basepoint,
            tree,
            generator_edges,
            edge_generator,
            simplification: Simplification {
                group: PresentedGroup { generator_count: 0, relators: Vec::new() },
                kept: Vec::new(),
                images: Vec::new(),
            },
        };
        let relators = complex
            .triangles()
            .iter()
            .map(|&[a, b, c]| this.step_word(complex, a, b).mul(&this.step_word(complex, b, c)).mul(&this.step_word(complex, c, a)))
            .collect();
        this.group.relators = relators;
        this.simplification = this.group.simplify();
        Ok(this)
    }

    /// Generator carried by the edge `{a, b}`, if it is not a tree edge.
    pub fn edge_generator(&self, complex: &SimplicialComplex, a: usize, b: usize) -> Option<usize> {
        complex.edge_index(a, b).and_then(|e| self.edge_generator[e])
    }

    /// Word of a single step `a → b` along an edge.
    pub fn step_word(&self, complex: &SimplicialComplex, a: usize, b: usize) -> Word {
        match self.edge_generator(complex, a, b) {
            Some(g) => Word(vec![Letter::new(g, a > b)]),
            None => Word::identity(),
        }
    }

    pub fn word_of_path(&self, complex: &SimplicialComplex, path: &EdgePath) -> Word {
        let mut w = Word::identity();
        for (a, b) in path.steps() {
            for &l in self.step_word(complex, a, b).letters() {
                w.push(l);
            }
        }
        w
    }

    /// Tree path from the basepoint to `v`.
    pub fn tree_path(&self, v: usize) -> EdgePath {
        EdgePath::from_raw(self.tree.path_from_root(v))
    }

    /// Based loop traversing generator `g` once in its positive direction.
    pub fn generator_loop(&self, g: usize) -> EdgePath {
        let [u, v] = self.generator_edges[g];
        let mut verts = self.tree.path_from_root(u);
        let mut back = self.tree.path_from_root(v);
        back.reverse();
        verts.extend(back);
        EdgePath::from_raw(verts)
    }

    /// Word of a step in the simplified generators.
    pub fn simplified_step(&self, complex: &SimplicialComplex, a: usize, b: usize) -> Word {
        self.simplification.rewrite(&self.step_word(complex, a, b))
    }

    /// True when the simplified presentation has no generators, or coset
    /// enumeration proves the group trivial.
    pub fn is_trivial(&self) -> bool {
        let g = &self.simplification.group;
        if g.generator_count() == 0 {
            return true;
        }
        let t = g.enumerate(COSET_LIMIT);
        t.is_complete() && t.len() == 1
    }
}

/// Additive character on a presented group, stored on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Character<S> {
    group: PresentedGroup,
    values: Vec<S>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("expected {expected} generator values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("relator {index} evaluates to {value}, not zero")]
    NotHomomorphism { index: usize, value: alloc::string::String },
}

impl<S: Scalar> Character<S> {
    pub fn new(group: PresentedGroup, values: Vec<S>) -> Result<Self, CharacterError> {
        if values.len() != group.generator_count() {
            return Err(CharacterError::Arity { expected: group.generator_count(), got: values.len() });
        }
        let this = Self { group, values };
        for (index, r) in this.group.relators().iter().enumerate() {
            let v = this.evaluate(r);
            if !v.is_zero() {
                return Err(CharacterError::NotHomomorphism { index, value: alloc::format!("{v}") });
            }
        }
        Ok(this)
    }

    pub fn trivial(group: PresentedGroup) -> Self {
        let values = vec![S::zero(); group.generator_count()];
        Self { group, values }
    }

    pub fn group(&self) -> &PresentedGroup {
        &self.group
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn evaluate(&self, w: &Word) -> S {
        w.letters().iter().fold(S::zero(), |acc, l| {
            let v = self.values[l.generator].clone();
            if l.inverse {
                acc - v
            } else {
                acc + v
            }
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    pub fn negated(&self) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().cloned().map(|v| -v).collect() }
    }

    /// The character on the simplified presentation (kept generators).
    pub fn restrict(&self, s: &Simplification) -> Self {
        Self { group: s.group.clone(), values: s.kept.iter().map(|&g| self.values[g].clone()).collect() }
    }

    /// Extends a character on the simplified presentation to the original
    /// generators through their images.
    pub fn extend(simplified: &Self, original: &PresentedGroup, s: &Simplification) -> Self {
        Self {
            group: original.clone(),
            values: s.images.iter().map(|w| simplified.evaluate(w)).collect(),
        }
    }

    /// Multiplicative values `e^{value}` as floats.
    pub fn multiplicative(&self) -> Vec<f64> {
        self.values.iter().map(|v| libm::exp(v.to_f64())).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::Rational;
    use alloc::sync::Arc;

    pub(crate) fn rp2() -> SimplicialComplex {
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        SimplicialComplex::build(6, &[], &tris).unwrap()
    }

    /// Smith normal form diagonal of an integer matrix (small, by hand).
    fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut diag = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let pivot = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j))).filter(|&(i, j)| m[i][j] != 0).min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else { break };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let mut done = false;
            while !done {
                done = true;
                for i in t + 1..rows {
                    let q = m[i][t] / m[t][t];
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    if m[i][t] != 0 {
                        m.swap(t, i);
                        done = false;
                    }
                }
                for j in t + 1..cols {
                    let q = m[t][j] / m[t][t];
                    for i in t..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    if m[t][j] != 0 {
                        for row in m.iter_mut() {
                            row.swap(t, j);
                        }
                        done = false;
                    }
                }
            }
            diag.push(m[t][t].abs());
            t += 1;
        }
        diag
    }

    #[test]
    fn single_triangle_group_is_trivial() {
        let tri = SimplicialComplex::build(3, &[], &[[0, 1, 2]]).unwrap();
        let g = EdgePathGroup::new(&tri, 0).unwrap();
        assert_eq!(g.group.generator_count(), 1);
        assert_eq!(g.group.relators().len(), 1);
        assert!(g.is_trivial());
    }

    #[test]
    fn circle_group_is_free_of_rank_one() {
        let c = SimplicialComplex::build(3, &[[0, 1], [1, 2], [2, 0]], &[]).unwrap();
        let g = EdgePathGroup::new(&c, 0).unwrap();
        assert_eq!(g.group.generator_count(), 1);
        assert!(g.group.relators().is_empty());
        assert!(!g.is_trivial());
        assert_eq!(g.generator_loop(0).vertices(), &[0, 1, 2, 0]);
    }

    #[test]
    fn projective_plane_has_order_two() {
        let c = rp2();
        let g = EdgePathGroup::new(&c, 0).unwrap();
        let n = g.group.generator_count();
        let matrix: Vec<Vec<i64>> = g.group.relators().iter().map(|r| r.exponent_sums(n)).collect();
        let diag = smith_diagonal(matrix);
        let torsion: Vec<i64> = diag.iter().copied().filter(|&d| d != 1).collect();
        assert_eq!(torsion, vec![2]);
        assert_eq!(diag.len(), n);
        let s = &g.simplification;
        assert_eq!(s.group.generator_count(), 1);
        assert_eq!(s.group.relators(), &[Word::generator(0).pow(2)]);
        let t = s.group.enumerate(COSET_LIMIT);
        assert!(t.is_complete());
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn coset_enumeration_of_small_groups() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let a = Word::generator(0);
        let b = Word::generator(1);
        let g = PresentedGroup::new(2, vec![a.pow(2), b.pow(3), a.mul(&b).pow(2)]).unwrap();
        let t = g.enumerate(COSET_LIMIT);
        assert!(t.is_complete());
        assert_eq!(t.len(), 6);
        // Quaternion group <i, j | i^4, i^2 j^-2, j^-1 i j i>
        let q = PresentedGroup::new(
            2,
            vec![a.pow(4), a.pow(2).mul(&b.pow(-2)), b.inverse().mul(&a).mul(&b).mul(&a)],
        )
        .unwrap();
        assert_eq!(q.enumerate(COSET_LIMIT).len(), 8);
    }

    #[test]
    fn free_group_ball() {
        let g = PresentedGroup::new(1, Vec::new()).unwrap();
        let e = ElementTable::build(&g, 3, COSET_LIMIT).unwrap();
        assert!(!e.is_complete());
        assert_eq!(e.len(), 7);
        let g2 = PresentedGroup::new(2, Vec::new()).unwrap();
        assert_eq!(ElementTable::build(&g2, 2, COSET_LIMIT).unwrap().len(), 1 + 4 + 12);
    }

    #[test]
    fn free_reduction() {
        let w = Word::from_powers(&[(0, 2), (0, -1), (1, 1), (1, -1)]);
        assert_eq!(w, Word::generator(0));
        assert!(w.mul(&w.inverse()).is_identity());
    }

    #[test]
    fn character_checks_relators() {
        let g = PresentedGroup::new(1, vec![Word::generator(0).pow(2)]).unwrap();
        let one = Rational::from_integer(1.into());
        assert!(Character::new(g.clone(), vec![one]).is_err());
        assert!(Character::<Rational>::trivial(g).is_trivial());
        let _ = Arc::new(0);
    }
}
