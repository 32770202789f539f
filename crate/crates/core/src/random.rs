//! Seeded random instances: complexes, covers, closed forms and paths.
//!
//! Values are small rationals so every identity can be checked exactly.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cech::{ClosedOneForm, FormError, GlobalFunction};
use crate::complex::{Cover, EdgePath, SimplicialComplex, Subcomplex};
use crate::scalar::Rational;

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4)))
}

/// Connected random graph on `n` vertices: a random tree plus extra edges
/// with probability `extra`.
fn random_graph<R: Rng>(rng: &mut R, n: usize, extra: f64) -> Vec<[usize; 2]> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = alloc::collections::BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert([a.min(b), a.max(b)]);
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(extra) {
                edges.insert([a, b]);
            }
        }
    }
    edges.into_iter().collect()
}

fn filled_triangles<R: Rng>(rng: &mut R, n: usize, edges: &[[usize; 2]], fill: f64) -> Vec<[usize; 3]> {
    let set: alloc::collections::BTreeSet<[usize; 2]> = edges.iter().copied().collect();
    let mut out = Vec::new();
    for &[a, b] in edges {
        for c in b + 1..n {
            if set.contains(&[a, c]) && set.contains(&[b, c]) && rng.gen_bool(fill) {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Connected complex with `3..=max_vertices` vertices; some 3-cycles are
/// filled, others left as holes.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(3..=max_vertices.max(3));
    let density = rng.gen_range(0.05..0.3);
    let edges = random_graph(rng, n, density);
    let fill = rng.gen_range(0.3..0.9);
    let triangles = filled_triangles(rng, n, &edges, fill);
    SimplicialComplex::build(n, &edges, &triangles).expect("valid simplices")
}

/// Cone over a random connected graph on `2..=max_base` vertices; the apex
/// is the last vertex. Always simply connected.
pub fn random_cone<R: Rng>(rng: &mut R, max_base: usize) -> SimplicialComplex {
    let n = rng.gen_range(2..=max_base.max(2));
    let density = rng.gen_range(0.05..0.4);
    let mut edges = random_graph(rng, n, density);
    let triangles: Vec<[usize; 3]> = edges.iter().map(|&[a, b]| [a, b, n]).collect();
    edges.extend((0..n).map(|v| [v, n]));
    SimplicialComplex::build(n + 1, &edges, &triangles).expect("valid simplices")
}

/// Random cover by cones: for some vertices `v`, the closure of a random set
/// of simplices through `v`; simplices left over get a chart of their own.
/// Every chart is contractible.
pub fn random_cover<R: Rng>(rng: &mut R, complex: Arc<SimplicialComplex>) -> Cover {
    let n = complex.vertex_count();
    let keep = rng.gen_range(0.3..0.95);
    let mut charts = Vec::new();
    for v in 0..n {
        if !rng.gen_bool(keep) {
            continue;
        }
        let edges: Vec<[usize; 2]> =
            complex.neighbors(v).iter().filter(|_| rng.gen_bool(keep)).map(|&w| [v, w]).collect();
        let triangles: Vec<[usize; 3]> =
            complex.triangles().iter().copied().filter(|t| t.contains(&v) && rng.gen_bool(keep)).collect();
        charts.push(Subcomplex::from_simplices(&complex, &[v], &edges, &triangles).expect("simplices of the complex"));
    }
    let covered = |charts: &[Subcomplex], f: &dyn Fn(&Subcomplex) -> bool| charts.iter().any(f);
    for (t, &tri) in complex.triangles().iter().enumerate() {
        if !covered(&charts, &|c| c.contains_triangle(t)) {
            charts.push(Subcomplex::from_simplices(&complex, &[], &[], &[tri]).expect("triangle"));
        }
    }
    for (e, &edge) in complex.edges().iter().enumerate() {
        if !covered(&charts, &|c| c.contains_edge(e)) {
            charts.push(Subcomplex::from_simplices(&complex, &[], &[edge], &[]).expect("edge"));
        }
    }
    for v in 0..n {
        if !covered(&charts, &|c| c.contains_vertex(v)) {
            charts.push(Subcomplex::from_simplices(&complex, &[v], &[], &[]).expect("vertex"));
        }
    }
    charts.shuffle(rng);
    Cover::new(complex, charts).expect("leftover simplices were added")
}

/// Random element of the kernel of the coboundary: increments on edges
/// `u → v` (`u < v`) summing to zero around every triangle.
pub fn random_closed_cochain<R: Rng>(rng: &mut R, complex: &SimplicialComplex) -> Vec<Rational> {
    let m = complex.edges().len();
    let mut rows: Vec<Vec<Rational>> = complex
        .triangles()
        .iter()
        .map(|&[a, b, c]| {
            let mut row = vec![Rational::zero(); m];
            row[complex.edge_index(a, b).expect("face")] = Rational::one();
            row[complex.edge_index(b, c).expect("face")] = Rational::one();
            row[complex.edge_index(a, c).expect("face")] = -Rational::one();
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let k = rows[i][col].clone();
                for j in 0..m {
                    let d = rows[r][j].clone() * k.clone();
                    rows[i][j] = rows[i][j].clone() - d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut x = vec![Rational::zero(); m];
    for (j, slot) in x.iter_mut().enumerate() {
        if !pivots.contains(&j) {
            *slot = small_rational(rng);
        }
    }
    for (i, &col) in pivots.iter().enumerate() {
        let mut s = Rational::zero();
        for j in 0..m {
            if j != col {
                s += rows[i][j].clone() * x[j].clone();
            }
        }
        x[col] = -s;
    }
    x
}

/// Shifts the potentials on each chart component by a random constant.
fn shift_components<R: Rng>(rng: &mut R, cover: Cover, mut potentials: Vec<Vec<Rational>>) -> Result<ClosedOneForm<Rational>, FormError> {
    let complex = cover.complex().clone();
    for (a, chart) in cover.charts().iter().enumerate() {
        for comp in chart.components(&complex) {
            let c = small_rational(rng);
            for &v in comp.vertices() {
                let pos = chart.position(v).expect("component of the chart");
                potentials[a][pos] = potentials[a][pos].clone() + c.clone();
            }
        }
    }
    ClosedOneForm::new(cover, potentials)
}

/// Random closed form on the cover, with random constants per chart
/// component.
pub fn random_form<R: Rng>(rng: &mut R, cover: Cover) -> ClosedOneForm<Rational> {
    let cochain = random_closed_cochain(rng, cover.complex());
    let base = ClosedOneForm::from_cochain(cover, &cochain).expect("closed cochain");
    let potentials = base.potentials().to_vec();
    shift_components(rng, base.cover().clone(), potentials).expect("shifts keep overlaps constant")
}

/// Equivalent representative on the finer cover by the components of
/// `chart ∩ star(v)`, each shifted by a random constant.
pub fn subdivide<R: Rng>(rng: &mut R, form: &ClosedOneForm<Rational>) -> ClosedOneForm<Rational> {
    let complex = form.complex().clone();
    let mut charts = Vec::new();
    let mut potentials = Vec::new();
    for (a, chart) in form.cover().charts().iter().enumerate() {
        for &v in chart.vertices() {
            let star = Subcomplex::closed_star(&complex, v).expect("vertex in range");
            for comp in chart.intersection(&star).components(&complex) {
                potentials.push(comp.vertices().iter().map(|&x| form.potential(a, x).cloned().expect("in chart")).collect());
                charts.push(comp);
            }
        }
    }
    let cover = Cover::new(complex, charts).expect("stars of chart vertices cover the chart");
    shift_components(rng, cover, potentials).expect("restriction keeps overlaps constant")
}

/// Random walk with `len` steps from a random vertex.
pub fn random_path<R: Rng>(rng: &mut R, complex: &SimplicialComplex, len: usize) -> EdgePath {
    let mut v = rng.gen_range(0..complex.vertex_count());
    let mut vertices = vec![v];
    for _ in 0..len {
        let Some(&w) = complex.neighbors(v).choose(rng) else { break };
        vertices.push(w);
        v = w;
    }
    EdgePath::new(complex, vertices).expect("walk along edges")
}

pub fn random_function<R: Rng>(rng: &mut R, n: usize) -> GlobalFunction<Rational> {
    GlobalFunction::new((0..n).map(|_| small_rational(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_instances_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let k = Arc::new(random_complex(&mut rng, 30));
            assert!(k.is_connected() && k.vertex_count() <= 30);
            let cover = random_cover(&mut rng, k.clone());
            let form = random_form(&mut rng, cover);
            let fine = subdivide(&mut rng, &form);
            assert!(form.equivalent(&fine).unwrap());
            let p = random_path(&mut rng, &k, 12);
            assert_eq!(form.integrate(&p).unwrap(), fine.integrate(&p).unwrap());
        }
    }

    #[test]
    fn cones_are_simply_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let k = random_cone(&mut rng, 12);
            let g = crate::group::EdgePathGroup::new(&k, 0).unwrap();
            assert!(g.is_trivial());
        }
    }
}
