//! Uniform grids on boxes in `ℂ^N` (`N ≤ 2`) and complex Hessians by
//! central differences.
//!
//! Real axes are ordered `re1, im1, re2, im2`; nodes are stored row-major
//! with `re1` outermost. Points are `[f64; 4]` with unused slots zero.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::PshError;

/// Box in one complex coordinate: `[re_min, re_max, im_min, im_max]`.
pub type ComplexBox = [f64; 4];

pub type Point = [f64; 4];

const MIN_SAMPLES: usize = 5;

/// Node positions are compared with this slack, relative to `h`.
const SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    boxes: Vec<ComplexBox>,
    h: f64,
    counts: Vec<usize>,
    strides: Vec<usize>,
}

impl GridDomain {
    pub fn new(boxes: Vec<ComplexBox>, h: f64) -> Result<Self, PshError> {
        if boxes.is_empty() || boxes.len() > 2 {
            return Err(PshError::Dimension(boxes.len()));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(PshError::Spacing(h));
        }
        let mut counts = Vec::with_capacity(2 * boxes.len());
        for (k, b) in boxes.iter().enumerate() {
            for (axis, (lo, hi)) in [(b[0], b[1]), (b[2], b[3])].into_iter().enumerate() {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(PshError::BadBox { coordinate: k });
                }
                let count = libm::floor((hi - lo) / h + SNAP) as usize + 1;
                if count < MIN_SAMPLES {
                    return Err(PshError::TooFewSamples { axis: 2 * k + axis, count });
                }
                counts.push(count);
            }
        }
        let mut strides = vec![1; counts.len()];
        for a in (0..counts.len() - 1).rev() {
            strides[a] = strides[a + 1] * counts[a + 1];
        }
        Ok(Self { boxes, h, counts, strides })
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[ComplexBox] {
        &self.boxes
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Samples along each real axis.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_min(&self, axis: usize) -> f64 {
        self.boxes[axis / 2][2 * (axis % 2)]
    }

    fn axis_max(&self, axis: usize) -> f64 {
        self.boxes[axis / 2][2 * (axis % 2) + 1]
    }

    pub fn index(&self, node: usize) -> [usize; 4] {
        let mut idx = [0; 4];
        let mut rest = node;
        for a in 0..self.counts.len() {
            idx[a] = rest / self.strides[a];
            rest %= self.strides[a];
        }
        idx
    }

    pub fn node(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn point(&self, node: usize) -> Point {
        let idx = self.index(node);
        let mut p = [0.0; 4];
        for a in 0..self.counts.len() {
            p[a] = self.axis_min(a) + idx[a] as f64 * self.h;
        }
        p
    }

    /// Number of nodes between `node` and the nearest face of the grid.
    pub fn boundary_distance(&self, node: usize) -> usize {
        let idx = self.index(node);
        (0..self.counts.len()).map(|a| idx[a].min(self.counts[a] - 1 - idx[a])).min().expect("at least one axis")
    }

    /// Neighbour `delta` steps along `axis`.
    pub fn neighbor(&self, node: usize, axis: usize, delta: isize) -> Option<usize> {
        let i = self.index(node)[axis] as isize + delta;
        (0..self.counts[axis] as isize).contains(&i).then(|| (node as isize + delta * self.strides[axis] as isize) as usize)
    }

    fn offset(&self, node: usize, steps: [i32; 4]) -> usize {
        let mut n = node as isize;
        for (a, &s) in steps.iter().enumerate().take(self.counts.len()) {
            n += s as isize * self.strides[a] as isize;
        }
        n as usize
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        let slack = SNAP * self.h;
        (0..self.counts.len()).all(|a| p[a] >= self.axis_min(a) - slack && p[a] <= self.axis_max(a) + slack)
    }

    /// Node closest to `p`, if `p` lies in the domain.
    pub fn nearest_node(&self, p: &Point) -> Option<usize> {
        if !self.contains_point(p) {
            return None;
        }
        let mut idx = [0usize; 4];
        for a in 0..self.counts.len() {
            let i = libm::round((p[a] - self.axis_min(a)) / self.h) as isize;
            idx[a] = i.clamp(0, self.counts[a] as isize - 1) as usize;
        }
        Some(self.node(&idx[..self.counts.len()]))
    }

    /// Nodes of `region`; the region's boxes must lie in the domain.
    pub fn nodes_in(&self, region: &Region) -> Result<Vec<usize>, PshError> {
        if region.boxes.len() != self.dim() {
            return Err(PshError::Dimension(region.boxes.len()));
        }
        let slack = SNAP * self.h;
        for a in 0..self.counts.len() {
            let (lo, hi) = region.axis_bounds(a);
            if lo < self.axis_min(a) - slack || hi > self.axis_max(a) + slack {
                return Err(PshError::RegionOutside);
            }
        }
        let mut ranges = [(0usize, 0usize); 4];
        for (a, range) in ranges.iter_mut().enumerate().take(self.counts.len()) {
            let (lo, hi) = region.axis_bounds(a);
            let first = libm::ceil((lo - self.axis_min(a)) / self.h - SNAP).max(0.0) as usize;
            let last = (libm::floor((hi - self.axis_min(a)) / self.h + SNAP) as usize).min(self.counts[a] - 1);
            *range = (first, last);
        }
        let mut out = Vec::new();
        let axes = self.counts.len();
        let mut idx = [0usize; 4];
        for (a, r) in ranges.iter().enumerate().take(axes) {
            if r.0 > r.1 {
                return Ok(out);
            }
            idx[a] = r.0;
        }
        loop {
            let node = self.node(&idx[..axes]);
            if region.contains(&self.point(node), self.dim(), slack) {
                out.push(node);
            }
            let mut a = axes;
            loop {
                if a == 0 {
                    return Ok(out);
                }
                a -= 1;
                if idx[a] < ranges[a].1 {
                    idx[a] += 1;
                    break;
                }
                idx[a] = ranges[a].0;
            }
        }
    }

    /// Nodes at least `margin` nodes from every face.
    pub fn interior(&self, nodes: &[usize], margin: usize) -> Vec<usize> {
        nodes.iter().copied().filter(|&n| self.boundary_distance(n) >= margin).collect()
    }
}

/// Sub-box of a domain, optionally cut to `r_in ≤ ‖z‖ ≤ r_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub boxes: Vec<ComplexBox>,
    pub radii: Option<(f64, f64)>,
}

impl Region {
    pub fn boxed(boxes: Vec<ComplexBox>) -> Self {
        Self { boxes, radii: None }
    }

    pub fn shell(boxes: Vec<ComplexBox>, r_in: f64, r_out: f64) -> Self {
        Self { boxes, radii: Some((r_in, r_out)) }
    }

    fn axis_bounds(&self, axis: usize) -> (f64, f64) {
        let b = self.boxes[axis / 2];
        (b[2 * (axis % 2)], b[2 * (axis % 2) + 1])
    }

    pub fn contains(&self, p: &Point, dim: usize, slack: f64) -> bool {
        let in_box = (0..2 * dim).all(|a| {
            let (lo, hi) = self.axis_bounds(a);
            p[a] >= lo - slack && p[a] <= hi + slack
        });
        in_box
            && self.radii.is_none_or(|(r_in, r_out)| {
                let r = libm::sqrt(p[..2 * dim].iter().map(|x| x * x).sum::<f64>());
                r >= r_in - slack && r <= r_out + slack
            })
    }
}

/// Real values at the nodes of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain: GridDomain,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(domain: GridDomain, values: Vec<f64>) -> Result<Self, PshError> {
        if values.len() != domain.len() {
            return Err(PshError::ValueCount { expected: domain.len(), got: values.len() });
        }
        if let Some(node) = values.iter().position(|v| !v.is_finite()) {
            return Err(PshError::NonFinite { node });
        }
        Ok(Self { domain, values })
    }

    /// Samples `f` at every node.
    pub fn sample(domain: &GridDomain, f: impl Fn(&Point) -> f64) -> Result<Self, PshError> {
        let values = (0..domain.len()).map(|n| f(&domain.point(n))).collect();
        Self::new(domain.clone(), values)
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, node: usize) -> f64 {
        self.values[node]
    }

    /// `self + k·other`, same domain required.
    pub fn add_scaled(&self, other: &Self, k: f64) -> Result<Self, PshError> {
        if self.domain != other.domain {
            return Err(PshError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + k * b).collect();
        Ok(Self { domain: self.domain.clone(), values })
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self { domain: self.domain.clone(), values: self.values.iter().map(|v| k * v).collect() }
    }
}

/// Hermitian `N × N` matrix, `N ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian {
    n: usize,
    m: [[Complex64; 2]; 2],
}

impl Hermitian {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.m[j][k]
    }

    /// Ascending eigenvalues; for `N = 1` both entries are the single one.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.m[0][0].re;
        if self.n == 1 {
            return [a, a];
        }
        let d = self.m[1][1].re;
        let b = self.m[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = libm::hypot(0.5 * (a - d), b);
        [mean - radius, mean + radius]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn operator_norm(&self) -> f64 {
        let [lo, hi] = self.eigenvalues();
        lo.abs().max(hi.abs())
    }

    pub fn max_entry(&self) -> f64 {
        let mut out = 0.0f64;
        for j in 0..self.n {
            for k in 0..self.n {
                out = out.max(self.m[j][k].norm());
            }
        }
        out
    }

    /// `ξ* H ξ`.
    pub fn quadratic(&self, xi: &[Complex64]) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..self.n {
            for k in 0..self.n {
                s += xi[j].conj() * self.m[j][k] * xi[k];
            }
        }
        s.re
    }

    /// Smallest value of `ξ* H ξ / ‖ξ‖²` over `ξ` in the span of the
    /// columns of `jac` (an `n × cols` matrix); `None` if the span is 0.
    pub fn min_on_image(&self, jac: &[[Complex64; 2]; 2], cols: usize) -> Option<f64> {
        let column = |c: usize| [jac[0][c], jac[1][c]];
        let norm = |v: &[Complex64; 2]| libm::sqrt((0..self.n).map(|i| v[i].norm_sqr()).sum::<f64>());
        let mut basis: Vec<[Complex64; 2]> = Vec::new();
        for c in 0..cols {
            let mut v = column(c);
            for e in &basis {
                let dot: Complex64 = (0..self.n).map(|i| e[i].conj() * v[i]).sum();
                for i in 0..self.n {
                    v[i] -= dot * e[i];
                }
            }
            let len = norm(&v);
            let scale = norm(&column(c)).max(1.0);
            if len > 1e-12 * scale {
                basis.push([v[0] / len, v[1] / len]);
            }
        }
        match basis.len() {
            0 => None,
            1 => Some(self.quadratic(&basis[0])),
            _ => Some(self.min_eigenvalue()),
        }
    }
}

/// Complex Hessian `∂²f/∂z_j∂z̄_k` from values at integer offsets, scaled
/// by `h`. Mixed second derivatives use the symmetric four-point stencil and
/// are mirrored, so the result is Hermitian exactly.
pub fn hessian_stencil(dim: usize, h: f64, f: impl Fn([i32; 4]) -> f64) -> Hermitian {
    let axes = 2 * dim;
    let unit = |a: usize, s: i32| {
        let mut e = [0; 4];
        e[a] = s;
        e
    };
    let both = |a: usize, sa: i32, b: usize, sb: i32| {
        let mut e = [0; 4];
        e[a] = sa;
        e[b] = sb;
        e
    };
    let f0 = f([0; 4]);
    let h2 = h * h;
    let mut d = [[0.0; 4]; 4];
    for a in 0..axes {
        d[a][a] = (f(unit(a, 1)) - 2.0 * f0 + f(unit(a, -1))) / h2;
        for b in a + 1..axes {
            let v = (f(both(a, 1, b, 1)) - f(both(a, 1, b, -1)) - f(both(a, -1, b, 1)) + f(both(a, -1, b, -1))) / (4.0 * h2);
            d[a][b] = v;
            d[b][a] = v;
        }
    }
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for j in 0..dim {
        for k in 0..dim {
            let (xj, yj, xk, yk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            m[j][k] = Complex64::new(d[xj][xk] + d[yj][yk], d[xj][yk] - d[yj][xk]) * 0.25;
        }
    }
    Hermitian { n: dim, m }
}

/// `(∂f/∂z̄_k)_k` by central differences.
pub fn dbar_stencil(dim: usize, h: f64, f: impl Fn([i32; 4]) -> f64) -> [Complex64; 2] {
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (k, slot) in out.iter_mut().enumerate().take(dim) {
        let mut e = [0; 4];
        e[2 * k] = 1;
        let fx = {
            let plus = f(e);
            e[2 * k] = -1;
            (plus - f(e)) / (2.0 * h)
        };
        let mut e = [0; 4];
        e[2 * k + 1] = 1;
        let fy = {
            let plus = f(e);
            e[2 * k + 1] = -1;
            (plus - f(e)) / (2.0 * h)
        };
        *slot = Complex64::new(fx, fy) * 0.5;
    }
    out
}

pub(crate) fn norm2(v: &[Complex64; 2], dim: usize) -> f64 {
    libm::sqrt(v[..dim].iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Stencil Hessian of a function given pointwise.
pub fn field_hessian(dim: usize, h: f64, at: &Point, f: impl Fn(&Point) -> f64) -> Hermitian {
    hessian_stencil(dim, h, |s| f(&shifted(at, s, h)))
}

pub fn field_dbar(dim: usize, h: f64, at: &Point, f: impl Fn(&Point) -> f64) -> [Complex64; 2] {
    dbar_stencil(dim, h, |s| f(&shifted(at, s, h)))
}

fn shifted(at: &Point, s: [i32; 4], h: f64) -> Point {
    let mut p = *at;
    for a in 0..4 {
        p[a] += s[a] as f64 * h;
    }
    p
}

/// Nodes this close to a face are refused by [`complex_hessian`].
pub const BOUNDARY_MARGIN: usize = 2;

/// Complex Hessian of sampled values at `node`.
pub fn complex_hessian(f: &GridFunction, node: usize) -> Result<Hermitian, PshError> {
    let d = &f.domain;
    if node >= d.len() || d.boundary_distance(node) < BOUNDARY_MARGIN {
        return Err(PshError::NearBoundary { node });
    }
    Ok(hessian_stencil(d.dim(), d.h, |s| f.values[d.offset(node, s)]))
}

/// `∂f/∂z̄` of sampled values at an interior node.
pub fn dbar(f: &GridFunction, node: usize) -> Result<[Complex64; 2], PshError> {
    let d = &f.domain;
    if node >= d.len() || d.boundary_distance(node) < BOUNDARY_MARGIN {
        return Err(PshError::NearBoundary { node });
    }
    Ok(dbar_stencil(d.dim(), d.h, |s| f.values[d.offset(node, s)]))
}

/// Worst sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub node: usize,
    pub point: Point,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PshCheck {
    pub passed: bool,
    pub samples: usize,
    pub worst: Witness,
}

/// Minimum over `nodes` of the smallest Hessian eigenvalue.
pub fn min_eigenvalue_over(f: &GridFunction, nodes: &[usize]) -> Result<Option<Witness>, PshError> {
    let mut worst: Option<Witness> = None;
    for &n in nodes {
        let value = complex_hessian(f, n)?.min_eigenvalue();
        if worst.is_none_or(|w| value < w.value) {
            worst = Some(Witness { node: n, point: f.domain.point(n), value });
        }
    }
    Ok(worst)
}

fn region_nodes(f: &GridFunction, region: &Region) -> Result<Vec<usize>, PshError> {
    let nodes = f.domain.interior(&f.domain.nodes_in(region)?, BOUNDARY_MARGIN);
    if nodes.is_empty() {
        return Err(PshError::EmptyRegion);
    }
    Ok(nodes)
}

/// Smallest Hessian eigenvalue over the interior nodes of `region`
/// compared with `margin`.
pub fn is_strongly_psh(f: &GridFunction, region: &Region, margin: f64) -> Result<PshCheck, PshError> {
    let nodes = region_nodes(f, region)?;
    let worst = min_eigenvalue_over(f, &nodes)?.expect("nonempty");
    Ok(PshCheck { passed: worst.value >= margin, samples: nodes.len(), worst })
}

/// Largest Hessian entry over the interior nodes of `region` compared
/// with `tol`.
pub fn is_pluriharmonic(f: &GridFunction, region: &Region, tol: f64) -> Result<PshCheck, PshError> {
    let nodes = region_nodes(f, region)?;
    let worst = max_entry_over(f, &nodes)?.expect("nonempty");
    Ok(PshCheck { passed: worst.value <= tol, samples: nodes.len(), worst })
}

pub fn max_entry_over(f: &GridFunction, nodes: &[usize]) -> Result<Option<Witness>, PshError> {
    let mut worst: Option<Witness> = None;
    for &n in nodes {
        let value = complex_hessian(f, n)?.max_entry();
        if worst.is_none_or(|w| value > w.value) {
            worst = Some(Witness { node: n, point: f.domain.point(n), value });
        }
    }
    Ok(worst)
}
