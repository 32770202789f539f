//! Levi constants, the ε schedule, gluing and its verification.
//!
//! For a chart `α` with target `t`, at a source point `x` with `y = g(x)`,
//! `a = |∂g(x)ξ|` and `b = |ξ|`, the Levi form of the glued potential is
//! bounded below by `(P − B)a² − 2C·ab + Q·b²` with
//!
//! - `P` the Levi eigenvalue of `ψ_t` along the image of `∂g(x)`,
//! - `B = Σ 2ε_α τ_α b_α`, `C = Σ 2ε_α τ_α c_α`, `Q = Σ ε_α τ_α² q_α`,
//!
//! where `b_α = |φ_α|·‖Hτ_t(y)‖` and `c_α = |∂τ_t(y)|·|∂̄φ_α(x)|`.

use alloc::vec;
use alloc::vec::Vec;

use super::grid::{complex_hessian, field_dbar, field_hessian, max_entry_over, norm2, GridDomain, GridFunction, Point, BOUNDARY_MARGIN};
use super::poly::to_complex;
use super::wellrelated::{in_boxes, ChartWitness, SampledSpec};
use super::PshError;

/// Multipliers applied to swept constants: `p, q` shrink, `b, c` widen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyFactors {
    pub shrink: f64,
    pub widen: f64,
}

impl Default for SafetyFactors {
    fn default() -> Self {
        Self { shrink: 0.8, widen: 1.25 }
    }
}

/// Pointwise ingredients of the Levi bound for one chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLevi {
    pub p: Option<f64>,
    pub q: f64,
    pub b: f64,
    pub c: f64,
    pub tau: f64,
}

/// Ingredients at a source point for chart `chart`, from formula stencils
/// of spacing `h_src` (source) and `h_tgt` (target).
pub fn local_levi(sampled: &SampledSpec<'_>, chart: usize, x: &Point, h_src: f64, h_tgt: f64) -> LocalLevi {
    let spec = sampled.spec;
    let src = &spec.charts[chart];
    let tgt = &spec.targets[src.target];
    let (n, m) = (spec.source.dim(), spec.target.dim());
    let y = spec.map.eval_point(x);
    let jac = spec.map.jacobian(&to_complex(x));
    let p = field_hessian(m, h_tgt, &y, |p: &Point| tgt.psi.eval(p)).min_on_image(&jac, n);
    let q = field_hessian(n, h_src, x, |p: &Point| src.phi.eval(p)).min_eigenvalue();
    let phi = src.phi.eval(x);
    let b = phi.abs() * field_hessian(m, h_tgt, &y, |p: &Point| tgt.tau.eval(p)).operator_norm();
    let c = norm2(&field_dbar(m, h_tgt, &y, |p: &Point| tgt.tau.eval(p)), m) * norm2(&field_dbar(n, h_src, x, |p: &Point| src.phi.eval(p)), n);
    LocalLevi { p, q, b, c, tau: tgt.tau.eval(&y) }
}

fn in_chart_at(sampled: &SampledSpec<'_>, chart: usize, x: &Point) -> bool {
    let spec = sampled.spec;
    let src = &spec.charts[chart];
    let slack = 1e-9 * spec.source.h();
    in_boxes(x, &src.bounds, slack) && in_boxes(&spec.map.eval_point(x), &spec.targets[src.target].bounds, 1e-12)
}

/// Swept constants for a chart over a region, before and after the safety
/// factors.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviConstants {
    pub chart: usize,
    pub region: usize,
    pub samples: usize,
    /// Raw sweep values `[p, q, b, c]`.
    pub raw: [f64; 4],
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub c: f64,
}

/// Constants of `chart` over the samples of `region` where `χ_α > 0`;
/// `None` if the chart is not supported there.
pub fn levi_constants(
    sampled: &SampledSpec<'_>,
    chart: usize,
    region: usize,
    safety: SafetyFactors,
) -> Result<Option<LeviConstants>, PshError> {
    let d = sampled.domain();
    let (h_src, h_tgt) = (d.h(), sampled.spec.target.h());
    let mut raw = [f64::INFINITY, f64::INFINITY, 0.0, 0.0];
    let mut samples = 0;
    for node in sampled.region_nodes(region)? {
        if sampled.tau(chart, node) <= 0.0 {
            continue;
        }
        let x = d.point(node);
        let l = local_levi(sampled, chart, &x, h_src, h_tgt);
        let p = l.p.unwrap_or(f64::INFINITY);
        if p <= 0.0 || l.q <= 0.0 {
            return Err(PshError::NotStronglyPsh { chart, point: x, value: p.min(l.q) });
        }
        samples += 1;
        raw = [raw[0].min(p), raw[1].min(l.q), raw[2].max(l.b), raw[3].max(l.c)];
    }
    if samples == 0 {
        return Ok(None);
    }
    Ok(Some(LeviConstants {
        chart,
        region,
        samples,
        raw,
        p: safety.shrink * raw[0],
        q: safety.shrink * raw[1],
        b: safety.widen * raw[2],
        c: safety.widen * raw[3],
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonPlan {
    pub constants: Vec<LeviConstants>,
    /// `δ_L` per region.
    pub region_delta: Vec<f64>,
    /// `ε_α` per chart.
    pub epsilon: Vec<f64>,
}

/// `δ` for one region from its chart constants: first `B ≤ P/2`, then the
/// Cauchy–Schwarz bound with the explicit chart count.
pub fn region_delta(constants: &[LeviConstants]) -> f64 {
    if constants.is_empty() {
        return 1.0;
    }
    let n = constants.len() as f64;
    let p = constants.iter().map(|k| k.p).fold(f64::INFINITY, f64::min);
    let sum_b: f64 = constants.iter().map(|k| k.b).sum();
    let worst_cq = constants.iter().map(|k| k.c * k.c / k.q).fold(0.0, f64::max);
    let d1 = if sum_b > 0.0 { p / (4.0 * sum_b) } else { f64::INFINITY };
    let d2 = if worst_cq > 0.0 { p / (16.0 * n * worst_cq) } else { f64::INFINITY };
    d1.min(d2).min(1.0)
}

pub fn plan_epsilon(sampled: &SampledSpec<'_>, safety: SafetyFactors) -> Result<EpsilonPlan, PshError> {
    let charts = sampled.chart_count();
    let mut constants = Vec::new();
    let mut region_delta_v = Vec::new();
    let mut epsilon = vec![f64::INFINITY; charts];
    for r in 0..sampled.spec.regions.len() {
        let mut here = Vec::new();
        for a in 0..charts {
            if let Some(k) = levi_constants(sampled, a, r, safety)? {
                here.push(k);
            }
        }
        if here.is_empty() {
            return Err(PshError::UncoveredRegion { region: r });
        }
        let delta = region_delta(&here);
        for k in &here {
            epsilon[k.chart] = epsilon[k.chart].min(delta);
        }
        region_delta_v.push(delta);
        constants.extend(here);
    }
    let fallback = region_delta_v.iter().copied().fold(1.0, f64::min);
    for e in &mut epsilon {
        if !e.is_finite() {
            *e = fallback;
        }
    }
    Ok(EpsilonPlan { constants, region_delta: region_delta_v, epsilon })
}

/// Aggregates at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSample {
    pub point: Point,
    pub p: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
}

impl PlanSample {
    /// `B ≤ P/2` and `(P − B)Q > C²`.
    pub fn holds(&self) -> bool {
        self.b <= 0.5 * self.p && (self.p - self.b) * self.q > self.c * self.c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanCheck {
    pub samples: usize,
    pub failures: usize,
    pub worst: Option<PlanSample>,
}

impl PlanCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }
}

fn plan_sample(sampled: &SampledSpec<'_>, epsilon: &[f64], x: &Point, h_src: f64, h_tgt: f64) -> Option<PlanSample> {
    let mut s = PlanSample { point: *x, p: f64::INFINITY, b: 0.0, c: 0.0, q: 0.0 };
    let mut any = false;
    for (a, &eps) in epsilon.iter().enumerate() {
        if !in_chart_at(sampled, a, x) {
            continue;
        }
        let l = local_levi(sampled, a, x, h_src, h_tgt);
        if l.tau <= 0.0 {
            continue;
        }
        any = true;
        s.p = s.p.min(l.p.unwrap_or(f64::INFINITY));
        s.b += 2.0 * eps * l.tau * l.b;
        s.c += 2.0 * eps * l.tau * l.c;
        s.q += eps * l.tau * l.tau * l.q;
    }
    any.then_some(s)
}

fn check_points(sampled: &SampledSpec<'_>, epsilon: &[f64], points: impl Iterator<Item = Point>, h_src: f64) -> PlanCheck {
    let h_tgt = sampled.spec.target.h() * h_src / sampled.domain().h();
    let mut check = PlanCheck { samples: 0, failures: 0, worst: None };
    let mut worst_gap = f64::INFINITY;
    for x in points {
        check.samples += 1;
        let Some(s) = plan_sample(sampled, epsilon, &x, h_src, h_tgt) else {
            check.failures += 1;
            worst_gap = f64::NEG_INFINITY;
            check.worst = Some(PlanSample { point: x, p: 0.0, b: 0.0, c: 0.0, q: 0.0 });
            continue;
        };
        if !s.holds() {
            check.failures += 1;
        }
        let gap = ((s.p - s.b) * s.q - s.c * s.c).min(0.5 * s.p - s.b);
        if gap < worst_gap {
            worst_gap = gap;
            check.worst = Some(s);
        }
    }
    check
}

/// The plan inequality at every region sample of the grid.
pub fn verify_plan(sampled: &SampledSpec<'_>, epsilon: &[f64]) -> Result<PlanCheck, PshError> {
    let d = sampled.domain();
    let mut nodes = Vec::new();
    for r in 0..sampled.spec.regions.len() {
        nodes.extend(sampled.region_nodes(r)?);
    }
    nodes.sort_unstable();
    nodes.dedup();
    Ok(check_points(sampled, epsilon, nodes.into_iter().map(|n| d.point(n)), d.h()))
}

/// The plan inequality on a lattice twice as fine as the grid, with
/// stencils at the finer spacing, recomputed from the formulas.
pub fn verify_plan_pointwise(sampled: &SampledSpec<'_>, epsilon: &[f64]) -> Result<PlanCheck, PshError> {
    let d = sampled.domain();
    let fine = GridDomain::new(d.boxes().to_vec(), 0.5 * d.h())?;
    let mut nodes = Vec::new();
    for region in &sampled.spec.regions {
        nodes.extend(fine.interior(&fine.nodes_in(region)?, 2 * BOUNDARY_MARGIN));
    }
    nodes.sort_unstable();
    nodes.dedup();
    Ok(check_points(sampled, epsilon, nodes.into_iter().map(|n| fine.point(n)), fine.h()))
}

/// `φ_ε = Σ ε_α χ_α φ_α` and the per-chart `φ^ε_α = ψ_α ∘ g + φ_ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedPotential {
    pub epsilon: Vec<f64>,
    pub phi_eps: GridFunction,
    pulled_psi: Vec<GridFunction>,
    charts: Vec<GridFunction>,
}

impl GluedPotential {
    pub fn chart(&self, a: usize) -> &GridFunction {
        &self.charts[a]
    }

    pub fn charts(&self) -> &[GridFunction] {
        &self.charts
    }
}

pub fn glue(sampled: &SampledSpec<'_>, epsilon: &[f64]) -> Result<GluedPotential, PshError> {
    if epsilon.len() != sampled.chart_count() {
        return Err(PshError::ValueCount { expected: sampled.chart_count(), got: epsilon.len() });
    }
    let d = sampled.domain();
    let mut sum = vec![0.0; d.len()];
    for (a, &eps) in epsilon.iter().enumerate() {
        let phi = sampled.phi(a);
        for (n, s) in sum.iter_mut().enumerate() {
            let chi = sampled.chi(a, n);
            if chi > 0.0 {
                *s += eps * chi * phi.value(n);
            }
        }
    }
    let phi_eps = GridFunction::new(d.clone(), sum)?;
    let pulled_psi: Vec<GridFunction> = (0..sampled.chart_count()).map(|a| sampled.pulled_psi(a).clone()).collect();
    let charts = pulled_psi.iter().map(|p| p.add_scaled(&phi_eps, 1.0)).collect::<Result<_, _>>()?;
    Ok(GluedPotential { epsilon: epsilon.to_vec(), phi_eps, pulled_psi, charts })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlueCheck {
    pub samples: usize,
    pub min_eigenvalue: f64,
    pub worst: Option<ChartWitness>,
    /// Largest Hessian entry of `φ^ε_α − φ^ε_β` on overlaps.
    pub overlap_max: f64,
    pub margin: f64,
    pub overlap_tol: f64,
}

impl GlueCheck {
    pub fn psh_passed(&self) -> bool {
        self.samples > 0 && self.min_eigenvalue >= self.margin
    }

    pub fn overlaps_passed(&self) -> bool {
        self.overlap_max <= self.overlap_tol
    }

    pub fn passed(&self) -> bool {
        self.psh_passed() && self.overlaps_passed()
    }
}

/// Levi eigenvalues of each `φ^ε_α` on the sampled support of `χ_α`, and
/// pluriharmonicity of the overlap differences.
pub fn verify_glued_psh(sampled: &SampledSpec<'_>, glued: &GluedPotential, margin: f64, overlap_tol: f64) -> Result<GlueCheck, PshError> {
    let d = sampled.domain();
    let mut check =
        GlueCheck { samples: 0, min_eigenvalue: f64::INFINITY, worst: None, overlap_max: 0.0, margin, overlap_tol };
    let supports: Vec<Vec<usize>> = (0..sampled.chart_count()).map(|a| sampled.support(a)).collect();
    for (a, nodes) in supports.iter().enumerate() {
        let f = glued.chart(a);
        for &n in nodes {
            let value = complex_hessian(f, n)?.min_eigenvalue();
            check.samples += 1;
            if value < check.min_eigenvalue {
                check.min_eigenvalue = value;
                check.worst = Some(ChartWitness { chart: a, point: d.point(n), value });
            }
        }
    }
    let interior: Vec<usize> = d.interior(&(0..d.len()).collect::<Vec<_>>(), BOUNDARY_MARGIN);
    for a in 0..sampled.chart_count() {
        for b in a + 1..sampled.chart_count() {
            let common: Vec<usize> = interior.iter().copied().filter(|&n| sampled.in_chart(a, n) && sampled.in_chart(b, n)).collect();
            if common.is_empty() {
                continue;
            }
            let diff = overlap_difference(glued, a, b)?;
            if let Some(w) = max_entry_over(&diff, &common)? {
                check.overlap_max = check.overlap_max.max(w.value);
            }
        }
    }
    Ok(check)
}

/// `φ^ε_α − φ^ε_β`, formed as `ψ_α ∘ g − ψ_β ∘ g` so the `φ_ε` term cancels
/// exactly.
pub fn overlap_difference(glued: &GluedPotential, a: usize, b: usize) -> Result<GridFunction, PshError> {
    let (fa, fb) = (&glued.pulled_psi[a], &glued.pulled_psi[b]);
    if fa.domain() != fb.domain() {
        return Err(PshError::GridMismatch);
    }
    fa.add_scaled(fb, -1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tuned {
    pub epsilon: Vec<f64>,
    pub halvings: usize,
    pub check: GlueCheck,
    pub glued: GluedPotential,
}

pub const MAX_HALVINGS: usize = 40;

/// Halves every `ε_α` until the glued potentials verify, at most
/// [`MAX_HALVINGS`] times. The last attempt is returned either way.
pub fn tune_epsilon(sampled: &SampledSpec<'_>, start: &[f64], margin: f64, overlap_tol: f64) -> Result<Tuned, PshError> {
    let mut epsilon = start.to_vec();
    let mut halvings = 0;
    loop {
        let glued = glue(sampled, &epsilon)?;
        let check = verify_glued_psh(sampled, &glued, margin, overlap_tol)?;
        if check.passed() || halvings == MAX_HALVINGS {
            return Ok(Tuned { epsilon, halvings, check, glued });
        }
        epsilon.iter_mut().for_each(|e| *e *= 0.5);
        halvings += 1;
    }
}
