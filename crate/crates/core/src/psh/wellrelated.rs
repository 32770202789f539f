//! Well-related covers of a source and a target box along a polynomial map,
//! sampled on grids.
//!
//! A source chart `U_α` is the part of the sampled preimage `g⁻¹(V_t)` lying
//! in the chart's box, where `t` is the chart's target. Charts sharing a
//! target share `ψ` and `τ`; each has its own `φ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::expr::FieldExpr;
use super::grid::{complex_hessian, ComplexBox, GridDomain, GridFunction, Point, Region, BOUNDARY_MARGIN};
use super::poly::PolyMap;
use super::PshError;

#[derive(Debug, Clone, PartialEq)]
pub struct TargetChart {
    /// `V_t`, one box per target coordinate.
    pub bounds: Vec<ComplexBox>,
    pub psi: FieldExpr,
    /// Cut-off, 1 near the image of the chart's compact core.
    pub tau: FieldExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceChart {
    pub target: usize,
    pub bounds: Vec<ComplexBox>,
    pub phi: FieldExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellRelatedSpec {
    pub source: GridDomain,
    pub target: GridDomain,
    pub map: PolyMap,
    pub targets: Vec<TargetChart>,
    pub charts: Vec<SourceChart>,
    /// Compact pieces of the source on which the gluing is planned.
    pub regions: Vec<Region>,
}

impl WellRelatedSpec {
    pub fn check_shape(&self) -> Result<(), PshError> {
        let (n, m) = (self.source.dim(), self.target.dim());
        if self.map.dim_in() != n || self.map.dim_out() != m {
            return Err(PshError::MapDimension { dim_in: self.map.dim_in(), dim_out: self.map.dim_out() });
        }
        for (t, chart) in self.targets.iter().enumerate() {
            if chart.bounds.len() != m || chart.psi.dimension_used() > m || chart.tau.dimension_used() > m {
                return Err(PshError::ChartShape { chart: t });
            }
        }
        for (a, chart) in self.charts.iter().enumerate() {
            if chart.target >= self.targets.len() {
                return Err(PshError::ChartTarget { chart: a, target: chart.target });
            }
            if chart.bounds.len() != n || chart.phi.dimension_used() > n {
                return Err(PshError::ChartShape { chart: a });
            }
        }
        for r in &self.regions {
            if r.boxes.len() != n {
                return Err(PshError::Dimension(r.boxes.len()));
            }
        }
        Ok(())
    }
}

pub(crate) fn in_boxes(p: &Point, boxes: &[ComplexBox], slack: f64) -> bool {
    boxes.iter().enumerate().all(|(k, b)| {
        let (re, im) = (p[2 * k], p[2 * k + 1]);
        re >= b[0] - slack && re <= b[1] + slack && im >= b[2] - slack && im <= b[3] + slack
    })
}

fn boxes_inside(inner: &[ComplexBox], outer: &GridDomain) -> bool {
    let slack = 1e-9 * outer.h();
    inner.iter().zip(outer.boxes()).all(|(i, o)| i[0] >= o[0] - slack && i[1] <= o[1] + slack && i[2] >= o[2] - slack && i[3] <= o[3] + slack)
}

/// Grid data shared by validation, planning and gluing.
#[derive(Debug, Clone)]
pub struct SampledSpec<'a> {
    pub spec: &'a WellRelatedSpec,
    images: Vec<Point>,
    preimage: Vec<Vec<bool>>,
    masks: Vec<Vec<bool>>,
    phi: Vec<GridFunction>,
    pulled_psi: Vec<GridFunction>,
    tau: Vec<Vec<f64>>,
}

impl<'a> SampledSpec<'a> {
    pub fn new(spec: &'a WellRelatedSpec) -> Result<Self, PshError> {
        spec.check_shape()?;
        let src = &spec.source;
        let images: Vec<Point> = (0..src.len()).map(|n| spec.map.eval_point(&src.point(n))).collect();
        let slack = 1e-12;
        let preimage: Vec<Vec<bool>> =
            spec.targets.iter().map(|t| images.iter().map(|y| in_boxes(y, &t.bounds, slack)).collect()).collect();
        let slack = 1e-9 * src.h();
        let masks: Vec<Vec<bool>> = spec
            .charts
            .iter()
            .map(|c| (0..src.len()).map(|n| preimage[c.target][n] && in_boxes(&src.point(n), &c.bounds, slack)).collect())
            .collect();
        let phi = spec.charts.iter().map(|c| GridFunction::sample(src, |p| c.phi.eval(p))).collect::<Result<Vec<_>, _>>()?;
        let pulled_psi = spec
            .charts
            .iter()
            .map(|c| {
                let psi = &spec.targets[c.target].psi;
                let values = images.iter().map(|y| psi.eval(y)).collect();
                GridFunction::new(src.clone(), values)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tau = spec
            .charts
            .iter()
            .zip(&masks)
            .map(|(c, mask)| {
                let t = &spec.targets[c.target].tau;
                images.iter().zip(mask).map(|(y, &inside)| if inside { t.eval(y) } else { 0.0 }).collect()
            })
            .collect();
        Ok(Self { spec, images, preimage, masks, phi, pulled_psi, tau })
    }

    pub fn domain(&self) -> &GridDomain {
        &self.spec.source
    }

    pub fn chart_count(&self) -> usize {
        self.spec.charts.len()
    }

    pub fn image(&self, node: usize) -> &Point {
        &self.images[node]
    }

    pub fn in_chart(&self, chart: usize, node: usize) -> bool {
        self.masks[chart][node]
    }

    pub fn mask(&self, chart: usize) -> &[bool] {
        &self.masks[chart]
    }

    pub fn phi(&self, chart: usize) -> &GridFunction {
        &self.phi[chart]
    }

    /// `ψ_t ∘ g` for the chart's target `t`.
    pub fn pulled_psi(&self, chart: usize) -> &GridFunction {
        &self.pulled_psi[chart]
    }

    /// `τ_t ∘ g` on the chart, 0 off it.
    pub fn tau(&self, chart: usize, node: usize) -> f64 {
        self.tau[chart][node]
    }

    /// `χ = (τ ∘ g)²` on the chart, 0 off it.
    pub fn chi(&self, chart: usize, node: usize) -> f64 {
        let t = self.tau[chart][node];
        t * t
    }

    /// Interior nodes of the chart where `χ > 0`.
    pub fn support(&self, chart: usize) -> Vec<usize> {
        (0..self.domain().len())
            .filter(|&n| self.tau[chart][n] > 0.0 && self.domain().boundary_distance(n) >= BOUNDARY_MARGIN)
            .collect()
    }

    /// Interior nodes of region `r`.
    pub fn region_nodes(&self, r: usize) -> Result<Vec<usize>, PshError> {
        let d = self.domain();
        Ok(d.interior(&d.nodes_in(&self.spec.regions[r])?, BOUNDARY_MARGIN))
    }

    /// Components of the sampled preimage of target `t`, by flood fill along
    /// the `2N` axes. Nodes outside the preimage get `usize::MAX`.
    pub fn preimage_components(&self, t: usize) -> Vec<usize> {
        let d = self.domain();
        let inside = &self.preimage[t];
        let mut label = vec![usize::MAX; d.len()];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..d.len() {
            if !inside[start] || label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(n) = stack.pop() {
                for axis in 0..2 * d.dim() {
                    for delta in [-1, 1] {
                        if let Some(m) = d.neighbor(n, axis, delta) {
                            if inside[m] && label[m] == usize::MAX {
                                label[m] = next;
                                stack.push(m);
                            }
                        }
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// Failing sample of a condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartWitness {
    pub chart: usize,
    pub point: Point,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionOutcome {
    /// 1 to 4, in the order of the definition.
    pub condition: u8,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<ChartWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellRelatedReport {
    pub conditions: Vec<ConditionOutcome>,
}

impl WellRelatedReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ConditionOutcome> {
        self.conditions.iter().find(|c| !c.passed)
    }
}

fn outcome(condition: u8, failure: Option<(String, ChartWitness)>, ok: String) -> ConditionOutcome {
    match failure {
        Some((detail, w)) => ConditionOutcome { condition, passed: false, detail, witness: Some(w) },
        None => ConditionOutcome { condition, passed: true, detail: ok, witness: None },
    }
}

/// Checks the four conditions. `margin` is the smallest accepted Hessian
/// eigenvalue for "strongly psh".
pub fn validate_well_related(spec: &WellRelatedSpec, margin: f64) -> Result<WellRelatedReport, PshError> {
    let sampled = SampledSpec::new(spec)?;
    validate_sampled(&sampled, margin)
}

pub fn validate_sampled(sampled: &SampledSpec<'_>, margin: f64) -> Result<WellRelatedReport, PshError> {
    let spec = sampled.spec;
    let conditions = vec![
        condition_one(spec, margin)?,
        condition_two(sampled)?,
        condition_three(sampled, margin)?,
        condition_four(sampled),
    ];
    Ok(WellRelatedReport { conditions })
}

/// `ψ_t` strongly psh on `V_t`; `τ_t ≥ 0` and vanishing on the edge of `V_t`.
fn condition_one(spec: &WellRelatedSpec, margin: f64) -> Result<ConditionOutcome, PshError> {
    let h = spec.target.h();
    let pad = BOUNDARY_MARGIN as f64 * h;
    let mut samples = 0;
    for (t, chart) in spec.targets.iter().enumerate() {
        let grown = chart.bounds.iter().map(|b| [b[0] - pad, b[1] + pad, b[2] - pad, b[3] + pad]).collect();
        let d = GridDomain::new(grown, h)?;
        let psi = GridFunction::sample(&d, |p| chart.psi.eval(p))?;
        for n in d.interior(&(0..d.len()).collect::<Vec<_>>(), BOUNDARY_MARGIN) {
            let p = d.point(n);
            let value = complex_hessian(&psi, n)?.min_eigenvalue();
            samples += 1;
            if value < margin {
                let w = ChartWitness { chart: t, point: p, value };
                return Ok(outcome(1, Some((format!("psi of target {t} has Levi eigenvalue {value:e}"), w)), String::new()));
            }
            let tau = chart.tau.eval(&p);
            let on_edge = d.boundary_distance(n) == BOUNDARY_MARGIN;
            if tau < -1e-12 || (on_edge && tau.abs() > 1e-12) {
                let w = ChartWitness { chart: t, point: p, value: tau };
                return Ok(outcome(1, Some((format!("tau of target {t} is not supported in its box"), w)), String::new()));
            }
        }
    }
    Ok(outcome(1, None, format!("{} targets, {samples} samples", spec.targets.len())))
}

/// Boxes sit inside their domains, and the cores `{τ ∘ g = 1}` cover every
/// region sample.
fn condition_two(sampled: &SampledSpec<'_>) -> Result<ConditionOutcome, PshError> {
    let spec = sampled.spec;
    let origin = [0.0; 4];
    for (t, chart) in spec.targets.iter().enumerate() {
        if !boxes_inside(&chart.bounds, &spec.target) {
            let w = ChartWitness { chart: t, point: origin, value: 0.0 };
            return Ok(outcome(2, Some((format!("target box {t} leaves the target domain"), w)), String::new()));
        }
    }
    for (a, chart) in spec.charts.iter().enumerate() {
        if !boxes_inside(&chart.bounds, &spec.source) {
            let w = ChartWitness { chart: a, point: origin, value: 0.0 };
            return Ok(outcome(2, Some((format!("source box {a} leaves the source domain"), w)), String::new()));
        }
    }
    let mut samples = 0;
    for r in 0..spec.regions.len() {
        for n in sampled.region_nodes(r)? {
            samples += 1;
            let covered = (0..sampled.chart_count()).any(|a| sampled.tau(a, n) >= 1.0 - 1e-12);
            if !covered {
                let best = (0..sampled.chart_count()).map(|a| sampled.tau(a, n)).fold(0.0, f64::max);
                let w = ChartWitness { chart: r, point: sampled.domain().point(n), value: best };
                return Ok(outcome(2, Some((format!("region {r} sample outside every core"), w)), String::new()));
            }
        }
    }
    Ok(outcome(2, None, format!("{} charts, {samples} region samples covered", spec.charts.len())))
}

/// `φ_α` strongly psh and positive on `U_α`.
fn condition_three(sampled: &SampledSpec<'_>, margin: f64) -> Result<ConditionOutcome, PshError> {
    let d = sampled.domain();
    for a in 0..sampled.chart_count() {
        let phi = sampled.phi(a);
        for n in (0..d.len()).filter(|&n| sampled.in_chart(a, n)) {
            let p = d.point(n);
            if phi.value(n) <= 0.0 {
                let w = ChartWitness { chart: a, point: p, value: phi.value(n) };
                return Ok(outcome(3, Some((format!("phi of chart {a} is not positive"), w)), String::new()));
            }
            if d.boundary_distance(n) < BOUNDARY_MARGIN {
                continue;
            }
            let value = complex_hessian(phi, n)?.min_eigenvalue();
            if value < margin {
                let w = ChartWitness { chart: a, point: p, value };
                return Ok(outcome(3, Some((format!("phi of chart {a} has Levi eigenvalue {value:e}"), w)), String::new()));
            }
        }
    }
    Ok(outcome(3, None, format!("{} charts", sampled.chart_count())))
}

/// Each chart is one whole component of the sampled preimage of its target.
fn condition_four(sampled: &SampledSpec<'_>) -> ConditionOutcome {
    let spec = sampled.spec;
    let d = sampled.domain();
    let labels: Vec<Vec<usize>> = (0..spec.targets.len()).map(|t| sampled.preimage_components(t)).collect();
    for (a, chart) in spec.charts.iter().enumerate() {
        let label = &labels[chart.target];
        let nodes: Vec<usize> = (0..d.len()).filter(|&n| sampled.in_chart(a, n)).collect();
        let Some(&first) = nodes.first() else {
            let w = ChartWitness { chart: a, point: [0.0; 4], value: 0.0 };
            return outcome(4, Some((format!("chart {a} meets no preimage sample"), w)), String::new());
        };
        let id = label[first];
        if let Some(&n) = nodes.iter().find(|&&n| label[n] != id) {
            let w = ChartWitness { chart: a, point: d.point(n), value: label[n] as f64 };
            return outcome(4, Some((format!("chart {a} spans several preimage components"), w)), String::new());
        }
        if let Some(n) = (0..d.len()).find(|&n| label[n] == id && !sampled.in_chart(a, n)) {
            let w = ChartWitness { chart: a, point: d.point(n), value: id as f64 };
            return outcome(4, Some((format!("chart {a} cuts its preimage component"), w)), String::new());
        }
    }
    outcome(4, None, format!("{} charts are preimage components", spec.charts.len()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn expr(s: &str) -> FieldExpr {
        FieldExpr::parse(s).unwrap()
    }

    fn identity_spec(phi: &str) -> WellRelatedSpec {
        let unit = [-1.0, 1.0, -1.0, 1.0];
        let wide = [-1.5, 1.5, -1.5, 1.5];
        WellRelatedSpec {
            source: GridDomain::new(vec![wide], 0.05).unwrap(),
            target: GridDomain::new(vec![wide], 0.05).unwrap(),
            map: PolyMap::identity(1),
            targets: vec![TargetChart { bounds: vec![unit], psi: expr("r2 + 1"), tau: expr("bump(max(abs(x), abs(y)), 0.6, 0.95)") }],
            charts: vec![SourceChart { target: 0, bounds: vec![unit], phi: expr(phi) }],
            regions: vec![Region::boxed(vec![[-0.5, 0.5, -0.5, 0.5]])],
        }
    }

    #[test]
    fn identity_toy_passes() {
        let report = validate_well_related(&identity_spec("r2 + 1"), 1e-6).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn non_psh_phi_fails_condition_three_with_witness() {
        let report = validate_well_related(&identity_spec("x + 3"), 1e-6).unwrap();
        let fail = report.first_failure().unwrap();
        assert_eq!(fail.condition, 3);
        let w = fail.witness.unwrap();
        assert_eq!(w.chart, 0);
        assert!(w.value.abs() < 1e-6);
    }

    fn square_spec(chart_box: ComplexBox) -> WellRelatedSpec {
        WellRelatedSpec {
            source: GridDomain::new(vec![[-1.6, 1.6, -1.6, 1.6]], 1.0 / 32.0).unwrap(),
            target: GridDomain::new(vec![[-2.8, 2.8, -2.8, 2.8]], 1.0 / 32.0).unwrap(),
            map: PolyMap::power(2),
            targets: vec![TargetChart { bounds: vec![[0.5, 1.5, -0.5, 0.5]], psi: expr("r2"), tau: expr("bump(abs(x - 1) + abs(y), 0.2, 0.45)") }],
            charts: vec![SourceChart { target: 0, bounds: vec![chart_box], phi: expr("r2 + 1") }],
            regions: Vec::new(),
        }
    }

    #[test]
    fn one_preimage_component_passes_condition_four() {
        let report = validate_well_related(&square_spec([0.0, 1.6, -1.6, 1.6]), 1e-6).unwrap();
        assert!(report.conditions[3].passed, "{report:?}");
        let sampled_spec = square_spec([0.0, 1.6, -1.6, 1.6]);
        let sampled = SampledSpec::new(&sampled_spec).unwrap();
        let labels = sampled.preimage_components(0);
        let count = labels.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap() + 1;
        assert_eq!(count, 2);
    }

    #[test]
    fn merged_components_fail_condition_four() {
        let report = validate_well_related(&square_spec([-1.6, 1.6, -1.6, 1.6]), 1e-6).unwrap();
        let c4 = &report.conditions[3];
        assert!(!c4.passed);
        assert!(c4.witness.is_some());
    }

    #[test]
    fn cut_component_fails_condition_four() {
        let report = validate_well_related(&square_spec([0.0, 1.0, -1.6, 1.6]), 1e-6).unwrap();
        assert!(!report.conditions[3].passed);
    }

    #[test]
    fn bad_target_index_is_a_shape_error() {
        let mut spec = identity_spec("r2 + 1");
        spec.charts[0].target = 3;
        assert_eq!(validate_well_related(&spec, 1e-6).unwrap_err(), PshError::ChartTarget { chart: 0, target: 3 });
    }
}
