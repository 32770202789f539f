use std::time::Instant;

use lckspace_core::psh::grid::{ComplexBox, GridDomain, Region};
use lckspace_core::psh::plan::{
    glue, plan_epsilon, tune_epsilon, verify_glued_psh, verify_plan, verify_plan_pointwise, SafetyFactors,
};
use lckspace_core::psh::wellrelated::{validate_well_related, SampledSpec, SourceChart, TargetChart, WellRelatedSpec};
use lckspace_core::psh::{FieldExpr, PolyMap};

fn expr(s: &str) -> FieldExpr {
    FieldExpr::parse(s).unwrap()
}

fn annulus(h: f64, phi: &str) -> WellRelatedSpec {
    let cut = |along: &str, across: &str| {
        expr(&format!("(1 - bump({along}, 0.15, 0.35)) * bump({along}, 1.6, 1.9) * bump(abs({across}), 1.5, 1.9)"))
    };
    let targets = vec![
        TargetChart { bounds: vec![[0.1, 2.0, -2.0, 2.0]], psi: expr("r2 + 1"), tau: cut("x", "y") },
        TargetChart { bounds: vec![[-2.0, -0.1, -2.0, 2.0]], psi: expr("r2 + 0.5*x + 2"), tau: cut("-x", "y") },
        TargetChart { bounds: vec![[-2.0, 2.0, 0.1, 2.0]], psi: expr("r2 - 0.3*y + 1.5"), tau: cut("y", "x") },
        TargetChart { bounds: vec![[-2.0, 2.0, -2.0, -0.1]], psi: expr("r2 + 0.2*x - 0.4*y + 1"), tau: cut("-y", "x") },
    ];
    let s = 1.6;
    let boxes: [(usize, ComplexBox); 8] = [
        (0, [0.0, s, -s, s]),
        (0, [-s, 0.0, -s, s]),
        (1, [-s, s, 0.0, s]),
        (1, [-s, s, -s, 0.0]),
        (2, [0.0, s, 0.0, s]),
        (2, [-s, 0.0, -s, 0.0]),
        (3, [-s, 0.0, 0.0, s]),
        (3, [0.0, s, -s, 0.0]),
    ];
    let charts = boxes.iter().map(|&(t, b)| SourceChart { target: t, bounds: vec![b], phi: expr(phi) }).collect();
    let q = 1.3;
    let regions = [[0.0, q, 0.0, q], [-q, 0.0, 0.0, q], [-q, 0.0, -q, 0.0], [0.0, q, -q, 0.0]]
        .into_iter()
        .map(|b| Region::shell(vec![b], 0.8, 1.2))
        .collect();
    WellRelatedSpec {
        source: GridDomain::new(vec![[-s, s, -s, s]], h).unwrap(),
        target: GridDomain::new(vec![[-2.8, 2.8, -2.8, 2.8]], h).unwrap(),
        map: PolyMap::power(2),
        targets,
        charts,
        regions,
    }
}

#[test]
fn square_map_annulus_pipeline() {
    let start = Instant::now();
    let spec = annulus(1.0 / 128.0, "r2 + 1");
    let report = validate_well_related(&spec, 1e-6).unwrap();
    assert!(report.passed(), "{report:?}");
    let sampled = SampledSpec::new(&spec).unwrap();
    let plan = plan_epsilon(&sampled, SafetyFactors::default()).unwrap();
    assert!(plan.epsilon.iter().all(|&e| e > 0.0));
    let grid = verify_plan(&sampled, &plan.epsilon).unwrap();
    assert!(grid.passed(), "{grid:?}");
    let fine = verify_plan_pointwise(&sampled, &plan.epsilon).unwrap();
    assert!(fine.passed(), "{fine:?}");
    let tuned = tune_epsilon(&sampled, &plan.epsilon, 1e-6, 1e-6).unwrap();
    assert_eq!(tuned.halvings, 0, "{:?}", tuned.check);
    assert!(tuned.check.passed(), "{:?}", tuned.check);
    let direct = verify_glued_psh(&sampled, &glue(&sampled, &plan.epsilon).unwrap(), 1e-6, 1e-6).unwrap();
    assert_eq!(direct, tuned.check);
    eprintln!("epsilon {:?}, {:?}, {:.1?}", plan.epsilon, tuned.check.min_eigenvalue, start.elapsed());
}

#[test]
fn corrupted_phi_fails_validation_with_witness() {
    let spec = annulus(1.0 / 32.0, "x + 3");
    let report = validate_well_related(&spec, 1e-6).unwrap();
    let fail = report.first_failure().unwrap();
    assert_eq!(fail.condition, 3);
    assert!(fail.witness.unwrap().value < 1e-6);
}
