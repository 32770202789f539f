use std::sync::Arc;

use lckspace_core::cech::pullback_function;
use lckspace_core::complex::elementary_homotopy_moves;
use lckspace_core::psh::family::ScaledFamily;
use lckspace_core::psh::grid::{is_pluriharmonic, GridDomain, GridFunction, Region};
use lckspace_core::psh::plan::{glue, overlap_difference};
use lckspace_core::psh::wellrelated::{SampledSpec, SourceChart, TargetChart, WellRelatedSpec};
use lckspace_core::psh::{FieldExpr, PolyMap};
use lckspace_core::random::{random_complex, random_cone, random_cover, random_form, random_function, random_path, subdivide};
use lckspace_core::{ClosedOneForm, CoveringMap, LogSum, Rational, Scalar};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn integral_ignores_chart_choice_and_representative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Arc::new(random_complex(&mut rng, 20));
        let cover = random_cover(&mut rng, k.clone());
        let form = random_form(&mut rng, cover);
        let fine = subdivide(&mut rng, &form);
        for _ in 0..4 {
            let p = random_path(&mut rng, &k, 10);
            let v = form.integrate(&p).unwrap();
            let last = form.integrate_with(&p, |_, c| *c.last().unwrap()).unwrap();
            let mut pick = ChaCha8Rng::seed_from_u64(seed ^ 1);
            let random = form.integrate_with(&p, |_, c| c[pick.gen_range(0..c.len())]).unwrap();
            prop_assert_eq!(&v, &last);
            prop_assert_eq!(&v, &random);
            prop_assert_eq!(&v, &fine.integrate(&p).unwrap());
        }
    }

    #[test]
    fn single_moves_keep_the_integral(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Arc::new(random_complex(&mut rng, 16));
        let cover = random_cover(&mut rng, k.clone());
        let form = random_form(&mut rng, cover);
        let p = random_path(&mut rng, &k, 8);
        let v = form.integrate(&p).unwrap();
        for q in elementary_homotopy_moves(&p, &k) {
            prop_assert_eq!(&form.integrate(&q).unwrap(), &v);
            // Moves are symmetric: p is one move away from q.
            prop_assert!(elementary_homotopy_moves(&q, &k).contains(&p));
        }
    }

    #[test]
    fn integrals_add_under_concatenation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Arc::new(random_complex(&mut rng, 20));
        let cover = random_cover(&mut rng, k.clone());
        let form = random_form(&mut rng, cover);
        let p = random_path(&mut rng, &k, 6);
        let mut q = random_path(&mut rng, &k, 6);
        let bridge = k.bfs_tree(p.end()).unwrap().path_from_root(q.start());
        q = lckspace_core::EdgePath::new(&k, bridge).unwrap().concat(&q).unwrap();
        let pq = p.concat(&q).unwrap();
        prop_assert_eq!(form.integrate(&pq).unwrap(), form.integrate(&p).unwrap() + form.integrate(&q).unwrap());
        prop_assert_eq!(form.integrate(&p.reversed()).unwrap(), -form.integrate(&p).unwrap());
    }

    #[test]
    fn cones_have_primitives(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Arc::new(random_cone(&mut rng, 12));
        let cover = random_cover(&mut rng, k.clone());
        let form = random_form(&mut rng, cover);
        let f = form.primitive_on_simply_connected(0).unwrap();
        prop_assert!(ClosedOneForm::differential(k, &f).unwrap().equivalent(&form).unwrap());
    }

    #[test]
    fn pullback_is_natural(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Arc::new(random_complex(&mut rng, 10));
        let map = CoveringMap::universal(k.clone(), 2).unwrap();
        let f = random_function(&mut rng, k.vertex_count());
        let df = ClosedOneForm::differential(k.clone(), &f).unwrap();
        let up = df.pullback(&map).unwrap().form;
        let d_up = ClosedOneForm::differential(map.total().clone(), &pullback_function(&map, &f)).unwrap();
        prop_assert!(up.equivalent(&d_up).unwrap());
        let cover = random_cover(&mut rng, k.clone());
        let form = random_form(&mut rng, cover);
        let pulled = form.pullback(&map).unwrap().form;
        for _ in 0..4 {
            let p = random_path(&mut rng, map.total(), 8);
            prop_assert_eq!(pulled.integrate(&p).unwrap(), form.integrate(&map.project_path(&p)).unwrap());
        }
    }

    #[test]
    fn real_parts_of_polynomials_are_pluriharmonic(coeffs in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 5)) {
        let h = 0.02;
        let d = GridDomain::new(vec![[-0.6, 0.6, -0.6, 0.6]], h).unwrap();
        let f = GridFunction::sample(&d, |p| {
            let z = Complex64::new(p[0], p[1]);
            coeffs.iter().enumerate().map(|(k, &(re, im))| (Complex64::new(re, im) * z.powu(k as u32)).re).sum()
        }).unwrap();
        let check = is_pluriharmonic(&f, &Region::boxed(vec![[-0.5, 0.5, -0.5, 0.5]]), 10.0 * h * h).unwrap();
        prop_assert!(check.passed, "{:?}", check.worst);
    }

    #[test]
    fn glue_is_affine_and_overlaps_cancel(e0 in 0.0f64..1.0, e1 in 0.0f64..1.0, t in -2.0f64..3.0, node in 0usize..1681) {
        let spec = two_charts();
        let sampled = SampledSpec::new(&spec).unwrap();
        let at = |e: [f64; 2]| glue(&sampled, &e).unwrap();
        let (a, b) = (at([e0, e1]), at([e0 + 0.5, e1]));
        let c = at([e0 + 0.5 * t, e1]);
        for chart in 0..2 {
            let (ya, yb, yc) = (a.chart(chart).value(node), b.chart(chart).value(node), c.chart(chart).value(node));
            prop_assert!((yc - (ya + t * (yb - ya))).abs() <= 1e-12 * (1.0 + ya.abs() + yb.abs()));
        }
        let da = overlap_difference(&a, 0, 1).unwrap();
        let dc = overlap_difference(&c, 0, 1).unwrap();
        prop_assert_eq!(da.values(), dc.values());
        prop_assert_eq!(da.value(node), sampled.pulled_psi(0).value(node) - sampled.pulled_psi(1).value(node));
    }

    #[test]
    fn family_actions_compose(num in -5i64..=5, den in 1u64..=4, m in 1usize..=8, j in -8i64..8, j2 in -8i64..8, k in 0i64..8) {
        let d = GridDomain::new(vec![[-1.0, 1.0, -1.0, 1.0]], 0.5).unwrap();
        let base = GridFunction::sample(&d, |p| p[0] * p[0] + 1.0).unwrap();
        let rho = LogSum::ln_int(3).unwrap().scale(num, den) + LogSum::ln_int(2).unwrap();
        let fam = ScaledFamily::new(base, rho, m).unwrap();
        prop_assert!(fam.equivariant(j, k));
        prop_assert!(fam.composes(j, j2, k));
    }
}

fn two_charts() -> WellRelatedSpec {
    let e = |s: &str| FieldExpr::parse(s).unwrap();
    let wide = [-1.0, 1.0, -1.0, 1.0];
    WellRelatedSpec {
        source: GridDomain::new(vec![wide], 0.05).unwrap(),
        target: GridDomain::new(vec![wide], 0.05).unwrap(),
        map: PolyMap::identity(1),
        targets: vec![
            TargetChart { bounds: vec![[-0.9, 0.3, -0.9, 0.9]], psi: e("r2"), tau: e("bump(abs(x + 0.3), 0.3, 0.55)*bump(abs(y), 0.5, 0.85)") },
            TargetChart { bounds: vec![[-0.3, 0.9, -0.9, 0.9]], psi: e("r2 + 0.7*x - y + 2"), tau: e("bump(abs(x - 0.3), 0.3, 0.55)*bump(abs(y), 0.5, 0.85)") },
        ],
        charts: vec![
            SourceChart { target: 0, bounds: vec![[-0.9, 0.3, -0.9, 0.9]], phi: e("r2 + 1") },
            SourceChart { target: 1, bounds: vec![[-0.3, 0.9, -0.9, 0.9]], phi: e("2*r2 + x + 3") },
        ],
        regions: vec![Region::boxed(vec![[-0.5, 0.5, -0.4, 0.4]])],
    }
}

#[test]
fn rational_scalars_stay_exact() {
    let a: Rational = Rational::from_i64(1);
    assert!(a.near(&Rational::from_i64(1)));
}
