use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use okmult::ideal_arith::{factor_ideal, ideal_from_generators, ideal_mul, principal, ClassGroup};
use okmult::mult_funcs::{extensions_of, ElementFn, IdealFn};
use okmult::regularity::{
    a_delta_average, discriminants, folner_box, folner_defect, pythagorean_parametrization, reduce_form, s_q_member,
    sqrt_in_ring, weight_average, weight_w_delta, Coloring, FolnerSpec, Pair, ParamSolution, QuadraticForm,
};
use okmult::{QuadField, QuadInt};
use proptest::prelude::*;

const FIELDS: [i64; 6] = [1, 2, 3, 5, 6, 23];

fn field_strategy() -> impl Strategy<Value = QuadField> {
    prop::sample::select(FIELDS.to_vec()).prop_map(|d| QuadField::new(d).unwrap())
}

fn element(bound: i128) -> impl Strategy<Value = QuadInt> {
    (-bound..=bound, -bound..=bound).prop_map(|(x, y)| QuadInt::new(x, y))
}

fn nonzero(bound: i128) -> impl Strategy<Value = QuadInt> {
    element(bound).prop_filter("nonzero", |u| !u.is_zero())
}

fn class_group(d: i64) -> Arc<ClassGroup> {
    static GROUPS: OnceLock<Vec<(i64, Arc<ClassGroup>)>> = OnceLock::new();
    let groups = GROUPS.get_or_init(|| {
        [1, 5, 23].into_iter().map(|d| (d, Arc::new(ClassGroup::compute(&QuadField::new(d).unwrap(), None)))).collect()
    });
    Arc::clone(&groups.iter().find(|(e, _)| *e == d).expect("precomputed field").1)
}

fn pythagorean() -> &'static ParamSolution {
    static SOL: OnceLock<ParamSolution> = OnceLock::new();
    SOL.get_or_init(|| pythagorean_parametrization(&QuadField::new(1).unwrap(), 1, 1, -1).unwrap().to_solution())
}

fn gaussian_window() -> &'static FolnerSpec {
    static SPEC: OnceLock<FolnerSpec> = OnceLock::new();
    SPEC.get_or_init(|| folner_box(&QuadField::new(1).unwrap(), &class_group(1), 4).unwrap())
}

proptest! {
    #[test]
    fn norm_is_multiplicative(f in field_strategy(), u in element(1000), v in element(1000)) {
        prop_assert_eq!(f.norm(f.mul(u, v)), f.norm(u) * f.norm(v));
    }

    #[test]
    fn conjugate_times_self_is_norm(f in field_strategy(), u in element(1000)) {
        prop_assert_eq!(f.mul(u, f.conj(u)), QuadInt::int(f.norm(u)));
        prop_assert_eq!(f.conj(f.conj(u)), u);
        prop_assert_eq!(f.trace(u), (u + f.conj(u)).x);
    }

    #[test]
    fn exact_division_inverts_multiplication(f in field_strategy(), u in element(300), v in nonzero(300)) {
        prop_assert_eq!(f.divide_exact(f.mul(u, v), v).unwrap(), u);
    }

    #[test]
    fn factorization_multiplies_back(f in field_strategy(), u in nonzero(60), v in element(60)) {
        let ideal = ideal_from_generators(&f, &[u, v]).unwrap();
        let fac = factor_ideal(&f, &ideal);
        prop_assert_eq!(fac.product(&f), ideal);
        prop_assert_eq!(fac.norm(), ideal.norm());
    }

    #[test]
    fn principal_norm_matches_element(f in field_strategy(), u in nonzero(200), v in nonzero(200)) {
        prop_assert_eq!(principal(&f, u).norm(), f.norm(u));
        prop_assert_eq!(ideal_mul(&f, &principal(&f, u), &principal(&f, v)), principal(&f, f.mul(u, v)));
    }

    #[test]
    fn extensions_agree_and_multiply(
        d in prop::sample::select(vec![1i64, 5, 23]),
        tau in -2.0f64..2.0,
        gens in prop::collection::vec((nonzero(25), element(25)), 2),
        u in nonzero(40),
    ) {
        let cg = class_group(d);
        let field = *cg.field();
        let base = ElementFn::Archimedean(tau);
        let exts = extensions_of(&cg, &base).unwrap();
        prop_assert_eq!(exts.len(), cg.class_number());
        let i = ideal_from_generators(&field, &[gens[0].0, gens[0].1]).unwrap();
        let j = ideal_from_generators(&field, &[gens[1].0, gens[1].1]).unwrap();
        for g in &exts {
            let on_element = g.eval(&field, &principal(&field, u)) - base.eval(&field, u);
            prop_assert!(on_element.norm() < 1e-9);
            let product = g.eval(&field, &ideal_mul(&field, &i, &j)) - g.eval(&field, &i) * g.eval(&field, &j);
            prop_assert!(product.norm() < 1e-9);
        }
    }

    #[test]
    fn distance_to_itself_is_zero(tau in -3.0f64..3.0) {
        let cg = class_group(1);
        let g = IdealFn::NormPower(tau);
        let dist = okmult::mult_funcs::pretentious_distance(cg.field(), &g, &g, 2, 2000);
        prop_assert!(dist.abs() < 1e-12);
    }

    #[test]
    fn discriminant_identity(coeffs in prop::array::uniform6(-40i128..=40)) {
        let [a, b, c, e, f, g] = coeffs;
        let q = QuadraticForm::new(a, b, c, e, f, g);
        let dq = discriminants(&q);
        prop_assert_eq!(dq.identity_lhs(), 16 * dq.d4);
        prop_assert!(dq.identity_holds());
    }

    #[test]
    fn square_roots_square_back(f in field_strategy(), n in -5000i128..5000) {
        if let Some(r) = sqrt_in_ring(&f, n) {
            prop_assert_eq!(f.mul(r, r), QuadInt::int(n));
        }
    }

    #[test]
    fn square_roots_found(f in field_strategy(), k in 0i128..70, negative in any::<bool>()) {
        let n = if negative { -(f.d() as i128) * k * k } else { k * k };
        let r = sqrt_in_ring(&f, n);
        prop_assert!(r.is_some());
        let r = r.unwrap();
        prop_assert_eq!(f.mul(r, r), QuadInt::int(n));
    }

    #[test]
    fn pythagorean_triples_solve(k in element(50), m in element(50), n in element(50)) {
        let f = QuadField::new(1).unwrap();
        for (a, b, c) in [(1, 1, -1), (1, 1, 1), (2, 3, -5)] {
            if let Ok(param) = pythagorean_parametrization(&f, a, b, c) {
                let [x, y, z] = param.triple(k, m, n);
                prop_assert!(param.form().eval(&f, x, y, z).is_zero());
            }
        }
    }

    #[test]
    fn reduced_families_solve(k in element(30), m in element(30), n in element(30)) {
        let f = QuadField::new(3).unwrap();
        let form = QuadraticForm::new(1, 1, 3, 1, 0, 0);
        for pair in [Pair::XY, Pair::XZ, Pair::YZ] {
            let sol = reduce_form(&f, &form, pair).unwrap();
            let [x, y, z] = sol.triple(k, m, n);
            prop_assert!(form.eval(&f, x, y, z).is_zero());
        }
    }

    #[test]
    fn weights_bounded_and_supported(delta in 0.01f64..0.49, m in element(40), n in element(40)) {
        let sol = pythagorean();
        let w = weight_w_delta(sol, delta, m, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&w));
        if w > 0.0 {
            prop_assert!(s_q_member(sol, m, n));
        }
    }

    #[test]
    fn folner_defect_bounds(u in nonzero(12)) {
        let f = QuadField::new(1).unwrap();
        let spec = gaussian_window();
        let defect = folner_defect(&f, spec, u).unwrap();
        prop_assert!((0.0..=1.0).contains(&defect));
        if f.is_unit(u) {
            prop_assert_eq!(defect, 0.0);
        }
    }

    #[test]
    fn colorings_are_deterministic(seed in any::<u64>(), colors in 1u32..6, u in element(500)) {
        let f = QuadField::new(2).unwrap();
        let c = Coloring::Hash { seed, colors };
        let first = c.color(&f, u);
        prop_assert!(first < colors as u64);
        prop_assert_eq!(first, c.color(&f, u));
        let restored: Coloring = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(restored.color(&f, u), first);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn a_delta_dominated_by_weight(delta in 0.02f64..0.4, k in -3i64..=3, qx in 1i128..4, qy in 0i128..3) {
        let sol = pythagorean();
        let w = weight_average(sol, delta, 40).unwrap();
        let f = ElementFn::Angular(k).times(ElementFn::Archimedean(0.4));
        let a = a_delta_average(&f, sol, delta, QuadInt::new(qx, qy), 40).unwrap();
        prop_assert!(a.norm() <= w + 1e-12);
        let one = a_delta_average(&ElementFn::One, sol, delta, QuadInt::new(qx, qy), 40).unwrap();
        prop_assert!((one - Complex64::new(w, 0.0)).norm() < 1e-12);
    }
}
