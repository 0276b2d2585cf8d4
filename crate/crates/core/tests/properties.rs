use std::sync::OnceLock;

use conformal::algebra::{
    build_standard_algebra, c2_residual, c3_residual, nth_product, vanishing_bound, ConformalAlgebra, StandardKind,
};
use conformal::arith::{gen_binomial, DPoly, Scalar};
use conformal::classifier::{generate_rank1_constraints, virasoro_family, ConstraintSystem, Family};
use conformal::element::{ModElement, Parity, PolyVec};
use conformal::lie::LieSuperData;
use conformal::module::{
    act, build_module_family, check_module_axioms, cyclic_submodule_closed, m1_residual, ConformalModule,
    FamilyParams, ModuleFamily,
};
use conformal::modes::{action_array, bracket_array, locality_order, Window};
use conformal::spec::{module_to_json, parse_spec, SpecFile};
use proptest::prelude::*;

type Coeffs = Vec<(i64, i64)>;

fn scalar((n, d): (i64, i64)) -> Scalar {
    Scalar::frac(n, d)
}

fn poly(c: &Coeffs) -> DPoly {
    DPoly::from_coeffs(c.iter().copied().map(scalar).collect())
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Coeffs> {
    prop::collection::vec((-6i64..=6, 1i64..=5), 0..=max_len)
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=6).prop_map(scalar)
}

fn kind() -> impl Strategy<Value = StandardKind> {
    prop::sample::select(StandardKind::ALL.to_vec())
}

fn family() -> impl Strategy<Value = ModuleFamily> {
    prop::sample::select(ModuleFamily::ALL.to_vec())
}

fn algebra(kind: StandardKind) -> ConformalAlgebra {
    build_standard_algebra(kind, Some(&LieSuperData::sl2())).unwrap()
}

/// Homogeneous element of parity `p` with one polynomial per generator of
/// that parity, taken cyclically from `polys`.
fn element(parities: &[Parity], p: Parity, polys: &[Coeffs]) -> PolyVec {
    let idx: Vec<usize> = (0..parities.len()).filter(|&i| parities[i] == p).collect();
    PolyVec::from_terms(idx.iter().zip(polys.iter()).map(|(&i, c)| (i, poly(c))))
}

fn alg_parities(alg: &ConformalAlgebra) -> Vec<Parity> {
    (0..alg.len()).map(|i| alg.parity(i)).collect()
}

fn mod_parities(m: &ConformalModule) -> Vec<Parity> {
    m.carrier().basis().iter().map(|b| b.parity).collect()
}

fn parity(bit: bool) -> Parity {
    if bit {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn module(family: ModuleFamily, alpha: Scalar, delta: Scalar) -> ConformalModule {
    build_module_family(family, &FamilyParams::new().alpha(alpha).delta(delta)).unwrap()
}

fn virasoro_system() -> &'static (ConstraintSystem, Family) {
    static SYS: OnceLock<(ConstraintSystem, Family)> = OnceLock::new();
    SYS.get_or_init(|| {
        let sys = generate_rank1_constraints(&algebra(StandardKind::Virasoro), 4, 2);
        let fam = virasoro_family(&sys).unwrap();
        (sys, fam)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn divmod_reassembles(a in coeffs(6), b in coeffs(4)) {
        let (a, b) = (poly(&a), poly(&b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn pascal_rule(m in -40i64..40, k in 1i64..12) {
        let lhs = gen_binomial(m, k).unwrap();
        let rhs = &gen_binomial(m - 1, k).unwrap() + &gen_binomial(m - 1, k - 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomial_matches_integer_formula(m in 0i64..30, k in 0i64..30) {
        // multiplicative formula in u128, zero past m
        let want = if k > m { 0 } else { (0..k as u128).fold(1u128, |acc, i| acc * (m as u128 - i) / (i + 1)) };
        prop_assert_eq!(gen_binomial(m, k).unwrap(), Scalar::from_int(want as i64));
    }

    #[test]
    fn canonical_form(a in coeffs(4), b in coeffs(4), i in 0usize..4, j in 0usize..4) {
        let x = PolyVec::from_terms([(i, poly(&a)), (j, poly(&b))]);
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(&(&x - &x), &PolyVec::zero());
        prop_assert!(x.terms().all(|(_, p)| !p.is_zero()));
        let y = &(&x + &x) - &x;
        prop_assert_eq!(y, x);
    }

    #[test]
    fn skew_symmetry_on_random_elements(
        k in kind(), px in any::<bool>(), py in any::<bool>(),
        xs in prop::collection::vec(coeffs(2), 1..4),
        ys in prop::collection::vec(coeffs(2), 1..4),
        n in 0u32..4,
    ) {
        let alg = algebra(k);
        let par = alg_parities(&alg);
        let (x, y) = (element(&par, parity(px), &xs), element(&par, parity(py), &ys));
        prop_assert!(c2_residual(&alg, &x, &y, n).unwrap().is_zero());
    }

    #[test]
    fn jacobi_on_random_elements(
        k in kind(), px in any::<bool>(), py in any::<bool>(), pz in any::<bool>(),
        xs in prop::collection::vec(coeffs(2), 1..3),
        ys in prop::collection::vec(coeffs(2), 1..3),
        zs in prop::collection::vec(coeffs(2), 1..3),
        m in 0u32..3, n in 0u32..3,
    ) {
        let alg = algebra(k);
        let par = alg_parities(&alg);
        let x = element(&par, parity(px), &xs);
        let y = element(&par, parity(py), &ys);
        let z = element(&par, parity(pz), &zs);
        prop_assert!(c3_residual(&alg, &x, &y, &z, m, n).unwrap().is_zero());
    }

    #[test]
    fn derivation_and_parity(
        k in kind(), px in any::<bool>(), py in any::<bool>(),
        xs in prop::collection::vec(coeffs(3), 1..4),
        ys in prop::collection::vec(coeffs(3), 1..4),
        n in 0u32..5,
    ) {
        let alg = algebra(k);
        let par = alg_parities(&alg);
        let (x, y) = (element(&par, parity(px), &xs), element(&par, parity(py), &ys));
        let d = |v: &PolyVec| v.shift(1);
        let nn = Scalar::from_int(n as i64);
        let prev = |a: &PolyVec, b: &PolyVec| if n == 0 { PolyVec::zero() } else { nth_product(&alg, a, b, n - 1).unwrap() };
        // (∂x)_(n) y = -n x_(n-1) y
        prop_assert_eq!(nth_product(&alg, &d(&x), &y, n).unwrap(), prev(&x, &y).scale(&-&nn));
        // x_(n) ∂y = ∂(x_(n) y) + n x_(n-1) y
        let mut rhs = d(&nth_product(&alg, &x, &y, n).unwrap());
        rhs.add_scaled(&prev(&x, &y), &nn);
        prop_assert_eq!(nth_product(&alg, &x, &d(&y), n).unwrap(), rhs);
        let p = nth_product(&alg, &x, &y, n).unwrap();
        if !p.is_zero() {
            prop_assert_eq!(alg.parity_of(&p).unwrap(), Some(parity(px ^ py)));
        }
        prop_assert!(nth_product(&alg, &x, &y, vanishing_bound(&alg, &x, &y)).unwrap().is_zero());
    }

    #[test]
    fn commutator_identity_on_random_elements(
        f in family(), alpha in rational(), delta in rational(),
        px in any::<bool>(), py in any::<bool>(), pv in any::<bool>(),
        xs in prop::collection::vec(coeffs(2), 1..3),
        ys in prop::collection::vec(coeffs(2), 1..3),
        vs in prop::collection::vec(coeffs(2), 1..3),
        m in 0u32..3, n in 0u32..3,
    ) {
        let md = module(f, alpha, delta);
        let par = alg_parities(md.algebra());
        let x = element(&par, parity(px), &xs);
        let y = element(&par, parity(py), &ys);
        let v = element(&mod_parities(&md), parity(pv), &vs);
        prop_assert!(m1_residual(&md, &x, &y, &v, m, n).unwrap().is_zero());
    }

    #[test]
    fn action_parity_and_bound(
        f in family(), alpha in rational(), delta in rational(),
        px in any::<bool>(), pv in any::<bool>(),
        xs in prop::collection::vec(coeffs(3), 1..3),
        vs in prop::collection::vec(coeffs(3), 1..3),
        n in 0u32..5,
    ) {
        let md = module(f, alpha, delta);
        let x = element(&alg_parities(md.algebra()), parity(px), &xs);
        let v = element(&mod_parities(&md), parity(pv), &vs);
        let w = act(&md, &x, n, &v).unwrap();
        if !w.is_zero() {
            prop_assert_eq!(md.parity_of(&w).unwrap(), Some(parity(px ^ pv)));
        }
        prop_assert!(act(&md, &x, md.vanishing_bound(&x, &v), &v).unwrap().is_zero());
    }

    #[test]
    fn derivative_commutes_with_action(
        f in family(), alpha in rational(), delta in rational(),
        px in any::<bool>(), pv in any::<bool>(),
        xs in prop::collection::vec(coeffs(3), 1..3),
        vs in prop::collection::vec(coeffs(3), 1..3),
        n in 0u32..5,
    ) {
        let md = module(f, alpha, delta);
        let x = element(&alg_parities(md.algebra()), parity(px), &xs);
        let v = element(&mod_parities(&md), parity(pv), &vs);
        let nn = Scalar::from_int(n as i64);
        let prev = if n == 0 { PolyVec::zero() } else { act(&md, &x, n - 1, &v).unwrap() };
        // [∂, x_(n)] v = n x_(n-1) v
        let lhs = &act(&md, &x, n, &v.shift(1)).unwrap() - &act(&md, &x, n, &v).unwrap().shift(1);
        prop_assert_eq!(lhs, prev.scale(&nn));
        // (∂x)_(n) v = -n x_(n-1) v
        prop_assert_eq!(act(&md, &x.shift(1), n, &v).unwrap(), prev.scale(&-&nn));
    }

    #[test]
    fn reliable_window_is_stable(
        k in kind(), px in any::<bool>(), py in any::<bool>(),
        xs in prop::collection::vec(coeffs(2), 1..3),
        ys in prop::collection::vec(coeffs(2), 1..3),
    ) {
        let alg = algebra(k);
        let par = alg_parities(&alg);
        let (x, y) = (element(&par, parity(px), &xs), element(&par, parity(py), &ys));
        let w = Window::new(-5, 8);
        let small = locality_order(&bracket_array(&alg, &x, &y, w).unwrap());
        let large = locality_order(&bracket_array(&alg, &x, &y, w.grow(3)).unwrap());
        prop_assert_eq!(small.order(), large.order());
        prop_assert_eq!(small.order(), Some(vanishing_bound(&alg, &x, &y)));
    }

    #[test]
    fn module_locality_is_stable(
        alpha in rational(), delta in rational(), xs in coeffs(2), vs in coeffs(2),
    ) {
        let md = module(ModuleFamily::VirasoroMVD, alpha, delta);
        let (x, v) = (PolyVec::term(0, poly(&xs)), ModElement::term(0, poly(&vs)));
        let w = Window::new(-6, 8);
        let small = locality_order(&action_array(&md, &x, &v, w).unwrap());
        let large = locality_order(&action_array(&md, &x, &v, w.grow(2)).unwrap());
        prop_assert_eq!(small.order(), large.order());
        prop_assert_eq!(small.order(), Some(md.vanishing_bound(&x, &v)));
    }

    #[test]
    fn cyclic_reducibility_iff_delta_zero(alpha in rational(), delta in rational()) {
        let md = module(ModuleFamily::VirasoroMVD, alpha.clone(), delta.clone());
        let w = ModElement::term(0, DPoly::d_plus(alpha));
        prop_assert_eq!(cyclic_submodule_closed(&md, &w).unwrap().is_closed(), delta.is_zero());
    }

    #[test]
    fn builtin_module_spec_round_trip(f in family(), alpha in rational(), delta in rational()) {
        let md = module(f, alpha, delta);
        let text = serde_json::to_string(&module_to_json(&md)).unwrap();
        let SpecFile::Module(back) = parse_spec(&text).unwrap() else { panic!("not a module") };
        prop_assert_eq!(serde_json::to_string(&module_to_json(&back)).unwrap(), text);
        prop_assert!(check_module_axioms(&back).passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn classifier_accepts_family_points(alpha in rational(), delta in rational()) {
        let (sys, fam) = virasoro_system();
        let point: Vec<Scalar> = fam.assignment.iter().map(|p| p.eval(&[alpha.clone(), delta.clone()])).collect();
        prop_assert!(sys.violated_at(&point).is_empty());
        prop_assert!(check_module_axioms(&sys.module_at(&point).unwrap()).passed());
    }

    #[test]
    fn classifier_agrees_with_axioms_off_family(
        alpha in rational(), delta in rational(), slot in 0usize..12, bump in rational(),
    ) {
        prop_assume!(!bump.is_zero());
        let (sys, fam) = virasoro_system();
        let mut point: Vec<Scalar> = fam.assignment.iter().map(|p| p.eval(&[alpha.clone(), delta.clone()])).collect();
        let slot = slot % point.len();
        point[slot] = &point[slot] + &bump;
        let violated = !sys.violated_at(&point).is_empty();
        let fails = !check_module_axioms(&sys.module_at(&point).unwrap()).passed();
        prop_assert_eq!(violated, fails);
    }
}
