use lambda_buildings::lattice_building::LatticeBuilding;
use lambda_buildings::root_systems::{RootSystem, Tag};
use lambda_buildings::{qi, sampling, FieldElement, LexValue, Matrix, OrderedGroupMorphism, ValuationSpec};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn lex(k: usize) -> impl Strategy<Value = LexValue> {
    proptest::collection::vec(rational(), k).prop_map(LexValue::Finite)
}

fn spec() -> impl Strategy<Value = ValuationSpec> {
    prop_oneof![Just(ValuationSpec::Degree), Just(ValuationSpec::LexMultideg)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lex_order_is_translation_invariant(a in lex(3), b in lex(3), c in lex(3)) {
        prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
        prop_assert_eq!(a.cmp(&b), (-&b).cmp(&(-&a)));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn lex_sign_matches_comparison_with_zero(a in lex(2)) {
        let z = LexValue::zero(2);
        prop_assert_eq!(a.is_positive(), a > z);
        prop_assert_eq!(a.is_negative(), a < z);
        prop_assert!(a.abs() >= z);
    }

    #[test]
    fn order_preserving_maps_never_flip_positives(entries in proptest::collection::vec(rational(), 4)) {
        let gamma = OrderedGroupMorphism::new(Matrix::new(2, 2, entries));
        if gamma.is_order_preserving() {
            prop_assert_eq!(gamma.positivity_violations(300, 1), 0);
        }
    }

    #[test]
    fn valuation_is_a_homomorphism_with_ultrametric_sum(spec in spec(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sampling::nonzero_field_element(&mut rng, spec.field());
        let y = sampling::nonzero_field_element(&mut rng, spec.field());
        prop_assert_eq!(spec.valuation(&(&x * &y)), &spec.valuation(&x) + &spec.valuation(&y));
        let vx = spec.valuation(&x);
        let vy = spec.valuation(&y);
        prop_assert!(spec.valuation(&(&x + &y)) >= *LexValue::min(&vx, &vy));
    }

    #[test]
    fn class_ignores_integral_base_change_and_scaling(n in 2usize..=3, seed in any::<u64>()) {
        let spec = ValuationSpec::Degree;
        let b = LatticeBuilding::new(spec, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = sampling::gl_general(&mut rng, spec, n);
        let k = sampling::sl_integral(&mut rng, spec, n);
        let c = sampling::nonzero_field_element(&mut rng, spec.field());
        let class = b.class_of(&m).unwrap();
        prop_assert_eq!(&b.class_of(&(&m * &k)).unwrap(), &class);
        prop_assert_eq!(&b.class_of(&m.scale(&c)).unwrap(), &class);
    }

    #[test]
    fn reflections_are_involutions_permuting_roots(which in 0usize..4, idx in 0usize..64) {
        let (tag, rank) = [(Tag::A, 3), (Tag::B, 3), (Tag::C, 2), (Tag::G2, 2)][which];
        let r = RootSystem::standard(tag, rank).unwrap();
        let alpha = r.root(idx % r.roots().len()).clone();
        let s = r.reflection(&alpha).unwrap();
        prop_assert!(s.compose(&s).is_identity());
        for beta in r.roots() {
            prop_assert!(r.index_of(&s.apply(beta)).is_some());
        }
        let neg: Vec<BigRational> = alpha.iter().map(|x| -x).collect();
        prop_assert_eq!(s.apply(&alpha), neg);
    }
}

#[test]
fn unit_valuation_is_zero() {
    let one = FieldElement::from_int(1);
    for spec in [ValuationSpec::Degree, ValuationSpec::LexMultideg, ValuationSpec::FirstVar] {
        assert!(spec.valuation(&one).is_zero());
        assert!(spec.valuation(&FieldElement::from_rational(qi(-7))).is_zero());
    }
}
