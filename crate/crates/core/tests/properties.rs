mod common;

use common::random_complex;
use equivar::graded_complexes::{
    lower_level, lower_stable_bound, tensor, upper_level, upper_stable_bound, GradedComplex,
};
use equivar::weight_algebra::{
    euler_class, invert_euler, Direction, LaurentPolynomial, LaurentSeries, WeightList,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn poly() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((-6i64..=6, -5i64..=5), 0..6).prop_map(LaurentPolynomial::from_terms)
}

fn weights() -> impl Strategy<Value = WeightList> {
    prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 0..5)
        .prop_map(|w| WeightList::new(w).unwrap())
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::BoundedAbove), Just(Direction::BoundedBelow)]
}

fn complex() -> impl Strategy<Value = GradedComplex> {
    any::<u64>().prop_map(|seed| random_complex(&mut StdRng::seed_from_u64(seed)))
}

fn assert_d_squared_zero(c: &GradedComplex) {
    for pair in c.differentials().windows(2) {
        assert!(pair[1].compose(&pair[0]).unwrap().is_zero());
    }
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), LaurentPolynomial::zero());
        prop_assert_eq!(&a * &LaurentPolynomial::one(), a.clone());
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!((&a * &b).dual(), &a.dual() * &b.dual());
    }

    #[test]
    fn product_coefficients_are_convolutions(a in poly(), b in poly(), w in -12i64..=12) {
        let direct: i64 = (-6..=6).map(|k| a.coeff(k) * b.coeff(w - k)).sum();
        prop_assert_eq!((&a * &b).coeff(w), direct);
    }

    #[test]
    fn truncated_product_matches_polynomial_product(a in poly(), b in poly(), dir in direction()) {
        let order = match dir {
            Direction::BoundedAbove => -20,
            Direction::BoundedBelow => 20,
        };
        let sa = LaurentSeries::from_polynomial(&a, dir, order);
        let sb = LaurentSeries::from_polynomial(&b, dir, order);
        prop_assert!(sa.mul(&sb).unwrap().agrees_with(&(&a * &b)));
    }

    #[test]
    fn euler_inverse_is_a_unit(n in weights(), dir in direction(), depth in 1i64..25) {
        let order = match dir {
            Direction::BoundedAbove => -depth,
            Direction::BoundedBelow => depth,
        };
        let inverse = invert_euler(&n, dir, order).unwrap();
        prop_assert!(inverse.mul_polynomial(&euler_class(&n)).agrees_with(&LaurentPolynomial::one()));
    }

    #[test]
    fn tensor_products_are_complexes(f in complex(), g in complex()) {
        let t = tensor(&f, &g);
        assert_d_squared_zero(&t);
        prop_assert!(GradedComplex::new(t.start(), t.terms().to_vec(), t.differentials().to_vec()).is_ok());
        assert_d_squared_zero(&f.dual());
        assert_d_squared_zero(&f.shift(3));
    }

    #[test]
    fn tensoring_with_a_line_bundle_is_a_twist(f in complex(), n in -4i64..=4, v in -12i64..=12) {
        let twisted = tensor(&f, &GradedComplex::line_bundle(n));
        prop_assert_eq!(twisted.cohomology_at_weight(v), f.twist(n).cohomology_at_weight(v));
    }

    #[test]
    fn levels_stop_changing_at_the_bound(f in complex(), w in -8i64..=8, extra in 0i64..4) {
        let (dlo, dhi) = f.degree_range().unwrap();
        let (lo, hi) = (dlo.min(w) - 3, dhi.max(w) + 3);
        let j = upper_stable_bound(&f, w) + extra;
        prop_assert_eq!(upper_level(&f, w, j, lo, hi).unwrap(), upper_level(&f, w, j + 1, lo, hi).unwrap());
        let j = lower_stable_bound(&f, w) + extra;
        prop_assert_eq!(lower_level(&f, w, j, lo, hi).unwrap(), lower_level(&f, w, j + 1, lo, hi).unwrap());
    }
}
