//! Randomized checks of the arithmetic and gadget invariants on inputs far
//! outside the exhaustive boxes used by the unit tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use zreduce_core::gadgets::integrality::{thm12_criterion, three_x_plus_one};
use zreduce_core::gadgets::nonzero::tung_product;
use zreduce_core::gadgets::{conj_value, nonzero_witness, relation_decode, relation_f, relation_m_witness};
use zreduce_core::pell::{pell_at, pell_x_for};
use zreduce_core::{Circuit, FieldD, QuadInt, SparsePoly, VarName};

const DS: [u64; 8] = [1, 2, 3, 5, 6, 7, 11, 13];

fn arb_field() -> impl Strategy<Value = FieldD> {
    proptest::sample::select(DS.to_vec()).prop_map(|d| FieldD::new(d).unwrap())
}

/// Elements of the ring of integers; half-integer coordinates appear for
/// `d = 3 (mod 4)`.
fn arb_elem(field: FieldD, range: i64) -> impl Strategy<Value = QuadInt> {
    (-range..=range, -range..=range, any::<bool>()).prop_map(move |(a, b, half)| {
        if half && field.d() % 4 == 3 {
            QuadInt::from_doubled(field, BigInt::from(2 * a + 1), BigInt::from(2 * b + 1)).unwrap()
        } else {
            QuadInt::new(field, a, b)
        }
    })
}

fn arb_quad(range: i64) -> impl Strategy<Value = QuadInt> {
    arb_field().prop_flat_map(move |f| arb_elem(f, range))
}

fn gauss(range: i64) -> impl Strategy<Value = QuadInt> {
    arb_elem(FieldD::GAUSSIAN, range)
}

proptest! {
    #[test]
    fn three_x_plus_one_does_not_shrink_the_norm(x in arb_quad(1_000_000)) {
        let y = three_x_plus_one(&x);
        prop_assert!(y.norm() >= x.norm());
        prop_assert!(y.norm() >= BigInt::from(1));
    }

    #[test]
    fn surd_part_is_bounded_by_the_norm(x in arb_quad(1_000_000)) {
        let r = x.to_rat();
        let d = BigRational::from_integer(BigInt::from(x.field().d()));
        let n = BigRational::from_integer(x.norm());
        prop_assert!(d * r.s() * r.s() <= &n * &n);
    }

    #[test]
    fn integer_inputs_meet_the_criterion(
        field in arb_field(),
        xs in proptest::collection::vec(-50i64..=50, 1..=3),
    ) {
        let xs: Vec<QuadInt> = xs.into_iter().map(|x| QuadInt::from_int(field, x)).collect();
        prop_assert!(thm12_criterion(field, &xs).unwrap());
    }

    #[test]
    fn a_non_integer_input_breaks_the_criterion(
        (field, xs, k) in arb_field().prop_flat_map(|f| {
            (Just(f), proptest::collection::vec(arb_elem(f, 20), 1..=3), 0usize..3)
        }),
        surd in 1i64..=20,
    ) {
        let mut xs = xs;
        let k = k % xs.len();
        xs[k] = &xs[k] + &QuadInt::new(field, 0, surd);
        let all_integer = xs.iter().all(|x| x.as_integer().is_some());
        prop_assert_eq!(thm12_criterion(field, &xs).unwrap(), all_integer);
    }

    #[test]
    fn relation_witness_and_decode_agree(
        alpha1 in gauss(1000),
        alpha2 in gauss(1000),
        s in gauss(1000),
        k in gauss(1000),
    ) {
        prop_assume!(!s.is_zero());
        let (a1, a2) = (&alpha1 * &alpha1, &alpha2 * &alpha2);
        prop_assume!(a1 != a2);
        let t = &s * &k;
        let m = relation_m_witness(&alpha1, &alpha2, &s, &t).unwrap();
        prop_assert!(relation_f(&a1, &a2, &s, &t, &m).is_zero());
        let d = relation_decode(&a1, &a2, &s, &t, &m).unwrap();
        prop_assert_eq!(&(&d.root1 * &d.root1), &a1);
        prop_assert_eq!(&(&d.root2 * &d.root2), &a2);
        prop_assert_eq!(d.quotient, k);
    }

    #[test]
    fn conjunction_vanishes_only_at_the_origin(x in gauss(1_000_000), y in gauss(1_000_000)) {
        prop_assert_eq!(conj_value(&x, &y).is_zero(), x.is_zero() && y.is_zero());
    }

    #[test]
    fn nonzero_witnesses_reproduce_m(m in any::<i64>()) {
        prop_assume!(m != 0);
        let m = BigInt::from(m);
        let (r, s) = nonzero_witness(&m).unwrap();
        prop_assert_eq!(tung_product(&r, &s), m);
    }

    #[test]
    fn tung_product_never_vanishes(r in gauss(1_000_000), s in gauss(1_000_000)) {
        prop_assert!(!tung_product(&r, &s).is_zero());
    }

    #[test]
    fn pell_pairs_are_found_from_y(index in 0u64..400) {
        let pair = pell_at(index);
        prop_assert!(pair.satisfies_equation());
        prop_assert_eq!(pair.x.bit(0), index % 2 == 0);
        prop_assert_eq!(pell_x_for(&pair.y), Some(pair.x.clone()));
        if index > 0 {
            prop_assert_eq!(pell_x_for(&(&pair.y + 1u32)), None);
        }
    }

    #[test]
    fn circuits_from_polynomials_expand_back(
        terms in proptest::collection::vec((proptest::collection::vec(0u32..4, 3), -20i64..=20), 0..8),
        point in proptest::collection::vec(-9i64..=9, 3),
    ) {
        let vars: Vec<VarName> = ["x", "y", "z"].iter().map(|v| VarName::new(*v).unwrap()).collect();
        let p = SparsePoly::from_terms(vars.clone(), terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap();
        let c = Circuit::from_poly(&p);
        prop_assert!(c.degree_bound() >= p.total_degree());
        let assignment: BTreeMap<VarName, BigInt> =
            vars.iter().cloned().zip(point.iter().map(|&v| BigInt::from(v))).collect();
        let expanded = c.expand(10_000).unwrap();
        prop_assert_eq!(c.eval((), &assignment).unwrap(), p.eval_map((), &assignment).unwrap());
        prop_assert_eq!(expanded.with_vars(vars).unwrap(), p);
    }
}
