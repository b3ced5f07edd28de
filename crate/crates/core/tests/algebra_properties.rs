mod common;

use entropic_core::algebra::{
    classify, from_u_basis, span_dimensions, to_u_basis, u_inner_product, EntropyExpression,
    SymmetryClass, UBasisVector,
};
use entropic_core::rational::{ratio, Coeff};
use entropic_core::subset::SubsetIndex;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Coeff> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| ratio(p, q))
}

fn expression() -> impl Strategy<Value = EntropyExpression> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec((0u32..(1 << n), coeff()), 0..16).prop_map(move |terms| {
            EntropyExpression::from_terms(
                n,
                terms
                    .into_iter()
                    .map(|(m, c)| (SubsetIndex::from_mask(m), c)),
            )
            .unwrap()
        })
    })
}

fn u_vector() -> impl Strategy<Value = UBasisVector> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec(coeff(), n - 1).prop_map(move |c| UBasisVector::new(n, c).unwrap())
    })
}

/// Coordinates drawn from the symmetric or skew subspace, or neither.
fn structured_u_vector() -> impl Strategy<Value = UBasisVector> {
    (u_vector(), 0u8..3).prop_map(|(c, kind)| {
        let mirrored = c.conjugate();
        let n = c.n();
        let v: Vec<Coeff> = c
            .coefficients()
            .iter()
            .zip(mirrored.coefficients())
            .map(|(a, b)| match kind {
                0 => a + b,
                1 => a - b,
                _ => a.clone(),
            })
            .collect();
        UBasisVector::new(n, v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_is_an_involution(e in expression()) {
        prop_assert_eq!(e.conjugate().conjugate(), e);
    }

    #[test]
    fn conjugation_is_linear(e1 in expression(), a in coeff(), b in coeff(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let e2 = common::random_expression(&mut rng, e1.n());
        let lhs = (&e1.scale(&a) + &e2.scale(&b)).conjugate();
        let rhs = &e1.conjugate().scale(&a) + &e2.conjugate().scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn round_trip_through_expressions(c in u_vector()) {
        prop_assert_eq!(to_u_basis(&from_u_basis(&c)).unwrap(), c);
    }

    #[test]
    fn conjugation_reverses_coordinates(c in u_vector()) {
        let conj = to_u_basis(&from_u_basis(&c).conjugate()).unwrap();
        let n = c.n();
        for k in 1..n {
            prop_assert_eq!(conj.get(k), c.get(n - k));
        }
    }

    #[test]
    fn classification_matches_conjugation(c in structured_u_vector()) {
        let e = from_u_basis(&c);
        let class = classify(&c);
        prop_assert_eq!(class == SymmetryClass::Symmetric, e.conjugate() == e);
        if class == SymmetryClass::SkewSymmetric {
            prop_assert_eq!(e.conjugate(), -e.clone());
        }
        if class == SymmetryClass::Neither {
            prop_assert!(e.conjugate() != e && e.conjugate() != -e.clone());
        }
    }

    #[test]
    fn symmetric_and_skew_parts_are_orthogonal(c in u_vector()) {
        let e = from_u_basis(&c);
        let (sym, skew) = e.sym_skew_decompose();
        prop_assert_eq!(sym.conjugate(), sym.clone());
        prop_assert_eq!(skew.conjugate(), -skew.clone());
        prop_assert_eq!(&sym + &skew, e);
        let (cs, ct) = (to_u_basis(&sym).unwrap(), to_u_basis(&skew).unwrap());
        prop_assert_eq!(u_inner_product(&cs, &ct).unwrap(), ratio(0, 1));
    }

    #[test]
    fn decomposition_parts_of_arbitrary_expressions(e in expression()) {
        let (sym, skew) = e.sym_skew_decompose();
        prop_assert_eq!(sym.conjugate(), sym.clone());
        prop_assert_eq!(skew.conjugate(), -skew.clone());
        prop_assert_eq!(&sym + &skew, e);
    }
}

#[test]
fn free_parameters_match_span_dimensions() {
    for n in 2..=8 {
        let (sym, skew) = span_dimensions(n).unwrap();
        assert_eq!(sym + skew, n - 1);
        // Mirror pairs plus the middle coordinate for even n.
        assert_eq!(sym, (n - 1).div_ceil(2));
    }
}
