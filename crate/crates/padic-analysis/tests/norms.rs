use num_bigint::BigInt;
use num_rational::BigRational;
use padic_analysis::{DistSeries, SeriesShape, Tail};
use padic_core::{PadicCtx, PadicNumber};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn ctx() -> PadicCtx {
    PadicCtx::new(3, 12).unwrap()
}

fn shape() -> SeriesShape {
    SeriesShape::new(ctx(), 2, 30)
}

fn poly(terms: Vec<((u32, u32), i64, i64)>) -> DistSeries {
    let mut coeffs = BTreeMap::new();
    for ((i, j), num, den) in terms {
        let c = PadicNumber::from_rational(
            ctx(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        );
        if !c.is_zero() {
            coeffs.insert(vec![i, j], c);
        }
    }
    DistSeries {
        shape: shape(),
        coeffs,
        tail: Tail::Exact,
    }
}

fn term() -> impl Strategy<Value = ((u32, u32), i64, i64)> {
    (
        (0u32..=5, 0u32..=5),
        prop_oneof![
            Just(0i64),
            (1i64..=80).prop_map(|u| u),
            (1i64..=80).prop_map(|u| -u),
        ],
        prop_oneof![Just(1i64), Just(2), Just(3), Just(9), Just(27)],
    )
}

fn radius() -> impl Strategy<Value = BigRational> {
    prop_oneof![
        Just(BigRational::from_integer(BigInt::from(1))),
        Just(BigRational::new(BigInt::from(1), BigInt::from(2))),
        Just(BigRational::new(BigInt::from(1), BigInt::from(3))),
        Just(BigRational::new(BigInt::from(2), BigInt::from(3))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // the sup-norm over the disc of radius p^{-rho} multiplies exactly
    #[test]
    fn gauss_norm_is_multiplicative(
        f_terms in proptest::collection::vec(term(), 1..6),
        g_terms in proptest::collection::vec(term(), 1..6),
        rho in radius(),
    ) {
        let f = poly(f_terms);
        let g = poly(g_terms);
        prop_assume!(!f.coeffs.is_empty() && !g.coeffs.is_empty());
        let fg = f.mul(&g).unwrap();
        prop_assert_eq!(&fg.tail, &Tail::Exact);
        let nf = f.norm_exponent(&rho).unwrap();
        let ng = g.norm_exponent(&rho).unwrap();
        let nfg = fg.norm_exponent(&rho).unwrap();
        prop_assert!(nf.certified && ng.certified && nfg.certified);
        let sum = nf.exponent.unwrap() + ng.exponent.unwrap();
        prop_assert_eq!(nfg.exponent.unwrap(), sum);
    }

    // the norm of a sum never beats both summands
    #[test]
    fn sum_norm_obeys_the_ultrametric_bound(
        f_terms in proptest::collection::vec(term(), 1..6),
        g_terms in proptest::collection::vec(term(), 1..6),
        rho in radius(),
    ) {
        let f = poly(f_terms);
        let g = poly(g_terms);
        let s = f.add(&g).unwrap();
        let anchor = [&f, &g]
            .iter()
            .filter_map(|h| h.norm_exponent(&rho).unwrap().exponent)
            .min();
        match (s.norm_exponent(&rho).unwrap().exponent, anchor) {
            (Some(es), Some(ea)) => prop_assert!(es >= ea),
            (Some(_), None) => prop_assert!(false, "sum exceeds two zero series"),
            (None, _) => {}
        }
    }
}
