use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use padic_core::{rational_valuation, PadicCtx, PadicNumber, Val, XReal};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (any::<i32>(), 1i64..500).prop_map(|(n, d)| rat(n as i64, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    // Arithmetic agrees with a direct rational oracle: value, valuation, and
    // the digit expansion of the unit part all match.
    #[test]
    fn ops_match_rational_oracle(a in arb_rational(), b in arb_rational()) {
        let ctx = PadicCtx::new(3, 12).unwrap();
        let x = PadicNumber::from_rational(ctx, a.clone());
        let y = PadicNumber::from_rational(ctx, b.clone());

        let sum = x.add(&y);
        prop_assert_eq!(sum.rational(), &(&a + &b));
        prop_assert_eq!(sum.valuation(), rational_valuation(&(&a + &b), 3));

        let prod = x.mul(&y);
        prop_assert_eq!(prod.rational(), &(&a * &b));

        if !b.is_zero() {
            let q = x.div(&y).unwrap();
            prop_assert_eq!(q.rational(), &(&a / &b));
        }

        // digits determine the unit part mod p^N
        let digits = sum.unit_digits();
        let mut acc = BigInt::zero();
        for (i, d) in digits.iter().enumerate() {
            acc += BigInt::from(*d) * BigInt::from(3u32).pow(i as u32);
        }
        if let Val::Finite(v) = sum.valuation() {
            let unit = sum.unit_part();
            let recon = PadicNumber::from_rational(ctx, BigRational::from_integer(acc));
            let orig = PadicNumber::from_rational(ctx, unit);
            prop_assert!(recon.eq_at_precision(&orig), "digit mismatch at valuation {}", v);
        }
    }

    // |xy| = |x||y| and |x+y| <= max(|x|, |y|), as valuation statements.
    #[test]
    fn ultrametric_laws(a in arb_rational(), b in arb_rational()) {
        let ctx = PadicCtx::new(5, 12).unwrap();
        let x = PadicNumber::from_rational(ctx, a);
        let y = PadicNumber::from_rational(ctx, b);
        let (vx, vy) = (x.valuation(), y.valuation());

        match (vx, vy, x.mul(&y).valuation()) {
            (Val::Finite(u), Val::Finite(v), Val::Finite(w)) => prop_assert_eq!(w, u + v),
            (_, _, w) => prop_assert_eq!(w, Val::Infinite),
        }

        let vsum = x.add(&y).valuation();
        prop_assert!(vsum >= vx.min(vy));
        // equality whenever the valuations differ
        if let (Val::Finite(u), Val::Finite(v)) = (vx, vy) {
            if u != v {
                prop_assert_eq!(vsum, vx.min(vy));
            }
        }
    }

    // XReal addition is commutative, associative, and monotone.
    #[test]
    fn xreal_monoid_laws(a in -20i64..20, b in -20i64..20, c in -20i64..20,
                         pa in any::<bool>(), pb in any::<bool>(), pc in any::<bool>()) {
        let lift = |n: i64, plus: bool| if plus { XReal::int_plus(n) } else { XReal::int(n) };
        let (x, y, z) = (lift(a, pa), lift(b, pb), lift(c, pc));
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
        if x <= y {
            prop_assert!(x.clone() + z.clone() <= y.clone() + z.clone());
        }
    }
}

#[test]
fn binomial_of_padic_integer_is_integral() {
    let ctx = PadicCtx::new(3, 12).unwrap();
    // a in Z_p (here: rationals with denominator prime to 3)
    for (n, d) in [(7i64, 2i64), (10, 1), (-4, 5), (22, 7)] {
        let a = PadicNumber::from_rational(ctx, rat(n, d));
        for k in 0..10u64 {
            let b = a.binomial(k);
            match b.valuation() {
                Val::Finite(v) => assert!(v >= 0, "C({n}/{d}, {k}) had valuation {v}"),
                Val::Infinite => {}
            }
        }
    }
}

#[test]
fn eq_at_precision_separates_close_values() {
    let ctx = PadicCtx::new(3, 6).unwrap();
    let x = PadicNumber::from_integer(ctx, 1);
    let near = x.add(&PadicNumber::p_pow(ctx, 6));
    let far = x.add(&PadicNumber::p_pow(ctx, 5));
    assert!(x.eq_at_precision(&near));
    assert!(!x.eq_at_precision(&far));
}
