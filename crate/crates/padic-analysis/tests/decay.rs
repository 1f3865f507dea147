use num_bigint::BigInt;
use num_rational::BigRational;
use padic_analysis::{decay_margins, eval_mahler, mahler_coeffs};
use padic_core::{PadicCtx, PadicNumber, Val};

fn ctx() -> PadicCtx {
    PadicCtx::new(3, 12).unwrap()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// sum_{n=0}^{30} (3x)^n in the power basis
fn geometric_poly() -> Vec<BigRational> {
    (0..=30u32)
        .map(|n| BigRational::from_integer(BigInt::from(3).pow(n)))
        .collect()
}

#[test]
fn geometric_series_coefficients_follow_the_frozen_valuation_profile() {
    let c = mahler_coeffs(ctx(), &geometric_poly()).unwrap();
    assert_eq!(c.len(), 31);
    assert_eq!(c[0].rational(), &rat(1));
    // c_1 = sum of f(1) - f(0) telescopes to (3^31 - 3) / 2
    assert_eq!(c[1].rational(), &rat(308836698141972));
    let vals: Vec<Val> = c.iter().take(13).map(|x| x.valuation()).collect();
    let want = [0i64, 1, 2, 4, 5, 6, 8, 9, 10, 13, 14, 15, 17];
    for (k, (got, w)) in vals.iter().zip(want).enumerate() {
        assert_eq!(*got, Val::Finite(w), "k = {k}");
    }
}

#[test]
fn decay_holds_at_slope_one_half_and_fails_at_three_halves() {
    let c = mahler_coeffs(ctx(), &geometric_poly()).unwrap();

    let shallow = decay_margins(&c, &BigRational::new(BigInt::from(1), BigInt::from(2)));
    assert!(shallow.holds_with_constant_one());
    assert_eq!(shallow.worst, Some((rat(0), 0)));

    let steep = decay_margins(&c, &BigRational::new(BigInt::from(3), BigInt::from(2)));
    assert!(!steep.holds_with_constant_one());
    assert_eq!(steep.worst, Some((rat(-3), 26)));
}

#[test]
fn finite_expansion_evaluates_exactly_everywhere() {
    let c = mahler_coeffs(ctx(), &geometric_poly()).unwrap();
    // f(2) = sum 6^n = (6^31 - 1) / 5
    let direct = (BigRational::from_integer(BigInt::from(6).pow(31)) - rat(1)) / rat(5);
    let got = eval_mahler(&c, &PadicNumber::from_integer(ctx(), 2));
    assert_eq!(got.rational(), &direct);
    // and at a genuinely p-adic point x = 1/2, against Horner in rationals
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut acc = BigRational::from_integer(BigInt::from(0));
    for a in geometric_poly().iter().rev() {
        acc = acc * &half + a;
    }
    let got = eval_mahler(&c, &PadicNumber::from_rational(ctx(), half));
    assert_eq!(got.rational(), &acc);
}
