use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use padic_core::{PadicCtx, PadicNumber, Val};

/// Coefficients in the binomial basis, read off as iterated forward
/// differences at 0: c_k = (delta^k f)(0).
pub fn forward_differences(values: &[PadicNumber]) -> Vec<PadicNumber> {
    let mut row: Vec<PadicNumber> = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while let Some(first) = row.first() {
        out.push(first.clone());
        row = row.windows(2).map(|w| w[1].sub(&w[0])).collect();
    }
    out
}

/// Values f(0), f(1), ..., f(n) of a polynomial given in the power basis.
pub fn poly_values(ctx: PadicCtx, poly: &[BigRational], n: usize) -> Vec<PadicNumber> {
    (0..=n)
        .map(|j| {
            let x = BigRational::from_integer(BigInt::from(j));
            let mut acc = BigRational::zero();
            for a in poly.iter().rev() {
                acc = acc * &x + a;
            }
            PadicNumber::from_rational(ctx, acc)
        })
        .collect()
}

/// Stirling numbers of the second kind, rows 0..=n.
pub fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::from(1);
    for i in 1..=n {
        for k in 1..=i {
            s[i][k] = BigInt::from(k as u64) * &s[i - 1][k] + &s[i - 1][k - 1];
        }
    }
    s
}

/// Converts power-basis coefficients to binomial-basis coefficients through
/// x^n = sum_k S(n, k) k! C(x, k).
pub fn power_to_mahler(ctx: PadicCtx, poly: &[BigRational]) -> Vec<PadicNumber> {
    if poly.is_empty() {
        return Vec::new();
    }
    let deg = poly.len() - 1;
    let s = stirling2(deg);
    let mut kfact = BigRational::from_integer(BigInt::from(1));
    (0..=deg)
        .map(|k| {
            if k > 0 {
                kfact *= BigRational::from_integer(BigInt::from(k as u64));
            }
            let sum: BigRational = poly
                .iter()
                .enumerate()
                .skip(k)
                .map(|(n, a)| a * BigRational::from_integer(s[n][k].clone()))
                .sum();
            PadicNumber::from_rational(ctx, sum * &kfact)
        })
        .collect()
}

/// Evaluates sum_k c_k C(x, k); exact for the stored coefficients.
pub fn eval_mahler(coeffs: &[PadicNumber], x: &PadicNumber) -> PadicNumber {
    let mut acc = PadicNumber::zero(x.ctx());
    for (k, c) in coeffs.iter().enumerate() {
        acc = acc.add(&c.mul(&x.binomial(k as u64)));
    }
    acc
}

/// How far each coefficient sits above the decay line v(c_k) >= k * slope.
/// The margin is v(c_k) - k * slope, None for an exact zero coefficient.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub slope: BigRational,
    pub margins: Vec<Option<BigRational>>,
    /// the least margin and where it occurs; None when all coefficients vanish
    pub worst: Option<(BigRational, usize)>,
}

impl DecayReport {
    /// The decay bound |c_k| <= C s^k holds with log_p C = -worst margin.
    pub fn holds_with_constant_one(&self) -> bool {
        match &self.worst {
            Some((m, _)) => !m.is_negative(),
            None => true,
        }
    }
}

pub fn decay_margins(coeffs: &[PadicNumber], slope: &BigRational) -> DecayReport {
    let mut margins = Vec::with_capacity(coeffs.len());
    let mut worst: Option<(BigRational, usize)> = None;
    for (k, c) in coeffs.iter().enumerate() {
        let m = match c.valuation() {
            Val::Infinite => None,
            Val::Finite(v) => {
                Some(BigRational::from_integer(BigInt::from(v)) - slope * BigRational::from_integer(BigInt::from(k as u64)))
            }
        };
        if let Some(m) = &m {
            if worst.as_ref().is_none_or(|(w, _)| m < w) {
                worst = Some((m.clone(), k));
            }
        }
        margins.push(m);
    }
    DecayReport {
        slope: slope.clone(),
        margins,
        worst,
    }
}

/// Mahler data of a one-variable polynomial, with both computation routes
/// cross-checked against each other.
pub fn mahler_coeffs(ctx: PadicCtx, poly: &[BigRational]) -> Result<Vec<PadicNumber>> {
    let deg = poly.len().saturating_sub(1);
    let via_stirling = power_to_mahler(ctx, poly);
    let via_differences = forward_differences(&poly_values(ctx, poly, deg));
    if via_stirling.len() != via_differences.len()
        || via_stirling
            .iter()
            .zip(&via_differences)
            .any(|(a, b)| a.rational() != b.rational())
    {
        return Err(Error::Internal(
            "binomial-coefficient routes disagree".into(),
        ));
    }
    Ok(via_stirling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ctx() -> PadicCtx {
        PadicCtx::new(3, 12).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn square_has_two_binomial_terms() {
        // x^2 = C(x,1) + 2 C(x,2), all higher differences vanish exactly
        let c = mahler_coeffs(ctx(), &[rat(0), rat(0), rat(1)]).unwrap();
        assert!(c[0].is_zero());
        assert_eq!(c[1].rational(), &rat(1));
        assert_eq!(c[2].rational(), &rat(2));
        let vals = poly_values(ctx(), &[rat(0), rat(0), rat(1)], 6);
        let d = forward_differences(&vals);
        assert!(d[3..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn stirling_row_five() {
        let s = stirling2(7);
        let row: Vec<i64> = (0..=5).map(|k| i64::try_from(&s[5][k]).unwrap()).collect();
        assert_eq!(row, [0, 1, 15, 25, 10, 1]);
        assert_eq!(s[7][3], BigInt::from(301));
    }

    #[test]
    fn evaluation_recovers_polynomial_values() {
        let poly = [rat(7), rat(-2), rat(0), rat(5)];
        let c = mahler_coeffs(ctx(), &poly).unwrap();
        for j in [0i64, 1, 2, 9, -4] {
            let x = PadicNumber::from_integer(ctx(), j);
            let want: BigRational = poly
                .iter()
                .rev()
                .fold(BigRational::zero(), |acc, a| acc * rat(j) + a);
            assert_eq!(eval_mahler(&c, &x).rational(), &want);
        }
    }

    #[test]
    fn integer_valued_polynomials_have_integral_coefficients() {
        // x(x-1)(x-2)/6 = C(x,3)
        let poly = [rat(0), rat(2) / rat(6), -rat(3) / rat(6), rat(1) / rat(6)];
        let c = mahler_coeffs(ctx(), &poly).unwrap();
        assert!(c[..3].iter().all(|x| x.is_zero()));
        assert_eq!(c[3].rational(), &BigRational::one());
    }

    #[test]
    fn decay_margins_of_a_monomial() {
        let c = mahler_coeffs(ctx(), &[rat(0), rat(0), rat(9)]).unwrap();
        let r = decay_margins(&c, &rat(1));
        // 9x^2: c_1 = 9, c_2 = 18 give margins 2-1 and 2-2
        assert_eq!(r.margins[1], Some(rat(1)));
        assert_eq!(r.margins[2], Some(rat(0)));
        assert_eq!(r.worst, Some((rat(0), 2)));
        assert!(r.holds_with_constant_one());
    }
}
