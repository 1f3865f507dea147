use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Arithmetic context: an odd prime and the number of unit digits kept when a
/// value is rendered or compared at working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicCtx {
    pub p: u32,
    pub precision: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PadicCtx {
    pub fn new(p: u32, precision: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidContext(format!(
                "prime must be an odd prime >= 3, got {p}"
            )));
        }
        if precision == 0 {
            return Err(Error::InvalidContext("precision must be >= 1".into()));
        }
        Ok(PadicCtx { p, precision })
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// p^precision as a big integer.
    pub fn modulus(&self) -> BigInt {
        self.p_big().pow(self.precision)
    }
}

/// A valuation: an integer for nonzero values, infinite for exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Val {
    Finite(i64),
    Infinite,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    pub fn min(self, other: Val) -> Val {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a.min(b)),
            (Val::Finite(a), Val::Infinite) | (Val::Infinite, Val::Finite(a)) => Val::Finite(a),
            (Val::Infinite, Val::Infinite) => Val::Infinite,
        }
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
            (Val::Finite(_), Val::Infinite) => Ordering::Less,
            (Val::Infinite, Val::Finite(_)) => Ordering::Greater,
            (Val::Infinite, Val::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

/// p-adic valuation of a big integer (infinite for zero).
pub fn int_valuation(n: &BigInt, p: u32) -> Val {
    if n.is_zero() {
        return Val::Infinite;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return Val::Finite(v);
        }
    }
}

/// p-adic valuation of a rational (infinite for zero).
pub fn rational_valuation(q: &BigRational, p: u32) -> Val {
    if q.is_zero() {
        return Val::Infinite;
    }
    let vn = int_valuation(q.numer(), p).finite().unwrap();
    let vd = int_valuation(q.denom(), p).finite().unwrap();
    Val::Finite(vn - vd)
}

/// Inverse of `a` modulo `m` (m a prime power, a coprime to it).
fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    assert!(ext.gcd.is_one(), "modular inverse of non-unit");
    ext.x.mod_floor(m)
}

/// An element of Q_p. The value itself is held exactly (as a rational whose
/// p-part is extracted on demand), so field operations never lose digits and
/// cancellation to zero is detected exactly instead of producing garbage.
/// The context's precision governs digit rendering and congruence comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicNumber {
    ctx: PadicCtx,
    value: BigRational,
}

impl PadicNumber {
    pub fn from_rational(ctx: PadicCtx, value: BigRational) -> Self {
        PadicNumber { ctx, value }
    }

    pub fn from_integer(ctx: PadicCtx, n: i64) -> Self {
        PadicNumber {
            ctx,
            value: BigRational::from_integer(BigInt::from(n)),
        }
    }

    pub fn from_bigint(ctx: PadicCtx, n: BigInt) -> Self {
        PadicNumber {
            ctx,
            value: BigRational::from_integer(n),
        }
    }

    pub fn zero(ctx: PadicCtx) -> Self {
        Self::from_integer(ctx, 0)
    }

    pub fn one(ctx: PadicCtx) -> Self {
        Self::from_integer(ctx, 1)
    }

    /// p^k for any integer k.
    pub fn p_pow(ctx: PadicCtx, k: i64) -> Self {
        let p = BigRational::from_integer(ctx.p_big());
        let mut v = BigRational::one();
        for _ in 0..k.unsigned_abs() {
            v *= &p;
        }
        if k < 0 {
            v = v.recip();
        }
        PadicNumber { ctx, value: v }
    }

    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn rational(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> Val {
        rational_valuation(&self.value, self.ctx.p)
    }

    /// |x| = p^(-valuation), reported as the exponent -valuation (None for zero).
    pub fn abs_exponent(&self) -> Option<i64> {
        self.valuation().finite().map(|v| -v)
    }

    fn check_ctx(&self, other: &PadicNumber) {
        assert_eq!(
            self.ctx, other.ctx,
            "mixed p-adic contexts: {:?} vs {:?}",
            self.ctx, other.ctx
        );
    }

    pub fn add(&self, other: &PadicNumber) -> PadicNumber {
        self.check_ctx(other);
        PadicNumber {
            ctx: self.ctx,
            value: &self.value + &other.value,
        }
    }

    pub fn sub(&self, other: &PadicNumber) -> PadicNumber {
        self.check_ctx(other);
        PadicNumber {
            ctx: self.ctx,
            value: &self.value - &other.value,
        }
    }

    pub fn mul(&self, other: &PadicNumber) -> PadicNumber {
        self.check_ctx(other);
        PadicNumber {
            ctx: self.ctx,
            value: &self.value * &other.value,
        }
    }

    pub fn neg(&self) -> PadicNumber {
        PadicNumber {
            ctx: self.ctx,
            value: -self.value.clone(),
        }
    }

    pub fn inv(&self) -> Result<PadicNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(PadicNumber {
            ctx: self.ctx,
            value: self.value.recip(),
        })
    }

    pub fn div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<PadicNumber> {
        if k < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut acc = BigRational::one();
        let base = if k < 0 {
            self.value.recip()
        } else {
            self.value.clone()
        };
        for _ in 0..k.unsigned_abs() {
            acc *= &base;
        }
        Ok(PadicNumber {
            ctx: self.ctx,
            value: acc,
        })
    }

    /// The unit part value / p^valuation as an exact rational (zero for zero).
    pub fn unit_part(&self) -> BigRational {
        match self.valuation() {
            Val::Infinite => BigRational::zero(),
            Val::Finite(v) => {
                let pk = PadicNumber::p_pow(self.ctx, v);
                &self.value / pk.value
            }
        }
    }

    /// The N base-p digits of the unit part (all zero for exact zero).
    pub fn unit_digits(&self) -> Vec<u32> {
        let n = self.ctx.precision as usize;
        if self.is_zero() {
            return vec![0; n];
        }
        let m = self.ctx.modulus();
        let u = self.unit_part();
        let num = u.numer().mod_floor(&m);
        let den_inv = mod_inverse(u.denom(), &m);
        let mut r: BigUint = (num * den_inv)
            .mod_floor(&m)
            .to_biguint()
            .expect("canonical residue is nonnegative");
        let p = BigUint::from(self.ctx.p);
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let (q, d) = r.div_rem(&p);
            digits.push(d.to_string().parse::<u32>().unwrap());
            r = q;
        }
        digits
    }

    /// Congruence at working precision: x = y mod p^(min valuation + N).
    pub fn eq_at_precision(&self, other: &PadicNumber) -> bool {
        self.check_ctx(other);
        let d = self.sub(other);
        if d.is_zero() {
            return true;
        }
        let cut = match self.valuation().min(other.valuation()) {
            Val::Infinite => return false, // both zero handled above
            Val::Finite(v) => v + self.ctx.precision as i64,
        };
        match d.valuation() {
            Val::Infinite => true,
            Val::Finite(vd) => vd >= cut,
        }
    }

    /// Binomial coefficient C(a, k) = a(a-1)...(a-k+1)/k!, exact.
    /// Integral (valuation >= 0) whenever a is a p-adic integer.
    pub fn binomial(&self, k: u64) -> PadicNumber {
        let mut num = BigRational::one();
        let mut den = BigInt::one();
        for i in 0..k {
            let ai = &self.value - BigRational::from_integer(BigInt::from(i));
            num *= ai;
            den *= BigInt::from(i + 1);
        }
        PadicNumber {
            ctx: self.ctx,
            value: num / BigRational::from_integer(den),
        }
    }

    /// Renders as `p^v * (d0 + d1*p + d2*p^2 + ...)` with zero digits omitted.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let v = self.valuation().finite().unwrap();
        let p = self.ctx.p;
        let digits = self.unit_digits();
        let mut terms = Vec::new();
        for (i, d) in digits.iter().enumerate() {
            if *d == 0 {
                continue;
            }
            let t = match i {
                0 => format!("{d}"),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            // unit has all retained digits zero only if value is divisible by
            // p^(v+N) relative to its own valuation, which cannot happen; but
            // keep a defensive rendering.
            terms.push("0".to_string());
        }
        let unit = format!("({})", terms.join(" + "));
        if v == 0 {
            unit
        } else {
            format!("{p}^{v} * {unit}")
        }
    }

    /// Parses the `render` grammar, plus bare integers, rationals `a/b`,
    /// and the short form `p^v*u` with integer u.
    pub fn parse(ctx: PadicCtx, s: &str) -> Result<PadicNumber> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty p-adic literal".into()));
        }
        if s == "0" {
            return Ok(PadicNumber::zero(ctx));
        }
        // Split an optional leading `p^v *` prefix.
        let (v, rest) = match parse_power_prefix(ctx.p, s) {
            Some((v, rest)) => (v, rest),
            None => (0, s),
        };
        let rest = rest.trim();
        let unit = if rest.is_empty() {
            BigRational::one()
        } else if let Some(stripped) = rest.strip_prefix('(') {
            let inner = stripped
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parens in `{s}`")))?;
            parse_digit_sum(ctx.p, inner)?
        } else {
            parse_plain_rational(rest)?
        };
        let scale = PadicNumber::p_pow(ctx, v).value;
        Ok(PadicNumber {
            ctx,
            value: unit * scale,
        })
    }
}

/// Parses `p^v * rest` or `p^v*rest` or just `p^v`; returns (v, rest).
fn parse_power_prefix(p: u32, s: &str) -> Option<(i64, &str)> {
    let pfx = format!("{p}^");
    let body = s.strip_prefix(&pfx)?;
    // exponent: optional sign plus digits
    let mut end = 0;
    let bytes = body.as_bytes();
    if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
        end += 1;
    }
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    let v: i64 = body[..end].parse().ok()?;
    let rest = body[end..].trim_start();
    let rest = rest.strip_prefix('*').unwrap_or(rest);
    Some((v, rest))
}

fn parse_plain_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator `{a}`")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator `{b}`")))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer `{s}`")))?;
        Ok(BigRational::from_integer(n))
    }
}

/// Parses `d0 + d1*p + d2*p^2 + ...` (terms in any order, zero terms allowed).
fn parse_digit_sum(p: u32, s: &str) -> Result<BigRational> {
    let mut total = BigInt::zero();
    for term in s.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse("empty term in digit sum".into()));
        }
        let (coef, pow): (BigInt, u32) = if let Some((c, rest)) = term.split_once('*') {
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad digit `{c}`")))?;
            let rest = rest.trim();
            let pw = if let Some(e) = rest.strip_prefix(&format!("{p}^")) {
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad exponent `{e}`")))?
            } else if rest == p.to_string() {
                1
            } else {
                return Err(Error::Parse(format!("expected power of {p}, got `{rest}`")));
            };
            (c, pw)
        } else {
            let c: BigInt = term
                .parse()
                .map_err(|_| Error::Parse(format!("bad digit `{term}`")))?;
            (c, 0)
        };
        total += coef * BigInt::from(p).pow(pow);
    }
    Ok(BigRational::from_integer(total))
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicCtx {
        PadicCtx::new(3, 6).unwrap()
    }

    #[test]
    fn product_one_plus_p_times_one_minus_p() {
        let c = ctx();
        let x = PadicNumber::from_integer(c, 4); // 1 + 3
        let y = PadicNumber::from_integer(c, -2); // 1 - 3
        let z = x.mul(&y); // 1 - 9 = -8
        assert_eq!(z.valuation(), Val::Finite(0));
        let expect = PadicNumber::from_integer(c, -8);
        assert_eq!(z, expect);
        // digits of -8 mod 3^6 = 721 = 1 + 2*9 + 2*27 + 2*81 + 2*243
        assert_eq!(z.unit_digits(), vec![1, 0, 2, 2, 2, 2]);
    }

    #[test]
    fn inverse_of_p() {
        let c = ctx();
        let x = PadicNumber::p_pow(c, 1);
        let inv = x.inv().unwrap();
        assert_eq!(inv.valuation(), Val::Finite(-1));
        assert_eq!(inv.unit_digits()[0], 1);
        assert!(inv.unit_digits()[1..].iter().all(|&d| d == 0));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let c = ctx();
        assert_eq!(PadicNumber::zero(c).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn binomial_nine_choose_three() {
        let c = ctx();
        let a = PadicNumber::from_integer(c, 9);
        let b = a.binomial(3);
        assert_eq!(b.rational(), &BigRational::from_integer(BigInt::from(84)));
        assert_eq!(b.valuation(), Val::Finite(1));
    }

    #[test]
    fn render_parse_roundtrip() {
        let c = ctx();
        for n in [-8i64, 1, 7, 84, -1, 243, 5] {
            for k in [-2i64, 0, 3] {
                let x = PadicNumber::from_integer(c, n).mul(&PadicNumber::p_pow(c, k));
                let s = x.render();
                let y = PadicNumber::parse(c, &s).unwrap();
                assert!(x.eq_at_precision(&y), "roundtrip failed for {s}");
            }
        }
        let z = PadicNumber::parse(c, "0").unwrap();
        assert!(z.is_zero());
        let w = PadicNumber::parse(c, "3^-1*2").unwrap();
        assert_eq!(w.valuation(), Val::Finite(-1));
    }

    #[test]
    fn context_rejects_bad_primes() {
        assert!(PadicCtx::new(2, 6).is_err());
        assert!(PadicCtx::new(9, 6).is_err());
        assert!(PadicCtx::new(3, 0).is_err());
    }
}
