use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use padic_core::{PadicCtx, PadicNumber, Val, XReal};
use std::collections::BTreeMap;

pub type MultiIndex = Vec<u32>;

/// Common shape of a truncated series algebra: one weight per variable and a
/// total-degree cutoff. Coefficients above the cutoff are not stored; what
/// is known about them lives in the `Tail` marker of each series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesShape {
    pub ctx: PadicCtx,
    pub weights: Vec<BigRational>,
    pub truncation: u32,
}

impl SeriesShape {
    pub fn new(ctx: PadicCtx, nvars: usize, truncation: u32) -> SeriesShape {
        SeriesShape {
            ctx,
            weights: vec![BigRational::one(); nvars],
            truncation,
        }
    }

    pub fn with_weights(ctx: PadicCtx, weights: Vec<BigRational>, truncation: u32) -> Result<SeriesShape> {
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::Shape("weights must be positive".into()));
        }
        Ok(SeriesShape {
            ctx,
            weights,
            truncation,
        })
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    /// Weighted total degree of a monomial.
    pub fn tau(&self, alpha: &[u32]) -> BigRational {
        alpha
            .iter()
            .zip(&self.weights)
            .map(|(a, w)| w * BigRational::from_integer(BigInt::from(*a)))
            .sum()
    }

    pub fn min_weight(&self) -> BigRational {
        self.weights.iter().min().cloned().expect("nonempty shape")
    }

    fn degree(alpha: &[u32]) -> u32 {
        alpha.iter().sum()
    }
}

/// What is known about the dropped coefficients of total degree above the
/// truncation cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// nothing was dropped
    Exact,
    /// every dropped coefficient has valuation at least this
    IntegralShift(BigRational),
    /// dropped terms are pure powers of one variable, the coefficient of
    /// b^k having valuation at least shift - v_p(k)
    ReciprocalIndex { var: usize, shift: BigRational },
    /// no usable bound
    Unknown,
}

impl Tail {
    fn combine_add(a: &Tail, b: &Tail) -> Tail {
        match (a, b) {
            (Tail::Exact, t) | (t, Tail::Exact) => t.clone(),
            (Tail::IntegralShift(s), Tail::IntegralShift(t)) => {
                Tail::IntegralShift(s.min(t).clone())
            }
            (
                Tail::ReciprocalIndex { var: v1, shift: s1 },
                Tail::ReciprocalIndex { var: v2, shift: s2 },
            ) if v1 == v2 => Tail::ReciprocalIndex {
                var: *v1,
                shift: s1.min(s2).clone(),
            },
            _ => Tail::Unknown,
        }
    }
}

/// A distribution written in the variables b_i, truncated in total degree.
/// All stored coefficients are exact; zero coefficients are not stored.
#[derive(Debug, Clone)]
pub struct DistSeries {
    pub shape: SeriesShape,
    pub coeffs: BTreeMap<MultiIndex, PadicNumber>,
    pub tail: Tail,
}

/// sup over monomials of |d_alpha| r^{tau(alpha)} at r = p^{-rho}, reported
/// on the valuation scale: the norm is p^{-exponent}. `certified` means the
/// tail provably cannot exceed the stored part, so the value is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormExponent {
    pub exponent: Option<BigRational>,
    pub certified: bool,
}

fn check_rho(rho: &BigRational) -> Result<()> {
    if !rho.is_positive() || rho > &BigRational::one() {
        return Err(Error::BadRadius(format!(
            "radius exponent must lie in (0, 1], got {rho}"
        )));
    }
    Ok(())
}

/// Smallest value of rho_w * k - v_p(k) over integers k > t, as an exact
/// lower bound (attained in the generic class).
fn reciprocal_tail_floor(p: u32, t: u32, rho_w: &BigRational) -> BigRational {
    let mut best: Option<BigRational> = None;
    let mut j: u32 = 0;
    loop {
        let pj = BigInt::from(p).pow(j);
        let k = {
            let t1 = BigInt::from(t) + BigInt::one();
            ((&t1 + &pj - BigInt::one()) / &pj) * &pj
        };
        let cand = rho_w * BigRational::from_integer(k.clone())
            - BigRational::from_integer(BigInt::from(j));
        let better = best.as_ref().is_none_or(|b| &cand < b);
        if better {
            best = Some(cand.clone());
        }
        // once k is the pure power p^j and the step to the next class grows,
        // later candidates only increase
        let growing = rho_w * BigRational::from_integer(&pj * BigInt::from(p - 1))
            > BigRational::one();
        if pj > BigInt::from(t) && growing && !better {
            return best.expect("at least one candidate");
        }
        j += 1;
    }
}

impl DistSeries {
    pub fn zero(shape: SeriesShape) -> DistSeries {
        DistSeries {
            shape,
            coeffs: BTreeMap::new(),
            tail: Tail::Exact,
        }
    }

    pub fn constant(shape: SeriesShape, c: PadicNumber) -> DistSeries {
        let mut s = DistSeries::zero(shape);
        if !c.is_zero() {
            s.coeffs.insert(vec![0; s.shape.nvars()], c);
        }
        s
    }

    pub fn one(shape: SeriesShape) -> DistSeries {
        let c = PadicNumber::one(shape.ctx);
        DistSeries::constant(shape, c)
    }

    pub fn var(shape: SeriesShape, i: usize) -> Result<DistSeries> {
        if i >= shape.nvars() {
            return Err(Error::Shape(format!("variable {i} out of range")));
        }
        if shape.truncation < 1 {
            return Err(Error::Truncation("cannot store degree 1".into()));
        }
        let mut s = DistSeries::zero(shape);
        let mut alpha = vec![0; s.shape.nvars()];
        alpha[i] = 1;
        s.coeffs.insert(alpha, PadicNumber::one(s.shape.ctx));
        Ok(s)
    }

    fn check_shape(&self, other: &DistSeries) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::Shape("series shapes differ".into()));
        }
        Ok(())
    }

    fn insert(&mut self, alpha: MultiIndex, c: PadicNumber) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &DistSeries) -> Result<DistSeries> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (alpha, c) in &other.coeffs {
            out.insert(alpha.clone(), c.clone());
        }
        out.tail = Tail::combine_add(&self.tail, &other.tail);
        Ok(out)
    }

    pub fn sub(&self, other: &DistSeries) -> Result<DistSeries> {
        self.add(&other.scale(&PadicNumber::from_integer(other.shape.ctx, -1)))
    }

    pub fn scale(&self, c: &PadicNumber) -> DistSeries {
        if c.is_zero() {
            return DistSeries::zero(self.shape.clone());
        }
        let shift = match c.valuation() {
            Val::Finite(v) => BigRational::from_integer(BigInt::from(v)),
            Val::Infinite => unreachable!("nonzero scalar"),
        };
        let tail = match &self.tail {
            Tail::Exact => Tail::Exact,
            Tail::IntegralShift(s) => Tail::IntegralShift(s + &shift),
            Tail::ReciprocalIndex { var, shift: s } => Tail::ReciprocalIndex {
                var: *var,
                shift: s + &shift,
            },
            Tail::Unknown => Tail::Unknown,
        };
        DistSeries {
            shape: self.shape.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, d)| (a.clone(), d.mul(c)))
                .collect(),
            tail,
        }
    }

    fn min_coeff_valuation(&self) -> Option<i64> {
        self.coeffs
            .values()
            .filter_map(|c| c.valuation().finite())
            .min()
    }

    /// Truncated product. Stored coefficients of the result are exact; any
    /// dropped or unknowable terms are accounted for in the tail marker.
    pub fn mul(&self, other: &DistSeries) -> Result<DistSeries> {
        self.check_shape(other)?;
        let t = self.shape.truncation;
        let mut out = DistSeries::zero(self.shape.clone());
        let mut dropped_min: Option<i64> = None;
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let deg = SeriesShape::degree(a) + SeriesShape::degree(b);
                let c = ca.mul(cb);
                if deg > t {
                    if let Val::Finite(v) = c.valuation() {
                        dropped_min = Some(dropped_min.map_or(v, |m| m.min(v)));
                    }
                    continue;
                }
                let alpha: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.insert(alpha, c);
            }
        }
        let dropped = dropped_min.map(big);
        out.tail = match (&self.tail, &other.tail) {
            (Tail::Exact, Tail::Exact) => match dropped {
                None => Tail::Exact,
                Some(v) => Tail::IntegralShift(v),
            },
            (Tail::Exact, Tail::IntegralShift(s)) => {
                cross_tail_bound(self.min_coeff_valuation(), s, dropped)
            }
            (Tail::IntegralShift(s), Tail::Exact) => {
                cross_tail_bound(other.min_coeff_valuation(), s, dropped)
            }
            (Tail::IntegralShift(s1), Tail::IntegralShift(s2)) => {
                let mut bound = s1 + s2;
                if let Some(m2) = other.min_coeff_valuation() {
                    bound = bound.min(s1 + big(m2));
                }
                if let Some(m1) = self.min_coeff_valuation() {
                    bound = bound.min(s2 + big(m1));
                }
                if let Some(v) = dropped {
                    bound = bound.min(v);
                }
                Tail::IntegralShift(bound)
            }
            _ => Tail::Unknown,
        };
        Ok(out)
    }

    /// (1 + b_i)^a for a p-adic integer exponent a, expanded through the
    /// binomial series. Exact when a is a small nonnegative integer.
    pub fn one_plus_var_pow(shape: SeriesShape, i: usize, a: &PadicNumber) -> Result<DistSeries> {
        if i >= shape.nvars() {
            return Err(Error::Shape(format!("variable {i} out of range")));
        }
        if matches!(a.valuation(), Val::Finite(v) if v < 0) {
            return Err(Error::NotIntegral(format!(
                "binomial exponent {} has negative valuation",
                a.render()
            )));
        }
        let t = shape.truncation;
        let exact = a
            .rational()
            .is_integer()
            .then(|| a.rational().to_integer())
            .is_some_and(|n| !n.is_negative() && n <= BigInt::from(t));
        let mut s = DistSeries::zero(shape);
        for k in 0..=t {
            let mut alpha = vec![0; s.shape.nvars()];
            alpha[i] = k;
            s.insert(alpha, a.binomial(k as u64));
        }
        s.tail = if exact {
            Tail::Exact
        } else {
            Tail::IntegralShift(BigRational::zero())
        };
        Ok(s)
    }

    /// The dirac element of a coordinate tuple: prod_i (1 + b_i)^{a_i}.
    pub fn dirac(shape: SeriesShape, a: &[PadicNumber]) -> Result<DistSeries> {
        if a.len() != shape.nvars() {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                shape.nvars(),
                a.len()
            )));
        }
        let mut out = DistSeries::one(shape.clone());
        for (i, ai) in a.iter().enumerate() {
            let f = DistSeries::one_plus_var_pow(shape.clone(), i, ai)?;
            out = out.mul(&f)?;
        }
        // every coefficient of every factor is a binomial of an integral
        // number, so anything dropped is still integral
        if !matches!(out.tail, Tail::Exact) {
            out.tail = Tail::IntegralShift(BigRational::zero());
        }
        Ok(out)
    }

    /// log(1 + b_i) truncated, with the reciprocal-index tail marker.
    pub fn log_one_plus(shape: SeriesShape, i: usize) -> Result<DistSeries> {
        if i >= shape.nvars() {
            return Err(Error::Shape(format!("variable {i} out of range")));
        }
        let ctx = shape.ctx;
        let mut s = DistSeries::zero(shape);
        for k in 1..=s.shape.truncation {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let c = PadicNumber::from_rational(
                ctx,
                BigRational::new(BigInt::from(sign), BigInt::from(k)),
            );
            let mut alpha = vec![0; s.shape.nvars()];
            alpha[i] = k;
            s.insert(alpha, c);
        }
        s.tail = Tail::ReciprocalIndex {
            var: i,
            shift: BigRational::zero(),
        };
        Ok(s)
    }

    /// Lower bound for v(d_alpha) + rho tau(alpha) over the dropped range;
    /// None when nothing is known, Infinity when nothing was dropped.
    fn tail_exponent_bound(&self, rho: &BigRational) -> Option<XReal> {
        let t = self.shape.truncation;
        match &self.tail {
            Tail::Exact => Some(XReal::Infinity),
            Tail::IntegralShift(s) => {
                let deg = BigRational::from_integer(BigInt::from(t + 1));
                Some(XReal::Real(s + rho * self.shape.min_weight() * deg))
            }
            Tail::ReciprocalIndex { var, shift } => {
                let rho_w = rho * &self.shape.weights[*var];
                let p = self.shape.ctx.p;
                Some(XReal::Real(shift + reciprocal_tail_floor(p, t, &rho_w)))
            }
            Tail::Unknown => None,
        }
    }

    /// The r-norm at r = p^{-rho}, as an exponent.
    pub fn norm_exponent(&self, rho: &BigRational) -> Result<NormExponent> {
        check_rho(rho)?;
        let head: Option<BigRational> = self
            .coeffs
            .iter()
            .filter_map(|(alpha, c)| {
                c.valuation()
                    .finite()
                    .map(|v| big(v) + rho * self.shape.tau(alpha))
            })
            .min();
        let tail = self.tail_exponent_bound(rho);
        Ok(match (head, tail) {
            (h, Some(XReal::Infinity)) => NormExponent {
                exponent: h,
                certified: true,
            },
            (Some(h), Some(XReal::Real(t))) => {
                if t >= h {
                    NormExponent {
                        exponent: Some(h),
                        certified: true,
                    }
                } else {
                    NormExponent {
                        exponent: Some(t),
                        certified: false,
                    }
                }
            }
            (None, Some(XReal::Real(t))) => NormExponent {
                exponent: Some(t),
                certified: false,
            },
            (h, _) => NormExponent {
                exponent: h,
                certified: false,
            },
        })
    }

    /// Pairs the distribution with a function given by its coefficients in
    /// the binomial basis (finitely many, inside the truncation range).
    pub fn pair(&self, f: &BTreeMap<MultiIndex, PadicNumber>) -> Result<PadicNumber> {
        let t = self.shape.truncation;
        let mut acc = PadicNumber::zero(self.shape.ctx);
        for (alpha, c) in f {
            if alpha.len() != self.shape.nvars() {
                return Err(Error::Shape("pairing index arity mismatch".into()));
            }
            if SeriesShape::degree(alpha) > t {
                return Err(Error::Truncation(format!(
                    "function support reaches degree {} beyond cutoff {}",
                    SeriesShape::degree(alpha),
                    t
                )));
            }
            if let Some(d) = self.coeffs.get(alpha) {
                acc = acc.add(&d.mul(c));
            }
        }
        Ok(acc)
    }

    /// Pairing against a one-variable function placed on the given axis.
    pub fn pair_univariate(&self, var: usize, coeffs: &[PadicNumber]) -> Result<PadicNumber> {
        let mut f = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut alpha = vec![0; self.shape.nvars()];
            alpha[var] = k as u32;
            f.insert(alpha, c.clone());
        }
        self.pair(&f)
    }

    /// Substitutes series with zero constant term for the variables. Sound
    /// tail bookkeeping requires integral substitution images.
    pub fn substitute(&self, images: &[DistSeries]) -> Result<DistSeries> {
        if images.len() != self.shape.nvars() {
            return Err(Error::Shape(format!(
                "expected {} substitution images, got {}",
                self.shape.nvars(),
                images.len()
            )));
        }
        let target_shape = images
            .first()
            .map(|s| s.shape.clone())
            .ok_or_else(|| Error::Shape("cannot substitute in zero variables".into()))?;
        for img in images {
            if img.shape != target_shape {
                return Err(Error::Shape("substitution images differ in shape".into()));
            }
            if img.coeffs.contains_key(&vec![0; target_shape.nvars()]) {
                return Err(Error::Shape(
                    "substitution image has a constant term".into(),
                ));
            }
            if !matches!(img.tail, Tail::Exact) {
                return Err(Error::Shape(
                    "substitution images must be exact polynomials".into(),
                ));
            }
        }
        let images_integral = images
            .iter()
            .all(|img| img.min_coeff_valuation().is_none_or(|m| m >= 0));
        // powers of each image, built once
        let mut powers: Vec<Vec<DistSeries>> = Vec::with_capacity(images.len());
        let max_exp: Vec<u32> = (0..images.len())
            .map(|i| {
                self.coeffs
                    .keys()
                    .map(|alpha| alpha[i])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for (i, img) in images.iter().enumerate() {
            let mut row = vec![DistSeries::one(target_shape.clone())];
            for k in 1..=max_exp[i] {
                let next = row[(k - 1) as usize].mul(img)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = DistSeries::zero(target_shape.clone());
        for (alpha, c) in &self.coeffs {
            let mut term = DistSeries::one(target_shape.clone());
            for (i, a) in alpha.iter().enumerate() {
                term = term.mul(&powers[i][*a as usize])?;
            }
            out = out.add(&term.scale(c))?;
        }
        // dropped source terms have degree above the cutoff, and integral
        // images of positive lowest degree keep them there with valuations
        // no lower than the source tail bound
        let source_tail = match &self.tail {
            Tail::Exact => Tail::Exact,
            Tail::IntegralShift(s) if images_integral => Tail::IntegralShift(s.clone()),
            _ => Tail::Unknown,
        };
        out.tail = Tail::combine_add(&out.tail, &source_tail);
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(alpha, c)| {
                serde_json::json!({
                    "alpha": alpha,
                    "coeff": c.render(),
                })
            })
            .collect();
        let tail = match &self.tail {
            Tail::Exact => "exact".to_string(),
            Tail::IntegralShift(s) => format!("integral-shift {s}"),
            Tail::ReciprocalIndex { var, shift } => {
                format!("reciprocal-index var {var} shift {shift}")
            }
            Tail::Unknown => "unknown".to_string(),
        };
        serde_json::json!({
            "nvars": self.shape.nvars(),
            "truncation": self.shape.truncation,
            "terms": terms,
            "tail": tail,
        })
    }
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Tail bound for exact x shifted: the only unknown terms are products of
/// stored coefficients of the exact factor with tail terms of the other.
fn cross_tail_bound(
    exact_head_min: Option<i64>,
    shift: &BigRational,
    dropped: Option<BigRational>,
) -> Tail {
    match exact_head_min {
        // the exact factor is the zero series, so the product is exact zero
        None => Tail::Exact,
        Some(m) => {
            let mut bound = shift + big(m);
            if let Some(v) = dropped {
                bound = bound.min(v);
            }
            Tail::IntegralShift(bound)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicCtx {
        PadicCtx::new(3, 12).unwrap()
    }

    fn shape1() -> SeriesShape {
        SeriesShape::new(ctx(), 1, 30)
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn dirac_of_integer_is_the_exact_binomial_polynomial() {
        let d = DistSeries::dirac(shape1(), &[PadicNumber::from_integer(ctx(), 4)]).unwrap();
        assert_eq!(d.tail, Tail::Exact);
        assert_eq!(d.coeffs.len(), 5);
        assert_eq!(d.coeffs[&vec![2u32]].rational(), &rat(6, 1));
    }

    #[test]
    fn dirac_norm_is_one_and_certified() {
        // a genuinely p-adic coordinate: truncation drops real mass
        let a = PadicNumber::from_rational(ctx(), rat(1, 2));
        let d = DistSeries::dirac(shape1(), &[a]).unwrap();
        assert!(matches!(d.tail, Tail::IntegralShift(_)));
        let n = d.norm_exponent(&rat(1, 2)).unwrap();
        assert_eq!(n.exponent, Some(rat(0, 1)));
        assert!(n.certified);
    }

    #[test]
    fn dirac_multiplies_like_the_group() {
        let a = PadicNumber::from_integer(ctx(), 5);
        let b = PadicNumber::from_integer(ctx(), 7);
        let da = DistSeries::dirac(shape1(), std::slice::from_ref(&a)).unwrap();
        let db = DistSeries::dirac(shape1(), std::slice::from_ref(&b)).unwrap();
        let dsum = DistSeries::dirac(shape1(), &[a.add(&b)]).unwrap();
        let prod = da.mul(&db).unwrap();
        assert_eq!(prod.coeffs, dsum.coeffs);
    }

    #[test]
    fn log_norm_exponents_across_radii() {
        let l = DistSeries::log_one_plus(shape1(), 0).unwrap();
        // head: min over k of (rho k - v_3(k)), tail certified by the marker
        let cases = [
            (rat(1, 1), rat(1, 1)),
            (rat(1, 2), rat(1, 2)),
            (rat(1, 3), rat(0, 1)),
        ];
        for (rho, want) in cases {
            let n = l.norm_exponent(&rho).unwrap();
            assert_eq!(n.exponent, Some(want), "rho = {rho}");
            assert!(n.certified, "rho = {rho}");
        }
    }

    #[test]
    fn log_pairs_to_the_derivative_at_zero() {
        let l = DistSeries::log_one_plus(shape1(), 0).unwrap();
        // x^2 has binomial coefficients [0, 1, 2]
        let c: Vec<PadicNumber> = [0i64, 1, 2]
            .iter()
            .map(|n| PadicNumber::from_integer(ctx(), *n))
            .collect();
        assert!(l.pair_univariate(0, &c).unwrap().is_zero());
        // C(x, 2) pairs to -1/2
        let c: Vec<PadicNumber> = [0i64, 0, 1]
            .iter()
            .map(|n| PadicNumber::from_integer(ctx(), *n))
            .collect();
        assert_eq!(
            l.pair_univariate(0, &c).unwrap().rational(),
            &rat(-1, 2)
        );
        // x^3 = C(x,1) + 6 C(x,2) + 6 C(x,3) also has zero derivative at 0
        let c: Vec<PadicNumber> = [0i64, 1, 6, 6]
            .iter()
            .map(|n| PadicNumber::from_integer(ctx(), *n))
            .collect();
        assert!(l.pair_univariate(0, &c).unwrap().is_zero());
    }

    #[test]
    fn dirac_pairs_to_evaluation() {
        let a = PadicNumber::from_integer(ctx(), 7);
        let d = DistSeries::dirac(shape1(), &[a]).unwrap();
        // f = x^2 via binomial coefficients [0, 1, 2]
        let c: Vec<PadicNumber> = [0i64, 1, 2]
            .iter()
            .map(|n| PadicNumber::from_integer(ctx(), *n))
            .collect();
        assert_eq!(d.pair_univariate(0, &c).unwrap().rational(), &rat(49, 1));
    }

    #[test]
    fn pairing_beyond_truncation_is_refused() {
        let shape = SeriesShape::new(ctx(), 1, 4);
        let d = DistSeries::one(shape);
        let mut f = BTreeMap::new();
        f.insert(vec![5u32], PadicNumber::one(ctx()));
        assert!(matches!(d.pair(&f), Err(Error::Truncation(_))));
    }

    #[test]
    fn product_records_dropped_valuations() {
        let shape = SeriesShape::new(ctx(), 1, 3);
        let b = DistSeries::var(shape.clone(), 0).unwrap();
        let q = b.mul(&b).unwrap(); // b^2, exact
        assert_eq!(q.tail, Tail::Exact);
        let dropped = q.mul(&q).unwrap(); // b^4 vanishes from storage
        assert!(dropped.coeffs.is_empty());
        assert_eq!(dropped.tail, Tail::IntegralShift(rat(0, 1)));
    }

    #[test]
    fn substitution_is_composition_of_polynomials() {
        let shape = shape1();
        let b = DistSeries::var(shape.clone(), 0).unwrap();
        let image = b.mul(&b).unwrap().add(&b.scale(&PadicNumber::from_integer(ctx(), 3))).unwrap();
        // delta = b'^2 + 1 maps to (b^2 + 3b)^2 + 1
        let src = b.mul(&b).unwrap().add(&DistSeries::one(shape)).unwrap();
        let got = src.substitute(std::slice::from_ref(&image)).unwrap();
        let want = image.mul(&image).unwrap().add(&DistSeries::one(shape1())).unwrap();
        assert_eq!(got.coeffs, want.coeffs);
        assert_eq!(got.tail, Tail::Exact);
    }
}
