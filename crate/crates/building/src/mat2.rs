use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::{rational_valuation, PadicCtx, PadicNumber, Val};
use std::fmt;

/// Exact 2x2 matrix over Q with determinant 1, the ambient group for the
/// rank-1 computations. Entries are rationals; p-adic valuations are taken
/// per entry on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// p^k as an exact rational, k of either sign.
pub fn p_pow(p: u32, k: i64) -> BigRational {
    let v = BigRational::from_integer(BigInt::from(p).pow(k.unsigned_abs() as u32));
    if k < 0 {
        v.recip()
    } else {
        v
    }
}

impl Mat2 {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn identity() -> Self {
        Mat2 {
            a: BigRational::one(),
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::one(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Upper unipotent [[1, x], [0, 1]].
    pub fn upper(x: BigRational) -> Self {
        Mat2 {
            a: BigRational::one(),
            b: x,
            c: BigRational::zero(),
            d: BigRational::one(),
        }
    }

    /// Lower unipotent [[1, 0], [y, 1]].
    pub fn lower(y: BigRational) -> Self {
        Mat2 {
            a: BigRational::one(),
            b: BigRational::zero(),
            c: y,
            d: BigRational::one(),
        }
    }

    /// Diagonal torus element [[u, 0], [0, 1/u]].
    pub fn torus(u: BigRational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::Degenerate("torus parameter must be nonzero".into()));
        }
        Ok(Mat2 {
            a: u.clone(),
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: u.recip(),
        })
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Inverse via the adjugate (valid because det = 1).
    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn pow(&self, k: i64) -> Mat2 {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Mat2::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// h g h^{-1}.
    pub fn conjugate_by(&self, h: &Mat2) -> Mat2 {
        h.mul(self).mul(&h.inverse())
    }

    pub fn commutator(&self, o: &Mat2) -> Mat2 {
        self.mul(o).mul(&self.inverse()).mul(&o.inverse())
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn entries(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Minimum p-adic valuation over the entries (infinite never occurs for
    /// unimodular matrices).
    pub fn min_valuation(&self, p: u32) -> i64 {
        self.entries()
            .iter()
            .map(|e| rational_valuation(e, p))
            .fold(Val::Infinite, Val::min)
            .finite()
            .expect("unimodular matrix has a nonzero entry")
    }

    /// True if every entry lies in Z_p.
    pub fn is_p_integral(&self, p: u32) -> bool {
        self.min_valuation(p) >= 0
    }

    pub fn entry_valuation(&self, which: char, p: u32) -> Val {
        let e = match which {
            'a' => &self.a,
            'b' => &self.b,
            'c' => &self.c,
            'd' => &self.d,
            _ => panic!("entry must be one of a, b, c, d"),
        };
        rational_valuation(e, p)
    }

    /// Parses `[[a, b], [c, d]]` where entries are rationals or p-adic
    /// literals such as `3^2*5`; the determinant must be exactly 1.
    pub fn parse(ctx: PadicCtx, s: &str) -> Result<Mat2> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(|| padic_core::Error::Parse(format!("expected [[a,b],[c,d]], got `{s}`")))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(padic_core::Error::Parse("expected two rows".into()).into());
        }
        let mut vals = Vec::new();
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != 2 {
                return Err(padic_core::Error::Parse("expected two entries per row".into()).into());
            }
            for cell in cells {
                let v = PadicNumber::parse(ctx, cell)?;
                vals.push(v.rational().clone());
            }
        }
        let mut it = vals.into_iter();
        Mat2::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )
    }

    pub fn render(&self) -> String {
        format!("[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_must_be_one() {
        assert!(Mat2::new(rat(1), rat(0), rat(0), rat(2)).is_err());
        assert!(Mat2::new(rat(1), rat(5), rat(0), rat(1)).is_ok());
    }

    #[test]
    fn inverse_and_commutator() {
        let g = Mat2::upper(rat(3));
        let h = Mat2::lower(rat(9));
        assert!(g.mul(&g.inverse()).is_identity());
        let k = g.commutator(&h);
        assert!(k.det().is_one());
        assert!(!k.is_identity());
    }

    #[test]
    fn parse_matrix_entries() {
        let ctx = PadicCtx::new(3, 12).unwrap();
        let m = Mat2::parse(ctx, "[[1, 9], [0, 1]]").unwrap();
        assert_eq!(m, Mat2::upper(rat(9)));
        let m2 = Mat2::parse(ctx, "[[1, 3^2*1], [0, 1]]").unwrap();
        assert_eq!(m2, m);
        assert!(Mat2::parse(ctx, "[[1, 1], [1, 1]]").is_err());
    }

    #[test]
    fn entry_valuations() {
        let m = Mat2::upper(rat(9));
        assert_eq!(m.entry_valuation('b', 3), Val::Finite(2));
        assert_eq!(m.entry_valuation('c', 3), Val::Infinite);
        assert!(m.is_p_integral(3));
        let t = Mat2::torus(BigRational::new(1.into(), 3.into())).unwrap();
        assert_eq!(t.min_valuation(3), -1);
    }
}
