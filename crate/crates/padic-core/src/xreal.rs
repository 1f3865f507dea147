use crate::error::{Error, Result};
use crate::padic::Val;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// Element of the ordered monoid R' = R u {r+ : r in R} u {inf} used for
/// filtration levels. `q+` sits strictly between q and every larger real;
/// addition treats the `+` as absorbing and `inf` as a maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XReal {
    Real(BigRational),
    RealPlus(BigRational),
    Infinity,
}

impl XReal {
    pub fn int(n: i64) -> Self {
        XReal::Real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn int_plus(n: i64) -> Self {
        XReal::RealPlus(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(&self) -> Option<&BigRational> {
        match self {
            XReal::Real(q) | XReal::RealPlus(q) => Some(q),
            XReal::Infinity => None,
        }
    }

    pub fn is_plus(&self) -> bool {
        matches!(self, XReal::RealPlus(_))
    }

    /// Marks the value with a `+` (no-op on inf).
    pub fn plus(self) -> Self {
        match self {
            XReal::Real(q) | XReal::RealPlus(q) => XReal::RealPlus(q),
            XReal::Infinity => XReal::Infinity,
        }
    }

    pub fn add_int(&self, n: i64) -> Self {
        self.clone() + XReal::int(n)
    }

    /// Decides v >= self for an integer (or infinite) valuation v, with the
    /// convention v >= q+ iff v > q.
    pub fn satisfied_by(&self, v: Val) -> bool {
        match v {
            Val::Infinite => true,
            Val::Finite(n) => {
                let n = BigRational::from_integer(BigInt::from(n));
                match self {
                    XReal::Real(q) => n >= *q,
                    XReal::RealPlus(q) => n > *q,
                    XReal::Infinity => false,
                }
            }
        }
    }

    /// The smallest integer valuation meeting the bound (None for inf).
    pub fn min_int_val(&self) -> Option<i64> {
        match self {
            XReal::Real(q) => Some(ceil_rational(q)),
            XReal::RealPlus(q) => Some(floor_rational(q) + 1),
            XReal::Infinity => None,
        }
    }

    /// The largest integer n >= 0 such that v >= self + n (None if even n = 0
    /// fails, infinite valuation gives no bound).
    pub fn headroom(&self, v: Val) -> Option<Val> {
        match v {
            Val::Infinite => Some(Val::Infinite),
            Val::Finite(n) => {
                let n = BigRational::from_integer(BigInt::from(n));
                let room = match self {
                    XReal::Real(q) => {
                        let d = &n - q;
                        if d.is_negative() {
                            return None;
                        }
                        floor_rational(&d)
                    }
                    XReal::RealPlus(q) => {
                        let d = &n - q;
                        if !d.is_positive() {
                            return None;
                        }
                        // v >= (q + k)+ means v - q > k, so k <= ceil(d) - 1
                        ceil_rational(&d) - 1
                    }
                    XReal::Infinity => return None,
                };
                if room < 0 {
                    None
                } else {
                    Some(Val::Finite(room))
                }
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            XReal::Real(q) => render_rational(q),
            XReal::RealPlus(q) => format!("{}+", render_rational(q)),
            XReal::Infinity => "inf".to_string(),
        }
    }

    pub fn parse(s: &str) -> Result<XReal> {
        let s = s.trim();
        if s == "inf" {
            return Ok(XReal::Infinity);
        }
        let (body, plus) = match s.strip_suffix('+') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let q = parse_rational(body)?;
        Ok(if plus { XReal::RealPlus(q) } else { XReal::Real(q) })
    }
}

fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    } else {
        let n: BigInt = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        Ok(BigRational::from_integer(n))
    }
}

fn floor_rational(q: &BigRational) -> i64 {
    let f = q.floor();
    f.numer().to_string().parse().expect("floor fits in i64")
}

fn ceil_rational(q: &BigRational) -> i64 {
    let c = q.ceil();
    c.numer().to_string().parse().expect("ceil fits in i64")
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        use XReal::*;
        match (self, rhs) {
            (Infinity, _) | (_, Infinity) => Infinity,
            (Real(a), Real(b)) => Real(a + b),
            (Real(a), RealPlus(b)) | (RealPlus(a), Real(b)) | (RealPlus(a), RealPlus(b)) => {
                RealPlus(a + b)
            }
        }
    }
}

impl PartialOrd for XReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use XReal::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, _) => Ordering::Greater,
            (_, Infinity) => Ordering::Less,
            (Real(a), Real(b)) | (RealPlus(a), RealPlus(b)) => a.cmp(b),
            // q < q+ < q' for q < q'
            (Real(a), RealPlus(b)) => {
                if a <= b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (RealPlus(a), Real(b)) => {
                if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }
}

impl fmt::Display for XReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
