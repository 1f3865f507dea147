use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Small dense square matrix over the rationals, just enough for reflection
/// groups of low rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatMat {
    pub n: usize,
    pub data: Vec<BigRational>,
}

impl RatMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigRational::one();
        }
        RatMat { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        RatMat {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += self.at(i, k) * other.at(k, j);
                }
            }
        }
        RatMat { n, data }
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.at(i, j) * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Gaussian inverse; panics on singular input (reflection matrices are
    /// always invertible).
    pub fn inverse(&self) -> RatMat {
        let n = self.n;
        let mut a = self.data.clone();
        let mut b = RatMat::identity(n).data;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .expect("singular matrix");
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    b.swap(col * n + j, pivot * n + j);
                }
            }
            let inv = a[col * n + col].clone().recip();
            for j in 0..n {
                a[col * n + j] *= &inv;
                b[col * n + j] *= &inv;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    let av = &a[col * n + j] * &f;
                    a[r * n + j] -= av;
                    let bv = &b[col * n + j] * &f;
                    b[r * n + j] -= bv;
                }
            }
        }
        RatMat { n, data: b }
    }
}

/// Solves A x = v for square rational A (panics on singular input).
pub fn solve(a: &RatMat, v: &[BigRational]) -> Vec<BigRational> {
    a.inverse().apply(v)
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
