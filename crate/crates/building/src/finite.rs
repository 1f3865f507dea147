use crate::error::{Error, Result};
use crate::filtration::FiltrationSpec;
use crate::mat2::Mat2;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::collections::BTreeSet;

/// Matrices over Z/p^m, entries stored row-major in [0, p^m).
#[derive(Debug, Clone)]
pub struct ModCtx {
    pub p: u32,
    pub m: u32,
    pub q: u64,
}

pub type ModMat = [u64; 4];

pub const CLOSURE_CAP: usize = 1 << 21;

impl ModCtx {
    pub fn new(p: u32, m: u32) -> Result<ModCtx> {
        if m == 0 {
            return Err(Error::BadLevel("modulus exponent must be positive".into()));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|q| *q < (1u64 << 31))
            .ok_or_else(|| Error::BadLevel(format!("p^m = {p}^{m} is too large")))?;
        Ok(ModCtx { p, m, q })
    }

    pub fn identity(&self) -> ModMat {
        [1, 0, 0, 1]
    }

    fn red(&self, x: u128) -> u64 {
        (x % self.q as u128) as u64
    }

    pub fn mul(&self, a: &ModMat, b: &ModMat) -> ModMat {
        let (a, b) = (a.map(|x| x as u128), b.map(|x| x as u128));
        [
            self.red(a[0] * b[0] + a[1] * b[2]),
            self.red(a[0] * b[1] + a[1] * b[3]),
            self.red(a[2] * b[0] + a[3] * b[2]),
            self.red(a[2] * b[1] + a[3] * b[3]),
        ]
    }

    fn unit_inverse(&self, x: u64) -> Result<u64> {
        let ext = BigInt::from(x).extended_gcd(&BigInt::from(self.q));
        if !ext.gcd.is_one() {
            return Err(Error::NotIntegral(format!(
                "{x} is not invertible mod {}",
                self.q
            )));
        }
        let r = ext.x.mod_floor(&BigInt::from(self.q));
        Ok(u64::try_from(r).expect("reduced representative fits"))
    }

    pub fn inverse(&self, a: &ModMat) -> Result<ModMat> {
        let det = self.red(a[0] as u128 * a[3] as u128 + (self.q - a[1]) as u128 * a[2] as u128);
        let dinv = self.unit_inverse(det)? as u128;
        Ok([
            self.red(a[3] as u128 * dinv),
            self.red((self.q - a[1]) as u128 * dinv),
            self.red((self.q - a[2]) as u128 * dinv),
            self.red(a[0] as u128 * dinv),
        ])
    }

    pub fn pow(&self, a: &ModMat, mut n: u64) -> ModMat {
        let mut base = *a;
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn commutator(&self, a: &ModMat, b: &ModMat) -> Result<ModMat> {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        Ok(self.mul(&ab, &self.inverse(&ba)?))
    }

    /// Reduces an exact matrix mod p^m. Fails unless all entries are
    /// p-integral.
    pub fn reduce(&self, g: &Mat2) -> Result<ModMat> {
        let qb = BigInt::from(self.q);
        let mut out = [0u64; 4];
        for (i, e) in g.entries().into_iter().enumerate() {
            let den = e.denom().mod_floor(&qb);
            let ext = den.extended_gcd(&qb);
            if !ext.gcd.is_one() {
                return Err(Error::NotIntegral(format!(
                    "matrix entry {e} is not integral at p = {}",
                    self.p
                )));
            }
            let num = e.numer().mod_floor(&qb);
            let r = (num * ext.x).mod_floor(&qb);
            out[i] = u64::try_from(r).expect("reduced representative fits");
        }
        Ok(out)
    }
}

/// Closure of a generating set under multiplication. For a finite group a
/// monoid closure seeded with the identity is the generated subgroup.
pub fn closure(ctx: &ModCtx, gens: &[ModMat], cap: usize) -> Result<BTreeSet<ModMat>> {
    let mut seen: BTreeSet<ModMat> = BTreeSet::new();
    seen.insert(ctx.identity());
    let mut frontier: Vec<ModMat> = vec![ctx.identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = ctx.mul(&x, g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::ClosureTooLarge(cap));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen)
}

/// Verifies, inside SL2 mod p^m, that the step from level e to level e + 1
/// is the lower p-series step: the subgroup generated by p-th powers and
/// commutators equals the image of the level-(e+1) group, with index p^3.
#[derive(Debug, Clone)]
pub struct LowerPSeriesReport {
    pub p: u32,
    pub e: u32,
    pub m: u32,
    pub group_size: usize,
    pub next_level_size: usize,
    pub frattini_size: usize,
    pub index: usize,
    pub expected_index: usize,
    pub normal: bool,
    pub matches_next_level: bool,
}

impl LowerPSeriesReport {
    pub fn ok(&self) -> bool {
        self.normal && self.matches_next_level && self.index == self.expected_index
    }
}

pub fn lower_p_series_check(
    spec: &FiltrationSpec,
    spec_next: &FiltrationSpec,
    m: u32,
) -> Result<LowerPSeriesReport> {
    let p = spec.p;
    let e = spec.e;
    if spec_next.p != p || spec_next.e != e + 1 {
        return Err(Error::BadLevel(
            "second filtration must be one level deeper".into(),
        ));
    }
    if m < e + 2 {
        return Err(Error::BadLevel(format!(
            "need m >= e + 2 to see the next level, got m = {m}, e = {e}"
        )));
    }
    let ctx = ModCtx::new(p, m)?;
    let gens: Vec<ModMat> = spec
        .ordered_basis()
        .iter()
        .map(|g| ctx.reduce(g))
        .collect::<Result<_>>()?;
    let gens_next: Vec<ModMat> = spec_next
        .ordered_basis()
        .iter()
        .map(|g| ctx.reduce(g))
        .collect::<Result<_>>()?;
    let group = closure(&ctx, &gens, CLOSURE_CAP)?;
    let next_level = closure(&ctx, &gens_next, CLOSURE_CAP)?;

    // generators of G^p [G, G]: all p-th powers, and commutators of the
    // group generators against everything (enough, since (gh)^{-1}[gh, y]
    // products reduce to these once the closure is taken and conjugation
    // stability is confirmed below)
    let mut frat_gens: BTreeSet<ModMat> = BTreeSet::new();
    for x in &group {
        frat_gens.insert(ctx.pow(x, p as u64));
    }
    for g in &gens {
        for y in &group {
            frat_gens.insert(ctx.commutator(g, y)?);
        }
    }
    let frat_vec: Vec<ModMat> = frat_gens.into_iter().collect();
    let frattini = closure(&ctx, &frat_vec, CLOSURE_CAP)?;

    let mut normal = true;
    'outer: for g in &gens {
        let ginv = ctx.inverse(g)?;
        for h in &frattini {
            let c = ctx.mul(&ctx.mul(g, h), &ginv);
            if !frattini.contains(&c) {
                normal = false;
                break 'outer;
            }
        }
    }
    let index = group.len() / frattini.len();
    Ok(LowerPSeriesReport {
        p,
        e,
        m,
        group_size: group.len(),
        next_level_size: next_level.len(),
        frattini_size: frattini.len(),
        index,
        expected_index: (p as usize).pow(3),
        normal,
        matches_next_level: frattini == next_level,
    })
}
