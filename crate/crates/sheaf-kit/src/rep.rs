//! Finite-level smooth representations of SL2(Q_p) with exact rational
//! matrices: the trivial representation, functions on the projective line
//! over F_p, and their quotient. Every action matrix is produced by reducing
//! the group element modulo p^level first, so the congruence kernel at that
//! level provably acts as the identity.

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use building::{p_pow, Mat2, ModCtx, ModMat};
use num_rational::BigRational;
use num_traits::One;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Trivial,
    P1Functions,
    Steinberg,
}

/// A representation whose action factors through SL2(Z/p^level). The action
/// oracle accepts any group element with p-integral entries; `dualized`
/// switches to the contragredient, which at finite level is the full linear
/// dual.
#[derive(Debug, Clone)]
pub struct SmoothRep {
    pub name: String,
    pub p: u32,
    pub level: u32,
    pub dim: usize,
    pub kind: RepKind,
    pub dualized: bool,
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl SmoothRep {
    pub fn trivial(p: u32) -> SmoothRep {
        SmoothRep {
            name: "trivial".into(),
            p,
            level: 1,
            dim: 1,
            kind: RepKind::Trivial,
            dualized: false,
        }
    }

    /// K-valued functions on P^1(F_p). Points are indexed (x : 1) for
    /// x = 0..p-1 followed by (1 : 0); the action permutes the delta
    /// functions by g . delta_L = delta_{gL}.
    pub fn p1_functions(p: u32) -> Result<SmoothRep> {
        ModCtx::new(p, 1)?;
        Ok(SmoothRep {
            name: "p1-functions".into(),
            p,
            level: 1,
            dim: p as usize + 1,
            kind: RepKind::P1Functions,
            dualized: false,
        })
    }

    /// The quotient of P^1(F_p)-functions by the constants, in the basis of
    /// the classes of the first p delta functions.
    pub fn steinberg(p: u32) -> Result<SmoothRep> {
        ModCtx::new(p, 1)?;
        Ok(SmoothRep {
            name: "steinberg".into(),
            p,
            level: 1,
            dim: p as usize,
            kind: RepKind::Steinberg,
            dualized: false,
        })
    }

    pub fn by_name(name: &str, p: u32) -> Result<SmoothRep> {
        match name {
            "trivial" => Ok(SmoothRep::trivial(p)),
            "p1-functions" => SmoothRep::p1_functions(p),
            "steinberg" => SmoothRep::steinberg(p),
            other => Err(Error::Shape(format!(
                "unknown representation preset {other:?}; \
                 expected trivial | p1-functions | steinberg"
            ))),
        }
    }

    pub fn dual(&self) -> SmoothRep {
        let name = if self.dualized {
            self.name
                .strip_suffix(" dual")
                .unwrap_or(&self.name)
                .to_string()
        } else {
            format!("{} dual", self.name)
        };
        SmoothRep {
            name,
            dualized: !self.dualized,
            ..self.clone()
        }
    }

    /// Action matrix of a group element with p-integral entries.
    pub fn act(&self, g: &Mat2) -> Result<QMatrix> {
        let mctx = ModCtx::new(self.p, self.level)?;
        let mm = mctx.reduce(g)?;
        self.act_mod(&mctx, &mm)
    }

    /// Action matrix from a residue matrix mod p^m, m >= level. This is the
    /// path the enumeration oracle uses: group elements listed in a finite
    /// quotient generally have no exact determinant-one lift.
    pub fn act_mod(&self, mctx: &ModCtx, m: &ModMat) -> Result<QMatrix> {
        if mctx.p != self.p {
            return Err(Error::Shape(format!(
                "residue prime {} does not match the representation prime {}",
                mctx.p, self.p
            )));
        }
        if mctx.m < self.level {
            return Err(Error::Level(format!(
                "residue level {} is below the action level {}",
                mctx.m, self.level
            )));
        }
        let lctx = ModCtx::new(self.p, self.level)?;
        let mut mm = [m[0] % lctx.q, m[1] % lctx.q, m[2] % lctx.q, m[3] % lctx.q];
        if self.dualized {
            mm = lctx.inverse(&mm)?;
        }
        let mat = match self.kind {
            RepKind::Trivial => QMatrix::identity(1),
            RepKind::P1Functions => {
                let perm = p1_perm(self.p as u64, &mm);
                let mut out = QMatrix::zeros(self.dim, self.dim);
                for (j, &t) in perm.iter().enumerate() {
                    *out.at_mut(t, j) = BigRational::one();
                }
                out
            }
            RepKind::Steinberg => {
                let perm = p1_perm(self.p as u64, &mm);
                let n = self.p as usize;
                let mut out = QMatrix::zeros(n, n);
                for (j, &t) in perm.iter().enumerate().take(n) {
                    if t < n {
                        *out.at_mut(t, j) = BigRational::one();
                    } else {
                        // the class of the deleted point is minus the sum
                        for i in 0..n {
                            *out.at_mut(i, j) = -BigRational::one();
                        }
                    }
                }
                out
            }
        };
        Ok(if self.dualized { mat.transpose() } else { mat })
    }

    /// Confirms the recorded congruence level: the standard topological
    /// generators of the kernel of reduction act as the identity.
    pub fn trivial_action_verified(&self) -> Result<bool> {
        let step = p_pow(self.p, self.level as i64);
        let gens = [
            Mat2::upper(step.clone()),
            Mat2::lower(step.clone()),
            Mat2::torus(BigRational::one() + step)?,
        ];
        for g in &gens {
            if !self.act(g)?.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The permutation a residue matrix induces on the p + 1 points of the
/// projective line. Entries of `mm` may be given modulo any power of p.
fn p1_perm(p: u64, mm: &ModMat) -> Vec<usize> {
    let (a, b, c, d) = (mm[0] % p, mm[1] % p, mm[2] % p, mm[3] % p);
    let mut out = Vec::with_capacity(p as usize + 1);
    let points = (0..p).map(|x| (x, 1)).chain(std::iter::once((1, 0)));
    for (x, y) in points {
        let xx = (a * x + b * y) % p;
        let yy = (c * x + d * y) % p;
        debug_assert!(xx != 0 || yy != 0, "matrix is singular mod p");
        if yy != 0 {
            out.push((xx * modpow(yy, p - 2, p) % p) as usize);
        } else {
            out.push(p as usize);
        }
    }
    out
}

/// The short exact sequence: constants include into P^1-functions, which
/// project onto the quotient. Returns (sub, middle, quotient, inclusion,
/// projection).
pub fn ses_p1(p: u32) -> Result<(SmoothRep, SmoothRep, SmoothRep, QMatrix, QMatrix)> {
    let triv = SmoothRep::trivial(p);
    let p1 = SmoothRep::p1_functions(p)?;
    let st = SmoothRep::steinberg(p)?;
    let n = p as usize;
    let mut incl = QMatrix::zeros(n + 1, 1);
    for i in 0..=n {
        *incl.at_mut(i, 0) = BigRational::one();
    }
    let mut proj = QMatrix::zeros(n, n + 1);
    for j in 0..n {
        *proj.at_mut(j, j) = BigRational::one();
    }
    for i in 0..n {
        *proj.at_mut(i, n) = -BigRational::one();
    }
    Ok((triv, p1, st, incl, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use building::rat;

    fn sample_elements() -> Vec<Mat2> {
        vec![
            Mat2::upper(rat(1)),
            Mat2::lower(rat(2)),
            Mat2::torus(rat(2)).unwrap(),
            Mat2::new(rat(2), rat(1), rat(1), rat(1)).unwrap(),
            Mat2::new(rat(1), rat(-1), rat(3), rat(-2)).unwrap(),
        ]
    }

    #[test]
    fn action_matrices_multiply_like_the_group() {
        for rep in [
            SmoothRep::p1_functions(3).unwrap(),
            SmoothRep::steinberg(3).unwrap(),
            SmoothRep::p1_functions(5).unwrap().dual(),
            SmoothRep::steinberg(3).unwrap().dual(),
        ] {
            let els = sample_elements();
            for g in &els {
                for h in &els {
                    let lhs = rep.act(g).unwrap().mul(&rep.act(h).unwrap()).unwrap();
                    let rhs = rep.act(&g.mul(h)).unwrap();
                    assert_eq!(lhs, rhs, "rep {}", rep.name);
                }
            }
        }
    }

    #[test]
    fn upper_unipotent_cycles_the_affine_points() {
        let rep = SmoothRep::p1_functions(3).unwrap();
        let m = rep.act(&Mat2::upper(rat(1))).unwrap();
        // g (x : 1) = (x + 1 : 1) and g fixes (1 : 0)
        for j in 0..3usize {
            assert_eq!(m.at((j + 1) % 3, j), &BigRational::one());
        }
        assert_eq!(m.at(3, 3), &BigRational::one());
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn congruence_kernel_acts_trivially_for_each_preset() {
        for name in ["trivial", "p1-functions", "steinberg"] {
            let rep = SmoothRep::by_name(name, 3).unwrap();
            assert!(rep.trivial_action_verified().unwrap(), "{name}");
            assert!(rep.dual().trivial_action_verified().unwrap(), "{name} dual");
        }
    }

    #[test]
    fn projection_intertwines_the_two_actions() {
        let (_, p1, st, incl, proj) = ses_p1(3).unwrap();
        assert!(proj.mul(&incl).unwrap().is_zero());
        for g in sample_elements() {
            let lhs = st.act(&g).unwrap().mul(&proj).unwrap();
            let rhs = proj.mul(&p1.act(&g).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn dual_of_the_dual_is_the_original_matrix() {
        let rep = SmoothRep::steinberg(3).unwrap();
        let dd = rep.dual().dual();
        assert_eq!(dd.name, "steinberg");
        let g = Mat2::new(rat(1), rat(-1), rat(3), rat(-2)).unwrap();
        assert_eq!(rep.act(&g).unwrap(), dd.act(&g).unwrap());
    }

    #[test]
    fn mod_path_matches_the_exact_path() {
        let rep = SmoothRep::steinberg(3).unwrap().dual();
        let mctx = ModCtx::new(3, 4).unwrap();
        for g in sample_elements() {
            let mm = mctx.reduce(&g).unwrap();
            assert_eq!(rep.act(&g).unwrap(), rep.act_mod(&mctx, &mm).unwrap());
        }
    }
}
