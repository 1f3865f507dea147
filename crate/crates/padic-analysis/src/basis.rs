use crate::dist::{DistSeries, SeriesShape};
use crate::error::{Error, Result};
use building::{membership, p_pow, FiltrationSpec, Mat2};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::{PadicCtx, PadicNumber};

/// Coordinates of a group member in the ordered basis h1, h2, h3 (lower,
/// torus, upper): g = h1^{a1} h2^{a2} h3^{a3}. The unipotent coordinates are
/// exact rationals; the torus coordinate is an integer determined to the
/// working precision in base-p digits.
#[derive(Debug, Clone)]
pub struct ChartCoords {
    pub a: [PadicNumber; 3],
    /// the torus entry of g is pinned down modulo p to this exponent
    pub torus_modulus_exp: u32,
}

/// The coordinate chart of the congruence group cut out by a filtration.
#[derive(Debug, Clone)]
pub struct Chart {
    pub ctx: PadicCtx,
    pub spec: FiltrationSpec,
}

fn residue(q: &BigRational, modulus: &BigInt) -> Result<BigInt> {
    let den = q.denom().mod_floor(modulus);
    let ext = den.extended_gcd(modulus);
    if !ext.gcd.is_one() {
        return Err(Error::NotIntegral(format!(
            "{q} has no residue mod {modulus}"
        )));
    }
    Ok((q.numer().mod_floor(modulus) * ext.x).mod_floor(modulus))
}

impl Chart {
    pub fn new(ctx: PadicCtx, spec: FiltrationSpec) -> Result<Chart> {
        if ctx.p != spec.p {
            return Err(Error::Shape(format!(
                "context prime {} differs from filtration prime {}",
                ctx.p, spec.p
            )));
        }
        Ok(Chart { ctx, spec })
    }

    fn lower_exp(&self) -> i64 {
        self.spec.lower_level().min_int_val().expect("finite level")
    }

    fn upper_exp(&self) -> i64 {
        self.spec.upper_level().min_int_val().expect("finite level")
    }

    fn torus_exp(&self) -> i64 {
        self.spec.torus_level().min_int_val().expect("finite level")
    }

    /// Digit-by-digit discrete logarithm in 1 + p^{e+1} Z_p with respect to
    /// the base 1 + p^{e+1}, computed modulo p^{e+1+N}.
    fn torus_dlog(&self, u: &BigRational) -> Result<PadicNumber> {
        let p = self.ctx.p as u64;
        let n = self.ctx.precision;
        let te = self.torus_exp() as u32;
        let modulus = BigInt::from(p).pow(te + n);
        let mut u_res = residue(u, &modulus)?;
        let mut t_res = (BigInt::one() + BigInt::from(p).pow(te)).mod_floor(&modulus);
        let mut a2 = BigInt::zero();
        let mut place = BigInt::one();
        for j in 0..n {
            let level = BigInt::from(p).pow(te + j + 1);
            let mut chosen = None;
            let t_inv = residue(
                &BigRational::from_integer(t_res.clone()).recip(),
                &modulus,
            )?;
            let mut candidate = u_res.clone();
            for c in 0..p {
                if (&candidate - BigInt::one()).mod_floor(&level).is_zero() {
                    chosen = Some((c, candidate.clone()));
                    break;
                }
                candidate = (candidate * &t_inv).mod_floor(&modulus);
            }
            let (c, next_u) = chosen.ok_or_else(|| {
                Error::Internal("torus digit extraction found no digit".into())
            })?;
            a2 += BigInt::from(c) * &place;
            place *= BigInt::from(p);
            u_res = next_u;
            t_res = t_res.modpow(&BigInt::from(p), &modulus);
        }
        Ok(PadicNumber::from_bigint(self.ctx, a2))
    }

    /// Coordinates of a member. Fails with the violated constraint when g is
    /// not in the group.
    pub fn coords_of(&self, g: &Mat2) -> Result<ChartCoords> {
        let report = membership(&self.spec, g);
        if !report.member {
            let why = report
                .first_violated()
                .map(|c| format!("{} constraint fails at valuation {}", c.name, c.observed))
                .unwrap_or_default();
            return Err(Error::NotMember(why));
        }
        let fac = report.factorization.expect("members factor");
        let p = self.ctx.p;
        let a1 = &fac.c / p_pow(p, self.lower_exp());
        let a3 = &fac.b / p_pow(p, self.upper_exp());
        let a2 = self.torus_dlog(&fac.u)?;
        Ok(ChartCoords {
            a: [
                PadicNumber::from_rational(self.ctx, a1),
                a2,
                PadicNumber::from_rational(self.ctx, a3),
            ],
            torus_modulus_exp: self.torus_exp() as u32 + self.ctx.precision,
        })
    }

    /// The member with the given integer coordinates, exactly.
    pub fn point_of(&self, a: &[i64; 3]) -> Mat2 {
        let [h1, h2, h3] = self.spec.ordered_basis();
        h1.pow(a[0]).mul(&h2.pow(a[1])).mul(&h3.pow(a[2]))
    }

    /// Verifies that coordinates reproduce g: exactly in the unipotent
    /// directions, modulo p^{torus_modulus_exp} in the torus direction.
    pub fn reconstructs(&self, coords: &ChartCoords, g: &Mat2) -> Result<bool> {
        let report = membership(&self.spec, g);
        let fac = match report.factorization {
            Some(f) if report.member => f,
            _ => return Ok(false),
        };
        let p = self.ctx.p;
        if fac.c != coords.a[0].rational() * p_pow(p, self.lower_exp()) {
            return Ok(false);
        }
        if fac.b != coords.a[2].rational() * p_pow(p, self.upper_exp()) {
            return Ok(false);
        }
        let modulus = BigInt::from(p).pow(coords.torus_modulus_exp);
        let a2 = coords.a[1].rational();
        if !a2.is_integer() {
            return Ok(false);
        }
        let t = BigInt::one() + BigInt::from(p).pow(self.torus_exp() as u32);
        let want = t.modpow(&a2.to_integer().mod_floor(&modulus), &modulus);
        Ok(residue(&fac.u, &modulus)? == want)
    }

    /// The dirac distribution of a member in chart coordinates. The torus
    /// coordinate carries working precision, so coefficients are pinned to
    /// the same congruence depth.
    pub fn dirac_of(&self, shape: SeriesShape, g: &Mat2) -> Result<DistSeries> {
        if shape.nvars() != 3 {
            return Err(Error::Shape("chart diracs live in 3 variables".into()));
        }
        let coords = self.coords_of(g)?;
        DistSeries::dirac(shape, &coords.a)
    }

    /// Dirac of a product, computed through the group multiplication.
    pub fn dirac_of_product(&self, shape: SeriesShape, g: &Mat2, h: &Mat2) -> Result<DistSeries> {
        self.dirac_of(shape, &g.mul(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use padic_core::Val;

    fn ctx() -> PadicCtx {
        PadicCtx::new(3, 12).unwrap()
    }

    fn chart() -> Chart {
        Chart::new(ctx(), FiltrationSpec::standard_edge(3, 2, 0).unwrap()).unwrap()
    }

    #[test]
    fn basis_elements_have_unit_coordinates() {
        let ch = chart();
        for (i, g) in ch.spec.ordered_basis().iter().enumerate() {
            let coords = ch.coords_of(g).unwrap();
            for (j, a) in coords.a.iter().enumerate() {
                let want = if i == j { 1 } else { 0 };
                assert_eq!(a.rational(), &BigRational::from_integer(want.into()));
            }
        }
    }

    #[test]
    fn integer_words_round_trip_exactly() {
        let ch = chart();
        for (a1, a2, a3) in [(2i64, 7, 5), (0, 11, 0), (4, 0, 9), (1, 26, 3)] {
            let g = ch.point_of(&[a1, a2, a3]);
            let coords = ch.coords_of(&g).unwrap();
            assert_eq!(coords.a[0].rational(), &BigRational::from_integer(a1.into()));
            assert_eq!(coords.a[1].rational(), &BigRational::from_integer(a2.into()));
            assert_eq!(coords.a[2].rational(), &BigRational::from_integer(a3.into()));
            assert!(ch.reconstructs(&coords, &g).unwrap());
        }
    }

    #[test]
    fn negative_torus_exponents_reconstruct_modulo_precision() {
        let ch = chart();
        let g = ch.point_of(&[0, -4, 0]);
        let coords = ch.coords_of(&g).unwrap();
        // the digit expansion sees -4 as its residue mod 3^12
        assert!(coords.a[1].rational().is_positive());
        assert!(ch.reconstructs(&coords, &g).unwrap());
        let diff = coords.a[1].rational() - BigRational::from_integer((-4).into());
        let v = padic_core::rational_valuation(&diff, 3);
        assert!(v >= Val::Finite(12), "residue differs from -4 by a unit times 3^12");
    }

    #[test]
    fn non_members_are_rejected_with_the_reason() {
        let ch = chart();
        let g = Mat2::upper(BigRational::from_integer(1.into()));
        match ch.coords_of(&g) {
            Err(Error::NotMember(msg)) => assert!(msg.contains("upper")),
            other => panic!("expected membership failure, got {other:?}"),
        }
    }

    #[test]
    fn torus_dlog_handles_non_basis_powers() {
        // 82 = 1 + p^{e+2} is not an integer power of 1 + p^{e+1} = 28
        let ch = chart();
        let g = Mat2::torus(BigRational::from_integer(82.into())).unwrap();
        let coords = ch.coords_of(&g).unwrap();
        assert!(ch.reconstructs(&coords, &g).unwrap());
        // the exponent is divisible by p exactly once: 82 is a p-th power
        // of something one level shallower, but not a p^2-th power
        assert_eq!(coords.a[1].valuation(), Val::Finite(1));
    }

    #[test]
    fn dirac_of_small_word_is_exact() {
        let ch = chart();
        let shape = SeriesShape::new(ctx(), 3, 12);
        let g = ch.point_of(&[1, 2, 1]);
        let d = ch.dirac_of(shape, &g).unwrap();
        // coefficient of b1 b2^2 b3 is C(1,1) C(2,2) C(1,1) = 1
        assert_eq!(
            d.coeffs[&vec![1u32, 2, 1]].rational(),
            &BigRational::from_integer(1.into())
        );
    }
}
