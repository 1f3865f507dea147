//! The module-side coefficient system and its comparison with the
//! representation-side system.
//!
//! For a dual representation M the facet value at F is the coinvariant
//! space of M under the facet group, built here through an independent
//! route: generating words instead of the chart generators, and a reversed
//! pivot scan, so the two systems live in genuinely different coordinates.
//! At finite level the value spaces do not depend on the radius within the
//! admitted range; the radius enters through the transport maps, which must
//! be norm-decreasing and leave the augmentation alone. The comparison
//! isomorphism is induced by the identity of the ambient space and must
//! make every face-pair square commute exactly.

use crate::coeff::{CoefficientSystem, ConstructibleSheaf};
use crate::error::{Error, Result};
use crate::functor::{coinvariants, ss_sheaf, Window};
use crate::linalg::{induced_map, PivotOrder, QMatrix};
use crate::rep::{ses_p1, SmoothRep};
use building::Mat2;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_analysis::{tree_pair_map, SeriesShape};

/// Admits exactly the radii r = p^(-rho) with rho in (1/(p-1), 1], the
/// interval on which the module and representation sides agree at finite
/// level.
pub fn smooth_range(p: u32, rho: &BigRational) -> Result<()> {
    let lo = BigRational::new(BigInt::one(), BigInt::from(p - 1));
    if *rho > lo && *rho <= BigRational::one() {
        Ok(())
    } else {
        Err(Error::Range(format!(
            "r = {p}^(-{rho}) is outside [{p}^(-1), {p}^(-1/{}))",
            p - 1
        )))
    }
}

/// The nontrivial subset words of a generating triple, a deliberately
/// redundant generating set for the same group.
pub fn mr_words(gens: &[Mat2]) -> Vec<Mat2> {
    let mut out = Vec::new();
    for mask in 1..(1usize << gens.len()) {
        let mut w = Mat2::identity();
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w = w.mul(g);
            }
        }
        out.push(w);
    }
    out
}

/// The module-side system: facet values are coinvariants of the module
/// datum computed from subset words with a backward pivot scan, face maps
/// induced by the ambient identity.
pub fn mr_system(
    module: &SmoothRep,
    e: u32,
    window: &Window,
    rho: &BigRational,
) -> Result<ConstructibleSheaf> {
    smooth_range(module.p, rho)?;
    let n = window.poset.len();
    let mut stalks = Vec::with_capacity(n);
    for f in 0..n {
        let gens = window.ball.facet_group(f, e)?;
        let words = mr_words(&gens);
        stalks.push(coinvariants(module, &words, PivotOrder::Backward)?);
    }
    let id = QMatrix::identity(module.dim);
    let mut maps = Vec::with_capacity(window.poset.pairs.len());
    for &(a, b) in &window.poset.pairs {
        maps.push(induced_map(&stalks[a], &stalks[b], &id)?);
    }
    let system = CoefficientSystem {
        poset: window.poset.clone(),
        dims: stalks.iter().map(|q| q.dim()).collect(),
        maps,
    };
    system.check_laws()?;
    Ok(ConstructibleSheaf {
        system,
        stalks,
        rep_name: format!("{} module system", module.name),
        e,
    })
}

#[derive(Debug, Clone)]
pub struct FacetComparison {
    pub facet: usize,
    pub dims_agree: bool,
    pub same_space: bool,
    pub iso: bool,
}

#[derive(Debug, Clone)]
pub struct PairSquare {
    pub face: usize,
    pub cofacet: usize,
    pub commutes: bool,
    pub augmentation_fixed: bool,
    pub norm_decreasing: bool,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub rho: BigRational,
    pub facets: Vec<FacetComparison>,
    pub squares: Vec<PairSquare>,
}

impl ComparisonReport {
    pub fn ok(&self) -> bool {
        self.facets
            .iter()
            .all(|f| f.dims_agree && f.same_space && f.iso)
            && self
                .squares
                .iter()
                .all(|s| s.commutes && s.augmentation_fixed && s.norm_decreasing)
    }
}

/// Builds both systems for the smooth dual of the given representation and
/// verifies, on every face pair of the window, that the comparison maps
/// intertwine the two kinds of face maps, and that the underlying chart
/// transport is norm-decreasing at the given radius and fixes the
/// augmentation.
pub fn comparison_check(
    v: &SmoothRep,
    e: u32,
    window: &Window,
    rho: &BigRational,
    shape: SeriesShape,
) -> Result<ComparisonReport> {
    smooth_range(v.p, rho)?;
    if shape.nvars() != 3 || shape.ctx.p != v.p {
        return Err(Error::Shape(
            "chart algebra shape does not match the representation".into(),
        ));
    }
    let module = v.dual();
    let ss = ss_sheaf(&module, e, window)?;
    let mr = mr_system(&module, e, window, rho)?;
    let id = QMatrix::identity(module.dim);
    let mut fs = Vec::with_capacity(window.poset.len());
    let mut facets = Vec::with_capacity(window.poset.len());
    for f in 0..window.poset.len() {
        let cmp = induced_map(mr.stalk(f), ss.stalk(f), &id)?;
        let dims_agree = mr.stalk_dim(f) == ss.stalk_dim(f);
        let iso = dims_agree && cmp.rank() == ss.stalk_dim(f);
        facets.push(FacetComparison {
            facet: f,
            dims_agree,
            same_space: mr.stalk(f).same_space(ss.stalk(f))?,
            iso,
        });
        fs.push(cmp);
    }
    let mut squares = Vec::with_capacity(window.poset.pairs.len());
    let zero_index = vec![0u32; 3];
    for (k, &(a, b)) in window.poset.pairs.iter().enumerate() {
        let lhs = fs[b].mul(&mr.system.maps[k])?;
        let rhs = ss.system.maps[k].mul(&fs[a])?;
        let sigma = tree_pair_map(&window.ball, a, b, e, shape.clone())?;
        let augmentation_fixed = sigma.images.iter().all(|img| {
            img.coeffs
                .get(&zero_index)
                .is_none_or(|c| c.rational().is_zero())
        });
        squares.push(PairSquare {
            face: a,
            cofacet: b,
            commutes: lhs == rhs,
            augmentation_fixed,
            norm_decreasing: sigma.norm_decreasing(rho)?,
        });
    }
    Ok(ComparisonReport {
        rho: rho.clone(),
        facets,
        squares,
    })
}

#[derive(Debug, Clone)]
pub struct NaturalitySquare {
    pub facet: usize,
    pub quotient_leg_commutes: bool,
    pub inclusion_leg_commutes: bool,
    pub composes_to_zero: bool,
}

#[derive(Debug, Clone)]
pub struct NaturalityReport {
    pub squares: Vec<NaturalitySquare>,
}

impl NaturalityReport {
    pub fn ok(&self) -> bool {
        self.squares.iter().all(|s| {
            s.quotient_leg_commutes && s.inclusion_leg_commutes && s.composes_to_zero
        })
    }
}

/// Naturality of the comparison along the dual of the standard short exact
/// sequence: each dualized map induces a square between the module-side and
/// representation-side systems on every facet, and the comparison maps must
/// commute with both legs.
pub fn naturality_check(
    p: u32,
    e: u32,
    window: &Window,
    rho: &BigRational,
) -> Result<NaturalityReport> {
    smooth_range(p, rho)?;
    let (triv, p1, st, incl, proj) = ses_p1(p)?;
    let duals = [st.dual(), p1.dual(), triv.dual()];
    let proj_t = proj.transpose();
    let incl_t = incl.transpose();
    let mut ss_side = Vec::new();
    let mut mr_side = Vec::new();
    for d in &duals {
        ss_side.push(ss_sheaf(d, e, window)?);
        mr_side.push(mr_system(d, e, window, rho)?);
    }
    let fs: Vec<Vec<QMatrix>> = (0..3)
        .map(|i| {
            let id = QMatrix::identity(duals[i].dim);
            (0..window.poset.len())
                .map(|f| induced_map(mr_side[i].stalk(f), ss_side[i].stalk(f), &id))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut squares = Vec::with_capacity(window.poset.len());
    for f in 0..window.poset.len() {
        let mut legs = Vec::new();
        for (src, tgt, amb) in [(0usize, 1usize, &proj_t), (1, 2, &incl_t)] {
            let mr_map = induced_map(mr_side[src].stalk(f), mr_side[tgt].stalk(f), amb)?;
            let ss_map = induced_map(ss_side[src].stalk(f), ss_side[tgt].stalk(f), amb)?;
            let lhs = fs[tgt][f].mul(&mr_map)?;
            let rhs = ss_map.mul(&fs[src][f])?;
            legs.push((lhs == rhs, mr_map, ss_map));
        }
        let comp_mr = legs[1].1.mul(&legs[0].1)?;
        let comp_ss = legs[1].2.mul(&legs[0].2)?;
        squares.push(NaturalitySquare {
            facet: f,
            quotient_leg_commutes: legs[0].0,
            inclusion_leg_commutes: legs[1].0,
            composes_to_zero: comp_mr.is_zero() && comp_ss.is_zero(),
        });
    }
    Ok(NaturalityReport { squares })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::window;
    use padic_core::PadicCtx;

    fn rho1() -> BigRational {
        BigRational::one()
    }

    fn shape() -> SeriesShape {
        SeriesShape::new(PadicCtx::new(3, 12).unwrap(), 3, 12)
    }

    #[test]
    fn radii_outside_the_admitted_interval_are_refused() {
        assert!(smooth_range(3, &rho1()).is_ok());
        assert!(smooth_range(3, &BigRational::new(2.into(), 3.into())).is_ok());
        // rho = 1/2 means r = 3^(-1/2), already too shallow at p = 3
        assert!(matches!(
            smooth_range(3, &BigRational::new(1.into(), 2.into())),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            smooth_range(3, &BigRational::new(5.into(), 4.into())),
            Err(Error::Range(_))
        ));
        // the interval widens for larger residue primes
        assert!(smooth_range(5, &BigRational::new(1.into(), 2.into())).is_ok());
    }

    #[test]
    fn subset_words_multiply_out_in_order() {
        let gens = [
            Mat2::upper(building::rat(1)),
            Mat2::lower(building::rat(3)),
            Mat2::torus(building::rat(4)).unwrap(),
        ];
        let words = mr_words(&gens);
        assert_eq!(words.len(), 7);
        assert_eq!(words[0], gens[0]);
        assert_eq!(words[6], gens[0].mul(&gens[1]).mul(&gens[2]));
    }

    #[test]
    fn trivial_module_comparison_is_the_identity() {
        let w = window(3, 1).unwrap();
        let rep = SmoothRep::trivial(3);
        let report = comparison_check(&rep, 2, &w, &rho1(), shape()).unwrap();
        assert!(report.ok());
        let module = rep.dual();
        let mr = mr_system(&module, 2, &w, &rho1()).unwrap();
        assert!(mr.system.maps.iter().all(|m| m.is_identity()));
    }

    #[test]
    fn module_system_uses_different_coordinates_but_the_same_spaces() {
        let w = window(3, 2).unwrap();
        let module = SmoothRep::p1_functions(3).unwrap().dual();
        let ss = ss_sheaf(&module, 1, &w).unwrap();
        let mr = mr_system(&module, 1, &w, &rho1()).unwrap();
        let mut saw_different_coords = false;
        for f in 0..w.poset.len() {
            assert!(mr.stalk(f).same_space(ss.stalk(f)).unwrap());
            if mr.stalk(f).free_coords() != ss.stalk(f).free_coords() {
                saw_different_coords = true;
            }
        }
        assert!(saw_different_coords, "backward pivots never diverged");
    }
}
