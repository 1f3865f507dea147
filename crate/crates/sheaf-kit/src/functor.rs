//! From smooth representations to constructible coefficient systems on a
//! tree window: per-facet coinvariants under the congruence group of the
//! facet, with the face maps induced by the group inclusions.
//!
//! Coinvariants are the quotient by span{v - g.v} over a generating set of
//! the finite congruence image. The span over generators already equals the
//! span over the whole image: for words, (sh - 1)v = s((h - 1)v) + (s - 1)v
//! and s.w = (s - 1)w + w keep everything inside the generator span. The
//! enumeration path below recomputes the same space from every element of
//! the finite image as an independent cross-check.

use crate::coeff::{CoefficientSystem, ConstructibleSheaf};
use crate::error::{Error, Result};
use crate::linalg::{induced_map, PivotOrder, QMatrix, Quotient};
use crate::rep::SmoothRep;
use building::finite::CLOSURE_CAP;
use building::{closure, tree_ball, FacetPoset, LatticeVertex, Mat2, ModCtx, TreeBall};
use num_rational::BigRational;
use num_traits::Zero;

/// A tree ball together with its facet poset; the common stage for every
/// sheaf computation.
#[derive(Debug, Clone)]
pub struct Window {
    pub ball: TreeBall,
    pub poset: FacetPoset,
}

pub fn window(p: u32, radius: u32) -> Result<Window> {
    let ball = tree_ball(p, &LatticeVertex::origin(p), radius)?;
    let poset = ball.poset();
    Ok(Window { ball, poset })
}

fn difference_span(rep: &SmoothRep, action: &QMatrix) -> Vec<Vec<BigRational>> {
    let mut span = Vec::new();
    for j in 0..rep.dim {
        let mut col = action.col(j);
        col[j] -= BigRational::from_integer(1.into());
        if !col.iter().all(|x| x.is_zero()) {
            span.push(col);
        }
    }
    span
}

/// Coinvariants of the group generated by the given elements, presented as
/// a quotient of the representation space.
pub fn coinvariants(rep: &SmoothRep, gens: &[Mat2], order: PivotOrder) -> Result<Quotient> {
    let mut span = Vec::new();
    for g in gens {
        span.extend(difference_span(rep, &rep.act(g)?));
    }
    Quotient::from_span(rep.dim, &span, order)
}

/// The same space computed the slow way: enumerate the whole image of the
/// generated group in SL2(Z/p^m) and span the differences over every
/// element.
pub fn coinvariants_by_enumeration(
    rep: &SmoothRep,
    gens: &[Mat2],
    m: u32,
) -> Result<Quotient> {
    if m < rep.level {
        return Err(Error::Level(format!(
            "enumeration modulus p^{m} is below the action level {}",
            rep.level
        )));
    }
    let mctx = ModCtx::new(rep.p, m)?;
    let mats = gens
        .iter()
        .map(|g| mctx.reduce(g))
        .collect::<building::Result<Vec<_>>>()?;
    let image = closure(&mctx, &mats, CLOSURE_CAP)?;
    let mut span = Vec::new();
    for el in &image {
        span.extend(difference_span(rep, &rep.act_mod(&mctx, el)?));
    }
    Quotient::from_span(rep.dim, &span, PivotOrder::Forward)
}

/// The coefficient system of a smooth representation on a window: stalks
/// are facet coinvariants, face maps are induced by the identity of the
/// ambient space because the face group sits inside the cofacet group.
pub fn ss_sheaf(rep: &SmoothRep, e: u32, window: &Window) -> Result<ConstructibleSheaf> {
    let n = window.poset.len();
    let mut stalks = Vec::with_capacity(n);
    for f in 0..n {
        let gens = window.ball.facet_group(f, e)?;
        stalks.push(coinvariants(rep, &gens, PivotOrder::Forward)?);
    }
    let id = QMatrix::identity(rep.dim);
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
        rep_name: rep.name.clone(),
        e,
    })
}

#[derive(Debug, Clone)]
pub struct FacetExactness {
    pub facet: usize,
    pub dims: (usize, usize, usize),
    pub euler_zero: bool,
    pub composes_to_zero: bool,
    pub injective: bool,
    pub surjective: bool,
    pub middle_exact: bool,
    pub failure: Option<String>,
}

impl FacetExactness {
    pub fn ok(&self) -> bool {
        self.euler_zero
            && self.composes_to_zero
            && self.injective
            && self.surjective
            && self.middle_exact
            && self.failure.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct SesReport {
    pub facets: Vec<FacetExactness>,
}

impl SesReport {
    pub fn ok(&self) -> bool {
        self.facets.iter().all(|f| f.ok())
    }

    pub fn first_failure(&self) -> Option<&FacetExactness> {
        self.facets.iter().find(|f| !f.ok())
    }
}

/// Checks stalkwise exactness of sub -> mid -> quo across a window: the
/// induced maps on every facet's coinvariants must compose to zero with
/// complementary ranks. A map that fails equivariance is recorded as a
/// failure on the facet where it breaks.
pub fn exactness_check(
    sub: &SmoothRep,
    mid: &SmoothRep,
    quo: &SmoothRep,
    incl: &QMatrix,
    proj: &QMatrix,
    e: u32,
    window: &Window,
) -> Result<SesReport> {
    if incl.nrows != mid.dim || incl.ncols != sub.dim {
        return Err(Error::Shape("inclusion has the wrong shape".into()));
    }
    if proj.nrows != quo.dim || proj.ncols != mid.dim {
        return Err(Error::Shape("projection has the wrong shape".into()));
    }
    let mut facets = Vec::with_capacity(window.poset.len());
    for f in 0..window.poset.len() {
        let gens = window.ball.facet_group(f, e)?;
        let qs = coinvariants(sub, &gens, PivotOrder::Forward)?;
        let qm = coinvariants(mid, &gens, PivotOrder::Forward)?;
        let qq = coinvariants(quo, &gens, PivotOrder::Forward)?;
        let dims = (qs.dim(), qm.dim(), qq.dim());
        let maps = induced_map(&qs, &qm, incl)
            .and_then(|i| induced_map(&qm, &qq, proj).map(|p| (i, p)));
        let entry = match maps {
            Ok((ibar, pbar)) => {
                let composed = pbar.mul(&ibar)?;
                let ri = ibar.rank();
                let rp = pbar.rank();
                FacetExactness {
                    facet: f,
                    dims,
                    euler_zero: dims.0 + dims.2 == dims.1,
                    composes_to_zero: composed.is_zero(),
                    injective: ri == dims.0,
                    surjective: rp == dims.2,
                    middle_exact: ri + rp == dims.1,
                    failure: None,
                }
            }
            Err(err) => FacetExactness {
                facet: f,
                dims,
                euler_zero: false,
                composes_to_zero: false,
                injective: false,
                surjective: false,
                middle_exact: false,
                failure: Some(err.to_string()),
            },
        };
        facets.push(entry);
    }
    Ok(SesReport { facets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use building::rat;

    #[test]
    fn trivial_representation_gives_the_constant_sheaf() {
        let w = window(3, 1).unwrap();
        let rep = SmoothRep::trivial(3);
        let sheaf = ss_sheaf(&rep, 2, &w).unwrap();
        for f in 0..w.poset.len() {
            assert_eq!(sheaf.stalk_dim(f), 1);
        }
        assert!(sheaf.system.maps.iter().all(|m| m.is_identity()));
    }

    #[test]
    fn generator_span_agrees_with_full_enumeration() {
        // an order-p unipotent image: the deepest vertex group of a small
        // window at e = 1 reaches units in the upper entry
        let w = window(3, 2).unwrap();
        let rep = SmoothRep::p1_functions(3).unwrap();
        let far_vertex = (0..w.ball.vertices.len())
            .find(|&f| w.ball.vertices[f].distance(&LatticeVertex::origin(3)) == 2)
            .unwrap();
        let gens = w.ball.facet_group(far_vertex, 1).unwrap();
        let fast = coinvariants(&rep, &gens, PivotOrder::Forward).unwrap();
        let slow = coinvariants_by_enumeration(&rep, &gens, 2).unwrap();
        assert_eq!(fast.dim(), 2);
        assert!(fast.same_space(&slow).unwrap());
    }

    #[test]
    fn unipotent_coinvariants_count_orbits() {
        let rep = SmoothRep::p1_functions(3).unwrap();
        let gens = [Mat2::upper(rat(1))];
        // orbits on P^1(F_3): one fixed point and one 3-cycle
        let q = coinvariants(&rep, &gens, PivotOrder::Forward).unwrap();
        assert_eq!(q.dim(), 2);
        let st = SmoothRep::steinberg(3).unwrap();
        let qs = coinvariants(&st, &gens, PivotOrder::Forward).unwrap();
        assert_eq!(qs.dim(), 1);
    }

    #[test]
    fn enumeration_path_rejects_a_shallow_modulus() {
        let rep = SmoothRep::p1_functions(3).unwrap();
        let mut bad = rep.clone();
        bad.level = 3;
        match coinvariants_by_enumeration(&bad, &[Mat2::upper(rat(1))], 2) {
            Err(Error::Level(_)) => {}
            other => panic!("expected a level error, got {other:?}"),
        }
    }
}
