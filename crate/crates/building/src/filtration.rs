use crate::apartment::{star_concave, Apartment, ApartmentFacet};
use crate::error::{Error, Result};
use crate::mat2::{p_pow, Mat2};
use crate::tree::{standardize, StandardizedFacet, TreeFacet};
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::{rational_valuation, Val, XReal};

/// Entry-level bounds cutting out the congruence group of level e attached
/// to a facet of the standard apartment. The bounds apply to the coordinates
/// of the triangular factorization g = lower(c) * torus(u) * upper(b).
#[derive(Debug, Clone)]
pub struct FiltrationSpec {
    pub p: u32,
    pub e: u32,
    /// star-level of the upper root direction, before adding e
    pub upper_star: XReal,
    /// star-level of the lower root direction, before adding e
    pub lower_star: XReal,
    pub facet_label: String,
}

impl FiltrationSpec {
    fn from_apartment_facet(p: u32, e: u32, facet: &ApartmentFacet) -> Result<FiltrationSpec> {
        if e < 1 {
            return Err(Error::BadLevel("level e must be at least 1".into()));
        }
        let apt = Apartment::a1();
        let f = star_concave(&apt, facet);
        Ok(FiltrationSpec {
            p,
            e,
            upper_star: f.get("alpha").expect("rank-1 root").clone(),
            lower_star: f.get("-alpha").expect("rank-1 root").clone(),
            facet_label: facet.label(),
        })
    }

    pub fn standard_vertex(p: u32, e: u32, n: i64) -> Result<FiltrationSpec> {
        Self::from_apartment_facet(p, e, &ApartmentFacet::vertex(vec![n]))
    }

    /// The apartment edge with endpoints n and n + 1.
    pub fn standard_edge(p: u32, e: u32, n: i64) -> Result<FiltrationSpec> {
        Self::from_apartment_facet(p, e, &ApartmentFacet::from_vertices(vec![vec![n], vec![n + 1]]))
    }

    pub fn from_standardized(p: u32, e: u32, sf: &StandardizedFacet) -> Result<FiltrationSpec> {
        match sf {
            StandardizedFacet::Vertex { n, .. } => Self::standard_vertex(p, e, *n),
            StandardizedFacet::Edge { n, .. } => Self::standard_edge(p, e, *n),
        }
    }

    /// Required valuation of the upper coordinate b.
    pub fn upper_level(&self) -> XReal {
        self.upper_star.add_int(self.e as i64)
    }

    /// Required valuation of the lower coordinate c.
    pub fn lower_level(&self) -> XReal {
        self.lower_star.add_int(self.e as i64)
    }

    /// Required valuation of u - 1 for the torus coordinate u. The zero
    /// direction is constant on every facet, so its star-level is 0+.
    pub fn torus_level(&self) -> XReal {
        XReal::int_plus(self.e as i64)
    }

    /// Topological generators in the order lower, torus, upper, each sitting
    /// at the smallest admissible valuation.
    pub fn ordered_basis(&self) -> [Mat2; 3] {
        let p = self.p;
        let lmin = self.lower_level().min_int_val().expect("finite level");
        let umin = self.upper_level().min_int_val().expect("finite level");
        let tmin = self.torus_level().min_int_val().expect("finite level");
        let one_plus = BigRational::one() + p_pow(p, tmin);
        [
            Mat2::lower(p_pow(p, lmin)),
            Mat2::torus(one_plus).expect("1 + p^k is nonzero"),
            Mat2::upper(p_pow(p, umin)),
        ]
    }
}

/// Coordinates of g = lower(c) * torus(u) * upper(b), defined whenever the
/// top-left entry of g is nonzero.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub c: BigRational,
    pub u: BigRational,
    pub b: BigRational,
}

pub fn triangular_factor(g: &Mat2) -> Option<Factorization> {
    if g.a.is_zero() {
        return None;
    }
    Some(Factorization {
        c: &g.c / &g.a,
        u: g.a.clone(),
        b: &g.b / &g.a,
    })
}

#[derive(Debug, Clone)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub bound: XReal,
    pub observed: Val,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub member: bool,
    pub factorization: Option<Factorization>,
    pub checks: Vec<ConstraintCheck>,
}

impl MembershipReport {
    pub fn first_violated(&self) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| !c.ok)
    }
}

/// Tests membership of g in the group cut out by `spec`. Checks run in the
/// factorization order lower, torus, upper and all three are reported.
pub fn membership(spec: &FiltrationSpec, g: &Mat2) -> MembershipReport {
    let p = spec.p;
    let fac = match triangular_factor(g) {
        Some(f) => f,
        None => {
            // u would be the vanishing top-left entry, so v(u - 1) = 0,
            // which never meets the torus bound
            let bound = spec.torus_level();
            return MembershipReport {
                member: false,
                factorization: None,
                checks: vec![ConstraintCheck {
                    name: "torus",
                    bound,
                    observed: Val::Finite(0),
                    ok: false,
                }],
            };
        }
    };
    let u_shift = &fac.u - BigRational::one();
    let rows = [
        ("lower", spec.lower_level(), rational_valuation(&fac.c, p)),
        ("torus", spec.torus_level(), rational_valuation(&u_shift, p)),
        ("upper", spec.upper_level(), rational_valuation(&fac.b, p)),
    ];
    let checks: Vec<ConstraintCheck> = rows
        .into_iter()
        .map(|(name, bound, observed)| {
            let ok = bound.satisfied_by(observed);
            ConstraintCheck {
                name,
                bound,
                observed,
                ok,
            }
        })
        .collect();
    let member = checks.iter().all(|c| c.ok);
    MembershipReport {
        member,
        factorization: Some(fac),
        checks,
    }
}

/// Membership relative to an arbitrary tree facet: the facet is carried into
/// the standard apartment and g is conjugated along.
#[derive(Debug, Clone)]
pub struct TreeMembership {
    pub spec: FiltrationSpec,
    pub h: Mat2,
    pub g_standard: Mat2,
    pub report: MembershipReport,
}

pub fn tree_membership(p: u32, e: u32, facet: &TreeFacet, g: &Mat2) -> Result<TreeMembership> {
    let sf = standardize(facet)?;
    let spec = FiltrationSpec::from_standardized(p, e, &sf)?;
    let h = sf.h().clone();
    let g_standard = g.conjugate_by(&h);
    let report = membership(&spec, &g_standard);
    Ok(TreeMembership {
        spec,
        h,
        g_standard,
        report,
    })
}

fn val_add(a: Val, b: Val) -> Val {
    match (a, b) {
        (Val::Finite(x), Val::Finite(y)) => Val::Finite(x + y),
        _ => Val::Infinite,
    }
}

fn val_add_int(a: Val, n: i64) -> Val {
    val_add(a, Val::Finite(n))
}

/// The filtration valuation of a member g: the largest m with g in the
/// level-m group, together with the per-coordinate headroom and the shifted
/// value used as variable weight. Requires e >= 2.
#[derive(Debug, Clone)]
pub struct OmegaReport {
    pub omega: Val,
    /// omega - (e - 1); the weight attached to coordinates of g
    pub reduced: Val,
    pub parts: Vec<(&'static str, Val)>,
}

pub fn omega(spec: &FiltrationSpec, g: &Mat2) -> Result<OmegaReport> {
    if spec.e < 2 {
        return Err(Error::BadLevel(format!(
            "the filtration valuation needs level e >= 2, got {}",
            spec.e
        )));
    }
    let report = membership(spec, g);
    if !report.member {
        let why = report
            .first_violated()
            .map(|c| {
                format!(
                    "{} coordinate has valuation {} but needs at least {}",
                    c.name,
                    c.observed,
                    c.bound.render()
                )
            })
            .unwrap_or_default();
        return Err(Error::NotInGroup(why));
    }
    let fac = report.factorization.expect("member factorizes");
    let p = spec.p;
    let u_shift = &fac.u - BigRational::one();
    let zero_plus = XReal::int_plus(0);
    let parts = vec![
        (
            "lower",
            spec.lower_star
                .headroom(rational_valuation(&fac.c, p))
                .expect("member has headroom at least e"),
        ),
        (
            "torus",
            zero_plus
                .headroom(rational_valuation(&u_shift, p))
                .expect("member has headroom at least e"),
        ),
        (
            "upper",
            spec.upper_star
                .headroom(rational_valuation(&fac.b, p))
                .expect("member has headroom at least e"),
        ),
    ];
    let omega = parts
        .iter()
        .map(|(_, v)| *v)
        .fold(Val::Infinite, Val::min);
    debug_assert!(omega >= Val::Finite(spec.e as i64));
    let reduced = val_add_int(omega, -((spec.e as i64) - 1));
    Ok(OmegaReport {
        omega,
        reduced,
        parts,
    })
}

/// Verifies the axioms of a p-valuation on the given sample of members:
/// values exceed 1/(p-1), quotients and commutators obey the lower bounds,
/// and p-th powers gain exactly one.
#[derive(Debug, Clone)]
pub struct PvaluationCheck {
    pub samples: usize,
    pub floor_ok: bool,
    pub quotient_ok: bool,
    pub power_ok: bool,
    pub commutator_ok: bool,
}

impl PvaluationCheck {
    pub fn all_ok(&self) -> bool {
        self.floor_ok && self.quotient_ok && self.power_ok && self.commutator_ok
    }
}

pub fn check_pvaluation(spec: &FiltrationSpec, elements: &[Mat2]) -> Result<PvaluationCheck> {
    let mut floor_ok = true;
    let mut quotient_ok = true;
    let mut power_ok = true;
    let mut commutator_ok = true;
    let omegas: Vec<Val> = elements
        .iter()
        .map(|g| omega(spec, g).map(|r| r.omega))
        .collect::<Result<_>>()?;
    for (g, w) in elements.iter().zip(&omegas) {
        // 1/(p-1) < 1 <= e <= omega
        if *w < Val::Finite(1) {
            floor_ok = false;
        }
        if !g.is_identity() {
            let wp = omega(spec, &g.pow(spec.p as i64))?.omega;
            if wp != val_add_int(*w, 1) {
                power_ok = false;
            }
        }
    }
    for (i, g) in elements.iter().enumerate() {
        for (j, h) in elements.iter().enumerate() {
            let lower = omegas[i].min(omegas[j]);
            let q = g.mul(&h.inverse());
            if omega(spec, &q)?.omega < lower {
                quotient_ok = false;
            }
            let c = g.commutator(h);
            if omega(spec, &c)?.omega < val_add(omegas[i], omegas[j]) {
                commutator_ok = false;
            }
        }
    }
    Ok(PvaluationCheck {
        samples: elements.len(),
        floor_ok,
        quotient_ok,
        power_ok,
        commutator_ok,
    })
}

/// Per-root levels over an arbitrary apartment, for display. The torus row
/// is appended with the constant star-level 0+.
pub fn level_table(apartment: &Apartment, facet: &ApartmentFacet, e: u32) -> Vec<(String, XReal)> {
    let f = star_concave(apartment, facet);
    let mut rows: Vec<(String, XReal)> = f
        .values
        .iter()
        .map(|(name, v)| (name.clone(), v.add_int(e as i64)))
        .collect();
    rows.push(("torus".into(), XReal::int_plus(e as i64)));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::rat;
    use crate::tree::{standardize_vertex, tree_ball, LatticeVertex};

    fn upper_int(n: i64) -> Mat2 {
        Mat2::upper(rat(n))
    }

    #[test]
    fn vertex_membership_is_a_congruence_condition() {
        // at the base vertex with e = 1, members are 1 mod 9
        let spec = FiltrationSpec::standard_vertex(3, 1, 0).unwrap();
        assert!(membership(&spec, &upper_int(9)).member);
        let r = membership(&spec, &upper_int(3));
        assert!(!r.member);
        assert_eq!(r.first_violated().unwrap().name, "upper");
        assert_eq!(r.first_violated().unwrap().observed, Val::Finite(1));
    }

    #[test]
    fn edge_membership_is_iwahori_shaped() {
        // on the standard edge with e = 1 the upper bound drops to v >= 1
        let spec = FiltrationSpec::standard_edge(3, 1, 0).unwrap();
        assert!(membership(&spec, &upper_int(3)).member);
        assert!(!membership(&spec, &Mat2::lower(rat(3))).member);
        assert!(membership(&spec, &Mat2::lower(rat(9))).member);
    }

    #[test]
    fn vanishing_corner_is_rejected_via_the_torus_bound() {
        let spec = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        let w = Mat2::new(rat(0), rat(-1), rat(1), rat(0)).unwrap();
        let r = membership(&spec, &w);
        assert!(!r.member);
        assert!(r.factorization.is_none());
        assert_eq!(r.first_violated().unwrap().name, "torus");
    }

    #[test]
    fn omega_of_the_ordered_basis_is_exactly_e() {
        let spec = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        for g in spec.ordered_basis() {
            let r = omega(&spec, &g).unwrap();
            assert_eq!(r.omega, Val::Finite(2));
            assert_eq!(r.reduced, Val::Finite(1));
        }
    }

    #[test]
    fn omega_needs_level_two() {
        let spec = FiltrationSpec::standard_vertex(3, 1, 0).unwrap();
        assert!(matches!(
            omega(&spec, &upper_int(9)),
            Err(Error::BadLevel(_))
        ));
    }

    #[test]
    fn omega_of_identity_is_infinite() {
        let spec = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        let r = omega(&spec, &Mat2::identity()).unwrap();
        assert_eq!(r.omega, Val::Infinite);
        assert_eq!(r.reduced, Val::Infinite);
    }

    #[test]
    fn omega_rejects_non_members_with_the_failing_constraint() {
        let spec = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        match omega(&spec, &upper_int(9)) {
            Err(Error::NotInGroup(msg)) => assert!(msg.contains("upper")),
            other => panic!("expected a group membership error, got {other:?}"),
        }
    }

    #[test]
    fn membership_conjugates_along_standardization() {
        // an element fixing a distant vertex deeply need not fix the origin
        let p = 3;
        let ball = tree_ball(p, &LatticeVertex::origin(p), 2).unwrap();
        let far = ball
            .vertices
            .iter()
            .find(|v| LatticeVertex::origin(p).distance(v) == 2)
            .unwrap();
        let sf = standardize_vertex(far);
        let hinv = sf.h().inverse();
        // pull a known member of the standard-vertex group back to `far`
        let spec_std = FiltrationSpec::standard_vertex(p, 1, match sf {
            StandardizedFacet::Vertex { n, .. } => n,
            _ => unreachable!(),
        })
        .unwrap();
        let g_std = spec_std.ordered_basis()[2].clone();
        let g = g_std.conjugate_by(&hinv);
        let at_far = tree_membership(p, 1, &TreeFacet::Vertex(far.clone()), &g).unwrap();
        assert!(at_far.report.member);
    }

    #[test]
    fn level_table_lists_every_root_and_the_torus() {
        let apt = Apartment::a2();
        let facet = ApartmentFacet::from_vertices(vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let rows = level_table(&apt, &facet, 2);
        assert_eq!(rows.len(), 7);
        let get = |n: &str| rows.iter().find(|(m, _)| m == n).unwrap().1.clone();
        assert_eq!(get("alpha"), XReal::int(2));
        assert_eq!(get("-alpha"), XReal::int(3));
        assert_eq!(get("torus"), XReal::int_plus(2));
    }
}
