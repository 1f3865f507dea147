use crate::dist::{DistSeries, SeriesShape};
use crate::error::{Error, Result};
use building::{standardize_edge, FiltrationSpec, StandardizedFacet, TreeBall, TreeFacet};
use num_bigint::BigInt;
use num_rational::BigRational;
use padic_core::PadicNumber;

/// The algebra map induced by an inclusion of congruence groups. When the
/// source basis satisfies h'_i = h_i^{p^{s_i}} against the target basis, the
/// map sends 1 + b'_i to (1 + b_i)^{p^{s_i}}.
#[derive(Debug, Clone)]
pub struct GluingMap {
    pub source: FiltrationSpec,
    pub target: FiltrationSpec,
    pub shape: SeriesShape,
    pub exps: [u32; 3],
    pub images: Vec<DistSeries>,
}

fn level_exps(spec: &FiltrationSpec) -> [i64; 3] {
    [
        spec.lower_level().min_int_val().expect("finite level"),
        spec.torus_level().min_int_val().expect("finite level"),
        spec.upper_level().min_int_val().expect("finite level"),
    ]
}

impl GluingMap {
    pub fn between(
        source: &FiltrationSpec,
        target: &FiltrationSpec,
        shape: SeriesShape,
    ) -> Result<GluingMap> {
        if shape.nvars() != 3 {
            return Err(Error::Shape("chart algebras have 3 variables".into()));
        }
        if source.p != target.p || shape.ctx.p != source.p {
            return Err(Error::Level(format!(
                "primes differ: source {}, target {}, context {}",
                source.p, target.p, shape.ctx.p
            )));
        }
        if source.e != target.e {
            return Err(Error::Level(format!(
                "depths differ: source {}, target {}",
                source.e, target.e
            )));
        }
        let se = level_exps(source);
        let te = level_exps(target);
        let mut exps = [0u32; 3];
        for i in 0..3 {
            let s = se[i] - te[i];
            if s < 0 {
                return Err(Error::Level(format!(
                    "group of {} does not sit inside group of {}: coordinate {} \
                     drops from level {} to {}",
                    source.facet_label, target.facet_label, i, se[i], te[i]
                )));
            }
            exps[i] = s as u32;
        }
        let p = BigInt::from(source.p);
        let mut images = Vec::with_capacity(3);
        for (i, s) in exps.iter().enumerate() {
            let mult = p.pow(*s);
            if mult > BigInt::from(shape.truncation) {
                return Err(Error::Truncation(format!(
                    "image of variable {i} is a polynomial of degree {mult}, \
                     beyond the cutoff {}",
                    shape.truncation
                )));
            }
            let a = PadicNumber::from_bigint(shape.ctx, mult);
            let img = DistSeries::one_plus_var_pow(shape.clone(), i, &a)?
                .sub(&DistSeries::one(shape.clone()))?;
            images.push(img);
        }
        Ok(GluingMap {
            source: source.clone(),
            target: target.clone(),
            shape,
            exps,
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.exps == [0, 0, 0]
    }

    /// Transports a distribution written in source chart coordinates to the
    /// target chart coordinates.
    pub fn apply(&self, d: &DistSeries) -> Result<DistSeries> {
        if d.shape.ctx != self.shape.ctx || d.shape.nvars() != 3 {
            return Err(Error::Shape(
                "distribution does not live in the source chart algebra".into(),
            ));
        }
        d.substitute(&self.images)
    }

    /// Checks that the transport cannot increase r-norms at r = p^{-rho}:
    /// each image must have certified norm exponent at least rho times the
    /// weight of its variable.
    pub fn norm_decreasing(&self, rho: &BigRational) -> Result<bool> {
        for (i, img) in self.images.iter().enumerate() {
            let n = img.norm_exponent(rho)?;
            if !n.certified {
                return Ok(false);
            }
            let want = rho * &self.shape.weights[i];
            match n.exponent {
                // a zero image only shrinks norms
                None => continue,
                Some(e) if e >= want => continue,
                Some(_) => return Ok(false),
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.facet_label,
            "target": self.target.facet_label,
            "exps": self.exps.to_vec(),
            "images": self.images.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Builds the gluing map for a (vertex, edge) face pair of a tree window.
/// Both groups are read in the frame that standardizes the edge, so the
/// vertex chart lands at apartment coordinate n or n + 1. The resulting map
/// is frame-independent: conjugation moves both charts together.
pub fn tree_pair_map(
    ball: &TreeBall,
    vertex_id: usize,
    edge_id: usize,
    e: u32,
    shape: SeriesShape,
) -> Result<GluingMap> {
    if !ball.is_vertex(vertex_id) || ball.is_vertex(edge_id) {
        return Err(Error::Shape(format!(
            "face pair must name a vertex then an edge, got ({vertex_id}, {edge_id})"
        )));
    }
    let (u, v) = match ball.facet(edge_id) {
        TreeFacet::Edge(u, v) => (u, v),
        TreeFacet::Vertex(_) => unreachable!(),
    };
    let w = match ball.facet(vertex_id) {
        TreeFacet::Vertex(w) => w,
        TreeFacet::Edge(..) => unreachable!(),
    };
    let n = match standardize_edge(&u, &v)? {
        StandardizedFacet::Edge { n, .. } => n,
        StandardizedFacet::Vertex { .. } => unreachable!(),
    };
    let m = if w == u {
        n
    } else if w == v {
        n + 1
    } else {
        return Err(Error::Shape(format!(
            "vertex {vertex_id} is not an endpoint of edge {edge_id}"
        )));
    };
    let source = FiltrationSpec::standard_vertex(ball.p, e, m)?;
    let target = FiltrationSpec::standard_edge(ball.p, e, n)?;
    GluingMap::between(&source, &target, shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Chart;
    use num_traits::One;
    use padic_core::PadicCtx;

    fn ctx() -> PadicCtx {
        PadicCtx::new(3, 12).unwrap()
    }

    fn shape() -> SeriesShape {
        SeriesShape::new(ctx(), 3, 12)
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn vertex_chart_maps_into_edge_chart_by_cubes() {
        let v = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        let e = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        let g = GluingMap::between(&v, &e, shape()).unwrap();
        assert_eq!(g.exps, [0, 0, 1]);
        assert!(!g.is_identity());
        // (1 + b)^3 - 1 = 3b + 3b^2 + b^3 on the upper coordinate
        let img = &g.images[2];
        assert_eq!(img.coeffs[&vec![0u32, 0, 1]].rational(), &rat(3, 1));
        assert_eq!(img.coeffs[&vec![0u32, 0, 2]].rational(), &rat(3, 1));
        assert_eq!(img.coeffs[&vec![0u32, 0, 3]].rational(), &rat(1, 1));
        assert_eq!(img.coeffs.len(), 3);
        let n = img.norm_exponent(&BigRational::one()).unwrap();
        assert_eq!(n.exponent, Some(rat(2, 1)));
        assert!(n.certified);
    }

    #[test]
    fn opposite_vertex_glues_through_the_lower_coordinate() {
        let v = FiltrationSpec::standard_vertex(3, 2, 1).unwrap();
        let e = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        let g = GluingMap::between(&v, &e, shape()).unwrap();
        assert_eq!(g.exps, [1, 0, 0]);
        assert_eq!(g.images[0].coeffs[&vec![3u32, 0, 0]].rational(), &rat(1, 1));
    }

    #[test]
    fn transported_diracs_agree_with_the_target_chart() {
        let v = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        let e = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        let sigma = GluingMap::between(&v, &e, shape()).unwrap();
        let source = Chart::new(ctx(), v).unwrap();
        let target = Chart::new(ctx(), e).unwrap();
        let g = source.point_of(&[2, 1, 1]);
        let transported = sigma.apply(&source.dirac_of(shape(), &g).unwrap()).unwrap();
        let direct = target.dirac_of(shape(), &g).unwrap();
        assert_eq!(transported.coeffs, direct.coeffs);
        // the target coordinates really did pick up the factor p^s
        let coords = target.coords_of(&g).unwrap();
        assert_eq!(coords.a[2].rational(), &rat(3, 1));
    }

    #[test]
    fn wrong_direction_is_refused() {
        let v = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        let e = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        match GluingMap::between(&e, &v, shape()) {
            Err(Error::Level(msg)) => assert!(msg.contains("does not sit inside")),
            other => panic!("expected a level error, got {other:?}"),
        }
    }

    #[test]
    fn self_gluing_is_the_identity() {
        let e = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        let g = GluingMap::between(&e, &e, shape()).unwrap();
        assert!(g.is_identity());
        let chart = Chart::new(ctx(), e).unwrap();
        let d = chart
            .dirac_of(shape(), &chart.point_of(&[1, 4, 2]))
            .unwrap();
        let back = g.apply(&d).unwrap();
        assert_eq!(back.coeffs, d.coeffs);
        assert!(g.norm_decreasing(&BigRational::one()).unwrap());
    }

    #[test]
    fn face_pairs_of_a_small_window_glue_through_a_single_power_of_p() {
        let ball =
            building::tree_ball(3, &building::LatticeVertex::origin(3), 1).unwrap();
        let pairs = ball.face_pairs();
        assert_eq!(pairs.len(), 8);
        for (vid, eid) in pairs {
            let g = tree_pair_map(&ball, vid, eid, 2, shape()).unwrap();
            let mut exps = g.exps.to_vec();
            exps.sort();
            assert_eq!(exps, vec![0, 0, 1]);
            assert_eq!(g.exps[1], 0, "torus coordinate never rescales");
            assert!(g.norm_decreasing(&rat(1, 2)).unwrap());
        }
    }

    #[test]
    fn pairs_that_are_not_incident_are_refused() {
        let ball =
            building::tree_ball(3, &building::LatticeVertex::origin(3), 1).unwrap();
        // vertex 2 is a leaf, edge 5 joins the origin to vertex 1
        assert!(tree_pair_map(&ball, 2, 5, 2, shape()).is_err());
        assert!(tree_pair_map(&ball, 5, 2, 2, shape()).is_err());
    }

    #[test]
    fn norm_decreasing_holds_across_radii() {
        let v = FiltrationSpec::standard_vertex(3, 2, 0).unwrap();
        let e = FiltrationSpec::standard_edge(3, 2, 0).unwrap();
        let g = GluingMap::between(&v, &e, shape()).unwrap();
        for rho in [rat(1, 1), rat(1, 2), rat(1, 3), rat(2, 3)] {
            assert!(g.norm_decreasing(&rho).unwrap(), "rho = {rho}");
        }
    }
}
