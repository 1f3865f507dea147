use crate::apartment::{Apartment, ApartmentFacet};
use crate::error::Result;
use crate::filtration::{level_table, FiltrationSpec};
use crate::mat2::Mat2;
use crate::tree::{standardize, TreeBall};
use std::collections::BTreeSet;

/// A finite poset of facets, closed under faces, with strict containment
/// pairs. This is the shape data shared by tree balls and apartment windows.
#[derive(Debug, Clone)]
pub struct FacetPoset {
    pub dims: Vec<usize>,
    /// (face, cofacet) with face strictly contained in the cofacet closure
    pub pairs: Vec<(usize, usize)>,
    pub labels: Vec<String>,
}

impl FacetPoset {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn is_face(&self, face: usize, cofacet: usize) -> bool {
        face == cofacet || self.pairs.contains(&(face, cofacet))
    }

    /// All facets whose closure contains the given one, itself included.
    pub fn star(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .pairs
            .iter()
            .filter(|(f, _)| *f == id)
            .map(|(_, c)| *c)
            .collect();
        out.push(id);
        out.sort();
        out
    }

    /// The smallest open set containing the seeds: union of their stars.
    pub fn up_set(&self, seeds: &[usize]) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &s in seeds {
            out.extend(self.star(s));
        }
        out.into_iter().collect()
    }

    pub fn is_open(&self, set: &[usize]) -> bool {
        let have: BTreeSet<usize> = set.iter().copied().collect();
        set.iter().all(|&id| self.star(id).iter().all(|c| have.contains(c)))
    }

    /// Facets of maximal dimension inside the given open set.
    pub fn maximal_in(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&id| {
                !self
                    .pairs
                    .iter()
                    .any(|(f, c)| *f == id && set.contains(c))
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph facets {\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            s.push_str(&format!(
                "  f{} [label=\"{} (dim {})\"];\n",
                i, l, self.dims[i]
            ));
        }
        for (f, c) in &self.pairs {
            // draw covering arrows only, skipping composites
            if self.dims[*c] == self.dims[*f] + 1 {
                s.push_str(&format!("  f{} -> f{};\n", f, c));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dims": self.dims,
            "pairs": self.pairs,
            "labels": self.labels,
        })
    }
}

impl TreeBall {
    pub fn poset(&self) -> FacetPoset {
        let nv = self.vertices.len();
        let mut dims = vec![0usize; nv];
        dims.extend(std::iter::repeat_n(1, self.edges.len()));
        let labels = (0..self.n_facets())
            .map(|id| self.facet(id).label())
            .collect();
        FacetPoset {
            dims,
            pairs: self.face_pairs(),
            labels,
        }
    }

    /// Conjugated generators of the level-e group attached to a facet.
    pub fn facet_group(&self, id: usize, e: u32) -> Result<Vec<Mat2>> {
        let facet = self.facet(id);
        let sf = standardize(&facet)?;
        let spec = FiltrationSpec::from_standardized(self.p, e, &sf)?;
        let hinv = sf.h().inverse();
        Ok(spec
            .ordered_basis()
            .iter()
            .map(|g| g.conjugate_by(&hinv))
            .collect())
    }
}

/// A bounded window in an apartment, with its facet poset and level tables.
#[derive(Debug, Clone)]
pub struct ApartmentWindow {
    pub apartment: Apartment,
    pub facets: Vec<ApartmentFacet>,
}

impl ApartmentWindow {
    pub fn new(apartment: Apartment, facets: Vec<ApartmentFacet>) -> Self {
        ApartmentWindow { apartment, facets }
    }

    pub fn poset(&self) -> FacetPoset {
        let dims: Vec<usize> = self.facets.iter().map(|f| f.dim()).collect();
        let labels: Vec<String> = self.facets.iter().map(|f| f.label()).collect();
        let vsets: Vec<BTreeSet<Vec<num_rational::BigRational>>> = self
            .facets
            .iter()
            .map(|f| f.closure_vertices.iter().cloned().collect())
            .collect();
        let mut pairs = Vec::new();
        for i in 0..self.facets.len() {
            for j in 0..self.facets.len() {
                if i != j && vsets[i].is_subset(&vsets[j]) && dims[i] < dims[j] {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort();
        FacetPoset {
            dims,
            pairs,
            labels,
        }
    }

    pub fn level_json(&self, e: u32) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .facets
            .iter()
            .map(|f| {
                let levels: Vec<serde_json::Value> = level_table(&self.apartment, f, e)
                    .into_iter()
                    .map(|(name, v)| serde_json::json!({ "root": name, "level": v.render() }))
                    .collect();
                serde_json::json!({
                    "facet": f.label(),
                    "dim": f.dim(),
                    "levels": levels,
                })
            })
            .collect();
        serde_json::json!({ "e": e, "facets": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::{a1_window, a2_window};
    use crate::tree::{tree_ball, LatticeVertex};

    #[test]
    fn tree_ball_poset_matches_counts() {
        let ball = tree_ball(3, &LatticeVertex::origin(3), 1).unwrap();
        let poset = ball.poset();
        assert_eq!(poset.len(), 5 + 4);
        assert_eq!(poset.pairs.len(), 8);
        // the star of the center vertex is itself plus its 4 edges
        let center = ball
            .vertices
            .iter()
            .position(|v| *v == LatticeVertex::origin(3))
            .unwrap();
        assert_eq!(poset.star(center).len(), 5);
        assert!(poset.is_open(&poset.star(center)));
        // a bare edge endpoint set is not open
        assert!(!poset.is_open(&[center]));
    }

    #[test]
    fn a2_window_poset_has_consistent_euler_count(){
        let window = ApartmentWindow::new(Apartment::a2(), a2_window(1));
        let poset = window.poset();
        let v = poset.dims.iter().filter(|d| **d == 0).count();
        let e = poset.dims.iter().filter(|d| **d == 1).count();
        let t = poset.dims.iter().filter(|d| **d == 2).count();
        // a disc triangulation has Euler characteristic 1
        assert_eq!(v as i64 - e as i64 + t as i64, 1);
        // every triangle has 3 vertex faces and 3 edge faces
        for (i, d) in poset.dims.iter().enumerate() {
            if *d == 2 {
                let faces = poset.pairs.iter().filter(|(_, c)| *c == i).count();
                assert_eq!(faces, 6);
            }
        }
    }

    #[test]
    fn a1_window_star_of_vertex_has_two_edges() {
        let window = ApartmentWindow::new(Apartment::a1(), a1_window(2));
        let poset = window.poset();
        let origin = poset.labels.iter().position(|l| l == "(0)").unwrap();
        assert_eq!(poset.star(origin).len(), 3);
    }

    #[test]
    fn facet_groups_fix_their_facet() {
        let ball = tree_ball(3, &LatticeVertex::origin(3), 2).unwrap();
        for id in 0..ball.n_facets() {
            for g in ball.facet_group(id, 1).unwrap() {
                match ball.facet(id) {
                    crate::tree::TreeFacet::Vertex(v) => assert_eq!(v.apply(&g), v),
                    crate::tree::TreeFacet::Edge(u, v) => {
                        assert_eq!(u.apply(&g), u);
                        assert_eq!(v.apply(&g), v);
                    }
                }
            }
        }
    }
}
