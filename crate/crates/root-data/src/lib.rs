//! Reduced root data of small rank in fundamental-weight coordinates, with
//! explicitly enumerated Weyl groups. Weights are rational vectors; the
//! pairing with a simple coroot reads off a coordinate, so dominance and
//! regularity are exact tests.

mod matrix;

pub use matrix::{rat_int, RatMat};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Weyl group exceeds the enumeration guard of {0} elements")]
    WeylTooLarge(usize),
    #[error("dimension mismatch: expected rank {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Weight = Vec<BigRational>;

const WEYL_GUARD: usize = 10_000;

/// A root with its coroot pairing functional. `weight_coords` expresses the
/// root in the fundamental-weight basis; `coroot_row` is the row vector
/// computing pairing(x, coroot) as a dot product with x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub weight_coords: Vec<BigRational>,
    pub coroot_row: Vec<BigRational>,
    pub positive: bool,
}

/// Root datum with rank, roots, coroots, and the full Weyl group as exact
/// reflection matrices acting on weight coordinates.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub roots: Vec<Root>,
    weyl: Vec<RatMat>,
}

impl RootDatum {
    /// Rank-1 datum (two roots, Weyl group of order 2).
    pub fn preset_a1() -> Self {
        Self::from_cartan(vec![vec![2]]).expect("A1 Cartan matrix is valid")
    }

    /// Rank-2 datum with six roots and Weyl group of order 6.
    pub fn preset_a2() -> Self {
        Self::from_cartan(vec![vec![2, -1], vec![-1, 2]]).expect("A2 Cartan matrix is valid")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "A1" => Some(Self::preset_a1()),
            "A2" => Some(Self::preset_a2()),
            _ => None,
        }
    }

    /// Builds the datum from a Cartan matrix. The Weyl group is enumerated by
    /// closing the simple reflections; enumeration aborts past the guard, so
    /// non-finite inputs are rejected rather than looping.
    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self, RootError> {
        let l = cartan.len();
        if l == 0 || cartan.iter().any(|row| row.len() != l) {
            return Err(RootError::InvalidCartan("matrix must be square".into()));
        }
        for i in 0..l {
            if cartan[i][i] != 2 {
                return Err(RootError::InvalidCartan("diagonal must be 2".into()));
            }
            for j in 0..l {
                if i != j && cartan[i][j] > 0 {
                    return Err(RootError::InvalidCartan(
                        "off-diagonal entries must be <= 0".into(),
                    ));
                }
                if i != j && (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(RootError::InvalidCartan(
                        "zero pattern must be symmetric".into(),
                    ));
                }
            }
        }

        // Simple root alpha_j in weight coordinates is column j of the Cartan
        // matrix; the simple reflection is s_i(x) = x - x_i * alpha_i.
        let simple_roots: Vec<Vec<BigRational>> = (0..l)
            .map(|j| (0..l).map(|i| rat_int(cartan[i][j])).collect())
            .collect();
        let mut reflections = Vec::new();
        for i in 0..l {
            let mut rows = Vec::new();
            for r in 0..l {
                let mut row: Vec<BigRational> = (0..l)
                    .map(|c| if r == c { rat_int(1) } else { rat_int(0) })
                    .collect();
                row[i] -= &simple_roots[i][r];
                rows.push(row);
            }
            reflections.push(RatMat::from_rows(rows));
        }

        let weyl = close_group(&reflections)?;

        // Roots: Weyl orbit of the simple roots. The coroot of w(alpha_i) is
        // w(coroot_i); its pairing row is row i of w^{-1}.
        let mut seen = BTreeSet::new();
        let mut roots = Vec::new();
        for w in &weyl {
            let w_inv = w.inverse();
            for (i, alpha) in simple_roots.iter().enumerate() {
                let beta = w.apply(alpha);
                if !seen.insert(render_vec(&beta)) {
                    continue;
                }
                let coroot_row: Vec<BigRational> =
                    (0..l).map(|j| w_inv.at(i, j).clone()).collect();
                roots.push(Root {
                    weight_coords: beta,
                    coroot_row,
                    positive: false,
                });
            }
        }

        // Positivity: expand in the simple-root basis and check signs.
        let basis = RatMat::from_rows(
            (0..l)
                .map(|r| (0..l).map(|c| simple_roots[c][r].clone()).collect())
                .collect(),
        );
        for root in &mut roots {
            let coeffs = matrix::solve(&basis, &root.weight_coords);
            root.positive = coeffs.iter().all(|c| !c.is_negative());
        }
        roots.sort_by_key(|r| render_vec(&r.weight_coords));

        Ok(RootDatum {
            rank: l,
            cartan,
            roots,
            weyl,
        })
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn weyl_elements(&self) -> &[RatMat] {
        &self.weyl
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.positive)
    }

    pub fn check_rank(&self, x: &[BigRational]) -> Result<(), RootError> {
        if x.len() != self.rank {
            return Err(RootError::Dimension {
                expected: self.rank,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// pairing(x, coroot of `root`).
    pub fn pairing(&self, x: &[BigRational], root: &Root) -> BigRational {
        root.coroot_row
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |s, t| s + t)
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Weight {
        let mut acc = vec![BigRational::zero(); self.rank];
        for r in self.positive_roots() {
            for (a, b) in acc.iter_mut().zip(&r.weight_coords) {
                *a += b;
            }
        }
        let half = BigRational::new(1.into(), 2.into());
        acc.into_iter().map(|v| v * &half).collect()
    }

    /// Dominant means no pairing with a positive coroot is a negative integer.
    pub fn is_dominant(&self, x: &[BigRational]) -> Result<bool, RootError> {
        self.check_rank(x)?;
        for root in self.positive_roots() {
            let v = self.pairing(x, root);
            if v.is_integer() && v.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Regular means the Weyl orbit is free: w(x) != x for all w != 1.
    pub fn is_regular(&self, x: &[BigRational]) -> Result<bool, RootError> {
        self.check_rank(x)?;
        let id = RatMat::identity(self.rank);
        for w in &self.weyl {
            if *w == id {
                continue;
            }
            if w.apply(x) == x {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The Weyl orbit of a weight, deduplicated and sorted.
    pub fn weyl_orbit(&self, x: &[BigRational]) -> Result<Vec<Weight>, RootError> {
        self.check_rank(x)?;
        let mut orbit: Vec<Weight> = Vec::new();
        let mut seen = BTreeSet::new();
        for w in &self.weyl {
            let y = w.apply(x);
            if seen.insert(render_vec(&y)) {
                orbit.push(y);
            }
        }
        orbit.sort_by_key(|v| render_vec(v));
        Ok(orbit)
    }

    /// JSON document listing roots, coroot rows, pairings, and group order.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct RootOut {
            weight_coords: Vec<String>,
            coroot_row: Vec<String>,
            positive: bool,
            self_pairing: String,
        }
        let roots: Vec<RootOut> = self
            .roots
            .iter()
            .map(|r| RootOut {
                weight_coords: r.weight_coords.iter().map(render_rat).collect(),
                coroot_row: r.coroot_row.iter().map(render_rat).collect(),
                positive: r.positive,
                self_pairing: render_rat(&self.pairing(&r.weight_coords, r)),
            })
            .collect();
        serde_json::json!({
            "rank": self.rank,
            "cartan": self.cartan,
            "weyl_order": self.weyl_order(),
            "rho": self.rho().iter().map(render_rat).collect::<Vec<_>>(),
            "roots": serde_json::to_value(roots).expect("serializable"),
        })
    }
}

fn close_group(gens: &[RatMat]) -> Result<Vec<RatMat>, RootError> {
    // Breadth-first closure. Finite groups below the size guard close within
    // word length 60; slow-growing infinite groups (dihedral) are cut off by
    // the depth cap instead of crawling to the size cap with huge entries.
    const DEPTH_GUARD: usize = 60;
    let n = gens.first().map(|g| g.n).unwrap_or(0);
    let mut elems = vec![RatMat::identity(n)];
    let mut seen: BTreeSet<Vec<BigRational>> = elems.iter().map(|m| m.data.clone()).collect();
    let mut frontier = elems.clone();
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        if depth > DEPTH_GUARD {
            return Err(RootError::WeylTooLarge(WEYL_GUARD));
        }
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens {
                let wg = w.mul(g);
                if seen.insert(wg.data.clone()) {
                    next.push(wg.clone());
                    elems.push(wg);
                    if elems.len() > WEYL_GUARD {
                        return Err(RootError::WeylTooLarge(WEYL_GUARD));
                    }
                }
            }
        }
        frontier = next;
    }
    elems.sort_by(|a, b| a.data.cmp(&b.data));
    Ok(elems)
}

pub fn render_rat(q: &BigRational) -> String {
    use num_traits::One;
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn render_vec(v: &[BigRational]) -> String {
    v.iter().map(render_rat).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_has_two_roots_and_order_two_weyl() {
        let d = RootDatum::preset_a1();
        assert_eq!(d.weyl_order(), 2);
        assert_eq!(d.roots.len(), 2);
        assert_eq!(d.positive_roots().count(), 1);
        assert_eq!(d.rho(), vec![rat_int(1)]);
    }

    #[test]
    fn a2_weyl_order_and_root_count() {
        let d = RootDatum::preset_a2();
        assert_eq!(d.weyl_order(), 6);
        assert_eq!(d.roots.len(), 6);
        assert_eq!(d.positive_roots().count(), 3);
    }

    #[test]
    fn self_pairing_is_two_for_every_root() {
        for d in [RootDatum::preset_a1(), RootDatum::preset_a2()] {
            for r in &d.roots {
                assert_eq!(d.pairing(&r.weight_coords, r), rat_int(2));
            }
        }
    }

    #[test]
    fn rho_pairs_to_one_with_simple_coroots() {
        let d = RootDatum::preset_a2();
        let rho = d.rho();
        assert_eq!(rho, vec![rat_int(1), rat_int(1)]);
        // simple coroots read off coordinates in this basis
        assert_eq!(rho[0], rat_int(1));
        assert_eq!(rho[1], rat_int(1));
    }

    #[test]
    fn weyl_guard_rejects_infinite_groups() {
        let err = RootDatum::from_cartan(vec![vec![2, -3], vec![-3, 2]]).unwrap_err();
        assert_eq!(err, RootError::WeylTooLarge(10_000));
    }
}
