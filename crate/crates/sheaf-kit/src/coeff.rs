//! Coefficient systems and constructible sheaves on a finite facet poset.
//!
//! A system assigns a space to each facet and a map to each strict face
//! pair, subject to the identity and composition laws. Sections live over
//! the combinatorial opens, the up-closed sets: any open neighbourhood of a
//! point of a facet meets every cofacet of that facet, so section data over
//! a union of stars is exactly a compatible family indexed by the facets it
//! contains. On a bounded window the stars of boundary facets are truncated
//! to the interior sub-poset, and sections near the boundary are computed
//! over that truncation.

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, QMatrix, Quotient};
use building::FacetPoset;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct CoefficientSystem {
    pub poset: FacetPoset,
    pub dims: Vec<usize>,
    /// Maps aligned with poset.pairs: entry k sends the space at face
    /// pairs[k].0 into the space at cofacet pairs[k].1.
    pub maps: Vec<QMatrix>,
}

impl CoefficientSystem {
    pub fn constant(poset: FacetPoset, dim: usize) -> CoefficientSystem {
        let dims = vec![dim; poset.len()];
        let maps = poset.pairs.iter().map(|_| QMatrix::identity(dim)).collect();
        CoefficientSystem { poset, dims, maps }
    }

    pub fn map_for(&self, face: usize, cofacet: usize) -> Option<&QMatrix> {
        self.poset
            .pairs
            .iter()
            .position(|&(a, b)| a == face && b == cofacet)
            .map(|k| &self.maps[k])
    }

    /// Identity and composition laws, plus shape agreement with the poset.
    pub fn check_laws(&self) -> Result<()> {
        if self.dims.len() != self.poset.len() || self.maps.len() != self.poset.pairs.len() {
            return Err(Error::Shape("system does not match its poset".into()));
        }
        for (k, &(a, b)) in self.poset.pairs.iter().enumerate() {
            if a == b {
                return Err(Error::Shape(format!("reflexive pair at index {k}")));
            }
            let m = &self.maps[k];
            if m.nrows != self.dims[b] || m.ncols != self.dims[a] {
                return Err(Error::Shape(format!(
                    "map {a} -> {b} is {}x{}, expected {}x{}",
                    m.nrows, m.ncols, self.dims[b], self.dims[a]
                )));
            }
        }
        for &(a, b) in &self.poset.pairs {
            for &(b2, c) in &self.poset.pairs {
                if b2 != b {
                    continue;
                }
                let direct = self.map_for(a, c).ok_or_else(|| {
                    Error::Shape(format!("missing composite pair ({a}, {c})"))
                })?;
                let composed = self
                    .map_for(b, c)
                    .expect("iterating pairs")
                    .mul(self.map_for(a, b).expect("iterating pairs"))?;
                if &composed != direct {
                    return Err(Error::Internal(format!(
                        "composition law fails along {a} <= {b} <= {c}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sections over an up-closed set: one vector per facet, compatible
    /// along every face pair inside the set.
    pub fn sections(&self, open: &[usize]) -> Result<Sections> {
        let facets: Vec<usize> = {
            let s: BTreeSet<usize> = open.iter().copied().collect();
            s.into_iter().collect()
        };
        if facets.iter().any(|&f| f >= self.poset.len()) {
            return Err(Error::Shape("facet id out of range".into()));
        }
        if !self.poset.is_open(&facets) {
            return Err(Error::NotOpen(format!(
                "{facets:?} is not up-closed in the facet poset"
            )));
        }
        let mut offsets = Vec::with_capacity(facets.len());
        let mut total = 0usize;
        for &f in &facets {
            offsets.push(total);
            total += self.dims[f];
        }
        let pos = |f: usize| facets.binary_search(&f).ok();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (k, &(a, b)) in self.poset.pairs.iter().enumerate() {
            let (Some(ia), Some(ib)) = (pos(a), pos(b)) else {
                continue;
            };
            let m = &self.maps[k];
            for r in 0..self.dims[b] {
                let mut row = vec![BigRational::zero(); total];
                for j in 0..self.dims[a] {
                    row[offsets[ia] + j] = m.at(r, j).clone();
                }
                row[offsets[ib] + r] -= BigRational::from_integer(1.into());
                rows.push(row);
            }
        }
        let basis = if total == 0 {
            Vec::new()
        } else if rows.is_empty() {
            QMatrix::identity(total)
                .data
                .chunks(total)
                .map(|c| c.to_vec())
                .collect()
        } else {
            kernel_basis(&QMatrix::from_rows(rows)?)
        };
        Ok(Sections {
            facets,
            offsets,
            total,
            basis,
        })
    }

    pub fn star_sections(&self, facet: usize) -> Result<Sections> {
        self.sections(&self.poset.star(facet))
    }

    /// The finite gluing property: sections over the union of the cover
    /// are exactly the families of sections over the cover sets that agree
    /// on every shared facet. Restriction into the family tuple is
    /// injective because the cover exhausts the union, so equal dimensions
    /// settle the isomorphism.
    pub fn gluing_check(&self, cover: &[Vec<usize>]) -> Result<GluingReport> {
        let mut union: BTreeSet<usize> = BTreeSet::new();
        for part in cover {
            union.extend(part.iter().copied());
        }
        let open: Vec<usize> = union.into_iter().collect();
        let global = self.sections(&open)?;
        let parts: Vec<Sections> = cover
            .iter()
            .map(|p| self.sections(p))
            .collect::<Result<_>>()?;
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0usize;
        for s in &parts {
            offsets.push(total);
            total += s.dim();
        }
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let shared: Vec<usize> = parts[i]
                    .facets
                    .iter()
                    .copied()
                    .filter(|f| parts[j].facets.contains(f))
                    .collect();
                for f in shared {
                    for r in 0..self.dims[f] {
                        let mut row = vec![BigRational::zero(); total];
                        for (k, v) in parts[i].basis.iter().enumerate() {
                            row[offsets[i] + k] = parts[i].component(v, f)?[r].clone();
                        }
                        for (k, v) in parts[j].basis.iter().enumerate() {
                            row[offsets[j] + k] = -parts[j].component(v, f)?[r].clone();
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let equalizer_dim = if total == 0 {
            0
        } else if rows.is_empty() {
            total
        } else {
            kernel_basis(&QMatrix::from_rows(rows)?).len()
        };
        Ok(GluingReport {
            open,
            global_dim: global.dim(),
            equalizer_dim,
            ok: global.dim() == equalizer_dim,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let facets: Vec<serde_json::Value> = (0..self.poset.len())
            .map(|f| {
                serde_json::json!({
                    "id": f,
                    "dim": self.dims[f],
                    "type": if self.poset.dims[f] == 0 { "vertex" } else { "edge" },
                    "label": self.poset.labels[f],
                })
            })
            .collect();
        let maps: Vec<serde_json::Value> = self
            .poset
            .pairs
            .iter()
            .zip(&self.maps)
            .map(|(&(a, b), m)| {
                serde_json::json!({ "src": a, "dst": b, "matrix": m.to_json() })
            })
            .collect();
        serde_json::json!({ "facets": facets, "maps": maps })
    }
}

/// A basis of the space of sections over a fixed facet list, stored as
/// stacked coordinate vectors.
#[derive(Debug, Clone)]
pub struct Sections {
    pub facets: Vec<usize>,
    pub offsets: Vec<usize>,
    pub total: usize,
    pub basis: Vec<Vec<BigRational>>,
}

impl Sections {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The block of a stacked vector belonging to one facet.
    pub fn component<'a>(&self, v: &'a [BigRational], facet: usize) -> Result<&'a [BigRational]> {
        let i = self
            .facets
            .binary_search(&facet)
            .map_err(|_| Error::Shape(format!("facet {facet} not in the section domain")))?;
        let lo = self.offsets[i];
        let hi = if i + 1 < self.offsets.len() {
            self.offsets[i + 1]
        } else {
            self.total
        };
        Ok(&v[lo..hi])
    }
}

#[derive(Debug, Clone)]
pub struct GluingReport {
    pub open: Vec<usize>,
    pub global_dim: usize,
    pub equalizer_dim: usize,
    pub ok: bool,
}

/// A coefficient system together with its computed stalks, which for the
/// systems built from representations are quotient presentations of one
/// ambient space.
#[derive(Debug, Clone)]
pub struct ConstructibleSheaf {
    pub system: CoefficientSystem,
    pub stalks: Vec<Quotient>,
    pub rep_name: String,
    pub e: u32,
}

impl ConstructibleSheaf {
    pub fn stalk(&self, facet: usize) -> &Quotient {
        &self.stalks[facet]
    }

    pub fn stalk_dim(&self, facet: usize) -> usize {
        self.stalks[facet].dim()
    }

    /// The stalk as a colimit of sections over shrinking neighbourhoods:
    /// on the window the smallest open set around a facet is its star, the
    /// facet is initial in that diagram, and projecting sections to the
    /// facet component must be an isomorphism onto the stalk.
    pub fn star_sections_match_stalk(&self, facet: usize) -> Result<bool> {
        let s = self.system.star_sections(facet)?;
        let d = self.system.dims[facet];
        if s.dim() != d {
            return Ok(false);
        }
        let mut cols = Vec::with_capacity(s.dim());
        for v in &s.basis {
            cols.push(s.component(v, facet)?.to_vec());
        }
        let m = QMatrix::from_rows(cols)?;
        Ok(m.rank() == d)
    }

    pub fn dim_table(&self) -> String {
        let mut out = String::new();
        for f in 0..self.system.poset.len() {
            out.push_str(&format!(
                "{:>3}  {:<40} stalk dim {}\n",
                f, self.system.poset.labels[f], self.stalk_dim(f)
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.system.to_json();
        v["rep"] = serde_json::json!(self.rep_name);
        v["e"] = serde_json::json!(self.e);
        v
    }

    /// DOT drawing of the facet poset with nodes coloured by stalk
    /// dimension.
    pub fn to_dot(&self) -> String {
        let palette = [
            "lightgray", "lightblue", "lightgreen", "khaki", "salmon", "plum",
        ];
        let mut dims: Vec<usize> = (0..self.system.poset.len())
            .map(|f| self.stalk_dim(f))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        dims.sort();
        let mut s = String::from("digraph sheaf {\n  rankdir=BT;\n");
        for f in 0..self.system.poset.len() {
            let color = palette[dims
                .iter()
                .position(|&d| d == self.stalk_dim(f))
                .unwrap_or(0)
                % palette.len()];
            s.push_str(&format!(
                "  f{} [label=\"{}\\ndim {}\", style=filled, fillcolor={}];\n",
                f,
                self.system.poset.labels[f],
                self.stalk_dim(f),
                color
            ));
        }
        for &(a, b) in &self.system.poset.pairs {
            if self.system.poset.dims[b] == self.system.poset.dims[a] + 1 {
                s.push_str(&format!("  f{a} -> f{b};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}
