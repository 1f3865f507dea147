use crate::error::{Error, Result};
use crate::mat2::{p_pow, rat, Mat2};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padic_core::{rational_valuation, Val};
use std::collections::BTreeMap;
use std::fmt;

/// A vertex of the rank-1 building: a homothety class of lattices in Q_p^2,
/// stored as the canonical Hermite basis [[p^a, y], [0, p^b]] with
/// 0 <= y < p^a and min(a, b, v_p(y)) = 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVertex {
    pub p: u32,
    pub a: u32,
    pub b: u32,
    pub y: BigInt,
}

/// Residue of a p-integral rational mod p^k, as an integer in [0, p^k).
fn residue_mod(q: &BigRational, p: u32, k: u32) -> BigInt {
    let m = BigInt::from(p).pow(k);
    let num = q.numer().mod_floor(&m);
    let den = q.denom().mod_floor(&m);
    let ext = den.extended_gcd(&m);
    assert!(ext.gcd.is_one(), "denominator not invertible mod p^k");
    (num * ext.x).mod_floor(&m)
}

impl LatticeVertex {
    /// Canonicalizes the lattice spanned by the columns of `m`.
    pub fn from_basis(p: u32, m: &Mat2) -> Result<LatticeVertex> {
        if m.det().is_zero() {
            return Err(Error::Degenerate("lattice basis must be invertible".into()));
        }
        // scale so every entry is p-integral and some entry is a unit
        let minv = m
            .entries()
            .iter()
            .map(|e| rational_valuation(e, p))
            .fold(Val::Infinite, Val::min)
            .finite()
            .expect("nonzero matrix");
        let scale = p_pow(p, -minv);
        let mut a = &m.a * &scale;
        let mut b = &m.b * &scale;
        let mut c = &m.c * &scale;
        let mut d = &m.d * &scale;

        // column reduction to upper-triangular form over Z_p
        let vc = rational_valuation(&c, p);
        let vd = rational_valuation(&d, p);
        if vc < vd {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut c, &mut d);
        }
        if !c.is_zero() {
            // now v(d) <= v(c); clear the bottom-left entry
            let f = &c / &d;
            a = &a - &f * &b;
            c = BigRational::zero();
            let _ = c;
        }
        // matrix is [[a, b], [0, d]] with a != 0, d != 0
        let va = rational_valuation(&a, p).finite().expect("nonzero");
        let vdd = rational_valuation(&d, p).finite().expect("nonzero");
        assert!(va >= 0 && vdd >= 0);
        // scale columns by units so the diagonal is exactly p^a, p^b
        let y0 = &b * p_pow(p, vdd) / &d; // b * unit(d)^{-1}
        let a_exp = va as u32;
        let b_exp = vdd as u32;
        // reduce the off-diagonal entry mod p^a
        let y = residue_mod(&y0, p, a_exp);
        // homothety normalization
        let vy = int_val(&y, p).unwrap_or(i64::MAX);
        let k = (a_exp as i64).min(b_exp as i64).min(vy);
        let pk = BigInt::from(p).pow(k as u32);
        Ok(LatticeVertex {
            p,
            a: a_exp - k as u32,
            b: b_exp - k as u32,
            y: y / pk,
        })
    }

    /// The base vertex: the class of the standard lattice.
    pub fn origin(p: u32) -> LatticeVertex {
        LatticeVertex {
            p,
            a: 0,
            b: 0,
            y: BigInt::zero(),
        }
    }

    /// The apartment vertex with coordinate n (the class of diag(1, p^n)).
    pub fn apartment(p: u32, n: i64) -> LatticeVertex {
        if n >= 0 {
            LatticeVertex {
                p,
                a: 0,
                b: n as u32,
                y: BigInt::zero(),
            }
        } else {
            LatticeVertex {
                p,
                a: (-n) as u32,
                b: 0,
                y: BigInt::zero(),
            }
        }
    }

    /// Canonical basis matrix (determinant p^(a+b), not unimodular).
    pub fn basis(&self) -> (BigRational, BigRational, BigRational, BigRational) {
        (
            p_pow(self.p, self.a as i64),
            BigRational::from_integer(self.y.clone()),
            BigRational::zero(),
            p_pow(self.p, self.b as i64),
        )
    }

    /// Vertex type: parity of the valuation of the basis determinant.
    pub fn parity(&self) -> u8 {
        ((self.a + self.b) % 2) as u8
    }

    /// Image of this vertex under g (acting on lattices by left
    /// multiplication of basis matrices).
    pub fn apply(&self, g: &Mat2) -> LatticeVertex {
        let (a, b, c, d) = self.basis();
        let m = Mat2 {
            a: &g.a * &a + &g.b * &c,
            b: &g.a * &b + &g.b * &d,
            c: &g.c * &a + &g.d * &c,
            d: &g.c * &b + &g.d * &d,
        };
        LatticeVertex::from_basis(self.p, &m).expect("image of a lattice basis is a basis")
    }

    /// Tree distance via elementary divisors of the transition matrix.
    pub fn distance(&self, other: &LatticeVertex) -> u32 {
        let (a1, b1, c1, d1) = self.basis();
        let (a2, b2, c2, d2) = other.basis();
        // X = self_basis^{-1} * other_basis, up to the determinant scalar
        let det = &a1 * &d1 - &b1 * &c1;
        let x11 = (&d1 * &a2 - &b1 * &c2) / &det;
        let x12 = (&d1 * &b2 - &b1 * &d2) / &det;
        let x21 = (-&c1 * &a2 + &a1 * &c2) / &det;
        let x22 = (-&c1 * &b2 + &a1 * &d2) / &det;
        let p = self.p;
        let minv = [&x11, &x12, &x21, &x22]
            .iter()
            .map(|e| rational_valuation(e, p))
            .fold(Val::Infinite, Val::min)
            .finite()
            .expect("transition matrix is invertible");
        let det_x = &x11 * &x22 - &x12 * &x21;
        let vdet = rational_valuation(&det_x, p).finite().expect("nonzero det");
        (vdet - 2 * minv) as u32
    }

    /// The p + 1 neighbors: classes of index-p sublattices.
    pub fn neighbors(&self) -> Vec<LatticeVertex> {
        let (a, b, c, d) = self.basis();
        let p = self.p;
        let pr = BigRational::from_integer(BigInt::from(p));
        let mut out = Vec::new();
        // columns (p c1, t c1 + c2) for t in [0, p), and (c1, p c2)
        for t in 0..p {
            let tr = rat(t as i64);
            let m = Mat2 {
                a: &a * &pr,
                b: &a * &tr + &b,
                c: &c * &pr,
                d: &c * &tr + &d,
            };
            out.push(LatticeVertex::from_basis(p, &m).expect("sublattice basis"));
        }
        let m = Mat2 {
            a,
            b: &b * &pr,
            c,
            d: &d * &pr,
        };
        out.push(LatticeVertex::from_basis(p, &m).expect("sublattice basis"));
        out.sort();
        out.dedup();
        out
    }

    pub fn label(&self) -> String {
        let pa = BigInt::from(self.p).pow(self.a);
        let pb = BigInt::from(self.p).pow(self.b);
        format!("[[{}, {}], [0, {}]]", pa, self.y, pb)
    }
}

fn int_val(n: &BigInt, p: u32) -> Option<i64> {
    padic_core::int_valuation(n, p).finite()
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A ball in the tree: vertices within the radius, edges between adjacent
/// ones. Facet ids enumerate vertices first, then edges.
#[derive(Debug, Clone)]
pub struct TreeBall {
    pub p: u32,
    pub radius: u32,
    pub vertices: Vec<LatticeVertex>,
    pub edges: Vec<(usize, usize)>,
}

pub const MAX_TREE_RADIUS: u32 = 6;

pub fn tree_ball(p: u32, center: &LatticeVertex, radius: u32) -> Result<TreeBall> {
    if radius > MAX_TREE_RADIUS {
        return Err(Error::WindowExceeded(format!(
            "radius {radius} exceeds the bound {MAX_TREE_RADIUS}"
        )));
    }
    let mut known: BTreeMap<LatticeVertex, u32> = BTreeMap::new();
    known.insert(center.clone(), 0);
    let mut frontier = vec![center.clone()];
    for depth in 1..=radius {
        let mut next = Vec::new();
        for v in &frontier {
            for w in v.neighbors() {
                if !known.contains_key(&w) {
                    known.insert(w.clone(), depth);
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let vertices: Vec<LatticeVertex> = known.keys().cloned().collect();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            if vertices[i].distance(&vertices[j]) == 1 {
                edges.push((i, j));
            }
        }
    }
    Ok(TreeBall {
        p,
        radius,
        vertices,
        edges,
    })
}

/// A facet of the tree: a vertex or an (unordered) edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeFacet {
    Vertex(LatticeVertex),
    Edge(LatticeVertex, LatticeVertex),
}

impl TreeFacet {
    pub fn edge(u: LatticeVertex, v: LatticeVertex) -> Result<TreeFacet> {
        if u.distance(&v) != 1 {
            return Err(Error::Degenerate(format!(
                "vertices at distance {} do not span an edge",
                u.distance(&v)
            )));
        }
        Ok(TreeFacet::Edge(u, v))
    }

    pub fn label(&self) -> String {
        match self {
            TreeFacet::Vertex(v) => v.label(),
            TreeFacet::Edge(u, v) => format!("{} -- {}", u.label(), v.label()),
        }
    }
}

impl TreeBall {
    pub fn n_facets(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn facet(&self, id: usize) -> TreeFacet {
        if id < self.vertices.len() {
            TreeFacet::Vertex(self.vertices[id].clone())
        } else {
            let (i, j) = self.edges[id - self.vertices.len()];
            TreeFacet::Edge(self.vertices[i].clone(), self.vertices[j].clone())
        }
    }

    pub fn is_vertex(&self, id: usize) -> bool {
        id < self.vertices.len()
    }

    /// Strict face pairs (vertex, containing edge).
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        let nv = self.vertices.len();
        let mut out = Vec::new();
        for (k, (i, j)) in self.edges.iter().enumerate() {
            out.push((*i, nv + k));
            out.push((*j, nv + k));
        }
        out.sort();
        out
    }

    /// The star of a facet: itself plus everything having it as a face.
    pub fn star(&self, id: usize) -> Vec<usize> {
        let nv = self.vertices.len();
        let mut out = vec![id];
        if self.is_vertex(id) {
            for (k, (i, j)) in self.edges.iter().enumerate() {
                if *i == id || *j == id {
                    out.push(nv + k);
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tree {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  v{} [label=\"{}\"];\n", i, v.label()));
        }
        for (i, j) in &self.edges {
            s.push_str(&format!("  v{} -- v{};\n", i, j));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let verts: Vec<String> = self.vertices.iter().map(|v| v.label()).collect();
        let edges: Vec<Vec<usize>> = self.edges.iter().map(|(i, j)| vec![*i, *j]).collect();
        let stars: Vec<Vec<usize>> = (0..self.n_facets()).map(|id| self.star(id)).collect();
        serde_json::json!({
            "p": self.p,
            "radius": self.radius,
            "vertices": verts,
            "edges": edges,
            "stars": stars,
        })
    }
}

/// Writes X (p-integral, det of valuation 1) as S * diag(1, p) * U with
/// S, U in GL2(Z_p). Used to build bases adapted to an edge.
fn smith_index_p(p: u32, x: &Mat2) -> (Mat2, Mat2) {
    let mut d = [
        x.a.clone(),
        x.b.clone(),
        x.c.clone(),
        x.d.clone(),
    ];
    let mut s = Mat2::identity();
    let mut u = Mat2::identity();

    let val = |q: &BigRational| rational_valuation(q, p);
    // move a unit entry to position (0,0)
    let pos = (0..4)
        .min_by_key(|&i| val(&d[i]))
        .expect("nonempty");
    if pos >= 2 {
        d.swap(0, 2);
        d.swap(1, 3);
        // row swap: X = P * X', so S absorbs P
        s = s.mul(&Mat2 {
            a: BigRational::zero(),
            b: BigRational::one(),
            c: BigRational::one(),
            d: BigRational::zero(),
        });
    }
    if pos % 2 == 1 {
        d.swap(0, 1);
        d.swap(2, 3);
        u = Mat2 {
            a: BigRational::zero(),
            b: BigRational::one(),
            c: BigRational::one(),
            d: BigRational::zero(),
        }
        .mul(&u);
    }
    debug_assert_eq!(val(&d[0]).finite(), Some(0));
    // clear (1,0): row2 -= f * row1, S absorbs the inverse op
    let f = &d[2] / &d[0];
    d[2] = BigRational::zero();
    d[3] = &d[3] - &f * &d[1];
    s = s.mul(&Mat2 {
        a: BigRational::one(),
        b: BigRational::zero(),
        c: f,
        d: BigRational::one(),
    });
    // clear (0,1): col2 -= g * col1, U absorbs the inverse op
    let g = &d[1] / &d[0];
    d[1] = BigRational::zero();
    u = Mat2 {
        a: BigRational::one(),
        b: g,
        c: BigRational::zero(),
        d: BigRational::one(),
    }
    .mul(&u);
    // normalize diagonal units into S
    let u1 = d[0].clone();
    let u2 = &d[3] / p_pow(p, 1);
    s = s.mul(&Mat2 {
        a: u1,
        b: BigRational::zero(),
        c: BigRational::zero(),
        d: u2,
    });
    (s, u)
}

/// Standardization result: an exact unimodular h carrying the facet into the
/// standard apartment, and the apartment coordinates of the image.
#[derive(Debug, Clone)]
pub enum StandardizedFacet {
    /// h * F is the apartment vertex with this coordinate.
    Vertex { h: Mat2, n: i64 },
    /// h * F is the apartment edge (n, n+1); the first input vertex maps to n.
    Edge { h: Mat2, n: i64 },
}

impl StandardizedFacet {
    pub fn h(&self) -> &Mat2 {
        match self {
            StandardizedFacet::Vertex { h, .. } | StandardizedFacet::Edge { h, .. } => h,
        }
    }
}

/// Finds h in the unimodular group with h * v in the standard apartment.
/// The reachable coordinate parity is fixed by the vertex type.
pub fn standardize_vertex(v: &LatticeVertex) -> StandardizedFacet {
    let p = v.p;
    let (a, b, c, d) = v.basis();
    let m = Mat2 { a, b, c, d };
    let det = m.det();
    let dv = rational_valuation(&det, p).finite().expect("lattice basis");
    let u0 = &det / p_pow(p, dv);
    let n = dv.rem_euclid(2);
    let s = (dv - n) / 2;
    // h = diag(u0 * p^s, p^(s+n)) * M^{-1} has determinant exactly 1
    let minv = rational_inverse(&m);
    let h = Mat2 {
        a: &u0 * p_pow(p, s) * &minv.a,
        b: &u0 * p_pow(p, s) * &minv.b,
        c: p_pow(p, s + n) * &minv.c,
        d: p_pow(p, s + n) * &minv.d,
    };
    debug_assert!(h.det().is_one());
    debug_assert_eq!(v.apply(&h), LatticeVertex::apartment(p, n));
    StandardizedFacet::Vertex { h, n }
}

/// Finds h with h * {u, v} = the apartment edge (n, n+1), u mapping to n.
pub fn standardize_edge(u: &LatticeVertex, v: &LatticeVertex) -> Result<StandardizedFacet> {
    let p = u.p;
    if u.distance(v) != 1 {
        return Err(Error::Degenerate("facet is not an edge".into()));
    }
    let (a1, b1, c1, d1) = u.basis();
    let m = Mat2 {
        a: a1,
        b: b1,
        c: c1,
        d: d1,
    };
    let (a2, b2, c2, d2) = v.basis();
    let m2 = Mat2 {
        a: a2,
        b: b2,
        c: c2,
        d: d2,
    };
    // transition matrix, scaled to be integral with unit content
    let minv = rational_inverse(&m);
    let mut x = minv.mul(&m2);
    let xmin = x.min_valuation(p);
    let scale = p_pow(p, -xmin);
    x = Mat2 {
        a: &x.a * &scale,
        b: &x.b * &scale,
        c: &x.c * &scale,
        d: &x.d * &scale,
    };
    let vdet = rational_valuation(&x.det(), p).finite().expect("invertible");
    assert_eq!(vdet, 1, "adjacent classes have index-p transition");
    let (s, _) = smith_index_p(p, &x);
    // adapted basis: columns of B span u's lattice, B * diag(1,p) spans v's
    let bmat = m.mul(&s);
    let det = bmat.det();
    let dv = rational_valuation(&det, p).finite().expect("basis");
    let u0 = &det / p_pow(p, dv);
    let n = dv.rem_euclid(2);
    let sexp = (dv - n) / 2;
    let binv = rational_inverse(&bmat);
    let h = Mat2 {
        a: &u0 * p_pow(p, sexp) * &binv.a,
        b: &u0 * p_pow(p, sexp) * &binv.b,
        c: p_pow(p, sexp + n) * &binv.c,
        d: p_pow(p, sexp + n) * &binv.d,
    };
    debug_assert!(h.det().is_one());
    debug_assert_eq!(u.apply(&h), LatticeVertex::apartment(p, n));
    debug_assert_eq!(v.apply(&h), LatticeVertex::apartment(p, n + 1));
    Ok(StandardizedFacet::Edge { h, n })
}

pub fn standardize(facet: &TreeFacet) -> Result<StandardizedFacet> {
    match facet {
        TreeFacet::Vertex(v) => Ok(standardize_vertex(v)),
        TreeFacet::Edge(u, v) => standardize_edge(u, v),
    }
}

/// Inverse of a general invertible 2x2 rational matrix.
fn rational_inverse(m: &Mat2) -> Mat2 {
    let det = m.det();
    Mat2 {
        a: &m.d / &det,
        b: -&m.b / &det,
        c: -&m.c / &det,
        d: &m.a / &det,
    }
}
