use num_bigint::BigInt;
use num_rational::BigRational;
use padic_core::XReal;
use std::fmt;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A root seen as an integer linear form on the apartment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootLine {
    pub name: String,
    pub form: Vec<i64>,
}

impl RootLine {
    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.form
            .iter()
            .zip(x)
            .map(|(c, v)| rat(*c) * v)
            .fold(rat(0), |a, b| a + b)
    }
}

/// The standard apartment of a given rank with its root system as linear
/// forms. Rank 1 covers the tree; rank 2 is the triangulated plane.
#[derive(Debug, Clone)]
pub struct Apartment {
    pub rank: usize,
    pub roots: Vec<RootLine>,
}

impl Apartment {
    pub fn a1() -> Self {
        Apartment {
            rank: 1,
            roots: vec![
                RootLine {
                    name: "alpha".into(),
                    form: vec![1],
                },
                RootLine {
                    name: "-alpha".into(),
                    form: vec![-1],
                },
            ],
        }
    }

    pub fn a2() -> Self {
        let mk = |name: &str, form: Vec<i64>| RootLine {
            name: name.into(),
            form,
        };
        Apartment {
            rank: 2,
            roots: vec![
                mk("alpha", vec![1, 0]),
                mk("beta", vec![0, 1]),
                mk("alpha+beta", vec![1, 1]),
                mk("-alpha", vec![-1, 0]),
                mk("-beta", vec![0, -1]),
                mk("-alpha-beta", vec![-1, -1]),
            ],
        }
    }

    pub fn root(&self, name: &str) -> Option<&RootLine> {
        self.roots.iter().find(|r| r.name == name)
    }
}

/// A polysimplicial facet of the apartment, described by the vertices of its
/// closure (1 vertex = point, 2 = open edge, 3 = open triangle).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApartmentFacet {
    pub closure_vertices: Vec<Vec<BigRational>>,
}

impl ApartmentFacet {
    pub fn vertex(coords: Vec<i64>) -> Self {
        ApartmentFacet {
            closure_vertices: vec![coords.into_iter().map(rat).collect()],
        }
    }

    pub fn from_vertices(vs: Vec<Vec<i64>>) -> Self {
        ApartmentFacet {
            closure_vertices: vs
                .into_iter()
                .map(|v| v.into_iter().map(rat).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.closure_vertices.len() - 1
    }

    /// True if the linear form takes a single value on the whole facet.
    pub fn is_constant(&self, root: &RootLine) -> bool {
        let v0 = root.eval(&self.closure_vertices[0]);
        self.closure_vertices[1..]
            .iter()
            .all(|v| root.eval(v) == v0)
    }

    pub fn label(&self) -> String {
        let vs: Vec<String> = self
            .closure_vertices
            .iter()
            .map(|v| {
                let cs: Vec<String> = v.iter().map(|q| q.to_string()).collect();
                format!("({})", cs.join(","))
            })
            .collect();
        vs.join("-")
    }
}

/// The concave function attached to a facet: one extended value per root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcaveFunction {
    pub values: Vec<(String, XReal)>,
}

impl ConcaveFunction {
    pub fn get(&self, root: &str) -> Option<&XReal> {
        self.values
            .iter()
            .find(|(n, _)| n == root)
            .map(|(_, v)| v)
    }
}

/// f_F(root) = -min over the closure vertices of the root value. Attained on
/// the closure, so the infimum over the open facet equals this minimum.
pub fn facet_concave(apartment: &Apartment, facet: &ApartmentFacet) -> ConcaveFunction {
    let values = apartment
        .roots
        .iter()
        .map(|root| {
            let m = facet
                .closure_vertices
                .iter()
                .map(|v| root.eval(v))
                .min()
                .expect("facet has at least one vertex");
            (root.name.clone(), XReal::Real(-m))
        })
        .collect();
    ConcaveFunction { values }
}

/// The optimized function f*_F: same as f_F except roots constant on F are
/// bumped to the strict bound `value+`.
pub fn star_concave(apartment: &Apartment, facet: &ApartmentFacet) -> ConcaveFunction {
    let base = facet_concave(apartment, facet);
    let values = apartment
        .roots
        .iter()
        .zip(base.values)
        .map(|(root, (name, v))| {
            if facet.is_constant(root) {
                (name, v.plus())
            } else {
                (name, v)
            }
        })
        .collect();
    ConcaveFunction { values }
}

/// Checks f(a+b) <= f(a) + f(b) whenever a, b, a+b are all roots.
pub fn concavity_holds(apartment: &Apartment, f: &ConcaveFunction) -> bool {
    for r1 in &apartment.roots {
        for r2 in &apartment.roots {
            let sum: Vec<i64> = r1.form.iter().zip(&r2.form).map(|(a, b)| a + b).collect();
            let Some(r3) = apartment.roots.iter().find(|r| r.form == sum) else {
                continue;
            };
            let fa = f.get(&r1.name).unwrap().clone();
            let fb = f.get(&r2.name).unwrap().clone();
            let fc = f.get(&r3.name).unwrap().clone();
            if fc > fa + fb {
                return false;
            }
        }
    }
    true
}

/// Facets of the rank-1 apartment restricted to [-radius, radius]: vertices
/// at the integers and open unit edges between them.
pub fn a1_window(radius: i64) -> Vec<ApartmentFacet> {
    let mut out = Vec::new();
    for n in -radius..=radius {
        out.push(ApartmentFacet::vertex(vec![n]));
    }
    for n in -radius..radius {
        out.push(ApartmentFacet::from_vertices(vec![vec![n], vec![n + 1]]));
    }
    out
}

/// Facets of the triangulated rank-2 apartment with vertex coordinates in
/// [-radius, radius]^2: vertices, three edge families, and the two triangle
/// families of each unit square cut along the diagonal x + y = const.
pub fn a2_window(radius: i64) -> Vec<ApartmentFacet> {
    let r = radius;
    let mut out = Vec::new();
    for s in -r..=r {
        for t in -r..=r {
            out.push(ApartmentFacet::vertex(vec![s, t]));
        }
    }
    for s in -r..=r {
        for t in -r..=r {
            if s < r {
                out.push(ApartmentFacet::from_vertices(vec![
                    vec![s, t],
                    vec![s + 1, t],
                ]));
            }
            if t < r {
                out.push(ApartmentFacet::from_vertices(vec![
                    vec![s, t],
                    vec![s, t + 1],
                ]));
            }
            if s < r && t < r {
                out.push(ApartmentFacet::from_vertices(vec![
                    vec![s + 1, t],
                    vec![s, t + 1],
                ]));
                out.push(ApartmentFacet::from_vertices(vec![
                    vec![s, t],
                    vec![s + 1, t],
                    vec![s, t + 1],
                ]));
                out.push(ApartmentFacet::from_vertices(vec![
                    vec![s + 1, t],
                    vec![s, t + 1],
                    vec![s + 1, t + 1],
                ]));
            }
        }
    }
    out
}

impl fmt::Display for ApartmentFacet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_vertex_gets_zero_plus_everywhere() {
        let apt = Apartment::a1();
        let x0 = ApartmentFacet::vertex(vec![0]);
        let f = star_concave(&apt, &x0);
        assert_eq!(f.get("alpha"), Some(&XReal::int_plus(0)));
        assert_eq!(f.get("-alpha"), Some(&XReal::int_plus(0)));
    }

    #[test]
    fn standard_edge_has_asymmetric_values() {
        let apt = Apartment::a1();
        let edge = ApartmentFacet::from_vertices(vec![vec![0], vec![1]]);
        let f = star_concave(&apt, &edge);
        assert_eq!(f.get("alpha"), Some(&XReal::int(0)));
        assert_eq!(f.get("-alpha"), Some(&XReal::int(1)));
    }

    #[test]
    fn fundamental_alcove_values() {
        let apt = Apartment::a2();
        let alcove =
            ApartmentFacet::from_vertices(vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let f = facet_concave(&apt, &alcove);
        for pos in ["alpha", "beta", "alpha+beta"] {
            assert_eq!(f.get(pos), Some(&XReal::int(0)), "root {pos}");
        }
        for neg in ["-alpha", "-beta", "-alpha-beta"] {
            assert_eq!(f.get(neg), Some(&XReal::int(1)), "root {neg}");
        }
        // no root is constant on a 2-dimensional facet here
        let fs = star_concave(&apt, &alcove);
        assert!(fs.values.iter().all(|(_, v)| !v.is_plus()));
        assert!(concavity_holds(&apt, &fs));
    }

    #[test]
    fn alcove_edge_with_constant_root_gets_plus() {
        let apt = Apartment::a2();
        // edge from (0,0) to (1,0): beta is constantly 0 on it
        let edge = ApartmentFacet::from_vertices(vec![vec![0, 0], vec![1, 0]]);
        let f = star_concave(&apt, &edge);
        assert_eq!(f.get("beta"), Some(&XReal::int_plus(0)));
        assert_eq!(f.get("-beta"), Some(&XReal::int_plus(0)));
        assert_eq!(f.get("alpha"), Some(&XReal::int(0)));
        assert_eq!(f.get("-alpha"), Some(&XReal::int(1)));
        assert!(concavity_holds(&apt, &f));
    }

    #[test]
    fn concavity_across_window_facets() {
        let apt = Apartment::a2();
        for facet in a2_window(2) {
            let f = facet_concave(&apt, &facet);
            assert!(concavity_holds(&apt, &f), "facet {}", facet.label());
            let fs = star_concave(&apt, &facet);
            assert!(concavity_holds(&apt, &fs), "facet {}", facet.label());
        }
    }

    #[test]
    fn window_counts() {
        assert_eq!(a1_window(2).len(), 5 + 4);
        // 5x5 vertices, edges: 20 horizontal + 20 vertical + 16 diagonal, 32 triangles
        assert_eq!(a2_window(2).len(), 25 + 56 + 32);
    }
}
