use building::LatticeVertex;
use sheaf_kit::{ss_sheaf, window, SmoothRep};

#[test]
fn global_sections_match_the_deepest_interior_stalk() {
    let w = window(3, 2).unwrap();
    let all: Vec<usize> = (0..w.poset.len()).collect();
    for (name, expect) in [("trivial", 1), ("p1-functions", 4), ("steinberg", 3)] {
        let rep = SmoothRep::by_name(name, 3).unwrap();
        let sheaf = ss_sheaf(&rep, 1, &w).unwrap();
        assert_eq!(sheaf.system.sections(&all).unwrap().dim(), expect, "{name}");
    }
}

#[test]
fn every_star_recovers_its_stalk() {
    let w = window(3, 2).unwrap();
    let sheaf = ss_sheaf(&SmoothRep::p1_functions(3).unwrap(), 1, &w).unwrap();
    for f in 0..w.poset.len() {
        assert!(
            sheaf.star_sections_match_stalk(f).unwrap(),
            "facet {f} ({})",
            w.poset.labels[f]
        );
    }
}

#[test]
fn vertex_stars_cover_the_window_and_glue() {
    let w = window(3, 2).unwrap();
    let sheaf = ss_sheaf(&SmoothRep::p1_functions(3).unwrap(), 1, &w).unwrap();
    let cover: Vec<Vec<usize>> = (0..w.ball.vertices.len())
        .map(|v| w.poset.star(v))
        .collect();
    let report = sheaf.system.gluing_check(&cover).unwrap();
    assert!(report.ok);
    assert_eq!(report.global_dim, 4);
    assert_eq!(report.open.len(), w.poset.len());
}

#[test]
fn sections_over_separated_stars_add_up() {
    let w = window(3, 2).unwrap();
    let sheaf = ss_sheaf(&SmoothRep::steinberg(3).unwrap(), 1, &w).unwrap();
    let origin = LatticeVertex::origin(3);
    let far: Vec<usize> = (0..w.ball.vertices.len())
        .filter(|&v| w.ball.vertices[v].distance(&origin) == 2)
        .take(2)
        .collect();
    let mut open = w.poset.star(far[0]);
    open.extend(w.poset.star(far[1]));
    let both = sheaf.system.sections(&open).unwrap().dim();
    let one = sheaf.system.sections(&w.poset.star(far[0])).unwrap().dim();
    let two = sheaf.system.sections(&w.poset.star(far[1])).unwrap().dim();
    assert_eq!(one, 1);
    assert_eq!(both, one + two);
}

#[test]
fn dot_and_json_exports_carry_the_dimension_data() {
    let w = window(3, 1).unwrap();
    let sheaf = ss_sheaf(&SmoothRep::p1_functions(3).unwrap(), 1, &w).unwrap();
    let dot = sheaf.to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("fillcolor"));
    let json = sheaf.to_json();
    assert_eq!(json["facets"].as_array().unwrap().len(), w.poset.len());
    assert_eq!(
        json["maps"].as_array().unwrap().len(),
        w.poset.pairs.len()
    );
    assert_eq!(json["facets"][0]["type"], "vertex");
}
