use num_rational::BigRational;
use root_data::{rat_int, RootDatum};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn rho_is_dominant_and_regular_with_full_orbit() {
    let d = RootDatum::preset_a2();
    let rho = d.rho();
    assert!(d.is_dominant(&rho).unwrap());
    assert!(d.is_regular(&rho).unwrap());
    let orbit = d.weyl_orbit(&rho).unwrap();
    assert_eq!(orbit.len(), d.weyl_order());
}

#[test]
fn a2_orbit_of_rho_matches_enumeration() {
    // expected orbit computed by applying the two reflections by hand:
    // s1(x) = x - x_1*(2,-1), s2(x) = x - x_2*(-1,2)
    let d = RootDatum::preset_a2();
    let orbit = d.weyl_orbit(&[rat_int(1), rat_int(1)]).unwrap();
    let expect: Vec<Vec<BigRational>> = [
        [-2i64, 1i64],
        [-1, -1],
        [-1, 2],
        [1, -2],
        [1, 1],
        [2, -1],
    ]
    .iter()
    .map(|[a, b]| vec![rat_int(*a), rat_int(*b)])
    .collect();
    let mut got = orbit;
    got.sort();
    let mut expect = expect;
    expect.sort();
    assert_eq!(got, expect);
}

#[test]
fn dominance_excludes_negative_integers_only() {
    let d = RootDatum::preset_a1();
    assert!(d.is_dominant(&[rat_int(0)]).unwrap());
    assert!(d.is_dominant(&[rat_int(3)]).unwrap());
    assert!(!d.is_dominant(&[rat_int(-1)]).unwrap());
    assert!(!d.is_dominant(&[rat_int(-2)]).unwrap());
    // non-integral negative values are allowed by the convention
    assert!(d.is_dominant(&[rat(-1, 2)]).unwrap());
}

#[test]
fn zero_weight_is_dominant_but_not_regular() {
    let d = RootDatum::preset_a2();
    let zero = vec![rat_int(0), rat_int(0)];
    assert!(d.is_dominant(&zero).unwrap());
    assert!(!d.is_regular(&zero).unwrap());
    assert_eq!(d.weyl_orbit(&zero).unwrap().len(), 1);
}

#[test]
fn fundamental_weight_is_singular_with_small_orbit() {
    let d = RootDatum::preset_a2();
    let w1 = vec![rat_int(1), rat_int(0)];
    assert!(d.is_dominant(&w1).unwrap());
    assert!(!d.is_regular(&w1).unwrap());
    let orbit = d.weyl_orbit(&w1).unwrap();
    assert_eq!(orbit.len(), 3);
    assert!(orbit.len() < d.weyl_order());
}

#[test]
fn regularity_matches_orbit_size() {
    let d = RootDatum::preset_a2();
    for x in [
        vec![rat_int(1), rat_int(1)],
        vec![rat_int(1), rat_int(0)],
        vec![rat_int(0), rat_int(0)],
        vec![rat(1, 2), rat(1, 3)],
        vec![rat_int(2), rat_int(-1)],
    ] {
        let regular = d.is_regular(&x).unwrap();
        let orbit = d.weyl_orbit(&x).unwrap();
        assert_eq!(regular, orbit.len() == d.weyl_order(), "weight {x:?}");
    }
}

#[test]
fn json_dump_is_deterministic_and_complete() {
    let d = RootDatum::preset_a2();
    let a = d.to_json().to_string();
    let b = RootDatum::preset_a2().to_json().to_string();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["weyl_order"], 6);
    assert_eq!(v["roots"].as_array().unwrap().len(), 6);
    for r in v["roots"].as_array().unwrap() {
        assert_eq!(r["self_pairing"], "2");
    }
}

#[test]
fn dimension_mismatch_is_reported() {
    let d = RootDatum::preset_a2();
    assert!(d.is_dominant(&[rat_int(1)]).is_err());
}
