//! Worked examples with known answers.

use chromatic_tda::cloud::{maximal_colouring, ChromaticPointCloud};
use chromatic_tda::delaunay::{chromatic_delaunay, delaunay_membership_oracle, delaunay_triangulation};
use chromatic_tda::filtration::{self, cech_filtration, chromatic_alpha_filtration, verify_nesting, FiltrationKind};
use chromatic_tda::general_position::check_general_position;
use chromatic_tda::morse::verify_collapse_theorems;
use chromatic_tda::persistence::compute_persistence;
use chromatic_tda::simplex::Simplex;

fn s(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec()).unwrap()
}

fn non_functoriality_points() -> Vec<Vec<f64>> {
    vec![vec![0.6, 0.8], vec![0.4, 0.15], vec![0.75, -0.05], vec![0.95, 0.15], vec![0.6, 0.45]]
}

#[test]
fn delaunay_is_not_functorial() {
    let pts = non_functoriality_points();
    let four = delaunay_triangulation(&pts[..4]).unwrap();
    let five = delaunay_triangulation(&pts).unwrap();
    assert!(four.complex.contains(&s(&[1, 3])));
    assert!(!five.complex.contains(&s(&[1, 3])));
    assert!(delaunay_membership_oracle(&pts[..4], &s(&[1, 3])).unwrap());
    assert!(!delaunay_membership_oracle(&pts, &s(&[1, 3])).unwrap());
}

#[test]
fn trapezium_lift_is_flat() {
    let c = ChromaticPointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 2.0]], vec![0, 0, 1, 1]).unwrap();
    let tri = chromatic_delaunay(&c, c.colours()).unwrap();
    assert_eq!(tri.top_dimension, 2);
    assert_eq!(tri.complex.dim(), Some(2));
    let gp = check_general_position(&c, c.colours()).unwrap();
    assert!(!gp.general_position);
    assert_eq!(gp.witness.unwrap().parts, vec![vec![0, 1], vec![2, 3]]);
}

#[test]
fn tetrahedron_collapses_onto_delaunay() {
    let pts = vec![vec![3.0, 1.0], vec![2.0, -2.0], vec![2.0, 3.0], vec![1.0, 4.0]];
    let c = ChromaticPointCloud::new(pts.clone(), vec![0, 0, 0, 1]).unwrap();
    let alpha = chromatic_alpha_filtration(&c, c.colours()).unwrap();
    assert_eq!(alpha.len(), 15);
    let del = delaunay_triangulation(&pts).unwrap();
    assert!(del.complex.contains(&s(&[1, 3])));
    assert_eq!(del.complex.len(), 11);

    // the coarser colouring is the monochromatic one, the finer one is c's
    let mono = ChromaticPointCloud::mono(pts).unwrap();
    let rep = verify_collapse_theorems(&mono, mono.colours(), c.colours(), None).unwrap();
    assert!(rep.all_ok(), "{:?}", rep.failures().collect::<Vec<_>>());
    let at_inf = rep.checks.iter().find(|k| k.theorem == "A" && k.r.is_infinite()).unwrap();
    assert_eq!((at_inf.source_size, at_inf.target_size), (15, 11));
}

#[test]
fn equilateral_triangle_attains_nesting_constant() {
    let h = 3f64.sqrt() / 2.0;
    let c = ChromaticPointCloud::mono(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]).unwrap();
    let f = cech_filtration(&c, None).unwrap();
    let rep = verify_nesting(&c, &f).unwrap();
    assert!(rep.violations.is_empty());
    assert!((rep.max_ratio - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    assert!((rep.delta - 2.0 / 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn square_has_one_loop() {
    let c = ChromaticPointCloud::mono(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
    let dgm = compute_persistence(&cech_filtration(&c, None).unwrap(), 1).unwrap();
    let h1: Vec<_> = dgm.degree(1).collect();
    assert_eq!(h1.len(), 1);
    assert!((h1[0].birth - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((h1[0].death - 1.0).abs() < 1e-12);
    assert_eq!(dgm.degree(0).filter(|b| b.is_essential()).count(), 1);
}

#[test]
fn extremal_colourings_on_a_small_cloud() {
    let pts = non_functoriality_points();
    let mono = ChromaticPointCloud::mono(pts.clone()).unwrap();
    let a = chromatic_alpha_filtration(&mono, mono.colours()).unwrap();
    let del = delaunay_triangulation(&pts).unwrap();
    assert_eq!(a.complex(), del.complex);

    let max = maximal_colouring(pts.len());
    let full = chromatic_alpha_filtration(&mono, &max).unwrap();
    let cech = cech_filtration(&mono, None).unwrap();
    assert_eq!(full.len(), cech.len());
    for (sigma, v) in cech.entries() {
        let w = full.value(sigma).unwrap();
        assert!((v - w).abs() <= 1e-9 * v.max(1.0), "{sigma:?}: {v} vs {w}");
    }
}

#[test]
fn kind_names_round_trip() {
    for k in [FiltrationKind::Cech, FiltrationKind::Rips, FiltrationKind::Alpha, FiltrationKind::DelCech, FiltrationKind::DelRips] {
        assert_eq!(k.as_str().parse::<FiltrationKind>().unwrap(), k);
    }
    assert!("delrips".parse::<FiltrationKind>().is_err());
    let c = ChromaticPointCloud::mono(vec![vec![0.0], vec![1.0]]).unwrap();
    assert_eq!(filtration::build(FiltrationKind::DelRips, &c, c.colours(), None).unwrap().kind, FiltrationKind::DelRips);
}
