use chromatic_tda::cloud::{canonicalize, chromatic_lift, is_refinement, ChromaticPointCloud};
use chromatic_tda::delaunay::{chromatic_delaunay, delaunay_triangulation};
use chromatic_tda::filtration::{cech_filtration, del_cech_filtration, del_rips_filtration, rips_filtration};
use chromatic_tda::geometry::{circumsphere_through, dist};
use chromatic_tda::io;
use chromatic_tda::persistence::compute_persistence;
use chromatic_tda::rng::random_cloud;
use chromatic_tda::stability::{chromatic_distance, chromatic_matching};
use proptest::prelude::*;

fn points(n: std::ops::Range<usize>, d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0f64, d), n)
}

/// All colourings of n points in canonical form (set partitions).
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = vec![];
        for p in out {
            let k = p.iter().max().map_or(0, |m| m + 1);
            for c in 0..=k {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[test]
fn refinement_is_a_partial_order() {
    for n in 1..=5 {
        let ps = partitions(n);
        let r = |a: &Vec<usize>, b: &Vec<usize>| is_refinement(a, b).unwrap();
        for a in &ps {
            assert!(r(a, a));
            assert!(r(a, &vec![0; n]));
            assert!(r(&(0..n).collect(), a));
            for b in &ps {
                if a != b && r(a, b) {
                    assert!(!r(b, a), "{a:?} {b:?}");
                }
                for c in &ps {
                    if r(a, b) && r(b, c) {
                        assert!(r(a, c));
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filtration_json_round_trip(seed in 0u64..1000, n in 3usize..9, colours in 1usize..4) {
        let c = random_cloud(seed, n, 2, colours);
        let f = del_cech_filtration(&c, c.colours()).unwrap();
        let text = io::write_filtration_json(&f).unwrap();
        prop_assert_eq!(io::read_filtration_json(&text).unwrap(), f);
    }

    #[test]
    fn cloud_csv_round_trip(pts in points(1..12, 3), seed in 0u64..100) {
        let colours: Vec<usize> = (0..pts.len()).map(|i| (i as u64 * 7 + seed) as usize % 3).collect();
        if let Ok(c) = ChromaticPointCloud::new(pts, colours) {
            let back = io::read_cloud_csv(&io::write_cloud_csv(&c)).unwrap();
            prop_assert_eq!(back.points(), c.points());
            prop_assert_eq!(back.colours(), c.colours());
        }
    }

    #[test]
    fn diagram_csv_round_trip(seed in 0u64..1000, n in 3usize..10) {
        let c = random_cloud(seed, n, 2, 2);
        let dgm = compute_persistence(&del_rips_filtration(&c, c.colours()).unwrap(), 2).unwrap();
        // zero-length pairs are not written
        prop_assert_eq!(io::read_diagram_csv(&io::write_diagram_csv(&dgm)).unwrap().bars, dgm.bars);
    }

    #[test]
    fn lift_distances(seed in 0u64..1000, n in 2usize..10, colours in 1usize..5) {
        let c = random_cloud(seed, n, 2, colours);
        let mu = c.colours();
        let lift = chromatic_lift(&c, mu);
        for i in 0..n {
            prop_assert_eq!(&lift[i][..2], c.point(i));
            for j in 0..n {
                let base = dist(c.point(i), c.point(j));
                let l = dist(&lift[i], &lift[j]);
                if mu[i] == mu[j] {
                    prop_assert!((l - base).abs() <= 1e-12 * (1.0 + base));
                } else {
                    // colour vertices are 0 or unit basis vectors: offset 1 or sqrt 2
                    let extra = (l * l - base * base).sqrt();
                    prop_assert!((extra - 1.0).abs() < 1e-9 || (extra - 2f64.sqrt()).abs() < 1e-9, "{}", extra);
                }
            }
        }
        // relabelling colours does not move the lift
        let relabelled: Vec<usize> = mu.iter().map(|m| 10 - m).collect();
        prop_assert_eq!(canonicalize(&relabelled), canonicalize(mu));
    }

    #[test]
    fn matching_distortion_bounded_by_displacement(seed in 0u64..1000, n in 2usize..9, eps in prop::collection::vec(prop::collection::vec(-0.1..0.1f64, 2), 9)) {
        let x = random_cloud(seed, n, 2, 2);
        let moved: Vec<Vec<f64>> = x.points().iter().zip(&eps).map(|(p, e)| vec![p[0] + e[0], p[1] + e[1]]).collect();
        let Ok(y) = ChromaticPointCloud::new(moved, x.colours().to_vec()) else { return Ok(()) };
        let m = chromatic_matching(&x, &y).unwrap().unwrap();
        prop_assert!(m.distortion <= 2.0 * m.sup_displacement + 1e-12);
        let shift = eps[..n].iter().map(|e| (e[0] * e[0] + e[1] * e[1]).sqrt()).fold(0.0, f64::max);
        prop_assert!(m.sup_displacement <= shift + 1e-12);
    }

    #[test]
    fn chromatic_distance_is_symmetric(a in 0u64..500, b in 0u64..500, n in 1usize..8) {
        let x = random_cloud(a, n, 2, 2);
        let y = random_cloud(b, n, 2, 2);
        prop_assert_eq!(chromatic_distance(&x, &x).unwrap(), 0.0);
        let (d1, d2) = (chromatic_distance(&x, &y).unwrap(), chromatic_distance(&y, &x).unwrap());
        prop_assert!(d1 == d2 || (d1 - d2).abs() <= 1e-12);
    }

    #[test]
    fn essential_zero_bars_count_components(seed in 0u64..1000, n in 1usize..12, colours in 1usize..4) {
        let c = random_cloud(seed, n, 2, colours);
        let dgm = compute_persistence(&del_rips_filtration(&c, c.colours()).unwrap(), 1).unwrap();
        prop_assert_eq!(dgm.degree(0).filter(|b| b.is_essential()).count(), 1);
        prop_assert_eq!(dgm.degree(0).count(), n);
    }

    #[test]
    fn delaunay_cech_keeps_euler_characteristic(seed in 0u64..1000, n in 3usize..8) {
        let c = random_cloud(seed, n, 2, 1);
        let cech = cech_filtration(&c, None).unwrap();
        let del = del_cech_filtration(&c, c.colours()).unwrap();
        for r in del.distinct_values() {
            prop_assert_eq!(cech.sublevel(r).euler_characteristic(), del.sublevel(r).euler_characteristic(), "r = {}", r);
        }
    }

    #[test]
    fn rips_contains_cech(seed in 0u64..1000, n in 3usize..8) {
        let c = random_cloud(seed, n, 2, 1);
        let rips = rips_filtration(&c, Some(3)).unwrap();
        for (s, v) in cech_filtration(&c, Some(3)).unwrap().entries() {
            prop_assert!(rips.value(s).unwrap() <= v * (1.0 + 1e-12));
        }
    }

    #[test]
    fn circumsphere_is_equidistant(pts in points(2..5, 3)) {
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        if let Ok((c, r)) = circumsphere_through(&refs) {
            for p in &pts {
                prop_assert!((dist(p, &c) - r).abs() <= 1e-6 * (1.0 + r));
            }
        }
    }

    #[test]
    fn mono_chromatic_delaunay_is_delaunay(seed in 0u64..1000, n in 3usize..20) {
        let c = random_cloud(seed, n, 2, 1);
        let a = chromatic_delaunay(&c, c.colours()).unwrap();
        let b = delaunay_triangulation(c.points()).unwrap();
        prop_assert_eq!(a.complex.simplices(), b.complex.simplices());
    }
}
