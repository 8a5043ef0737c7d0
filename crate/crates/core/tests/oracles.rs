//! Production paths against the brute-force oracles.

mod common;

use chromatic_tda::cloud::chromatic_lift;
use chromatic_tda::delaunay::{chromatic_delaunay, delaunay_membership_oracle};
use chromatic_tda::filtration::{chromatic_alpha_filtration, direct_alpha_value, rips_filtration};
use chromatic_tda::oracles::{betti_numbers, brute_force_alpha_value, brute_force_meb};
use chromatic_tda::persistence::compute_persistence;
use chromatic_tda::rng::{random_cloud, rng, uniform_box};
use chromatic_tda::simplex::Simplex;
use chromatic_tda::stack::min_enclosing_ball;
use chromatic_tda::Error;

fn subsets(n: usize, max_size: usize) -> Vec<Simplex> {
    (1u32..(1 << n))
        .filter(|m| m.count_ones() as usize <= max_size)
        .map(|m| Simplex::from_sorted((0..n).filter(|i| m >> i & 1 == 1).collect()))
        .collect()
}

#[test]
fn enclosing_ball_matches_support_enumeration() {
    let mut r = rng(11);
    for trial in 0..1000 {
        let d = 1 + trial % 3;
        let n = 1 + trial % 9;
        let pts = uniform_box(&mut r, n, d);
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let (_, a) = min_enclosing_ball(&refs).unwrap();
        let (_, b) = brute_force_meb(&refs).unwrap();
        assert!((a - b).abs() <= 1e-9 * b.max(1.0), "trial {trial}: {a} vs {b}");
    }
}

#[test]
fn stack_solver_matches_cutting_planes() {
    let mut with_stack = 0;
    for seed in 1000..1150 {
        with_stack += common::kkt_vs_oracle(seed).unwrap() as usize;
    }
    assert!(with_stack > 100);
}

#[test]
fn chromatic_delaunay_matches_membership_oracle() {
    for seed in 0..40 {
        let c = random_cloud(seed, 4 + (seed % 5) as usize, 1 + (seed % 2) as usize, 1 + (seed % 3) as usize);
        let lift = chromatic_lift(&c, c.colours());
        let tri = chromatic_delaunay(&c, c.colours()).unwrap();
        for s in subsets(c.len(), tri.top_dimension + 1) {
            // affinely dependent subsets are never simplices
            let member = match delaunay_membership_oracle(&lift, &s) {
                Err(Error::DegenerateInput(_)) => false,
                other => other.unwrap(),
            };
            assert_eq!(member, tri.complex.contains(&s), "seed {seed}: {s:?}");
        }
    }
}

#[test]
fn chromatic_alpha_matches_definition() {
    for seed in 0..100 {
        let n = 3 + (seed % 5) as usize;
        let c = random_cloud(seed, n, 2, 1 + (seed % 3) as usize);
        let mu = c.colours();
        let f = chromatic_alpha_filtration(&c, mu).unwrap();
        for s in subsets(n, f.complex().dim().unwrap() + 1) {
            let oracle = brute_force_alpha_value(&c, mu, &s).unwrap();
            match (f.value(&s), oracle) {
                (Some(v), Some(w)) => {
                    assert!((v - w).abs() <= 1e-6 * w.max(1.0), "seed {seed} {s:?}: {v} vs oracle {w}");
                    let direct = direct_alpha_value(&c, mu, &s).unwrap().unwrap();
                    assert!((v - direct).abs() <= 1e-9 * v.max(1.0), "seed {seed} {s:?}: {v} vs direct {direct}");
                }
                (None, None) => {}
                (v, w) => panic!("seed {seed} {s:?}: filtration {v:?}, oracle {w:?}"),
            }
        }
    }
}

#[test]
fn betti_numbers_match_persistence() {
    for seed in 0..20 {
        let c = random_cloud(seed, 5 + (seed % 5) as usize, 2, 1);
        let f = rips_filtration(&c, Some(3)).unwrap();
        let dgm = compute_persistence(&f, 2).unwrap();
        for r in f.distinct_values().iter().step_by(3) {
            let b = betti_numbers(&f.sublevel(*r), 2);
            for (k, &bk) in b.iter().enumerate() {
                assert_eq!(dgm.betti(k, *r), bk, "seed {seed} r={r} degree {k}");
            }
        }
    }
}

#[test]
fn extremal_colourings_match_oracles() {
    for seed in 500..530 {
        common::extremal_colourings(seed).unwrap();
    }
}

#[test]
fn morse_structure_and_critical_simplices() {
    for seed in 500..530 {
        common::morse_structure(seed).unwrap();
    }
}
