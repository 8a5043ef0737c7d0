//! Seeded sampling. The generator is SplitMix64 (Steele, Lea & Flood 2014):
//! state += 0x9e3779b97f4a7c15, output is the usual xor-shift-multiply mix.
//! Any implementation of that recurrence reproduces our streams.

use rand::{RngExt, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
pub use rand_xoshiro::SplitMix64;

use crate::cloud::ChromaticPointCloud;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

pub fn uniform_box(rng: &mut SplitMix64, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.random::<f64>()).collect()).collect()
}

pub fn gaussian_vector(rng: &mut SplitMix64, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

/// Uniform sample from the unit sphere in R^d.
pub fn unit_sphere(rng: &mut SplitMix64, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let g = gaussian_vector(rng, d);
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break g.into_iter().map(|x| x / norm).collect();
            }
        })
        .collect()
}

/// Uniform sample from the ball of radius `eta` in R^d.
pub fn ball_displacement(rng: &mut SplitMix64, d: usize, eta: f64) -> Vec<f64> {
    let dir = unit_sphere(rng, 1, d).pop().unwrap();
    let u: f64 = rng.random();
    let rad = eta * u.powf(1.0 / d as f64);
    dir.into_iter().map(|x| x * rad).collect()
}

/// Colours drawn uniformly from `0..k`, then patched so every colour occurs.
pub fn random_colours(rng: &mut SplitMix64, n: usize, k: usize) -> Vec<usize> {
    let mut c: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    if n >= k {
        for m in 0..k {
            if !c.contains(&m) {
                let mut i = rng.random_range(0..n);
                // steal from a colour that occurs more than once
                while c.iter().filter(|&&x| x == c[i]).count() < 2 {
                    i = (i + 1) % n;
                }
                c[i] = m;
            }
        }
    }
    c
}

/// Random coloured cloud in [0,1]^d.
pub fn random_cloud(seed: u64, n: usize, d: usize, colours: usize) -> ChromaticPointCloud {
    let mut r = rng(seed);
    let pts = uniform_box(&mut r, n, d);
    let cols = random_colours(&mut r, n, colours.min(n).max(1));
    ChromaticPointCloud::new(pts, cols).expect("random points are distinct")
}

/// Random coloured cloud in [0,1]^d whose points are pairwise at least
/// `min_sep` apart (rejection sampling; gives up growing after 10^5 draws).
pub fn well_separated_cloud(seed: u64, n: usize, d: usize, colours: usize, min_sep: f64) -> ChromaticPointCloud {
    let mut r = rng(seed);
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut draws = 0;
    while pts.len() < n {
        let p: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
        draws += 1;
        let far = pts.iter().all(|q| q.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() >= min_sep * min_sep);
        if far || draws > 100_000 {
            pts.push(p);
        }
    }
    let cols = random_colours(&mut r, n, colours.min(n).max(1));
    ChromaticPointCloud::new(pts, cols).expect("random points are distinct")
}
