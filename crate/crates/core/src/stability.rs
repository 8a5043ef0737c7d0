//! Distortion, chromatic distance and the perturbation experiment.

use serde::Serialize;

use crate::cloud::ChromaticPointCloud;
use crate::delaunay::chromatic_delaunay;
use crate::error::{Error, Result};
use crate::filtration::{del_rips_from_triangulation, rips_value};
use crate::geometry::dist;
use crate::persistence::{bottleneck_distance, compute_persistence};
use crate::rng::{ball_displacement, rng};

/// Largest colour class handled by [`chromatic_distance`].
pub const CLASS_SIZE_CAP: usize = 64;

/// sup over pairs | |x - x'| - |f(x) - f(x')| | for the map x_i -> y_{f[i]}.
pub fn distortion(x: &[Vec<f64>], y: &[Vec<f64>], f: &[usize]) -> Result<f64> {
    if f.len() != x.len() {
        return Err(Error::LengthMismatch { expected: x.len(), got: f.len() });
    }
    if let Some(&bad) = f.iter().find(|&&j| j >= y.len()) {
        return Err(Error::InvalidInput(format!("image index {bad} out of range")));
    }
    let mut m: f64 = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            m = m.max((dist(&x[i], &x[j]) - dist(&y[f[i]], &y[f[j]])).abs());
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingResult {
    /// (index in X, index in Y)
    pub pairs: Vec<(usize, usize)>,
    pub sup_displacement: f64,
    pub distortion: f64,
}

fn kuhn(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    let mut owner: Vec<Option<usize>> = vec![None; right];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    for u in 0..adj.len() {
        if !augment(u, adj, &mut vec![false; right], &mut owner) {
            return None;
        }
    }
    let mut m = vec![0; adj.len()];
    for (v, u) in owner.iter().enumerate() {
        if let Some(u) = u {
            m[*u] = v;
        }
    }
    Some(m)
}

/// Bottleneck assignment between equal-size point sets.
fn bottleneck_assignment(a: &[&[f64]], b: &[&[f64]]) -> (f64, Vec<usize>) {
    let mut cand: Vec<f64> = a.iter().flat_map(|p| b.iter().map(move |q| dist(p, q))).collect();
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    let feasible = |eps: f64| {
        let adj: Vec<Vec<usize>> = a.iter().map(|p| (0..b.len()).filter(|&j| dist(p, b[j]) <= eps).collect()).collect();
        kuhn(&adj, b.len())
    };
    let (mut lo, mut hi) = (0, cand.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cand[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (cand[lo], feasible(cand[lo]).expect("largest candidate is always feasible"))
}

/// Optimal colour-preserving bijection; None when class sizes differ.
pub fn chromatic_matching(x: &ChromaticPointCloud, y: &ChromaticPointCloud) -> Result<Option<MatchingResult>> {
    if x.d() != y.d() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", x.d(), y.d())));
    }
    if x.len() != y.len() || x.s() != y.s() {
        return Ok(None);
    }
    let mut pairs = vec![];
    let mut sup: f64 = 0.0;
    for m in 0..=x.s() {
        let cx = x.class(x.colours(), m);
        let cy = y.class(y.colours(), m);
        if cx.len() != cy.len() {
            return Ok(None);
        }
        if cx.len() > CLASS_SIZE_CAP {
            return Err(Error::SizeLimitExceeded(format!("colour class of {} points (limit {CLASS_SIZE_CAP})", cx.len())));
        }
        let a: Vec<&[f64]> = cx.iter().map(|&i| x.point(i)).collect();
        let b: Vec<&[f64]> = cy.iter().map(|&i| y.point(i)).collect();
        let (eps, assign) = bottleneck_assignment(&a, &b);
        sup = sup.max(eps);
        pairs.extend(assign.iter().enumerate().map(|(i, &j)| (cx[i], cy[j])));
    }
    pairs.sort_unstable();
    let f: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let distortion = distortion(x.points(), y.points(), &f)?;
    Ok(Some(MatchingResult { pairs, sup_displacement: sup, distortion }))
}

/// d_C(X, Y): infimum over colour-preserving bijections of the largest
/// displacement; infinite when some colour class sizes differ.
pub fn chromatic_distance(x: &ChromaticPointCloud, y: &ChromaticPointCloud) -> Result<f64> {
    Ok(chromatic_matching(x, y)?.map_or(f64::INFINITY, |m| m.sup_displacement))
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub eta: f64,
    pub seed: u64,
    pub complex_isomorphic: bool,
    /// Distortion of the identity matching.
    pub distortion: f64,
    /// sup over shared simplices of the Rips value change; None when the
    /// complexes differ.
    pub sup_value_gap: Option<f64>,
    /// Bottleneck distance between the Delaunay–Rips diagrams.
    pub bottleneck: Option<f64>,
}

impl StabilityReport {
    /// Every measured quantity obeys its bound.
    pub fn within_bounds(&self) -> bool {
        let slack = 1e-12;
        self.complex_isomorphic
            && self.sup_value_gap.is_some_and(|g| g <= self.distortion / 2.0 + slack && g <= self.eta + slack)
            && self.bottleneck.is_some_and(|b| b <= self.eta + slack)
    }
}

/// Move each point by a uniform vector of norm <= eta and compare.
pub fn perturbation_experiment(cloud: &ChromaticPointCloud, mu: &[usize], eta: f64, seed: u64) -> Result<StabilityReport> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidInput(format!("eta must be finite and non-negative, got {eta}")));
    }
    let mut r = rng(seed);
    let moved: Vec<Vec<f64>> = cloud
        .points()
        .iter()
        .map(|p| p.iter().zip(ball_displacement(&mut r, cloud.d(), eta)).map(|(a, b)| a + b).collect())
        .collect();
    let perturbed = ChromaticPointCloud::new(moved, cloud.colours().to_vec())?;
    let identity: Vec<usize> = (0..cloud.len()).collect();
    let distortion = distortion(cloud.points(), perturbed.points(), &identity)?;
    let a = chromatic_delaunay(cloud, mu)?;
    let b = chromatic_delaunay(&perturbed, mu)?;
    let complex_isomorphic = a.complex == b.complex;
    let (sup_value_gap, bottleneck) = if complex_isomorphic {
        let gap = a.complex.iter().map(|s| (rips_value(cloud, s) - rips_value(&perturbed, s)).abs()).fold(0.0, f64::max);
        let top = a.complex.dim().unwrap_or(0);
        let da = compute_persistence(&del_rips_from_triangulation(cloud, mu, &a)?, top)?;
        let db = compute_persistence(&del_rips_from_triangulation(&perturbed, mu, &b)?, top)?;
        (Some(gap), Some(bottleneck_distance(&da, &db)?))
    } else {
        (None, None)
    };
    Ok(StabilityReport { eta, seed, complex_isomorphic, distortion, sup_value_gap, bottleneck })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distortion_examples() {
        let x = vec![vec![0.0], vec![1.0]];
        assert_eq!(distortion(&x, &[vec![0.0], vec![2.0]], &[0, 1]).unwrap(), 1.0);
        assert_eq!(distortion(&x, &[vec![5.0], vec![6.0]], &[0, 1]).unwrap(), 0.0);
    }

    #[test]
    fn chromatic_distance_examples() {
        let x = ChromaticPointCloud::new(vec![vec![0.0, 0.0]], vec![0]).unwrap();
        let y = ChromaticPointCloud::new(vec![vec![0.1, 0.0]], vec![0]).unwrap();
        assert!((chromatic_distance(&x, &y).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(chromatic_distance(&x, &x).unwrap(), 0.0);
        let a = ChromaticPointCloud::new(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 0, 1]).unwrap();
        let b = ChromaticPointCloud::new(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 1, 1]).unwrap();
        assert_eq!(chromatic_distance(&a, &b).unwrap(), f64::INFINITY);
    }

    #[test]
    fn zero_perturbation() {
        let c = crate::rng::random_cloud(3, 10, 2, 2);
        let r = perturbation_experiment(&c, c.colours(), 0.0, 1).unwrap();
        assert!(r.complex_isomorphic);
        assert_eq!(r.sup_value_gap, Some(0.0));
        assert_eq!(r.bottleneck, Some(0.0));
    }
}
