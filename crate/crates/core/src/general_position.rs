//! Finite general-position checks: GP1 of the chromatic lift for the given
//! colouring, and GP3 (affine spans of disjoint parts form a direct sum).

use serde::Serialize;

use crate::cloud::{chromatic_lift, ChromaticPointCloud};
use crate::delaunay::for_each_subset;
use crate::error::{Error, Result};
use crate::exact;
use crate::geometry::{bbox_diameter, circumsphere_through, dist, sub, EPS_REL};

/// Default cap on the number of subsets or part collections examined.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct GpOptions {
    pub budget: u64,
    /// Decide every predicate in exact rational arithmetic.
    pub exact: bool,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, exact: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GpWitness {
    /// "GP1" or "GP3".
    pub condition: &'static str,
    /// GP1: the cospherical points. GP3: the parts whose spans are dependent.
    pub parts: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GpReport {
    pub gp1_lift: bool,
    pub gp3: bool,
    pub general_position: bool,
    pub witness: Option<GpWitness>,
    pub exact: bool,
}

pub fn check_general_position(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<GpReport> {
    check_general_position_with(cloud, mu, GpOptions::default())
}

pub fn check_general_position_with(cloud: &ChromaticPointCloud, mu: &[usize], opts: GpOptions) -> Result<GpReport> {
    crate::cloud::check_colouring(cloud, mu)?;
    let gp3 = gp3_witness(cloud.points(), cloud.d(), opts)?;
    let lift = chromatic_lift(cloud, mu);
    let gp1 = gp1_witness(&lift, opts)?;
    let witness = gp3
        .clone()
        .map(|parts| GpWitness { condition: "GP3", parts })
        .or_else(|| gp1.clone().map(|pts| GpWitness { condition: "GP1", parts: vec![pts] }));
    Ok(GpReport {
        gp1_lift: gp1.is_none(),
        gp3: gp3.is_none(),
        general_position: witness.is_none(),
        witness,
        exact: opts.exact,
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

/// Rank of a set of difference vectors.
fn rank_of(vectors: &[Vec<f64>], scale: f64, exact_mode: bool) -> usize {
    if exact_mode {
        return exact::rank(vectors.iter().map(|v| exact::vector(v)).collect());
    }
    let refs: Vec<Vec<f64>> = std::iter::once(vec![0.0; vectors.first().map_or(0, |v| v.len())]).chain(vectors.iter().cloned()).collect();
    let r: Vec<&[f64]> = refs.iter().map(|p| p.as_slice()).collect();
    crate::geometry::affine_basis(&r, EPS_REL * scale).len()
}

/// k+3 points spanning a (k+1)-flat on a common k-sphere, 1 <= k <= m-1.
fn gp1_witness(points: &[Vec<f64>], opts: GpOptions) -> Result<Option<Vec<usize>>> {
    let n = points.len();
    let m = points.first().map_or(0, |p| p.len());
    let sizes: Vec<usize> = (1..m).map(|k| k + 3).filter(|&s| s <= n).collect();
    let total: u64 = sizes.iter().map(|&s| binomial(n, s)).fold(0, u64::saturating_add);
    if total > opts.budget {
        return Err(Error::SizeLimitExceeded(format!("GP1 check needs {total} subsets (budget {})", opts.budget)));
    }
    let scale = bbox_diameter(points.iter().map(|p| p.as_slice())).max(f64::MIN_POSITIVE);
    let items: Vec<usize> = (0..n).collect();
    for size in sizes {
        let mut found = None;
        for_each_subset(&items, size, &mut |sub_idx| {
            if found.is_some() {
                return;
            }
            let pts: Vec<&[f64]> = sub_idx.iter().map(|&i| points[i].as_slice()).collect();
            if cospherical_in_hull(&pts, size - 2, scale, opts.exact) {
                found = Some(sub_idx.to_vec());
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Do these points span exactly a `flat`-dimensional affine space and lie on
/// one sphere in it?
fn cospherical_in_hull(pts: &[&[f64]], flat: usize, scale: f64, exact_mode: bool) -> bool {
    let diffs: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    if rank_of(&diffs, scale, exact_mode) != flat {
        return false;
    }
    if exact_mode {
        // centre p0 + sum a_j d_j solves 2 <d_i, d_j> a_j = |d_i|^2 for every i;
        // cospherical iff the augmented system keeps the coefficient rank
        let d: Vec<Vec<_>> = diffs.iter().map(|v| exact::vector(v)).collect();
        let coeff: Vec<Vec<_>> = d.iter().map(|di| d.iter().map(|dj| exact::dot(di, dj) * exact::to_rational(2.0)).collect()).collect();
        let aug: Vec<Vec<_>> = coeff
            .iter()
            .zip(&d)
            .map(|(row, di)| {
                let mut r = row.clone();
                r.push(exact::dot(di, di));
                r
            })
            .collect();
        return exact::rank(aug) == exact::rank(coeff);
    }
    // sphere through an independent sub-family, then test the rest
    let mut basis_idx = vec![0usize];
    for i in 1..pts.len() {
        let mut trial: Vec<&[f64]> = basis_idx.iter().map(|&j| pts[j]).collect();
        trial.push(pts[i]);
        if crate::geometry::affine_rank(&trial) == trial.len() - 1 {
            basis_idx.push(i);
        }
        if basis_idx.len() == flat + 1 {
            break;
        }
    }
    let base: Vec<&[f64]> = basis_idx.iter().map(|&j| pts[j]).collect();
    let Ok((c, r)) = circumsphere_through(&base) else { return false };
    let tol = EPS_REL * scale.max(r);
    pts.iter().all(|p| (dist(p, &c) - r).abs() <= tol)
}

/// Disjoint parts (each of size >= 2, total excess <= d) whose affine
/// spans fail to be independent.
fn gp3_witness(points: &[Vec<f64>], d: usize, opts: GpOptions) -> Result<Option<Vec<Vec<usize>>>> {
    let n = points.len();
    let scale = bbox_diameter(points.iter().map(|p| p.as_slice())).max(f64::MIN_POSITIVE);
    let mut count: u64 = 0;
    let mut parts: Vec<Vec<usize>> = vec![];
    let mut used = vec![false; n];
    let mut found = None;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        points: &[Vec<f64>],
        budget_left: usize,
        min_first: usize,
        parts: &mut Vec<Vec<usize>>,
        used: &mut [bool],
        count: &mut u64,
        opts: GpOptions,
        scale: f64,
        found: &mut Option<Vec<Vec<usize>>>,
    ) -> Result<()> {
        let n = points.len();
        for first in min_first..n {
            if used[first] {
                continue;
            }
            let rest: Vec<usize> = (first + 1..n).filter(|&i| !used[i]).collect();
            for extra in 1..=budget_left.min(rest.len()) {
                let mut err = None;
                for_each_subset(&rest, extra, &mut |others| {
                    if found.is_some() || err.is_some() {
                        return;
                    }
                    *count += 1;
                    if *count > opts.budget {
                        err = Some(Error::SizeLimitExceeded(format!("GP3 check exceeds {} part collections", opts.budget)));
                        return;
                    }
                    let mut part = vec![first];
                    part.extend_from_slice(others);
                    parts.push(part.clone());
                    let diffs: Vec<Vec<f64>> = parts
                        .iter()
                        .flat_map(|p| p[1..].iter().map(|&i| sub(&points[i], &points[p[0]])).collect::<Vec<_>>())
                        .collect();
                    let want = diffs.len();
                    if rank_of(&diffs, scale, opts.exact) < want {
                        *found = Some(parts.clone());
                    } else if budget_left > extra {
                        for &i in &part {
                            used[i] = true;
                        }
                        if let Err(e) = rec(points, budget_left - extra, first + 1, parts, used, count, opts, scale, found) {
                            err = Some(e);
                        }
                        for &i in &part {
                            used[i] = false;
                        }
                    }
                    parts.pop();
                });
                if let Some(e) = err {
                    return Err(e);
                }
                if found.is_some() {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
    rec(points, d, 0, &mut parts, &mut used, &mut count, opts, scale, &mut found)?;
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(pts: Vec<Vec<f64>>) -> ChromaticPointCloud {
        ChromaticPointCloud::mono(pts).unwrap()
    }

    #[test]
    fn trapezium_has_parallel_sides() {
        let c = mono(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 2.0]]);
        for exact in [false, true] {
            let r = check_general_position_with(&c, c.colours(), GpOptions { exact, ..Default::default() }).unwrap();
            assert!(!r.gp3 && !r.general_position);
            assert_eq!(r.witness.unwrap().parts, vec![vec![0, 1], vec![2, 3]]);
        }
    }

    #[test]
    fn collinear_and_square() {
        let c = mono(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(!check_general_position(&c, c.colours()).unwrap().gp3);
        let sq = mono(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
        let r = check_general_position(&sq, sq.colours()).unwrap();
        assert!(!r.gp3 && !r.gp1_lift);
    }

    #[test]
    fn generic_triangle_passes() {
        let c = mono(vec![vec![0.0, 0.0], vec![1.0, 0.1], vec![0.3, 0.9]]);
        let r = check_general_position_with(&c, c.colours(), GpOptions { exact: true, ..Default::default() }).unwrap();
        assert!(r.general_position && r.witness.is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let c = crate::rng::random_cloud(1, 12, 2, 1);
        let e = check_general_position_with(&c, c.colours(), GpOptions { budget: 10, exact: false }).unwrap_err();
        assert_eq!(e.kind(), "SizeLimitExceeded");
    }
}
