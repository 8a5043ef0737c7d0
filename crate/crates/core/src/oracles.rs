//! Brute-force oracles for tests. None of these share code with the
//! production solvers they check.

use std::collections::BTreeMap;

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::cloud::ChromaticPointCloud;
use crate::delaunay::for_each_subset;
use crate::error::{Error, Result};
use crate::geometry::{bbox_diameter, circumsphere_with_coeffs, dist, dist2};
use crate::simplex::{Simplex, SimplicialComplex};
use crate::stack::Stack;

/// Smallest ball over all boundary subsets of size <= d+1 that contains
/// every point.
pub fn brute_force_meb(points: &[&[f64]]) -> Result<(Vec<f64>, f64)> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no points".into()));
    }
    let d = points[0].len();
    let scale = bbox_diameter(points.iter().copied()).max(f64::MIN_POSITIVE);
    let idx: Vec<usize> = (0..points.len()).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for size in 1..=(d + 1).min(points.len()) {
        for_each_subset(&idx, size, &mut |b| {
            let pts: Vec<&[f64]> = b.iter().map(|&i| points[i]).collect();
            let Ok((c, r, _)) = circumsphere_with_coeffs(&pts) else { return };
            if points.iter().all(|p| dist(p, &c) <= r + 1e-9 * scale) && best.as_ref().is_none_or(|(_, br)| r < *br) {
                best = Some((c, r));
            }
        });
    }
    best.ok_or_else(|| Error::NumericalFailure("no enclosing support set".into()))
}

/// Kelley cutting planes for min over z in P of max_p |p - z|^2, in the
/// frame z = z0 + delta w with |w|_inf <= box and f = f0 + delta u.
/// Returns (z, f(z), lower bound), or None when the LP is infeasible.
fn kelley(
    sp: &[Vec<f64>],
    halfspaces: &[(Vec<f64>, f64)],
    z0: &[f64],
    delta: f64,
    box_: f64,
    seeds: Vec<Vec<f64>>,
    z0_feasible: bool,
    tol: f64,
) -> Result<Option<(Vec<f64>, f64, f64)>> {
    let d = z0.len();
    let f = |z: &[f64]| sp.iter().map(|p| dist2(p, z)).fold(0.0, f64::max);
    let f0 = f(z0);
    let to_z = |w: &[f64]| -> Vec<f64> { z0.iter().zip(w).map(|(a, b)| a + delta * b).collect() };
    let mut cuts: Vec<Vec<f64>> = seeds.iter().map(|w| to_z(w)).collect();
    cuts.push(z0.to_vec());
    // only LP solutions (feasible by construction) become the incumbent
    let mut best = (z0.to_vec(), if z0_feasible { f0 } else { f64::INFINITY });
    let mut lower = f64::NEG_INFINITY;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let ws: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (-box_, box_))).collect();
    let u = lp.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for (a, b) in halfspaces {
        // a.(z0 + delta w) <= b, row-normalized
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt() * delta;
        let row: Vec<_> = ws.iter().zip(a).map(|(&w, &c)| (w, c * delta / norm)).collect();
        let rhs = (b - a.iter().zip(z0).map(|(x, y)| x * y).sum::<f64>()) / norm;
        lp.add_constraint(row.as_slice(), ComparisonOp::Le, rhs);
    }
    // |p - z|^2 >= |p - c|^2 + 2 (c - p).(z - c), in the (w, u) frame
    let cut = |c: &[f64], p: &[f64]| -> (Vec<(minilp::Variable, f64)>, f64) {
        let g: Vec<f64> = c.iter().zip(p).map(|(ci, pi)| 2.0 * (ci - pi)).collect();
        let konst = dist2(p, c) + g.iter().zip(z0.iter().zip(c)).map(|(gi, (zi, ci))| gi * (zi - ci)).sum::<f64>() - f0;
        let mut row: Vec<_> = ws.iter().zip(&g).map(|(&w, &gi)| (w, gi)).collect();
        row.push((u, -1.0));
        (row, -konst / delta)
    };
    for c in &cuts {
        for p in sp {
            let (row, rhs) = cut(c, p);
            lp.add_constraint(row.as_slice(), ComparisonOp::Le, rhs);
        }
    }
    let lp_err = |err: minilp::Error| Error::NumericalFailure(format!("oracle LP failed: {err}"));
    let mut sol = match lp.solve() {
        Ok(s) => s,
        Err(minilp::Error::Infeasible) => return Ok(None),
        Err(err) => return Err(lp_err(err)),
    };
    'outer: for _ in 0..300 {
        let w: Vec<f64> = ws.iter().map(|&v| sol[v]).collect();
        let z = to_z(&w);
        lower = lower.max(f0 + delta * sol[u]);
        let val = f(&z);
        if val < best.1 {
            best = (z.clone(), val);
        }
        // the next zoom recovers the rest; see brute_force_min_stack
        if best.1 - lower <= tol {
            break;
        }
        for p in sp {
            let (row, rhs) = cut(&z, p);
            // a failed warm start keeps the incumbent
            match sol.add_constraint(row.as_slice(), ComparisonOp::Le, rhs) {
                Ok(next) => sol = next,
                Err(_) => break 'outer,
            }
        }
    }
    Ok(Some((best.0, best.1, lower)))
}

/// Rad(S(sigma, mu; E)) = min over feasible centres of the largest distance
/// to sigma. Kelley cutting planes seeded on a coarse grid, then repeated
/// zooms around the incumbent: strong convexity bounds its distance to the
/// optimum by the square root of the gap. None = NoStack.
pub fn brute_force_min_stack(cloud: &ChromaticPointCloud, mu: &[usize], sigma: &Simplex, e: &[usize]) -> Result<Option<Stack>> {
    let d = cloud.d();
    let sv = sigma.vertices();
    let gamma: std::collections::BTreeSet<usize> = sv.iter().map(|&v| mu[v]).collect();
    let eg: Vec<usize> = e.iter().copied().filter(|&x| gamma.contains(&mu[x])).collect();
    let all: Vec<usize> = sv.iter().chain(&eg).copied().collect();
    let scale = bbox_diameter(all.iter().map(|&i| cloud.point(i))).max(1e-300);
    let origin = cloud.point(sv[0]).to_vec();
    let norm = |i: usize| -> Vec<f64> { cloud.point(i).iter().zip(&origin).map(|(x, o)| (x - o) / scale).collect() };
    let sp: Vec<Vec<f64>> = sv.iter().map(|&v| norm(v)).collect();
    // half-spaces a.z <= b for every same-coloured (sigma, E) pair
    let mut halfspaces: Vec<(Vec<f64>, f64)> = vec![];
    for (i, &v) in sv.iter().enumerate() {
        for &x in &eg {
            if x == v || mu[x] != mu[v] {
                continue;
            }
            let q = norm(x);
            let a: Vec<f64> = q.iter().zip(&sp[i]).map(|(qe, pe)| 2.0 * (qe - pe)).collect();
            let b = q.iter().map(|t| t * t).sum::<f64>() - sp[i].iter().map(|t| t * t).sum::<f64>();
            halfspaces.push((a, b));
        }
    }
    // coarse grid seed: 5 points per axis across [-1, 1]^d
    let steps = 5usize;
    let grid: Vec<Vec<f64>> = (0..steps.pow(d as u32))
        .map(|k| (0..d).map(|j| ((k / steps.pow(j as u32)) % steps) as f64 / (steps - 1) as f64 * 2.0 - 1.0).collect())
        .collect();
    let Some((mut z, mut val, mut lower)) = kelley(&sp, &halfspaces, &vec![0.0; d], 1.0, 1e3, grid, false, 1e-4)? else {
        return Ok(None);
    };
    for _ in 0..12 {
        let delta = 2.0 * (val - lower).max(0.0).sqrt();
        if delta < 1e-8 {
            break;
        }
        match kelley(&sp, &halfspaces, &z, delta, 1.0, vec![], true, (1e-3 * delta * delta).max(1e-13))? {
            Some((z2, v2, l2)) if v2 <= val => {
                z = z2;
                val = v2;
                lower = lower.max(l2);
            }
            _ => break,
        }
    }
    let centre: Vec<f64> = z.iter().zip(&origin).map(|(z, o)| o + z * scale).collect();
    let rad = val.sqrt() * scale;
    let mut radii = BTreeMap::new();
    for &m in &gamma {
        let near = eg.iter().filter(|&&x| mu[x] == m).map(|&x| dist(cloud.point(x), &centre)).fold(f64::INFINITY, f64::min);
        radii.insert(m, rad.min(near));
    }
    Ok(Some(Stack { centre, radii }))
}

/// Chromatic alpha value from the definition (E = X); None when sigma has
/// no empty stack.
pub fn brute_force_alpha_value(cloud: &ChromaticPointCloud, mu: &[usize], sigma: &Simplex) -> Result<Option<f64>> {
    if sigma.len() == 1 {
        return Ok(Some(0.0));
    }
    let all: Vec<usize> = (0..cloud.len()).collect();
    Ok(brute_force_min_stack(cloud, mu, sigma, &all)?.map(|s| s.rad()))
}

/// Smallest empty circumsphere through sigma, by enumerating support sets
/// (monochromatic alpha value). None when no circumsphere is empty.
pub fn min_empty_circumsphere(points: &[Vec<f64>], sigma: &Simplex) -> Option<f64> {
    let d = points[0].len();
    let sv = sigma.vertices();
    let others: Vec<usize> = (0..points.len()).filter(|&i| !sigma.contains(i)).collect();
    let scale = bbox_diameter(points.iter().map(|p| p.as_slice()));
    let mut best: Option<f64> = None;
    for extra in 0..=(d + 1).saturating_sub(sv.len()) {
        for_each_subset(&others, extra, &mut |b| {
            let pts: Vec<&[f64]> = sv.iter().chain(b).map(|&i| points[i].as_slice()).collect();
            let Ok((c, r, _)) = circumsphere_with_coeffs(&pts) else { return };
            if others.iter().all(|&i| dist(&points[i], &c) >= r - 1e-9 * scale) && best.is_none_or(|x| r < x) {
                best = Some(r);
            }
        });
    }
    best
}

/// Monochromatic E = X critical simplices: the smallest circumsphere is
/// empty and its centre lies in the relative interior.
pub fn is_critical_delaunay_simplex(points: &[Vec<f64>], sigma: &Simplex) -> bool {
    let pts: Vec<&[f64]> = sigma.vertices().iter().map(|&i| points[i].as_slice()).collect();
    let Ok((c, r, coeffs)) = circumsphere_with_coeffs(&pts) else { return false };
    let scale = bbox_diameter(points.iter().map(|p| p.as_slice()));
    coeffs.iter().all(|&a| a > 1e-12)
        && (0..points.len()).filter(|&i| !sigma.contains(i)).all(|i| dist(&points[i], &c) > r + 1e-9 * scale)
}

/// Betti numbers over GF(2) from ranks of boundary matrices.
pub fn betti_numbers(k: &SimplicialComplex, max_degree: usize) -> Vec<usize> {
    let top = k.dim().unwrap_or(0);
    let by_dim: Vec<Vec<&Simplex>> = (0..=top + 1).map(|q| k.of_dim(q).collect()).collect();
    // rank of the boundary map from dimension q to q-1
    let rank = |q: usize| -> usize {
        if q == 0 || q > top {
            return 0;
        }
        let rows: std::collections::HashMap<&Simplex, usize> = by_dim[q - 1].iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let words = by_dim[q - 1].len().div_ceil(64);
        let mut mat: Vec<Vec<u64>> = by_dim[q]
            .iter()
            .map(|s| {
                let mut col = vec![0u64; words];
                for f in s.facets() {
                    let i = rows[&f];
                    col[i / 64] ^= 1 << (i % 64);
                }
                col
            })
            .collect();
        let mut r = 0;
        for bit in 0..by_dim[q - 1].len() {
            let (w, b) = (bit / 64, 1u64 << (bit % 64));
            let Some(p) = (r..mat.len()).find(|&i| mat[i][w] & b != 0) else { continue };
            mat.swap(r, p);
            let pivot = mat[r].clone();
            for (i, row) in mat.iter_mut().enumerate() {
                if i != r && row[w] & b != 0 {
                    row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
                }
            }
            r += 1;
        }
        r
    };
    (0..=max_degree).map(|q| by_dim.get(q).map_or(0, |v| v.len()).saturating_sub(rank(q) + rank(q + 1))).collect()
}
