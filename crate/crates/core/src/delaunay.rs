//! Delaunay triangulations in small ambient dimension, by gift-wrapping
//! over empty circumspheres, and chromatic Delaunay triangulations.

use std::collections::{HashMap, HashSet};

use crate::cloud::{chromatic_lift, is_refinement, num_colours, ChromaticPointCloud};
use crate::error::{Error, Result};
use crate::geometry::{affine_basis, bbox_diameter, circumsphere_through, dist, dot, norm2, project, sub, EPS_REL};
use crate::simplex::{Simplex, SimplicialComplex};

pub const DEFAULT_MAX_DIM: usize = 8;

/// Distance tolerance (in normalized coordinates) below which a point is
/// treated as lying on a circumsphere.
const SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub complex: SimplicialComplex,
    pub coordinates: Vec<Vec<f64>>,
    /// Dimension of the maximal simplices (= dimension of the affine hull).
    pub top_dimension: usize,
    pub maximal: Vec<Simplex>,
}

pub fn delaunay_triangulation(points: &[Vec<f64>]) -> Result<Triangulation> {
    delaunay_triangulation_capped(points, DEFAULT_MAX_DIM)
}

pub fn delaunay_triangulation_capped(points: &[Vec<f64>], cap: usize) -> Result<Triangulation> {
    let n = points.len();
    if n == 0 {
        return Err(Error::InvalidInput("no points".into()));
    }
    let mut seen = HashSet::new();
    for p in points {
        let key: Vec<u64> = p.iter().map(|x| (x + 0.0).to_bits()).collect();
        if !seen.insert(key) {
            return Err(Error::DegenerateInput("repeated point".into()));
        }
    }
    let refs: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
    let scale = bbox_diameter(refs.iter().copied());
    if n == 1 || scale == 0.0 {
        let top = Simplex::vertex(0);
        return Ok(Triangulation {
            complex: SimplicialComplex::from_maximal([top.clone()]),
            coordinates: points.to_vec(),
            top_dimension: 0,
            maximal: vec![top],
        });
    }
    // normalized coordinates in the affine hull
    let origin = refs[0].to_vec();
    let scaled: Vec<Vec<f64>> = refs.iter().map(|p| sub(p, &origin).iter().map(|x| x / scale).collect()).collect();
    let srefs: Vec<&[f64]> = scaled.iter().map(|p| p.as_slice()).collect();
    let basis = affine_basis(&srefs, EPS_REL);
    let k = basis.len();
    if k > cap {
        return Err(Error::DimensionTooLarge { dim: k, cap });
    }
    let zero = vec![0.0; scaled[0].len()];
    let q = project(&srefs, &zero, &basis);
    let maximal = if n == k + 1 {
        vec![Simplex::from_sorted((0..n).collect())]
    } else {
        gift_wrap(&q, k)?
    };
    Ok(Triangulation {
        complex: SimplicialComplex::from_maximal(maximal.iter().cloned()),
        coordinates: points.to_vec(),
        top_dimension: k,
        maximal,
    })
}

struct Cell {
    verts: Vec<usize>,
    centre: Vec<f64>,
    radius: f64,
}

fn make_cell(q: &[Vec<f64>], mut verts: Vec<usize>) -> Result<Cell> {
    verts.sort_unstable();
    let pts: Vec<&[f64]> = verts.iter().map(|&i| q[i].as_slice()).collect();
    let (centre, radius) = circumsphere_through(&pts).map_err(|e| Error::NotSimplicial(format!("flat cell {verts:?}: {e}")))?;
    for (i, p) in q.iter().enumerate() {
        if verts.binary_search(&i).is_ok() {
            continue;
        }
        let gap = dist(p, &centre) - radius;
        if gap <= SPHERE_TOL {
            return Err(Error::NotSimplicial(format!(
                "point {i} lies {} the circumsphere of {verts:?}",
                if gap < -SPHERE_TOL { "inside" } else { "on" }
            )));
        }
    }
    Ok(Cell { verts, centre, radius })
}

/// Unit vector orthogonal to aff(face), pointing from `away` towards the face.
fn outward_normal(q: &[Vec<f64>], face: &[usize], away: &[f64]) -> Option<Vec<f64>> {
    let f0 = &q[face[0]];
    let mut basis: Vec<Vec<f64>> = vec![];
    for &i in &face[1..] {
        let mut v = sub(&q[i], f0);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let nv = norm2(&v).sqrt();
        if nv <= 1e-14 {
            return None;
        }
        basis.push(v.into_iter().map(|x| x / nv).collect());
    }
    let mut w = sub(f0, away);
    for b in &basis {
        let c = dot(&w, b);
        w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    let nw = norm2(&w).sqrt();
    (nw > 1e-14).then(|| w.into_iter().map(|x| x / nw).collect())
}

/// Advance the empty sphere (centre, r^2) through `face` along `normal`
/// until it hits the first point on the positive side.
fn first_hit(q: &[Vec<f64>], face: &[usize], skip: &[usize], centre: &[f64], r2: f64, normal: &[f64]) -> Option<(usize, f64)> {
    let f0 = &q[face[0]];
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in q.iter().enumerate() {
        if face.contains(&i) || skip.contains(&i) {
            continue;
        }
        let side = dot(normal, &sub(p, f0));
        if side <= 1e-12 {
            continue;
        }
        let t = (crate::geometry::dist2(p, centre) - r2) / (2.0 * side);
        if best.is_none_or(|(_, bt)| t < bt) {
            best = Some((i, t));
        }
    }
    best
}

fn seed_cell(q: &[Vec<f64>], k: usize) -> Result<Cell> {
    let mut face = vec![0usize];
    let mut centre = q[0].clone();
    let mut r2 = 0.0;
    while face.len() < k + 1 {
        // direction: residual of the farthest point from aff(face)
        let f0 = q[face[0]].clone();
        let mut fb: Vec<Vec<f64>> = vec![];
        for &i in &face[1..] {
            let mut v = sub(&q[i], &f0);
            for b in &fb {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let nv = norm2(&v).sqrt();
            fb.push(v.into_iter().map(|x| x / nv).collect());
        }
        let mut dir: Option<Vec<f64>> = None;
        let mut best = 0.0;
        for p in q {
            let mut v = sub(p, &f0);
            for b in &fb {
                let c = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let nv = norm2(&v).sqrt();
            if nv > best {
                best = nv;
                dir = Some(v.into_iter().map(|x| x / nv).collect());
            }
        }
        let dir = dir.ok_or_else(|| Error::NumericalFailure("seed direction".into()))?;
        let (p, t) = first_hit(q, &face, &[], &centre, r2, &dir)
            .ok_or_else(|| Error::NumericalFailure("seed growth found no point".into()))?;
        centre.iter_mut().zip(&dir).for_each(|(c, n)| *c += t * n);
        face.push(p);
        r2 = crate::geometry::dist2(&q[face[0]], &centre);
    }
    make_cell(q, face)
}

fn gift_wrap(q: &[Vec<f64>], k: usize) -> Result<Vec<Simplex>> {
    let seed = seed_cell(q, k)?;
    let mut cells: HashSet<Vec<usize>> = HashSet::new();
    let mut done: HashSet<Vec<usize>> = HashSet::new();
    let mut out = vec![Simplex::from_sorted(seed.verts.clone())];
    cells.insert(seed.verts.clone());
    let mut stack = vec![seed];
    while let Some(cell) = stack.pop() {
        for i in 0..cell.verts.len() {
            let mut facet = cell.verts.clone();
            let opp = facet.remove(i);
            if !done.insert(facet.clone()) {
                continue;
            }
            let Some(normal) = outward_normal(q, &facet, &q[opp]) else {
                return Err(Error::NotSimplicial(format!("degenerate facet {facet:?}")));
            };
            let r2 = cell.radius * cell.radius;
            let Some((p, _)) = first_hit(q, &facet, &[opp], &cell.centre, r2, &normal) else {
                continue; // hull facet
            };
            let mut verts = facet.clone();
            verts.push(p);
            verts.sort_unstable();
            if cells.contains(&verts) {
                continue;
            }
            let next = make_cell(q, verts)?;
            cells.insert(next.verts.clone());
            out.push(Simplex::from_sorted(next.verts.clone()));
            stack.push(next);
        }
    }
    out.sort();
    Ok(out)
}

/// Del(X, mu): the Delaunay triangulation of the chromatic lift.
pub fn chromatic_delaunay(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<Triangulation> {
    crate::cloud::check_colouring(cloud, mu)?;
    let lift = chromatic_lift(cloud, mu);
    let cap = DEFAULT_MAX_DIM.max(cloud.d() + num_colours(mu) - 1);
    delaunay_triangulation_capped(&lift, cap)
}

/// Brute-force Delaunay membership: is there a circumsphere of `sigma`
/// with no point strictly inside? Independent of the wrapping code.
pub fn delaunay_membership_oracle(points: &[Vec<f64>], sigma: &Simplex) -> Result<bool> {
    let refs: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
    let scale = bbox_diameter(refs.iter().copied()).max(f64::MIN_POSITIVE);
    let basis = affine_basis(&refs, EPS_REL * scale);
    let k = basis.len();
    let q = project(&refs, refs[0], &basis);
    let sv = sigma.vertices();
    if sv.iter().any(|&v| v >= points.len()) {
        return Err(Error::InvalidInput("vertex out of range".into()));
    }
    if sv.len() == 1 {
        return Ok(true);
    }
    let spts: Vec<&[f64]> = sv.iter().map(|&i| q[i].as_slice()).collect();
    if sv.len() > k + 1 || crate::geometry::affine_rank(&spts) < sv.len() - 1 {
        return Err(Error::DegenerateInput(format!("{sigma:?} is affinely dependent")));
    }
    let others: Vec<usize> = (0..points.len()).filter(|i| !sigma.contains(*i)).collect();
    let room = k + 1 - sv.len();
    let tol = EPS_REL;
    let mut found = false;
    for size in 0..=room.min(others.len()) {
        for_each_subset(&others, size, &mut |extra| {
            if found {
                return;
            }
            let mut b: Vec<&[f64]> = spts.clone();
            b.extend(extra.iter().map(|&i| q[i].as_slice()));
            let Ok((c, r)) = circumsphere_through(&b) else { return };
            let empty = others.iter().all(|&i| extra.contains(&i) || dist(&q[i], &c) >= r - tol * (1.0 + r));
            if empty {
                found = true;
            }
        });
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Calls `f` on every `size`-subset of `items`.
pub(crate) fn for_each_subset<F: FnMut(&[usize])>(items: &[usize], size: usize, f: &mut F) {
    fn rec<F: FnMut(&[usize])>(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, f: &mut F) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::with_capacity(size), f);
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EmbedReport {
    pub simplices_checked: usize,
    /// Only for elementary refinements: the coarse complex projects
    /// injectively along the new colour direction.
    pub membrane_graph: Option<bool>,
}

/// Check Del(X, mu) is a subcomplex of Del(X, nu) on the identity vertex map.
pub fn embed_subcomplex(cloud: &ChromaticPointCloud, mu: &[usize], nu: &[usize]) -> Result<EmbedReport> {
    if !is_refinement(nu, mu)? {
        return Err(Error::NotRefinement("nu does not refine mu".into()));
    }
    let coarse = chromatic_delaunay(cloud, mu)?;
    let fine = chromatic_delaunay(cloud, nu)?;
    for s in coarse.complex.iter() {
        if !fine.complex.contains(s) {
            return Err(Error::MissingSimplex(s.vertices().to_vec()));
        }
    }
    let membrane_graph = if num_colours(nu) == num_colours(mu) + 1 {
        // the image is a graph over Del(X^mu) iff each maximal coarse simplex
        // stays affinely independent after dropping the new coordinate
        let lift = chromatic_lift(cloud, mu);
        Some(coarse.maximal.iter().all(|t| {
            let pts: Vec<&[f64]> = t.vertices().iter().map(|&i| lift[i].as_slice()).collect();
            crate::geometry::affine_rank(&pts) == t.dim()
        }))
    } else {
        None
    };
    Ok(EmbedReport { simplices_checked: coarse.complex.len(), membrane_graph })
}

/// Map from facet to the maximal simplices containing it.
pub fn facet_adjacency(tri: &Triangulation) -> HashMap<Simplex, Vec<usize>> {
    let mut adj: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (i, t) in tri.maximal.iter().enumerate() {
        for f in t.facets() {
            adj.entry(f).or_default().push(i);
        }
    }
    adj
}
