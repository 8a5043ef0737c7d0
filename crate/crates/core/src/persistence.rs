//! Persistent homology over GF(2): column reduction with clearing, diagram
//! comparison, and the bottleneck distance.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::FilteredComplex;

/// Diagrams with more points than this are refused by [`bottleneck_distance`].
pub const BOTTLENECK_MAX_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bar {
    pub degree: usize,
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
}

impl Bar {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

fn bar_cmp(a: &Bar, b: &Bar) -> Ordering {
    a.degree.cmp(&b.degree).then(a.birth.total_cmp(&b.birth)).then(a.death.total_cmp(&b.death))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PersistenceDiagram {
    /// Sorted by (degree, birth, death).
    pub bars: Vec<Bar>,
    /// Pairs with birth == death, kept for inspection.
    pub zero_length: Vec<Bar>,
}

impl PersistenceDiagram {
    pub fn from_bars(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(bar_cmp);
        Self { bars, zero_length: vec![] }
    }
    pub fn len(&self) -> usize {
        self.bars.len()
    }
    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }
    pub fn degree(&self, k: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.degree == k)
    }
    /// Rank of H_k at scale r.
    pub fn betti(&self, k: usize, r: f64) -> usize {
        self.degree(k).filter(|b| b.birth <= r && r < b.death).count()
    }
    pub fn max_degree(&self) -> Option<usize> {
        self.bars.iter().map(|b| b.degree).max()
    }
    /// Largest finite absolute value appearing in the diagram.
    pub fn scale(&self) -> f64 {
        self.bars.iter().flat_map(|b| [b.birth, b.death]).filter(|v| v.is_finite()).fold(0.0, |a, v| a.max(v.abs()))
    }
}

fn xor_into(acc: &mut Vec<usize>, other: &[usize]) {
    let mut out = Vec::with_capacity(acc.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() && j < other.len() {
        match acc[i].cmp(&other[j]) {
            Ordering::Less => {
                out.push(acc[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&acc[i..]);
    out.extend_from_slice(&other[j..]);
    *acc = out;
}

/// Boundary columns in filtration order; fails if a facet is missing,
/// enters later, or has a larger value.
fn boundary(f: &FilteredComplex) -> Result<Vec<Vec<usize>>> {
    f.entries()
        .iter()
        .enumerate()
        .map(|(j, (s, v))| {
            if s.dim() == 0 {
                return Ok(vec![]);
            }
            let mut col = Vec::with_capacity(s.len());
            for t in s.facets() {
                match f.position(&t) {
                    Some(i) if i < j && f.entries()[i].1 <= *v => col.push(i),
                    _ => return Err(Error::NonMonotoneFiltration(s.vertices().to_vec())),
                }
            }
            col.sort_unstable();
            Ok(col)
        })
        .collect()
}

/// Persistence pairs (birth index, death index) and essential birth indices,
/// for simplices of dimension <= max_degree.
pub fn reduce(f: &FilteredComplex, max_degree: usize) -> Result<(Vec<(usize, usize)>, Vec<usize>)> {
    let mut cols = boundary(f)?;
    let n = cols.len();
    let dims: Vec<usize> = f.entries().iter().map(|(s, _)| s.dim()).collect();
    let top = dims.iter().copied().max().unwrap_or(0).min(max_degree + 1);
    let mut pivot_of: Vec<Option<usize>> = vec![None; n];
    let mut negative = vec![false; n];
    let mut cleared = vec![false; n];
    let mut pairs = vec![];
    for k in (1..=top).rev() {
        for j in 0..n {
            if dims[j] != k || cleared[j] {
                continue;
            }
            let mut col = std::mem::take(&mut cols[j]);
            while let Some(&low) = col.last() {
                match pivot_of[low] {
                    Some(p) => xor_into(&mut col, &cols[p]),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivot_of[low] = Some(j);
                negative[j] = true;
                cleared[low] = true;
                pairs.push((low, j));
            }
            cols[j] = col;
        }
        for c in cols.iter_mut().zip(&cleared).filter(|(_, &c)| c).map(|(c, _)| c) {
            c.clear();
        }
    }
    let essential = (0..n).filter(|&i| dims[i] <= max_degree && !negative[i] && pivot_of[i].is_none()).collect();
    pairs.retain(|&(b, _)| dims[b] <= max_degree);
    pairs.sort_unstable();
    Ok((pairs, essential))
}

pub fn compute_persistence(f: &FilteredComplex, max_degree: usize) -> Result<PersistenceDiagram> {
    let (pairs, essential) = reduce(f, max_degree)?;
    let e = f.entries();
    let mut bars = vec![];
    let mut zero_length = vec![];
    for (b, d) in pairs {
        let bar = Bar { degree: e[b].0.dim(), birth: e[b].1, death: e[d].1 };
        if bar.birth == bar.death {
            zero_length.push(bar);
        } else {
            bars.push(bar);
        }
    }
    bars.extend(essential.into_iter().map(|i| Bar { degree: e[i].0.dim(), birth: e[i].1, death: f64::INFINITY }));
    bars.sort_by(bar_cmp);
    zero_length.sort_by(bar_cmp);
    Ok(PersistenceDiagram { bars, zero_length })
}

/// 1e-8 times the larger diagram scale (at least 1e-8).
pub fn default_tolerance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    1e-8 * a.scale().max(b.scale()).max(1.0)
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    if x.is_infinite() || y.is_infinite() {
        x == y
    } else {
        (x - y).abs() <= tol
    }
}

/// Multiset equality with every value allowed to move by `tol`; a bar
/// within `tol` of the diagonal may stay unmatched.
pub fn diagrams_equal(a: &PersistenceDiagram, b: &PersistenceDiagram, tol: f64) -> bool {
    let top = a.max_degree().max(b.max_degree()).unwrap_or(0);
    (0..=top).all(|k| {
        let x: Vec<&Bar> = a.degree(k).collect();
        let y: Vec<&Bar> = b.degree(k).collect();
        // sorted order matches almost always; fall back to a matching when it does not
        if x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| close(p.birth, q.birth, tol) && close(p.death, q.death, tol)) {
            return true;
        }
        let near_diagonal = |p: &Bar| p.persistence() <= 2.0 * tol;
        // left: x then one diagonal slot per y; right: y then one slot per x
        let (nx, ny) = (x.len(), y.len());
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(nx + ny);
        for (i, p) in x.iter().enumerate() {
            let mut row: Vec<usize> = (0..ny).filter(|&j| close(p.birth, y[j].birth, tol) && close(p.death, y[j].death, tol)).collect();
            if near_diagonal(p) {
                row.push(ny + i);
            }
            adj.push(row);
        }
        for (j, q) in y.iter().enumerate() {
            // a diagonal slot of y takes its own bar or any diagonal slot of x
            let mut row = if near_diagonal(q) { vec![j] } else { vec![] };
            row.extend(ny..ny + nx);
            adj.push(row);
        }
        perfect_matching(&adj, nx + ny)
    })
}

/// Kuhn's augmenting paths; true when every left vertex is matched.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    if adj.len() != right {
        return false;
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..adj.len()).all(|u| augment(u, adj, &mut vec![false; right], &mut owner))
}

fn linf(a: &Bar, b: &Bar) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn finite_bottleneck(x: &[&Bar], y: &[&Bar]) -> f64 {
    let mut cand: Vec<f64> = vec![0.0];
    cand.extend(x.iter().chain(y).map(|p| p.persistence() / 2.0));
    for p in x {
        cand.extend(y.iter().map(|q| linf(p, q)));
    }
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    // left = x ∪ diag(y), right = y ∪ diag(x)
    let (nx, ny) = (x.len(), y.len());
    let feasible = |eps: f64| {
        let mut adj: Vec<Vec<usize>> = vec![vec![]; nx + ny];
        for i in 0..nx {
            adj[i].extend((0..ny).filter(|&j| linf(x[i], y[j]) <= eps));
            if x[i].persistence() / 2.0 <= eps {
                adj[i].push(ny + i);
            }
        }
        for j in 0..ny {
            if y[j].persistence() / 2.0 <= eps {
                adj[nx + j].push(j);
            }
            adj[nx + j].extend(ny..ny + nx);
        }
        perfect_matching(&adj, nx + ny)
    };
    let (mut lo, mut hi) = (0, cand.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cand[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cand[lo]
}

/// Bottleneck distance (L∞ ground metric, diagonal at half the persistence),
/// maximised over degrees. Infinite when essential counts differ.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<f64> {
    for d in [a, b] {
        if d.len() > BOTTLENECK_MAX_POINTS {
            return Err(Error::SizeLimitExceeded(format!(
                "bottleneck on {} points (limit {BOTTLENECK_MAX_POINTS})",
                d.len()
            )));
        }
    }
    let top = a.max_degree().max(b.max_degree()).unwrap_or(0);
    let mut worst: f64 = 0.0;
    for k in 0..=top {
        let (xe, xf): (Vec<&Bar>, Vec<&Bar>) = a.degree(k).partition(|p| p.is_essential());
        let (ye, yf): (Vec<&Bar>, Vec<&Bar>) = b.degree(k).partition(|p| p.is_essential());
        if xe.len() != ye.len() {
            return Ok(f64::INFINITY);
        }
        // births are sorted, so matching in order is optimal on the line
        for (p, q) in xe.iter().zip(&ye) {
            worst = worst.max((p.birth - q.birth).abs());
        }
        worst = worst.max(finite_bottleneck(&xf, &yf));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::ChromaticPointCloud;
    use crate::filtration::{cech_filtration, rips_filtration};

    fn bar(degree: usize, birth: f64, death: f64) -> Bar {
        Bar { degree, birth, death }
    }

    #[test]
    fn single_point() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0, 0.0]]).unwrap();
        let d = compute_persistence(&cech_filtration(&c, None).unwrap(), 1).unwrap();
        assert_eq!(d.bars, vec![bar(0, 0.0, f64::INFINITY)]);
    }

    #[test]
    fn rips_on_a_line() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0], vec![10.0], vec![20.0]]).unwrap();
        let d = compute_persistence(&rips_filtration(&c, None).unwrap(), 0).unwrap();
        assert_eq!(d.bars, vec![bar(0, 0.0, 5.0), bar(0, 0.0, 5.0), bar(0, 0.0, f64::INFINITY)]);
        assert_eq!(d.zero_length.len(), 0);
    }

    #[test]
    fn square_has_one_loop() {
        let c = ChromaticPointCloud::mono(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let d = compute_persistence(&cech_filtration(&c, None).unwrap(), 1).unwrap();
        let h1: Vec<&Bar> = d.degree(1).collect();
        assert_eq!(h1.len(), 1);
        assert!((h1[0].birth - 0.5f64.sqrt()).abs() < 1e-12 && (h1[0].death - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_bottleneck() {
        let a = PersistenceDiagram::from_bars(vec![bar(0, 0.0, 1.0)]);
        let b = PersistenceDiagram::from_bars(vec![bar(0, 0.0, 1.2)]);
        assert!(diagrams_equal(&a, &a, 1e-8));
        let shifted = PersistenceDiagram::from_bars(vec![bar(0, 0.0, 1.0 + 2e-8)]);
        assert!(!diagrams_equal(&a, &shifted, 1e-8));
        let sliver = PersistenceDiagram::from_bars(a.bars.iter().copied().chain([bar(1, 0.3, 0.3 + 1e-12)]).collect());
        assert!(diagrams_equal(&a, &sliver, 1e-8));
        let short = PersistenceDiagram::from_bars(a.bars.iter().copied().chain([bar(1, 0.3, 0.3 + 1e-6)]).collect());
        assert!(!diagrams_equal(&a, &short, 1e-8));
        assert_eq!(bottleneck_distance(&a, &a).unwrap(), 0.0);
        assert!((bottleneck_distance(&a, &b).unwrap() - 0.2).abs() < 1e-12);
        let empty = PersistenceDiagram::default();
        assert!((bottleneck_distance(&a, &empty).unwrap() - 0.5).abs() < 1e-12);
    }
}
