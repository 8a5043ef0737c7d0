//! Filtered complexes: Čech, Vietoris–Rips, chromatic alpha, selective
//! alpha, chromatic Delaunay–Čech and Delaunay–Rips, and Γ-subfiltrations.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cloud::{check_colouring, ChromaticPointCloud};
use crate::delaunay::{chromatic_delaunay, for_each_subset, Triangulation};
use crate::error::{Error, Result};
use crate::geometry::dist;
use crate::par;
use crate::simplex::{Simplex, SimplicialComplex};
use crate::stack::{min_enclosing_ball, min_stack, KktCertificate, Stack};

/// Largest cloud for which a full (uncapped) Čech or Rips complex is built.
pub const FULL_COMPLEX_MAX_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FiltrationKind {
    Cech,
    Rips,
    Alpha,
    Selective,
    DelCech,
    DelRips,
}

impl FiltrationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FiltrationKind::Cech => "cech",
            FiltrationKind::Rips => "rips",
            FiltrationKind::Alpha => "alpha",
            FiltrationKind::Selective => "selective",
            FiltrationKind::DelCech => "del-cech",
            FiltrationKind::DelRips => "del-rips",
        }
    }
}

impl fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FiltrationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cech" => FiltrationKind::Cech,
            "rips" => FiltrationKind::Rips,
            "alpha" => FiltrationKind::Alpha,
            "selective" => FiltrationKind::Selective,
            "del-cech" => FiltrationKind::DelCech,
            "del-rips" => FiltrationKind::DelRips,
            other => return Err(Error::InvalidInput(format!("unknown filtration kind {other:?}"))),
        })
    }
}

/// Order by (value, dimension, lexicographic vertex list).
pub fn canonical_cmp(a: &(Simplex, f64), b: &(Simplex, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| a.0.dim_lex_cmp(&b.0))
}

/// A simplicial complex with a value per simplex, stored in canonical order.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub kind: FiltrationKind,
    pub d: usize,
    pub s: usize,
    entries: Vec<(Simplex, f64)>,
    index: HashMap<Simplex, usize>,
}

impl PartialEq for FilteredComplex {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.d == other.d && self.s == other.s && self.entries == other.entries
    }
}

impl FilteredComplex {
    pub fn new(kind: FiltrationKind, d: usize, s: usize, mut entries: Vec<(Simplex, f64)>) -> Self {
        entries.sort_by(canonical_cmp);
        let index = entries.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        Self { kind, d, s, entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn entries(&self) -> &[(Simplex, f64)] {
        &self.entries
    }
    pub fn value(&self, s: &Simplex) -> Option<f64> {
        self.index.get(s).map(|&i| self.entries[i].1)
    }
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }
    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }
    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_maximal(self.entries.iter().map(|(s, _)| s.clone()))
    }
    /// Simplices with value <= r.
    pub fn sublevel(&self, r: f64) -> SimplicialComplex {
        SimplicialComplex::from_maximal(self.entries.iter().filter(|(_, v)| *v <= r).map(|(s, _)| s.clone()))
    }
    /// Distinct values, ascending.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.1).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Keep the simplices accepted by `keep`, values unchanged.
    pub fn restrict<F: Fn(&Simplex) -> bool>(&self, keep: F) -> Self {
        Self::new(self.kind, self.d, self.s, self.entries.iter().filter(|(s, _)| keep(s)).cloned().collect())
    }
}

/// Check value(tau) <= value(sigma) for every facet tau of sigma, and that
/// every facet is present.
pub fn verify_monotone(f: &FilteredComplex) -> Result<()> {
    for (s, v) in f.entries() {
        for t in s.facets() {
            match f.value(&t) {
                Some(tv) if tv <= *v => {}
                _ => return Err(Error::NonMonotoneFiltration(s.vertices().to_vec())),
            }
        }
    }
    Ok(())
}

/// Radius of the minimum enclosing ball.
pub fn cech_value(cloud: &ChromaticPointCloud, s: &Simplex) -> Result<f64> {
    let pts: Vec<&[f64]> = s.vertices().iter().map(|&v| cloud.point(v)).collect();
    Ok(min_enclosing_ball(&pts)?.1)
}

/// Half the largest pairwise distance.
pub fn rips_value(cloud: &ChromaticPointCloud, s: &Simplex) -> f64 {
    let v = s.vertices();
    let mut m: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            m = m.max(dist(cloud.point(v[i]), cloud.point(v[j])));
        }
    }
    m / 2.0
}

fn all_subsets(n: usize, dim_cap: Option<usize>) -> Result<Vec<Simplex>> {
    let max_size = match dim_cap {
        Some(c) => (c + 1).min(n),
        None if n <= FULL_COMPLEX_MAX_N => n,
        None => {
            return Err(Error::SizeLimitExceeded(format!(
                "full complex on {n} points (limit {FULL_COMPLEX_MAX_N}); pass a dimension cap"
            )))
        }
    };
    let items: Vec<usize> = (0..n).collect();
    let mut out = vec![];
    for k in 1..=max_size {
        for_each_subset(&items, k, &mut |s| out.push(Simplex::from_sorted(s.to_vec())));
    }
    Ok(out)
}

fn collect_values(simplices: Vec<Simplex>, values: Vec<Result<f64>>) -> Result<Vec<(Simplex, f64)>> {
    let entries = simplices.into_iter().zip(values).map(|(s, v)| v.map(|v| (s, v))).collect::<Result<Vec<_>>>()?;
    close_upward(entries)
}

/// Raise each value to the largest value among its facets. Independent
/// radius solves can leave a coface a few ulps below a face; gaps above
/// 1e-9 relative are reported as errors.
fn close_upward(mut entries: Vec<(Simplex, f64)>) -> Result<Vec<(Simplex, f64)>> {
    entries.sort_by(|a, b| a.0.dim_lex_cmp(&b.0));
    let mut index: HashMap<Simplex, f64> = HashMap::with_capacity(entries.len());
    for (s, v) in entries.iter_mut() {
        let m = s.facets().iter().filter_map(|t| index.get(t)).fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if m > *v {
            if m - *v > 1e-9 * m.abs().max(1.0) {
                return Err(Error::NonMonotoneFiltration(s.vertices().to_vec()));
            }
            *v = m;
        }
        index.insert(s.clone(), *v);
    }
    Ok(entries)
}

pub fn cech_filtration(cloud: &ChromaticPointCloud, dim_cap: Option<usize>) -> Result<FilteredComplex> {
    let simplices = all_subsets(cloud.len(), dim_cap)?;
    let values = par::map(&simplices, |s| cech_value(cloud, s));
    Ok(FilteredComplex::new(FiltrationKind::Cech, cloud.d(), cloud.s(), collect_values(simplices, values)?))
}

pub fn rips_filtration(cloud: &ChromaticPointCloud, dim_cap: Option<usize>) -> Result<FilteredComplex> {
    let simplices = all_subsets(cloud.len(), dim_cap)?;
    let values = par::map(&simplices, |s| rips_value(cloud, s));
    let entries = simplices.into_iter().zip(values).collect();
    Ok(FilteredComplex::new(FiltrationKind::Rips, cloud.d(), cloud.s(), entries))
}

fn colour_count(mu: &[usize]) -> usize {
    crate::cloud::num_colours(mu)
}

pub fn chromatic_alpha_filtration(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<FilteredComplex> {
    let tri = chromatic_delaunay(cloud, mu)?;
    alpha_from_triangulation(cloud, mu, &tri)
}

/// Chromatic alpha values on a precomputed Del(X, mu), top dimension first:
/// a simplex takes the radius of its smallest stack when that stack has no
/// point of X strictly inside, otherwise the least value of its cofaces.
pub fn alpha_from_triangulation(cloud: &ChromaticPointCloud, mu: &[usize], tri: &Triangulation) -> Result<FilteredComplex> {
    check_colouring(cloud, mu)?;
    let complex = &tri.complex;
    let top = complex.dim().unwrap_or(0);
    let mut cofaces: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (i, t) in complex.iter().enumerate() {
        if t.dim() > 0 {
            for f in t.facets() {
                cofaces.entry(f).or_default().push(i);
            }
        }
    }
    let tol = 1e-9 * cloud.scale().max(f64::MIN_POSITIVE);
    let mut values = vec![f64::NAN; complex.len()];
    for k in (0..=top).rev() {
        let layer: Vec<(usize, &Simplex)> = complex.iter().enumerate().filter(|(_, s)| s.dim() == k).collect();
        let computed = par::map(&layer, |&(_, s)| -> Result<f64> {
            let empty = match min_stack(cloud, mu, s, s.vertices()) {
                Ok((st, _)) => {
                    let inside = (0..cloud.len())
                        .any(|v| !s.contains(v) && st.radius(mu[v]).is_some_and(|r| dist(cloud.point(v), &st.centre) < r - tol));
                    (!inside).then(|| st.rad())
                }
                Err(Error::NoStack) => None,
                Err(e) => return Err(e),
            };
            if let Some(r) = empty {
                return Ok(r);
            }
            let best = cofaces.get(s).into_iter().flatten().map(|&i| values[i]).fold(f64::INFINITY, f64::min);
            if best.is_finite() {
                Ok(best)
            } else {
                Err(Error::NumericalFailure(format!("{s:?} has no empty stack and no cofaces")))
            }
        });
        for ((i, _), v) in layer.into_iter().zip(computed) {
            values[i] = v?;
        }
    }
    let entries = close_upward(complex.iter().cloned().zip(values).collect())?;
    Ok(FilteredComplex::new(FiltrationKind::Alpha, cloud.d(), colour_count(mu) - 1, entries))
}

/// Alpha value straight from the definition: radius of S(sigma, mu; X).
/// None when sigma has no empty stack.
pub fn direct_alpha_value(cloud: &ChromaticPointCloud, mu: &[usize], s: &Simplex) -> Result<Option<f64>> {
    let all: Vec<usize> = (0..cloud.len()).collect();
    match min_stack(cloud, mu, s, &all) {
        Ok((st, _)) => Ok(Some(st.rad())),
        Err(Error::NoStack) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Selective alpha filtration with the stack and certificate behind every
/// value, aligned with `filtered.entries()`.
#[derive(Debug, Clone)]
pub struct SelectiveFiltration {
    pub filtered: FilteredComplex,
    pub solutions: Vec<(Stack, KktCertificate)>,
    pub e: Vec<usize>,
}

/// sigma enters at Rad S(sigma, mu; E); simplices without a stack are left out.
/// Candidates are grown level by level from simplices whose facets all survived.
pub fn selective_filtration(cloud: &ChromaticPointCloud, mu: &[usize], e: &[usize], dim_cap: Option<usize>) -> Result<SelectiveFiltration> {
    check_colouring(cloud, mu)?;
    let n = cloud.len();
    if let Some(&bad) = e.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidInput(format!("excluded index {bad} out of range")));
    }
    let max_size = match dim_cap {
        Some(c) => c + 1,
        None if n <= FULL_COMPLEX_MAX_N => n,
        None => {
            return Err(Error::SizeLimitExceeded(format!(
                "selective filtration on {n} points (limit {FULL_COMPLEX_MAX_N}); pass a dimension cap"
            )))
        }
    };
    let mut found: Vec<(Simplex, Stack, KktCertificate)> = vec![];
    let mut level: Vec<Simplex> = (0..n).map(Simplex::vertex).collect();
    for size in 1..=max_size.min(n) {
        if level.is_empty() {
            break;
        }
        let solved = par::map(&level, |s| match min_stack(cloud, mu, s, e) {
            Ok(r) => Ok(Some(r)),
            Err(Error::NoStack) => Ok(None),
            Err(err) => Err(err),
        });
        let mut kept: HashSet<Simplex> = HashSet::new();
        for (s, r) in level.into_iter().zip(solved) {
            if let Some((st, cert)) = r? {
                kept.insert(s.clone());
                found.push((s, st, cert));
            }
        }
        let mut next: Vec<Simplex> = vec![];
        if size < max_size {
            let mut sorted: Vec<&Simplex> = kept.iter().collect();
            sorted.sort();
            for s in sorted {
                let last = *s.vertices().last().unwrap();
                for v in last + 1..n {
                    let c = s.with(v);
                    if c.facets().iter().all(|f| kept.contains(f)) {
                        next.push(c);
                    }
                }
            }
        }
        level = next;
    }
    let closed: HashMap<Simplex, f64> = close_upward(found.iter().map(|(s, st, _)| (s.clone(), st.rad())).collect())?.into_iter().collect();
    let mut entries: Vec<(Simplex, f64, Stack, KktCertificate)> =
        found.into_iter().map(|(s, st, c)| (closed[&s], s, st, c)).map(|(v, s, st, c)| (s, v, st, c)).collect();
    entries.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.dim_lex_cmp(&b.0)));
    let solutions = entries.iter().map(|(_, _, st, c)| (st.clone(), c.clone())).collect();
    let filtered = FilteredComplex::new(
        FiltrationKind::Selective,
        cloud.d(),
        colour_count(mu) - 1,
        entries.into_iter().map(|(s, v, _, _)| (s, v)).collect(),
    );
    Ok(SelectiveFiltration { filtered, solutions, e: e.to_vec() })
}

pub fn del_cech_filtration(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<FilteredComplex> {
    let tri = chromatic_delaunay(cloud, mu)?;
    del_cech_from_triangulation(cloud, mu, &tri)
}

pub fn del_cech_from_triangulation(cloud: &ChromaticPointCloud, mu: &[usize], tri: &Triangulation) -> Result<FilteredComplex> {
    check_colouring(cloud, mu)?;
    let simplices: Vec<Simplex> = tri.complex.iter().cloned().collect();
    let values = par::map(&simplices, |s| cech_value(cloud, s));
    let entries = collect_values(simplices, values)?;
    Ok(FilteredComplex::new(FiltrationKind::DelCech, cloud.d(), colour_count(mu) - 1, entries))
}

pub fn del_rips_filtration(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<FilteredComplex> {
    let tri = chromatic_delaunay(cloud, mu)?;
    del_rips_from_triangulation(cloud, mu, &tri)
}

pub fn del_rips_from_triangulation(cloud: &ChromaticPointCloud, mu: &[usize], tri: &Triangulation) -> Result<FilteredComplex> {
    check_colouring(cloud, mu)?;
    let simplices: Vec<Simplex> = tri.complex.iter().cloned().collect();
    let values = par::map(&simplices, |s| rips_value(cloud, s));
    let entries = simplices.into_iter().zip(values).collect();
    Ok(FilteredComplex::new(FiltrationKind::DelRips, cloud.d(), colour_count(mu) - 1, entries))
}

/// Build the filtration of the given kind. Čech and Rips ignore `mu`;
/// selective uses E = X.
pub fn build(kind: FiltrationKind, cloud: &ChromaticPointCloud, mu: &[usize], dim_cap: Option<usize>) -> Result<FilteredComplex> {
    match kind {
        FiltrationKind::Cech => cech_filtration(cloud, dim_cap),
        FiltrationKind::Rips => rips_filtration(cloud, dim_cap),
        FiltrationKind::Alpha => chromatic_alpha_filtration(cloud, mu),
        FiltrationKind::Selective => {
            let all: Vec<usize> = (0..cloud.len()).collect();
            Ok(selective_filtration(cloud, mu, &all, dim_cap)?.filtered)
        }
        FiltrationKind::DelCech => del_cech_filtration(cloud, mu),
        FiltrationKind::DelRips => del_rips_filtration(cloud, mu),
    }
}

/// The (k-1)-skeleton of the full simplex on `colours` colours: Γ for which
/// only simplices with at most k colours are kept.
pub fn k_chromatic_gamma(colours: usize, k: usize) -> SimplicialComplex {
    SimplicialComplex::full_simplex(colours).filter(|s| s.len() <= k)
}

/// Simplices whose colour set is a simplex of `gamma`.
pub fn gamma_subfiltration(f: &FilteredComplex, mu: &[usize], gamma: &SimplicialComplex) -> Result<FilteredComplex> {
    if !gamma.is_face_closed() {
        let bad = gamma
            .iter()
            .find(|s| s.facets().iter().any(|t| !t.is_empty() && !gamma.contains(t)))
            .map(|s| s.vertices().to_vec())
            .unwrap_or_default();
        return Err(Error::InvalidGamma(bad));
    }
    if let Some(v) = f.entries().iter().flat_map(|(s, _)| s.vertices()).find(|&&v| v >= mu.len()) {
        return Err(Error::LengthMismatch { expected: *v + 1, got: mu.len() });
    }
    Ok(f.restrict(|s| {
        let cols: std::collections::BTreeSet<usize> = s.vertices().iter().map(|&v| mu[v]).collect();
        gamma.contains(&Simplex::from_sorted(cols.into_iter().collect()))
    }))
}

/// sqrt(2d / (d + 1)).
pub fn nesting_constant(d: usize) -> f64 {
    (2.0 * d as f64 / (d as f64 + 1.0)).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct NestingReport {
    pub delta: f64,
    pub checked: usize,
    /// Largest Čech / Rips ratio seen.
    pub max_ratio: f64,
    pub violations: Vec<Simplex>,
}

/// Nesting check on the chromatic Delaunay complex of (cloud, mu).
pub fn verify_nesting_chromatic(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<NestingReport> {
    verify_nesting(cloud, &del_rips_filtration(cloud, mu)?)
}

/// Check Rad_VR <= Rad_Čech <= delta Rad_VR on every simplex of `f`'s complex.
pub fn verify_nesting(cloud: &ChromaticPointCloud, f: &FilteredComplex) -> Result<NestingReport> {
    let delta = nesting_constant(cloud.d());
    let mut rep = NestingReport { delta, checked: 0, max_ratio: 1.0, violations: vec![] };
    for (s, _) in f.entries() {
        if s.dim() == 0 {
            continue;
        }
        let vr = rips_value(cloud, s);
        let c = cech_value(cloud, s)?;
        let tol = 1e-12 * c.max(1.0);
        rep.checked += 1;
        if vr > 0.0 {
            rep.max_ratio = rep.max_ratio.max(c / vr);
        }
        if vr > c + tol || c > delta * vr + tol {
            rep.violations.push(s.clone());
        }
    }
    Ok(rep)
}
