//! Generalized discrete Morse theory: interval vector fields, acyclicity,
//! sum refinement, restriction and constructive collapses, plus the vertical
//! and filtration gradients and the collapse theorems built on them.

pub mod selective;
pub mod theorems;
pub mod vertical;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{Simplex, SimplicialComplex};

pub use selective::{filtration_gradient, FiltrationGradient};

pub use theorems::{verify_collapse_theorems, CollapseCheck, CollapseReport};
pub use vertical::{upper_lower_faces, vertical_gradient, FaceClassification, VerticalGradient};

/// Cofaces of codimension one, as edges sigma -> tau with tau a facet of sigma.
#[derive(Debug, Clone)]
pub struct HasseDiagram {
    pub nodes: Vec<Simplex>,
    /// (coface index, face index)
    pub edges: Vec<(usize, usize)>,
}

impl HasseDiagram {
    pub fn new(k: &SimplicialComplex) -> Self {
        let nodes = k.simplices().to_vec();
        let mut edges = vec![];
        for (i, s) in nodes.iter().enumerate() {
            if s.dim() == 0 {
                continue;
            }
            for f in s.facets() {
                if let Some(j) = k.position(&f) {
                    edges.push((i, j));
                }
            }
        }
        Self { nodes, edges }
    }
}

/// [bottom, top] = every eta with bottom <= eta <= top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Interval {
    pub bottom: Simplex,
    pub top: Simplex,
}

impl Interval {
    pub fn new(bottom: Simplex, top: Simplex) -> Result<Self> {
        if !bottom.is_face_of(&top) {
            return Err(Error::NotInterval(format!("{bottom:?} is not a face of {top:?}")));
        }
        Ok(Self { bottom, top })
    }
    pub fn singleton(s: Simplex) -> Self {
        Self { bottom: s.clone(), top: s }
    }
    pub fn is_singleton(&self) -> bool {
        self.bottom == self.top
    }
    pub fn contains(&self, s: &Simplex) -> bool {
        self.bottom.is_face_of(s) && s.is_face_of(&self.top)
    }
    pub fn len(&self) -> usize {
        1 << (self.top.len() - self.bottom.len())
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn members(&self) -> Vec<Simplex> {
        let free = self.top.minus(&self.bottom);
        (0u64..1 << free.len())
            .map(|mask| {
                let mut v = self.bottom.vertices().to_vec();
                v.extend(free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
                v.sort_unstable();
                Simplex::from_sorted(v)
            })
            .collect()
    }
    /// [a ∪ c, b ∩ d], or None when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let bottom = self.bottom.union(&other.bottom);
        let top = self.top.intersection(&other.top)?;
        bottom.is_face_of(&top).then_some(Interval { bottom, top })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.bottom, self.top)
    }
}

/// A partition of a set of simplices into intervals.
#[derive(Debug, Clone)]
pub struct VectorField {
    intervals: Vec<Interval>,
    class: HashMap<Simplex, usize>,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.intervals.clone();
        let mut b = other.intervals.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl VectorField {
    /// Errors with PartitionFailure when two intervals overlap.
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        let mut class = HashMap::new();
        for (i, iv) in intervals.iter().enumerate() {
            for s in iv.members() {
                if let Some(j) = class.insert(s.clone(), i) {
                    return Err(Error::PartitionFailure(format!("{s:?} lies in {} and {}", intervals[j], iv)));
                }
            }
        }
        Ok(Self { intervals, class })
    }

    /// As [`VectorField::new`], and the intervals must cover exactly `k`.
    pub fn on_complex(k: &SimplicialComplex, intervals: Vec<Interval>) -> Result<Self> {
        let v = Self::new(intervals)?;
        if let Some(s) = k.iter().find(|s| !v.class.contains_key(*s)) {
            return Err(Error::PartitionFailure(format!("{s:?} is in no interval")));
        }
        if let Some(s) = v.class.keys().find(|s| !k.contains(s)) {
            return Err(Error::PartitionFailure(format!("{s:?} is not in the complex")));
        }
        Ok(v)
    }

    pub fn singletons(k: &SimplicialComplex) -> Self {
        Self::new(k.iter().cloned().map(Interval::singleton).collect()).expect("singletons are disjoint")
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }
    pub fn len(&self) -> usize {
        self.intervals.len()
    }
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
    pub fn class_of(&self, s: &Simplex) -> Option<usize> {
        self.class.get(s).copied()
    }
    pub fn interval_of(&self, s: &Simplex) -> Option<&Interval> {
        self.class_of(s).map(|i| &self.intervals[i])
    }
    pub fn covers(&self, s: &Simplex) -> bool {
        self.class.contains_key(s)
    }
    /// All simplices covered, as a complex (face-closure is not checked).
    pub fn domain(&self) -> Vec<Simplex> {
        self.class.keys().cloned().collect()
    }
    /// Crit(V): simplices forming singleton intervals.
    pub fn critical(&self) -> Vec<Simplex> {
        let mut c: Vec<Simplex> = self.intervals.iter().filter(|i| i.is_singleton()).map(|i| i.top.clone()).collect();
        c.sort_by(|a, b| a.dim_lex_cmp(b));
        c
    }
}

/// Edges of the quotient H(K)/V between distinct classes, deduplicated.
pub fn quotient_edges(k: &SimplicialComplex, v: &VectorField) -> Result<Vec<(usize, usize)>> {
    let mut edges = HashSet::new();
    for s in k.iter() {
        let a = v.class_of(s).ok_or_else(|| Error::PartitionFailure(format!("{s:?} is in no interval")))?;
        if s.dim() == 0 {
            continue;
        }
        for f in s.facets() {
            let b = v.class_of(&f).ok_or_else(|| Error::PartitionFailure(format!("{f:?} is in no interval")))?;
            if a != b {
                edges.insert((a, b));
            }
        }
    }
    let mut e: Vec<_> = edges.into_iter().collect();
    e.sort_unstable();
    Ok(e)
}

/// Longest path from each class down to a sink of the quotient DAG; None
/// when the quotient has a cycle.
pub fn quotient_heights(k: &SimplicialComplex, v: &VectorField) -> Result<Option<Vec<usize>>> {
    let n = v.len();
    let edges = quotient_edges(k, v)?;
    let mut out: Vec<Vec<usize>> = vec![vec![]; n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in &edges {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(a) = stack.pop() {
        order.push(a);
        for &b in &out[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                stack.push(b);
            }
        }
    }
    if order.len() < n {
        return Ok(None);
    }
    let mut height = vec![0usize; n];
    for &a in order.iter().rev() {
        height[a] = out[a].iter().map(|&b| height[b] + 1).max().unwrap_or(0);
    }
    Ok(Some(height))
}

/// True iff H(K)/V is a directed acyclic graph.
pub fn check_acyclicity(k: &SimplicialComplex, v: &VectorField) -> Result<bool> {
    Ok(quotient_heights(k, v)?.is_some())
}

/// {I ∩ J : I in V, J in W, nonempty}, over simplices covered by both.
pub fn sum_refine(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    let mut groups: HashMap<(usize, usize), usize> = HashMap::new();
    for (s, &a) in &v.class {
        if let Some(b) = w.class_of(s) {
            *groups.entry((a, b)).or_default() += 1;
        }
    }
    let mut keys: Vec<_> = groups.into_iter().collect();
    keys.sort_unstable();
    let mut out = Vec::with_capacity(keys.len());
    for ((a, b), count) in keys {
        let (i, j) = (&v.intervals[a], &w.intervals[b]);
        let z = i.intersect(j).ok_or_else(|| Error::NotInterval(format!("{i} ∩ {j}")))?;
        // members outside either domain would make the intersection a non-interval
        if z.len() != count {
            return Err(Error::NotInterval(format!("{i} ∩ {j} meets the common domain in {count} of {} simplices", z.len())));
        }
        out.push(z);
    }
    VectorField::new(out)
}

/// V restricted to a subcomplex L whose complement is a union of intervals.
pub fn restrict_gradient(v: &VectorField, l: &SimplicialComplex) -> Result<VectorField> {
    let mut kept = vec![];
    for iv in &v.intervals {
        let inside = iv.members().iter().filter(|s| l.contains(s)).count();
        if inside == iv.len() {
            kept.push(iv.clone());
        } else if inside > 0 {
            return Err(Error::NotUnionOfIntervals(format!("{iv} is split by the subcomplex")));
        }
    }
    let r = VectorField::new(kept)?;
    if let Some(s) = l.iter().find(|s| !r.covers(s)) {
        return Err(Error::NotUnionOfIntervals(format!("{s:?} is not covered by the field")));
    }
    Ok(r)
}

/// Split every interval into pairs (eta, eta + x) with x the smallest vertex
/// of top minus bottom.
pub fn refine_to_pairs(v: &VectorField) -> Vec<Interval> {
    let mut out = vec![];
    for iv in &v.intervals {
        if iv.len() <= 2 {
            out.push(iv.clone());
            continue;
        }
        let free = iv.top.minus(&iv.bottom);
        let x = free[0];
        let lower = Interval { bottom: iv.bottom.clone(), top: iv.top.without(x).expect("apex lies in top") };
        for eta in lower.members() {
            let up = eta.with(x);
            out.push(Interval { bottom: eta, top: up });
        }
    }
    out
}

/// One elementary collapse: remove `free` and its unique coface `coface`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseStep {
    pub free: Simplex,
    pub coface: Simplex,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CollapseTrace {
    pub steps: Vec<CollapseStep>,
}

impl CollapseTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
    /// One "dim | free | coface" line per step.
    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{} | {} | {}\n", s.free.dim(), s.free, s.coface)).collect()
    }
}

/// Collapse K onto L through the intervals of V covering K minus L.
pub fn execute_collapse(k: &SimplicialComplex, v: &VectorField, l: &SimplicialComplex) -> Result<CollapseTrace> {
    if !l.is_subcomplex_of(k) {
        return Err(Error::NotCollapsible("target is not a subcomplex".into()));
    }
    let mut removable: Vec<usize> = vec![];
    let mut seen = HashSet::new();
    for s in k.difference(l) {
        let c = v.class_of(&s).ok_or_else(|| Error::NotCollapsible(format!("{s:?} is in no interval")))?;
        let iv = &v.intervals[c];
        if iv.is_singleton() {
            return Err(Error::NotCollapsible(format!("{s:?} is critical")));
        }
        if seen.insert(c) {
            if iv.members().iter().any(|m| l.contains(m) || !k.contains(m)) {
                return Err(Error::NotCollapsible(format!("{iv} straddles the target")));
            }
            removable.push(c);
        }
    }
    let kv = restrict_gradient(v, k).map_err(|e| Error::NotCollapsible(e.to_string()))?;
    let heights = quotient_heights(k, &kv)?.ok_or_else(|| Error::NotCollapsible("vector field has a closed path".into()))?;
    let height_of = |c: usize| heights[kv.class_of(&v.intervals[c].top).unwrap()];
    removable.sort_by(|&a, &b| {
        height_of(b)
            .cmp(&height_of(a))
            .then_with(|| v.intervals[b].top.dim_lex_cmp(&v.intervals[a].top))
    });

    let mut present: HashSet<Simplex> = k.iter().cloned().collect();
    let mut cofaces: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
    for s in k.iter() {
        if s.dim() > 0 {
            for f in s.facets() {
                cofaces.entry(f).or_default().push(s.clone());
            }
        }
    }
    let live = |s: &Simplex, present: &HashSet<Simplex>| -> usize {
        cofaces.get(s).map_or(0, |c| c.iter().filter(|t| present.contains(*t)).count())
    };
    let mut trace = CollapseTrace::default();
    for c in removable {
        let iv = Interval { bottom: v.intervals[c].bottom.clone(), top: v.intervals[c].top.clone() };
        let single = VectorField { intervals: vec![iv.clone()], class: HashMap::new() };
        let mut pairs: Vec<Interval> = refine_to_pairs(&single);
        pairs.sort_by(|a, b| b.top.len().cmp(&a.top.len()).then_with(|| a.top.cmp(&b.top)));
        for p in pairs {
            let (free, coface) = (p.bottom, p.top);
            if live(&coface, &present) != 0 || live(&free, &present) != 1 || !present.contains(&coface) {
                return Err(Error::StuckCollapse(format!("{free:?} is not a free face of {coface:?}")));
            }
            present.remove(&coface);
            present.remove(&free);
            trace.steps.push(CollapseStep { free, coface });
        }
    }
    if present.len() != l.len() || !l.iter().all(|s| present.contains(s)) {
        return Err(Error::StuckCollapse("collapse did not end at the target".into()));
    }
    Ok(trace)
}
