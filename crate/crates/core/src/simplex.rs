//! Abstract simplices and simplicial complexes on vertex indices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing, non-empty vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut v: Vec<usize>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidInput("empty simplex".into()));
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("repeated vertex in {v:?}")));
        }
        Ok(Simplex(v))
    }

    /// Caller guarantees sorted and duplicate-free.
    pub fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]) && !v.is_empty());
        Simplex(v)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces, in order of the removed vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return vec![];
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Simplex(v)
            })
            .collect()
    }

    /// All non-empty faces including self.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        assert!(k < 31, "simplex too large to enumerate faces");
        (1u32..(1 << k))
            .map(|mask| Simplex((0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    /// None when the intersection is empty.
    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<usize> = self.0.iter().copied().filter(|x| other.contains(*x)).collect();
        (!v.is_empty()).then_some(Simplex(v))
    }

    pub fn minus(&self, other: &Simplex) -> Vec<usize> {
        self.0.iter().copied().filter(|x| !other.contains(*x)).collect()
    }

    pub fn with(&self, v: usize) -> Simplex {
        let mut w = self.0.clone();
        if let Err(pos) = w.binary_search(&v) {
            w.insert(pos, v);
        }
        Simplex(w)
    }

    pub fn without(&self, v: usize) -> Option<Simplex> {
        let w: Vec<usize> = self.0.iter().copied().filter(|&x| x != v).collect();
        (!w.is_empty()).then_some(Simplex(w))
    }

    /// Canonical key: dimension first, then lexicographic.
    pub fn dim_lex_cmp(&self, other: &Simplex) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Face-closed set of simplices, kept sorted by (dimension, lex).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.simplices).finish()
    }
}

impl SimplicialComplex {
    /// Closure of the given simplices under taking faces.
    pub fn from_maximal<I: IntoIterator<Item = Simplex>>(tops: I) -> Self {
        let mut set = BTreeSet::new();
        for t in tops {
            if set.contains(&t) {
                continue;
            }
            for f in t.faces() {
                set.insert(f);
            }
        }
        Self::from_set(set)
    }

    /// Errors unless the list is already face-closed.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(items: I) -> Result<Self> {
        let set: BTreeSet<Simplex> = items.into_iter().collect();
        for s in &set {
            for f in s.facets() {
                if !set.contains(&f) {
                    return Err(Error::InvalidInput(format!("face {f:?} of {s:?} missing")));
                }
            }
        }
        Ok(Self::from_set(set))
    }

    fn from_set(set: BTreeSet<Simplex>) -> Self {
        let mut simplices: Vec<Simplex> = set.into_iter().collect();
        simplices.sort_by(|a, b| a.dim_lex_cmp(b));
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self { simplices, index }
    }

    /// The full simplex on `0..n`.
    pub fn full_simplex(n: usize) -> Self {
        Self::from_maximal([Simplex((0..n).collect())])
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }
    pub fn len(&self) -> usize {
        self.simplices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.dim())
    }
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn of_dim(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |s| s.dim() == k)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.of_dim(0).map(|s| s.vertices()[0]).collect()
    }

    /// Simplices not contained in a larger one.
    pub fn maximal(&self) -> Vec<Simplex> {
        let mut covered = std::collections::HashSet::new();
        for s in &self.simplices {
            for f in s.facets() {
                covered.insert(f);
            }
        }
        self.simplices.iter().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.dim() % 2 == 0 { 1 } else { -1 }).sum()
    }

    pub fn filter<F: Fn(&Simplex) -> bool>(&self, keep: F) -> Self {
        Self::from_set(self.simplices.iter().filter(|s| keep(s)).cloned().collect())
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.iter().all(|s| other.contains(s))
    }

    pub fn is_face_closed(&self) -> bool {
        self.simplices.iter().all(|s| s.facets().iter().all(|f| self.contains(f)))
    }

    pub fn difference(&self, other: &SimplicialComplex) -> Vec<Simplex> {
        self.simplices.iter().filter(|s| !other.contains(s)).cloned().collect()
    }

    pub fn rebuild_index(&mut self) {
        self.index = self.simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_invariants() {
        assert_eq!(Simplex::new(vec![2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert_eq!(Simplex::from_sorted(vec![0, 1, 2]).faces().len(), 7);
    }

    #[test]
    fn closure_of_tetrahedron() {
        let k = SimplicialComplex::full_simplex(4);
        assert_eq!(k.len(), 15);
        assert_eq!(k.euler_characteristic(), 1);
        assert!(k.is_face_closed());
        assert_eq!(k.maximal(), vec![Simplex::from_sorted(vec![0, 1, 2, 3])]);
    }

    #[test]
    fn rejects_open_sets() {
        assert!(SimplicialComplex::from_simplices([Simplex::from_sorted(vec![0, 1])]).is_err());
    }
}
