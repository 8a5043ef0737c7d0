//! Coloured point clouds, chromatic lifts and refinements.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points in R^d with a surjective colouring onto `0..=s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChromaticPointCloud {
    points: Vec<Vec<f64>>,
    colours: Vec<usize>,
    d: usize,
    s: usize,
}

impl ChromaticPointCloud {
    /// Validate and canonicalize; same as [`validate_chromatic_set`].
    pub fn new(points: Vec<Vec<f64>>, colours: Vec<usize>) -> Result<Self> {
        validate_chromatic_set(points, colours)
    }

    /// Monochromatic cloud.
    pub fn mono(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        validate_chromatic_set(points, vec![0; n])
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }
    pub fn colours(&self) -> &[usize] {
        &self.colours
    }
    pub fn d(&self) -> usize {
        self.d
    }
    /// Largest colour label; there are `s + 1` colours.
    pub fn s(&self) -> usize {
        self.s
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same points, another colouring (canonicalized).
    pub fn recoloured(&self, mu: &[usize]) -> Result<Self> {
        check_colouring(self, mu)?;
        Ok(Self {
            points: self.points.clone(),
            colours: canonicalize(mu),
            d: self.d,
            s: num_colours(mu) - 1,
        })
    }

    /// Diameter of the bounding box, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        crate::geometry::bbox_diameter(self.points.iter().map(|p| p.as_slice()))
    }

    /// Points of colour `m` under `mu`.
    pub fn class(&self, mu: &[usize], m: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| mu[i] == m).collect()
    }
}

/// Build a cloud: rows must share a dimension, points must be distinct.
/// Colours are relabelled `0..=s` by first appearance.
pub fn validate_chromatic_set(points: Vec<Vec<f64>>, colours: Vec<usize>) -> Result<ChromaticPointCloud> {
    if colours.is_empty() || points.is_empty() {
        return Err(Error::NonSurjectiveColouring);
    }
    if colours.len() != points.len() {
        return Err(Error::LengthMismatch { expected: points.len(), got: colours.len() });
    }
    let d = points[0].len();
    if d == 0 {
        return Err(Error::DimensionMismatch("points must have dimension at least 1".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::DimensionMismatch(format!("row {i} has {} coordinates, expected {d}", p.len())));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("row {i} has a non-finite coordinate")));
        }
    }
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        // +0.0 and -0.0 are the same point
        let key: Vec<u64> = p.iter().map(|x| (x + 0.0).to_bits()).collect();
        if let Some(&j) = seen.get(&key) {
            return Err(Error::DuplicatePoint(j, i));
        }
        seen.insert(key, i);
    }
    let colours = canonicalize(&colours);
    let s = colours.iter().copied().max().unwrap_or(0);
    Ok(ChromaticPointCloud { points, colours, d, s })
}

/// Relabel colours to `0..k` in order of first appearance.
pub fn canonicalize(mu: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    mu.iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

pub fn num_colours(mu: &[usize]) -> usize {
    let mut v = mu.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

pub fn check_colouring(cloud: &ChromaticPointCloud, mu: &[usize]) -> Result<()> {
    if mu.len() != cloud.len() {
        return Err(Error::LengthMismatch { expected: cloud.len(), got: mu.len() });
    }
    Ok(())
}

/// Colour vertex e_m in R^s: e_0 = 0, e_m the m-th standard basis vector.
pub fn colour_vertex(m: usize, s: usize) -> Vec<f64> {
    let mut e = vec![0.0; s];
    if m > 0 {
        e[m - 1] = 1.0;
    }
    e
}

/// The chromatic lift X^mu in R^{d+s}; `mu` is canonicalized first.
pub fn chromatic_lift(cloud: &ChromaticPointCloud, mu: &[usize]) -> Vec<Vec<f64>> {
    let mu = canonicalize(mu);
    let s = num_colours(&mu) - 1;
    cloud
        .points()
        .iter()
        .zip(&mu)
        .map(|(p, &m)| {
            let mut q = p.clone();
            q.extend(colour_vertex(m, s));
            q
        })
        .collect()
}

/// True iff every mu-class is a union of nu-classes.
pub fn is_refinement(nu: &[usize], mu: &[usize]) -> Result<bool> {
    if nu.len() != mu.len() {
        return Err(Error::LengthMismatch { expected: mu.len(), got: nu.len() });
    }
    let mut parent: HashMap<usize, usize> = HashMap::new();
    for (&a, &b) in nu.iter().zip(mu) {
        match parent.get(&a) {
            Some(&p) if p != b => return Ok(false),
            _ => {
                parent.insert(a, b);
            }
        }
    }
    Ok(true)
}

/// Every point gets its own colour.
pub fn maximal_colouring(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// A chain mu = c_0, c_1, ..., c_k = nu where each step splits one class in two.
/// Requires nu to refine mu.
pub fn elementary_chain(mu: &[usize], nu: &[usize]) -> Result<Vec<Vec<usize>>> {
    if !is_refinement(nu, mu)? {
        return Err(Error::NotRefinement("nu does not refine mu".into()));
    }
    let mut chain = vec![canonicalize(mu)];
    loop {
        let cur = chain.last().unwrap().clone();
        // find a class of cur containing points from more than one nu-class
        let mut split = None;
        'outer: for i in 0..cur.len() {
            for j in i + 1..cur.len() {
                if cur[i] == cur[j] && nu[i] != nu[j] {
                    split = Some(j);
                    break 'outer;
                }
            }
        }
        let Some(j) = split else { break };
        let fresh = num_colours(&cur);
        let next: Vec<usize> = (0..cur.len())
            .map(|k| if cur[k] == cur[j] && nu[k] == nu[j] { fresh } else { cur[k] })
            .collect();
        chain.push(canonicalize(&next));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let c = ChromaticPointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![0, 2]).unwrap();
        assert_eq!(c.colours(), &[0, 1]);
        assert_eq!(c.s(), 1);
        assert_eq!(c.d(), 2);
    }

    #[test]
    fn duplicates_rejected() {
        let e = ChromaticPointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![0, 0]).unwrap_err();
        assert_eq!(e, Error::DuplicatePoint(0, 1));
    }

    #[test]
    fn ragged_rows() {
        let e = ChromaticPointCloud::new(vec![vec![0.0, 0.0], vec![0.0]], vec![0, 0]).unwrap_err();
        assert_eq!(e.kind(), "DimensionMismatch");
    }

    #[test]
    fn lift_examples() {
        let c = ChromaticPointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![0, 1]).unwrap();
        assert_eq!(chromatic_lift(&c, c.colours()), vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 1.0]]);
        let c = ChromaticPointCloud::new(vec![vec![2.0], vec![5.0], vec![7.0]], vec![0, 1, 2]).unwrap();
        assert_eq!(
            chromatic_lift(&c, c.colours()),
            vec![vec![2.0, 0.0, 0.0], vec![5.0, 1.0, 0.0], vec![7.0, 0.0, 1.0]]
        );
        let c = ChromaticPointCloud::mono(vec![vec![2.0], vec![5.0]]).unwrap();
        assert_eq!(chromatic_lift(&c, c.colours()), vec![vec![2.0], vec![5.0]]);
    }

    #[test]
    fn refinement_basics() {
        let mu = vec![0, 0, 1, 1];
        assert!(is_refinement(&maximal_colouring(4), &mu).unwrap());
        assert!(is_refinement(&mu, &mu).unwrap());
        assert!(!is_refinement(&[0, 0, 0, 0], &mu).unwrap());
        assert!(is_refinement(&[0], &mu).is_err());
    }

    #[test]
    fn chain_to_maximal() {
        let chain = elementary_chain(&[0, 0, 0, 1], &maximal_colouring(4)).unwrap();
        assert_eq!(chain.len(), 3);
        for w in chain.windows(2) {
            assert!(is_refinement(&w[1], &w[0]).unwrap());
            assert_eq!(num_colours(&w[1]), num_colours(&w[0]) + 1);
        }
    }
}
