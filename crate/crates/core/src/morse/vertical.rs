//! Upper and lower faces and the vertical gradient Σ of an elementary
//! refinement.

use serde::Serialize;

use crate::cloud::{canonicalize, chromatic_lift, is_refinement, num_colours, ChromaticPointCloud};
use crate::delaunay::{chromatic_delaunay, delaunay_triangulation_capped, DEFAULT_MAX_DIM};
use crate::error::{Error, Result};
use crate::geometry::{circumsphere_through, dot, norm2, sub};
use crate::simplex::{Simplex, SimplicialComplex};

use super::{check_acyclicity, quotient_edges, Interval, VectorField};

/// Facets of a full-dimensional simplex sorted by the sign of their outward
/// normal against a direction z. Indices are local (positions in the input).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceClassification {
    /// `upper[x]`: the facet opposite vertex x is upper.
    pub upper: Vec<bool>,
    /// Minimal upper face σ*.
    pub sigma_upper: Vec<usize>,
    /// Minimal lower face σ_*.
    pub sigma_lower: Vec<usize>,
}

impl FaceClassification {
    /// A face is upper iff every facet containing it is upper.
    pub fn is_upper(&self, face: &[usize]) -> bool {
        (0..self.upper.len()).all(|x| face.contains(&x) || self.upper[x])
    }
    pub fn is_lower(&self, face: &[usize]) -> bool {
        (0..self.upper.len()).all(|x| face.contains(&x) || !self.upper[x])
    }
}

/// Outward normal of the facet opposite `x`.
fn outward_normal(coords: &[&[f64]], x: usize) -> Vec<f64> {
    let facet: Vec<&[f64]> = coords.iter().enumerate().filter(|&(i, _)| i != x).map(|(_, p)| *p).collect();
    let o = facet[0];
    let mut basis: Vec<Vec<f64>> = vec![];
    for p in &facet[1..] {
        let mut v = sub(p, o);
        for q in &basis {
            let c = dot(&v, q);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let n = norm2(&v).sqrt();
        if n > 0.0 {
            basis.push(v.into_iter().map(|a| a / n).collect());
        }
    }
    let mut r = sub(coords[x], o);
    for q in &basis {
        let c = dot(&r, q);
        r.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
    }
    r.into_iter().map(|a| -a).collect()
}

/// Classify the facets of a full-dimensional simplex (m+2 points in R^{m+1}).
pub fn upper_lower_faces(coords: &[Vec<f64>], z: &[f64]) -> Result<FaceClassification> {
    let n = coords.len();
    if n < 2 || coords.iter().any(|p| p.len() != n - 1) || z.len() != n - 1 {
        return Err(Error::DimensionMismatch(format!("need {n} points in R^{}", n.saturating_sub(1))));
    }
    let refs: Vec<&[f64]> = coords.iter().map(|p| p.as_slice()).collect();
    let zn = norm2(z).sqrt();
    let mut upper = Vec::with_capacity(n);
    for x in 0..n {
        let w = outward_normal(&refs, x);
        let wn = norm2(&w).sqrt();
        if wn == 0.0 || zn == 0.0 {
            return Err(Error::DegenerateInput("simplex is not full-dimensional".into()));
        }
        let c = dot(&w, z) / (wn * zn);
        if c.abs() < 1e-9 {
            return Err(Error::NotTransverse);
        }
        upper.push(c > 0.0);
    }
    let sigma_upper = (0..n).filter(|&x| !upper[x]).collect();
    let sigma_lower = (0..n).filter(|&x| upper[x]).collect();
    Ok(FaceClassification { upper, sigma_upper, sigma_lower })
}

#[derive(Debug, Clone, Serialize)]
pub struct TopSimplex {
    pub simplex: Simplex,
    /// Height of the circumcentre along the new colour direction.
    pub height: f64,
    pub above: bool,
    /// The facet classification failed (vertical facet) and the interval
    /// came from the local chromatic Delaunay complex instead.
    pub combinatorial: bool,
}

/// Σ for an elementary refinement mu -> nu, realized on (X^mu, ζ).
#[derive(Debug, Clone)]
pub struct VerticalGradient {
    pub realization: Vec<Vec<f64>>,
    /// Del(X, nu) as triangulated in the realization.
    pub complex: SimplicialComplex,
    /// Del(X, mu).
    pub membrane: SimplicialComplex,
    pub field: VectorField,
    pub tops: Vec<TopSimplex>,
    /// Dimension of the realization.
    pub ambient: usize,
}

/// The mu-class split by nu and the indicator ζ of the part not holding
/// the class's first point.
fn split_indicator(mu: &[usize], nu: &[usize]) -> Result<Vec<f64>> {
    if !is_refinement(nu, mu)? || num_colours(nu) != num_colours(mu) + 1 {
        return Err(Error::NotRefinement("nu is not an elementary refinement of mu".into()));
    }
    let n = mu.len();
    let first = (0..n)
        .find(|&i| (0..n).any(|j| mu[j] == mu[i] && nu[j] != nu[i]))
        .expect("an elementary refinement splits one class");
    Ok((0..n).map(|j| if mu[j] == mu[first] && nu[j] != nu[first] { 1.0 } else { 0.0 }).collect())
}

/// Faces of `sigma` missing from the chromatic Delaunay complex of its own
/// vertices under mu; these form the interval of sigma.
fn combinatorial_interval(cloud: &ChromaticPointCloud, mu: &[usize], sigma: &Simplex) -> Result<Interval> {
    let sv = sigma.vertices();
    let pts: Vec<Vec<f64>> = sv.iter().map(|&v| cloud.point(v).to_vec()).collect();
    let cols = canonicalize(&sv.iter().map(|&v| mu[v]).collect::<Vec<_>>());
    let local_cloud = ChromaticPointCloud::new(pts, cols.clone())?;
    let local = chromatic_delaunay(&local_cloud, &cols)?;
    let missing: Vec<Simplex> = sigma
        .faces()
        .into_iter()
        .filter(|f| {
            let loc: Vec<usize> = f.vertices().iter().map(|v| sv.binary_search(v).unwrap()).collect();
            !local.complex.contains(&Simplex::from_sorted(loc))
        })
        .collect();
    let bottom = missing
        .iter()
        .skip(1)
        .fold(missing.first().cloned(), |acc, f| acc.and_then(|a| a.intersection(f)))
        .ok_or_else(|| Error::PartitionFailure(format!("{sigma:?} has no faces outside the local complex")))?;
    let iv = Interval::new(bottom, sigma.clone())?;
    if iv.len() != missing.len() {
        return Err(Error::PartitionFailure(format!("faces of {sigma:?} outside the local complex are not an interval")));
    }
    Ok(iv)
}

pub fn vertical_gradient(cloud: &ChromaticPointCloud, mu: &[usize], nu: &[usize]) -> Result<VerticalGradient> {
    crate::cloud::check_colouring(cloud, mu)?;
    crate::cloud::check_colouring(cloud, nu)?;
    let zeta = split_indicator(mu, nu)?;
    let mut y = chromatic_lift(cloud, mu);
    for (p, z) in y.iter_mut().zip(&zeta) {
        p.push(*z);
    }
    let ambient = cloud.d() + num_colours(mu);
    let tri = delaunay_triangulation_capped(&y, DEFAULT_MAX_DIM.max(ambient))?;
    let membrane = chromatic_delaunay(cloud, mu)?.complex;
    let mut intervals = vec![];
    let mut tops = vec![];
    if tri.top_dimension == ambient {
        let mut zdir = vec![0.0; ambient];
        zdir[ambient - 1] = 1.0;
        for sigma in &tri.maximal {
            let coords: Vec<Vec<f64>> = sigma.vertices().iter().map(|&v| y[v].clone()).collect();
            let refs: Vec<&[f64]> = coords.iter().map(|p| p.as_slice()).collect();
            let (centre, _) = circumsphere_through(&refs)?;
            let height = centre[ambient - 1];
            let above = height > 0.5;
            let geometric = if (height - 0.5).abs() > 1e-12 { upper_lower_faces(&coords, &zdir) } else { Err(Error::NotTransverse) };
            let (iv, combinatorial) = match geometric {
                Ok(fc) => {
                    let local = if above { &fc.sigma_upper } else { &fc.sigma_lower };
                    if local.is_empty() {
                        return Err(Error::DegenerateInput(format!("{sigma:?} has no minimal face")));
                    }
                    let bottom = Simplex::from_sorted(local.iter().map(|&i| sigma.vertices()[i]).collect());
                    (Interval::new(bottom, sigma.clone())?, false)
                }
                Err(Error::NotTransverse) => (combinatorial_interval(cloud, mu, sigma)?, true),
                Err(e) => return Err(e),
            };
            intervals.push(iv);
            tops.push(TopSimplex { simplex: sigma.clone(), height, above, combinatorial });
        }
    }
    let covered = VectorField::new(intervals.clone())?;
    intervals.extend(tri.complex.iter().filter(|s| !covered.covers(s)).cloned().map(Interval::singleton));
    let field = VectorField::on_complex(&tri.complex, intervals)?;
    Ok(VerticalGradient { realization: y, complex: tri.complex, membrane, field, tops, ambient })
}

impl VerticalGradient {
    /// (h(C) - 1/2)^2 + ambient on the class of a top simplex, dim(tau) on
    /// a singleton.
    pub fn morse_value(&self, class: usize) -> f64 {
        let iv = &self.field.intervals()[class];
        if iv.is_singleton() && iv.top.dim() < self.ambient {
            return iv.top.dim() as f64;
        }
        let t = self.tops.iter().find(|t| t.simplex == iv.top).expect("non-singleton classes come from top simplices");
        (t.height - 0.5).powi(2) + self.ambient as f64
    }

    /// Does the Morse value drop strictly along every quotient edge?
    pub fn heights_decrease(&self) -> Result<bool> {
        Ok(quotient_edges(&self.complex, &self.field)?.iter().all(|&(a, b)| self.morse_value(a) > self.morse_value(b)))
    }

    /// Crit(Σ) = Del(X, mu) and Σ is acyclic.
    pub fn verify(&self) -> Result<()> {
        let crit = self.field.critical();
        if crit.len() != self.membrane.len() || !crit.iter().all(|s| self.membrane.contains(s)) {
            let extra = crit.iter().find(|s| !self.membrane.contains(s));
            let missing = self.membrane.iter().find(|s| !crit.contains(s));
            return Err(Error::Falsified(format!(
                "critical simplices differ from Del(X, mu): extra {extra:?}, missing {missing:?}"
            )));
        }
        if !check_acyclicity(&self.complex, &self.field)? {
            return Err(Error::Falsified("vertical gradient has a closed path".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn figure_five_triangle() {
        let fc = upper_lower_faces(&[vec![2.0, 2.0], vec![0.0, 0.0], vec![3.0, 0.0]], &[0.0, 1.0]).unwrap();
        assert_eq!(fc.upper, vec![false, true, true]);
        assert_eq!(fc.sigma_upper, vec![0]);
        assert_eq!(fc.sigma_lower, vec![1, 2]);
        assert!(fc.is_upper(&[0]) && fc.is_upper(&[0, 1]) && fc.is_upper(&[0, 2]));
        assert!(!fc.is_upper(&[1]));
        let flipped = upper_lower_faces(&[vec![2.0, 2.0], vec![0.0, 0.0], vec![3.0, 0.0]], &[0.0, -1.0]).unwrap();
        assert_eq!(flipped.sigma_upper, fc.sigma_lower);
    }

    #[test]
    fn vertical_facet_is_rejected() {
        let e = upper_lower_faces(&[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]], &[0.0, 1.0]).unwrap_err();
        assert_eq!(e, Error::NotTransverse);
    }

    #[test]
    fn three_points_on_a_line() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let g = vertical_gradient(&c, &[0, 0, 0], &[0, 1, 0]).unwrap();
        assert_eq!(g.tops.len(), 1);
        assert!(!g.tops[0].above);
        let nontrivial: Vec<&Interval> = g.field.intervals().iter().filter(|i| !i.is_singleton()).collect();
        assert_eq!(nontrivial, vec![&Interval::new(s(&[0, 2]), s(&[0, 1, 2])).unwrap()]);
        g.verify().unwrap();
        assert!(g.heights_decrease().unwrap());
    }

    #[test]
    fn too_few_points_is_all_critical() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let g = vertical_gradient(&c, &[0, 0], &[0, 1]).unwrap();
        assert!(g.field.intervals().iter().all(|i| i.is_singleton()));
        g.verify().unwrap();
    }
}
