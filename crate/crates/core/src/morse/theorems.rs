//! Constructive verification of the collapse theorems: for every critical
//! radius, build the gradient, check it covers the set difference with
//! non-critical intervals, and run the collapse.

use serde::Serialize;

use crate::cloud::{canonicalize, elementary_chain, maximal_colouring, ChromaticPointCloud};
use crate::error::{Error, Result};
use crate::filtration::{chromatic_alpha_filtration, selective_filtration, FilteredComplex};
use crate::par;
use crate::simplex::SimplicialComplex;

use super::selective::filtration_gradient;
use super::vertical::{vertical_gradient, VerticalGradient};
use super::{execute_collapse, restrict_gradient, sum_refine, VectorField};

#[derive(Debug, Clone, Serialize)]
pub struct CollapseCheck {
    /// "A" for DelČech_r(X, c_i) ↘ DelČech_r(X, c_{i-1}) along mu ⪯ nu,
    /// "B1" for the same along mu ⪯ maximal, "B2" for DelČech_r ↘ Alpha_r.
    pub theorem: &'static str,
    pub step: usize,
    pub r: f64,
    pub source_size: usize,
    pub target_size: usize,
    pub collapses: usize,
    pub ok: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollapseReport {
    pub radii: Vec<f64>,
    pub checks: Vec<CollapseCheck>,
}

impl CollapseReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
    pub fn failures(&self) -> impl Iterator<Item = &CollapseCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

fn intersect(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    a.filter(|s| b.contains(s))
}

/// Distinct values of both filtrations, merged within 1e-12 relative (a
/// cluster is represented by its largest member), their midpoints, and ∞.
pub fn critical_radii(cech: &FilteredComplex, alpha: &FilteredComplex) -> Vec<f64> {
    let mut v: Vec<f64> = cech.distinct_values();
    v.extend(alpha.distinct_values());
    v.sort_by(f64::total_cmp);
    let mut reps: Vec<f64> = vec![];
    for x in v {
        match reps.last_mut() {
            Some(last) if x - *last <= 1e-12 * x.abs().max(1.0) => *last = x,
            _ => reps.push(x),
        }
    }
    let mut out = vec![];
    for (i, &x) in reps.iter().enumerate() {
        out.push(x);
        if let Some(&y) = reps.get(i + 1) {
            out.push((x + y) / 2.0);
        }
    }
    out.push(f64::INFINITY);
    out
}

fn run(theorem: &'static str, step: usize, r: f64, k: &SimplicialComplex, l: &SimplicialComplex, v: Result<VectorField>) -> CollapseCheck {
    let outcome = v.and_then(|v| execute_collapse(k, &v, l));
    let (ok, collapses, error) = match outcome {
        Ok(t) => (true, t.len(), None),
        Err(e) => (false, 0, Some(e.to_string())),
    };
    CollapseCheck { theorem, step, r, source_size: k.len(), target_size: l.len(), collapses, ok, error }
}

fn chain_gradients(cloud: &ChromaticPointCloud, mu: &[usize], nu: &[usize]) -> Result<Vec<VerticalGradient>> {
    let chain = elementary_chain(mu, nu)?;
    let grads: Vec<VerticalGradient> =
        chain.windows(2).map(|w| vertical_gradient(cloud, &w[0], &w[1])).collect::<Result<_>>()?;
    // consecutive steps must agree on the shared complex Del(X, c_i)
    for w in grads.windows(2) {
        if w[0].complex != w[1].membrane {
            return Err(Error::Falsified("two realizations of the same chromatic Delaunay complex disagree".into()));
        }
    }
    Ok(grads)
}

/// Theorem A along mu ⪯ nu and Theorem B (via the maximal colouring and Ω)
/// at each radius; all critical radii when `radii` is None.
pub fn verify_collapse_theorems(
    cloud: &ChromaticPointCloud,
    mu: &[usize],
    nu: &[usize],
    radii: Option<&[f64]>,
) -> Result<CollapseReport> {
    crate::cloud::check_colouring(cloud, mu)?;
    crate::cloud::check_colouring(cloud, nu)?;
    let mu = canonicalize(mu);
    let nu = canonicalize(nu);
    let all: Vec<usize> = (0..cloud.len()).collect();
    let cech_sel = selective_filtration(cloud, &mu, &[], None)?;
    let w_cech = filtration_gradient(cloud, &mu, &cech_sel)?;
    let alpha_sel = selective_filtration(cloud, &mu, &all, None)?;
    let w_alpha = filtration_gradient(cloud, &mu, &alpha_sel)?;
    let alpha = chromatic_alpha_filtration(cloud, &mu)?;
    let cech = &cech_sel.filtered;
    let omega = sum_refine(&w_cech.field, &w_alpha.field);

    let grads_a = chain_gradients(cloud, &mu, &nu)?;
    let grads_b = chain_gradients(cloud, &mu, &maximal_colouring(cloud.len()))?;
    let del_mu = match grads_b.first() {
        Some(g) => g.membrane.clone(),
        None => crate::delaunay::chromatic_delaunay(cloud, &mu)?.complex,
    };

    let radii: Vec<f64> = match radii {
        Some(r) => r.to_vec(),
        None => critical_radii(cech, &alpha),
    };
    let per_r = par::map(&radii, |&r| {
        let cech_r = cech.sublevel(r);
        let mut out = vec![];
        let w_r = restrict_gradient(&w_cech.field, &cech_r);
        for (tag, grads) in [("A", &grads_a), ("B1", &grads_b)] {
            for (i, g) in grads.iter().enumerate() {
                let k = intersect(&cech_r, &g.complex);
                let l = intersect(&cech_r, &g.membrane);
                let lambda = w_r.clone().and_then(|w| sum_refine(&w, &g.field));
                out.push(run(tag, i + 1, r, &k, &l, lambda));
            }
        }
        let k = intersect(&cech_r, &del_mu);
        let l = alpha.sublevel(r);
        let omega_r = omega.clone().and_then(|o| restrict_gradient(&o, &k));
        let mut b2 = run("B2", 1, r, &k, &l, omega_r);
        if b2.ok && !l.is_subcomplex_of(&k) {
            b2.ok = false;
            b2.error = Some("Alpha_r is not contained in DelČech_r".into());
        }
        out.push(b2);
        out
    });
    Ok(CollapseReport { radii, checks: per_r.into_iter().flatten().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_ten() {
        let c = ChromaticPointCloud::mono(vec![vec![3.0, 1.0], vec![2.0, -2.0], vec![2.0, 3.0], vec![1.0, 4.0]]).unwrap();
        let rep = verify_collapse_theorems(&c, &[0, 0, 0, 0], &[0, 0, 0, 1], None).unwrap();
        for f in rep.failures() {
            eprintln!("{f:?}");
        }
        assert!(rep.all_ok());
        let inf = rep.checks.iter().find(|c| c.theorem == "A" && c.r.is_infinite()).unwrap();
        assert_eq!(inf.source_size, 15);
        // Δ³ minus two triangles, five edges and four vertices
        assert_eq!(inf.target_size, 11);
        assert_eq!(inf.collapses, 2);
        let del = crate::delaunay::chromatic_delaunay(&c, &[0, 0, 0, 0]).unwrap();
        assert!(del.complex.contains(&crate::simplex::Simplex::from_sorted(vec![1, 3])));
    }

    #[test]
    fn identical_colourings_need_no_collapse() {
        let c = ChromaticPointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.1], vec![0.3, 0.9]], vec![0, 1, 0]).unwrap();
        let rep = verify_collapse_theorems(&c, &[0, 1, 0], &[0, 1, 0], None).unwrap();
        assert!(rep.all_ok());
        assert!(rep.checks.iter().all(|c| c.theorem != "A"));
    }
}
