//! Minimum-radius stacks S(sigma, mu; E), their KKT certificates, the
//! extension S*, and the stack/sphere correspondence of the chromatic lift.
//!
//! A stack is determined by its centre z. Writing u_m = r_m^2 - |z|^2, the
//! conditions "sigma inside" and "E outside" are linear in (z, u), so
//! S(sigma, mu; E) minimises max_{v in sigma} |v - z|^2 over the polyhedron
//!   { z : 2 z.(e - v) <= |e|^2 - |v|^2  for v in sigma_m, e in E_m }.
//! We solve it by enumerating (on-sphere set, outer colours) candidates,
//! each a square linear system, and keep the one whose KKT conditions hold.

use std::collections::{BTreeMap, BTreeSet};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cloud::{colour_vertex, ChromaticPointCloud};
use crate::delaunay::for_each_subset;
use crate::error::{Error, Result};
use crate::geometry::{bbox_diameter, circumsphere_with_coeffs, dist, dist2, norm2, solve, sub};
use crate::simplex::Simplex;

/// Tolerance used when verifying certificates, relative to the problem scale.
pub const KKT_TOL: f64 = 1e-7;
/// Tolerance for Out(S), relative to Rad(S).
pub const OUT_TOL: f64 = 1e-9;

/// Concentric spheres indexed by colour.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stack {
    pub centre: Vec<f64>,
    pub radii: BTreeMap<usize, f64>,
}

impl Stack {
    pub fn rad(&self) -> f64 {
        self.radii.values().copied().fold(0.0, f64::max)
    }

    /// Colours whose sphere has the maximal radius.
    pub fn out(&self) -> BTreeSet<usize> {
        let rad = self.rad();
        self.radii.iter().filter(|(_, &r)| r >= rad - OUT_TOL * rad).map(|(&m, _)| m).collect()
    }

    pub fn radius(&self, m: usize) -> Option<f64> {
        self.radii.get(&m).copied()
    }

    /// Point of colour `m` on or inside its sphere (false if colour absent).
    pub fn includes(&self, p: &[f64], m: usize, tol: f64) -> bool {
        self.radius(m).is_some_and(|r| dist(p, &self.centre) <= r + tol)
    }

    pub fn excludes(&self, p: &[f64], m: usize, tol: f64) -> bool {
        self.radius(m).is_none_or(|r| dist(p, &self.centre) >= r - tol)
    }

    pub fn on(&self, p: &[f64], m: usize, tol: f64) -> bool {
        self.radius(m).is_some_and(|r| (dist(p, &self.centre) - r).abs() <= tol)
    }
}

/// Lagrange multipliers on the on-sphere points.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct KktCertificate {
    pub lambda: BTreeMap<usize, f64>,
}

impl KktCertificate {
    pub fn front(&self) -> Vec<usize> {
        self.lambda.iter().filter(|(_, &l)| l > KKT_TOL).map(|(&v, _)| v).collect()
    }
    pub fn back(&self) -> Vec<usize> {
        self.lambda.iter().filter(|(_, &l)| l < -KKT_TOL).map(|(&v, _)| v).collect()
    }
}

/// Conditions checked by [`kkt_violations`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KktCondition {
    Stationarity,
    SupportOnSpheres,
    FrontInSigma,
    BackInE,
    NonOuterSum,
    OuterSign,
    UnitSum,
    Inclusion,
    Exclusion,
}

fn gamma_of(mu: &[usize], sigma: &Simplex) -> BTreeSet<usize> {
    sigma.vertices().iter().map(|&v| mu[v]).collect()
}

fn relevant_e(mu: &[usize], gamma: &BTreeSet<usize>, e: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = e.iter().copied().filter(|&x| gamma.contains(&mu[x])).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn problem_scale(cloud: &ChromaticPointCloud, idx: impl Iterator<Item = usize>) -> f64 {
    let s = bbox_diameter(idx.map(|i| cloud.point(i)));
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// S(sigma, mu; E) with a verified certificate.
pub fn min_stack(cloud: &ChromaticPointCloud, mu: &[usize], sigma: &Simplex, e: &[usize]) -> Result<(Stack, KktCertificate)> {
    crate::cloud::check_colouring(cloud, mu)?;
    if sigma.vertices().iter().chain(e).any(|&v| v >= cloud.len()) {
        return Err(Error::InvalidInput("vertex index out of range".into()));
    }
    let gamma = gamma_of(mu, sigma);
    let eg = relevant_e(mu, &gamma, e);
    if eg.is_empty() {
        let pts: Vec<&[f64]> = sigma.vertices().iter().map(|&v| cloud.point(v)).collect();
        let (c, r, cert) = meb_with_certificate(&pts, sigma.vertices())?;
        let radii = gamma.iter().map(|&m| (m, r)).collect();
        return Ok((Stack { centre: c, radii }, cert));
    }
    let sv = sigma.vertices();
    let forced: Vec<usize> = sv.iter().copied().filter(|v| eg.binary_search(v).is_ok()).collect();
    if forced.len() > cloud.d() + gamma.len() {
        return Err(Error::NoStack);
    }
    let scale = problem_scale(cloud, sv.iter().chain(&eg).copied());
    let origin = cloud.point(sv[0]).to_vec();
    let norm = |i: usize| -> Vec<f64> { sub(cloud.point(i), &origin).into_iter().map(|x| x / scale).collect() };
    let np: BTreeMap<usize, Vec<f64>> = sv.iter().chain(&eg).map(|&i| (i, norm(i))).collect();
    let prob = Restricted { np: &np, mu, sigma: sv, d: cloud.d() };

    let mut work: Vec<usize> = forced.clone();
    loop {
        let Some(cand) = prob.solve(&work, &forced) else {
            return Err(prob.classify_infeasible(&work));
        };
        // most violated excluded point outside the working set
        let mut worst: Option<(usize, f64)> = None;
        for &x in &eg {
            if work.contains(&x) {
                continue;
            }
            let m = mu[x];
            let need = sv.iter().filter(|&&v| mu[v] == m).map(|&v| dist(&np[&v], &cand.z)).fold(0.0, f64::max);
            let gap = need - dist(&np[&x], &cand.z);
            if gap > 1e-10 && worst.is_none_or(|(_, g)| gap > g) {
                worst = Some((x, gap));
            }
        }
        match worst {
            Some((x, _)) => work.push(x),
            None => return Ok(prob.finalize(cand, &eg, &origin, scale)),
        }
    }
}

struct Candidate {
    z: Vec<f64>,
    rad: f64,
    lambda: BTreeMap<usize, f64>,
}

/// The problem restricted to sigma and a working set of excluded points,
/// in normalized coordinates.
struct Restricted<'a> {
    np: &'a BTreeMap<usize, Vec<f64>>,
    mu: &'a [usize],
    sigma: &'a [usize],
    d: usize,
}

impl Restricted<'_> {
    fn solve(&self, work: &[usize], forced: &[usize]) -> Option<Candidate> {
        let gamma: BTreeSet<usize> = self.sigma.iter().map(|&v| self.mu[v]).collect();
        let free: Vec<usize> = self
            .sigma
            .iter()
            .chain(work)
            .copied()
            .filter(|v| !forced.contains(v))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let max_on = self.d + gamma.len();
        for extra in 0..=max_on.saturating_sub(forced.len()).min(free.len()) {
            let mut found = None;
            for_each_subset(&free, extra, &mut |a| {
                if found.is_some() {
                    return;
                }
                let mut on: Vec<usize> = forced.to_vec();
                on.extend_from_slice(a);
                if on.is_empty() {
                    return;
                }
                let cols: Vec<usize> = on.iter().map(|&v| self.mu[v]).collect::<BTreeSet<_>>().into_iter().collect();
                for mask in 1u32..(1 << cols.len()) {
                    let outer: BTreeSet<usize> = (0..cols.len()).filter(|i| mask >> i & 1 == 1).map(|i| cols[i]).collect();
                    if let Some(c) = self.try_candidate(&on, &outer, work) {
                        found = Some(c);
                        return;
                    }
                }
            });
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn try_candidate(&self, on: &[usize], outer: &BTreeSet<usize>, work: &[usize]) -> Option<Candidate> {
        let d = self.d;
        let mut nonout: Vec<usize> = on.iter().map(|&v| self.mu[v]).filter(|m| !outer.contains(m)).collect();
        nonout.sort_unstable();
        nonout.dedup();
        let k = on.len();
        let nvar = d + 1 + nonout.len() + k;
        let lam0 = d + 1 + nonout.len();
        let uidx = |m: usize| d + 1 + nonout.binary_search(&m).unwrap();
        let mut a = DMatrix::zeros(nvar, nvar);
        let mut b = DVector::zeros(nvar);
        let mut row = 0;
        for &v in on {
            let p = &self.np[&v];
            for j in 0..d {
                a[(row, j)] = -2.0 * p[j];
            }
            let m = self.mu[v];
            let col = if outer.contains(&m) { d } else { uidx(m) };
            a[(row, col)] = -1.0;
            b[row] = -norm2(p);
            row += 1;
        }
        for j in 0..d {
            a[(row, j)] = 1.0;
            for (i, &v) in on.iter().enumerate() {
                a[(row, lam0 + i)] = -self.np[&v][j];
            }
            row += 1;
        }
        for &m in &nonout {
            for (i, &v) in on.iter().enumerate() {
                if self.mu[v] == m {
                    a[(row, lam0 + i)] = 1.0;
                }
            }
            row += 1;
        }
        for (i, &v) in on.iter().enumerate() {
            if outer.contains(&self.mu[v]) {
                a[(row, lam0 + i)] = 1.0;
            }
        }
        b[row] = 1.0;
        let x = solve(a, b)?;
        let z: Vec<f64> = (0..d).map(|j| x[j]).collect();
        let zz = norm2(&z);
        let rad2 = zz + x[d];
        if rad2 < -1e-12 {
            return None;
        }
        let rad = rad2.max(0.0).sqrt();
        let tol = 1e-9;
        let ltol = 1e-9;
        let in_sigma = |v: usize| self.sigma.contains(&v);
        let in_e = |v: usize| work.contains(&v);
        // multipliers
        let mut lambda = BTreeMap::new();
        for (i, &v) in on.iter().enumerate() {
            let l = x[lam0 + i];
            if (l > ltol && !in_sigma(v)) || (l < -ltol && !in_e(v)) {
                return None;
            }
            lambda.insert(v, l);
        }
        for &m in outer {
            let s: f64 = on.iter().zip(0..).filter(|(v, _)| self.mu[**v] == m).map(|(_, i)| x[lam0 + i]).sum();
            if s < -ltol {
                return None;
            }
        }
        // radii of colours carrying on-sphere points
        let mut r_of: BTreeMap<usize, f64> = BTreeMap::new();
        for &m in outer {
            r_of.insert(m, rad);
        }
        for &m in &nonout {
            let r2 = zz + x[uidx(m)];
            if r2 < -1e-12 || r2 > rad2 + 1e-9 {
                return None;
            }
            r_of.insert(m, r2.max(0.0).sqrt());
        }
        // primal feasibility on sigma and the working set
        let colours: BTreeSet<usize> = self.sigma.iter().map(|&v| self.mu[v]).collect();
        for m in colours {
            let inner = self.sigma.iter().filter(|&&v| self.mu[v] == m).map(|&v| dist(&self.np[&v], &z)).fold(0.0, f64::max);
            let outer_min = work.iter().filter(|&&v| self.mu[v] == m).map(|&v| dist(&self.np[&v], &z)).fold(f64::INFINITY, f64::min);
            match r_of.get(&m) {
                Some(&r) => {
                    if inner > r + tol || outer_min < r - tol {
                        return None;
                    }
                }
                None => {
                    if inner > rad + tol || inner > outer_min + tol {
                        return None;
                    }
                }
            }
        }
        Some(Candidate { z, rad, lambda })
    }

    /// Minimise the worst violation of the centre half-spaces; a positive
    /// optimum proves infeasibility.
    fn classify_infeasible(&self, work: &[usize]) -> Error {
        let d = self.d;
        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let zs: Vec<_> = (0..d).map(|_| lp.add_var(0.0, (-1e6, 1e6))).collect();
        let t = lp.add_var(1.0, (-1.0, f64::INFINITY));
        let mut any = false;
        for &v in self.sigma {
            for &e in work {
                if e == v || self.mu[e] != self.mu[v] {
                    continue;
                }
                let (pv, pe) = (&self.np[&v], &self.np[&e]);
                let diff = sub(pe, pv);
                let len = norm2(&diff).sqrt();
                if len == 0.0 {
                    continue;
                }
                // (e - v).z / len - t <= (|e|^2 - |v|^2) / (2 len)
                let mut coeffs: Vec<_> = zs.iter().zip(&diff).map(|(&z, &c)| (z, c / len)).collect();
                coeffs.push((t, -1.0));
                lp.add_constraint(coeffs.as_slice(), ComparisonOp::Le, (norm2(pe) - norm2(pv)) / (2.0 * len));
                any = true;
            }
        }
        if !any {
            return Error::NumericalFailure("no candidate passed verification on a feasible problem".into());
        }
        match lp.solve() {
            Ok(sol) if sol.objective() > 1e-9 => Error::NoStack,
            Ok(_) => Error::NumericalFailure("feasible region is non-empty but no candidate passed verification".into()),
            Err(e) => Error::NumericalFailure(format!("feasibility LP failed: {e}")),
        }
    }

    fn finalize(&self, cand: Candidate, eg: &[usize], origin: &[f64], scale: f64) -> (Stack, KktCertificate) {
        let gamma: BTreeSet<usize> = self.sigma.iter().map(|&v| self.mu[v]).collect();
        let mut radii = BTreeMap::new();
        for &m in &gamma {
            let near = eg.iter().filter(|&&x| self.mu[x] == m).map(|&x| dist(&self.np[&x], &cand.z)).fold(f64::INFINITY, f64::min);
            radii.insert(m, cand.rad.min(near) * scale);
        }
        let centre: Vec<f64> = cand.z.iter().zip(origin).map(|(z, o)| o + z * scale).collect();
        let stack = Stack { centre, radii };
        let tol = 1e-9 * scale;
        let mut lambda = BTreeMap::new();
        for (v, l) in cand.lambda {
            let p: Vec<f64> = self.np[&v].iter().zip(origin).map(|(x, o)| o + x * scale).collect();
            // entries with zero multiplier may leave the sphere after radii are maximised
            if l.abs() > 1e-12 || stack.on(&p, self.mu[v], tol * 10.0) {
                lambda.insert(v, l);
            }
        }
        (stack, KktCertificate { lambda })
    }
}

/// Minimum enclosing ball via Welzl's move-to-front recursion.
pub fn min_enclosing_ball(points: &[&[f64]]) -> Result<(Vec<f64>, f64)> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no points".into()));
    }
    let mut order: Vec<&[f64]> = points.to_vec();
    let d = points[0].len();
    let scale = bbox_diameter(points.iter().copied()).max(f64::MIN_POSITIVE);
    let mut boundary: Vec<&[f64]> = Vec::with_capacity(d + 1);
    let (c, r) = mtf(&mut order, points.len(), &mut boundary, d, 1e-10 * scale)?;
    Ok((c, r))
}

fn mtf<'a>(pts: &mut Vec<&'a [f64]>, end: usize, boundary: &mut Vec<&'a [f64]>, d: usize, tol: f64) -> Result<(Vec<f64>, f64)> {
    let (mut c, mut r) = if boundary.is_empty() {
        (pts[0].to_vec(), -1.0)
    } else {
        crate::geometry::circumsphere_through(boundary).map_err(|e| Error::NumericalFailure(format!("enclosing ball: {e}")))?
    };
    if boundary.len() == d + 1 {
        return Ok((c, r));
    }
    let mut i = 0;
    while i < end {
        let p = pts[i];
        if r < 0.0 || dist(p, &c) > r + tol {
            boundary.push(p);
            let res = mtf(pts, i, boundary, d, tol)?;
            boundary.pop();
            c = res.0;
            r = res.1;
            // move to front
            let q = pts.remove(i);
            pts.insert(0, q);
        }
        i += 1;
    }
    Ok((c, r.max(0.0)))
}

/// Minimum enclosing ball with multipliers: the centre as a convex
/// combination of on-sphere points.
pub fn meb_with_certificate(points: &[&[f64]], labels: &[usize]) -> Result<(Vec<f64>, f64, KktCertificate)> {
    let (c, r) = min_enclosing_ball(points)?;
    let scale = bbox_diameter(points.iter().copied()).max(f64::MIN_POSITIVE);
    let tol = 1e-8 * scale;
    let on: Vec<usize> = (0..points.len()).filter(|&i| (dist(points[i], &c) - r).abs() <= tol).collect();
    let d = points[0].len();
    for size in 1..=on.len().min(d + 1) {
        let mut found = None;
        for_each_subset(&on, size, &mut |sub_idx| {
            if found.is_some() {
                return;
            }
            let sp: Vec<&[f64]> = sub_idx.iter().map(|&i| points[i]).collect();
            if let Ok((cc, _, coeffs)) = circumsphere_with_coeffs(&sp) {
                if dist(&cc, &c) <= tol && coeffs.iter().all(|&x| x >= -1e-9) {
                    found = Some((sub_idx.to_vec(), coeffs));
                }
            }
        });
        if let Some((idx, coeffs)) = found {
            // polish the centre so stationarity holds to rounding
            let mut lambda = BTreeMap::new();
            let mut cc = vec![0.0; d];
            for (&i, &l) in idx.iter().zip(&coeffs) {
                lambda.insert(labels[i], l);
                cc.iter_mut().zip(points[i]).for_each(|(a, b)| *a += l * b);
            }
            let rr = idx.iter().map(|&i| dist(points[i], &cc)).fold(0.0, f64::max);
            return Ok((cc, rr.max(r.min(rr + tol)), KktCertificate { lambda }));
        }
    }
    Err(Error::NumericalFailure("no support set found for the enclosing ball".into()))
}

/// Names of the violated conditions; empty when the certificate is valid.
pub fn kkt_violations(
    stack: &Stack,
    cert: &KktCertificate,
    cloud: &ChromaticPointCloud,
    mu: &[usize],
    sigma: &Simplex,
    e: &[usize],
) -> Vec<KktCondition> {
    let mut bad = BTreeSet::new();
    let sv = sigma.vertices();
    let gamma = gamma_of(mu, sigma);
    let eg = relevant_e(mu, &gamma, e);
    let scale = problem_scale(cloud, sv.iter().chain(&eg).copied()).max(stack.rad());
    let tol = KKT_TOL * scale;
    let out = stack.out();
    let mut sum = vec![0.0; cloud.d()];
    for (&v, &l) in &cert.lambda {
        sum.iter_mut().zip(cloud.point(v)).for_each(|(a, b)| *a += l * b);
        if l.abs() > KKT_TOL && !stack.on(cloud.point(v), mu[v], tol) {
            bad.insert(KktCondition::SupportOnSpheres);
        }
        if l > KKT_TOL && !sigma.contains(v) {
            bad.insert(KktCondition::FrontInSigma);
        }
        if l < -KKT_TOL && !e.contains(&v) {
            bad.insert(KktCondition::BackInE);
        }
    }
    if dist(&sum, &stack.centre) > tol {
        bad.insert(KktCondition::Stationarity);
    }
    let colour_sum = |m: usize| -> f64 { cert.lambda.iter().filter(|(v, _)| mu[**v] == m).map(|(_, l)| l).sum() };
    let mut outer_total = 0.0;
    for &m in stack.radii.keys() {
        let s = colour_sum(m);
        if out.contains(&m) {
            outer_total += s;
            if s < -KKT_TOL {
                bad.insert(KktCondition::OuterSign);
            }
        } else if s.abs() > KKT_TOL {
            bad.insert(KktCondition::NonOuterSum);
        }
    }
    if (outer_total - 1.0).abs() > KKT_TOL {
        bad.insert(KktCondition::UnitSum);
    }
    for &v in sv {
        if !stack.includes(cloud.point(v), mu[v], tol) {
            bad.insert(KktCondition::Inclusion);
        }
    }
    for &x in &eg {
        if !stack.excludes(cloud.point(x), mu[x], tol) {
            bad.insert(KktCondition::Exclusion);
        }
    }
    bad.into_iter().collect()
}

/// All six KKT conditions plus primal feasibility.
pub fn verify_kkt(stack: &Stack, cert: &KktCertificate, cloud: &ChromaticPointCloud, mu: &[usize], sigma: &Simplex, e: &[usize]) -> bool {
    kkt_violations(stack, cert, cloud, mu, sigma, e).is_empty()
}

/// S*: add every missing colour at radius min(Rad, distance to its nearest
/// excluded point).
pub fn extend_stack(stack: &Stack, cloud: &ChromaticPointCloud, mu: &[usize], e: &[usize]) -> Stack {
    let rad = stack.rad();
    let ncol = mu.iter().copied().max().map_or(0, |m| m + 1);
    let mut radii = stack.radii.clone();
    for m in 0..ncol {
        if radii.contains_key(&m) {
            continue;
        }
        let near = e.iter().filter(|&&x| mu[x] == m).map(|&x| dist(cloud.point(x), &stack.centre)).fold(f64::INFINITY, f64::min);
        radii.insert(m, rad.min(near));
    }
    Stack { centre: stack.centre.clone(), radii }
}

/// Incl(S): points on or inside the sphere of their colour.
pub fn included(stack: &Stack, cloud: &ChromaticPointCloud, mu: &[usize]) -> Vec<usize> {
    let tol = 1e-9 * cloud.scale().max(stack.rad()).max(f64::MIN_POSITIVE);
    (0..cloud.len()).filter(|&i| stack.includes(cloud.point(i), mu[i], tol)).collect()
}

/// Stack through every colour 0..=s  ->  sphere in R^{d+s}.
pub fn lift_correspondence(stack: &Stack, s: usize) -> Result<(Vec<f64>, f64)> {
    for m in 0..=s {
        if !stack.radii.contains_key(&m) {
            return Err(Error::InvalidInput(format!("stack has no sphere of colour {m}")));
        }
    }
    let r0 = stack.radii[&0];
    // |t - e_m|^2 + r_m^2 = R^2 with e_0 = 0 gives t_m = (1 + r_m^2 - r_0^2) / 2
    let tail: Vec<f64> = (1..=s).map(|m| (1.0 + stack.radii[&m].powi(2) - r0 * r0) / 2.0).collect();
    let r2 = r0 * r0 + norm2(&tail);
    let mut c = stack.centre.clone();
    c.extend(tail);
    Ok((c, r2.sqrt()))
}

/// Sphere in R^{d+s}  ->  its sections with the colour planes.
pub fn inverse_correspondence(centre: &[f64], radius: f64, d: usize, s: usize) -> Result<Stack> {
    if centre.len() != d + s {
        return Err(Error::DimensionMismatch(format!("centre has {} coordinates, expected {}", centre.len(), d + s)));
    }
    let tail = &centre[d..];
    let mut radii = BTreeMap::new();
    for m in 0..=s {
        let r2 = radius * radius - dist2(tail, &colour_vertex(m, s));
        if r2 < 0.0 {
            return Err(Error::NoIntersection(m));
        }
        radii.insert(m, r2.sqrt());
    }
    Ok(Stack { centre: centre[..d].to_vec(), radii })
}

/// Front(S) as a simplex; None only for a malformed certificate.
pub fn front_simplex(cert: &KktCertificate) -> Option<Simplex> {
    Simplex::new(cert.front()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn symmetric_pair() {
        let c = ChromaticPointCloud::new(vec![vec![-1.0, 0.0], vec![1.0, 0.0]], vec![0, 1]).unwrap();
        let (st, cert) = min_stack(&c, c.colours(), &s(&[0, 1]), &[]).unwrap();
        assert!(st.centre.iter().all(|x| x.abs() < 1e-12));
        assert!((st.radii[&0] - 1.0).abs() < 1e-12 && (st.radii[&1] - 1.0).abs() < 1e-12);
        assert!(verify_kkt(&st, &cert, &c, c.colours(), &s(&[0, 1]), &[]));
    }

    #[test]
    fn pinched_is_nostack() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0], vec![2.0], vec![1.0]]).unwrap();
        assert_eq!(min_stack(&c, c.colours(), &s(&[0, 1]), &[2]).unwrap_err(), Error::NoStack);
    }

    #[test]
    fn interval_certificate() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0], vec![2.0]]).unwrap();
        let (st, cert) = min_stack(&c, c.colours(), &s(&[0, 1]), &[]).unwrap();
        assert!((st.centre[0] - 1.0).abs() < 1e-12);
        assert!((st.rad() - 1.0).abs() < 1e-12);
        assert!((cert.lambda[&0] - 0.5).abs() < 1e-12 && (cert.lambda[&1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn meb_examples() {
        let (c, r) = min_enclosing_ball(&[&[0.0, 0.0], &[2.0, 0.0]]).unwrap();
        assert!((r - 1.0).abs() < 1e-12 && (c[0] - 1.0).abs() < 1e-12);
        let h = 3f64.sqrt() / 2.0;
        let (_, r) = min_enclosing_ball(&[&[0.0, 0.0], &[1.0, 0.0], &[0.5, h]]).unwrap();
        assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let (c, r) = min_enclosing_ball(&[&[0.0, 0.0], &[4.0, 0.0], &[1.0, 1.0]]).unwrap();
        assert!((r - 2.0).abs() < 1e-12 && (c[0] - 2.0).abs() < 1e-12 && c[1].abs() < 1e-12);
    }

    #[test]
    fn extension_example() {
        // S centred at 1 with radius 1 over colour 0; X_1 = {1.5}
        let c = ChromaticPointCloud::new(vec![vec![0.0], vec![2.0], vec![1.5]], vec![0, 0, 1]).unwrap();
        let mu = c.colours().to_vec();
        let (st, _) = min_stack(&c, &mu, &s(&[0, 1]), &[0, 1, 2]).unwrap();
        let star = extend_stack(&st, &c, &mu, &[0, 1, 2]);
        assert!((star.radii[&1] - 0.5).abs() < 1e-12);
        assert!((star.rad() - 1.0).abs() < 1e-12);
        assert!(included(&star, &c, &mu).contains(&2));
        let full = extend_stack(&star, &c, &mu, &[0, 1, 2]);
        assert_eq!(full, star);
    }

    #[test]
    fn correspondence() {
        let st = Stack { centre: vec![0.3, 0.1], radii: [(0, 0.7), (1, 0.4)].into_iter().collect() };
        let (c, r) = lift_correspondence(&st, 1).unwrap();
        let h = c[2];
        assert!((0.4f64.powi(2) - 0.7f64.powi(2) - (2.0 * h - 1.0)).abs() < 1e-12);
        let back = inverse_correspondence(&c, r, 2, 1).unwrap();
        for m in 0..2 {
            assert!((back.radii[&m] - st.radii[&m]).abs() < 1e-12);
        }
        let eq = Stack { centre: vec![0.0], radii: [(0, 0.5), (1, 0.5)].into_iter().collect() };
        assert!((lift_correspondence(&eq, 1).unwrap().0[1] - 0.5).abs() < 1e-15);
        assert_eq!(inverse_correspondence(&[0.0, 5.0], 1.0, 1, 1).unwrap_err(), Error::NoIntersection(0));
    }

    #[test]
    fn zero_certificate_fails() {
        let c = ChromaticPointCloud::mono(vec![vec![0.0], vec![2.0]]).unwrap();
        let (st, _) = min_stack(&c, c.colours(), &s(&[0, 1]), &[]).unwrap();
        let zero = KktCertificate { lambda: [(0, 0.0), (1, 0.0)].into_iter().collect() };
        assert!(kkt_violations(&st, &zero, &c, c.colours(), &s(&[0, 1]), &[]).contains(&KktCondition::UnitSum));
    }
}
