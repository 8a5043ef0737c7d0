//! Small dense linear algebra and sphere constructions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance for geometric predicates.
pub const EPS_REL: f64 = 1e-9;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

pub fn bbox_diameter<'a, I: IntoIterator<Item = &'a [f64]>>(points: I) -> f64 {
    let mut lo: Vec<f64> = vec![];
    let mut hi: Vec<f64> = vec![];
    for p in points {
        if lo.is_empty() {
            lo = p.to_vec();
            hi = p.to_vec();
        }
        for (i, &x) in p.iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    dist(&lo, &hi)
}

/// Solve a square system with full pivoting. Returns None when a pivot is
/// below `1e-12` of the largest one.
pub fn solve(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    let n = a.nrows();
    if n == 0 {
        return Some(DVector::zeros(0));
    }
    let lu = a.full_piv_lu();
    let u = lu.u();
    let big = (0..n).map(|i| u[(i, i)].abs()).fold(0.0, f64::max);
    if big == 0.0 || (0..n).any(|i| u[(i, i)].abs() <= 1e-12 * big) {
        return None;
    }
    lu.solve(&b)
}

/// Orthonormal basis of the affine hull, found by pivoted Gram–Schmidt on
/// the differences from the first point. `tol` is absolute.
pub fn affine_basis(points: &[&[f64]], tol: f64) -> Vec<Vec<f64>> {
    if points.len() < 2 {
        return vec![];
    }
    let origin = points[0];
    let mut residuals: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, origin)).collect();
    let mut basis: Vec<Vec<f64>> = vec![];
    loop {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, norm2(r).sqrt()))
            .fold((usize::MAX, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || norm <= tol {
            break;
        }
        let q: Vec<f64> = residuals[best].iter().map(|x| x / norm).collect();
        for r in residuals.iter_mut() {
            let c = dot(r, &q);
            for (ri, qi) in r.iter_mut().zip(&q) {
                *ri -= c * qi;
            }
        }
        basis.push(q);
    }
    basis
}

/// Dimension of the affine hull, with tolerance relative to the spread.
pub fn affine_rank(points: &[&[f64]]) -> usize {
    let scale = bbox_diameter(points.iter().copied());
    affine_basis(points, EPS_REL * scale.max(f64::MIN_POSITIVE)).len()
}

/// Coordinates of `points` in the affine frame (`origin`, `basis`).
pub fn project(points: &[&[f64]], origin: &[f64], basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let v = sub(p, origin);
            basis.iter().map(|q| dot(&v, q)).collect()
        })
        .collect()
}

/// Smallest sphere through affinely independent points; its centre lies in
/// their affine hull. Also returns the affine coefficients of the centre.
pub fn circumsphere_with_coeffs(points: &[&[f64]]) -> Result<(Vec<f64>, f64, Vec<f64>)> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("no points".into()));
    }
    let m = points[0].len();
    let k = points.len() - 1;
    if k == 0 {
        return Ok((points[0].to_vec(), 0.0, vec![1.0]));
    }
    if k > m || affine_rank(points) < k {
        return Err(Error::DegenerateInput(format!("{} points are affinely dependent", points.len())));
    }
    let v0 = points[0];
    let cols: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, v0)).collect();
    // c = v0 + A a with 2 A^T A a = b, b_j = |v_j - v0|^2
    let g = DMatrix::from_fn(k, k, |i, j| 2.0 * dot(&cols[i], &cols[j]));
    let b = DVector::from_fn(k, |i, _| norm2(&cols[i]));
    let a = solve(g, b).ok_or_else(|| Error::DegenerateInput("singular circumsphere system".into()))?;
    let mut c = v0.to_vec();
    for (j, col) in cols.iter().enumerate() {
        for (ci, x) in c.iter_mut().zip(col) {
            *ci += a[j] * x;
        }
    }
    let r = points.iter().map(|p| dist(p, &c)).fold(0.0, f64::max);
    let mut coeffs = vec![1.0 - a.iter().sum::<f64>()];
    coeffs.extend(a.iter());
    Ok((c, r, coeffs))
}

/// Minimum-radius circumsphere (centre, radius) of affinely independent points.
pub fn circumsphere_through(points: &[&[f64]]) -> Result<(Vec<f64>, f64)> {
    circumsphere_with_coeffs(points).map(|(c, r, _)| (c, r))
}
