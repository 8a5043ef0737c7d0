//! Exact rational arithmetic for the general-position predicates. Every
//! finite f64 is a dyadic rational, so conversion is lossless.

use num_rational::BigRational;
use num_traits::Zero;

pub fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinates")
}

pub fn vector(p: &[f64]) -> Vec<BigRational> {
    p.iter().map(|&x| to_rational(x)).collect()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Rank by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vector(&[1.0, 2.0]), vector(&[2.0, 4.0]), vector(&[0.5, 1.0])];
        assert_eq!(rank(rows), 1);
        assert_eq!(rank(vec![vector(&[1.0, 0.1]), vector(&[0.1, 1.0])]), 2);
    }
}
