//! Exact Gaussian elimination over a [`Scalar`] field.

use crate::scalar::Scalar;

/// Row rank of `rows` (all rows must have equal length).
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / p.clone();
            for c in col..cols {
                let delta = factor.clone() * m[rank][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `a · x = b` for square invertible `a`; `b` may have several columns.
/// Returns `None` when `a` is singular.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<S>> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for c in col..n + k {
            aug[col][c] = aug[col][c].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in col..n + k {
                let delta = factor.clone() * aug[col][c].clone();
                aug[r][c] = aug[r][c].clone() - delta;
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
