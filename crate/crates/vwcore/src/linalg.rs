//! Exact Gaussian elimination over ℚ with full pivoting.
//!
//! The right-hand side may live in any [`Ring`] that is a ℚ-vector space,
//! so one solve handles whole q-series at once.

use crate::algebra::{Rat, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Solution<C> {
    pub x: Vec<C>,
    pub rank: usize,
    /// Right-hand side entries left in the rows past the rank; all zero for
    /// a consistent system.
    pub residual: Vec<C>,
}

impl<C: Ring> Solution<C> {
    pub fn is_consistent(&self) -> bool {
        self.residual.iter().all(|c| c.is_zero())
    }
}

/// Rank of a rational matrix.
pub fn rank(m: &[Vec<Rat>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let rhs: Vec<Rat> = vec![Rat::zero(); rows];
    eliminate(m.to_vec(), rhs, cols).1
}

fn eliminate<C: Ring>(mut a: Vec<Vec<Rat>>, mut b: Vec<C>, cols: usize) -> (Vec<Vec<Rat>>, usize, Vec<C>, Vec<usize>) {
    let rows = a.len();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in rank..rows {
            for j in rank..cols {
                if !a[i][perm[j]].is_zero() {
                    best = Some((i, j));
                    break;
                }
            }
            if best.is_some() {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(rank, pi);
        b.swap(rank, pi);
        perm.swap(rank, pj);
        let c = perm[rank];
        let inv = a[rank][c].recip();
        for k in 0..cols {
            a[rank][k] = &a[rank][k] * &inv;
        }
        b[rank] = b[rank].scale(&inv);
        for i in 0..rows {
            if i == rank || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for k in 0..cols {
                let d = &a[rank][k] * &f;
                a[i][k] -= d;
            }
            b[i] = b[i].sub(&b[rank].scale(&f));
        }
        rank += 1;
    }
    (a, rank, b, perm)
}

/// Solves `m·x = b`. Fails with `SpanDeficient` unless `m` has full column
/// rank; inconsistent rows are returned in `residual`, not rejected.
pub fn solve<C: Ring>(m: &[Vec<Rat>], b: Vec<C>) -> Result<Solution<C>> {
    let rows = m.len();
    assert_eq!(rows, b.len());
    let cols = m.first().map_or(0, |r| r.len());
    let (_, rank, b, perm) = eliminate(m.to_vec(), b, cols);
    if rank < cols {
        return Err(Error::SpanDeficient { rank, needed: cols });
    }
    let mut x = vec![C::zero(); cols];
    for (k, &c) in perm.iter().enumerate().take(rank) {
        x[c] = b[k].clone();
    }
    let residual = b[rank..].to_vec();
    Ok(Solution { x, rank, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rint;

    fn m(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|r| r.iter().map(|&x| rint(x)).collect()).collect()
    }

    #[test]
    fn square_solve() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let s = solve(&a, vec![rint(3), rint(5)]).unwrap();
        assert_eq!(s.x, vec![Rat::new(4.into(), 5.into()), Rat::new(7.into(), 5.into())]);
        assert!(s.residual.is_empty());
    }

    #[test]
    fn overdetermined_residual() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let ok = solve(&a, vec![rint(1), rint(2), rint(3)]).unwrap();
        assert!(ok.is_consistent());
        let bad = solve(&a, vec![rint(1), rint(2), rint(4)]).unwrap();
        assert!(!bad.is_consistent());
    }

    #[test]
    fn deficient() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(matches!(solve(&a, vec![rint(0), rint(0)]), Err(Error::SpanDeficient { rank: 1, needed: 2 })));
        assert_eq!(rank(&a), 1);
    }
}
