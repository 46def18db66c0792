//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::rational::Rational;
use super::AlgebraError;

/// Result of [`linear_solve_exact`].
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    /// One solution of `A x = b`, if the system is consistent.
    pub particular: Option<Vec<Rational>>,
    /// Basis of `{x : A x = 0}`.
    pub kernel: Vec<Vec<Rational>>,
    pub rank: usize,
}

impl LinearSolution {
    pub fn is_solvable(&self) -> bool {
        self.particular.is_some()
    }
}

/// Solves `matrix * x = rhs` by reduction to reduced row echelon form.
///
/// `ncols` is passed explicitly so that a system with no rows still has a
/// well-defined unknown count.
pub fn linear_solve_exact(
    matrix: &[Vec<Rational>],
    rhs: &[Rational],
    ncols: usize,
) -> Result<LinearSolution, AlgebraError> {
    if matrix.len() != rhs.len() {
        return Err(AlgebraError::DimensionMismatch(format!(
            "{} rows but {} right-hand sides",
            matrix.len(),
            rhs.len()
        )));
    }
    if let Some(bad) = matrix.iter().find(|r| r.len() != ncols) {
        return Err(AlgebraError::DimensionMismatch(format!(
            "row of length {} in a system with {ncols} unknowns",
            bad.len()
        )));
    }
    let mut rows: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = Rational::one() / &rows[row][col];
        for v in rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[row].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    let rank = pivots.len();

    let consistent = rows[rank..].iter().all(|r| r[ncols].is_zero());
    let particular = consistent.then(|| {
        let mut x = vec![Rational::zero(); ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = rows[i][ncols].clone();
        }
        x
    });

    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut k = vec![Rational::zero(); ncols];
            k[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                k[c] = -rows[i][f].clone();
            }
            k
        })
        .collect();

    Ok(LinearSolution {
        particular,
        kernel,
        rank,
    })
}

/// `A x`.
pub fn mat_vec(matrix: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::q;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn identity() {
        let a = m(&[&[1, 0], &[0, 1]]);
        let s = linear_solve_exact(&a, &[q(3), q(-4)], 2).unwrap();
        assert_eq!(s.particular, Some(vec![q(3), q(-4)]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn rank_one() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let s = linear_solve_exact(&a, &[q(1), q(2)], 2).unwrap();
        assert!(s.is_solvable());
        assert_eq!(s.kernel.len(), 1);
        let bad = linear_solve_exact(&a, &[q(1), q(3)], 2).unwrap();
        assert!(!bad.is_solvable());
    }

    #[test]
    fn two_by_two() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let s = linear_solve_exact(&a, &[q(5), q(10)], 2).unwrap();
        assert_eq!(s.particular, Some(vec![q(1), q(3)]));
    }

    #[test]
    fn dimension_mismatch() {
        let a = m(&[&[1, 2]]);
        assert!(linear_solve_exact(&a, &[q(1), q(2)], 2).is_err());
        assert!(linear_solve_exact(&a, &[q(1)], 3).is_err());
    }
}
