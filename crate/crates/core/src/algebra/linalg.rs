//! Exact Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    /// Consistent, but the columns of `A` are dependent.
    Underdetermined { rank: usize },
    Inconsistent,
}

/// Solves `A x = b` where `a` is given row-major (`rows x cols`).
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational], cols: usize) -> Solution {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let delta = &f * &m[r][j];
                    m[i][j] = &m[i][j] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }

    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::Underdetermined { rank: pivots.len() };
    }
    Solution::Unique((0..cols).map(|i| m[i][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn unique_solution() {
        let a = vec![vec![q(2), q(0)], vec![q(0), q(4)], vec![q(2), q(4)]];
        let b = vec![q(24), q(8), q(32)];
        assert_eq!(solve(&a, &b, 2), Solution::Unique(vec![q(12), q(2)]));
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(
            solve(&a, &[q(3)], 2),
            Solution::Underdetermined { rank: 1 }
        );
        let a = vec![vec![q(1)], vec![q(2)]];
        assert_eq!(solve(&a, &[q(1), q(3)], 1), Solution::Inconsistent);
    }
}
