//! Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::game::Rational;

/// Solves the square system `m · x = rhs` exactly.
///
/// `m` is given row by row. Returns `None` when the matrix is singular.
#[allow(clippy::needless_range_loop)]
pub fn solve_square(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n) && rhs.len() == n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for c in col..n {
            m[col][c] *= &inv;
        }
        rhs[col] *= &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}
