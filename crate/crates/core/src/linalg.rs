//! Small dense exact linear algebra: solves and semidefiniteness tests.

use crate::scalar::Scalar;

/// Solves `a x = b` by Gaussian elimination. `None` if `a` is singular.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n), "square system");
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let v = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
            }
            b[r] = b[r].clone() - b[col].clone() * f;
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

/// Exact positive-semidefiniteness test for a symmetric matrix.
///
/// Symmetric elimination with diagonal pivoting: a strictly positive diagonal
/// entry is eliminated; when none is left every remaining entry has to vanish.
pub fn is_positive_semidefinite<T: Scalar>(m: &[Vec<T>]) -> bool {
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut active: Vec<usize> = (0..a.len()).collect();
    loop {
        if active.is_empty() {
            return true;
        }
        if active.iter().any(|&i| a[i][i] < T::zero()) {
            return false;
        }
        let Some(pos) = active.iter().position(|&i| a[i][i] > T::zero()) else {
            // zero diagonal: PSD only if the whole remaining block is zero
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        };
        let p = active.remove(pos);
        let piv = a[p][p].clone();
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = a[i][p].clone() / piv.clone();
            for &j in &active {
                let v = f.clone() * a[p][j].clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
    }
}
