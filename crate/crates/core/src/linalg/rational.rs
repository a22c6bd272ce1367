//! Gaussian elimination over the rationals. Used for the Q ground-ring mode
//! and as an SNF-independent rank oracle.

use num_rational::BigRational;
use num_traits::Zero;

use super::RatMatrix;

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let sub = &f * &m[(r, j)];
                m[(i, j)] -= sub;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_q(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// A rational solution of `a x = b`, if one exists.
pub fn solve_q(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows(), b.len());
    let col = RatMatrix::from_columns(a.rows(), &[b.to_vec()]);
    let mut aug = a.hcat(&col);
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); a.cols()];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, a.cols())].clone();
    }
    Some(x)
}

/// Basis of the rational null space.
pub fn kernel_q(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); m.cols()];
            v[f] = BigRational::from_integer(1.into());
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[(r, f)].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn rank_and_kernel() {
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).to_rational();
        assert_eq!(rank_q(&m), 2);
        let k = kernel_q(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_consistency() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 0]]).to_rational();
        let one = BigRational::from_integer(1.into());
        assert!(solve_q(&m, &[one.clone(), BigRational::zero()]).is_some());
        assert!(solve_q(&m, &[BigRational::zero(), one]).is_none());
    }
}
