//! Smith normal form over the integers.
//!
//! Elimination always pivots on the entry of smallest absolute value in the
//! active block, which keeps intermediate coefficients small on the matrices
//! this crate produces. Both transforms are tracked together with their
//! inverses so that callers can move between coordinate systems without
//! inverting anything afterwards.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Result of [`smith`]: `u * m * v == d`, with `u_inv`/`v_inv` the exact inverses.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// Diagonal entries `d_0 | d_1 | ... | d_{rank-1}`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Returns `(D, U, V)` with `U * m * V = D`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(m);
    (s.d, s.u, s.v)
}

pub fn smith(m: &IntMatrix) -> Snf {
    let (rows, cols) = m.shape();
    let mut calc = Calc {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let rank = calc.run();
    Snf {
        d: calc.a,
        u: calc.u,
        u_inv: calc.u_inv,
        v: calc.v,
        v_inv: calc.v_inv,
        rank,
    }
}

struct Calc {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Calc {
    fn run(&mut self) -> usize {
        let n = self.a.rows().min(self.a.cols());
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                self.clear_cross(t);
                match self.non_divisible(t) {
                    Some(i) => self.add_row(t, i, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => x.abs() < self.a[b].abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs() == BigInt::from(1) {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Eliminate row `t` and column `t` outside the pivot, re-pivoting on
    /// smaller remainders until both are clear.
    fn clear_cross(&mut self, t: usize) {
        loop {
            let mut dirty = false;
            for i in t + 1..self.a.rows() {
                if self.a[(i, t)].is_zero() {
                    continue;
                }
                let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                self.add_row(i, t, &-q);
                if !self.a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..self.a.cols() {
                if self.a[(t, j)].is_zero() {
                    continue;
                }
                let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                self.add_col(j, t, &-q);
                if !self.a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                return;
            }
            // a remainder smaller than the pivot survived: move it into place
            let mut best = (t, t);
            for i in t + 1..self.a.rows() {
                if !self.a[(i, t)].is_zero() && self.a[(i, t)].abs() < self.a[best].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..self.a.cols() {
                if !self.a[(t, j)].is_zero() && self.a[(t, j)].abs() < self.a[best].abs() {
                    best = (t, j);
                }
            }
            self.swap_rows(t, best.0);
            self.swap_cols(t, best.1);
        }
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.a[(t, t)];
        for i in t + 1..self.a.rows() {
            for j in t + 1..self.a.cols() {
                if !self.a[(i, j)].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        row_axpy(&mut self.a, dst, src, k);
        row_axpy(&mut self.u, dst, src, k);
        // inverse: col[src] -= k * col[dst]
        col_axpy(&mut self.u_inv, src, dst, &-k);
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        col_axpy(&mut self.a, dst, src, k);
        col_axpy(&mut self.v, dst, src, k);
        // inverse: row[src] -= k * row[dst]
        row_axpy(&mut self.v_inv, src, dst, &-k);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.a.cols() {
            self.a[(i, j)] = -&self.a[(i, j)];
        }
        for j in 0..self.u.cols() {
            self.u[(i, j)] = -&self.u[(i, j)];
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, i)] = -&self.u_inv[(r, i)];
        }
    }
}

pub(crate) fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for j in 0..m.cols() {
        if !m[(src, j)].is_zero() {
            let add = k * &m[(src, j)];
            m[(dst, j)] += add;
        }
    }
}

pub(crate) fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &BigInt) {
    for i in 0..m.rows() {
        if !m[(i, src)].is_zero() {
            let add = k * &m[(i, src)];
            m[(i, dst)] += add;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let s = smith(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        s
    }

    #[test]
    fn zero_one_by_one() {
        let (d, u, v) = smith_normal_form(&IntMatrix::from_i64(&[&[0]]));
        assert_eq!(d, IntMatrix::from_i64(&[&[0]]));
        assert_eq!(u, IntMatrix::identity(1));
        assert_eq!(v, IntMatrix::identity(1));
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.d, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
        assert_eq!(s.rank, 4);
    }

    #[test]
    fn rectangular_and_empty() {
        let s = check(&IntMatrix::from_i64(&[&[2, 3, 5], &[4, 6, 10]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1)]);
        let e = check(&IntMatrix::zeros(0, 3));
        assert_eq!(e.rank, 0);
        let e = check(&IntMatrix::zeros(2, 0));
        assert_eq!(e.rank, 0);
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(2, 3) is not in normal form; the answer is diag(1, 6)
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }
}
