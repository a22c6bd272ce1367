use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::snf::{col_axpy, smith, Snf};
use super::{HomologyGroup, IntMatrix, LinalgError};

/// Columns form a Z-basis of `{v : m v = 0}`.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let s = smith(m);
    let free: Vec<usize> = (s.rank..m.cols()).collect();
    s.v.select_columns(&free)
}

/// A basis (as columns) of the lattice spanned by the columns of `span`.
pub fn lattice_basis(span: &IntMatrix) -> IntMatrix {
    let s = smith(span);
    let mut cols = Vec::with_capacity(s.rank);
    for i in 0..s.rank {
        let d = &s.d[(i, i)];
        cols.push(s.u_inv.column(i).into_iter().map(|x| x * d).collect());
    }
    IntMatrix::from_columns(span.rows(), &cols)
}

/// Column-style Hermite normal form: a basis of the column lattice in
/// echelon form, pivots positive and strictly descending down the rows,
/// entries to the left of each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(span: &IntMatrix) -> IntMatrix {
    let mut h = span.clone();
    let (rows, cols) = h.shape();
    let mut k = 0;
    for i in 0..rows {
        if k == cols {
            break;
        }
        loop {
            // smallest nonzero entry in row i among active columns
            let mut best: Option<usize> = None;
            for j in k..cols {
                if !h[(i, j)].is_zero()
                    && best.is_none_or(|b| h[(i, j)].abs() < h[(i, b)].abs())
                {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(k, b);
            let mut done = true;
            for j in k + 1..cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&h[(i, k)]);
                col_axpy(&mut h, j, k, &-q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            for r in 0..rows {
                h[(r, k)] = -&h[(r, k)];
            }
        }
        for j in 0..k {
            let q = h[(i, j)].div_floor(&h[(i, k)]);
            col_axpy(&mut h, j, k, &-q);
        }
        k += 1;
    }
    let keep: Vec<usize> = (0..k).collect();
    h.select_columns(&keep)
}

/// Membership test against a Hermite basis.
fn in_hnf_span(h: &IntMatrix, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    let mut row = 0;
    for j in 0..h.cols() {
        while row < h.rows() && h[(row, j)].is_zero() {
            if !v[row].is_zero() {
                return false;
            }
            row += 1;
        }
        let (q, r) = v[row].div_rem(&h[(row, j)]);
        if !r.is_zero() {
            return false;
        }
        if !q.is_zero() {
            for (i, x) in v.iter_mut().enumerate() {
                *x -= &q * &h[(i, j)];
            }
        }
        row += 1;
    }
    v.iter().all(Zero::is_zero)
}

/// True iff every column of `k1` lies in the Z-span of the columns of `k2`.
pub fn lattice_contained(k1: &IntMatrix, k2: &IntMatrix) -> Result<bool, LinalgError> {
    if k1.cols() == 0 {
        return Ok(true);
    }
    if k1.rows() != k2.rows() {
        return Err(LinalgError::DimensionMismatch {
            context: "lattice_contained",
            expected: k2.rows(),
            found: k1.rows(),
        });
    }
    let h = hermite_normal_form(k2);
    Ok(k1.columns().iter().all(|c| in_hnf_span(&h, c)))
}

/// Spanning set of `{v ∈ span(b) : a v ∈ span(c)}`, as columns.
pub fn preimage_lattice(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix) -> IntMatrix {
    let ab = a.mul(b);
    let neg_c = IntMatrix::from_fn(c.rows(), c.cols(), |i, j| -&c[(i, j)]);
    let stacked = if c.cols() == 0 { ab } else { ab.hcat(&neg_c) };
    let k = kernel_lattice(&stacked);
    let first: Vec<usize> = (0..b.cols()).collect();
    let coeffs = k.select_rows(&first);
    lattice_basis(&b.mul(&coeffs))
}

/// Integral solver for `a x = b`, reusing one Smith decomposition of `a`.
#[derive(Clone, Debug)]
pub struct LatticeSolver {
    snf: Snf,
}

impl LatticeSolver {
    pub fn new(a: &IntMatrix) -> Self {
        LatticeSolver { snf: smith(a) }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank
    }

    /// Some integral `x` with `a x = b`, or `None` when `b` is not in the column lattice.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let s = &self.snf;
        let w = s.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); s.v.rows()];
        for (i, wi) in w.iter().enumerate() {
            if i < s.rank {
                let (q, r) = wi.div_rem(&s.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        Some(s.v.mul_vec(&y))
    }
}

/// A quotient `N / R` of lattices `R ⊂ N ⊂ Z^ambient`, presented in Smith
/// coordinates so that classes can be named and compared.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    basis: IntMatrix,
    solver: LatticeSolver,
    /// Change of coordinates on the numerator basis.
    u: IntMatrix,
    u_inv: IntMatrix,
    /// One entry per numerator basis vector: invariant factor, 0 for free.
    factors: Vec<BigInt>,
}

impl Subquotient {
    /// `numerator` and `relations` are spanning sets (columns) in the ambient lattice.
    pub fn new(numerator: &IntMatrix, relations: &IntMatrix) -> Result<Self, LinalgError> {
        let ambient = numerator.rows();
        if relations.cols() > 0 && relations.rows() != ambient {
            return Err(LinalgError::DimensionMismatch {
                context: "subquotient relations",
                expected: ambient,
                found: relations.rows(),
            });
        }
        let basis = lattice_basis(numerator);
        let solver = LatticeSolver::new(&basis);
        let k = basis.cols();
        let mut coords = Vec::with_capacity(relations.cols());
        for (j, col) in relations.columns().into_iter().enumerate() {
            match solver.solve(&col) {
                Some(c) => coords.push(c),
                None => return Err(LinalgError::NotContained { column: j }),
            }
        }
        let rel = IntMatrix::from_columns(k, &coords);
        let s = smith(&rel);
        let mut factors = vec![BigInt::zero(); k];
        for (i, f) in factors.iter_mut().enumerate().take(s.rank) {
            *f = s.d[(i, i)].clone();
        }
        Ok(Subquotient {
            ambient,
            basis,
            solver,
            u: s.u,
            u_inv: s.u_inv,
            factors,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Indices of numerator coordinates that survive in the quotient:
    /// torsion first, then free, in divisibility order.
    fn nontrivial(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().enumerate().filter(|(_, f)| !f.is_one()).map(|(i, _)| i)
    }

    pub fn group(&self) -> HomologyGroup {
        let mut free = 0;
        let mut torsion = Vec::new();
        for i in self.nontrivial() {
            if self.factors[i].is_zero() {
                free += 1;
            } else {
                torsion.push(self.factors[i].clone());
            }
        }
        HomologyGroup::new(free, torsion)
    }

    /// Order of each generator returned by [`Self::generators`]; 0 means infinite order.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        self.nontrivial().map(|i| self.factors[i].clone()).collect()
    }

    /// Ambient representatives of the quotient's generators.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        let lifted = self.basis.mul(&self.u_inv);
        self.nontrivial().map(|i| lifted.column(i)).collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solver.solve(v).is_some()
    }

    /// Coordinates of the class of `v` against [`Self::generators`]; torsion
    /// coordinates reduced into `[0, d)`. `None` if `v` is not in the numerator.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.solver.solve(v)?;
        let c = self.u.mul_vec(&c);
        Some(
            self.nontrivial()
                .map(|i| {
                    let d = &self.factors[i];
                    if d.is_zero() {
                        c[i].clone()
                    } else {
                        c[i].mod_floor(d)
                    }
                })
                .collect(),
        )
    }

    /// True iff `v` lies in the relation lattice. Panics if `v` is outside the numerator.
    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        self.coordinates(v)
            .expect("vector outside the numerator lattice")
            .iter()
            .all(Zero::is_zero)
    }
}

/// `ker(d_out) / im(d_in)` for `C_{k+1} --d_in--> C_k --d_out--> C_{k-1}`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<HomologyGroup, LinalgError> {
    Ok(homology_subquotient(d_in, d_out)?.group())
}

pub fn homology_subquotient(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<Subquotient, LinalgError> {
    if d_in.rows() != d_out.cols() {
        return Err(LinalgError::DimensionMismatch {
            context: "homology_at",
            expected: d_out.cols(),
            found: d_in.rows(),
        });
    }
    let comp = d_out.mul(d_in);
    if let Some((row, col, value)) = comp.first_nonzero() {
        return Err(LinalgError::CompositionNonzero {
            row,
            col,
            value: value.clone(),
        });
    }
    Subquotient::new(&kernel_lattice(d_out), d_in)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_lattice(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        let c = k.column(0);
        assert!(c == z(&[1, -1]) || c == z(&[-1, 1]));
        assert_eq!(kernel_lattice(&IntMatrix::identity(3)).cols(), 0);
        assert_eq!(kernel_lattice(&IntMatrix::zeros(1, 2)).cols(), 2);
    }

    #[test]
    fn containment_examples() {
        let k1 = IntMatrix::from_columns(2, &[z(&[2, 0])]);
        let k2 = IntMatrix::from_columns(2, &[z(&[1, 0])]);
        assert!(lattice_contained(&k1, &k2).unwrap());
        assert!(!lattice_contained(&k2, &k1).unwrap());
        assert!(lattice_contained(&IntMatrix::zeros(2, 0), &k1).unwrap());
        let bad = IntMatrix::from_columns(3, &[z(&[1, 0, 0])]);
        assert!(matches!(
            lattice_contained(&bad, &k1),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hnf_is_echelon() {
        let m = IntMatrix::from_i64(&[&[4, 6, 2], &[1, 2, 3], &[0, 0, 0], &[5, 1, 7]]);
        let h = hermite_normal_form(&m);
        assert_eq!(h.cols(), 3);
        assert!(lattice_contained(&h, &m).unwrap());
        assert!(lattice_contained(&m, &h).unwrap());
    }

    #[test]
    fn homology_examples() {
        let g = homology_at(&IntMatrix::zeros(3, 0), &IntMatrix::zeros(0, 3)).unwrap();
        assert_eq!(g, HomologyGroup::free(3));
        let g = homology_at(&IntMatrix::from_i64(&[&[2]]), &IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(g, HomologyGroup::new(0, vec![BigInt::from(2)]));
        let g = homology_at(&IntMatrix::from_i64(&[&[1]]), &IntMatrix::zeros(0, 1)).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn composition_witness() {
        let err = homology_at(&IntMatrix::from_i64(&[&[1]]), &IntMatrix::from_i64(&[&[3]])).unwrap_err();
        match err {
            LinalgError::CompositionNonzero { row, col, value } => {
                assert_eq!((row, col), (0, 0));
                assert_eq!(value, BigInt::from(3));
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn subquotient_coordinates() {
        // Z^2 / <(2, 0)>  ~  Z/2 + Z
        let sq = Subquotient::new(&IntMatrix::identity(2), &IntMatrix::from_columns(2, &[z(&[2, 0])])).unwrap();
        assert_eq!(sq.group(), HomologyGroup::new(1, vec![BigInt::from(2)]));
        assert!(sq.is_zero_class(&z(&[4, 0])));
        assert!(!sq.is_zero_class(&z(&[1, 0])));
        assert!(!sq.is_zero_class(&z(&[0, 1])));
        let gens = sq.generators();
        assert_eq!(sq.coordinates(&gens[0]).unwrap(), z(&[1, 0]));
        assert_eq!(sq.coordinates(&gens[1]).unwrap(), z(&[0, 1]));
    }
}
