//! Deciding `ker A ⊄ ker B` for maps out of a common finitely generated abelian group.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    kernel_lattice, lattice_basis, lattice_contained, preimage_lattice, rational::kernel_q, rational::rank_q, IntMatrix,
    LatticeSolver, LinalgError,
};
use crate::maps::InducedMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CriterionMode {
    /// Exact containment of the kernels as subgroups.
    #[default]
    Z,
    /// Containment after rational closure of both lifted kernels; torsion is invisible.
    Saturated,
    /// `rank [A; B] > rank A` on the free parts.
    Q,
}

/// `A: ⊕ Z/d_j -> ⊕ Z/e_i`; an order of 0 stands for `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyMap {
    pub domain: Vec<BigInt>,
    pub codomain: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl HomologyMap {
    pub fn new(domain: Vec<BigInt>, codomain: Vec<BigInt>, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (codomain.len(), domain.len()) {
            return Err(LinalgError::DimensionMismatch {
                context: "homology map shape",
                expected: codomain.len() * domain.len(),
                found: matrix.rows() * matrix.cols(),
            }
            .into());
        }
        for (j, d) in domain.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (i, e) in codomain.iter().enumerate() {
                let v = &matrix[(i, j)] * d;
                let ok = if e.is_zero() { v.is_zero() } else { v.is_multiple_of(e) };
                if !ok {
                    return Err(Error::Invalid(format!(
                        "column {j} has order {d} but its image has nonzero multiple in row {i}"
                    )));
                }
            }
        }
        Ok(HomologyMap {
            domain,
            codomain,
            matrix,
        })
    }

    /// A map between free groups.
    pub fn free(matrix: IntMatrix) -> Self {
        HomologyMap {
            domain: vec![BigInt::zero(); matrix.cols()],
            codomain: vec![BigInt::zero(); matrix.rows()],
            matrix,
        }
    }

    pub fn from_induced(m: &InducedMap) -> Result<Self> {
        Self::new(m.source_orders.clone(), m.target_orders.clone(), m.matrix.clone())
    }

    /// The lift `{v ∈ Z^n : A v ∈ ⊕ e_i Z}`, which contains the relations `⊕ d_j Z`.
    pub fn kernel_lift(&self) -> IntMatrix {
        let n = self.domain.len();
        let rel = IntMatrix::from_fn(self.codomain.len(), self.codomain.len(), |i, j| {
            if i == j {
                self.codomain[i].clone()
            } else {
                BigInt::zero()
            }
        });
        preimage_lattice(&self.matrix, &IntMatrix::identity(n), &rel)
    }
}

fn saturate(l: &IntMatrix) -> IntMatrix {
    let n = l.rows();
    if l.cols() == 0 {
        return IntMatrix::zeros(n, 0);
    }
    let normals = kernel_q(&l.transpose().to_rational());
    if normals.is_empty() {
        return IntMatrix::identity(n);
    }
    let rows: Vec<Vec<BigInt>> = normals
        .iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            v.iter().map(|x| (x * &den).to_integer()).collect()
        })
        .collect();
    let w = IntMatrix::from_fn(rows.len(), n, |i, j| rows[i][j].clone());
    kernel_lattice(&w)
}

fn check_domains(a: &HomologyMap, b: &HomologyMap) -> Result<()> {
    if a.domain != b.domain {
        return Err(LinalgError::DimensionMismatch {
            context: "kernel criterion domains",
            expected: a.domain.len(),
            found: b.domain.len(),
        }
        .into());
    }
    Ok(())
}

/// True iff `ker A ⊄ ker B`.
pub fn kernel_criterion(a: &HomologyMap, b: &HomologyMap, mode: CriterionMode) -> Result<bool> {
    check_domains(a, b)?;
    match mode {
        CriterionMode::Z => Ok(!lattice_contained(&a.kernel_lift(), &b.kernel_lift())?),
        CriterionMode::Saturated => Ok(!lattice_contained(&saturate(&a.kernel_lift()), &saturate(&b.kernel_lift()))?),
        CriterionMode::Q => {
            let cols: Vec<usize> = (0..a.domain.len()).filter(|&j| a.domain[j].is_zero()).collect();
            let free_rows = |m: &HomologyMap| -> IntMatrix {
                let rows: Vec<usize> = (0..m.codomain.len()).filter(|&i| m.codomain[i].is_zero()).collect();
                m.matrix.select_rows(&rows).select_columns(&cols)
            };
            let fa = free_rows(a).to_rational();
            let fb = free_rows(b).to_rational();
            Ok(rank_q(&fa.vcat(&fb)) > rank_q(&fa))
        }
    }
}

/// A domain vector in `ker A` but not in `ker B` (exact mode), if any.
pub fn kernel_witness(a: &HomologyMap, b: &HomologyMap) -> Result<Option<Vec<BigInt>>> {
    check_domains(a, b)?;
    let lb = lattice_basis(&b.kernel_lift());
    let solver = LatticeSolver::new(&lb);
    Ok(a.kernel_lift().columns().into_iter().find(|v| solver.solve(v).is_none()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn trivial_cases() {
        let zero = HomologyMap::free(IntMatrix::from_i64(&[&[0]]));
        let id = HomologyMap::free(IntMatrix::from_i64(&[&[1]]));
        for mode in [CriterionMode::Z, CriterionMode::Saturated, CriterionMode::Q] {
            assert!(kernel_criterion(&zero, &id, mode).unwrap());
            assert!(!kernel_criterion(&id, &zero, mode).unwrap());
        }
    }

    #[test]
    fn mod_six_example() {
        let six = || ints(&[6]);
        let a = HomologyMap::new(six(), six(), IntMatrix::from_i64(&[&[2]])).unwrap();
        let b = HomologyMap::new(six(), six(), IntMatrix::from_i64(&[&[3]])).unwrap();
        // ker A = {0, 3}, ker B = {0, 2, 4}
        assert!(kernel_criterion(&a, &b, CriterionMode::Z).unwrap());
        assert!(kernel_criterion(&b, &a, CriterionMode::Z).unwrap());
        assert!(!kernel_criterion(&a, &b, CriterionMode::Saturated).unwrap());
        assert!(!kernel_criterion(&a, &b, CriterionMode::Q).unwrap());
        assert_eq!(kernel_witness(&a, &b).unwrap().map(|v| v[0].mod_floor(&6.into())), Some(3.into()));
    }

    #[test]
    fn torsion_target_on_free_domain() {
        // Z -> Z/2 reduction versus zero map: ker = 2Z versus Z.
        let a = HomologyMap::new(ints(&[0]), ints(&[2]), IntMatrix::from_i64(&[&[1]])).unwrap();
        let z = HomologyMap::free(IntMatrix::from_i64(&[&[0]]));
        assert!(!kernel_criterion(&a, &z, CriterionMode::Z).unwrap());
        assert!(kernel_criterion(&z, &a, CriterionMode::Z).unwrap());
        assert!(!kernel_criterion(&z, &a, CriterionMode::Saturated).unwrap());
    }

    #[test]
    fn ill_defined_and_mismatched() {
        assert!(HomologyMap::new(ints(&[2]), ints(&[0]), IntMatrix::from_i64(&[&[1]])).is_err());
        let a = HomologyMap::free(IntMatrix::from_i64(&[&[1, 0]]));
        let b = HomologyMap::free(IntMatrix::from_i64(&[&[1]]));
        assert!(matches!(
            kernel_criterion(&a, &b, CriterionMode::Z),
            Err(Error::Linalg(LinalgError::DimensionMismatch { .. }))
        ));
    }
}
