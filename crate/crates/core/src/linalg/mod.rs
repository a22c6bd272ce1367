//! Exact integer and rational linear algebra.

mod lattice;
mod matrix;
pub mod rational;
mod snf;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

pub use lattice::{
    hermite_normal_form, homology_at, homology_subquotient, kernel_lattice, lattice_basis,
    lattice_contained, preimage_lattice, LatticeSolver, Subquotient,
};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use snf::{smith, smith_normal_form, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("d_out * d_in is nonzero: entry ({row}, {col}) = {value}")]
    CompositionNonzero { row: usize, col: usize, value: BigInt },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("relation column {column} does not lie in the numerator lattice")]
    NotContained { column: usize },
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    /// Normalizes arbitrary cyclic orders into divisibility-chain form.
    /// Orders of absolute value 1 are dropped.
    pub fn new(free_rank: usize, orders: Vec<BigInt>) -> Self {
        HomologyGroup {
            free_rank,
            torsion: invariant_factors(orders),
        }
    }

    pub fn trivial() -> Self {
        HomologyGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// Drops torsion: the rank over Q.
    pub fn rationalized(&self) -> Self {
        HomologyGroup::free(self.free_rank)
    }
}

/// Converts a list of cyclic orders into the divisibility chain of the
/// direct sum, via prime-power-free gcd/lcm exchange.
fn invariant_factors(orders: Vec<BigInt>) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = orders.into_iter().map(|d| d.abs()).filter(|d| *d > BigInt::one()).collect();
    // repeated gcd/lcm exchange leaves a divisibility chain in place
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let g = v[i].gcd(&v[j]);
            let l = v[i].lcm(&v[j]);
            v[i] = g;
            v[j] = l;
        }
    }
    v.retain(|d| *d > BigInt::one());
    v
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_chain_normalization() {
        let g = HomologyGroup::new(1, vec![6.into(), 4.into(), 1.into()]);
        assert_eq!(g.torsion, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(HomologyGroup::new(0, vec![2.into(), 3.into()]).torsion, vec![BigInt::from(6)]);
        assert_eq!(HomologyGroup::trivial().to_string(), "0");
    }
}
