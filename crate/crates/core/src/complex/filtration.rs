//! Action filtration and spectral numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use super::{Chain, CocycleEntries, TotalComplex, TwistedComplex};
use crate::algebra::{fmt_rational, Coeff, GroundRing};
use crate::error::{Error, Result};
use crate::homology::integral;
use crate::linalg::{rational::solve_q, LatticeSolver};

/// An action level, possibly `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Finite(Coeff),
    Infinite,
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Level::Finite(a), Level::Finite(b)) => a.cmp(b),
            (Level::Finite(_), Level::Infinite) => Ordering::Less,
            (Level::Infinite, Level::Finite(_)) => Ordering::Greater,
            (Level::Infinite, Level::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(a) => write!(f, "{}", fmt_rational(a)),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

fn actions(x: &TwistedComplex) -> Result<Vec<Coeff>> {
    x.generators()
        .iter()
        .map(|g| g.action.clone().ok_or(Error::ActionsMissing))
        .collect()
}

/// Every nonzero `m_{x,y}` must strictly lower the action.
pub(crate) fn check_monotone(x: &TwistedComplex) -> Result<Vec<Coeff>> {
    let a = actions(x)?;
    for (i, j) in x.cocycle().keys() {
        if a[*j] >= a[*i] {
            return Err(Error::NotActionMonotone {
                from: x.generators()[*i].name.clone(),
                to: x.generators()[*j].name.clone(),
            });
        }
    }
    Ok(a)
}

/// Indices of generators kept at a level, and the complex they span.
fn restrict(x: &TwistedComplex, keep: &[usize], name: String) -> TwistedComplex {
    let pos = |g: usize| keep.iter().position(|&k| k == g);
    let mut cocycle = CocycleEntries::new();
    for ((i, j), m) in x.cocycle() {
        if let (Some(p), Some(q)) = (pos(*i), pos(*j)) {
            cocycle.insert((p, q), m.clone());
        }
    }
    let gens = keep.iter().map(|&g| x.generators()[g].clone()).collect();
    TwistedComplex::from_parts(name, x.module().clone(), gens, cocycle)
}

/// `C^{<b}`: generators of action strictly below `b`, in their original order.
pub fn filtered_subcomplex(x: &TwistedComplex, b: &Level) -> Result<TwistedComplex> {
    let a = check_monotone(x)?;
    let keep: Vec<usize> = (0..a.len()).filter(|&i| &Level::Finite(a[i].clone()) < b).collect();
    Ok(restrict(x, &keep, format!("{}<{}", x.name(), b)))
}

/// Over the integers. See [`spectral_number_in`].
pub fn spectral_number(x: &TwistedComplex, z: &Chain, b0: &Coeff) -> Result<Level> {
    spectral_number_in(x, z, b0, GroundRing::Integers)
}

/// `inf { c >= b0 : [z] = 0 in H(C^{<=c}) }` for a cycle `z` in `C^{<b0}`,
/// or `Level::Infinite` if `z` survives in the whole complex.
pub fn spectral_number_in(x: &TwistedComplex, z: &Chain, b0: &Coeff, ground: GroundRing) -> Result<Level> {
    let a = check_monotone(x)?;
    for g in z.support() {
        if &a[g] >= b0 {
            return Err(Error::NotACycle(format!(
                ": term on `{}` has action {} >= {}",
                x.generators()[g].name,
                fmt_rational(&a[g]),
                fmt_rational(b0)
            )));
        }
    }
    if !x.apply_differential(z)?.is_zero() {
        return Err(Error::NotACycle(String::new()));
    }
    let Some(n) = x.chain_degree(z) else {
        return if z.is_zero() {
            Ok(Level::Finite(b0.clone()))
        } else {
            Err(Error::Invalid("chain is not homogeneous".into()))
        };
    };
    let mut levels: Vec<Coeff> = a.iter().filter(|v| *v > b0).cloned().collect();
    levels.sort();
    levels.dedup();
    levels.insert(0, b0.clone());
    for c in levels {
        let keep: Vec<usize> = (0..a.len()).filter(|&i| a[i] <= c).collect();
        let sub = restrict(x, &keep, format!("{}<={}", x.name(), fmt_rational(&c)));
        let zs = z.reindex(|g| keep.iter().position(|&k| k == g).expect("support is kept"));
        if is_boundary(&sub, &zs, n, ground)? {
            return Ok(Level::Finite(c));
        }
    }
    Ok(Level::Infinite)
}

pub(crate) fn is_boundary(x: &TwistedComplex, z: &Chain, n: i64, ground: GroundRing) -> Result<bool> {
    let total = TotalComplex::containing(x, std::slice::from_ref(z), n, n + 1)?;
    let d = total.differential(n + 1);
    let v = total.to_vector(z, n)?;
    match ground {
        GroundRing::Rationals => Ok(solve_q(&d, &v).is_some()),
        GroundRing::Integers => {
            let v: Vec<BigInt> = total.to_int_vector(z, n)?;
            Ok(LatticeSolver::new(&integral(&d)?).solve(&v).is_some())
        }
    }
}
