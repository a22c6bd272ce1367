//! Finite windows of the total complex, with exponent boxes standing in for
//! the infinitely generated regular Laurent module.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Chain, TwistedComplex};
use crate::algebra::{Coeff, GroundRing, Word};
use crate::error::{Error, Result};
use crate::homology::{homology_in, integral, integral_homology};
use crate::linalg::{HomologyGroup, IntMatrix, RatMatrix, Subquotient};
use crate::module::ModuleKind;

/// A basis cell `α ⊗ x`: generator index and module word.
pub type Cell = (usize, Word);

/// Per generator, an inclusive exponent interval for each Laurent variable.
///
/// Boxes start at `[-K, K]^k` and are closed downward along the cocycle, so
/// the cells they span form a subcomplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boxes(pub Vec<Vec<(i64, i64)>>);

impl Boxes {
    /// `None` when the module is finite and no boxes are needed.
    pub fn build(x: &TwistedComplex, extra: &[Chain]) -> Option<Boxes> {
        let ModuleKind::RegularLaurent { rho, radius } = x.module().kind() else {
            return None;
        };
        let k = rho.len();
        let mut boxes = vec![vec![(-radius, *radius); k]; x.generators().len()];
        for c in extra {
            for ((g, w), _) in c.terms() {
                if let (Some(b), Word::Monomial(e)) = (boxes.get_mut(*g), w) {
                    hull_point(b, e);
                }
            }
        }
        let mut order: Vec<usize> = (0..x.generators().len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(x.generators()[i].degree));
        for &i in &order {
            for ((_, j), m) in x.cocycle().range((i, 0)..(i + 1, 0)) {
                let Some(spread) = support_box(m.terms().keys(), k) else {
                    continue;
                };
                let src = boxes[i].clone();
                for (v, ((lo, hi), (a, b))) in src.iter().zip(&spread).enumerate() {
                    let t = &mut boxes[*j][v];
                    t.0 = t.0.min(lo + a);
                    t.1 = t.1.max(hi + b);
                }
            }
        }
        Some(Boxes(boxes))
    }

    pub fn contains(&self, g: usize, e: &[i64]) -> bool {
        self.0[g].iter().zip(e).all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    fn monomials(&self, g: usize) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for (lo, hi) in &self.0[g] {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (*lo..=*hi).map(move |e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

fn hull_point(b: &mut [(i64, i64)], e: &[i64]) {
    for (iv, x) in b.iter_mut().zip(e) {
        iv.0 = iv.0.min(*x);
        iv.1 = iv.1.max(*x);
    }
}

fn support_box<'a>(words: impl Iterator<Item = &'a Word>, k: usize) -> Option<Vec<(i64, i64)>> {
    let mut out: Option<Vec<(i64, i64)>> = None;
    for w in words {
        let Word::Monomial(e) = w else { continue };
        match &mut out {
            None => out = Some(e.iter().map(|x| (*x, *x)).collect()),
            Some(b) => hull_point(b, e),
        }
    }
    out.map(|mut b| {
        b.resize(k, (0, 0));
        b
    })
}

/// The total complex restricted to degrees `lo..=hi`.
#[derive(Clone, Debug)]
pub struct TotalComplex<'a> {
    complex: &'a TwistedComplex,
    boxes: Option<Boxes>,
    lo: i64,
    hi: i64,
    bases: BTreeMap<i64, Vec<Cell>>,
    index: BTreeMap<i64, HashMap<Cell, usize>>,
    diffs: BTreeMap<i64, RatMatrix>,
}

impl<'a> TotalComplex<'a> {
    pub fn new(x: &'a TwistedComplex, lo: i64, hi: i64) -> Result<Self> {
        Self::with_boxes(x, Boxes::build(x, &[]), lo, hi)
    }

    /// Window whose boxes also contain the given chains.
    pub fn containing(x: &'a TwistedComplex, chains: &[Chain], lo: i64, hi: i64) -> Result<Self> {
        Self::with_boxes(x, Boxes::build(x, chains), lo, hi)
    }

    pub fn with_boxes(x: &'a TwistedComplex, boxes: Option<Boxes>, lo: i64, hi: i64) -> Result<Self> {
        let mut bases = BTreeMap::new();
        let mut index = BTreeMap::new();
        for n in lo..=hi {
            let mut cells = Vec::new();
            for (g, gen) in x.generators().iter().enumerate() {
                match &boxes {
                    Some(b) => {
                        if gen.degree == n {
                            cells.extend(b.monomials(g).into_iter().map(|e| (g, Word::Monomial(e))));
                        }
                    }
                    None => cells.extend(x.module().basis_of_degree(n - gen.degree).into_iter().map(|w| (g, w))),
                }
            }
            index.insert(n, cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect());
            bases.insert(n, cells);
        }
        let mut t = TotalComplex {
            complex: x,
            boxes,
            lo,
            hi,
            bases,
            index,
            diffs: BTreeMap::new(),
        };
        for n in lo + 1..=hi {
            let m = t.build_differential(n)?;
            t.diffs.insert(n, m);
        }
        Ok(t)
    }

    pub fn complex(&self) -> &'a TwistedComplex {
        self.complex
    }

    pub fn boxes(&self) -> Option<&Boxes> {
        self.boxes.as_ref()
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn basis(&self, n: i64) -> &[Cell] {
        self.bases.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    pub fn position(&self, n: i64, cell: &Cell) -> Option<usize> {
        self.index.get(&n)?.get(cell).copied()
    }

    /// Coordinates of a degree-`n` chain. Fails if the chain has a term outside the window.
    pub fn to_vector(&self, c: &Chain, n: i64) -> Result<Vec<Coeff>> {
        let mut v = vec![Coeff::zero(); self.dim(n)];
        for (cell, k) in c.terms() {
            let i = self.position(n, cell).ok_or_else(|| {
                Error::Invalid(format!(
                    "term {} lies outside degree {n} of the window",
                    self.complex.format_chain(&Chain::cell(cell.0, cell.1.clone()))
                ))
            })?;
            v[i] += k;
        }
        Ok(v)
    }

    pub fn to_int_vector(&self, c: &Chain, n: i64) -> Result<Vec<BigInt>> {
        self.to_vector(c, n)?
            .into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::NonIntegral(crate::algebra::fmt_rational(&x)))
                }
            })
            .collect()
    }

    pub fn from_vector(&self, n: i64, v: &[Coeff]) -> Chain {
        let mut c = Chain::zero();
        for (cell, k) in self.basis(n).iter().zip(v) {
            c.add_term(cell.0, cell.1.clone(), k.clone());
        }
        c
    }

    pub fn from_int_vector(&self, n: i64, v: &[BigInt]) -> Chain {
        let v: Vec<Coeff> = v.iter().map(|x| Coeff::from_integer(x.clone())).collect();
        self.from_vector(n, &v)
    }

    fn build_differential(&self, n: i64) -> Result<RatMatrix> {
        let src = self.basis(n);
        let mut cols = Vec::with_capacity(src.len());
        for (g, w) in src {
            let d = self.complex.apply_differential(&Chain::cell(*g, w.clone()))?;
            cols.push(self.to_vector(&d, n - 1)?);
        }
        Ok(RatMatrix::from_columns(self.dim(n - 1), &cols))
    }

    /// `D: C_n -> C_{n-1}`; zero map at the window edges.
    pub fn differential(&self, n: i64) -> RatMatrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.dim(n - 1), self.dim(n)))
    }

    pub fn differential_int(&self, n: i64) -> Result<IntMatrix> {
        integral(&self.differential(n))
    }

    pub fn check_square_zero(&self) -> Result<()> {
        for n in self.lo + 2..=self.hi {
            let comp = self.differential(n - 1).mul(&self.differential(n));
            if let Some((row, col, v)) = comp.first_nonzero() {
                return Err(Error::DifferentialNotSquareZero {
                    degree: n,
                    row,
                    col,
                    value: v.to_integer(),
                });
            }
        }
        Ok(())
    }

    /// Homology at `k`; requires `k-1..=k+1` inside the window.
    pub fn homology(&self, k: i64, ground: GroundRing) -> Result<HomologyGroup> {
        self.check_inner(k)?;
        homology_in(ground, &self.differential(k + 1), &self.differential(k))
    }

    pub fn homology_subquotient(&self, k: i64) -> Result<Subquotient> {
        self.check_inner(k)?;
        integral_homology(&self.differential(k + 1), &self.differential(k))
    }

    fn check_inner(&self, k: i64) -> Result<()> {
        if k - 1 < self.lo || k + 1 > self.hi {
            return Err(Error::Invalid(format!(
                "degree {k} needs window {}..={} but have {}..={}",
                k - 1,
                k + 1,
                self.lo,
                self.hi
            )));
        }
        Ok(())
    }
}
