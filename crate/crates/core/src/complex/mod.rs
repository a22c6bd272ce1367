//! Twisted complexes `F ⊗ ⟨generators⟩` with differential
//! `D(α⊗x) = ∂α⊗x + (-1)^{|α|} Σ_y α·m_{x,y}⊗y`.

mod filtration;
mod total;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::One;

use crate::algebra::{add_term, coeff, fmt_coeff_prefix, AlgebraElement, Coeff, GroundRing, Terms, Word};
use crate::error::{Error, Result};
use crate::linalg::{HomologyGroup, IntMatrix};
use crate::module::DgModule;
use crate::report::ValidationReport;

pub use filtration::{filtered_subcomplex, spectral_number, spectral_number_in, Level};
pub use total::{Boxes, Cell, TotalComplex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub action: Option<Coeff>,
    pub class_label: Option<String>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Generator {
            name: name.into(),
            degree,
            action: None,
            class_label: None,
        }
    }

    pub fn with_action(mut self, action: Coeff) -> Self {
        self.action = Some(action);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.class_label = Some(label.into());
        self
    }
}

/// Sparse system `m_{x,y}` indexed by generator positions; absent entries are zero.
pub type CocycleEntries = BTreeMap<(usize, usize), AlgebraElement>;

#[derive(Clone, Debug)]
pub struct TwistedComplex {
    name: String,
    module: Arc<DgModule>,
    generators: Vec<Generator>,
    cocycle: CocycleEntries,
}

impl TwistedComplex {
    /// Entries are `(source name, target name, m)`.
    pub fn new(
        name: impl Into<String>,
        module: &Arc<DgModule>,
        generators: Vec<Generator>,
        entries: Vec<(&str, &str, AlgebraElement)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::DuplicateName(g.name.clone()));
            }
        }
        let pos: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        let mut cocycle = CocycleEntries::new();
        for (x, y, m) in entries {
            let i = *pos.get(x).ok_or_else(|| Error::UnknownName(x.to_string()))?;
            let j = *pos.get(y).ok_or_else(|| Error::UnknownName(y.to_string()))?;
            if !Arc::ptr_eq(m.algebra(), module.algebra()) {
                return Err(Error::MixedAlgebra {
                    left: module.algebra().name().to_string(),
                    right: m.algebra().name().to_string(),
                });
            }
            let slot = cocycle.entry((i, j)).or_insert_with(|| AlgebraElement::zero(module.algebra()));
            *slot = &*slot + &m;
        }
        cocycle.retain(|_, m| !m.is_zero());
        Ok(TwistedComplex {
            name: name.into(),
            module: module.clone(),
            generators,
            cocycle,
        })
    }

    pub(crate) fn from_parts(
        name: String,
        module: Arc<DgModule>,
        generators: Vec<Generator>,
        cocycle: CocycleEntries,
    ) -> Self {
        let mut cocycle = cocycle;
        cocycle.retain(|_, m| !m.is_zero());
        TwistedComplex {
            name,
            module,
            generators,
            cocycle,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn module(&self) -> &Arc<DgModule> {
        &self.module
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn cocycle(&self) -> &CocycleEntries {
        &self.cocycle
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn entry(&self, x: usize, y: usize) -> Option<&AlgebraElement> {
        self.cocycle.get(&(x, y))
    }

    pub fn max_generator_degree(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.degree).max()
    }

    pub fn min_generator_degree(&self) -> Option<i64> {
        self.generators.iter().map(|g| g.degree).min()
    }

    /// Total degrees `lo..=hi` spanned by cells, cut so that products of
    /// module words with entries of degree `|x| - |y| + slack` stay inside the
    /// truncation. `slack` is -1 for the differential, 0 for continuation
    /// maps and 1 for homotopies.
    pub fn degree_window(&self, slack: i64) -> (i64, i64) {
        let (Some(lo_g), Some(hi_g)) = (self.min_generator_degree(), self.max_generator_degree()) else {
            return (0, -1);
        };
        let lo = lo_g + self.module.min_degree();
        let top = hi_g + self.module.truncation();
        let hi = match self.module.algebra().truncation() {
            Some(_) => top.min(self.module.truncation() + lo_g - slack),
            None => top,
        };
        (lo, hi)
    }

    /// Element-level differential.
    pub fn apply_differential(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for ((x, w), k) in &c.terms {
            for (v, d) in self.module.differential_word(w) {
                out.add_term(*x, v, d * k);
            }
            let deg = self.module.word_degree(w);
            let sign = if deg.rem_euclid(2) == 0 { k.clone() } else { -k };
            for ((src, y), m) in self.cocycle.range((*x, 0)..(*x + 1, 0)) {
                debug_assert_eq!(*src, *x);
                for (aw, ac) in m.terms() {
                    for (v, r) in self.module.act_words(w, aw)? {
                        out.add_term(*y, v, r * ac * &sign);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `α ⊗ x` for a module word given by name.
    pub fn cell(&self, module_word: &str, generator: &str) -> Result<Chain> {
        let g = self
            .generator_index(generator)
            .ok_or_else(|| Error::UnknownName(generator.to_string()))?;
        let f = self
            .module
            .as_finite()
            .ok_or_else(|| Error::UnknownName(module_word.to_string()))?;
        let w = f.index_of(module_word).ok_or_else(|| Error::UnknownName(module_word.to_string()))?;
        Ok(Chain::cell(g, Word::Basis(w)))
    }

    /// Total degree of a homogeneous chain.
    pub fn chain_degree(&self, c: &Chain) -> Option<i64> {
        let mut it = c
            .terms
            .keys()
            .map(|(g, w)| self.generators[*g].degree + self.module.word_degree(w));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn format_chain(&self, c: &Chain) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, ((g, w), k)) in c.terms.iter().enumerate() {
            fmt_coeff_prefix(k, i == 0, &mut out);
            out.push_str(&format!("{}@{}", self.module.word_name(w), self.generators[*g].name));
        }
        out
    }

    /// Matrices of `D: C_n -> C_{n-1}` for each `n` in the window.
    pub fn assemble_differential(&self, window: RangeInclusive<i64>) -> Result<Vec<IntMatrix>> {
        let (lo, hi) = (*window.start(), *window.end());
        let total = TotalComplex::new(self, lo - 1, hi)?;
        (lo..=hi).map(|n| total.differential_int(n)).collect()
    }

    /// Homology in each degree of the range, over the integers.
    pub fn homology(&self, degrees: RangeInclusive<i64>) -> Result<Vec<HomologyGroup>> {
        self.homology_in(degrees, GroundRing::Integers)
    }

    pub fn homology_in(&self, degrees: RangeInclusive<i64>, ground: GroundRing) -> Result<Vec<HomologyGroup>> {
        let (lo, hi) = (*degrees.start(), *degrees.end());
        let total = TotalComplex::new(self, lo - 1, hi + 1)?;
        total.check_square_zero()?;
        (lo..=hi).map(|k| total.homology(k, ground)).collect()
    }
}

impl fmt::Display for TwistedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "complex {} over {}", self.name, self.module.name())
    }
}

/// An element of `F ⊗ ⟨generators⟩`: terms keyed by `(generator index, module word)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: Terms<(usize, Word)>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn cell(generator: usize, w: Word) -> Self {
        let mut c = Chain::zero();
        c.add_term(generator, w, Coeff::one());
        c
    }

    pub fn terms(&self) -> &BTreeMap<(usize, Word), Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, generator: usize, w: Word, c: Coeff) {
        add_term(&mut self.terms, (generator, w), c);
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for ((g, w), c) in &other.terms {
            out.add_term(*g, w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Coeff) -> Chain {
        let mut out = Chain::zero();
        for ((g, w), c) in &self.terms {
            out.add_term(*g, w.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.scale(&coeff(-1)))
    }

    /// Generators appearing with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        let mut seen = Vec::new();
        for (g, _) in self.terms.keys() {
            if !seen.contains(g) {
                seen.push(*g);
            }
        }
        seen.into_iter()
    }

    /// The component along one generator, as `(module word, coefficient)` pairs.
    pub fn component(&self, generator: usize) -> Vec<(Word, Coeff)> {
        self.terms
            .iter()
            .filter(|((g, _), _)| *g == generator)
            .map(|((_, w), c)| (w.clone(), c.clone()))
            .collect()
    }

    /// Renames generator indices through `f`.
    pub fn reindex(&self, f: impl Fn(usize) -> usize) -> Chain {
        let mut out = Chain::zero();
        for ((g, w), c) in &self.terms {
            out.add_term(f(*g), w.clone(), c.clone());
        }
        out
    }
}

fn sign(k: i64) -> Coeff {
    if k.rem_euclid(2) == 0 {
        coeff(1)
    } else {
        coeff(-1)
    }
}

/// Checks degree, class-label and Maurer–Cartan constraints on every generator pair.
pub fn validate_cocycle(x: &TwistedComplex) -> ValidationReport {
    let mut report = ValidationReport::new(format!("cocycle of {}", x.name));
    let a = x.module.algebra();
    let gens = &x.generators;
    let n = gens.len();
    for ((i, j), m) in &x.cocycle {
        let d = gens[*i].degree - gens[*j].degree - 1;
        let loc = format!("({}, {})", gens[*i].name, gens[*j].name);
        if d < 0 || !m.is_homogeneous_of(d) {
            report.push("degree", loc.clone(), format!("{m} should have degree {d}"));
        }
        if let (Some(p), Some(q)) = (&gens[*i].class_label, &gens[*j].class_label) {
            if p != q {
                report.push("class-label", loc, format!("{p} != {q}"));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mut residual = x.cocycle.get(&(i, j)).map_or_else(|| AlgebraElement::zero(a), |m| m.differential());
            let mut failed = None;
            for z in 0..n {
                let (Some(mxz), Some(mzy)) = (x.cocycle.get(&(i, z)), x.cocycle.get(&(z, j))) else {
                    continue;
                };
                match mxz.multiply(mzy) {
                    Ok(p) => residual = &residual - &p.scale(&sign(gens[i].degree - gens[z].degree)),
                    Err(e) => failed = Some(e),
                }
            }
            let loc = format!("({}, {})", gens[i].name, gens[j].name);
            if let Some(e) = failed {
                report.push("truncation", loc, e.to_string());
            } else if !residual.is_zero() {
                report.push("maurer-cartan", loc, residual.to_string());
            }
        }
    }
    report
}

#[cfg(test)]
mod tests;
