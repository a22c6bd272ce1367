//! Coefficient DGAs: degree-wise finite structure-constant tables and Laurent
//! group rings, their elements, rank-1 local systems and the twist map Φ^L.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Exact ground-ring coefficient. Integral in Z mode.
pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) type Terms<W> = BTreeMap<W, Coeff>;

pub(crate) fn add_term<W: Ord>(terms: &mut Terms<W>, w: W, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn fmt_coeff_prefix(c: &Coeff, first: bool, out: &mut String) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if !a.is_one() {
        out.push_str(&fmt_rational(&a));
        out.push('*');
    }
}

pub fn fmt_rational(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Grounds for coefficients and monodromy values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum GroundRing {
    #[default]
    Integers,
    Rationals,
}

impl GroundRing {
    pub fn is_unit(self, c: &Coeff) -> bool {
        match self {
            GroundRing::Integers => c.is_integer() && c.numer().abs().is_one(),
            GroundRing::Rationals => !c.is_zero(),
        }
    }
}

/// A basis word. `Basis` indexes a table backend's basis list; `Monomial` is
/// an exponent vector over a Laurent ring's generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    Basis(usize),
    Monomial(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableWord {
    pub name: String,
    pub degree: i64,
    /// Declared degree-0 corner, for positive-degree words.
    pub corner: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableDga {
    truncation: i64,
    words: Vec<TableWord>,
    unit: usize,
    products: HashMap<(usize, usize), Terms<Word>>,
    differential: Vec<Terms<Word>>,
    index: HashMap<String, usize>,
    presentation: Option<FreePresentation>,
}

/// Generators and differential a free algebra was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePresentation {
    pub generators: Vec<(String, i64)>,
    pub differential: Vec<(String, Vec<(Vec<String>, i64)>)>,
}

impl TableDga {
    /// Set when the table was generated by [`free_algebra`].
    pub fn presentation(&self) -> Option<&FreePresentation> {
        self.presentation.as_ref()
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn words(&self) -> &[TableWord] {
        &self.words
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn words_of_degree(&self, d: i64) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().filter(move |(_, w)| w.degree == d).map(|(i, _)| i)
    }

    /// Declared product of two basis words; absent entries are zero.
    pub fn product_entry(&self, a: usize, b: usize) -> Option<&Terms<Word>> {
        self.products.get(&(a, b))
    }

    pub fn differential_entry(&self, a: usize) -> &Terms<Word> {
        &self.differential[a]
    }

    /// All declared product entries, sorted.
    pub fn product_entries(&self) -> Vec<((usize, usize), &Terms<Word>)> {
        let mut v: Vec<_> = self.products.iter().map(|(k, t)| (*k, t)).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentDga {
    generators: Vec<String>,
}

impl LaurentDga {
    pub fn generators(&self) -> &[String] {
        &self.generators
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Table(TableDga),
    Laurent(LaurentDga),
}

/// A differential graded algebra over the ground ring. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dga {
    name: String,
    backend: Backend,
}

impl Dga {
    pub fn laurent(name: impl Into<String>, generators: &[&str]) -> Result<Arc<Dga>> {
        let mut seen = std::collections::HashSet::new();
        for g in generators {
            if !seen.insert(*g) {
                return Err(Error::DuplicateName(g.to_string()));
            }
        }
        Ok(Arc::new(Dga {
            name: name.into(),
            backend: Backend::Laurent(LaurentDga {
                generators: generators.iter().map(|s| s.to_string()).collect(),
            }),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn as_table(&self) -> Option<&TableDga> {
        match &self.backend {
            Backend::Table(t) => Some(t),
            Backend::Laurent(_) => None,
        }
    }

    pub fn as_laurent(&self) -> Option<&LaurentDga> {
        match &self.backend {
            Backend::Laurent(l) => Some(l),
            Backend::Table(_) => None,
        }
    }

    /// Maximal representable degree; `None` for the Laurent backend (all degree 0).
    pub fn truncation(&self) -> Option<i64> {
        self.as_table().map(|t| t.truncation)
    }

    pub fn unit_word(&self) -> Word {
        match &self.backend {
            Backend::Table(t) => Word::Basis(t.unit),
            Backend::Laurent(l) => Word::Monomial(vec![0; l.generators.len()]),
        }
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        match (&self.backend, w) {
            (Backend::Table(t), Word::Basis(i)) => t.words[*i].degree,
            _ => 0,
        }
    }

    pub fn word_name(&self, w: &Word) -> String {
        match (&self.backend, w) {
            (Backend::Table(t), Word::Basis(i)) => t.words[*i].name.clone(),
            (Backend::Laurent(l), Word::Monomial(e)) => {
                let parts: Vec<String> = e
                    .iter()
                    .zip(&l.generators)
                    .filter(|(k, _)| **k != 0)
                    .map(|(k, g)| if *k == 1 { g.clone() } else { format!("{g}^{k}") })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
            _ => "?".to_string(),
        }
    }

    /// Product of two basis words.
    pub fn multiply_words(&self, a: &Word, b: &Word) -> Result<Terms<Word>> {
        match (&self.backend, a, b) {
            (Backend::Table(t), Word::Basis(i), Word::Basis(j)) => {
                let degree = t.words[*i].degree + t.words[*j].degree;
                if degree > t.truncation {
                    return Err(Error::TruncationExceeded {
                        degree,
                        truncation: t.truncation,
                    });
                }
                Ok(t.products.get(&(*i, *j)).cloned().unwrap_or_default())
            }
            (Backend::Laurent(_), Word::Monomial(x), Word::Monomial(y)) => {
                let e: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                Ok(Terms::from([(Word::Monomial(e), Coeff::one())]))
            }
            _ => Err(Error::Invalid("word does not belong to this backend".into())),
        }
    }

    pub fn differential_word(&self, w: &Word) -> Terms<Word> {
        match (&self.backend, w) {
            (Backend::Table(t), Word::Basis(i)) => t.differential[*i].clone(),
            _ => Terms::new(),
        }
    }

    /// All basis words of the given degree (table backend only; empty for Laurent).
    pub fn basis_of_degree(&self, d: i64) -> Vec<Word> {
        match &self.backend {
            Backend::Table(t) => t.words_of_degree(d).map(Word::Basis).collect(),
            Backend::Laurent(_) => Vec::new(),
        }
    }
}

/// Builder for table-backend DGAs. Products with the unit default to the
/// identity unless declared otherwise; positive-degree words without a
/// declared corner get the unit as corner unless [`Self::strict_corners`].
pub struct TableDgaBuilder {
    name: String,
    truncation: i64,
    words: Vec<TableWord>,
    index: HashMap<String, usize>,
    unit: Option<usize>,
    products: HashMap<(usize, usize), Terms<Word>>,
    differential: HashMap<usize, Terms<Word>>,
    strict_corners: bool,
}

impl TableDgaBuilder {
    pub fn new(name: impl Into<String>, truncation: i64) -> Self {
        TableDgaBuilder {
            name: name.into(),
            truncation,
            words: Vec::new(),
            index: HashMap::new(),
            unit: None,
            products: HashMap::new(),
            differential: HashMap::new(),
            strict_corners: false,
        }
    }

    pub fn strict_corners(mut self) -> Self {
        self.strict_corners = true;
        self
    }

    pub fn word(&mut self, name: &str, degree: i64) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        if degree < 0 || degree > self.truncation {
            return Err(Error::Invalid(format!(
                "word `{name}` has degree {degree} outside 0..={}",
                self.truncation
            )));
        }
        let i = self.words.len();
        self.words.push(TableWord {
            name: name.to_string(),
            degree,
            corner: None,
        });
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn set_unit(&mut self, name: &str) -> Result<()> {
        self.unit = Some(self.lookup(name)?);
        Ok(())
    }

    pub fn set_product(&mut self, a: usize, b: usize, value: Vec<(usize, Coeff)>) {
        let mut t = Terms::new();
        for (w, c) in value {
            add_term(&mut t, Word::Basis(w), c);
        }
        self.products.insert((a, b), t);
    }

    pub fn set_differential(&mut self, a: usize, value: Vec<(usize, Coeff)>) {
        let mut t = Terms::new();
        for (w, c) in value {
            add_term(&mut t, Word::Basis(w), c);
        }
        self.differential.insert(a, t);
    }

    pub fn set_corner(&mut self, word: usize, corner: usize) {
        self.words[word].corner = Some(corner);
    }

    pub fn build(self) -> Result<Arc<Dga>> {
        let unit = match self.unit {
            Some(u) => u,
            None => self
                .words
                .iter()
                .position(|w| w.degree == 0)
                .ok_or_else(|| Error::Invalid("table DGA needs a degree-0 unit word".into()))?,
        };
        if self.words[unit].degree != 0 {
            return Err(Error::Invalid("unit word must have degree 0".into()));
        }
        let mut products = self.products;
        for i in 0..self.words.len() {
            products
                .entry((unit, i))
                .or_insert_with(|| Terms::from([(Word::Basis(i), Coeff::one())]));
            products
                .entry((i, unit))
                .or_insert_with(|| Terms::from([(Word::Basis(i), Coeff::one())]));
        }
        products.retain(|_, t| !t.is_empty());
        let mut words = self.words;
        if !self.strict_corners {
            for w in words.iter_mut() {
                if w.degree > 0 && w.corner.is_none() {
                    w.corner = Some(unit);
                }
            }
        }
        for w in &words {
            if let Some(c) = w.corner {
                if words[c].degree != 0 {
                    return Err(Error::Invalid(format!("corner of `{}` is not a degree-0 word", w.name)));
                }
            }
        }
        let mut differential = vec![Terms::new(); words.len()];
        for (i, t) in self.differential {
            differential[i] = t;
        }
        Ok(Arc::new(Dga {
            name: self.name,
            backend: Backend::Table(TableDga {
                truncation: self.truncation,
                words,
                unit,
                products,
                differential,
                index: self.index,
                presentation: None,
            }),
        }))
    }
}

/// Free graded associative algebra on the given generators (all of positive
/// degree), truncated at `truncation`. The differential is given on
/// generators as lists of `(word as generator sequence, coefficient)` and
/// extended by the Leibniz rule. Word names are generator names joined by `*`;
/// the unit is named `1`.
pub fn free_algebra(
    name: &str,
    generators: &[(&str, i64)],
    truncation: i64,
    differential: &[(&str, Vec<(Vec<&str>, i64)>)],
) -> Result<Arc<Dga>> {
    for (g, d) in generators {
        if *d <= 0 {
            return Err(Error::Invalid(format!("free generator `{g}` needs positive degree")));
        }
    }
    let mut b = TableDgaBuilder::new(name, truncation);
    // enumerate words breadth-first by length
    let mut seqs: Vec<(Vec<usize>, i64)> = vec![(vec![], 0)];
    let mut frontier = vec![(vec![], 0i64)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (seq, deg) in &frontier {
            for (gi, (_, gd)) in generators.iter().enumerate() {
                let d = deg + gd;
                if d <= truncation {
                    let mut s: Vec<usize> = seq.clone();
                    s.push(gi);
                    next.push((s.clone(), d));
                    seqs.push((s, d));
                }
            }
        }
        frontier = next;
    }
    let word_name = |s: &[usize]| -> String {
        if s.is_empty() {
            "1".to_string()
        } else {
            s.iter().map(|&g| generators[g].0).collect::<Vec<_>>().join("*")
        }
    };
    let mut id: HashMap<Vec<usize>, usize> = HashMap::new();
    for (s, d) in &seqs {
        let i = b.word(&word_name(s), *d)?;
        id.insert(s.clone(), i);
    }
    b.set_unit("1")?;
    for (s1, d1) in &seqs {
        for (s2, d2) in &seqs {
            if s1.is_empty() || s2.is_empty() || d1 + d2 > truncation {
                continue;
            }
            let mut s = s1.clone();
            s.extend_from_slice(s2);
            b.set_product(id[s1], id[s2], vec![(id[&s], Coeff::one())]);
        }
    }
    // differential on generators
    let gen_index = |n: &str| generators.iter().position(|(g, _)| *g == n);
    let mut gen_diff: Vec<Vec<(Vec<usize>, i64)>> = vec![Vec::new(); generators.len()];
    for (g, value) in differential {
        let gi = gen_index(g).ok_or_else(|| Error::UnknownName(g.to_string()))?;
        let mut v = Vec::new();
        for (seq, c) in value {
            let s: Vec<usize> = seq
                .iter()
                .map(|n| gen_index(n).ok_or_else(|| Error::UnknownName(n.to_string())))
                .collect::<Result<_>>()?;
            v.push((s, *c));
        }
        gen_diff[gi] = v;
    }
    // Leibniz: d(g w) = dg w + (-1)^|g| g dw, by induction on word length
    let mut diffs: HashMap<Vec<usize>, Terms<Vec<usize>>> = HashMap::new();
    diffs.insert(vec![], Terms::new());
    let mut ordered: Vec<&(Vec<usize>, i64)> = seqs.iter().collect();
    ordered.sort_by_key(|(s, _)| s.len());
    for (s, _) in ordered {
        if s.is_empty() {
            continue;
        }
        let g = s[0];
        let rest = s[1..].to_vec();
        let mut t: Terms<Vec<usize>> = Terms::new();
        for (ds, c) in &gen_diff[g] {
            let mut w = ds.clone();
            w.extend_from_slice(&rest);
            add_term(&mut t, w, coeff(*c));
        }
        let sign = if generators[g].1 % 2 == 0 { 1 } else { -1 };
        for (w, c) in diffs[&rest].clone() {
            let mut full = vec![g];
            full.extend(w);
            add_term(&mut t, full, c * coeff(sign));
        }
        diffs.insert(s.clone(), t);
    }
    for (s, t) in &diffs {
        if s.is_empty() {
            continue;
        }
        let mut value = Vec::new();
        for (w, c) in t {
            let wi = *id.get(w).ok_or_else(|| {
                Error::Invalid(format!("differential of `{}` leaves the truncation", word_name(s)))
            })?;
            value.push((wi, c.clone()));
        }
        b.set_differential(id[s], value);
    }
    let dga = b.build()?;
    let mut dga = Arc::try_unwrap(dga).expect("freshly built");
    if let Backend::Table(t) = &mut dga.backend {
        t.presentation = Some(FreePresentation {
            generators: generators.iter().map(|(g, d)| (g.to_string(), *d)).collect(),
            differential: differential
                .iter()
                .map(|(g, v)| {
                    let v = v.iter().map(|(w, c)| (w.iter().map(|x| x.to_string()).collect(), *c)).collect();
                    (g.to_string(), v)
                })
                .collect(),
        });
    }
    Ok(Arc::new(dga))
}

/// A finite Z-linear (or Q-linear) combination of basis words of one DGA.
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Arc<Dga>,
    terms: Terms<Word>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(algebra: &Arc<Dga>) -> Self {
        AlgebraElement {
            algebra: algebra.clone(),
            terms: Terms::new(),
        }
    }

    pub fn unit(algebra: &Arc<Dga>) -> Self {
        Self::word(algebra, algebra.unit_word())
    }

    pub fn word(algebra: &Arc<Dga>, w: Word) -> Self {
        AlgebraElement {
            algebra: algebra.clone(),
            terms: Terms::from([(w, Coeff::one())]),
        }
    }

    /// Table-backend basis word by name.
    pub fn named(algebra: &Arc<Dga>, name: &str) -> Result<Self> {
        let t = algebra.as_table().ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let i = t.index_of(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(Self::word(algebra, Word::Basis(i)))
    }

    /// Laurent monomial from an exponent vector.
    pub fn monomial(algebra: &Arc<Dga>, exponents: &[i64]) -> Self {
        Self::word(algebra, Word::Monomial(exponents.to_vec()))
    }

    pub fn from_terms(algebra: &Arc<Dga>, terms: impl IntoIterator<Item = (Word, Coeff)>) -> Self {
        let mut t = Terms::new();
        for (w, c) in terms {
            add_term(&mut t, w, c);
        }
        AlgebraElement {
            algebra: algebra.clone(),
            terms: t,
        }
    }

    pub fn algebra(&self) -> &Arc<Dga> {
        &self.algebra
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree if nonzero and homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| self.algebra.word_degree(w));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// True for zero or for a homogeneous element of degree `d`.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|w| self.algebra.word_degree(w) == d)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_terms(&self.algebra, self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::MixedAlgebra {
                left: self.algebra.name.clone(),
                right: other.algebra.name.clone(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut t = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut t, w.clone(), c.clone());
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            terms: t,
        })
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut t = Terms::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (w, k) in self.algebra.multiply_words(a, b)? {
                    add_term(&mut t, w, &k * &c);
                }
            }
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            terms: t,
        })
    }

    pub fn differential(&self) -> Self {
        let mut t = Terms::new();
        for (w, c) in &self.terms {
            for (v, k) in self.algebra.differential_word(w) {
                add_term(&mut t, v, k * c);
            }
        }
        AlgebraElement {
            algebra: self.algebra.clone(),
            terms: t,
        }
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    /// Panics on mixed algebras; use [`AlgebraElement::try_add`] to check.
    fn add(self, rhs: Self) -> AlgebraElement {
        self.try_add(rhs).expect("adding elements of different algebras")
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&coeff(-1))
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self + &(-rhs)
    }
}

pub(crate) fn fmt_terms<W>(terms: &Terms<W>, name: impl Fn(&W) -> String, unit: Option<&W>) -> String
where
    W: Ord + PartialEq,
{
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (w, c)) in terms.iter().enumerate() {
        if unit == Some(w) {
            if i == 0 {
                out.push_str(&fmt_rational(c));
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&fmt_rational(&c.abs()));
            }
            continue;
        }
        fmt_coeff_prefix(c, i == 0, &mut out);
        out.push_str(&name(w));
    }
    out
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.algebra.unit_word();
        let s = fmt_terms(&self.terms, |w| self.algebra.word_name(w), Some(&unit));
        write!(f, "{s}")
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.algebra.name, self)
    }
}

/// Checks unit law, degree homogeneity, ∂² = 0, Leibniz and associativity
/// on all basis tuples within the truncation.
pub fn validate_dga(a: &Arc<Dga>) -> ValidationReport {
    let mut report = ValidationReport::new(format!("dga {}", a.name));
    let Some(t) = a.as_table() else {
        return report;
    };
    let n = t.words.len();
    let el = |w: usize| AlgebraElement::word(a, Word::Basis(w));
    let unit = el(t.unit);
    for i in 0..n {
        let w = el(i);
        let wd = t.words[i].degree;
        let name = &t.words[i].name;
        if unit.multiply(&w).ok().as_ref() != Some(&w) || w.multiply(&unit).ok().as_ref() != Some(&w) {
            report.push("unit", name.clone(), format!("unit*{name} or {name}*unit != {name}"));
        }
        let dw = w.differential();
        if !dw.is_homogeneous_of(wd - 1) {
            report.push("differential-degree", name.clone(), dw.to_string());
        }
        let ddw = dw.differential();
        if !ddw.is_zero() {
            report.push("d-squared", name.clone(), ddw.to_string());
        }
    }
    for ((i, j), v) in t.product_entries() {
        let d = t.words[i].degree + t.words[j].degree;
        if v.keys().any(|w| a.word_degree(w) != d) {
            report.push(
                "product-degree",
                format!("({}, {})", t.words[i].name, t.words[j].name),
                fmt_terms(v, |w| a.word_name(w), None),
            );
        }
    }
    // by degree, to skip pairs above the truncation quickly
    let max_deg = t.truncation;
    let mut by_deg: Vec<Vec<usize>> = vec![Vec::new(); (max_deg + 1) as usize];
    for (i, w) in t.words.iter().enumerate() {
        by_deg[w.degree as usize].push(i);
    }
    for da in 0..=max_deg {
        for db in 0..=max_deg - da {
            for &i in &by_deg[da as usize] {
                for &j in &by_deg[db as usize] {
                    let (x, y) = (el(i), el(j));
                    let xy = x.multiply(&y).expect("within truncation");
                    let lhs = xy.differential();
                    let s = if da % 2 == 0 { coeff(1) } else { coeff(-1) };
                    let r1 = x.differential().multiply(&y).expect("degree drops");
                    let r2 = x.multiply(&y.differential()).expect("degree drops").scale(&s);
                    let residual = &lhs - &(&r1 + &r2);
                    if !residual.is_zero() {
                        report.push(
                            "leibniz",
                            format!("({}, {})", t.words[i].name, t.words[j].name),
                            residual.to_string(),
                        );
                    }
                    for dc in 0..=max_deg - da - db {
                        for &k in &by_deg[dc as usize] {
                            let z = el(k);
                            let left = xy.multiply(&z).expect("within truncation");
                            let right = x
                                .multiply(&y.multiply(&z).expect("within truncation"))
                                .expect("within truncation");
                            if left != right {
                                report.push(
                                    "associativity",
                                    format!(
                                        "({}, {}, {})",
                                        t.words[i].name, t.words[j].name, t.words[k].name
                                    ),
                                    (&left - &right).to_string(),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Monodromy values of a rank-1 classical local system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Monodromy {
    /// Value on each Laurent generator.
    Laurent(Vec<Coeff>),
    /// Value on degree-0 table words; undeclared words map to 1.
    Table(BTreeMap<usize, Coeff>),
}

/// A rank-1 local system over a DGA: a multiplicative map ρ from degree-0
/// words to units of the ground ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1LocalSystem {
    name: String,
    algebra: Arc<Dga>,
    ground: GroundRing,
    rho: Monodromy,
}

impl Rank1LocalSystem {
    /// `values` maps generator names (Laurent) or degree-0 word names (table) to ρ.
    pub fn new(
        name: impl Into<String>,
        algebra: &Arc<Dga>,
        ground: GroundRing,
        values: &[(&str, Coeff)],
    ) -> Result<Self> {
        let rho = match algebra.backend() {
            Backend::Laurent(l) => {
                let mut v = vec![Coeff::one(); l.generators.len()];
                for (n, c) in values {
                    let i = l
                        .generators
                        .iter()
                        .position(|g| g == n)
                        .ok_or_else(|| Error::UnknownName(n.to_string()))?;
                    v[i] = c.clone();
                }
                Monodromy::Laurent(v)
            }
            Backend::Table(t) => {
                let mut m = BTreeMap::new();
                for (n, c) in values {
                    let i = t.index_of(n).ok_or_else(|| Error::UnknownName(n.to_string()))?;
                    if t.words[i].degree != 0 {
                        return Err(Error::Invalid(format!("ρ declared on positive-degree word `{n}`")));
                    }
                    m.insert(i, c.clone());
                }
                Monodromy::Table(m)
            }
        };
        for (n, c) in values {
            if !ground.is_unit(c) {
                return Err(Error::NotAUnit {
                    word: n.to_string(),
                    value: fmt_rational(c),
                });
            }
        }
        Ok(Rank1LocalSystem {
            name: name.into(),
            algebra: algebra.clone(),
            ground,
            rho,
        })
    }

    pub fn trivial(algebra: &Arc<Dga>) -> Self {
        Self::new("trivial", algebra, GroundRing::Integers, &[]).expect("trivial system is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<Dga> {
        &self.algebra
    }

    pub fn ground(&self) -> GroundRing {
        self.ground
    }

    pub fn monodromy(&self) -> &Monodromy {
        &self.rho
    }

    pub fn is_trivial(&self) -> bool {
        match &self.rho {
            Monodromy::Laurent(v) => v.iter().all(One::is_one),
            Monodromy::Table(m) => m.values().all(One::is_one),
        }
    }

    /// ρ̂ of a word's degree-0 corner.
    pub fn corner_value(&self, w: &Word) -> Result<Coeff> {
        match (&self.rho, w) {
            (Monodromy::Laurent(v), Word::Monomial(e)) => {
                let mut acc = Coeff::one();
                for (r, k) in v.iter().zip(e) {
                    let p = r.pow(k.unsigned_abs() as i32);
                    acc *= if *k < 0 { p.recip() } else { p };
                }
                Ok(acc)
            }
            (Monodromy::Table(m), Word::Basis(i)) => {
                let t = self.algebra.as_table().expect("table monodromy on table DGA");
                let tw = &t.words[*i];
                let c = if tw.degree == 0 {
                    *i
                } else {
                    tw.corner.ok_or_else(|| Error::MissingCorner { word: tw.name.clone() })?
                };
                Ok(m.get(&c).cloned().unwrap_or_else(Coeff::one))
            }
            _ => Err(Error::Invalid("word does not match the local system's backend".into())),
        }
    }

    /// Pointwise product ρ·ρ', the monodromy of `L ⊗ L'`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(Error::MixedAlgebra {
                left: self.algebra.name.clone(),
                right: other.algebra.name.clone(),
            });
        }
        let rho = match (&self.rho, &other.rho) {
            (Monodromy::Laurent(a), Monodromy::Laurent(b)) => {
                Monodromy::Laurent(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (Monodromy::Table(a), Monodromy::Table(b)) => {
                let mut m = a.clone();
                for (k, v) in b {
                    let e = m.entry(*k).or_insert_with(Coeff::one);
                    *e = &*e * v;
                }
                Monodromy::Table(m)
            }
            _ => unreachable!("same algebra implies same backend"),
        };
        let ground = if self.ground == GroundRing::Rationals || other.ground == GroundRing::Rationals {
            GroundRing::Rationals
        } else {
            GroundRing::Integers
        };
        Ok(Rank1LocalSystem {
            name: format!("{}*{}", self.name, other.name),
            algebra: self.algebra.clone(),
            ground,
            rho,
        })
    }

    /// Checks that ρ̂ is compatible with every product and differential
    /// entry, which is exactly what makes Φ^L a DGA map.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("local system {}", self.name));
        let Some(t) = self.algebra.as_table() else {
            return report;
        };
        if let Monodromy::Table(m) = &self.rho {
            if m.get(&t.unit).is_some_and(|v| !v.is_one()) {
                report.push("unit", t.words[t.unit].name.clone(), "ρ(unit) != 1");
            }
        }
        let value = |w: &Word| self.corner_value(w);
        for ((i, j), v) in t.product_entries() {
            let (Ok(a), Ok(b)) = (value(&Word::Basis(i)), value(&Word::Basis(j))) else {
                continue;
            };
            for w in v.keys() {
                if let Ok(c) = value(w) {
                    if c != &a * &b {
                        report.push(
                            "multiplicativity",
                            format!("({}, {}) -> {}", t.words[i].name, t.words[j].name, self.algebra.word_name(w)),
                            format!("{} != {}*{}", fmt_rational(&c), fmt_rational(&a), fmt_rational(&b)),
                        );
                    }
                }
            }
        }
        for (i, d) in t.differential.iter().enumerate() {
            let Ok(a) = value(&Word::Basis(i)) else {
                report.push("corner", t.words[i].name.clone(), "missing corner");
                continue;
            };
            for w in d.keys() {
                if value(w).is_ok_and(|c| c != a) {
                    report.push(
                        "differential",
                        format!("d {} -> {}", t.words[i].name, self.algebra.word_name(w)),
                        "corner monodromy changes along the differential",
                    );
                }
            }
        }
        report
    }
}

/// Φ^L: scales each basis word by ρ̂ of its degree-0 corner.
pub fn phi_twist(l: &Rank1LocalSystem, a: &AlgebraElement) -> Result<AlgebraElement> {
    if !Arc::ptr_eq(&l.algebra, &a.algebra) {
        return Err(Error::MixedAlgebra {
            left: l.algebra.name.clone(),
            right: a.algebra.name.clone(),
        });
    }
    let mut terms = Vec::with_capacity(a.terms.len());
    for (w, c) in &a.terms {
        terms.push((w.clone(), c * l.corner_value(w)?));
    }
    Ok(AlgebraElement::from_terms(&a.algebra, terms))
}
