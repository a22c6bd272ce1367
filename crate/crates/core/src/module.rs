//! Right DG modules over a coefficient DGA (DG local systems).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{
    add_term, coeff, fmt_terms, AlgebraElement, Backend, Coeff, Dga, GroundRing, Monodromy, Rank1LocalSystem,
    Terms, Word,
};
use crate::error::{Error, Result};
use crate::homology::homology_in;
use crate::linalg::{HomologyGroup, RatMatrix};
use crate::report::ValidationReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleWord {
    pub name: String,
    pub degree: i64,
}

/// How algebra words act on a finite module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleAction {
    /// `(module word, algebra word) -> module element`; absent entries are zero.
    Table(HashMap<(usize, usize), Terms<Word>>),
    /// One matrix per Laurent generator (column `j` is the image of word `j`)
    /// together with its inverse.
    Laurent {
        forward: Vec<RatMatrix>,
        inverse: Vec<RatMatrix>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModule {
    words: Vec<ModuleWord>,
    index: HashMap<String, usize>,
    differential: Vec<Terms<Word>>,
    action: ModuleAction,
}

impl FiniteModule {
    pub fn words(&self) -> &[ModuleWord] {
        &self.words
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn action(&self) -> &ModuleAction {
        &self.action
    }

    pub fn differential_entry(&self, i: usize) -> &Terms<Word> {
        &self.differential[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// Finitely many basis words per degree.
    Finite(FiniteModule),
    /// The Laurent ring acting on itself, possibly twisted by a rank-1
    /// system. Infinite over Z; homology is taken on exponent boxes of the
    /// given radius (see [`crate::complex`]).
    RegularLaurent { rho: Vec<Coeff>, radius: i64 },
}

/// A right DG module over a DGA, immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    name: String,
    algebra: Arc<Dga>,
    min_degree: i64,
    truncation: i64,
    kind: ModuleKind,
    origin: ModuleOrigin,
}

/// How a module was obtained, kept so it can be written back out compactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleOrigin {
    Declared,
    Regular,
    Twisted { base: Arc<DgModule>, system: Rank1LocalSystem },
}

pub const DEFAULT_BOX_RADIUS: i64 = 2;

impl DgModule {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<Dga> {
        &self.algebra
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Largest representable degree.
    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    pub fn origin(&self) -> &ModuleOrigin {
        &self.origin
    }

    pub fn as_finite(&self) -> Option<&FiniteModule> {
        match &self.kind {
            ModuleKind::Finite(f) => Some(f),
            ModuleKind::RegularLaurent { .. } => None,
        }
    }

    /// `A` acting on itself by right multiplication. Table DGAs give a finite
    /// module with the algebra's basis; Laurent rings give the regular module.
    pub fn regular(name: impl Into<String>, algebra: &Arc<Dga>) -> Result<Arc<DgModule>> {
        match algebra.backend() {
            Backend::Laurent(l) => Ok(Arc::new(DgModule {
                name: name.into(),
                algebra: algebra.clone(),
                min_degree: 0,
                truncation: 0,
                kind: ModuleKind::RegularLaurent {
                    rho: vec![Coeff::one(); l.generators().len()],
                    radius: DEFAULT_BOX_RADIUS,
                },
                origin: ModuleOrigin::Regular,
            })),
            Backend::Table(t) => {
                let mut b = ModuleBuilder::new(name, algebra);
                for w in t.words() {
                    b.word(&w.name, w.degree)?;
                }
                for ((i, j), v) in t.product_entries() {
                    b.set_action(i, j, v.iter().map(|(w, c)| (word_index(w), c.clone())).collect());
                }
                for i in 0..t.words().len() {
                    let d = t.differential_entry(i);
                    b.set_differential(i, d.iter().map(|(w, c)| (word_index(w), c.clone())).collect());
                }
                let mut m = (*b.build()?).clone();
                m.origin = ModuleOrigin::Regular;
                Ok(Arc::new(m))
            }
        }
    }

    /// Same as [`Self::regular`] with an explicit exponent-box radius.
    pub fn regular_with_radius(name: impl Into<String>, algebra: &Arc<Dga>, radius: i64) -> Result<Arc<DgModule>> {
        let m = Self::regular(name, algebra)?;
        let mut m = (*m).clone();
        if let ModuleKind::RegularLaurent { radius: r, .. } = &mut m.kind {
            *r = radius.max(0);
        }
        Ok(Arc::new(m))
    }

    /// The same module under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Arc<DgModule> {
        Arc::new(DgModule {
            name: name.into(),
            ..self.clone()
        })
    }

    pub fn box_radius(&self) -> Option<i64> {
        match &self.kind {
            ModuleKind::RegularLaurent { radius, .. } => Some(*radius),
            ModuleKind::Finite(_) => None,
        }
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        match (&self.kind, w) {
            (ModuleKind::Finite(f), Word::Basis(i)) => f.words[*i].degree,
            _ => 0,
        }
    }

    pub fn word_name(&self, w: &Word) -> String {
        match (&self.kind, w) {
            (ModuleKind::Finite(f), Word::Basis(i)) => f.words[*i].name.clone(),
            (ModuleKind::RegularLaurent { .. }, Word::Monomial(_)) => self.algebra.word_name(w),
            _ => "?".into(),
        }
    }

    /// Finite basis in a given degree. Empty for the regular Laurent module,
    /// whose words are enumerated on exponent boxes instead.
    pub fn basis_of_degree(&self, d: i64) -> Vec<Word> {
        match &self.kind {
            ModuleKind::Finite(f) => f
                .words
                .iter()
                .enumerate()
                .filter(|(_, w)| w.degree == d)
                .map(|(i, _)| Word::Basis(i))
                .collect(),
            ModuleKind::RegularLaurent { .. } => Vec::new(),
        }
    }

    pub fn differential_word(&self, w: &Word) -> Terms<Word> {
        match (&self.kind, w) {
            (ModuleKind::Finite(f), Word::Basis(i)) => f.differential[*i].clone(),
            _ => Terms::new(),
        }
    }

    /// Right action of an algebra word on a module word.
    pub fn act_words(&self, m: &Word, a: &Word) -> Result<Terms<Word>> {
        let degree = self.word_degree(m) + self.algebra.word_degree(a);
        if degree > self.truncation {
            return Err(Error::TruncationExceeded {
                degree,
                truncation: self.truncation,
            });
        }
        match (&self.kind, m, a) {
            (ModuleKind::Finite(f), Word::Basis(i), _) => match (&f.action, a) {
                (ModuleAction::Table(t), Word::Basis(j)) => Ok(t.get(&(*i, *j)).cloned().unwrap_or_default()),
                (ModuleAction::Laurent { forward, inverse }, Word::Monomial(e)) => {
                    let mut v = vec![Coeff::zero(); f.words.len()];
                    v[*i] = Coeff::one();
                    for (g, k) in e.iter().enumerate() {
                        let mat = if *k >= 0 { &forward[g] } else { &inverse[g] };
                        for _ in 0..k.unsigned_abs() {
                            v = mat.mul_vec(&v);
                        }
                    }
                    let mut t = Terms::new();
                    for (j, c) in v.into_iter().enumerate() {
                        add_term(&mut t, Word::Basis(j), c);
                    }
                    Ok(t)
                }
                _ => Err(Error::Invalid("algebra word does not match module backend".into())),
            },
            (ModuleKind::RegularLaurent { rho, .. }, Word::Monomial(x), Word::Monomial(y)) => {
                let mut scale = Coeff::one();
                for (r, k) in rho.iter().zip(y) {
                    let p = r.pow(k.unsigned_abs() as i32);
                    scale *= if *k < 0 { p.recip() } else { p };
                }
                let e: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                Ok(Terms::from([(Word::Monomial(e), scale)]))
            }
            _ => Err(Error::Invalid("word does not match module backend".into())),
        }
    }
}

fn word_index(w: &Word) -> usize {
    match w {
        Word::Basis(i) => *i,
        Word::Monomial(_) => unreachable!("table DGA words are basis indices"),
    }
}

/// Builder for finite modules.
pub struct ModuleBuilder {
    name: String,
    algebra: Arc<Dga>,
    words: Vec<ModuleWord>,
    index: HashMap<String, usize>,
    differential: HashMap<usize, Terms<Word>>,
    table: HashMap<(usize, usize), Terms<Word>>,
    laurent: BTreeMap<usize, RatMatrix>,
    min_degree: Option<i64>,
    truncation: Option<i64>,
}

impl ModuleBuilder {
    pub fn new(name: impl Into<String>, algebra: &Arc<Dga>) -> Self {
        ModuleBuilder {
            name: name.into(),
            algebra: algebra.clone(),
            words: Vec::new(),
            index: HashMap::new(),
            differential: HashMap::new(),
            table: HashMap::new(),
            laurent: BTreeMap::new(),
            min_degree: None,
            truncation: None,
        }
    }

    pub fn word(&mut self, name: &str, degree: i64) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let i = self.words.len();
        self.words.push(ModuleWord {
            name: name.to_string(),
            degree,
        });
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn set_min_degree(&mut self, d: i64) {
        self.min_degree = Some(d);
    }

    pub fn set_truncation(&mut self, d: i64) {
        self.truncation = Some(d);
    }

    /// Table backend: `m * a = value`.
    pub fn set_action(&mut self, m: usize, a: usize, value: Vec<(usize, Coeff)>) {
        let mut t = Terms::new();
        for (w, c) in value {
            add_term(&mut t, Word::Basis(w), c);
        }
        self.table.insert((m, a), t);
    }

    /// Laurent backend: `m * t_g = value`. Unset columns act as the identity.
    pub fn set_generator_action(&mut self, generator: usize, m: usize, value: Vec<(usize, Coeff)>) {
        let n = self.words.len();
        let mat = self
            .laurent
            .entry(generator)
            .or_insert_with(|| RatMatrix::identity(n));
        if mat.rows() < n {
            let old = mat.clone();
            *mat = RatMatrix::from_fn(n, n, |i, j| {
                if i < old.rows() && j < old.cols() {
                    old[(i, j)].clone()
                } else if i == j {
                    Coeff::one()
                } else {
                    Coeff::zero()
                }
            });
        }
        for i in 0..n {
            mat[(i, m)] = Coeff::zero();
        }
        for (w, c) in value {
            mat[(w, m)] += c;
        }
    }

    pub fn set_differential(&mut self, m: usize, value: Vec<(usize, Coeff)>) {
        let mut t = Terms::new();
        for (w, c) in value {
            add_term(&mut t, Word::Basis(w), c);
        }
        self.differential.insert(m, t);
    }

    pub fn build(self) -> Result<Arc<DgModule>> {
        let n = self.words.len();
        let lowest = self.words.iter().map(|w| w.degree).min().unwrap_or(0);
        let min_degree = self.min_degree.unwrap_or(lowest.min(0));
        if lowest < min_degree {
            return Err(Error::Invalid(format!(
                "module `{}` has words below its minimum degree {min_degree}",
                self.name
            )));
        }
        let action = match self.algebra.backend() {
            Backend::Table(t) => {
                let mut table = self.table;
                for i in 0..n {
                    table
                        .entry((i, t.unit_index()))
                        .or_insert_with(|| Terms::from([(Word::Basis(i), Coeff::one())]));
                }
                table.retain(|_, v| !v.is_empty());
                ModuleAction::Table(table)
            }
            Backend::Laurent(l) => {
                let mut forward = Vec::new();
                let mut inverse = Vec::new();
                for g in 0..l.generators().len() {
                    let m = self.laurent.get(&g).cloned().unwrap_or_else(|| RatMatrix::identity(n));
                    let inv = invert(&m).ok_or_else(|| {
                        Error::Invalid(format!("action of `{}` is not invertible", l.generators()[g]))
                    })?;
                    forward.push(m);
                    inverse.push(inv);
                }
                ModuleAction::Laurent { forward, inverse }
            }
        };
        let highest = self.words.iter().map(|w| w.degree).max().unwrap_or(0);
        let truncation = self
            .truncation
            .unwrap_or_else(|| self.algebra.truncation().unwrap_or(0).max(highest));
        let mut differential = vec![Terms::new(); n];
        for (i, t) in self.differential {
            differential[i] = t;
        }
        Ok(Arc::new(DgModule {
            name: self.name,
            algebra: self.algebra,
            min_degree,
            truncation,
            kind: ModuleKind::Finite(FiniteModule {
                words: self.words,
                index: self.index,
                differential,
                action,
            }),
            origin: ModuleOrigin::Declared,
        }))
    }
}

fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.rows();
    let mut aug = m.hcat(&RatMatrix::identity(n));
    let pivots = crate::linalg::rational::rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(aug.select_columns(&cols))
}

/// A finite linear combination of module words.
#[derive(Clone)]
pub struct ModuleElement {
    module: Arc<DgModule>,
    terms: Terms<Word>,
}

impl PartialEq for ModuleElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.module, &other.module) && self.terms == other.terms
    }
}

impl Eq for ModuleElement {}

impl ModuleElement {
    pub fn zero(module: &Arc<DgModule>) -> Self {
        ModuleElement {
            module: module.clone(),
            terms: Terms::new(),
        }
    }

    pub fn word(module: &Arc<DgModule>, w: Word) -> Self {
        ModuleElement {
            module: module.clone(),
            terms: Terms::from([(w, Coeff::one())]),
        }
    }

    pub fn named(module: &Arc<DgModule>, name: &str) -> Result<Self> {
        let f = module.as_finite().ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let i = f.index_of(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        Ok(Self::word(module, Word::Basis(i)))
    }

    pub fn from_terms(module: &Arc<DgModule>, terms: impl IntoIterator<Item = (Word, Coeff)>) -> Self {
        let mut t = Terms::new();
        for (w, c) in terms {
            add_term(&mut t, w, c);
        }
        ModuleElement {
            module: module.clone(),
            terms: t,
        }
    }

    pub fn module(&self) -> &Arc<DgModule> {
        &self.module
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| self.module.word_degree(w));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_terms(&self.module, self.terms.iter().map(|(w, x)| (w.clone(), x * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.module, &other.module), "adding elements of different modules");
        let mut t = self.terms.clone();
        for (w, c) in &other.terms {
            add_term(&mut t, w.clone(), c.clone());
        }
        ModuleElement {
            module: self.module.clone(),
            terms: t,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&coeff(-1)))
    }

    pub fn differential(&self) -> Self {
        let mut t = Terms::new();
        for (w, c) in &self.terms {
            for (v, k) in self.module.differential_word(w) {
                add_term(&mut t, v, k * c);
            }
        }
        ModuleElement {
            module: self.module.clone(),
            terms: t,
        }
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_terms(&self.terms, |w| self.module.word_name(w), None))
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.module.name, self)
    }
}

/// `m · a`, extended bilinearly.
pub fn act(m: &ModuleElement, a: &AlgebraElement) -> Result<ModuleElement> {
    if !Arc::ptr_eq(&m.module.algebra, a.algebra()) {
        return Err(Error::MixedAlgebra {
            left: m.module.algebra.name().to_string(),
            right: a.algebra().name().to_string(),
        });
    }
    let mut t = Terms::new();
    for (mw, cm) in &m.terms {
        for (aw, ca) in a.terms() {
            let c = cm * ca;
            for (w, k) in m.module.act_words(mw, aw)? {
                add_term(&mut t, w, k * &c);
            }
        }
    }
    Ok(ModuleElement {
        module: m.module.clone(),
        terms: t,
    })
}

/// Checks the module axioms on all basis tuples within the truncation.
pub fn validate_module(f: &Arc<DgModule>) -> ValidationReport {
    let mut report = ValidationReport::new(format!("module {}", f.name));
    let Some(fin) = f.as_finite() else {
        return report;
    };
    let a = &f.algebra;
    let m_el = |i: usize| ModuleElement::word(f, Word::Basis(i));
    for (i, w) in fin.words.iter().enumerate() {
        if w.degree < f.min_degree || w.degree > f.truncation {
            report.push("degree-range", w.name.clone(), format!("degree {}", w.degree));
        }
        let m = m_el(i);
        let dm = m.differential();
        if dm.terms.keys().any(|v| f.word_degree(v) != w.degree - 1) {
            report.push("differential-degree", w.name.clone(), dm.to_string());
        }
        let ddm = dm.differential();
        if !ddm.is_zero() {
            report.push("d-squared", w.name.clone(), ddm.to_string());
        }
        match act(&m, &AlgebraElement::unit(a)) {
            Ok(r) if r == m => {}
            Ok(r) => report.push("unit", w.name.clone(), r.to_string()),
            Err(e) => report.push("unit", w.name.clone(), e.to_string()),
        }
    }
    match (a.backend(), &fin.action) {
        (Backend::Table(t), ModuleAction::Table(_)) => {
            let aw: Vec<usize> = (0..t.words().len()).collect();
            for (i, w) in fin.words.iter().enumerate() {
                let m = m_el(i);
                for &j in &aw {
                    let dj = t.words()[j].degree;
                    if w.degree + dj > f.truncation {
                        continue;
                    }
                    let x = AlgebraElement::word(a, Word::Basis(j));
                    let mx = act(&m, &x).expect("within truncation");
                    if mx.terms.keys().any(|v| f.word_degree(v) != w.degree + dj) {
                        report.push("action-degree", format!("({}, {})", w.name, t.words()[j].name), mx.to_string());
                    }
                    // Leibniz
                    let lhs = mx.differential();
                    let s = if w.degree.rem_euclid(2) == 0 { coeff(1) } else { coeff(-1) };
                    let r1 = act(&m.differential(), &x).expect("degree drops");
                    let r2 = act(&m, &x.differential()).expect("degree drops").scale(&s);
                    let res = lhs.sub(&r1.add(&r2));
                    if !res.is_zero() {
                        report.push("leibniz", format!("({}, {})", w.name, t.words()[j].name), res.to_string());
                    }
                    for &k in &aw {
                        let dk = t.words()[k].degree;
                        if w.degree + dj + dk > f.truncation || dj + dk > t.truncation() {
                            continue;
                        }
                        let y = AlgebraElement::word(a, Word::Basis(k));
                        let left = act(&mx, &y).expect("within truncation");
                        let right = act(&m, &x.multiply(&y).expect("within truncation")).expect("within truncation");
                        if left != right {
                            report.push(
                                "associativity",
                                format!("({}, {}, {})", w.name, t.words()[j].name, t.words()[k].name),
                                left.sub(&right).to_string(),
                            );
                        }
                    }
                }
            }
        }
        (Backend::Laurent(l), ModuleAction::Laurent { forward, inverse }) => {
            let n = fin.words.len();
            let dmat = RatMatrix::from_fn(n, n, |r, c| fin.differential[c].get(&Word::Basis(r)).cloned().unwrap_or_default());
            for (g, name) in l.generators().iter().enumerate() {
                if forward[g].mul(&inverse[g]) != RatMatrix::identity(n) {
                    report.push("invertibility", name.clone(), "forward * inverse != identity");
                }
                for r in 0..n {
                    for c in 0..n {
                        if !forward[g][(r, c)].is_zero() && fin.words[r].degree != fin.words[c].degree {
                            report.push(
                                "action-degree",
                                format!("({}, {})", fin.words[c].name, name),
                                format!("reaches {}", fin.words[r].name),
                            );
                        }
                    }
                }
                if dmat.mul(&forward[g]) != forward[g].mul(&dmat) {
                    report.push("leibniz", name.clone(), "action does not commute with the differential");
                }
                for (h, other) in l.generators().iter().enumerate().skip(g + 1) {
                    if forward[g].mul(&forward[h]) != forward[h].mul(&forward[g]) {
                        report.push("associativity", format!("({name}, {other})"), "generator actions do not commute");
                    }
                }
            }
        }
        _ => report.push("backend", f.name.clone(), "action does not match the algebra backend"),
    }
    report
}

/// `F ⊗ L ≅ (Φ^L)^* F`: same graded module and differential, action `m · Φ^L(a)`.
pub fn twist_by_rank1(f: &Arc<DgModule>, l: &Rank1LocalSystem) -> Result<Arc<DgModule>> {
    if !Arc::ptr_eq(&f.algebra, l.algebra()) {
        return Err(Error::MixedAlgebra {
            left: f.algebra.name().to_string(),
            right: l.algebra().name().to_string(),
        });
    }
    let kind = match &f.kind {
        ModuleKind::Finite(fin) => {
            let action = match &fin.action {
                ModuleAction::Table(t) => {
                    let mut out = HashMap::new();
                    for ((m, a), v) in t {
                        let r = l.corner_value(&Word::Basis(*a))?;
                        let scaled: Terms<Word> = v.iter().map(|(w, c)| (w.clone(), c * &r)).collect();
                        out.insert((*m, *a), scaled);
                    }
                    ModuleAction::Table(out)
                }
                ModuleAction::Laurent { forward, inverse } => {
                    let Monodromy::Laurent(rho) = l.monodromy() else {
                        unreachable!("Laurent algebra carries Laurent monodromy")
                    };
                    let scale = |m: &RatMatrix, r: &Coeff| RatMatrix::from_fn(m.rows(), m.cols(), |i, j| &m[(i, j)] * r);
                    ModuleAction::Laurent {
                        forward: forward.iter().zip(rho).map(|(m, r)| scale(m, r)).collect(),
                        inverse: inverse.iter().zip(rho).map(|(m, r)| scale(m, &r.recip())).collect(),
                    }
                }
            };
            ModuleKind::Finite(FiniteModule {
                action,
                ..fin.clone()
            })
        }
        ModuleKind::RegularLaurent { rho, radius } => {
            let Monodromy::Laurent(r) = l.monodromy() else {
                unreachable!("Laurent algebra carries Laurent monodromy")
            };
            ModuleKind::RegularLaurent {
                rho: rho.iter().zip(r).map(|(a, b)| a * b).collect(),
                radius: *radius,
            }
        }
    };
    Ok(Arc::new(DgModule {
        name: format!("{}_{}", f.name, l.name()),
        kind,
        origin: ModuleOrigin::Twisted {
            base: f.clone(),
            system: l.clone(),
        },
        ..(**f).clone()
    }))
}

/// Matrix of `∂: F_q -> F_{q-1}` in the finite basis.
pub(crate) fn differential_matrix(f: &DgModule, q: i64) -> RatMatrix {
    let src = f.basis_of_degree(q);
    let dst = f.basis_of_degree(q - 1);
    let pos: HashMap<&Word, usize> = dst.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = RatMatrix::zeros(dst.len(), src.len());
    for (j, w) in src.iter().enumerate() {
        for (v, c) in f.differential_word(w) {
            m[(pos[&v], j)] += c;
        }
    }
    m
}

/// `H_q(F, ∂)` for each `q` in the range, over the integers.
pub fn module_homology(f: &Arc<DgModule>, degrees: RangeInclusive<i64>) -> Result<Vec<HomologyGroup>> {
    module_homology_in(f, degrees, GroundRing::Integers)
}

pub fn module_homology_in(
    f: &Arc<DgModule>,
    degrees: RangeInclusive<i64>,
    ground: GroundRing,
) -> Result<Vec<HomologyGroup>> {
    if f.as_finite().is_none() {
        return Err(Error::Invalid(format!(
            "module `{}` is infinitely generated over Z; take homology of a twisted complex instead",
            f.name
        )));
    }
    degrees
        .map(|q| homology_in(ground, &differential_matrix(f, q + 1), &differential_matrix(f, q)))
        .collect()
}
