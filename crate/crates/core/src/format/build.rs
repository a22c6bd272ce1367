//! Turning parsed sections into algebra, module, complex and map objects.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use super::expr::{parse_expr, parse_rational, Term};
use super::{Entry, FormatError, FormatErrorKind, ModelFile, Section, SectionKind};
use crate::algebra::{free_algebra, AlgebraElement, Backend, Coeff, Dga, GroundRing, Rank1LocalSystem, TableDgaBuilder, Word};
use crate::complex::{Chain, Generator, TwistedComplex};
use crate::error::Error;
use crate::maps::{ContinuationCocycle, HomotopyCocycle};
use crate::module::{twist_by_rank1, DgModule, ModuleBuilder, ModuleKind, ModuleOrigin};

pub const DEFAULT_TRUNCATION: i64 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Used by table and free DGAs that declare no `truncation`.
    pub default_truncation: i64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            default_truncation: DEFAULT_TRUNCATION,
        }
    }
}

impl BuildOptions {
    /// Reads `DGC_TRUNCATION` if set.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var("DGC_TRUNCATION") {
            Ok(v) => {
                let t: i64 = v
                    .trim()
                    .parse()
                    .map_err(|_| format!("DGC_TRUNCATION must be a non-negative integer, got `{v}`"))?;
                if t < 0 {
                    return Err(format!("DGC_TRUNCATION must be non-negative, got {t}"));
                }
                Ok(BuildOptions { default_truncation: t })
            }
            Err(_) => Ok(BuildOptions::default()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Object {
    Dga(Arc<Dga>),
    LocalSystem(Rank1LocalSystem),
    Module(Arc<DgModule>),
    Complex(Arc<TwistedComplex>),
    Map(ContinuationCocycle),
    Homotopy(HomotopyCocycle),
}

impl Object {
    pub fn name(&self) -> &str {
        match self {
            Object::Dga(a) => a.name(),
            Object::LocalSystem(l) => l.name(),
            Object::Module(m) => m.name(),
            Object::Complex(x) => x.name(),
            Object::Map(m) => m.name(),
            Object::Homotopy(h) => h.name(),
        }
    }

    pub fn kind(&self) -> SectionKind {
        match self {
            Object::Dga(_) => SectionKind::Dga,
            Object::LocalSystem(_) => SectionKind::LocalSystem,
            Object::Module(_) => SectionKind::Module,
            Object::Complex(_) => SectionKind::Complex,
            Object::Map(_) => SectionKind::Map,
            Object::Homotopy(_) => SectionKind::Homotopy,
        }
    }
}

/// Named objects in declaration order. Names are unique across all kinds.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    objects: Vec<Object>,
    index: HashMap<String, usize>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, object: Object) -> crate::error::Result<()> {
        let name = object.name().to_string();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        self.index.insert(name, self.objects.len());
        self.objects.push(object);
        Ok(())
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.index.get(name).map(|&i| &self.objects[i])
    }

    pub fn dga(&self, name: &str) -> Option<&Arc<Dga>> {
        match self.get(name)? {
            Object::Dga(a) => Some(a),
            _ => None,
        }
    }

    pub fn local_system(&self, name: &str) -> Option<&Rank1LocalSystem> {
        match self.get(name)? {
            Object::LocalSystem(l) => Some(l),
            _ => None,
        }
    }

    pub fn module(&self, name: &str) -> Option<&Arc<DgModule>> {
        match self.get(name)? {
            Object::Module(m) => Some(m),
            _ => None,
        }
    }

    pub fn complex(&self, name: &str) -> Option<&Arc<TwistedComplex>> {
        match self.get(name)? {
            Object::Complex(x) => Some(x),
            _ => None,
        }
    }

    pub fn map(&self, name: &str) -> Option<&ContinuationCocycle> {
        match self.get(name)? {
            Object::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn homotopy(&self, name: &str) -> Option<&HomotopyCocycle> {
        match self.get(name)? {
            Object::Homotopy(h) => Some(h),
            _ => None,
        }
    }

    pub fn complexes(&self) -> impl Iterator<Item = &Arc<TwistedComplex>> {
        self.objects.iter().filter_map(|o| match o {
            Object::Complex(x) => Some(x),
            _ => None,
        })
    }

    pub fn maps(&self) -> impl Iterator<Item = &ContinuationCocycle> {
        self.objects.iter().filter_map(|o| match o {
            Object::Map(m) => Some(m),
            _ => None,
        })
    }

    pub fn homotopies(&self) -> impl Iterator<Item = &HomotopyCocycle> {
        self.objects.iter().filter_map(|o| match o {
            Object::Homotopy(h) => Some(h),
            _ => None,
        })
    }
}

fn ferr(kind: FormatErrorKind, line: usize, column: usize, msg: impl Into<String>) -> FormatError {
    FormatError::new(kind, line, column, msg)
}

/// Library errors surfacing while building, located at an entry.
fn lib_err(e: Error, line: usize, column: usize) -> FormatError {
    let kind = match &e {
        Error::UnknownName(_) => FormatErrorKind::UnresolvedReference,
        Error::DuplicateName(_) => FormatErrorKind::DuplicateName,
        _ => FormatErrorKind::Semantic,
    };
    ferr(kind, line, column, e.to_string())
}

/// A piece of an entry value with its source location.
#[derive(Clone, Copy, Debug)]
struct Span<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Span<'a> {
    fn of(e: &'a Entry) -> Self {
        Span {
            text: &e.value,
            line: e.line,
            column: e.column,
        }
    }

    fn err(&self, kind: FormatErrorKind, msg: impl Into<String>) -> FormatError {
        ferr(kind, self.line, self.column, msg)
    }

    fn at(&self, offset: usize) -> Span<'a> {
        Span {
            text: &self.text[offset..],
            line: self.line,
            column: self.column + offset,
        }
    }

    fn trimmed(&self) -> Span<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        let s = self.at(lead);
        Span {
            text: s.text.trim_end(),
            ..s
        }
    }

    /// Nonempty trimmed pieces between separators.
    fn split(&self, sep: char) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, c) in self.text.char_indices().chain(std::iter::once((self.text.len(), sep))) {
            if c == sep {
                let piece = Span {
                    text: &self.text[start..i],
                    line: self.line,
                    column: self.column + start,
                }
                .trimmed();
                if !piece.text.is_empty() {
                    out.push(piece);
                }
                start = i + c.len_utf8();
            }
        }
        out
    }

    /// Splits at the first occurrence of `sep`.
    fn split_once(&self, sep: &str) -> Result<(Span<'a>, Span<'a>), FormatError> {
        let i = self
            .text
            .find(sep)
            .ok_or_else(|| self.err(FormatErrorKind::Syntax, format!("expected `{sep}` in `{}`", self.text)))?;
        let left = Span {
            text: &self.text[..i],
            ..*self
        };
        Ok((left.trimmed(), self.at(i + sep.len()).trimmed()))
    }

    fn expr(&self) -> Result<Vec<Term>, FormatError> {
        let terms = parse_expr(self.text).map_err(|(o, m)| ferr(FormatErrorKind::Syntax, self.line, self.column + o, m))?;
        Ok(terms.into_iter().filter(|t| !t.coefficient.is_zero()).collect())
    }

    fn rational(&self) -> Result<Coeff, FormatError> {
        parse_rational(self.text).map_err(|(o, m)| ferr(FormatErrorKind::Syntax, self.line, self.column + o, m))
    }

    fn integer(&self) -> Result<i64, FormatError> {
        self.text
            .parse()
            .map_err(|_| self.err(FormatErrorKind::Syntax, format!("expected an integer, found `{}`", self.text)))
    }

    fn ident(&self) -> Result<&'a str, FormatError> {
        let ok = self.text.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && self.text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if ok {
            Ok(self.text)
        } else {
            Err(self.err(FormatErrorKind::Syntax, format!("bad identifier `{}`", self.text)))
        }
    }

    /// `name:integer` pairs.
    fn name_degree(&self) -> Result<(&'a str, i64), FormatError> {
        let (n, d) = self.split_once(":")?;
        Ok((n.ident()?, d.integer()?))
    }
}

struct SectionReader<'a> {
    section: &'a Section,
}

impl<'a> SectionReader<'a> {
    fn new(section: &'a Section, allowed: &[&str]) -> Result<Self, FormatError> {
        for e in &section.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(ferr(
                    FormatErrorKind::Syntax,
                    e.line,
                    1,
                    format!("unknown key `{}` in [{}]", e.key, section.kind.tag()),
                ));
            }
        }
        Ok(SectionReader { section })
    }

    fn get(&self, key: &str) -> Option<Span<'a>> {
        self.section.get(key).map(Span::of)
    }

    fn require(&self, key: &str) -> Result<Span<'a>, FormatError> {
        self.get(key).ok_or_else(|| {
            ferr(
                FormatErrorKind::Syntax,
                self.section.line,
                1,
                format!("[{}] is missing `{key}`", self.section.kind.tag()),
            )
        })
    }
}

fn resolve<'w, T>(
    ws: &'w Workspace,
    span: Span<'_>,
    expected: SectionKind,
    pick: impl Fn(&'w Workspace, &str) -> Option<T>,
) -> Result<T, FormatError> {
    let name = span.ident()?;
    if let Some(v) = pick(ws, name) {
        return Ok(v);
    }
    let msg = match ws.get(name) {
        Some(o) => format!("`{name}` is a {}, expected a {}", o.kind().tag(), expected.tag()),
        None => format!("no earlier {} named `{name}`", expected.tag()),
    };
    Err(span.err(FormatErrorKind::UnresolvedReference, msg))
}

/// Evaluates an expression in an algebra: Laurent atoms are generator powers,
/// table atoms are basis words multiplied left to right.
fn algebra_element(a: &Arc<Dga>, span: Span<'_>) -> Result<AlgebraElement, FormatError> {
    let mut out = AlgebraElement::zero(a);
    for term in span.expr()? {
        let mut value = AlgebraElement::unit(a).scale(&term.coefficient);
        for (name, exp, off) in &term.atoms {
            let at = span.at(*off);
            if name.starts_with('@') {
                return Err(at.err(FormatErrorKind::Syntax, "generator reference in an algebra expression"));
            }
            let factor = match a.backend() {
                Backend::Laurent(l) => {
                    let i = l.generators().iter().position(|g| g == name).ok_or_else(|| {
                        at.err(FormatErrorKind::UnresolvedReference, format!("`{name}` is not a generator of `{}`", a.name()))
                    })?;
                    let mut e = vec![0; l.generators().len()];
                    e[i] = *exp;
                    AlgebraElement::monomial(a, &e)
                }
                Backend::Table(_) => {
                    if *exp < 0 {
                        return Err(at.err(FormatErrorKind::Semantic, format!("negative power of `{name}` in a table algebra")));
                    }
                    let w = AlgebraElement::named(a, name).map_err(|e| lib_err(e, at.line, at.column))?;
                    let mut p = AlgebraElement::unit(a);
                    for _ in 0..*exp {
                        p = p.multiply(&w).map_err(|e| lib_err(e, at.line, at.column))?;
                    }
                    p
                }
            };
            value = value.multiply(&factor).map_err(|e| lib_err(e, at.line, at.column))?;
        }
        out = &out + &value;
    }
    Ok(out)
}

/// A linear combination of named basis words, as `(index, coefficient)`.
/// A term without a name stands for `unit`, when there is one.
fn linear(
    span: Span<'_>,
    lookup: &dyn Fn(&str) -> Option<usize>,
    unit: Option<usize>,
) -> Result<Vec<(usize, Coeff)>, FormatError> {
    let mut out = Vec::new();
    for term in span.expr()? {
        let idx = match term.atoms.as_slice() {
            [] => unit.ok_or_else(|| span.err(FormatErrorKind::Semantic, "a bare number needs a unit word"))?,
            [(name, 1, off)] => {
                let at = span.at(*off);
                lookup(name).ok_or_else(|| at.err(FormatErrorKind::UnresolvedReference, format!("unknown basis word `{name}`")))?
            }
            _ => {
                return Err(span.err(
                    FormatErrorKind::Syntax,
                    "each term must be a coefficient times a single basis word",
                ))
            }
        };
        out.push((idx, term.coefficient));
    }
    Ok(out)
}

fn is_regular_like(m: &DgModule) -> bool {
    match m.origin() {
        ModuleOrigin::Regular => true,
        ModuleOrigin::Twisted { base, .. } => is_regular_like(base),
        ModuleOrigin::Declared => false,
    }
}

/// The module word named by a term's non-generator atoms.
fn module_word(m: &DgModule, atoms: &[(String, i64, usize)], span: Span<'_>) -> Result<Word, FormatError> {
    match m.kind() {
        ModuleKind::RegularLaurent { .. } => {
            let Backend::Laurent(l) = m.algebra().backend() else {
                unreachable!("regular Laurent module over a Laurent ring")
            };
            let mut e = vec![0; l.generators().len()];
            for (name, exp, off) in atoms {
                let i = l.generators().iter().position(|g| g == name).ok_or_else(|| {
                    span.at(*off)
                        .err(FormatErrorKind::UnresolvedReference, format!("`{name}` is not a generator"))
                })?;
                e[i] += exp;
            }
            Ok(Word::Monomial(e))
        }
        ModuleKind::Finite(f) => {
            if atoms.is_empty() {
                if is_regular_like(m) {
                    return Ok(m.algebra().unit_word());
                }
                return f
                    .index_of("1")
                    .map(Word::Basis)
                    .ok_or_else(|| span.err(FormatErrorKind::Semantic, "term names no module word"));
            }
            let mut parts = Vec::new();
            for (name, exp, off) in atoms {
                if *exp < 1 {
                    return Err(span.at(*off).err(FormatErrorKind::Semantic, "module words take positive exponents"));
                }
                for _ in 0..*exp {
                    parts.push(name.as_str());
                }
            }
            let name = parts.join("*");
            f.index_of(&name)
                .map(Word::Basis)
                .ok_or_else(|| span.at(atoms[0].2).err(FormatErrorKind::UnresolvedReference, format!("unknown module word `{name}`")))
        }
    }
}

/// Parses a chain such as `2*t@m - 1@M` in a twisted complex.
pub fn parse_chain(x: &TwistedComplex, text: &str) -> Result<Chain, FormatError> {
    let span = Span { text, line: 1, column: 1 };
    let mut chain = Chain::zero();
    for term in span.expr()? {
        let Some(((gname, _, goff), rest)) = term.atoms.split_last() else {
            return Err(span.err(FormatErrorKind::Syntax, "chain terms end in `@generator`"));
        };
        let Some(gname) = gname.strip_prefix('@') else {
            return Err(span.at(*goff).err(FormatErrorKind::Syntax, "chain terms end in `@generator`"));
        };
        let g = x.generator_index(gname).ok_or_else(|| {
            span.at(*goff)
                .err(FormatErrorKind::UnresolvedReference, format!("no generator `{gname}` in `{}`", x.name()))
        })?;
        let w = module_word(x.module(), rest, span)?;
        chain.add_term(g, w, term.coefficient);
    }
    Ok(chain)
}

/// Parses an element of an algebra, e.g. for command-line arguments.
pub fn parse_algebra_element(a: &Arc<Dga>, text: &str) -> Result<AlgebraElement, FormatError> {
    algebra_element(a, Span { text, line: 1, column: 1 })
}

fn build_dga(s: &Section, options: &BuildOptions) -> Result<Arc<Dga>, FormatError> {
    let r = SectionReader::new(
        s,
        &["name", "kind", "generators", "truncation", "basis", "unit", "product", "differential", "corners", "strict_corners"],
    )?;
    let name = r.require("name")?.ident()?;
    let kind = r.require("kind")?;
    let truncation = match r.get("truncation") {
        Some(t) => t.integer()?,
        None => options.default_truncation,
    };
    let only = |keys: &[&str]| -> Result<(), FormatError> {
        for e in &s.entries {
            if !["name", "kind"].contains(&e.key.as_str()) && !keys.contains(&e.key.as_str()) {
                return Err(ferr(
                    FormatErrorKind::Syntax,
                    e.line,
                    1,
                    format!("key `{}` does not apply to kind `{}`", e.key, kind.text),
                ));
            }
        }
        Ok(())
    };
    match kind.text {
        "laurent_group_ring" => {
            only(&["generators"])?;
            let gens = r.require("generators")?.split(',');
            let names: Vec<&str> = gens.iter().map(|g| g.ident()).collect::<Result<_, _>>()?;
            Dga::laurent(name, &names).map_err(|e| lib_err(e, s.line, 1))
        }
        "free" => {
            only(&["generators", "differential", "truncation"])?;
            let gens = r.require("generators")?.split(',');
            let gens: Vec<(&str, i64)> = gens.iter().map(|g| g.name_degree()).collect::<Result<_, _>>()?;
            let mut diff: Vec<(&str, Vec<(Vec<&str>, i64)>)> = Vec::new();
            let mut terms_store = Vec::new();
            if let Some(d) = r.get("differential") {
                for item in d.split(';') {
                    let (g, v) = item.split_once("->")?;
                    let g = g.ident()?;
                    if !gens.iter().any(|(n, _)| *n == g) {
                        return Err(item.err(FormatErrorKind::UnresolvedReference, format!("`{g}` is not a generator")));
                    }
                    terms_store.push((g, v, v.expr()?));
                }
            }
            for (g, v, terms) in &terms_store {
                let mut value = Vec::new();
                for t in terms {
                    if !t.coefficient.is_integer() {
                        return Err(v.err(FormatErrorKind::Semantic, "free differentials take integer coefficients"));
                    }
                    let c: i64 = t
                        .coefficient
                        .to_integer()
                        .try_into()
                        .map_err(|_| v.err(FormatErrorKind::Semantic, "coefficient out of range"))?;
                    let mut seq = Vec::new();
                    for (a, exp, off) in &t.atoms {
                        if !gens.iter().any(|(n, _)| n == a) || *exp < 1 {
                            return Err(v
                                .at(*off)
                                .err(FormatErrorKind::UnresolvedReference, format!("`{a}` is not a generator")));
                        }
                        for _ in 0..*exp {
                            seq.push(a.as_str());
                        }
                    }
                    value.push((seq, c));
                }
                diff.push((g, value));
            }
            free_algebra(name, &gens, truncation, &diff).map_err(|e| lib_err(e, s.line, 1))
        }
        "table" => {
            only(&["truncation", "basis", "unit", "product", "differential", "corners", "strict_corners"])?;
            let mut b = TableDgaBuilder::new(name, truncation);
            if let Some(sc) = r.get("strict_corners") {
                match sc.text {
                    "true" => b = b.strict_corners(),
                    "false" => {}
                    other => return Err(sc.err(FormatErrorKind::Syntax, format!("expected true or false, found `{other}`"))),
                }
            }
            let mut names: HashMap<String, usize> = HashMap::new();
            let mut first_zero = None;
            for w in r.require("basis")?.split(',') {
                let (n, d) = w.name_degree()?;
                let i = b.word(n, d).map_err(|e| lib_err(e, w.line, w.column))?;
                if d == 0 && first_zero.is_none() {
                    first_zero = Some(i);
                }
                names.insert(n.to_string(), i);
            }
            let lookup = |n: &str| names.get(n).copied();
            let unit = match r.get("unit") {
                Some(u) => {
                    let n = u.ident()?;
                    b.set_unit(n).map_err(|e| lib_err(e, u.line, u.column))?;
                    lookup(n)
                }
                None => first_zero,
            };
            if let Some(p) = r.get("product") {
                for item in p.split(';') {
                    let (lhs, rhs) = item.split_once("=")?;
                    let (x, y) = lhs.split_once("*")?;
                    let word = |sp: Span<'_>| -> Result<usize, FormatError> {
                        lookup(sp.ident()?)
                            .ok_or_else(|| sp.err(FormatErrorKind::UnresolvedReference, format!("unknown basis word `{}`", sp.text)))
                    };
                    let (i, j) = (word(x)?, word(y)?);
                    b.set_product(i, j, linear(rhs, &lookup, unit)?);
                }
            }
            if let Some(d) = r.get("differential") {
                for item in d.split(';') {
                    let (lhs, rhs) = item.split_once("->")?;
                    let i = lookup(lhs.ident()?)
                        .ok_or_else(|| lhs.err(FormatErrorKind::UnresolvedReference, format!("unknown basis word `{}`", lhs.text)))?;
                    b.set_differential(i, linear(rhs, &lookup, unit)?);
                }
            }
            if let Some(c) = r.get("corners") {
                for item in c.split(';') {
                    let (w, k) = item.split_once(":")?;
                    let find = |sp: Span<'_>| -> Result<usize, FormatError> {
                        lookup(sp.ident()?)
                            .ok_or_else(|| sp.err(FormatErrorKind::UnresolvedReference, format!("unknown basis word `{}`", sp.text)))
                    };
                    b.set_corner(find(w)?, find(k)?);
                }
            }
            b.build().map_err(|e| lib_err(e, s.line, 1))
        }
        other => Err(kind.err(
            FormatErrorKind::Syntax,
            format!("unknown dga kind `{other}` (expected laurent_group_ring, table or free)"),
        )),
    }
}

fn build_local_system(s: &Section, ws: &Workspace) -> Result<Rank1LocalSystem, FormatError> {
    let r = SectionReader::new(s, &["name", "over", "rho", "ground"])?;
    let name = r.require("name")?.ident()?;
    let a = resolve(ws, r.require("over")?, SectionKind::Dga, |w, n| w.dga(n).cloned())?;
    let ground = match r.get("ground") {
        None => GroundRing::Integers,
        Some(g) => match g.text {
            "z" => GroundRing::Integers,
            "q" => GroundRing::Rationals,
            other => return Err(g.err(FormatErrorKind::Syntax, format!("ground must be z or q, found `{other}`"))),
        },
    };
    let mut values = Vec::new();
    if let Some(rho) = r.get("rho") {
        for item in rho.split(',') {
            let (w, v) = item.split_once(":")?;
            values.push((w.ident()?, v.rational()?, item));
        }
    }
    let pairs: Vec<(&str, Coeff)> = values.iter().map(|(w, v, _)| (*w, v.clone())).collect();
    Rank1LocalSystem::new(name, &a, ground, &pairs).map_err(|e| {
        let at = match &e {
            Error::UnknownName(n) | Error::NotAUnit { word: n, .. } => values.iter().find(|(w, _, _)| w == n).map(|v| v.2),
            _ => None,
        };
        match at {
            Some(sp) => lib_err(e, sp.line, sp.column),
            None => lib_err(e, s.line, 1),
        }
    })
}

fn build_module(s: &Section, ws: &Workspace) -> Result<Arc<DgModule>, FormatError> {
    let r = SectionReader::new(
        s,
        &["name", "over", "kind", "radius", "base", "twist", "basis", "action", "differential", "min_degree", "truncation"],
    )?;
    let name = r.require("name")?.ident()?;
    let kind = match r.get("kind") {
        Some(k) => k.text,
        None if r.get("twist").is_some() => "twisted",
        None => "finite",
    };
    let forbid = |keys: &[&str]| -> Result<(), FormatError> {
        for k in keys {
            if let Some(e) = s.get(k) {
                return Err(ferr(FormatErrorKind::Syntax, e.line, 1, format!("key `{k}` does not apply to a {kind} module")));
            }
        }
        Ok(())
    };
    match kind {
        "regular" => {
            forbid(&["base", "twist", "basis", "action", "differential", "min_degree", "truncation"])?;
            let a = resolve(ws, r.require("over")?, SectionKind::Dga, |w, n| w.dga(n).cloned())?;
            match r.get("radius") {
                Some(rad) => DgModule::regular_with_radius(name, &a, rad.integer()?),
                None => DgModule::regular(name, &a),
            }
            .map_err(|e| lib_err(e, s.line, 1))
        }
        "twisted" => {
            forbid(&["over", "radius", "basis", "action", "differential", "min_degree", "truncation"])?;
            let base = resolve(ws, r.require("base")?, SectionKind::Module, |w, n| w.module(n).cloned())?;
            let tw = r.require("twist")?;
            let l = resolve(ws, tw, SectionKind::LocalSystem, |w, n| w.local_system(n).cloned())?;
            let m = twist_by_rank1(&base, &l).map_err(|e| lib_err(e, tw.line, tw.column))?;
            Ok(m.renamed(name))
        }
        "finite" => {
            forbid(&["radius", "base", "twist"])?;
            let a = resolve(ws, r.require("over")?, SectionKind::Dga, |w, n| w.dga(n).cloned())?;
            let mut b = ModuleBuilder::new(name, &a);
            let mut names: HashMap<String, usize> = HashMap::new();
            for w in r.require("basis")?.split(',') {
                let (n, d) = w.name_degree()?;
                let i = b.word(n, d).map_err(|e| lib_err(e, w.line, w.column))?;
                names.insert(n.to_string(), i);
            }
            let lookup = |n: &str| names.get(n).copied();
            let word = |sp: Span<'_>| -> Result<usize, FormatError> {
                lookup(sp.ident()?)
                    .ok_or_else(|| sp.err(FormatErrorKind::UnresolvedReference, format!("unknown module word `{}`", sp.text)))
            };
            if let Some(act) = r.get("action") {
                for item in act.split(';') {
                    let (lhs, rhs) = item.split_once("=")?;
                    let (m, w) = lhs.split_once("*")?;
                    let mi = word(m)?;
                    let value = linear(rhs, &lookup, None)?;
                    match a.backend() {
                        Backend::Laurent(l) => {
                            let g = l.generators().iter().position(|g| g == w.text).ok_or_else(|| {
                                w.err(FormatErrorKind::UnresolvedReference, format!("`{}` is not a generator of `{}`", w.text, a.name()))
                            })?;
                            b.set_generator_action(g, mi, value);
                        }
                        Backend::Table(t) => {
                            let compact: String = w.text.chars().filter(|c| !c.is_whitespace()).collect();
                            let ai = t.index_of(&compact).ok_or_else(|| {
                                w.err(FormatErrorKind::UnresolvedReference, format!("`{}` is not a basis word of `{}`", w.text, a.name()))
                            })?;
                            b.set_action(mi, ai, value);
                        }
                    }
                }
            }
            if let Some(d) = r.get("differential") {
                for item in d.split(';') {
                    let (lhs, rhs) = item.split_once("->")?;
                    let mi = word(lhs)?;
                    b.set_differential(mi, linear(rhs, &lookup, None)?);
                }
            }
            if let Some(v) = r.get("min_degree") {
                b.set_min_degree(v.integer()?);
            }
            if let Some(v) = r.get("truncation") {
                b.set_truncation(v.integer()?);
            }
            b.build().map_err(|e| lib_err(e, s.line, 1))
        }
        other => Err(r
            .require("kind")?
            .err(FormatErrorKind::Syntax, format!("unknown module kind `{other}` (expected finite, regular or twisted)"))),
    }
}

/// `x,y:expr; ...` with `x` resolved in `from` and `y` in `to`.
fn pair_entries<'s>(
    span: Span<'s>,
    from: &TwistedComplex,
    to: &TwistedComplex,
) -> Result<Vec<(&'s str, &'s str, AlgebraElement)>, FormatError> {
    let a = from.module().algebra();
    let mut out = Vec::new();
    for item in span.split(';') {
        let (pair, value) = item.split_once(":")?;
        let (x, y) = pair.split_once(",")?;
        let (x, y) = (x.ident()?, y.ident()?);
        if from.generator_index(x).is_none() {
            return Err(pair.err(FormatErrorKind::UnresolvedReference, format!("no generator `{x}` in `{}`", from.name())));
        }
        if to.generator_index(y).is_none() {
            return Err(pair.err(FormatErrorKind::UnresolvedReference, format!("no generator `{y}` in `{}`", to.name())));
        }
        out.push((x, y, algebra_element(a, value)?));
    }
    Ok(out)
}

fn build_complex(s: &Section, ws: &Workspace) -> Result<TwistedComplex, FormatError> {
    let r = SectionReader::new(s, &["name", "module", "generators", "cocycle"])?;
    let name = r.require("name")?.ident()?;
    let module = resolve(ws, r.require("module")?, SectionKind::Module, |w, n| w.module(n).cloned())?;
    let mut gens = Vec::new();
    for g in r.require("generators")?.split(',') {
        // name:degree[@action][:label]
        let parts = g.split(':');
        if parts.len() < 2 || parts.len() > 3 {
            return Err(g.err(FormatErrorKind::Syntax, "expected name:degree[@action][:label]"));
        }
        let gname = parts[0].ident()?;
        let mut gen = match parts[1].split_once("@") {
            Ok((d, act)) => Generator::new(gname, d.integer()?).with_action(act.rational()?),
            Err(_) => Generator::new(gname, parts[1].integer()?),
        };
        if let Some(label) = parts.get(2) {
            gen = gen.with_label(label.ident()?);
        }
        gens.push(gen);
    }
    let empty = TwistedComplex::new(name, &module, gens.clone(), vec![]).map_err(|e| lib_err(e, s.line, 1))?;
    let entries = match r.get("cocycle") {
        Some(c) => pair_entries(c, &empty, &empty)?,
        None => Vec::new(),
    };
    TwistedComplex::new(name, &module, gens, entries).map_err(|e| lib_err(e, s.line, 1))
}

fn build_map(s: &Section, ws: &Workspace) -> Result<ContinuationCocycle, FormatError> {
    let r = SectionReader::new(s, &["name", "from", "to", "nu"])?;
    let name = r.require("name")?.ident()?;
    let from = resolve(ws, r.require("from")?, SectionKind::Complex, |w, n| w.complex(n).cloned())?;
    let to = resolve(ws, r.require("to")?, SectionKind::Complex, |w, n| w.complex(n).cloned())?;
    let entries = match r.get("nu") {
        Some(nu) => pair_entries(nu, &from, &to)?,
        None => Vec::new(),
    };
    ContinuationCocycle::new(name, &from, &to, entries).map_err(|e| lib_err(e, s.line, 1))
}

fn build_homotopy(s: &Section, ws: &Workspace) -> Result<HomotopyCocycle, FormatError> {
    let r = SectionReader::new(s, &["name", "map0", "map1", "h"])?;
    let name = r.require("name")?.ident()?;
    let nu0 = resolve(ws, r.require("map0")?, SectionKind::Map, |w, n| w.map(n).cloned())?;
    let nu1 = resolve(ws, r.require("map1")?, SectionKind::Map, |w, n| w.map(n).cloned())?;
    let entries = match r.get("h") {
        Some(h) => pair_entries(h, nu0.source(), nu0.target())?,
        None => Vec::new(),
    };
    HomotopyCocycle::new(name, &nu0, &nu1, entries).map_err(|e| lib_err(e, s.line, 1))
}

/// Builds every section in order; each may refer only to earlier ones.
pub fn build(file: &ModelFile, options: &BuildOptions) -> Result<Workspace, FormatError> {
    let mut ws = Workspace::new();
    for s in &file.sections {
        let object = match s.kind {
            SectionKind::Dga => Object::Dga(build_dga(s, options)?),
            SectionKind::LocalSystem => Object::LocalSystem(build_local_system(s, &ws)?),
            SectionKind::Module => Object::Module(build_module(s, &ws)?),
            SectionKind::Complex => Object::Complex(Arc::new(build_complex(s, &ws)?)),
            SectionKind::Map => Object::Map(build_map(s, &ws)?),
            SectionKind::Homotopy => Object::Homotopy(build_homotopy(s, &ws)?),
        };
        if ws.get(object.name()).is_some() {
            let e = s.get("name").expect("every section has a name");
            return Err(ferr(
                FormatErrorKind::DuplicateName,
                e.line,
                e.column,
                format!("`{}` is already declared", object.name()),
            ));
        }
        ws.insert(object).expect("name checked above");
    }
    Ok(ws)
}
