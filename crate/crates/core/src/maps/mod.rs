//! Continuation cocycles `ν`, homotopy cocycles `h` and what they induce.
//!
//! `Ψ(α⊗x⁺) = Σ α·ν_{x⁺,y⁻} ⊗ y⁻` and `𝐡(α⊗x⁺) = (-1)^{|α|} Σ α·h_{x⁺,y⁻} ⊗ y⁻`.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{add_term, coeff, AlgebraElement, Coeff, Terms, Word};
use crate::complex::{Boxes, Chain, TotalComplex, TwistedComplex};
use crate::error::{Error, Result};
use crate::homology::integral;
use crate::linalg::{rational::solve_q, HomologyGroup, IntMatrix, RatMatrix};
use crate::report::ValidationReport;

pub type MapEntries = BTreeMap<(usize, usize), AlgebraElement>;

fn sign(k: i64) -> Coeff {
    if k.rem_euclid(2) == 0 {
        coeff(1)
    } else {
        coeff(-1)
    }
}

fn check_algebra(x: &TwistedComplex, m: &AlgebraElement) -> Result<()> {
    if Arc::ptr_eq(m.algebra(), x.module().algebra()) {
        Ok(())
    } else {
        Err(Error::MixedAlgebra {
            left: x.module().algebra().name().to_string(),
            right: m.algebra().name().to_string(),
        })
    }
}

fn collect_entries(
    source: &TwistedComplex,
    target: &TwistedComplex,
    entries: Vec<(&str, &str, AlgebraElement)>,
) -> Result<MapEntries> {
    let mut out = MapEntries::new();
    for (x, y, v) in entries {
        let i = source.generator_index(x).ok_or_else(|| Error::UnknownName(x.to_string()))?;
        let j = target.generator_index(y).ok_or_else(|| Error::UnknownName(y.to_string()))?;
        check_algebra(source, &v)?;
        let slot = out.entry((i, j)).or_insert_with(|| AlgebraElement::zero(v.algebra()));
        *slot = &*slot + &v;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Applies `c ↦ Σ ε(α) α·e_{x,y} ⊗ y` where `ε(α) = (-1)^{|α|}` if `graded`.
fn apply_entries(source: &TwistedComplex, entries: &MapEntries, c: &Chain, graded: bool) -> Result<Chain> {
    let f = source.module();
    let mut out = Chain::zero();
    for ((x, w), k) in c.terms() {
        let k = if graded { k * sign(f.word_degree(w)) } else { k.clone() };
        for ((_, y), e) in entries.range((*x, 0)..(*x + 1, 0)) {
            for (aw, ac) in e.terms() {
                for (v, r) in f.act_words(w, aw)? {
                    out.add_term(*y, v, r * ac * &k);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ContinuationCocycle {
    name: String,
    source: Arc<TwistedComplex>,
    target: Arc<TwistedComplex>,
    entries: MapEntries,
}

impl ContinuationCocycle {
    pub fn new(
        name: impl Into<String>,
        source: &Arc<TwistedComplex>,
        target: &Arc<TwistedComplex>,
        entries: Vec<(&str, &str, AlgebraElement)>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(source.module(), target.module()) && source.module() != target.module() {
            return Err(Error::EndpointMismatch(format!(
                "{} and {} are built on different modules",
                source.name(),
                target.name()
            )));
        }
        let entries = collect_entries(source, target, entries)?;
        Ok(Self::from_parts(name.into(), source.clone(), target.clone(), entries))
    }

    pub(crate) fn from_parts(
        name: String,
        source: Arc<TwistedComplex>,
        target: Arc<TwistedComplex>,
        mut entries: MapEntries,
    ) -> Self {
        entries.retain(|_, v| !v.is_zero());
        ContinuationCocycle {
            name,
            source,
            target,
            entries,
        }
    }

    /// `ν_{x,x} = 1`, all other entries zero.
    pub fn identity(x: &Arc<TwistedComplex>) -> Self {
        let a = x.module().algebra();
        let entries = (0..x.generators().len()).map(|i| ((i, i), AlgebraElement::unit(a))).collect();
        Self::from_parts(format!("id_{}", x.name()), x.clone(), x.clone(), entries)
    }

    pub fn zero(source: &Arc<TwistedComplex>, target: &Arc<TwistedComplex>) -> Self {
        Self::from_parts("0".into(), source.clone(), target.clone(), MapEntries::new())
    }

    /// The inclusion of a subcomplex spanned by a subset of generators, matched by name.
    pub fn inclusion(sub: &Arc<TwistedComplex>, full: &Arc<TwistedComplex>) -> Result<Self> {
        let a = sub.module().algebra();
        let mut entries = MapEntries::new();
        for (i, g) in sub.generators().iter().enumerate() {
            let j = full.generator_index(&g.name).ok_or_else(|| Error::UnknownName(g.name.clone()))?;
            entries.insert((i, j), AlgebraElement::unit(a));
        }
        Ok(Self::from_parts(
            format!("{}->{}", sub.name(), full.name()),
            sub.clone(),
            full.clone(),
            entries,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<TwistedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TwistedComplex> {
        &self.target
    }

    pub fn entries(&self) -> &MapEntries {
        &self.entries
    }

    pub fn entry(&self, x: usize, y: usize) -> Option<&AlgebraElement> {
        self.entries.get(&(x, y))
    }

    /// Element-level `Ψ`.
    pub fn apply(&self, c: &Chain) -> Result<Chain> {
        apply_entries(&self.source, &self.entries, c, false)
    }

    /// Matrices of `Ψ` on the source degrees `window`, with `D⁻Ψ = ΨD⁺` checked on every cell.
    pub fn matrices(&self, window: RangeInclusive<i64>) -> Result<MapMatrices<'_>> {
        MapMatrices::new(self, *window.start(), *window.end())
    }

    /// Default window on which `Ψ` and both differentials stay inside the truncation.
    pub fn window(&self) -> (i64, i64) {
        joint_window(&self.source, &self.target, 0)
    }
}

fn joint_window(s: &TwistedComplex, t: &TwistedComplex, slack: i64) -> (i64, i64) {
    let (lo, mut hi) = s.degree_window(-1);
    if s.module().algebra().truncation().is_some() {
        hi = hi.min(s.module().truncation() + t.min_generator_degree().unwrap_or(0) - slack);
    }
    (lo, hi)
}

/// Reports degree, class-label and continuation-identity violations:
/// `∂ν_{x,y} = Σ m_{x,z}ν_{z,y} + Σ (-1)^{|x|-|z|-1} ν_{x,z}m_{z,y}`.
pub fn validate_continuation(nu: &ContinuationCocycle) -> ValidationReport {
    let mut report = ValidationReport::new(format!("continuation {}", nu.name));
    let (s, t) = (&nu.source, &nu.target);
    check_shape(&mut report, s, t, &nu.entries, 0);
    let a = s.module().algebra();
    for i in 0..s.generators().len() {
        for j in 0..t.generators().len() {
            let lhs = nu.entries.get(&(i, j)).map_or_else(|| AlgebraElement::zero(a), |v| v.differential());
            let mut rhs = AlgebraElement::zero(a);
            let mut failed = None;
            for ((_, z), m) in s.cocycle().range((i, 0)..(i + 1, 0)) {
                if let Some(v) = nu.entries.get(&(*z, j)) {
                    match m.multiply(v) {
                        Ok(p) => rhs = &rhs + &p,
                        Err(e) => failed = Some(e),
                    }
                }
            }
            for ((_, z), v) in nu.entries.range((i, 0)..(i + 1, 0)) {
                if let Some(m) = t.cocycle().get(&(*z, j)) {
                    match v.multiply(m) {
                        Ok(p) => {
                            let e = s.generators()[i].degree - t.generators()[*z].degree - 1;
                            rhs = &rhs + &p.scale(&sign(e));
                        }
                        Err(e) => failed = Some(e),
                    }
                }
            }
            let loc = format!("({}, {})", s.generators()[i].name, t.generators()[j].name);
            if let Some(e) = failed {
                report.push("truncation", loc, e.to_string());
            } else {
                let r = &lhs - &rhs;
                if !r.is_zero() {
                    report.push("continuation", loc, r.to_string());
                }
            }
        }
    }
    report
}

fn check_shape(report: &mut ValidationReport, s: &TwistedComplex, t: &TwistedComplex, entries: &MapEntries, shift: i64) {
    for ((i, j), v) in entries {
        let (x, y) = (&s.generators()[*i], &t.generators()[*j]);
        let d = x.degree - y.degree + shift;
        let loc = format!("({}, {})", x.name, y.name);
        if d < 0 || !v.is_homogeneous_of(d) {
            report.push("degree", loc.clone(), format!("{v} should have degree {d}"));
        }
        if let (Some(p), Some(q)) = (&x.class_label, &t.generators()[*j].class_label) {
            if p != q {
                report.push("class-label", loc, format!("{p} != {q}"));
            }
        }
    }
}

/// `Ψ` as matrices on a window of the source, with target boxes enlarged to hold every image.
#[derive(Debug)]
pub struct MapMatrices<'a> {
    pub source: TotalComplex<'a>,
    pub target: TotalComplex<'a>,
    maps: BTreeMap<i64, RatMatrix>,
}

impl<'a> MapMatrices<'a> {
    fn new(nu: &'a ContinuationCocycle, lo: i64, hi: i64) -> Result<Self> {
        let source = TotalComplex::new(&nu.source, lo - 1, hi + 1)?;
        let mut images: BTreeMap<i64, Vec<Chain>> = BTreeMap::new();
        for n in lo - 1..=hi + 1 {
            for (g, w) in source.basis(n) {
                let cell = Chain::cell(*g, w.clone());
                let img = nu.apply(&cell)?;
                let lhs = nu.target.apply_differential(&img)?;
                let rhs = nu.apply(&nu.source.apply_differential(&cell)?)?;
                if lhs != rhs {
                    let diff = lhs.sub(&rhs);
                    let row = diff.support().next().unwrap_or(0);
                    let col = source.position(n, &(*g, w.clone())).unwrap_or(0);
                    return Err(Error::ChainMapViolation { degree: n, row, col });
                }
                images.entry(n).or_default().push(img);
            }
        }
        let all: Vec<Chain> = images.values().flatten().cloned().collect();
        let boxes = Boxes::build(&nu.target, &all);
        let target = TotalComplex::with_boxes(&nu.target, boxes, lo - 1, hi + 1)?;
        let mut maps = BTreeMap::new();
        for (n, imgs) in images {
            let cols = imgs.iter().map(|c| target.to_vector(c, n)).collect::<Result<Vec<_>>>()?;
            maps.insert(n, RatMatrix::from_columns(target.dim(n), &cols));
        }
        Ok(MapMatrices { source, target, maps })
    }

    /// `Ψ_n: C_n(X⁺) -> C_n(X⁻)`.
    pub fn matrix(&self, n: i64) -> RatMatrix {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.target.dim(n), self.source.dim(n)))
    }
}

/// `Ψ_*` in degree `k`: columns are images of the source generators in target coordinates.
/// Generator order is torsion first, then free; `*_orders` give each generator's order (0 = infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub degree: i64,
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    pub source_orders: Vec<num_bigint::BigInt>,
    pub target_orders: Vec<num_bigint::BigInt>,
    pub matrix: IntMatrix,
}

impl InducedMap {
    /// Block acting on the free generators.
    pub fn free_part(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.target_orders.len()).filter(|&i| self.target_orders[i].is_zero()).collect();
        let cols: Vec<usize> = (0..self.source_orders.len()).filter(|&j| self.source_orders[j].is_zero()).collect();
        self.matrix.select_rows(&rows).select_columns(&cols)
    }
}

pub fn induced_on_homology(nu: &ContinuationCocycle, degrees: RangeInclusive<i64>) -> Result<Vec<InducedMap>> {
    let (lo, hi) = (*degrees.start(), *degrees.end());
    let mm = MapMatrices::new(nu, lo, hi)?;
    let mut out = Vec::new();
    for k in lo..=hi {
        let s = mm.source.homology_subquotient(k)?;
        let t = mm.target.homology_subquotient(k)?;
        let psi = integral(&mm.matrix(k))?;
        let mut cols = Vec::new();
        for g in s.generators() {
            let img = psi.mul_vec(&g);
            cols.push(t.coordinates(&img).ok_or_else(|| Error::ChainMapViolation { degree: k, row: 0, col: 0 })?);
        }
        let rows = t.generator_orders().len();
        out.push(InducedMap {
            degree: k,
            source: s.group(),
            target: t.group(),
            source_orders: s.generator_orders(),
            target_orders: t.generator_orders(),
            matrix: IntMatrix::from_columns(rows, &cols),
        });
    }
    Ok(out)
}

/// `(ν12·ν23)_{x,y} = Σ_z ν12_{x,z} ν23_{z,y}`.
pub fn compose(nu12: &ContinuationCocycle, nu23: &ContinuationCocycle) -> Result<ContinuationCocycle> {
    if !Arc::ptr_eq(&nu12.target, &nu23.source) {
        return Err(Error::EndpointMismatch(format!(
            "target {} of {} is not the source {} of {}",
            nu12.target.name(),
            nu12.name,
            nu23.source.name(),
            nu23.name
        )));
    }
    let mut entries = MapEntries::new();
    for ((x, z), a) in &nu12.entries {
        for ((_, y), b) in nu23.entries.range((*z, 0)..(*z + 1, 0)) {
            let p = a.multiply(b)?;
            let slot = entries.entry((*x, *y)).or_insert_with(|| AlgebraElement::zero(a.algebra()));
            *slot = &*slot + &p;
        }
    }
    Ok(ContinuationCocycle::from_parts(
        format!("{}*{}", nu12.name, nu23.name),
        nu12.source.clone(),
        nu23.target.clone(),
        entries,
    ))
}

/// `max { action(y) - action(x) : ν_{x,y} ≠ 0 }`, or `None` when every entry vanishes.
pub fn filtration_shift(nu: &ContinuationCocycle) -> Result<Option<Coeff>> {
    let act = |x: &TwistedComplex, i: usize| x.generators()[i].action.clone().ok_or(Error::ActionsMissing);
    let mut best: Option<Coeff> = None;
    for (i, j) in nu.entries.keys() {
        let e = act(&nu.target, *j)? - act(&nu.source, *i)?;
        if best.as_ref().is_none_or(|b| &e > b) {
            best = Some(e);
        }
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct HomotopyCocycle {
    name: String,
    nu0: ContinuationCocycle,
    nu1: ContinuationCocycle,
    entries: MapEntries,
}

impl HomotopyCocycle {
    pub fn new(
        name: impl Into<String>,
        nu0: &ContinuationCocycle,
        nu1: &ContinuationCocycle,
        entries: Vec<(&str, &str, AlgebraElement)>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(&nu0.source, &nu1.source) || !Arc::ptr_eq(&nu0.target, &nu1.target) {
            return Err(Error::EndpointMismatch(format!("{} and {} have different endpoints", nu0.name, nu1.name)));
        }
        let entries = collect_entries(&nu0.source, &nu0.target, entries)?;
        Ok(Self::from_parts(name.into(), nu0.clone(), nu1.clone(), entries))
    }

    pub(crate) fn from_parts(
        name: String,
        nu0: ContinuationCocycle,
        nu1: ContinuationCocycle,
        mut entries: MapEntries,
    ) -> Self {
        entries.retain(|_, v| !v.is_zero());
        HomotopyCocycle { name, nu0, nu1, entries }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nu0(&self) -> &ContinuationCocycle {
        &self.nu0
    }

    pub fn nu1(&self) -> &ContinuationCocycle {
        &self.nu1
    }

    pub fn entries(&self) -> &MapEntries {
        &self.entries
    }

    /// Element-level `𝐡`.
    pub fn apply(&self, c: &Chain) -> Result<Chain> {
        apply_entries(&self.nu0.source, &self.entries, c, true)
    }
}

/// The residual `∂h - (ν¹ - ν⁰) - Σ(-1)^{|x|-|z|} m h - Σ(-1)^{|x|-|z|} h m` at one pair.
fn homotopy_residual(h: &HomotopyCocycle, i: usize, j: usize) -> Result<AlgebraElement> {
    let (s, t) = (&h.nu0.source, &h.nu0.target);
    let a = s.module().algebra();
    let get = |e: &MapEntries| e.get(&(i, j)).cloned().unwrap_or_else(|| AlgebraElement::zero(a));
    let mut r = &h.entries.get(&(i, j)).map_or_else(|| AlgebraElement::zero(a), |v| v.differential())
        - &(&get(&h.nu1.entries) - &get(&h.nu0.entries));
    let dx = s.generators()[i].degree;
    for ((_, z), m) in s.cocycle().range((i, 0)..(i + 1, 0)) {
        if let Some(v) = h.entries.get(&(*z, j)) {
            r = &r - &m.multiply(v)?.scale(&sign(dx - s.generators()[*z].degree));
        }
    }
    for ((_, z), v) in h.entries.range((i, 0)..(i + 1, 0)) {
        if let Some(m) = t.cocycle().get(&(*z, j)) {
            r = &r - &v.multiply(m)?.scale(&sign(dx - t.generators()[*z].degree));
        }
    }
    Ok(r)
}

/// Pairwise identity, then `Ψ¹ - Ψ⁰ = D⁻𝐡 + 𝐡D⁺` on every cell of the default window.
pub fn validate_homotopy(h: &HomotopyCocycle) -> ValidationReport {
    let mut report = ValidationReport::new(format!("homotopy {}", h.name));
    let (s, t) = (&h.nu0.source, &h.nu0.target);
    check_shape(&mut report, s, t, &h.entries, 1);
    for i in 0..s.generators().len() {
        for j in 0..t.generators().len() {
            let loc = format!("({}, {})", s.generators()[i].name, t.generators()[j].name);
            match homotopy_residual(h, i, j) {
                Err(e) => report.push("truncation", loc, e.to_string()),
                Ok(r) if !r.is_zero() => report.push("homotopy", loc, r.to_string()),
                Ok(_) => {}
            }
        }
    }
    if report.is_valid() {
        let (lo, hi) = joint_window(s, t, 1);
        if let Err(e) = check_operator_identity(h, lo, hi) {
            report.push("operator-identity", format!("window {lo}..={hi}"), e);
        }
    }
    report
}

fn check_operator_identity(h: &HomotopyCocycle, lo: i64, hi: i64) -> Result<(), String> {
    let (s, t) = (&h.nu0.source, &h.nu0.target);
    let total = TotalComplex::new(s, lo, hi).map_err(|e| e.to_string())?;
    for n in lo..=hi {
        for (g, w) in total.basis(n) {
            let c = Chain::cell(*g, w.clone());
            let run = || -> Result<Chain> {
                let lhs = h.nu1.apply(&c)?.sub(&h.nu0.apply(&c)?);
                let rhs = t.apply_differential(&h.apply(&c)?)?.add(&h.apply(&s.apply_differential(&c)?)?);
                Ok(lhs.sub(&rhs))
            };
            match run() {
                Err(e) => return Err(e.to_string()),
                Ok(d) if !d.is_zero() => {
                    return Err(format!("{} gives {}", s.format_chain(&c), t.format_chain(&d)));
                }
                Ok(_) => {}
            }
        }
    }
    Ok(())
}

/// Algebra words of degree `d` usable as unknowns; Laurent monomials come from `[-r, r]^k`.
fn words_of_degree(x: &TwistedComplex, d: i64, radius: i64) -> Vec<Word> {
    let a = x.module().algebra();
    match a.as_laurent() {
        None => a.basis_of_degree(d),
        Some(l) if d == 0 => {
            let mut out = vec![Vec::new()];
            for _ in l.generators() {
                out = out
                    .into_iter()
                    .flat_map(|p: Vec<i64>| {
                        (-radius..=radius).map(move |e| {
                            let mut q = p.clone();
                            q.push(e);
                            q
                        })
                    })
                    .collect();
            }
            out.into_iter().map(Word::Monomial).collect()
        }
        Some(_) => Vec::new(),
    }
}

/// Best-effort search for `h` with `ν⁰ ≃ ν¹`, by a rational linear solve over
/// unknowns of bounded size. `None` means no witness in the search space,
/// not that the cocycles are not homotopic.
pub fn find_homotopy(nu0: &ContinuationCocycle, nu1: &ContinuationCocycle, radius: i64) -> Result<Option<HomotopyCocycle>> {
    if !Arc::ptr_eq(&nu0.source, &nu1.source) || !Arc::ptr_eq(&nu0.target, &nu1.target) {
        return Err(Error::EndpointMismatch(format!("{} and {} have different endpoints", nu0.name, nu1.name)));
    }
    let (s, t) = (nu0.source.clone(), nu0.target.clone());
    let a = s.module().algebra().clone();
    let mut unknowns: Vec<(usize, usize, Word)> = Vec::new();
    let mut columns: Vec<Terms<(usize, usize, Word)>> = Vec::new();
    for i in 0..s.generators().len() {
        for j in 0..t.generators().len() {
            let d = s.generators()[i].degree - t.generators()[j].degree + 1;
            if d < 0 {
                continue;
            }
            'word: for w in words_of_degree(&s, d, radius) {
                let we = AlgebraElement::word(&a, w.clone());
                let mut col: Terms<(usize, usize, Word)> = Terms::new();
                for (v, c) in we.differential().terms() {
                    add_term(&mut col, (i, j, v.clone()), c.clone());
                }
                for ((x, z), m) in s.cocycle() {
                    if *z != i {
                        continue;
                    }
                    let Ok(p) = m.multiply(&we) else { continue 'word };
                    let sg = -sign(s.generators()[*x].degree - s.generators()[i].degree);
                    for (v, c) in p.terms() {
                        add_term(&mut col, (*x, j, v.clone()), c * &sg);
                    }
                }
                for ((_, y), m) in t.cocycle().range((j, 0)..(j + 1, 0)) {
                    let Ok(p) = we.multiply(m) else { continue 'word };
                    let sg = -sign(s.generators()[i].degree - t.generators()[j].degree);
                    for (v, c) in p.terms() {
                        add_term(&mut col, (i, *y, v.clone()), c * &sg);
                    }
                }
                unknowns.push((i, j, w));
                columns.push(col);
            }
        }
    }
    let mut rhs_terms: Terms<(usize, usize, Word)> = Terms::new();
    for (e, k) in [(&nu1.entries, coeff(1)), (&nu0.entries, coeff(-1))] {
        for ((i, j), v) in e {
            for (w, c) in v.terms() {
                add_term(&mut rhs_terms, (*i, *j, w.clone()), c * &k);
            }
        }
    }
    let mut rows: HashMap<(usize, usize, Word), usize> = HashMap::new();
    for key in columns.iter().flat_map(|c| c.keys()).chain(rhs_terms.keys()) {
        let n = rows.len();
        rows.entry(key.clone()).or_insert(n);
    }
    let mut mat = RatMatrix::zeros(rows.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (key, c) in col {
            mat[(rows[key], j)] = c.clone();
        }
    }
    let mut b = vec![Coeff::zero(); rows.len()];
    for (key, c) in &rhs_terms {
        b[rows[key]] = c.clone();
    }
    let Some(sol) = solve_q(&mat, &b) else {
        return Ok(None);
    };
    let mut entries = MapEntries::new();
    for ((i, j, w), c) in unknowns.into_iter().zip(sol) {
        if c.is_zero() {
            continue;
        }
        let slot = entries.entry((i, j)).or_insert_with(|| AlgebraElement::zero(&a));
        *slot = &*slot + &AlgebraElement::word(&a, w).scale(&c);
    }
    let h = HomotopyCocycle::from_parts(format!("h({},{})", nu0.name, nu1.name), nu0.clone(), nu1.clone(), entries);
    Ok(validate_homotopy(&h).is_valid().then_some(h))
}

/// A finite directed system `X₁ → X₂ → … → X_k` of monotone continuation cocycles.
#[derive(Clone, Debug)]
pub struct MonotoneTower {
    maps: Vec<ContinuationCocycle>,
}

/// Homology of the last stage together with the ladder of induced maps.
#[derive(Clone, Debug)]
pub struct TowerHomology {
    pub limit: Vec<HomologyGroup>,
    pub ladder: Vec<Vec<InducedMap>>,
}

impl MonotoneTower {
    pub fn new(maps: Vec<ContinuationCocycle>) -> Result<Self> {
        for w in maps.windows(2) {
            if !Arc::ptr_eq(&w[0].target, &w[1].source) {
                return Err(Error::EndpointMismatch(format!("{} does not feed {}", w[0].name, w[1].name)));
            }
        }
        for nu in &maps {
            let r = validate_continuation(nu);
            if !r.is_valid() {
                return Err(Error::Invalid(r.to_string()));
            }
            if let Some(e) = filtration_shift(nu)? {
                if e > Coeff::zero() {
                    return Err(Error::Invalid(format!("{} raises action by {}", nu.name, e)));
                }
            }
        }
        Ok(MonotoneTower { maps })
    }

    pub fn stages(&self) -> Vec<Arc<TwistedComplex>> {
        let mut out: Vec<_> = self.maps.iter().map(|m| m.source.clone()).collect();
        if let Some(last) = self.maps.last() {
            out.push(last.target.clone());
        }
        out
    }

    pub fn maps(&self) -> &[ContinuationCocycle] {
        &self.maps
    }

    pub fn homology(&self, degrees: RangeInclusive<i64>) -> Result<TowerHomology> {
        let ladder = self
            .maps
            .iter()
            .map(|nu| induced_on_homology(nu, degrees.clone()))
            .collect::<Result<Vec<_>>>()?;
        let limit = match self.stages().last() {
            Some(x) => x.homology(degrees)?,
            None => Vec::new(),
        };
        Ok(TowerHomology { limit, ladder })
    }
}
