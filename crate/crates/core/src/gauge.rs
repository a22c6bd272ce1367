//! Random twisted complexes that satisfy Maurer–Cartan by construction.
//!
//! A base complex is a disjoint union of isolated generators and cancelling
//! pairs whose single entry is a cycle, so its cocycle trivially solves the
//! equation. A random unipotent continuation `ν = 1 + N` (entries only from
//! earlier to later generators) is invertible, and conjugating the base
//! differential by `Ψ` gives a new cocycle `m_x = Ψ^{-1} D Ψ (1⊗x)` with
//! `D² = 0` for free. `Ψ` and `Ψ^{-1}` are then valid continuations, and
//! random homotopies give further continuations `Ψ + D h + h D`.
//!
//! All operators here act on the free module `A ⊗ ⟨generators⟩`, computed with
//! algebra elements directly rather than through the matrix machinery, so
//! they double as an independent check of the validators.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{coeff, free_algebra, AlgebraElement, Backend, Coeff, Dga, TableDgaBuilder, Word};
use crate::complex::{CocycleEntries, Generator, TwistedComplex};
use crate::error::Result;
use crate::maps::{ContinuationCocycle, HomotopyCocycle, MapEntries};
use crate::module::DgModule;

/// Algebras the generator draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeAlgebra {
    /// Free on `x` (degree 1) and `y` (degree 3) with `∂y = x²`.
    FreeXY,
    /// Free on `y` (degree 1) with `∂y = c`.
    FreeY { c: i64 },
    /// `Z[g]/(g² - 1)` in degree 0.
    GroupRingZ2,
    /// `Z[t, t^-1]`.
    Laurent,
}

impl GaugeAlgebra {
    pub const ALL: [GaugeAlgebra; 4] = [
        GaugeAlgebra::FreeXY,
        GaugeAlgebra::FreeY { c: 2 },
        GaugeAlgebra::GroupRingZ2,
        GaugeAlgebra::Laurent,
    ];

    pub fn build(self, truncation: i64) -> Result<Arc<Dga>> {
        match self {
            GaugeAlgebra::FreeXY => free_algebra(
                "FXY",
                &[("x", 1), ("y", 3)],
                truncation,
                &[("y", vec![(vec!["x", "x"], 1)])],
            ),
            GaugeAlgebra::FreeY { c } => free_algebra("FY", &[("y", 1)], truncation, &[("y", vec![(vec![], c)])]),
            GaugeAlgebra::GroupRingZ2 => {
                let mut b = TableDgaBuilder::new("G2", 0);
                let e = b.word("e", 0)?;
                let g = b.word("g", 0)?;
                b.set_unit("e")?;
                b.set_product(g, g, vec![(e, coeff(1))]);
                b.build()
            }
            GaugeAlgebra::Laurent => Dga::laurent("L", &["t"]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaugeConfig {
    pub max_generators: usize,
    pub truncation: i64,
    /// Coefficients are drawn from `-bound..=bound`.
    pub coefficient_bound: i64,
}

impl Default for GaugeConfig {
    fn default() -> Self {
        GaugeConfig {
            max_generators: 6,
            truncation: 10,
            coefficient_bound: 2,
        }
    }
}

/// A generated complex together with the maps relating it to its base.
#[derive(Clone, Debug)]
pub struct GaugeComplex {
    pub base: Arc<TwistedComplex>,
    pub complex: Arc<TwistedComplex>,
    /// `Ψ`: complex → base.
    pub to_base: ContinuationCocycle,
    /// `Ψ^{-1}`: base → complex.
    pub from_base: ContinuationCocycle,
}

/// Three complexes related by continuations `x0 → x1 → x2`.
#[derive(Clone, Debug)]
pub struct Triple {
    pub first: ContinuationCocycle,
    pub second: ContinuationCocycle,
}

type Vector = Vec<AlgebraElement>;

fn sign(d: i64) -> Coeff {
    if d.rem_euclid(2) == 0 {
        Coeff::one()
    } else {
        -Coeff::one()
    }
}

fn term(a: &Arc<Dga>, w: &Word, c: &Coeff) -> AlgebraElement {
    AlgebraElement::from_terms(a, [(w.clone(), c.clone())])
}

fn zero_vector(a: &Arc<Dga>, n: usize) -> Vector {
    vec![AlgebraElement::zero(a); n]
}

fn basis_vector(a: &Arc<Dga>, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(a, n);
    v[i] = AlgebraElement::unit(a);
    v
}

/// `D(α⊗x) = ∂α⊗x + (-1)^{|α|} Σ α m_{x,y} ⊗ y` on the free module.
pub fn apply_twisted(a: &Arc<Dga>, cocycle: &CocycleEntries, v: &[AlgebraElement]) -> Result<Vector> {
    let mut out = zero_vector(a, v.len());
    for (x, vx) in v.iter().enumerate() {
        out[x] = &out[x] + &vx.differential();
        for (w, c) in vx.terms() {
            let alpha = term(a, w, &(c * sign(a.word_degree(w))));
            for ((_, y), m) in cocycle.range((x, 0)..(x + 1, 0)) {
                out[*y] = &out[*y] + &alpha.multiply(m)?;
            }
        }
    }
    Ok(out)
}

/// `Ψ(α⊗x) = Σ α ν_{x,y} ⊗ y`, or with `graded` the homotopy sign `(-1)^{|α|}`.
fn apply_entries(a: &Arc<Dga>, entries: &MapEntries, v: &[AlgebraElement], n_out: usize, graded: bool) -> Result<Vector> {
    let mut out = zero_vector(a, n_out);
    for (x, vx) in v.iter().enumerate() {
        for (w, c) in vx.terms() {
            let k = if graded { c * sign(a.word_degree(w)) } else { c.clone() };
            let alpha = term(a, w, &k);
            for ((_, y), e) in entries.range((x, 0)..(x + 1, 0)) {
                out[*y] = &out[*y] + &alpha.multiply(e)?;
            }
        }
    }
    Ok(out)
}

/// Solves `Ψ u = v` for unipotent `ν = 1 + N` with `N` strictly upper triangular.
fn solve_unipotent(a: &Arc<Dga>, nu: &MapEntries, v: &[AlgebraElement]) -> Result<Vector> {
    let n = v.len();
    let mut u = zero_vector(a, n);
    for y in 0..n {
        let mut acc = v[y].clone();
        for (x, ux) in u.iter().enumerate().take(y) {
            if let Some(e) = nu.get(&(x, y)) {
                acc = &acc - &ux.multiply(e)?;
            }
        }
        u[y] = acc;
    }
    Ok(u)
}

fn rows_to_entries(rows: Vec<Vector>) -> MapEntries {
    let mut out = MapEntries::new();
    for (x, row) in rows.into_iter().enumerate() {
        for (y, e) in row.into_iter().enumerate() {
            if !e.is_zero() {
                out.insert((x, y), e);
            }
        }
    }
    out
}

fn random_coeff<R: Rng>(rng: &mut R, bound: i64) -> Coeff {
    coeff(rng.gen_range(-bound..=bound))
}

/// A random element of degree `d`, sparse, with small coefficients.
fn random_element<R: Rng>(rng: &mut R, a: &Arc<Dga>, d: i64, bound: i64) -> AlgebraElement {
    match a.backend() {
        Backend::Laurent(l) => {
            if d != 0 {
                return AlgebraElement::zero(a);
            }
            let k = l.generators().len();
            let terms = rng.gen_range(1..=2);
            let mut out = AlgebraElement::zero(a);
            for _ in 0..terms {
                let e: Vec<i64> = (0..k).map(|_| rng.gen_range(-1..=1)).collect();
                out = &out + &AlgebraElement::monomial(a, &e).scale(&random_coeff(rng, bound));
            }
            out
        }
        Backend::Table(_) => {
            let words = a.basis_of_degree(d);
            let mut out = AlgebraElement::zero(a);
            for w in words {
                if rng.gen_bool(0.6) {
                    out = &out + &term(a, &w, &random_coeff(rng, bound));
                }
            }
            out
        }
    }
}

/// A nonzero cycle of degree `d`, if one is easy to find.
fn random_cycle<R: Rng>(rng: &mut R, a: &Arc<Dga>, d: i64, bound: i64) -> Option<AlgebraElement> {
    let nonzero_coeff = |rng: &mut R| loop {
        let c = random_coeff(rng, bound.max(1));
        if !c.is_zero() {
            return c;
        }
    };
    match a.backend() {
        Backend::Laurent(_) => {
            if d != 0 {
                return None;
            }
            let candidates = [vec![(0, 1), (1, -1)], vec![(0, 2)], vec![(0, 1), (1, 1)], vec![(-1, 1), (1, -1)]];
            let pick = candidates.choose(rng).expect("nonempty");
            let mut out = AlgebraElement::zero(a);
            for (e, c) in pick {
                out = &out + &AlgebraElement::monomial(a, &[*e]).scale(&coeff(*c));
            }
            Some(out)
        }
        Backend::Table(_) => {
            let mut pool: Vec<AlgebraElement> = a
                .basis_of_degree(d)
                .into_iter()
                .map(|w| AlgebraElement::word(a, w))
                .filter(|e| e.differential().is_zero())
                .collect();
            pool.extend(
                a.basis_of_degree(d + 1)
                    .into_iter()
                    .map(|w| AlgebraElement::word(a, w).differential())
                    .filter(|e| !e.is_zero()),
            );
            let base = pool.choose(rng)?.clone();
            Some(base.scale(&nonzero_coeff(rng)))
        }
    }
}

fn degree_range(a: &Arc<Dga>, truncation: i64) -> i64 {
    match a.backend() {
        Backend::Laurent(_) => 3,
        Backend::Table(t) => t.truncation().min(truncation).clamp(1, 5),
    }
}

/// A random base complex: generators sorted by descending degree, strictly
/// decreasing actions, and disjoint pairs `(x, y)`, `x` before `y`, with a
/// cycle as their single entry.
fn random_base<R: Rng>(rng: &mut R, a: &Arc<Dga>, cfg: &GaugeConfig, name: &str) -> Result<TwistedComplex> {
    let n = rng.gen_range(1..=cfg.max_generators.max(1));
    let spread = degree_range(a, cfg.truncation);
    let mut degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=spread)).collect();
    degrees.sort_unstable_by(|p, q| q.cmp(p));
    let mut actions: Vec<i64> = (0..n as i64).map(|k| 2 * k).collect();
    actions.reverse();
    let gens: Vec<Generator> = (0..n)
        .map(|i| Generator::new(format!("g{i}"), degrees[i]).with_action(Coeff::new(actions[i].into(), 2.into())))
        .collect();
    let module = DgModule::regular("F", a)?;
    let mut cocycle = CocycleEntries::new();
    let mut used = vec![false; n];
    for x in 0..n {
        if used[x] || !rng.gen_bool(0.7) {
            continue;
        }
        let partners: Vec<usize> = (x + 1..n).filter(|&y| !used[y] && degrees[y] < degrees[x]).collect();
        let Some(&y) = partners.choose(rng) else { continue };
        if let Some(m) = random_cycle(rng, a, degrees[x] - degrees[y] - 1, cfg.coefficient_bound) {
            used[x] = true;
            used[y] = true;
            cocycle.insert((x, y), m);
        }
    }
    Ok(TwistedComplex::from_parts(name.to_string(), module, gens, cocycle))
}

/// Random `ν = 1 + N`, `N_{x,y}` of degree `|x| - |y|` only for `x < y`.
fn random_unipotent<R: Rng>(rng: &mut R, x: &TwistedComplex, bound: i64) -> MapEntries {
    let a = x.module().algebra();
    let g = x.generators();
    let mut nu = MapEntries::new();
    for i in 0..g.len() {
        nu.insert((i, i), AlgebraElement::unit(a));
        for j in i + 1..g.len() {
            if rng.gen_bool(0.5) {
                let e = random_element(rng, a, g[i].degree - g[j].degree, bound);
                if !e.is_zero() {
                    nu.insert((i, j), e);
                }
            }
        }
    }
    nu
}

/// Conjugates `base` by `Ψ`; returns the complex with cocycle `Ψ^{-1} D Ψ`.
pub fn conjugate(base: &TwistedComplex, nu: &MapEntries, name: &str) -> Result<TwistedComplex> {
    let a = base.module().algebra();
    let n = base.generators().len();
    let mut rows = Vec::with_capacity(n);
    for x in 0..n {
        let e = basis_vector(a, n, x);
        let psi = apply_entries(a, nu, &e, n, false)?;
        let d = apply_twisted(a, base.cocycle(), &psi)?;
        rows.push(solve_unipotent(a, nu, &d)?);
    }
    Ok(TwistedComplex::from_parts(
        name.to_string(),
        base.module().clone(),
        base.generators().to_vec(),
        rows_to_entries(rows),
    ))
}

fn inverse_entries(a: &Arc<Dga>, nu: &MapEntries, n: usize) -> Result<MapEntries> {
    let rows = (0..n)
        .map(|x| solve_unipotent(a, nu, &basis_vector(a, n, x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows_to_entries(rows))
}

pub fn random_complex<R: Rng>(rng: &mut R, a: &Arc<Dga>, cfg: &GaugeConfig) -> Result<GaugeComplex> {
    let base = Arc::new(random_base(rng, a, cfg, "B")?);
    gauge_of(rng, &base, cfg, "X")
}

/// A random gauge transform of an existing complex.
pub fn gauge_of<R: Rng>(rng: &mut R, base: &Arc<TwistedComplex>, cfg: &GaugeConfig, name: &str) -> Result<GaugeComplex> {
    let a = base.module().algebra();
    let n = base.generators().len();
    let nu = random_unipotent(rng, base, cfg.coefficient_bound);
    let complex = Arc::new(conjugate(base, &nu, name)?);
    let inv = inverse_entries(a, &nu, n)?;
    let to_base = ContinuationCocycle::from_parts(format!("{name}->{}", base.name()), complex.clone(), base.clone(), nu);
    let from_base = ContinuationCocycle::from_parts(format!("{}->{name}", base.name()), base.clone(), complex.clone(), inv);
    Ok(GaugeComplex {
        base: base.clone(),
        complex,
        to_base,
        from_base,
    })
}

/// `X → B → Y` with `X`, `Y` independent gauge transforms of one base.
pub fn random_triple<R: Rng>(rng: &mut R, a: &Arc<Dga>, cfg: &GaugeConfig) -> Result<Triple> {
    let base = Arc::new(random_base(rng, a, cfg, "B")?);
    let x = gauge_of(rng, &base, cfg, "X")?;
    let y = gauge_of(rng, &base, cfg, "Y")?;
    Ok(Triple {
        first: x.to_base,
        second: y.from_base,
    })
}

/// A random homotopy `h` out of `nu`, with `ν¹` defined by `Ψ¹ = Ψ + D⁻𝐡 + 𝐡D⁺`.
pub fn random_homotopy<R: Rng>(rng: &mut R, nu: &ContinuationCocycle, bound: i64) -> Result<HomotopyCocycle> {
    let (s, t) = (nu.source(), nu.target());
    let a = s.module().algebra();
    let (ns, nt) = (s.generators().len(), t.generators().len());
    let top = a.truncation().unwrap_or(i64::MAX);
    let mut h = MapEntries::new();
    for (i, gx) in s.generators().iter().enumerate() {
        for (j, gy) in t.generators().iter().enumerate() {
            let d = gx.degree - gy.degree + 1;
            // keep ν¹ inside the truncation: its entries have degree d - 1
            if d >= 0 && d <= top && rng.gen_bool(0.4) {
                let e = random_element(rng, a, d, bound);
                if !e.is_zero() {
                    h.insert((i, j), e);
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(ns);
    for x in 0..ns {
        let e = basis_vector(a, ns, x);
        let psi = apply_entries(a, nu.entries(), &e, nt, false)?;
        let dh = apply_twisted(a, t.cocycle(), &apply_entries(a, &h, &e, nt, true)?)?;
        let hd = apply_entries(a, &h, &apply_twisted(a, s.cocycle(), &e)?, nt, true)?;
        rows.push((0..nt).map(|y| &(&psi[y] + &dh[y]) + &hd[y]).collect());
    }
    let nu1 = ContinuationCocycle::from_parts(format!("{}'", nu.name()), s.clone(), t.clone(), rows_to_entries(rows));
    Ok(HomotopyCocycle::from_parts(format!("h:{}", nu.name()), nu.clone(), nu1, h))
}

/// Pairs `(x, z)` where `D²(1⊗x)` has a nonzero `z`-component on the free module.
pub fn square_defects(x: &TwistedComplex) -> Result<BTreeSet<(usize, usize)>> {
    let a = x.module().algebra();
    let n = x.generators().len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        let e = basis_vector(a, n, i);
        let dd = apply_twisted(a, x.cocycle(), &apply_twisted(a, x.cocycle(), &e)?)?;
        for (z, c) in dd.iter().enumerate() {
            if !c.is_zero() {
                out.insert((i, z));
            }
        }
    }
    Ok(out)
}

/// The same complex with the entry `(x, y)` negated.
pub fn flip_sign(x: &TwistedComplex, entry: (usize, usize)) -> TwistedComplex {
    let mut cocycle = x.cocycle().clone();
    if let Some(m) = cocycle.get_mut(&entry) {
        *m = -&*m;
    }
    TwistedComplex::from_parts(
        format!("{}~", x.name()),
        x.module().clone(),
        x.generators().to_vec(),
        cocycle,
    )
}

/// The same complex with other action values.
pub fn with_actions(x: &TwistedComplex, actions: &[Coeff], name: &str) -> TwistedComplex {
    let gens = x
        .generators()
        .iter()
        .zip(actions)
        .map(|(g, a)| Generator {
            action: Some(a.clone()),
            ..g.clone()
        })
        .collect();
    TwistedComplex::from_parts(name.to_string(), x.module().clone(), gens, x.cocycle().clone())
}

/// A continuation with the same entries between other endpoints.
pub fn reattach(nu: &ContinuationCocycle, source: &Arc<TwistedComplex>, target: &Arc<TwistedComplex>) -> ContinuationCocycle {
    ContinuationCocycle::from_parts(nu.name().to_string(), source.clone(), target.clone(), nu.entries().clone())
}
