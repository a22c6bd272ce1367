//! The spectral sequence of the filtration by generator degree,
//! `F_p = ⊕_{|x| <= p} F ⊗ x`, and comparisons built on it.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{Coeff, Word};
use crate::complex::{Boxes, Cell, Chain, TotalComplex, TwistedComplex};
use crate::error::{Error, Result};
use crate::homology::integral;
use crate::linalg::{kernel_lattice, lattice_basis, preimage_lattice, HomologyGroup, IntMatrix, LatticeSolver, Subquotient};
use crate::maps::{ContinuationCocycle, MapMatrices};
use crate::module::{DgModule, ModuleElement, ModuleKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub r: usize,
    /// `E^r_{p,q}` keyed by `(p, q)`.
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
    /// `d^r: E^r_{p,q} -> E^r_{p-r,q+r-1}` in the generator bases of the two subquotients.
    pub differentials: BTreeMap<(i64, i64), IntMatrix>,
}

impl SpectralPage {
    pub fn group(&self, p: i64, q: i64) -> HomologyGroup {
        self.groups.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// Nonzero entries only.
    pub fn support(&self) -> Vec<((i64, i64), HomologyGroup)> {
        self.groups
            .iter()
            .filter(|(_, g)| !g.is_trivial())
            .map(|(k, g)| (*k, g.clone()))
            .collect()
    }
}

/// Filtration lattices on a window of the total complex.
pub struct FilteredWindow<'t, 'a> {
    total: &'t TotalComplex<'a>,
    lo: i64,
    hi: i64,
    columns: Vec<i64>,
}

fn embed(dim: usize, rows: &[usize], m: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(dim, m.cols());
    for (k, &i) in rows.iter().enumerate() {
        for j in 0..m.cols() {
            out[(i, j)] = m[(k, j)].clone();
        }
    }
    out
}

fn empty(dim: usize) -> IntMatrix {
    IntMatrix::zeros(dim, 0)
}

fn hcat_all(dim: usize, parts: &[&IntMatrix]) -> IntMatrix {
    parts.iter().fold(empty(dim), |acc, m| if m.cols() == 0 { acc } else { acc.hcat(m) })
}

impl<'t, 'a> FilteredWindow<'t, 'a> {
    /// Reports degrees `lo..=hi`; the total complex must cover `lo-1..=hi+1`.
    pub fn new(total: &'t TotalComplex<'a>, lo: i64, hi: i64) -> Result<Self> {
        let (wlo, whi) = total.window();
        if lo - 1 < wlo || hi + 1 > whi {
            return Err(Error::Invalid(format!(
                "spectral window {lo}..={hi} needs total window {}..={}",
                lo - 1,
                hi + 1
            )));
        }
        let columns: BTreeSet<i64> = total.complex().generators().iter().map(|g| g.degree).collect();
        Ok(FilteredWindow {
            total,
            lo,
            hi,
            columns: columns.into_iter().collect(),
        })
    }

    pub fn columns(&self) -> &[i64] {
        &self.columns
    }

    fn gen_degree(&self, cell: &Cell) -> i64 {
        self.total.complex().generators()[cell.0].degree
    }

    fn cells_where(&self, n: i64, pred: impl Fn(i64) -> bool) -> Vec<usize> {
        self.total
            .basis(n)
            .iter()
            .enumerate()
            .filter(|(_, c)| pred(self.gen_degree(c)))
            .map(|(i, _)| i)
            .collect()
    }

    fn d(&self, n: i64) -> Result<IntMatrix> {
        self.total.differential_int(n)
    }

    /// `F_p C_n` as coordinate columns.
    pub fn filtration(&self, n: i64, p: i64) -> IntMatrix {
        let dim = self.total.dim(n);
        let cols = self.cells_where(n, |g| g <= p);
        IntMatrix::from_fn(dim, cols.len(), |i, j| if i == cols[j] { 1.into() } else { BigInt::zero() })
    }

    /// `Z^r_p = F_p C_n ∩ D^{-1}(F_{p-r} C_{n-1})`.
    pub fn z(&self, n: i64, p: i64, r: usize) -> Result<IntMatrix> {
        let dim = self.total.dim(n);
        let cols = self.cells_where(n, |g| g <= p);
        if cols.is_empty() {
            return Ok(empty(dim));
        }
        let rows = self.cells_where(n - 1, |g| g > p - r as i64);
        let d = self.d(n)?.select_rows(&rows).select_columns(&cols);
        Ok(embed(dim, &cols, &kernel_lattice(&d)))
    }

    /// `B^r_p = Z^{r-1}_{p-1} + D Z^{r-1}_{p+r-1}`.
    pub fn b(&self, n: i64, p: i64, r: usize) -> Result<IntMatrix> {
        let dim = self.total.dim(n);
        let low = self.z(n, p - 1, r - 1)?;
        let high = self.z(n + 1, p + r as i64 - 1, r - 1)?;
        let image = self.d(n + 1)?.mul(&high);
        Ok(hcat_all(dim, &[&low, &image]))
    }

    pub fn e(&self, n: i64, p: i64, r: usize) -> Result<Subquotient> {
        Ok(Subquotient::new(&self.z(n, p, r)?, &self.b(n, p, r)?)?)
    }

    /// Matrix of `d^r` out of `E^r_p` in total degree `n`, or `None` if the target leaves the window.
    fn dr(&self, n: i64, p: i64, r: usize, src: &Subquotient) -> Result<Option<IntMatrix>> {
        if n - 1 < self.lo {
            return Ok(None);
        }
        let tgt = self.e(n - 1, p - r as i64, r)?;
        let d = self.d(n)?;
        let mut cols = Vec::new();
        for g in src.generators() {
            let img = d.mul_vec(&g);
            let c = tgt.coordinates(&img).ok_or_else(|| {
                Error::Invalid(format!("d^{r} of a class at ({p}, {}) leaves Z^{r}", n - p))
            })?;
            cols.push(c);
        }
        Ok(Some(IntMatrix::from_columns(tgt.generator_orders().len(), &cols)))
    }

    pub fn page(&self, r: usize) -> Result<SpectralPage> {
        let mut groups = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for n in self.lo..=self.hi {
            for &p in &self.columns {
                let e = self.e(n, p, r)?;
                groups.insert((p, n - p), e.group());
                if let Some(m) = self.dr(n, p, r, &e)? {
                    differentials.insert((p, n - p), m);
                }
            }
        }
        Ok(SpectralPage { r, groups, differentials })
    }

    /// `H(E^r, d^r)` at `(p, n-p)` by lattice preimages, independently of the `Z^{r+1}` formula.
    pub fn iterated(&self, n: i64, p: i64, r: usize) -> Result<HomologyGroup> {
        let rr = r as i64;
        let dim = self.total.dim(n);
        let num = self.z(n, p, r)?;
        let rel = self.b(n, p, r)?;
        let kernel = if n - 1 < self.lo {
            num.clone()
        } else {
            let tgt_rel = self.b(n - 1, p - rr, r)?;
            preimage_lattice(&self.d(n)?, &num, &tgt_rel)
        };
        let above = self.d(n + 1)?.mul(&self.z(n + 1, p + rr, r)?);
        let kernel = hcat_all(dim, &[&kernel, &rel]);
        let image = hcat_all(dim, &[&above, &rel]);
        Ok(Subquotient::new(&lattice_basis(&kernel), &image)?.group())
    }

    /// Compares `E^{r+1}` with `H(E^r, d^r)` at every spot whose incoming differential is in the window.
    pub fn cross_check(&self, r: usize) -> Result<()> {
        for n in self.lo + 1..=self.hi {
            for &p in &self.columns {
                let direct = self.e(n, p, r + 1)?.group();
                let iterated = self.iterated(n, p, r)?;
                if direct != iterated {
                    return Err(Error::Invalid(format!(
                        "E^{} at ({p}, {}) is {direct} but H(E^{r}) is {iterated}",
                        r + 1,
                        n - p
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether a degree-`n` cycle survives to `F_p H / F_{p-1} H`, i.e. `z ∉ F_{p-1} + D C_{n+1}`.
    pub fn detected_in_column(&self, z: &[BigInt], n: i64, p: i64) -> Result<bool> {
        let span = hcat_all(self.total.dim(n), &[&self.filtration(n, p - 1), &self.d(n + 1)?]);
        Ok(LatticeSolver::new(&span).solve(z).is_none())
    }
}

/// Pages `1..=r_max` over total degrees `window`, each `E^{r+1}` cross-checked against `H(E^r, d^r)`.
pub fn pages(x: &TwistedComplex, r_max: usize, window: RangeInclusive<i64>) -> Result<Vec<SpectralPage>> {
    let (lo, hi) = (*window.start(), *window.end());
    let total = TotalComplex::new(x, lo - 1, hi + 1)?;
    total.check_square_zero()?;
    let fw = FilteredWindow::new(&total, lo, hi)?;
    let mut out = Vec::new();
    for r in 1..=r_max.max(1) {
        out.push(fw.page(r)?);
        if r < r_max {
            fw.cross_check(r)?;
        }
    }
    Ok(out)
}

/// First page index after which nothing changes: `max |x| - min |x| + 1`.
pub fn stable_page(x: &TwistedComplex) -> usize {
    match (x.min_generator_degree(), x.max_generator_degree()) {
        (Some(a), Some(b)) => (b - a + 1).max(1) as usize,
        _ => 1,
    }
}

/// `E^∞` over `window`.
pub fn infinity_page(x: &TwistedComplex, window: RangeInclusive<i64>) -> Result<SpectralPage> {
    let (lo, hi) = (*window.start(), *window.end());
    let total = TotalComplex::new(x, lo - 1, hi + 1)?;
    FilteredWindow::new(&total, lo, hi)?.page(stable_page(x))
}

/// The classical complex `⊕_{|x|=p} H_q(F) ⊗ x` with differential from the degree-0 entries
/// `m_{x,y}`, `|x| - |y| = 1`, acting through `H_q(F)`.
#[derive(Clone, Debug)]
pub struct LocalCoefficientComplex {
    pub q: i64,
    /// Per column `p`: cycles and boundaries of `F_q ⊗ ⟨|x| = p⟩`, and the cell list.
    columns: BTreeMap<i64, LocalColumn>,
    /// `δ_p: column p -> column p-1`, on chain coordinates.
    delta: BTreeMap<i64, IntMatrix>,
}

#[derive(Clone, Debug)]
struct LocalColumn {
    cells: Vec<Cell>,
    cycles: IntMatrix,
    boundaries: IntMatrix,
}

/// Module words of degree `q` available at generator `g`.
fn fiber_cells(x: &TwistedComplex, boxes: &Option<Boxes>, g: usize, q: i64) -> Vec<Word> {
    match (boxes, x.module().kind()) {
        (Some(b), ModuleKind::RegularLaurent { .. }) => {
            if q != 0 {
                return Vec::new();
            }
            let mut out = vec![Vec::new()];
            for (lo, hi) in &b.0[g] {
                out = out
                    .into_iter()
                    .flat_map(|p: Vec<i64>| {
                        (*lo..=*hi).map(move |e| {
                            let mut v = p.clone();
                            v.push(e);
                            v
                        })
                    })
                    .collect();
            }
            out.into_iter().map(Word::Monomial).collect()
        }
        _ => x.module().basis_of_degree(q),
    }
}

fn fiber_differential(f: &DgModule, src: &[Word], dst: &[Word]) -> IntMatrix {
    let mut m = IntMatrix::zeros(dst.len(), src.len());
    for (j, w) in src.iter().enumerate() {
        for (v, c) in f.differential_word(w) {
            if let Some(i) = dst.iter().position(|u| *u == v) {
                m[(i, j)] += c.to_integer();
            }
        }
    }
    m
}

impl LocalCoefficientComplex {
    pub fn new(x: &TwistedComplex, q: i64) -> Result<Self> {
        let f = x.module();
        let boxes = Boxes::build(x, &[]);
        let degrees: BTreeSet<i64> = x.generators().iter().map(|g| g.degree).collect();
        let mut columns = BTreeMap::new();
        let mut blocks: BTreeMap<usize, (Vec<Word>, Vec<Word>, Vec<Word>)> = BTreeMap::new();
        for (g, _) in x.generators().iter().enumerate() {
            blocks.insert(
                g,
                (
                    fiber_cells(x, &boxes, g, q + 1),
                    fiber_cells(x, &boxes, g, q),
                    fiber_cells(x, &boxes, g, q - 1),
                ),
            );
        }
        for &p in &degrees {
            let gens: Vec<usize> = (0..x.generators().len()).filter(|&g| x.generators()[g].degree == p).collect();
            let mut cells = Vec::new();
            let mut cycle_parts = Vec::new();
            let mut boundary_parts = Vec::new();
            for &g in &gens {
                let (up, mid, down) = &blocks[&g];
                let d_out = fiber_differential(f, mid, down);
                let d_in = fiber_differential(f, up, mid);
                cycle_parts.push(kernel_lattice(&d_out));
                boundary_parts.push(d_in);
                cells.extend(mid.iter().map(|w| (g, w.clone())));
            }
            let dim = cells.len();
            let mut cycles = empty(dim);
            let mut boundaries = empty(dim);
            let mut offset = 0;
            for (c, b) in cycle_parts.iter().zip(&boundary_parts) {
                let rows: Vec<usize> = (offset..offset + c.rows()).collect();
                cycles = hcat_all(dim, &[&cycles, &embed(dim, &rows, c)]);
                boundaries = hcat_all(dim, &[&boundaries, &embed(dim, &rows, b)]);
                offset += c.rows();
            }
            columns.insert(p, LocalColumn { cells, cycles, boundaries });
        }
        let mut delta = BTreeMap::new();
        for (&p, col) in &columns {
            let Some(tgt) = columns.get(&(p - 1)) else { continue };
            let mut m = IntMatrix::zeros(tgt.cells.len(), col.cells.len());
            for (j, (g, w)) in col.cells.iter().enumerate() {
                let sign = if q.rem_euclid(2) == 0 { Coeff::from_integer(1.into()) } else { Coeff::from_integer((-1).into()) };
                for ((_, y), e) in x.cocycle().range((*g, 0)..(*g + 1, 0)) {
                    if x.generators()[*y].degree != p - 1 {
                        continue;
                    }
                    for (aw, ac) in e.terms() {
                        for (v, r) in f.act_words(w, aw)? {
                            let i = tgt.cells.iter().position(|c| c.0 == *y && c.1 == v).ok_or_else(|| {
                                Error::ActionNotDescending(format!("image of {} leaves the fiber window", f.word_name(w)))
                            })?;
                            let val = r * ac * &sign;
                            if !val.is_integer() {
                                return Err(Error::NonIntegral(crate::algebra::fmt_rational(&val)));
                            }
                            m[(i, j)] += val.to_integer();
                        }
                    }
                }
            }
            // cycles to cycles, boundaries to boundaries
            let solver_z = LatticeSolver::new(&tgt.cycles);
            let solver_b = LatticeSolver::new(&tgt.boundaries);
            for v in m.mul(&col.cycles).columns() {
                if solver_z.solve(&v).is_none() {
                    return Err(Error::ActionNotDescending(format!("a cycle in column {p} is not sent to a cycle")));
                }
            }
            for v in m.mul(&col.boundaries).columns() {
                if solver_b.solve(&v).is_none() {
                    return Err(Error::ActionNotDescending(format!(
                        "a boundary in column {p} is not sent to a boundary"
                    )));
                }
            }
            delta.insert(p, m);
        }
        Ok(LocalCoefficientComplex { q, columns, delta })
    }

    pub fn columns(&self) -> Vec<i64> {
        self.columns.keys().copied().collect()
    }

    /// `H_q(F)^{#generators}` in column `p`.
    pub fn chain_group(&self, p: i64) -> Result<HomologyGroup> {
        let c = &self.columns[&p];
        Ok(Subquotient::new(&c.cycles, &c.boundaries)?.group())
    }

    /// `H_p` of the local-coefficient complex.
    pub fn homology(&self, p: i64) -> Result<HomologyGroup> {
        let Some(col) = self.columns.get(&p) else {
            return Ok(HomologyGroup::trivial());
        };
        let dim = col.cells.len();
        let kernel = match (self.delta.get(&p), self.columns.get(&(p - 1))) {
            (Some(d), Some(tgt)) => preimage_lattice(d, &col.cycles, &tgt.boundaries),
            _ => col.cycles.clone(),
        };
        let image = match (self.delta.get(&(p + 1)), self.columns.get(&(p + 1))) {
            (Some(d), Some(src)) => d.mul(&src.cycles),
            _ => empty(dim),
        };
        let kernel = hcat_all(dim, &[&kernel, &col.boundaries]);
        let image = hcat_all(dim, &[&image, &col.boundaries]);
        Ok(Subquotient::new(&lattice_basis(&kernel), &image)?.group())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub q: i64,
    /// `(p, E²_{p,q}, H_p(C; H_q(F)))`.
    pub rows: Vec<(i64, HomologyGroup, HomologyGroup)>,
}

impl ComparisonReport {
    pub fn matches(&self) -> bool {
        self.rows.iter().all(|(_, a, b)| a == b)
    }
}

/// Row `q` of `E²` against the homology of the local-coefficient complex.
pub fn e2_matches_local_coefficients(x: &TwistedComplex, q: i64) -> Result<ComparisonReport> {
    let local = LocalCoefficientComplex::new(x, q)?;
    let cols = local.columns();
    let (Some(&pmin), Some(&pmax)) = (cols.first(), cols.last()) else {
        return Ok(ComparisonReport { q, rows: Vec::new() });
    };
    let total = TotalComplex::new(x, pmin + q - 1, pmax + q + 1)?;
    total.check_square_zero()?;
    let fw = FilteredWindow::new(&total, pmin + q, pmax + q)?;
    let mut rows = Vec::new();
    for p in cols {
        rows.push((p, fw.e(p + q, p, 2)?.group(), local.homology(p)?));
    }
    Ok(ComparisonReport { q, rows })
}

/// A class in `H_k(F)`; coordinates follow [`Subquotient::generators`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberClass {
    pub degree: i64,
    pub representative: ModuleElement,
    pub group: HomologyGroup,
    pub coordinates: Vec<BigInt>,
}

impl FiberClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

fn top_generator(x: &TwistedComplex, name: &str) -> Result<usize> {
    let g = x.generator_index(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    if Some(x.generators()[g].degree) != x.max_generator_degree() {
        return Err(Error::NotTopDegree(name.to_string()));
    }
    Ok(g)
}

fn check_cycle(x: &TwistedComplex, z: &Chain) -> Result<i64> {
    let d = x.apply_differential(z)?;
    if !d.is_zero() {
        return Err(Error::NotACycle(format!(": D z = {}", x.format_chain(&d))));
    }
    match x.chain_degree(z) {
        Some(n) => Ok(n),
        None if z.is_zero() => Ok(x.max_generator_degree().unwrap_or(0)),
        None => Err(Error::Invalid("chain is not homogeneous".into())),
    }
}

/// `j_!`: the class of the `M`-component of a cycle in `H_{deg z - |M|}(F)`.
pub fn shriek_to_point(x: &TwistedComplex, top: &str, z: &Chain) -> Result<FiberClass> {
    let g = top_generator(x, top)?;
    let n = check_cycle(x, z)?;
    let k = n - x.generators()[g].degree;
    let f = x.module();
    let beta = ModuleElement::from_terms(f, z.component(g));
    match f.kind() {
        ModuleKind::RegularLaurent { .. } => {
            // no differential and no boundaries: H_0(F) = F
            let coordinates = beta.terms().values().map(|c| c.to_integer()).collect();
            Ok(FiberClass {
                degree: k,
                representative: beta,
                group: HomologyGroup::trivial(),
                coordinates,
            })
        }
        ModuleKind::Finite(_) => {
            let up = f.basis_of_degree(k + 1);
            let mid = f.basis_of_degree(k);
            let down = f.basis_of_degree(k - 1);
            let sq = Subquotient::new(
                &kernel_lattice(&fiber_differential(f, &mid, &down)),
                &fiber_differential(f, &up, &mid),
            )?;
            let mut v = vec![BigInt::zero(); mid.len()];
            for (w, c) in beta.terms() {
                let i = mid.iter().position(|u| u == w).expect("component has the right degree");
                if !c.is_integer() {
                    return Err(Error::NonIntegral(crate::algebra::fmt_rational(c)));
                }
                v[i] = c.to_integer();
            }
            let coordinates = sq
                .coordinates(&v)
                .ok_or_else(|| Error::NotACycle(": top component is not a fiber cycle".into()))?;
            Ok(FiberClass {
                degree: k,
                representative: beta,
                group: sq.group(),
                coordinates,
            })
        }
    }
}

/// Whether `[z]` has nonzero image in the rightmost column `E^∞_{n,*}`.
pub fn lives_over_fundamental(x: &TwistedComplex, z: &Chain) -> Result<bool> {
    let n = check_cycle(x, z)?;
    let Some(top) = x.max_generator_degree() else {
        return Ok(false);
    };
    if z.is_zero() {
        return Ok(false);
    }
    let total = TotalComplex::containing(x, std::slice::from_ref(z), n - 1, n + 1)?;
    let fw = FilteredWindow::new(&total, n, n)?;
    let v = total.to_int_vector(z, n)?;
    fw.detected_in_column(&v, n, top)
}

/// `E^r(Ψ)` for each page `1..=r_max` over the window, keyed by `(p, q)`.
pub type PageMaps = Vec<BTreeMap<(i64, i64), IntMatrix>>;

/// Pages of source and target, and the maps a continuation cocycle induces between them.
pub fn induced_on_pages(
    nu: &ContinuationCocycle,
    r_max: usize,
    window: RangeInclusive<i64>,
) -> Result<(Vec<SpectralPage>, Vec<SpectralPage>, PageMaps)> {
    let (lo, hi) = (*window.start(), *window.end());
    let mm: MapMatrices<'_> = nu.matrices(lo - 1..=hi + 1)?;
    let s = FilteredWindow::new(&mm.source, lo, hi)?;
    let t = FilteredWindow::new(&mm.target, lo, hi)?;
    let mut sp = Vec::new();
    let mut tp = Vec::new();
    let mut maps = Vec::new();
    for r in 1..=r_max.max(1) {
        sp.push(s.page(r)?);
        tp.push(t.page(r)?);
        let mut page = BTreeMap::new();
        for n in lo..=hi {
            let psi = integral(&mm.matrix(n))?;
            for &p in s.columns() {
                let es = s.e(n, p, r)?;
                let et = t.e(n, p, r)?;
                let mut cols = Vec::new();
                for g in es.generators() {
                    let img = psi.mul_vec(&g);
                    cols.push(et.coordinates(&img).ok_or_else(|| {
                        Error::Invalid(format!("image of a class at ({p}, {}) leaves Z^{r}", n - p))
                    })?);
                }
                page.insert((p, n - p), IntMatrix::from_columns(et.generator_orders().len(), &cols));
            }
        }
        maps.push(page);
    }
    Ok((sp, tp, maps))
}

/// Reduces each column of `m` modulo the orders of the target generators.
pub fn reduce_mod_orders(m: &IntMatrix, orders: &[BigInt]) -> IntMatrix {
    use num_integer::Integer;
    IntMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        if orders[i].is_zero() {
            m[(i, j)].clone()
        } else {
            m[(i, j)].mod_floor(&orders[i])
        }
    })
}

#[cfg(test)]
mod tests;
