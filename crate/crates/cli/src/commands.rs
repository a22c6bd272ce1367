use std::path::Path;
use std::sync::Arc;

use dgc_core::algebra::{fmt_rational, validate_dga, GroundRing};
use dgc_core::complex::{spectral_number_in, validate_cocycle, TwistedComplex};
use dgc_core::criterion::{kernel_criterion, kernel_witness, CriterionMode, HomologyMap};
use dgc_core::format::{load, parse_chain, parse_rational, BuildOptions, Object, Workspace};
use dgc_core::linalg::{smith, HomologyGroup, IntMatrix};
use dgc_core::maps::{induced_on_homology, validate_continuation, validate_homotopy, ContinuationCocycle};
use dgc_core::module::validate_module;
use dgc_core::report::ValidationReport;
use dgc_core::spectral::pages;
use num_bigint::BigInt;
use serde_json::Value;

use crate::output::Table;
use crate::{Command, Mode};

pub enum Failure {
    /// Bad flags, unreadable or malformed input, unknown names: exit 2.
    Usage(String),
    /// The model is well formed but a computation on it failed: exit 1.
    Computation(String),
}

type Outcome = Result<(Vec<Table>, bool), Failure>;

fn compute<T>(r: dgc_core::error::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Computation(e.to_string()))
}

fn ground(mode: Mode) -> Result<GroundRing, Failure> {
    match mode {
        Mode::Z => Ok(GroundRing::Integers),
        Mode::Q => Ok(GroundRing::Rationals),
        Mode::Saturated => Err(Failure::Usage("--mode saturated only applies to `criterion`".into())),
    }
}

fn load_file(path: &Path) -> Result<Workspace, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let options = BuildOptions::from_env().map_err(Failure::Usage)?;
    load(&text, &options)
        .map_err(|e| Failure::Usage(format!("{}:{}:{}: {}: {}", path.display(), e.line, e.column, e.kind, e.message)))
}

fn complex<'w>(ws: &'w Workspace, name: &str) -> Result<&'w Arc<TwistedComplex>, Failure> {
    ws.complex(name).ok_or_else(|| Failure::Usage(format!("no complex named `{name}`")))
}

fn map<'w>(ws: &'w Workspace, name: &str) -> Result<&'w ContinuationCocycle, Failure> {
    ws.map(name).ok_or_else(|| Failure::Usage(format!("no map named `{name}`")))
}

fn group_text(g: &HomologyGroup, ground: GroundRing) -> String {
    match ground {
        GroundRing::Integers => g.to_string(),
        GroundRing::Rationals => match g.free_rank {
            0 => "0".into(),
            1 => "Q".into(),
            r => format!("Q^{r}"),
        },
    }
}

fn matrix_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn vector_text(v: &[BigInt]) -> String {
    let r: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", r.join(", "))
}

fn report_rows(table: &mut Table, kind: &str, r: &ValidationReport) {
    if r.is_valid() {
        table.push(vec![kind.into(), r.subject.clone().into(), "ok".into(), Value::Null, Value::Null, Value::Null]);
    }
    for v in &r.violations {
        table.push(vec![
            kind.into(),
            r.subject.clone().into(),
            "fail".into(),
            v.axiom.into(),
            v.location.clone().into(),
            v.witness.clone().into(),
        ]);
    }
}

fn report_table() -> Table {
    Table::new("check", &["kind", "subject", "status", "axiom", "location", "witness"])
}

fn validate(ws: &Workspace) -> Outcome {
    let mut t = report_table();
    let mut ok = true;
    for o in ws.objects() {
        let (kind, r) = match o {
            Object::Dga(a) => ("dga", validate_dga(a)),
            Object::LocalSystem(l) => ("local_system", l.validate()),
            Object::Module(m) => ("module", validate_module(m)),
            Object::Complex(x) => ("complex", validate_cocycle(x)),
            Object::Map(nu) => ("map", validate_continuation(nu)),
            Object::Homotopy(h) => ("homotopy", validate_homotopy(h)),
        };
        ok &= r.is_valid();
        report_rows(&mut t, kind, &r);
    }
    Ok((vec![t], ok))
}

fn homology(ws: &Workspace, name: &str, degrees: std::ops::RangeInclusive<i64>, mode: Mode) -> Outcome {
    let x = complex(ws, name)?;
    let g = ground(mode)?;
    let hs = compute(x.homology_in(degrees.clone(), g))?;
    let mut t = Table::new("homology", &["complex", "degree", "group"]);
    for (d, h) in degrees.zip(hs) {
        t.push(vec![name.into(), d.into(), group_text(&h, g).into()]);
    }
    Ok((vec![t], true))
}

/// `iso`, `zero` or `nonzero` for `d^r` between two nonzero entries. Torsion
/// coordinates come back already reduced, so zero means the zero map.
fn arrow_status(m: &IntMatrix, src: &HomologyGroup, tgt: &HomologyGroup) -> &'static str {
    if m.is_zero() {
        return "zero";
    }
    let free = src.torsion.is_empty() && tgt.torsion.is_empty();
    if free && m.rows() == m.cols() {
        let s = smith(m);
        if s.rank == m.rows() && s.invariant_factors().iter().all(|d| *d == BigInt::from(1)) {
            return "iso";
        }
    }
    "nonzero"
}

fn spectral(ws: &Workspace, name: &str, page: usize, degrees: Option<std::ops::RangeInclusive<i64>>) -> Outcome {
    let x = complex(ws, name)?;
    if page == 0 {
        return Err(Failure::Usage("pages start at 1".into()));
    }
    let window = degrees.unwrap_or_else(|| {
        let (lo, hi) = x.degree_window(-1);
        lo..=hi
    });
    let all = compute(pages(x, page, window.clone()))?;
    let e = all.last().expect("at least one page");
    let mut groups = Table::new("entry", &["complex", "page", "p", "q", "group"]);
    for ((p, q), g) in e.support() {
        groups.push(vec![name.into(), page.into(), p.into(), q.into(), g.to_string().into()]);
    }
    let mut arrows = Table::new("arrow", &["complex", "page", "from", "to", "matrix", "status"]);
    let r = page as i64;
    for ((p, q), m) in &e.differentials {
        let (src, tgt) = (e.group(*p, *q), e.group(p - r, q + r - 1));
        if src.is_trivial() || tgt.is_trivial() {
            continue;
        }
        arrows.push(vec![
            name.into(),
            page.into(),
            format!("({p}, {q})").into(),
            format!("({}, {})", p - r, q + r - 1).into(),
            matrix_text(m).into(),
            arrow_status(m, &src, &tgt).into(),
        ]);
    }
    Ok((vec![groups, arrows], true))
}

fn map_command(
    ws: &Workspace,
    name: &str,
    check: bool,
    apply: Option<&str>,
    degrees: Option<std::ops::RangeInclusive<i64>>,
) -> Outcome {
    let nu = map(ws, name)?;
    if check {
        let r = validate_continuation(nu);
        let mut t = report_table();
        report_rows(&mut t, "map", &r);
        return Ok((vec![t], r.is_valid()));
    }
    if let Some(text) = apply {
        let c = parse_chain(nu.source(), text).map_err(|e| Failure::Usage(format!("--apply: {e}")))?;
        let img = compute(nu.apply(&c))?;
        let mut t = Table::new("image", &["map", "chain", "image"]);
        t.push(vec![
            name.into(),
            nu.source().format_chain(&c).into(),
            nu.target().format_chain(&img).into(),
        ]);
        return Ok((vec![t], true));
    }
    let degrees = degrees.ok_or_else(|| Failure::Usage("--induced needs --degrees".into()))?;
    let mut t = Table::new("induced", &["map", "degree", "source", "target", "matrix"]);
    for m in compute(induced_on_homology(nu, degrees))? {
        t.push(vec![
            name.into(),
            m.degree.into(),
            m.source.to_string().into(),
            m.target.to_string().into(),
            matrix_text(&m.matrix).into(),
        ]);
    }
    Ok((vec![t], true))
}

fn homotopy(ws: &Workspace, name: &str) -> Outcome {
    let h = ws
        .homotopy(name)
        .ok_or_else(|| Failure::Usage(format!("no homotopy named `{name}`")))?;
    let r = validate_homotopy(h);
    let mut t = report_table();
    report_rows(&mut t, "homotopy", &r);
    Ok((vec![t], r.is_valid()))
}

fn criterion(ws: &Workspace, a: &str, b: &str, degrees: std::ops::RangeInclusive<i64>, mode: Mode) -> Outcome {
    let (na, nb) = (map(ws, a)?, map(ws, b)?);
    if na.source().name() != nb.source().name() {
        return Err(Failure::Usage(format!(
            "`{a}` starts at `{}` but `{b}` starts at `{}`",
            na.source().name(),
            nb.source().name()
        )));
    }
    let mode = match mode {
        Mode::Z => CriterionMode::Z,
        Mode::Q => CriterionMode::Q,
        Mode::Saturated => CriterionMode::Saturated,
    };
    let ia = compute(induced_on_homology(na, degrees.clone()))?;
    let ib = compute(induced_on_homology(nb, degrees))?;
    let mut t = Table::new("criterion", &["a", "b", "degree", "holds", "witness"]);
    for (ma, mb) in ia.iter().zip(&ib) {
        let (ha, hb) = (compute(HomologyMap::from_induced(ma))?, compute(HomologyMap::from_induced(mb))?);
        let holds = compute(kernel_criterion(&ha, &hb, mode))?;
        let witness = match mode {
            CriterionMode::Z => compute(kernel_witness(&ha, &hb))?.map(|v| Value::from(vector_text(&v))),
            _ => None,
        };
        t.push(vec![
            a.into(),
            b.into(),
            ma.degree.into(),
            holds.into(),
            witness.unwrap_or(Value::Null),
        ]);
    }
    Ok((vec![t], true))
}

fn spectral_invariant(ws: &Workspace, name: &str, class: &str, level: &str, mode: Mode) -> Outcome {
    let x = complex(ws, name)?;
    let g = ground(mode)?;
    let z = parse_chain(x, class).map_err(|e| Failure::Usage(format!("--class: {e}")))?;
    let b0 = parse_rational(level).map_err(|(_, m)| Failure::Usage(format!("--level: {m}")))?;
    let c = compute(spectral_number_in(x, &z, &b0, g))?;
    let mut t = Table::new("spectral", &["complex", "class", "level", "value"]);
    t.push(vec![
        name.into(),
        x.format_chain(&z).into(),
        fmt_rational(&b0).into(),
        c.to_string().into(),
    ]);
    Ok((vec![t], true))
}

pub fn run(file: &Path, command: &Command) -> Outcome {
    let ws = load_file(file)?;
    match command {
        Command::Validate { .. } => validate(&ws),
        Command::Homology {
            complex, degrees, mode, ..
        } => homology(&ws, complex, degrees.clone(), *mode),
        Command::Ss {
            complex, page, degrees, ..
        } => spectral(&ws, complex, *page, degrees.clone()),
        Command::Map {
            name,
            check,
            apply,
            degrees,
            ..
        } => map_command(&ws, name, *check, apply.as_deref(), degrees.clone()),
        Command::Homotopy { name, .. } => homotopy(&ws, name),
        Command::Criterion {
            a, b, degrees, mode, ..
        } => criterion(&ws, a, b, degrees.clone(), *mode),
        Command::SpectralInvariant {
            complex,
            class,
            level,
            mode,
            ..
        } => spectral_invariant(&ws, complex, class, level, *mode),
    }
}
