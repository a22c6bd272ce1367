//! Writing a workspace back out in canonical form: keys in a fixed order,
//! defaults omitted, list items joined by `", "` or `"; "`.

use num_traits::{One, Signed, Zero};

use super::build::{Object, Workspace};
use super::{ModelFile, Section, SectionKind};
use crate::algebra::{coeff, fmt_coeff_prefix, fmt_rational, Backend, Dga, GroundRing, Monodromy, Rank1LocalSystem, Terms, Word};
use crate::complex::TwistedComplex;
use crate::maps::MapEntries;
use crate::module::{DgModule, ModuleAction, ModuleKind, ModuleOrigin, DEFAULT_BOX_RADIUS};

fn linear(terms: &Terms<Word>, name: impl Fn(&Word) -> String) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, c)) in terms.iter().enumerate() {
        fmt_coeff_prefix(c, i == 0, &mut out);
        out.push_str(&name(w));
    }
    out
}

fn basis_index(w: &Word) -> usize {
    match w {
        Word::Basis(i) => *i,
        Word::Monomial(_) => unreachable!("finite bases are indexed"),
    }
}

fn dga_section(a: &Dga) -> Section {
    let mut s = Section::new(SectionKind::Dga);
    s.push("name", a.name());
    match a.backend() {
        Backend::Laurent(l) => {
            s.push("kind", "laurent_group_ring");
            s.push("generators", l.generators().join(", "));
        }
        Backend::Table(t) => {
            if let Some(p) = t.presentation() {
                s.push("kind", "free");
                s.push("truncation", t.truncation().to_string());
                let gens: Vec<String> = p.generators.iter().map(|(g, d)| format!("{g}:{d}")).collect();
                s.push("generators", gens.join(", "));
                let diffs: Vec<String> = p
                    .differential
                    .iter()
                    .filter(|(_, v)| !v.is_empty())
                    .map(|(g, v)| {
                        let mut out = String::new();
                        for (i, (seq, c)) in v.iter().enumerate() {
                            let c = coeff(*c);
                            if seq.is_empty() {
                                if i > 0 {
                                    out.push_str(if c.is_negative() { " - " } else { " + " });
                                }
                                let shown = if i > 0 { c.abs() } else { c };
                                out.push_str(&fmt_rational(&shown));
                            } else {
                                fmt_coeff_prefix(&c, i == 0, &mut out);
                                out.push_str(&seq.join("*"));
                            }
                        }
                        format!("{g}->{out}")
                    })
                    .collect();
                if !diffs.is_empty() {
                    s.push("differential", diffs.join("; "));
                }
                return s;
            }
            s.push("kind", "table");
            s.push("truncation", t.truncation().to_string());
            let words = t.words();
            let basis: Vec<String> = words.iter().map(|w| format!("{}:{}", w.name, w.degree)).collect();
            s.push("basis", basis.join(", "));
            let unit = t.unit_index();
            if words.iter().position(|w| w.degree == 0) != Some(unit) {
                s.push("unit", words[unit].name.clone());
            }
            let name = |w: &Word| words[basis_index(w)].name.clone();
            let mut products = t.product_entries();
            products.sort_by_key(|(k, _)| *k);
            let products: Vec<String> = products
                .into_iter()
                .filter(|((i, j), v)| {
                    let identity = |k: usize| v.len() == 1 && v.get(&Word::Basis(k)).is_some_and(One::is_one);
                    !((*i == unit && identity(*j)) || (*j == unit && identity(*i)))
                })
                .map(|((i, j), v)| format!("{}*{}={}", words[i].name, words[j].name, linear(v, name)))
                .collect();
            if !products.is_empty() {
                s.push("product", products.join("; "));
            }
            let diffs: Vec<String> = (0..words.len())
                .filter(|&i| !t.differential_entry(i).is_empty())
                .map(|i| format!("{}->{}", words[i].name, linear(t.differential_entry(i), name)))
                .collect();
            if !diffs.is_empty() {
                s.push("differential", diffs.join("; "));
            }
            let strict = words.iter().any(|w| w.degree > 0 && w.corner.is_none());
            let corners: Vec<String> = words
                .iter()
                .filter_map(|w| match w.corner {
                    Some(c) if strict || c != unit => Some(format!("{}:{}", w.name, words[c].name)),
                    _ => None,
                })
                .collect();
            if !corners.is_empty() {
                s.push("corners", corners.join("; "));
            }
            if strict {
                s.push("strict_corners", "true");
            }
        }
    }
    s
}

fn local_system_section(l: &Rank1LocalSystem) -> Section {
    let mut s = Section::new(SectionKind::LocalSystem);
    s.push("name", l.name());
    s.push("over", l.algebra().name());
    let a = l.algebra();
    let rho: Vec<String> = match (l.monodromy(), a.backend()) {
        (Monodromy::Laurent(v), Backend::Laurent(la)) => v
            .iter()
            .zip(la.generators())
            .filter(|(c, _)| !c.is_one())
            .map(|(c, g)| format!("{g}:{}", fmt_rational(c)))
            .collect(),
        (Monodromy::Table(m), Backend::Table(t)) => m
            .iter()
            .map(|(i, c)| format!("{}:{}", t.words()[*i].name, fmt_rational(c)))
            .collect(),
        _ => unreachable!("monodromy matches the backend"),
    };
    if !rho.is_empty() {
        s.push("rho", rho.join(", "));
    }
    if l.ground() == GroundRing::Rationals {
        s.push("ground", "q");
    }
    s
}

fn module_section(m: &DgModule) -> Section {
    let mut s = Section::new(SectionKind::Module);
    s.push("name", m.name());
    match m.origin() {
        ModuleOrigin::Twisted { base, system } => {
            s.push("base", base.name());
            s.push("twist", system.name());
            return s;
        }
        ModuleOrigin::Regular => {
            s.push("over", m.algebra().name());
            s.push("kind", "regular");
            if let Some(r) = m.box_radius() {
                if r != DEFAULT_BOX_RADIUS {
                    s.push("radius", r.to_string());
                }
            }
            return s;
        }
        ModuleOrigin::Declared => {}
    }
    s.push("over", m.algebra().name());
    let ModuleKind::Finite(f) = m.kind() else {
        unreachable!("declared modules are finite")
    };
    let words = f.words();
    let basis: Vec<String> = words.iter().map(|w| format!("{}:{}", w.name, w.degree)).collect();
    s.push("basis", basis.join(", "));
    let name = |w: &Word| words[basis_index(w)].name.clone();
    let mut actions = Vec::new();
    match (f.action(), m.algebra().backend()) {
        (ModuleAction::Table(table), Backend::Table(t)) => {
            let mut keys: Vec<&(usize, usize)> = table.keys().collect();
            keys.sort();
            for &(i, a) in keys {
                let v = &table[&(i, a)];
                let identity = v.len() == 1 && v.get(&Word::Basis(i)).is_some_and(One::is_one);
                if a == t.unit_index() && identity {
                    continue;
                }
                actions.push(format!("{}*{}={}", words[i].name, t.words()[a].name, linear(v, name)));
            }
        }
        (ModuleAction::Laurent { forward, .. }, Backend::Laurent(l)) => {
            for (g, mat) in forward.iter().enumerate() {
                for j in 0..words.len() {
                    let col: Terms<Word> = (0..words.len())
                        .filter(|&i| !mat[(i, j)].is_zero())
                        .map(|i| (Word::Basis(i), mat[(i, j)].clone()))
                        .collect();
                    let identity = col.len() == 1 && col.get(&Word::Basis(j)).is_some_and(One::is_one);
                    if !identity {
                        actions.push(format!("{}*{}={}", words[j].name, l.generators()[g], linear(&col, name)));
                    }
                }
            }
        }
        _ => unreachable!("action matches the backend"),
    }
    if !actions.is_empty() {
        s.push("action", actions.join("; "));
    }
    let diffs: Vec<String> = (0..words.len())
        .filter(|&i| !f.differential_entry(i).is_empty())
        .map(|i| format!("{}->{}", words[i].name, linear(f.differential_entry(i), name)))
        .collect();
    if !diffs.is_empty() {
        s.push("differential", diffs.join("; "));
    }
    let lowest = words.iter().map(|w| w.degree).min().unwrap_or(0);
    if m.min_degree() != lowest.min(0) {
        s.push("min_degree", m.min_degree().to_string());
    }
    let highest = words.iter().map(|w| w.degree).max().unwrap_or(0);
    if m.truncation() != m.algebra().truncation().unwrap_or(0).max(highest) {
        s.push("truncation", m.truncation().to_string());
    }
    s
}

fn pairs(entries: &MapEntries, from: &TwistedComplex, to: &TwistedComplex) -> String {
    entries
        .iter()
        .map(|((i, j), v)| format!("{},{}:{}", from.generators()[*i].name, to.generators()[*j].name, v))
        .collect::<Vec<_>>()
        .join("; ")
}

fn complex_section(x: &TwistedComplex) -> Section {
    let mut s = Section::new(SectionKind::Complex);
    s.push("name", x.name());
    s.push("module", x.module().name());
    let gens: Vec<String> = x
        .generators()
        .iter()
        .map(|g| {
            let mut out = format!("{}:{}", g.name, g.degree);
            if let Some(a) = &g.action {
                out.push_str(&format!("@{}", fmt_rational(a)));
            }
            if let Some(l) = &g.class_label {
                out.push_str(&format!(":{l}"));
            }
            out
        })
        .collect();
    s.push("generators", gens.join(", "));
    if !x.cocycle().is_empty() {
        s.push("cocycle", pairs(x.cocycle(), x, x));
    }
    s
}

/// The model file describing every object of the workspace, in order.
pub fn export(ws: &Workspace) -> ModelFile {
    let sections = ws
        .objects()
        .iter()
        .map(|o| match o {
            Object::Dga(a) => dga_section(a),
            Object::LocalSystem(l) => local_system_section(l),
            Object::Module(m) => module_section(m),
            Object::Complex(x) => complex_section(x),
            Object::Map(nu) => {
                let mut s = Section::new(SectionKind::Map);
                s.push("name", nu.name());
                s.push("from", nu.source().name());
                s.push("to", nu.target().name());
                if !nu.entries().is_empty() {
                    s.push("nu", pairs(nu.entries(), nu.source(), nu.target()));
                }
                s
            }
            Object::Homotopy(h) => {
                let mut s = Section::new(SectionKind::Homotopy);
                s.push("name", h.name());
                s.push("map0", h.nu0().name());
                s.push("map1", h.nu1().name());
                if !h.entries().is_empty() {
                    s.push("h", pairs(h.entries(), h.nu0().source(), h.nu0().target()));
                }
                s
            }
        })
        .collect();
    ModelFile { sections }
}
