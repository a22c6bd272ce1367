//! Built-in models with their expected homology.
//!
//! Each fixture records where its expected values come from; the
//! `models` integration test recomputes every one of them from that
//! independent description before anything else relies on it.

use std::sync::Arc;

use crate::algebra::{coeff, free_algebra, AlgebraElement, Dga, GroundRing, Rank1LocalSystem, TableDgaBuilder};
use crate::complex::{validate_cocycle, Generator, TwistedComplex};
use crate::error::{Error, Result};
use crate::format::{Object, Workspace};
use crate::linalg::HomologyGroup;
use crate::module::{twist_by_rank1, DgModule, ModuleBuilder, ModuleOrigin};

#[derive(Clone, Debug)]
pub struct NamedModel {
    pub identifier: String,
    pub dga: Arc<Dga>,
    pub module: Arc<DgModule>,
    pub complex: Arc<TwistedComplex>,
    /// `(degree, group)` for every degree the fixture covers.
    pub expected_homology: Vec<(i64, HomologyGroup)>,
    pub note: &'static str,
}

impl NamedModel {
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        let lo = self.expected_homology.first().map_or(0, |e| e.0);
        let hi = self.expected_homology.last().map_or(0, |e| e.0);
        lo..=hi
    }

    pub fn computed_homology(&self) -> Result<Vec<(i64, HomologyGroup)>> {
        let h = self.complex.homology(self.degrees())?;
        Ok(self.degrees().zip(h).collect())
    }

    /// The objects behind the model, ready for [`crate::format::export`].
    pub fn workspace(&self) -> Workspace {
        let mut ws = Workspace::new();
        ws.insert(Object::Dga(self.dga.clone())).expect("fresh workspace");
        let mut modules = vec![self.module.clone()];
        while let ModuleOrigin::Twisted { base, .. } = modules.last().expect("nonempty").origin() {
            modules.push(base.clone());
        }
        for m in modules.iter().rev() {
            if let ModuleOrigin::Twisted { system, .. } = m.origin() {
                ws.insert(Object::LocalSystem(system.clone())).expect("unique names");
            }
            ws.insert(Object::Module(m.clone())).expect("unique names");
        }
        ws.insert(Object::Complex(self.complex.clone())).expect("unique names");
        ws
    }
}

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn zero() -> HomologyGroup {
    HomologyGroup::trivial()
}

fn torsion(d: i64) -> HomologyGroup {
    HomologyGroup::new(0, vec![d.into()])
}

fn pattern(degrees: std::ops::RangeInclusive<i64>, at: impl Fn(i64) -> HomologyGroup) -> Vec<(i64, HomologyGroup)> {
    degrees.map(|d| (d, at(d))).collect()
}

fn laurent_circle_ring() -> Arc<Dga> {
    Dga::laurent("A", &["t"]).expect("one generator")
}

fn circle_generators() -> Vec<Generator> {
    vec![
        Generator::new("m", 0).with_action(coeff(0)),
        Generator::new("M", 1).with_action(coeff(1)),
    ]
}

/// Z[t, t^-1] acting on itself, `m_{M,m} = t - 1`: the cellular complex of the
/// universal cover of the circle.
pub fn circle_model() -> NamedModel {
    let a = laurent_circle_ring();
    let f = DgModule::regular("F", &a).expect("Laurent ring");
    let m = &AlgebraElement::monomial(&a, &[1]) - &AlgebraElement::unit(&a);
    let x = TwistedComplex::new("S1", &f, circle_generators(), vec![("M", "m", m)]).expect("valid names");
    NamedModel {
        identifier: "circle".into(),
        dga: a,
        module: f,
        complex: Arc::new(x),
        expected_homology: pattern(0..=8, |d| if d == 0 { z() } else { zero() }),
        note: "cellular chains of the real line, a contractible cover of the circle",
    }
}

/// The circle with coefficients in Z, `t` acting by -1: `H_0 = Z/2`.
pub fn circle_twisted_model() -> NamedModel {
    let a = laurent_circle_ring();
    let mut b = ModuleBuilder::new("Z1", &a);
    b.word("one", 0).expect("fresh word");
    let base = b.build().expect("identity action");
    let l = Rank1LocalSystem::new("L", &a, GroundRing::Integers, &[("t", coeff(-1))]).expect("-1 is a unit");
    let f = twist_by_rank1(&base, &l).expect("same algebra").renamed("ZL");
    let m = &AlgebraElement::monomial(&a, &[1]) - &AlgebraElement::unit(&a);
    let x = TwistedComplex::new("S1L", &f, circle_generators(), vec![("M", "m", m)]).expect("valid names");
    NamedModel {
        identifier: "circle-twisted".into(),
        dga: a,
        module: f,
        complex: Arc::new(x),
        expected_homology: vec![(0, torsion(2)), (1, zero())],
        note: "one cell per degree with boundary -1 - 1 = -2",
    }
}

/// The free algebra on one generator `x` of degree `n - 1` acting on itself,
/// with `m_{M,m} = x`: the cone on right multiplication by `x`.
pub fn sphere_model(n: i64, truncation: i64) -> Result<NamedModel> {
    if n < 2 {
        return Err(Error::Invalid(format!("sphere_model needs n >= 2, got {n}")));
    }
    if truncation < 2 * n {
        return Err(Error::TruncationTooSmall {
            truncation,
            needed: 2 * n,
        });
    }
    let a = free_algebra("P", &[("x", n - 1)], truncation, &[])?;
    let f = DgModule::regular("F", &a)?;
    let x = AlgebraElement::named(&a, "x")?;
    let c = TwistedComplex::new(
        format!("S{n}"),
        &f,
        vec![
            Generator::new("m", 0).with_action(coeff(0)),
            Generator::new("M", n).with_action(coeff(1)),
        ],
        vec![("M", "m", x)],
    )?;
    Ok(NamedModel {
        identifier: format!("sphere-{n}"),
        dga: a,
        module: f,
        complex: Arc::new(c),
        expected_homology: pattern(0..=truncation - 2, |d| if d == 0 { z() } else { zero() }),
        note: "right multiplication by x is injective onto positive degrees of the free algebra",
    })
}

/// Z[t^±, s^±] with the Koszul arrangement on a square:
/// `m_{a,p} = t - 1`, `m_{b,p} = s - 1`, `m_{T,a} = s - 1`, `m_{T,b} = 1 - t`.
pub fn torus_model() -> NamedModel {
    let a = Dga::laurent("A2", &["t", "s"]).expect("distinct generators");
    let f = DgModule::regular("F", &a).expect("Laurent ring");
    let one = AlgebraElement::unit(&a);
    let t = &AlgebraElement::monomial(&a, &[1, 0]) - &one;
    let s = &AlgebraElement::monomial(&a, &[0, 1]) - &one;
    let c = TwistedComplex::new(
        "T2",
        &f,
        vec![
            Generator::new("p", 0).with_action(coeff(0)),
            Generator::new("a", 1).with_action(coeff(1)),
            Generator::new("b", 1).with_action(coeff(1)),
            Generator::new("T", 2).with_action(coeff(2)),
        ],
        vec![("a", "p", t.clone()), ("b", "p", s.clone()), ("T", "a", s), ("T", "b", -&t)],
    )
    .expect("valid names");
    NamedModel {
        identifier: "torus".into(),
        dga: a,
        module: f,
        complex: Arc::new(c),
        expected_homology: pattern(0..=4, |d| if d == 0 { z() } else { zero() }),
        note: "cellular chains of the plane, the universal cover of the torus",
    }
}

/// Coefficients for [`rp_model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RpCoefficients {
    /// The group ring itself: chains on the double cover `S^n`.
    GroupRing,
    /// Z with `g` acting trivially: `RP^n` with integer coefficients.
    Trivial,
    /// Z with `g` acting by -1: the orientation-twisted coefficients.
    Sign,
}

/// `Z[g]/(g^2 - 1)` in degree 0 with generators `e0..en`, `m_{e_k,e_{k-1}}`
/// alternating `1 - g`, `1 + g`.
pub fn rp_model(n: i64, coefficients: RpCoefficients) -> Result<NamedModel> {
    if n < 1 {
        return Err(Error::Invalid(format!("rp_model needs n >= 1, got {n}")));
    }
    let mut b = TableDgaBuilder::new("G2", 0);
    let e = b.word("e", 0)?;
    let g = b.word("g", 0)?;
    b.set_unit("e")?;
    b.set_product(g, g, vec![(e, coeff(1))]);
    let a = b.build()?;
    let module = match coefficients {
        RpCoefficients::GroupRing => DgModule::regular("F", &a)?,
        RpCoefficients::Trivial | RpCoefficients::Sign => {
            let mut mb = ModuleBuilder::new("Z1", &a);
            let one = mb.word("one", 0)?;
            mb.set_action(one, g, vec![(one, coeff(1))]);
            let base = mb.build()?;
            if coefficients == RpCoefficients::Trivial {
                base
            } else {
                let l = Rank1LocalSystem::new("sgn", &a, GroundRing::Integers, &[("g", coeff(-1))])?;
                twist_by_rank1(&base, &l)?.renamed("Zsgn")
            }
        }
    };
    let ge = AlgebraElement::named(&a, "g")?;
    let unit = AlgebraElement::unit(&a);
    let gens: Vec<Generator> = (0..=n).map(|k| Generator::new(format!("e{k}"), k).with_action(coeff(k))).collect();
    let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let entries: Vec<(&str, &str, AlgebraElement)> = (1..=n as usize)
        .map(|k| {
            let m = if k % 2 == 1 { &unit - &ge } else { &unit + &ge };
            (names[k].as_str(), names[k - 1].as_str(), m)
        })
        .collect();
    let c = TwistedComplex::new(format!("RP{n}"), &module, gens, entries)?;
    let (expected, note): (Vec<(i64, HomologyGroup)>, &'static str) = match coefficients {
        RpCoefficients::GroupRing => (
            pattern(0..=n, |d| if d == 0 || d == n { z() } else { zero() }),
            "cellular chains of the double cover S^n",
        ),
        // boundary maps alternate 0 (odd k) and 2 (even k)
        RpCoefficients::Trivial => (
            pattern(0..=n, |d| match d {
                0 => z(),
                d if d == n && d % 2 == 1 => z(),
                d if d < n && d % 2 == 1 => torsion(2),
                _ => zero(),
            }),
            "cellular chains of RP^n: boundaries alternate 0 and 2",
        ),
        // boundary maps alternate 2 (odd k) and 0 (even k)
        RpCoefficients::Sign => (
            pattern(0..=n, |d| match d {
                d if d == n && d % 2 == 0 => z(),
                d if d % 2 == 0 => torsion(2),
                _ => zero(),
            }),
            "cellular chains of RP^n twisted by orientation: boundaries alternate 2 and 0",
        ),
    };
    Ok(NamedModel {
        identifier: format!(
            "rp-{n}-{}",
            match coefficients {
                RpCoefficients::GroupRing => "group-ring",
                RpCoefficients::Trivial => "trivial",
                RpCoefficients::Sign => "sign",
            }
        ),
        dga: a,
        module,
        complex: Arc::new(c),
        expected_homology: expected,
        note,
    })
}

/// `F = {1, u}` over the free algebra on `x` (degree 1) with `1·x = u`,
/// generators `m`, `M` of degrees 0, 2 and `m_{M,m} = x`: the total space
/// `S^3` of the Hopf fibration.
pub fn hopf_model() -> NamedModel {
    let a = free_algebra("P", &[("x", 1)], 12, &[]).expect("positive degree");
    let mut b = ModuleBuilder::new("F", &a);
    let one = b.word("one", 0).expect("fresh word");
    let u = b.word("u", 1).expect("fresh word");
    let x = a.as_table().expect("table").index_of("x").expect("generator word");
    b.set_action(one, x, vec![(u, coeff(1))]);
    let f = b.build().expect("finite module");
    let c = TwistedComplex::new(
        "HOPF",
        &f,
        vec![
            Generator::new("m", 0).with_action(coeff(0)),
            Generator::new("M", 2).with_action(coeff(1)),
        ],
        vec![("M", "m", AlgebraElement::named(&a, "x").expect("generator word"))],
    )
    .expect("valid names");
    NamedModel {
        identifier: "hopf".into(),
        dga: a,
        module: f,
        complex: Arc::new(c),
        expected_homology: pattern(0..=6, |d| if d == 0 || d == 3 { z() } else { zero() }),
        note: "cells 1@m, u@m, 1@M, u@M with the single boundary D(1@M) = u@m",
    }
}

/// Every built-in model, in a fixed order.
pub fn all_models() -> Vec<NamedModel> {
    let mut v = vec![circle_model(), circle_twisted_model()];
    v.push(sphere_model(2, 12).expect("truncation covers 2n"));
    v.push(sphere_model(3, 12).expect("truncation covers 2n"));
    v.push(torus_model());
    for n in [2, 3] {
        v.push(rp_model(n, RpCoefficients::GroupRing).expect("n >= 1"));
    }
    v.push(rp_model(3, RpCoefficients::Trivial).expect("n >= 1"));
    v.push(rp_model(2, RpCoefficients::Sign).expect("n >= 1"));
    v.push(hopf_model());
    v
}

/// All validation reports of a model, in the order algebra, module, cocycle.
pub fn validate_model(m: &NamedModel) -> Vec<crate::report::ValidationReport> {
    vec![
        crate::algebra::validate_dga(&m.dga),
        crate::module::validate_module(&m.module),
        validate_cocycle(&m.complex),
    ]
}
