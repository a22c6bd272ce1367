use super::*;
use crate::algebra::{free_algebra, Dga, Rank1LocalSystem};
use crate::module::{twist_by_rank1, ModuleBuilder};

fn circle() -> TwistedComplex {
    let a = Dga::laurent("Z[t]", &["t"]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let m = &AlgebraElement::monomial(&a, &[1]) - &AlgebraElement::unit(&a);
    TwistedComplex::new(
        "S1",
        &f,
        vec![
            Generator::new("m", 0).with_action(coeff(0)),
            Generator::new("M", 1).with_action(coeff(1)),
        ],
        vec![("M", "m", m)],
    )
    .unwrap()
}

fn sphere(n: i64, truncation: i64) -> TwistedComplex {
    let a = free_algebra("P", &[("x", n - 1)], truncation, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let x = AlgebraElement::named(&a, "x").unwrap();
    TwistedComplex::new(
        "S",
        &f,
        vec![
            Generator::new("m", 0).with_action(coeff(0)),
            Generator::new("M", n).with_action(coeff(1)),
        ],
        vec![("M", "m", x)],
    )
    .unwrap()
}

fn groups(v: &[HomologyGroup]) -> Vec<String> {
    v.iter().map(|g| g.to_string()).collect()
}

#[test]
fn circle_homology() {
    let c = circle();
    assert!(validate_cocycle(&c).is_valid());
    let h = c.homology(0..=8).unwrap();
    assert_eq!(groups(&h), ["Z", "0", "0", "0", "0", "0", "0", "0", "0"]);
}

#[test]
fn circle_differential_on_cells() {
    let c = circle();
    let cell = Chain::cell(1, Word::Monomial(vec![0]));
    let d = c.apply_differential(&cell).unwrap();
    assert_eq!(c.format_chain(&d), "-1@m + t@m");
}

#[test]
fn sphere_homology_below_truncation() {
    let c = sphere(2, 12);
    assert!(validate_cocycle(&c).is_valid());
    let h = c.homology(0..=10).unwrap();
    assert_eq!(h[0], HomologyGroup::free(1));
    assert!(h[1..].iter().all(HomologyGroup::is_trivial));
}

#[test]
fn sphere_window_past_truncation_errors() {
    let c = sphere(2, 6);
    assert!(matches!(c.homology(0..=7), Err(Error::TruncationExceeded { .. })));
}

#[test]
fn hopf_total_space() {
    let a = free_algebra("P", &[("x", 1)], 12, &[]).unwrap();
    let mut b = ModuleBuilder::new("F", &a);
    let one = b.word("one", 0).unwrap();
    let u = b.word("u", 1).unwrap();
    let x = a.as_table().unwrap().index_of("x").unwrap();
    b.set_action(one, x, vec![(u, coeff(1))]);
    let f = b.build().unwrap();
    let c = TwistedComplex::new(
        "Hopf",
        &f,
        vec![Generator::new("m", 0), Generator::new("M", 2)],
        vec![("M", "m", AlgebraElement::named(&a, "x").unwrap())],
    )
    .unwrap();
    assert!(validate_cocycle(&c).is_valid());
    let h = c.homology(0..=6).unwrap();
    assert_eq!(groups(&h), ["Z", "0", "0", "Z", "0", "0", "0"]);
}

#[test]
fn mobius_twist_gives_two_torsion() {
    let a = Dga::laurent("Z[t]", &["t"]).unwrap();
    let mut b = ModuleBuilder::new("Z", &a);
    let one = b.word("1", 0).unwrap();
    b.set_generator_action(0, one, vec![(one, coeff(1))]);
    let f = b.build().unwrap();
    let l = Rank1LocalSystem::new("sign", &a, GroundRing::Integers, &[("t", coeff(-1))]).unwrap();
    let f = twist_by_rank1(&f, &l).unwrap();
    let m = &AlgebraElement::monomial(&a, &[1]) - &AlgebraElement::unit(&a);
    let c = TwistedComplex::new(
        "S1",
        &f,
        vec![Generator::new("m", 0), Generator::new("M", 1)],
        vec![("M", "m", m)],
    )
    .unwrap();
    let h = c.homology(0..=1).unwrap();
    assert_eq!(groups(&h), ["Z/2", "0"]);
}

#[test]
fn bad_cocycle_is_reported() {
    let a = free_algebra("P", &[("x", 1)], 8, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let x = AlgebraElement::named(&a, "x").unwrap();
    let c = TwistedComplex::new(
        "bad",
        &f,
        vec![Generator::new("a", 0), Generator::new("b", 2), Generator::new("c", 4)],
        vec![("b", "a", x.clone()), ("c", "b", x.clone())],
    )
    .unwrap();
    let r = validate_cocycle(&c);
    assert!(!r.is_valid());
    assert!(r.violations.iter().any(|v| v.axiom == "maurer-cartan" && v.location == "(c, a)"));
    assert!(matches!(c.homology(0..=4), Err(Error::DifferentialNotSquareZero { .. })));
}

#[test]
fn degree_violation_is_reported() {
    let a = free_algebra("P", &[("x", 1)], 8, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let x = AlgebraElement::named(&a, "x").unwrap();
    let c = TwistedComplex::new("bad", &f, vec![Generator::new("a", 0), Generator::new("b", 3)], vec![("b", "a", x)])
        .unwrap();
    let r = validate_cocycle(&c);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].axiom, "degree");
}

#[test]
fn filtered_sphere_and_spectral_numbers() {
    let s = sphere(2, 8);
    let low = filtered_subcomplex(&s, &Level::Finite(coeff(1))).unwrap();
    assert_eq!(low.generators().len(), 1);
    let z = s.cell("x", "m").unwrap();
    let half = Coeff::new(1.into(), 2.into());
    assert_eq!(spectral_number(&s, &z, &half).unwrap(), Level::Finite(coeff(1)));

    let c = circle();
    let z = Chain::cell(0, Word::Monomial(vec![0]));
    assert_eq!(spectral_number(&c, &z, &half).unwrap(), Level::Infinite);
    let w = c.apply_differential(&Chain::cell(1, Word::Monomial(vec![0]))).unwrap();
    assert_eq!(spectral_number(&c, &w, &half).unwrap(), Level::Finite(coeff(1)));
}

#[test]
fn spectral_number_rejects_non_cycles_and_missing_actions() {
    let s = sphere(2, 8);
    let not_cycle = Chain::cell(1, Word::Basis(0));
    assert!(matches!(
        spectral_number(&s, &not_cycle, &coeff(5)),
        Err(Error::NotACycle(_))
    ));
    let a = free_algebra("P", &[("x", 1)], 8, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let bare = TwistedComplex::new("bare", &f, vec![Generator::new("m", 0)], vec![]).unwrap();
    assert!(matches!(
        filtered_subcomplex(&bare, &Level::Infinite),
        Err(Error::ActionsMissing)
    ));
}

#[test]
fn non_monotone_cocycle_rejected() {
    let a = free_algebra("P", &[("x", 1)], 8, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let x = AlgebraElement::named(&a, "x").unwrap();
    let c = TwistedComplex::new(
        "up",
        &f,
        vec![
            Generator::new("m", 0).with_action(coeff(3)),
            Generator::new("M", 2).with_action(coeff(1)),
        ],
        vec![("M", "m", x)],
    )
    .unwrap();
    assert!(matches!(
        filtered_subcomplex(&c, &Level::Infinite),
        Err(Error::NotActionMonotone { .. })
    ));
}

#[test]
fn rational_homology_of_twisted_circle() {
    let a = Dga::laurent("Z[t]", &["t"]).unwrap();
    let mut b = ModuleBuilder::new("Z", &a);
    let one = b.word("1", 0).unwrap();
    b.set_generator_action(0, one, vec![(one, coeff(-1))]);
    let f = b.build().unwrap();
    let m = &AlgebraElement::monomial(&a, &[1]) - &AlgebraElement::unit(&a);
    let c = TwistedComplex::new("S1", &f, vec![Generator::new("m", 0), Generator::new("M", 1)], vec![("M", "m", m)])
        .unwrap();
    let h = c.homology_in(0..=1, GroundRing::Rationals).unwrap();
    assert!(h.iter().all(HomologyGroup::is_trivial));
}
