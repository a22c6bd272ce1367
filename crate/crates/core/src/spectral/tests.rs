use std::sync::Arc;

use super::*;
use crate::algebra::{coeff, free_algebra, AlgebraElement, Dga};
use crate::complex::Generator;
use crate::module::ModuleBuilder;

fn sphere2() -> TwistedComplex {
    let a = free_algebra("P", &[("x", 1)], 12, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    TwistedComplex::new(
        "S2",
        &f,
        vec![Generator::new("m", 0), Generator::new("M", 2)],
        vec![("M", "m", AlgebraElement::named(&a, "x").unwrap())],
    )
    .unwrap()
}

fn hopf() -> TwistedComplex {
    let a = free_algebra("P", &[("x", 1)], 12, &[]).unwrap();
    let mut b = ModuleBuilder::new("F", &a);
    let one = b.word("one", 0).unwrap();
    let u = b.word("u", 1).unwrap();
    let x = a.as_table().unwrap().index_of("x").unwrap();
    b.set_action(one, x, vec![(u, coeff(1))]);
    let f = b.build().unwrap();
    TwistedComplex::new(
        "Hopf",
        &f,
        vec![Generator::new("m", 0), Generator::new("M", 2)],
        vec![("M", "m", AlgebraElement::named(&a, "x").unwrap())],
    )
    .unwrap()
}

fn circle() -> TwistedComplex {
    let a = Dga::laurent("Z[t]", &["t"]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let m = &AlgebraElement::monomial(&a, &[1]) - &AlgebraElement::unit(&a);
    TwistedComplex::new("S1", &f, vec![Generator::new("m", 0), Generator::new("M", 1)], vec![("M", "m", m)]).unwrap()
}

fn z() -> HomologyGroup {
    HomologyGroup::free(1)
}

fn unit_matrix(m: &IntMatrix) -> bool {
    m.shape() == (1, 1) && (m[(0, 0)] == 1.into() || m[(0, 0)] == (-1).into())
}

#[test]
fn sphere_pages() {
    let x = sphere2();
    let ps = pages(&x, 3, 0..=6).unwrap();
    let e2 = &ps[1];
    for q in 0..=4 {
        assert_eq!(e2.group(0, q), z(), "E2(0,{q})");
        assert_eq!(e2.group(2, q), z(), "E2(2,{q})");
        assert!(unit_matrix(&e2.differentials[&(2, q)]), "d2 at (2,{q})");
    }
    assert_eq!(ps[0], SpectralPage { r: 1, ..ps[0].clone() });
    let e3 = &ps[2];
    let support: Vec<_> = e3.support().into_iter().filter(|((p, q), _)| p + q <= 5).collect();
    assert_eq!(support, vec![((0, 0), z())]);
}

#[test]
fn hopf_pages() {
    let x = hopf();
    let ps = pages(&x, 3, 0..=4).unwrap();
    let e2 = &ps[1];
    assert_eq!(
        e2.support(),
        vec![((0, 0), z()), ((0, 1), z()), ((2, 0), z()), ((2, 1), z())]
    );
    assert!(unit_matrix(&e2.differentials[&(2, 0)]));
    let inf = infinity_page(&x, 0..=4).unwrap();
    assert_eq!(inf.support(), vec![((0, 0), z()), ((2, 1), z())]);
}

#[test]
fn zero_cocycle_degenerates_at_e1() {
    let a = free_algebra("P", &[("x", 1)], 8, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let x = TwistedComplex::new("split", &f, vec![Generator::new("m", 0), Generator::new("M", 2)], vec![]).unwrap();
    let ps = pages(&x, 3, 0..=5).unwrap();
    assert_eq!(ps[0].groups, ps[2].groups);
    assert!(ps[0].groups.iter().filter(|((_, q), _)| *q >= 0).all(|(_, g)| *g == z()));
}

#[test]
fn local_coefficients_match_e2() {
    let c = e2_matches_local_coefficients(&circle(), 0).unwrap();
    assert!(c.matches(), "{c:?}");
    assert_eq!(c.rows[0].1, z());
    assert_eq!(c.rows[1].1, HomologyGroup::trivial());

    for q in 0..=1 {
        let c = e2_matches_local_coefficients(&hopf(), q).unwrap();
        assert!(c.matches());
        assert!(c.rows.iter().all(|(_, g, _)| *g == z()));
    }
    let c = e2_matches_local_coefficients(&sphere2(), 3).unwrap();
    assert!(c.matches());
}

#[test]
fn fundamental_class_detection() {
    let x = hopf();
    let m_top = x.generator_index("M").unwrap();
    let f = x.module().as_finite().unwrap();
    let u = Chain::cell(m_top, Word::Basis(f.index_of("u").unwrap()));
    let class = shriek_to_point(&x, "M", &u).unwrap();
    assert_eq!(class.degree, 1);
    assert!(!class.is_zero());
    assert!(lives_over_fundamental(&x, &u).unwrap());

    let s = sphere2();
    let bottom = s.cell("1", "m").unwrap();
    assert!(!lives_over_fundamental(&s, &bottom).unwrap());
    assert!(shriek_to_point(&s, "M", &bottom).unwrap().is_zero());
    assert!(matches!(shriek_to_point(&s, "m", &bottom), Err(Error::NotTopDegree(_))));
    let not_cycle = s.cell("1", "M").unwrap();
    assert!(matches!(lives_over_fundamental(&s, &not_cycle), Err(Error::NotACycle(_))));

    let a = free_algebra("P", &[("x", 1)], 8, &[]).unwrap();
    let f = DgModule::regular("F", &a).unwrap();
    let split = TwistedComplex::new("split", &f, vec![Generator::new("m", 0), Generator::new("M", 2)], vec![]).unwrap();
    let beta = split.cell("x", "M").unwrap();
    assert!(lives_over_fundamental(&split, &beta).unwrap());
    assert!(!shriek_to_point(&split, "M", &beta).unwrap().is_zero());
}

#[test]
fn identity_induces_identity_on_pages() {
    let x = Arc::new(sphere2());
    let id = ContinuationCocycle::identity(&x);
    let (sp, tp, maps) = induced_on_pages(&id, 2, 0..=4).unwrap();
    assert_eq!(sp, tp);
    for page in &maps {
        for m in page.values() {
            assert_eq!(*m, IntMatrix::identity(m.rows()));
        }
    }
}
