use std::collections::BTreeSet;

use dgc_core::algebra::{coeff, Backend, Word};
use dgc_core::complex::{validate_cocycle, Chain, TwistedComplex};
use dgc_core::gauge::{flip_sign, random_complex, random_homotopy, random_triple, square_defects, GaugeAlgebra, GaugeConfig};
use dgc_core::maps::{compose, validate_continuation, validate_homotopy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> GaugeConfig {
    GaugeConfig {
        max_generators: 5,
        truncation: 10,
        coefficient_bound: 2,
    }
}

fn some_chain(rng: &mut impl Rng, x: &TwistedComplex) -> Chain {
    let a = x.module().algebra();
    let words: Vec<Word> = match a.backend() {
        Backend::Laurent(_) => (-1..=1).map(|e| Word::Monomial(vec![e])).collect(),
        Backend::Table(_) => (0..=2).flat_map(|d| a.basis_of_degree(d)).collect(),
    };
    let mut c = Chain::zero();
    for _ in 0..3 {
        let g = rng.gen_range(0..x.generators().len());
        let w = words[rng.gen_range(0..words.len())].clone();
        c.add_term(g, w, coeff(rng.gen_range(-2..=2)));
    }
    c
}

#[test]
fn generated_complexes_square_to_zero_and_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for kind in GaugeAlgebra::ALL {
        let a = kind.build(cfg().truncation).unwrap();
        for _ in 0..10 {
            let g = random_complex(&mut rng, &a, &cfg()).unwrap();
            let r = validate_cocycle(&g.complex);
            assert!(r.is_valid(), "{kind:?}: {r}");
            assert!(square_defects(&g.complex).unwrap().is_empty());
            assert!(validate_continuation(&g.to_base).is_valid());
            assert!(validate_continuation(&g.from_base).is_valid());
            // box surrogates over the Laurent ring are not gauge invariant
            if kind == GaugeAlgebra::Laurent {
                continue;
            }
            let lo = g.complex.min_generator_degree().unwrap();
            let hi = g.complex.max_generator_degree().unwrap() + 1;
            assert_eq!(g.complex.homology(lo..=hi).unwrap(), g.base.homology(lo..=hi).unwrap(), "{kind:?}");
        }
    }
}

#[test]
fn maps_and_homotopies_satisfy_their_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for kind in GaugeAlgebra::ALL {
        let a = kind.build(cfg().truncation).unwrap();
        for _ in 0..5 {
            let t = random_triple(&mut rng, &a, &cfg()).unwrap();
            let nu = compose(&t.first, &t.second).unwrap();
            assert!(validate_continuation(&nu).is_valid());
            let h = random_homotopy(&mut rng, &nu, 2).unwrap();
            let r = validate_homotopy(&h);
            assert!(r.is_valid(), "{kind:?}: {r}");
            let (s, tg) = (nu.source(), nu.target());
            for _ in 0..4 {
                let c = some_chain(&mut rng, s);
                let lhs = tg.apply_differential(&nu.apply(&c).unwrap()).unwrap();
                let rhs = nu.apply(&s.apply_differential(&c).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                let diff = h.nu1().apply(&c).unwrap().sub(&h.nu0().apply(&c).unwrap());
                let dh = tg.apply_differential(&h.apply(&c).unwrap()).unwrap();
                let hd = h.apply(&s.apply_differential(&c).unwrap()).unwrap();
                assert_eq!(diff, dh.add(&hd));
            }
        }
    }
}

#[test]
fn sign_faults_are_caught_at_the_right_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut caught = 0;
    let mut tries = 0;
    while caught < 20 {
        tries += 1;
        assert!(tries < 2000, "too few breakable complexes");
        let kind = GaugeAlgebra::ALL[rng.gen_range(0..4)];
        let a = kind.build(cfg().truncation).unwrap();
        let g = random_complex(&mut rng, &a, &cfg()).unwrap();
        let keys: Vec<_> = g.complex.cocycle().keys().copied().collect();
        if keys.is_empty() {
            continue;
        }
        let bad = flip_sign(&g.complex, keys[rng.gen_range(0..keys.len())]);
        let defects = square_defects(&bad).unwrap();
        if defects.is_empty() {
            continue;
        }
        let names = |(i, j): (usize, usize)| format!("({}, {})", bad.generators()[i].name, bad.generators()[j].name);
        let expected: BTreeSet<String> = defects.into_iter().map(names).collect();
        let r = validate_cocycle(&bad);
        let found: BTreeSet<String> = r
            .violations
            .iter()
            .filter(|v| v.axiom == "maurer-cartan")
            .map(|v| v.location.clone())
            .collect();
        assert_eq!(found, expected);
        assert!(r.violations.iter().all(|v| v.axiom == "maurer-cartan"));
        caught += 1;
    }
}
