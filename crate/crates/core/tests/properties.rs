use dgc_core::algebra::{coeff, phi_twist, AlgebraElement, GroundRing, Rank1LocalSystem};
use dgc_core::format::{load, BuildOptions};
use dgc_core::linalg::{
    hermite_normal_form, kernel_lattice, lattice_contained, rational::rank_q, smith, IntMatrix, LatticeSolver,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..=6, r * c).prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_factorization(m in matrix(6)) {
        let s = smith(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|d| *d > BigInt::zero()));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j || i >= s.rank {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        prop_assert_eq!(s.rank, rank_q(&m.to_rational()));
    }

    #[test]
    fn kernels_are_kernels(m in matrix(6)) {
        let k = kernel_lattice(&m);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols(), m.cols() - rank_q(&m.to_rational()));
    }

    #[test]
    fn containment_matches_solving(a in matrix(5), seed in prop::collection::vec(-3i64..=3, 25)) {
        // columns built from `a` lie in its span; a unit vector usually does not
        let r = a.rows();
        let comb = IntMatrix::from_fn(a.cols(), 2, |i, j| BigInt::from(seed[(i * 2 + j) % seed.len()]));
        prop_assert!(lattice_contained(&a.mul(&comb), &a).unwrap());
        let solver = LatticeSolver::new(&a);
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::one();
            let col = IntMatrix::from_fn(r, 1, |k, _| e[k].clone());
            prop_assert_eq!(lattice_contained(&col, &a).unwrap(), solver.solve(&e).is_some());
        }
        let h = hermite_normal_form(&a);
        prop_assert!(lattice_contained(&h, &a).unwrap() && lattice_contained(&a, &h).unwrap());
    }
}

const TABLE: &str = "\
[dga]
name = E
kind = table
truncation = 2
basis = e:0, g:0, y:1, w:2
product = g*g=e; y*y=w
corners = y:g
";

fn element(a: &std::sync::Arc<dgc_core::algebra::Dga>, c: &[i64]) -> AlgebraElement {
    let names = ["e", "g", "y", "w"];
    let mut out = AlgebraElement::zero(a);
    for (n, k) in names.iter().zip(c) {
        out = &out + &AlgebraElement::named(a, n).unwrap().scale(&coeff(*k));
    }
    out
}

proptest! {
    #[test]
    fn rank_one_twist_is_multiplicative(x in prop::collection::vec(-3i64..=3, 4), y in prop::collection::vec(-3i64..=3, 4)) {
        let ws = load(TABLE, &BuildOptions::default()).unwrap();
        let a = ws.dga("E").unwrap();
        let l = Rank1LocalSystem::new("L", a, GroundRing::Integers, &[("g", coeff(-1))]).unwrap();
        let (p, q) = (element(a, &x), element(a, &y));
        if let Ok(pq) = p.multiply(&q) {
            let lhs = phi_twist(&l, &pq).unwrap();
            let rhs = phi_twist(&l, &p).unwrap().multiply(&phi_twist(&l, &q).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        prop_assert_eq!(phi_twist(&l, &phi_twist(&l, &p).unwrap()).unwrap(), p.clone());
        prop_assert_eq!(phi_twist(&l, &p.differential()).unwrap(), phi_twist(&l, &p).unwrap().differential());
    }
}
