use std::f64::consts::TAU;

use ktorsion::analysis::su2_points;
use ktorsion::catalog::lookup;
use ktorsion::foxcalc::{fox_derivative, fundamental_identity_holds};
use ktorsion::reps::{adjoint_images, build_rep};
use ktorsion::torsion::{homology_torsion, limit_from_parts, meridian_denominator};
use ktorsion::{Complex64, GroupRingElt, LaurentMatrix, LaurentPoly, Letter, Presentation, Tolerances, Word};
use proptest::prelude::*;

fn letter(rank: usize) -> impl Strategy<Value = Letter> {
    (0..rank, any::<bool>()).prop_map(|(g, pos)| Letter::new(g, if pos { 1 } else { -1 }))
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(rank), 0..=max_len).prop_map(Word::from_letters)
}

fn laurent(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
    (-3i64..3, prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..=max_len))
        .prop_map(|(o, cs)| LaurentPoly::new(o, cs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn elt(w: &Word) -> GroupRingElt {
    GroupRingElt::from_word(w.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fox_fundamental_identity(w in word(4, 30)) {
        prop_assert!(fundamental_identity_holds(&w, 4));
    }

    #[test]
    fn fox_leibniz(u in word(3, 12), v in word(3, 12), j in 0usize..3) {
        let lhs = fox_derivative(&u.mul(&v), j, 3).unwrap();
        let rhs = &fox_derivative(&u, j, 3).unwrap() + &(&elt(&u) * &fox_derivative(&v, j, 3).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fox_inverse_rule(u in word(3, 16), j in 0usize..3) {
        let lhs = fox_derivative(&u.inverse(), j, 3).unwrap();
        let rhs = -&(&elt(&u.inverse()) * &fox_derivative(&u, j, 3).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn free_reduction_is_confluent(u in word(3, 12), v in word(3, 12), l in letter(3), at in 0usize..13) {
        let mut letters = u.letters().to_vec();
        let at = at.min(letters.len());
        letters.splice(at..at, [l, l.inverse()]);
        prop_assert_eq!(&Word::from_letters(letters), &u);
        prop_assert_eq!(u.mul(&v).mul(&v.inverse()), u.clone());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
    }

    #[test]
    fn presentation_text_round_trip(rels in prop::collection::vec(word(3, 10), 1..3)) {
        let rels: Vec<Word> = rels.into_iter().filter(|r| !r.is_empty()).collect();
        prop_assume!(!rels.is_empty());
        let p = Presentation::new(vec!["a".into(), "b".into(), "c".into()], rels, 0, vec![1, 1, 1]);
        let back = Presentation::parse(&p.to_text()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn laurent_json_round_trip(p in laurent(6)) {
        let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn laurent_product_evaluates(a in laurent(5), b in laurent(5), th in 0.0f64..TAU) {
        let z = Complex64::from_polar(1.0, th);
        let lhs = (&a * &b).evaluate(z).unwrap();
        let rhs = a.evaluate(z).unwrap() * b.evaluate(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()) * 100.0);
    }

    #[test]
    fn divide_out_root_inverts_multiplication(a in laurent(5), th in 0.0f64..TAU) {
        let r = Complex64::from_polar(1.0, th);
        let factor = LaurentPoly::new(0, vec![-r, Complex64::new(1.0, 0.0)]);
        let (q, rem) = (&a * &factor).divide_out_root(r, 1);
        prop_assert!(q.max_coeff_distance(&a) < 1e-12 * 100.0);
        prop_assert!(rem.iter().all(|x| *x < 1e-12 * 100.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn determinant_routes_agree(n in 1usize..=7, entries in prop::collection::vec(laurent(3), 49)) {
        let m = LaurentMatrix::from_fn(n, |i, j| entries[i * 7 + j].clone());
        let a = m.determinant_cofactor();
        let b = m.determinant_interpolation();
        let scale = a.max_modulus().max(1.0);
        prop_assert!(a.max_coeff_distance(&b) <= 1e-10 * scale, "{} vs {}", a, b);
        for th in [0.3, 1.7, 4.0] {
            let z = Complex64::from_polar(1.0, th);
            let direct = m.evaluate(z).unwrap().determinant();
            prop_assert!((a.evaluate(z).unwrap() - direct).norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn limit_route_is_shift_invariant() {
    let tol = Tolerances::default();
    for name in ["3_1", "5_2"] {
        let p = lookup(name).unwrap();
        let thetas: Vec<f64> = (1..40).map(|i| TAU * i as f64 / 40.0).collect();
        for x in su2_points(&p, &thetas, &tol).unwrap() {
            let s = Complex64::from_polar(1.0, x.theta);
            let r = build_rep(&p, s, Complex64::new(x.u, 0.0), Complex64::from_polar(1.0, x.theta / 2.0), tol.relation)
                .unwrap();
            let delta = homology_torsion(&p, &r, 0, &tol).unwrap();
            let den = meridian_denominator(&p, &adjoint_images(&r).unwrap(), 0);
            let base = limit_from_parts(&delta, &den).unwrap().exact;
            for m in [-5, -1, 2, 9] {
                let shifted = limit_from_parts(&delta.shift(m), &den).unwrap().exact;
                assert_eq!(shifted, base, "{name} θ={} m={m}", x.theta);
            }
        }
    }
}

#[test]
fn conjugation_relator_has_meridian_weight_zero() {
    let p = lookup("5_2").unwrap();
    for r in p.relators() {
        assert_eq!(p.alpha_of(r), 0);
    }
}
