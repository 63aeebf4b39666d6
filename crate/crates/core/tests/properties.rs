//! Property suites for the algebraic invariants.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use perfchar::hilbert_kunz::{bracket_power, hk_sequence};
use perfchar::homology::{complex_check, ext_grade, koszul_complex, koszul_grade, resolution_truncation, tensor_total_complex, tor};
use perfchar::ideal::{
    colimit_membership, intersection, is_regular_sequence, is_subset, membership, product, verify_certificate,
    ColimitIdeal,
};
use perfchar::valuation::perfect_valuation;
use perfchar::witt::{witt_add, witt_mul, PerfectRing, WittVector};
use perfchar::{PerfPoly, RelationMode, RingPresentation};

/// `PROPTEST_CASES` overrides the per-suite default.
fn cfg(cases: u32) -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(cases);
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn xy(p: u64) -> RingPresentation {
    RingPresentation::polynomial_ring(p, &["x", "y"]).unwrap()
}

fn mono(r: &RingPresentation, a: u64, b: u64, den: u64) -> PerfPoly {
    r.parse_element(&format!("x^({a}/{den})*y^({b}/{den})")).unwrap()
}

fn mono_text(gens: &[(u64, u64)], den: u64) -> String {
    gens.iter()
        .map(|(a, b)| format!("x^({a}/{den})*y^({b}/{den})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn monomial_membership_matches_divisibility(
        p in prime(),
        gens in prop::collection::vec((0u64..6, 0u64..6), 1..4),
        terms in prop::collection::vec((0u64..8, 0u64..8), 1..3),
    ) {
        let r = xy(p);
        let ring = r.level(1);
        let ideal = ring.parse_ideal(&mono_text(&gens, p)).unwrap();
        let divisible = |(a, b): &(u64, u64)| gens.iter().any(|(ga, gb)| ga <= a && gb <= b);
        let f = terms.iter().fold(r.zero(), |acc, (a, b)| &acc + &mono(&r, *a, *b, p));
        // a polynomial lies in a monomial ideal iff each of its terms does;
        // repeated terms add up mod p
        let mut counts = std::collections::BTreeMap::new();
        for t in &terms {
            *counts.entry(*t).or_insert(0u64) += 1;
        }
        let oracle = counts.iter().filter(|(_, c)| **c % p != 0).all(|(t, _)| divisible(t));
        let m = membership(&f, &ideal).unwrap();
        prop_assert_eq!(m.member, oracle);
        if let Some(c) = &m.certificate {
            prop_assert!(verify_certificate(&f, ideal.generators(), c, &ring).unwrap());
        }
    }

    #[test]
    fn membership_lifts_to_higher_levels(
        p in prime(),
        gens in prop::collection::vec((0u64..4, 0u64..4), 1..3),
        f in (0u64..6, 0u64..6),
    ) {
        let r = xy(p);
        let i0 = r.level(0).parse_ideal(&mono_text(&gens, 1)).unwrap();
        let g = mono(&r, f.0, f.1, 1);
        let base = membership(&g, &i0).unwrap().member;
        for n in 1..=2 {
            let lifted = membership(&g, &i0.at_level(n).unwrap()).unwrap().member;
            prop_assert_eq!(lifted, base);
        }
    }

    #[test]
    fn product_inside_intersection(
        p in prime(),
        a in prop::collection::vec((0u64..4, 0u64..4), 1..3),
        b in prop::collection::vec((0u64..4, 0u64..4), 1..3),
        shift in 0u64..3,
    ) {
        let r = xy(p);
        let ring = r.level(0);
        // non-monomial generators too
        let i = ring.parse_ideal(&format!("{}, x + y^{}", mono_text(&a, 1), shift + 1)).unwrap();
        let j = ring.parse_ideal(&mono_text(&b, 1)).unwrap();
        let prod = product(&i, &j).unwrap();
        let int = intersection(&i, &j).unwrap();
        prop_assert!(is_subset(&prod, &int).unwrap());
        prop_assert!(is_subset(&int, &i).unwrap());
        prop_assert!(is_subset(&int, &j).unwrap());
    }

    #[test]
    fn colimit_ideals_are_radical(
        p in prop::sample::select(vec![2u64, 3]),
        roots in prop::collection::vec((0u64..3, 0u64..3), 1..3),
        f in (0u64..4, 0u64..4, 0u32..2),
    ) {
        prop_assume!(roots.iter().all(|(a, b)| a + b > 0));
        let r = xy(p);
        let c = ColimitIdeal::parse(&r, &mono_text(&roots, 1)).unwrap();
        let den = p.pow(f.2);
        let g = mono(&r, f.0, f.1, den);
        let gp = g.frobenius(1);
        let in_g = colimit_membership(&g, &c, None, None).unwrap().is_found();
        let in_gp = colimit_membership(&gp, &c, None, None).unwrap().is_found();
        prop_assert_eq!(in_g, in_gp);
        // a monomial lies in the colimit ideal iff it is nonconstant in a
        // variable of some root's support
        let oracle = (f.0 > 0 || f.1 > 0)
            && roots.iter().any(|(a, b)| (*a == 0 || f.0 > 0) && (*b == 0 || f.1 > 0));
        prop_assert_eq!(in_g, oracle);
    }

    #[test]
    fn regular_sequences_lift_and_permute(
        p in prime(),
        a in 1u64..4,
        b in 1u64..4,
        level in 0u32..3,
    ) {
        let r = xy(p);
        let s = r.parse_elements(&format!("x^{a}, y^{b}")).unwrap();
        let rev = vec![s[1].clone(), s[0].clone()];
        prop_assert!(is_regular_sequence(&s, &r.level(level)).unwrap().regular);
        prop_assert!(is_regular_sequence(&rev, &r.level(level)).unwrap().regular);
    }

    #[test]
    fn koszul_and_tensor_complexes_square_to_zero(
        p in prime(),
        seq in prop::collection::vec((0u64..3, 0u64..3), 1..4),
    ) {
        let r = xy(p);
        let ring = r.level(0);
        let fs = r.parse_elements(&mono_text(&seq, 1)).unwrap();
        let k = koszul_complex(&fs, &ring).unwrap();
        prop_assert_eq!(complex_check(&k).unwrap(), None);
        let t = tensor_total_complex(&[k.clone(), k], &ring).unwrap();
        prop_assert_eq!(complex_check(&t).unwrap(), None);
    }

    #[test]
    fn resolution_matrices_compose_to_zero(p in prime(), n in 2usize..40) {
        let r = xy(p);
        let t = resolution_truncation(&r.var("x").unwrap(), n);
        prop_assert!(t.composite_vanishes());
    }

    #[test]
    fn tor_is_balanced(
        p in prop::sample::select(vec![2u64, 3]),
        a in prop::collection::vec((0u64..3, 0u64..3), 1..3),
        b in prop::collection::vec((0u64..3, 0u64..3), 1..3),
        i in 1usize..3,
    ) {
        let r = RingPresentation::parse(p, &["x", "y"], &["x*y"]).unwrap();
        let ring = r.level(0);
        let m = ring.parse_ideal(&mono_text(&a, 1)).unwrap();
        let n = ring.parse_ideal(&mono_text(&b, 1)).unwrap();
        prop_assert_eq!(tor(&m, &n, i).unwrap().dim, tor(&n, &m, i).unwrap().dim);
    }

    #[test]
    fn koszul_grade_equals_ext_grade(
        p in prime(),
        a in 1u64..3,
        b in 0u64..3,
        module in prop::sample::select(vec!["", "x", "x^2, x*y", "y^2"]),
    ) {
        let r = xy(p);
        let ring = r.level(0);
        let seq = r.parse_elements(&format!("x^{a}, y^{b} + x")).unwrap();
        let m = ring.parse_ideal(module).unwrap();
        let k = koszul_grade(&seq, &m).unwrap();
        let e = ext_grade(&ring.ideal(seq.clone()).unwrap(), &m).unwrap();
        prop_assert_eq!(k.value, e.value);
        let pow: Vec<PerfPoly> = seq.iter().map(|f| f.frobenius(1)).collect();
        prop_assert_eq!(koszul_grade(&pow, &m).unwrap().value, k.value);
    }

    #[test]
    fn valuation_is_ultrametric_and_multiplicative(
        p in prime(),
        f in prop::collection::vec((1u64..5, 0u64..20, 0u32..3), 1..4),
        g in prop::collection::vec((1u64..5, 0u64..20, 0u32..3), 1..4),
    ) {
        let r = RingPresentation::polynomial_ring(p, &["x"]).unwrap();
        let build = |ts: &[(u64, u64, u32)]| {
            ts.iter().fold(r.zero(), |acc, (c, a, k)| {
                &acc + &r.parse_element(&format!("{}*x^({a}/{})", c % p, p.pow(*k))).unwrap()
            })
        };
        let (f, g) = (build(&f), build(&g));
        prop_assume!(!f.is_zero() && !g.is_zero());
        let pc = r.char();
        let v = |h: &PerfPoly| perfect_valuation(h, None).unwrap().to_rational(pc);
        let (vf, vg) = (v(&f).unwrap(), v(&g).unwrap());
        let s = &f + &g;
        if let Some(vs) = v(&s) {
            prop_assert!(vs >= vf.clone().min(vg.clone()));
        }
        prop_assert_eq!(v(&(&f * &g)).unwrap(), vf + vg);
        prop_assert_eq!(v(&r.var("x").unwrap()).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn bracket_powers_compose(
        p in prop::sample::select(vec![2u64, 3]),
        gens in prop::collection::vec((0u64..3, 0u64..3), 1..3),
        e1 in 0u32..3,
        e2 in 0u32..3,
    ) {
        let r = xy(p);
        let i = r.level(0).parse_ideal(&format!("{}, x + y", mono_text(&gens, 1))).unwrap();
        let (q1, q2) = (p.pow(e1), p.pow(e2));
        let twice = bracket_power(&bracket_power(&i, q1).unwrap(), q2).unwrap();
        let once = bracket_power(&i, q1 * q2).unwrap();
        prop_assert!(is_subset(&twice, &once).unwrap() && is_subset(&once, &twice).unwrap());
    }

    #[test]
    fn hk_lengths_are_monotone(p in prop::sample::select(vec![2u64, 3]), a in 1u64..3, b in 1u64..3) {
        let r = RingPresentation::parse(p, &["x", "y"], &["x*y"]).unwrap();
        let i = r.level(0).parse_ideal(&format!("x^{a}, y^{b}")).unwrap();
        let rec = hk_sequence(&i, 3, None).unwrap();
        let lens: Vec<BigUint> = rec.rows.iter().map(|row| row.colength.clone()).collect();
        prop_assert!(lens.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn witt_ring_axioms(p in prop::sample::select(vec![2u64, 3]), n in 1usize..5, seed in any::<u64>()) {
        let ring = Arc::new(
            PerfectRing::new(RingPresentation::polynomial_ring(p, &["x"]).unwrap(), RelationMode::Perfection).unwrap(),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = WittVector::random(ring.clone(), n, &mut rng).unwrap();
        let b = WittVector::random(ring.clone(), n, &mut rng).unwrap();
        let c = WittVector::random(ring.clone(), n, &mut rng).unwrap();
        let add = |u: &WittVector, v: &WittVector| witt_add(u, v).unwrap();
        let mul = |u: &WittVector, v: &WittVector| witt_mul(u, v).unwrap();
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(mul(&a, &WittVector::one(ring.clone(), n)), a.clone());
        prop_assert_eq!(add(&a, &WittVector::zero(ring, n)), a);
    }
}
