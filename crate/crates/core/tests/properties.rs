use frobgl::combinatorics::{digits, from_digits, lucas_binom, Partition, PrimeContext};
use frobgl::dist::{composition_check, divided_leibniz_check, frobenius_commutation_check, PolyFp};
use frobgl::evaluation::{degree_dims, quotient_family, Family, Ring};
use frobgl::glideals::{gl_radical, hilbert_function, ideal_contains, ideal_member, DigitVector, GLIdeal};
use frobgl::harness::oracles::{contains_brute, hilbert_brute, member_brute, radical_brute};
use frobgl::schur::{hasse_schur, leibniz_check};
use proptest::prelude::*;

fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3u32), Just(5u32)]
}

fn digit_vector() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..3, 1..4).prop_map(|mut v| {
        if v.iter().all(|&x| x == 0) {
            v[0] = 1;
        }
        v
    })
}

/// (p, ideal) with generators of degree at most 14.
fn ideal() -> impl Strategy<Value = (u32, GLIdeal)> {
    (prime(), prop::collection::vec(digit_vector(), 1..4)).prop_map(|(p, gens)| {
        let c = ctx(p);
        let gens = gens.into_iter().map(DigitVector::new).filter(|b| b.degree(c) <= 14).collect::<Vec<_>>();
        let gens = if gens.is_empty() { vec![DigitVector::new([2])] } else { gens };
        (p, GLIdeal::from_digit_vectors(gens, c))
    })
}

fn partition() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..9, 0..5).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.retain(|&x| x > 0);
        v
    })
}

fn poly(p: u32, d: u32) -> impl Strategy<Value = PolyFp> {
    prop::collection::vec((prop::collection::vec(0u32..=d, 3), 1u32..p), 1..4).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(mut e, c)| {
            let s: u32 = e.iter().sum();
            // Push the exponent vector onto the degree-d slice.
            if s < d {
                e[0] += d - s;
            } else {
                let mut extra = s - d;
                for x in e.iter_mut() {
                    let t = extra.min(*x);
                    *x -= t;
                    extra -= t;
                }
            }
            (e, c)
        });
        PolyFp::from_terms(3, ctx(p), terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn membership_matches_brute_force((_, i) in ideal(), lambda in partition()) {
        prop_assert_eq!(ideal_member(&lambda, &i), member_brute(&lambda, &i));
    }

    #[test]
    fn membership_ignores_order((_, i) in ideal(), lambda in partition()) {
        let mut rev = lambda.clone();
        rev.reverse();
        rev.push(0);
        prop_assert_eq!(ideal_member(&lambda, &i), ideal_member(&rev, &i));
    }

    #[test]
    fn containment_matches_brute_force((p, i) in ideal(), gens in prop::collection::vec(digit_vector(), 1..3)) {
        let c = ctx(p);
        let j = GLIdeal::from_digit_vectors(gens.into_iter().map(DigitVector::new).filter(|b| b.degree(c) <= 14), c);
        prop_assume!(!j.is_zero());
        prop_assert_eq!(ideal_contains(&i, &j), contains_brute(&i, &j));
    }

    #[test]
    fn radical_matches_power_containment((_, i) in ideal()) {
        prop_assert_eq!(gl_radical(&i), radical_brute(&i));
    }

    #[test]
    fn sums_and_products_are_ordered((p, i) in ideal(), (q, j) in ideal()) {
        prop_assume!(p == q);
        let prod = i.product(&j);
        let sum = i.sum(&j);
        prop_assert!(ideal_contains(&i, &prod));
        prop_assert!(ideal_contains(&j, &prod));
        prop_assert!(ideal_contains(&sum, &i));
        prop_assert!(ideal_contains(&sum, &j));
        prop_assert_eq!(i.product(&j), j.product(&i));
    }

    #[test]
    fn render_round_trips((p, i) in ideal()) {
        prop_assert_eq!(GLIdeal::parse(&i.render(), ctx(p)).unwrap(), i);
    }

    #[test]
    fn hilbert_matches_enumeration((_, i) in ideal(), n in 1usize..4, d in 0u32..9) {
        prop_assert_eq!(hilbert_function(&i, n, d).unwrap(), hilbert_brute(&i, n, d));
    }

    #[test]
    fn digits_round_trip(p in prime(), x in 0u64..1_000_000) {
        prop_assert_eq!(from_digits(&digits(x, ctx(p)), ctx(p)), x);
    }

    #[test]
    fn lucas_matches_binomial(p in prime(), a in 0u64..40, b in 0u64..40) {
        let mut c = 1u128;
        for k in 0..b.min(a + 1) {
            c = c * (a - k) as u128 / (k + 1) as u128;
        }
        let expected = if b > a { 0 } else { (c % p as u128) as u32 };
        prop_assert_eq!(lucas_binom(a, b, ctx(p)), expected);
    }

    #[test]
    fn divided_power_identities(p in prime(), f in (1u32..5).prop_flat_map(move |d| poly(2, d)), l in 0u32..7, s in 0u32..7) {
        let _ = p;
        composition_check(0, 1, l, s, &f).unwrap();
        frobenius_commutation_check(2, 1, l.max(1), &f).unwrap();
        divided_leibniz_check(1, 0, l, &f, &f).unwrap();
    }

    #[test]
    fn divided_power_identities_odd(f in (1u32..5).prop_flat_map(|d| poly(3, d)), g in (0u32..4).prop_flat_map(|d| poly(3, d)), l in 0u32..7) {
        divided_leibniz_check(0, 2, l, &f, &g).unwrap();
        frobenius_commutation_check(0, 2, l.max(1), &f).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sh_zero_is_identity((p, i) in ideal(), n in 1usize..4) {
        let f: Family = quotient_family(Ring::Poly, &i);
        let _ = p;
        prop_assert_eq!(degree_dims(hasse_schur(&f, 0).eval(n).as_ref(), 6), degree_dims(f.eval(n).as_ref(), 6));
    }

    #[test]
    fn leibniz_on_quotients((p, i) in ideal(), (q, j) in ideal(), m in 0u32..4) {
        prop_assume!(p == q);
        let f: Family = quotient_family(Ring::Poly, &i);
        let g: Family = quotient_family(Ring::Poly, &j);
        leibniz_check(&f, &g, m, 2, 5).unwrap();
    }

    #[test]
    fn partitions_have_the_right_size(n in 0u32..14) {
        for l in Partition::all_of_size(n) {
            prop_assert_eq!(l.size(), n as u64);
            prop_assert!(l.parts().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
