use census_core::arith::{abelian_count, is_prime, w, w_identity_check};
use census_core::formulas::{count_p2q, count_p2q2, count_p2qr, count_p3q, MAX_FORMULA_PRIME};
use census_core::{classify_shape, count_groups, factorize, CensusError, OrderShape};
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    ])
}

fn any_prime(max: u64) -> impl Strategy<Value = u64> {
    (2..=max).prop_map(|n| {
        let mut p = n;
        while !is_prime(p) {
            p -= 1;
        }
        p
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![small_prime(), any_prime(1_000_000)]
}

#[test]
fn identity_holds_on_the_full_square() {
    for r in 1..=300 {
        for s in 1..=300 {
            assert!(w_identity_check(r, s), "r={r} s={s}");
        }
    }
}

#[test]
fn shapes_below_ten_thousand() {
    for n in 1..=10_000u64 {
        let f = factorize(n).unwrap();
        let shape = classify_shape(&f);
        let omega = f.big_omega();
        let is_p5 = f.distinct() == 1 && omega == 5;
        assert_eq!(shape.is_supported(), omega <= 4 || is_p5, "n={n} {shape}");
        if omega <= 4 {
            assert!(!matches!(shape, OrderShape::PrimePower5 { .. }));
        }
    }
}

#[test]
fn abelian_counts_per_shape() {
    for (n, expected) in [
        (12, 2),
        (18, 2),
        (24, 3),
        (54, 3),
        (36, 4),
        (100, 4),
        (60, 2),
        (90, 2),
    ] {
        assert_eq!(abelian_count(&factorize(n).unwrap()), expected, "n={n}");
    }
}

#[test]
fn term_sums_match_counts_up_to_2000() {
    for n in 1..=2000u64 {
        match count_groups(n) {
            Ok(g) => {
                let s = g.term_sum();
                assert!(s.is_integer(), "n={n}");
                assert_eq!(s.to_integer() as u128, g.count, "n={n}");
                assert!(g.count >= abelian_count(&factorize(n).unwrap()) as u128);
            }
            Err(CensusError::Unsupported { .. }) => {}
            Err(e) => panic!("n={n}: {e}"),
        }
    }
}

#[test]
fn q3_short_form_of_p3q() {
    for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        let short = 5 + 14 * w(p as u128 - 1, 3) as u128 + 2 * w(p as u128 + 1, 3) as u128;
        assert_eq!(count_p3q(p, 3).unwrap().count, short, "p={p}");
    }
}

#[test]
fn primes_past_the_bound_overflow() {
    let big = 2_147_483_659; // next prime after 2^31-1
    assert!(is_prime(big) && big > MAX_FORMULA_PRIME);
    assert!(matches!(count_p2q(big, 3), Err(CensusError::Overflow(_))));
    assert!(count_p2q(MAX_FORMULA_PRIME, 3).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn factorize_round_trips(n in 1u64..=(i64::MAX as u64)) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.reconstruct(), n);
        prop_assert!(f.factors().iter().all(|&(p, e)| is_prime(p) && e >= 1));
        prop_assert!(f.factors().windows(2).all(|x| x[0].0 < x[1].0));
    }
}

proptest! {
    #[test]
    fn p2q2_is_symmetric(p in prime(), q in prime()) {
        prop_assume!(p != q);
        prop_assert_eq!(count_p2q2(p, q).unwrap().count, count_p2q2(q, p).unwrap().count);
    }

    #[test]
    fn p2qr_is_symmetric_in_q_and_r(p in prime(), q in prime(), r in prime()) {
        prop_assume!(p != q && q != r && p != r);
        prop_assert_eq!(count_p2qr(p, q, r).unwrap().count, count_p2qr(p, r, q).unwrap().count);
    }

    #[test]
    fn mixed_shapes_are_integral_and_bounded(p in prime(), q in prime(), r in prime()) {
        prop_assume!(p != q && q != r && p != r);
        for (g, abelian) in [
            (count_p2q(p, q).unwrap(), 2),
            (count_p3q(p, q).unwrap(), 3),
            (count_p2q2(p, q).unwrap(), 4),
            (count_p2qr(p, q, r).unwrap(), 2),
        ] {
            let s = g.term_sum();
            prop_assert!(s.is_integer());
            prop_assert_eq!(s.to_integer() as u128, g.count);
            prop_assert!(g.count >= abelian);
        }
    }

    #[test]
    fn w_matches_divisibility(r in 0u128..10_000, s in 1u128..500) {
        prop_assert_eq!(w(r, s) == 1, r % s == 0);
    }
}
