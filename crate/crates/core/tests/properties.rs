//! Property tests for the algebraic and counting invariants.

use burgess_core::bounds::{derive_params, log_power_chain_holds};
use burgess_core::chars::{is_prime, PrefixTable, PrimeModulus};
use burgess_core::congruence::{
    brute_force_congruence_count, congruence_count, pair_collision_count, CollisionDistribution,
    CollisionInstance,
};
use burgess_core::sieve::{RoughSet, DEFAULT_SIEVE_A};
use proptest::prelude::*;

fn prime_below(n: u64) -> u64 {
    (3..=n.max(3)).rev().find(|&p| is_prime(p)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn characters_are_multiplicative(q in 3u64..600, idx in 0u64..10_000, a in 0u64..10_000, b in 0u64..10_000) {
        let q = prime_below(q);
        let m = PrimeModulus::new(q).unwrap();
        let chi = m.character(idx % (q - 1)).unwrap();
        let (a, b) = (a % q, b % q);
        prop_assert_eq!(chi.eval_residue(a * b % q), chi.eval_residue(a).mul(&chi.eval_residue(b)));
        prop_assert!(chi.eval_residue(a).pow(chi.order()).is_one() || a == 0);
        prop_assert_eq!(chi.eval_residue(a).conj(), chi.conjugate().eval_residue(a));
    }

    #[test]
    fn window_equals_interval(q in 3u64..400, idx in 1u64..10_000, lambda in -2000i64..2000, v in 1u64..400) {
        let q = prime_below(q);
        let m = PrimeModulus::new(q).unwrap();
        let chi = m.character(1 + idx % (q - 2)).unwrap();
        let v = 1 + v % q;
        let table = PrefixTable::new(chi).unwrap();
        let w = table.window_sum(lambda, v).unwrap();
        let direct = chi.interval_sum(lambda, v);
        prop_assert!((w.re - direct.re).abs() < 1e-9 * q as f64);
        prop_assert!((w.im - direct.im).abs() < 1e-9 * q as f64);
        prop_assert_eq!(w.exact, direct.exact);
        prop_assert!(w.abs() <= v as f64 + 1e-9);
    }

    #[test]
    fn interval_sums_are_additive(q in 3u64..300, start in -500i64..500, n1 in 0u64..700, n2 in 0u64..700) {
        let q = prime_below(q);
        let m = PrimeModulus::new(q).unwrap();
        let table = PrefixTable::new(m.legendre()).unwrap();
        let whole = table.interval_sum(start, n1 + n2).exact.unwrap();
        let parts = table.interval_sum(start, n1).exact.unwrap()
            + table.interval_sum(start + n1 as i64, n2).exact.unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn congruence_matches_oracle(q in 11u64..98, start in -100i64..100, n in 0u64..13, upper in 1u64..11, zi in 0usize..3) {
        let q = prime_below(q);
        let z = [2.0, 3.0, 5.0][zi];
        let inst = CollisionInstance::new(q, start, n, RoughSet::new(z, upper).unwrap(), DEFAULT_SIEVE_A).unwrap();
        let report = congruence_count(&inst);
        prop_assert_eq!(report.i_value, brute_force_congruence_count(&inst).unwrap());
        let dist = CollisionDistribution::compute(&inst);
        prop_assert_eq!(dist.first_moment, n * inst.rough.count());
        let members = inst.rough.members();
        let pairs: u128 = members
            .iter()
            .flat_map(|&u1| members.iter().map(move |&u2| (u1, u2)))
            .map(|(u1, u2)| pair_collision_count(u1, u2, start, n, q) as u128)
            .sum();
        prop_assert_eq!(report.i_value, pairs);
        prop_assert!(report.i_value >= report.diagonal);
    }

    #[test]
    fn pair_count_symmetric(q in 3u64..200, u1 in 1u64..50, u2 in 1u64..50, start in -50i64..50, n in 0u64..40) {
        let q = prime_below(q);
        prop_assert_eq!(pair_collision_count(u1, u2, start, n, q), pair_collision_count(u2, u1, start, n, q));
    }

    #[test]
    fn derived_params_respect_uv(n in 1u64..10_000_000, qi in 3u64..2_000_000, r in 2u32..6) {
        let q = prime_below(qi);
        let p = derive_params(n, q, r).unwrap();
        prop_assert!(16 * p.u * p.v <= n);
        prop_assert_eq!(p.degenerate, p.u < 2);
        prop_assert!(log_power_chain_holds(n, q, r).unwrap());
    }
}
