//! The verification suite: every end-to-end check as a named criterion with a
//! pass flag and the measured quantities behind it.
//!
//! Randomized inputs come from a ChaCha8 generator seeded by the caller, so a
//! given (scale, seed) always evaluates the same cells.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    derive_params, extremal_scan, holder_chain, holder_chain_with, log_power_chain_holds,
    polya_vinogradov_ratio, BoundVariant, DEFAULT_GRH_DELTA,
};
use crate::chars::{is_prime, CharValue, Character, PrefixTable, PrimeModulus};
use crate::congruence::{
    brute_force_congruence_count, collision_shape, congruence_count, CollisionDistribution,
    CollisionInstance,
};
use crate::error::{Error, Result};
use crate::moments::{moment_sum, moment_value, moment_value_parallel, weil_window};
use crate::sieve::{rough_ratio, RoughSet, DEFAULT_SIEVE_A};

/// Default seed of the suite.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Guard exponent used by the rough-set density criterion; z = 10 with U = 10⁴
/// only clears the guard for C ≤ 4.
pub const DENSITY_GUARD_EXPONENT: f64 = 4.0;

/// Upper envelope for the collision-count ratio.
pub const COLLISION_RATIO_ENVELOPE: f64 = 5.0;

/// Rough set used when the derived parameters are degenerate: z = 3, U = 10.
pub const OVERRIDE_LEVEL: f64 = 3.0;
pub const OVERRIDE_UPPER: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteScale {
    /// Reduced sizes that finish in a few seconds.
    Small,
    /// The full acceptance sizes.
    Full,
}

impl std::str::FromStr for SuiteScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(SuiteScale::Small),
            "full" => Ok(SuiteScale::Full),
            other => Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
        }
    }
}

/// Result of one criterion. `metrics` holds deterministic measurements only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl CriterionOutcome {
    fn new(id: &str, name: &str) -> Self {
        Self {
            id: id.to_string(),
            name: name.to_string(),
            pass: true,
            detail: String::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    fn fail(&mut self, why: impl Into<String>) {
        self.pass = false;
        let why = why.into();
        if self.detail.is_empty() {
            self.detail = why;
        } else {
            self.detail.push_str("; ");
            self.detail.push_str(&why);
        }
    }

    fn check_time(&mut self, started: Instant, limit: Duration) {
        let elapsed = started.elapsed();
        if elapsed > limit {
            self.fail(format!(
                "took {:.2}s, limit {:.0}s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            ));
        }
    }

    fn finish(mut self, ok_detail: impl Into<String>) -> Self {
        if self.pass && self.detail.is_empty() {
            self.detail = ok_detail.into();
        }
        self
    }
}

/// Primes of the character and moment criteria.
pub fn suite_primes(scale: SuiteScale) -> &'static [u64] {
    match scale {
        SuiteScale::Small => &[101, 1009],
        SuiteScale::Full => &[101, 1009, 10_007],
    }
}

/// `count` starting points drawn uniformly from [0, q).
pub fn seeded_starts(seed: u64, q: u64, count: usize) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.rotate_left(17));
    (0..count).map(|_| rng.gen_range(0..q) as i64).collect()
}

/// Random small congruence instances: q ≤ 97 prime, N ≤ 12, U ≤ 10, z ∈ {2, 3, 5}.
///
/// q is drawn from the primes above U so every rough-set member is invertible.
pub fn random_congruence_instances(seed: u64, count: usize) -> Vec<CollisionInstance> {
    let primes: Vec<u64> = (11..=97).filter(|&p| is_prime(p)).collect();
    let levels = [2.0, 3.0, 5.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = primes[rng.gen_range(0..primes.len())];
            let m = rng.gen_range(-(q as i64)..q as i64);
            let n = rng.gen_range(0..=12u64);
            let upper = rng.gen_range(1..=10u64);
            let z = levels[rng.gen_range(0..levels.len())];
            let rough = RoughSet::new(z, upper).expect("small rough set");
            CollisionInstance::new(q, m, n, rough, DEFAULT_SIEVE_A).expect("valid instance")
        })
        .collect()
}

fn is_order(chi: Character<'_>) -> bool {
    let d = chi.order();
    let at_g = chi.eval_residue(chi.modulus().generator());
    at_g.pow(d).is_one()
        && crate::chars::distinct_prime_factors(d)
            .into_iter()
            .all(|p| !at_g.pow(d / p).is_one())
}

fn multiplicative_on(chi: Character<'_>, pairs: impl Iterator<Item = (u64, u64)>) -> bool {
    let q = chi.q();
    pairs.into_iter().all(|(a, b)| {
        let ab = (a as u128 * b as u128 % q as u128) as u64;
        chi.eval_residue(ab) == chi.eval_residue(a).mul(&chi.eval_residue(b))
    })
}

fn full_period_zero(chi: Character<'_>, starts: &[i64]) -> bool {
    let q = chi.q();
    starts.iter().all(|&m| {
        let s = chi.interval_sum(m, q);
        match s.exact {
            Some(e) => e == 0,
            None => s.abs() <= 1e-9 * q as f64,
        }
    })
}

/// Character algebra: multiplicativity, orders and full-period orthogonality.
pub fn criterion_character_algebra(scale: SuiteScale, seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("1", "character_algebra");
    let started = Instant::now();
    let mut characters = 0u64;
    for &q in suite_primes(scale) {
        let modulus = PrimeModulus::new(q).expect("suite prime");
        let starts = seeded_starts(seed, q, 5);
        let chars: Vec<Character<'_>> = if q == 101 {
            (1..=q - 2).map(|m| modulus.character(m).unwrap()).collect()
        } else {
            let mut c = vec![modulus.character(1).unwrap(), modulus.legendre()];
            c.extend(modulus.character_of_order(3));
            c
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q);
        let sampled: Vec<(u64, u64)> = (0..2000)
            .map(|_| (rng.gen_range(0..q), rng.gen_range(0..q)))
            .collect();
        for chi in chars {
            characters += 1;
            let mult = if q == 101 {
                multiplicative_on(chi, (0..q).flat_map(|a| (0..q).map(move |b| (a, b))))
            } else {
                multiplicative_on(chi, sampled.iter().copied())
            };
            if !mult {
                out.fail(format!("q = {q}, m = {}: not multiplicative", chi.index()));
            }
            if !is_order(chi) || (q - 1) % chi.order() != 0 {
                out.fail(format!("q = {q}, m = {}: wrong order", chi.index()));
            }
            if chi.eval_residue(0) != CharValue::Zero {
                out.fail(format!("q = {q}, m = {}: χ(0) ≠ 0", chi.index()));
            }
            if !full_period_zero(chi, &starts) {
                out.fail(format!(
                    "q = {q}, m = {}: full period sum nonzero",
                    chi.index()
                ));
            }
        }
    }
    out.metric("characters", characters as f64);
    out.check_time(started, Duration::from_secs(5));
    out.finish(format!("{characters} characters checked"))
}

/// Complete-moment inequality at V = ⌊r q^{1/2r}⌋, Legendre plus an order-3 character.
pub fn criterion_moment_bound(scale: SuiteScale) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("2", "moment_bound");
    let mut min_margin = f64::INFINITY;
    let mut cases = 0u64;
    for &q in suite_primes(scale) {
        let modulus = PrimeModulus::new(q).expect("suite prime");
        let mut chars = vec![modulus.legendre()];
        chars.extend(modulus.character_of_order(3));
        for chi in chars {
            let table = PrefixTable::new(chi).expect("nontrivial");
            for r in 1..=3u32 {
                let started = Instant::now();
                let v = weil_window(q, r);
                let report = moment_sum(&table, v, r).expect("valid window");
                cases += 1;
                min_margin = min_margin.min(report.margin);
                if !report.all_pass() {
                    out.fail(format!(
                        "q = {q}, m = {}, r = {r}: bound exceeded",
                        chi.index()
                    ));
                }
                if report.specialized.is_none() {
                    out.fail(format!("q = {q}, r = {r}: specialized bound missing"));
                }
                out.check_time(started, Duration::from_secs(10));
            }
        }
    }
    out.metric("cases", cases as f64);
    out.metric("min_margin", min_margin);
    out.finish(format!("{cases} cases, min margin {min_margin:.4e}"))
}

/// Oracle equivalence of the congruence count on seeded random instances.
pub fn criterion_congruence_oracle(seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("3", "congruence_oracle");
    let instances = random_congruence_instances(seed, 200);
    for (i, inst) in instances.iter().enumerate() {
        let report = congruence_count(inst);
        let dist = CollisionDistribution::compute(inst);
        let brute = brute_force_congruence_count(inst).expect("guarded size");
        if report.i_value != brute {
            out.fail(format!(
                "instance {i}: count {} vs oracle {brute}",
                report.i_value
            ));
        }
        if report.i_value != dist.second_moment {
            out.fail(format!("instance {i}: second moment mismatch"));
        }
        if dist.first_moment != inst.n * inst.rough.count() {
            out.fail(format!("instance {i}: first moment mismatch"));
        }
    }
    out.metric("instances", instances.len() as f64);
    out.finish("200 instances agree with the oracle")
}

/// The Hölder cells: (q, r, M) with N = ⌊q^{0.4}⌋.
pub fn holder_cells(scale: SuiteScale, seed: u64) -> Vec<(u64, u32, u64, Vec<i64>)> {
    let per_cell = match scale {
        SuiteScale::Small => 5,
        SuiteScale::Full => 20,
    };
    suite_primes(scale)
        .iter()
        .flat_map(|&q| {
            let n = (q as f64).powf(0.4).floor() as u64;
            let starts = seeded_starts(seed, q, per_cell);
            [2u32, 3].map(move |r| (q, r, n, starts.clone()))
        })
        .collect()
}

/// Hölder chain with the derived U, V, z. Degenerate cells count as failures.
pub fn criterion_holder_chain(scale: SuiteScale, seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("4", "holder_chain");
    let started = Instant::now();
    let (mut evaluated, mut degenerate, mut failed) = (0u64, 0u64, 0u64);
    for (q, r, n, starts) in holder_cells(scale, seed) {
        let modulus = PrimeModulus::new(q).expect("suite prime");
        for m in starts {
            match holder_chain(modulus.legendre(), m, n, r) {
                Ok(rep) => {
                    evaluated += 1;
                    if !rep.pass {
                        failed += 1;
                    }
                }
                Err(Error::DegenerateParams { .. }) => degenerate += 1,
                Err(e) => out.fail(format!("q = {q}, r = {r}, M = {m}: {e}")),
            }
        }
    }
    out.metric("evaluated", evaluated as f64);
    out.metric("degenerate", degenerate as f64);
    out.metric("failed", failed as f64);
    if failed > 0 {
        out.fail(format!("{failed} cells violate the chain"));
    }
    if degenerate > 0 {
        out.fail(format!(
            "{degenerate} cells have U < 2 at N = ⌊q^0.4⌋, chain not evaluated"
        ));
    }
    out.check_time(started, Duration::from_secs(30));
    out.finish(format!("{evaluated} cells pass"))
}

/// Hölder chain on the same cells with V = ⌊r q^{1/2r}⌋ and the override rough set.
pub fn criterion_holder_chain_override(scale: SuiteScale, seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("4s", "holder_chain_override");
    let started = Instant::now();
    let rough = RoughSet::new(OVERRIDE_LEVEL, OVERRIDE_UPPER).expect("override set");
    let mut evaluated = 0u64;
    let mut worst_gap = f64::NEG_INFINITY;
    for (q, r, n, starts) in holder_cells(scale, seed) {
        let modulus = PrimeModulus::new(q).expect("suite prime");
        let table = PrefixTable::new(modulus.legendre()).expect("nontrivial");
        let v = weil_window(q, r);
        for m in starts {
            let rep = holder_chain_with(&table, m, n, r, v, rough.clone()).expect("valid cell");
            evaluated += 1;
            worst_gap = worst_gap.max(rep.holder_lhs_ln - rep.holder_rhs_ln);
            if !rep.pass || !rep.exact_comparison {
                out.fail(format!("q = {q}, r = {r}, M = {m}: chain fails"));
            }
        }
    }
    out.metric("evaluated", evaluated as f64);
    out.metric("max_ln_lhs_minus_rhs", worst_gap);
    out.check_time(started, Duration::from_secs(30));
    out.finish(format!("{evaluated} cells pass exactly"))
}

/// Rough-set density |U_z(U)| log z / U at z = 10.
pub fn criterion_rough_density(scale: SuiteScale) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("5", "rough_density");
    let started = Instant::now();
    let uppers: &[u64] = match scale {
        SuiteScale::Small => &[10_000, 100_000],
        SuiteScale::Full => &[10_000, 100_000, 1_000_000],
    };
    for &u in uppers {
        match rough_ratio(10.0, u, DENSITY_GUARD_EXPONENT) {
            Ok(ratio) => {
                out.metric(&format!("ratio_u{u}"), ratio);
                if !(0.3..=3.0).contains(&ratio) {
                    out.fail(format!("U = {u}: ratio {ratio:.4} outside [0.3, 3]"));
                }
            }
            Err(e) => out.fail(format!("U = {u}: {e}")),
        }
    }
    out.check_time(started, Duration::from_secs(5));
    out.finish("all ratios within [0.3, 3]")
}

fn collision_ratios(q: u64, n: u64, rough: &RoughSet, starts: &[i64]) -> Vec<f64> {
    let modulus = PrimeModulus::new(q).expect("suite prime");
    starts
        .iter()
        .map(|&m| {
            let inst =
                CollisionInstance::new(q, m, n, rough.clone(), DEFAULT_SIEVE_A).expect("valid");
            let dist = CollisionDistribution::compute_with(&inst, &modulus).expect("same modulus");
            let shape = collision_shape(n, rough.count(), rough.upper(), rough.z());
            dist.second_moment as f64 / shape
        })
        .collect()
}

fn collision_length(q: u64) -> u64 {
    (q as f64).powf(0.45).floor() as u64
}

/// Collision-count ratio at q = 10007, N = ⌊q^{0.45}⌋ with the derived U and z.
pub fn criterion_collision_ratio(seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("6", "collision_ratio");
    let q = 10_007;
    let n = collision_length(q);
    let params = derive_params(n, q, 2).expect("valid parameters");
    out.metric("n", n as f64);
    out.metric("u", params.u as f64);
    let Some(z) = params.z else {
        out.fail(format!(
            "derived U = {} < 2 at N = {n}, z undefined",
            params.u
        ));
        return out;
    };
    let rough = RoughSet::new(z, params.u).expect("rough set");
    let starts = seeded_starts(seed, q, 20);
    let first = collision_ratios(q, n, &rough, &starts);
    let again = collision_ratios(q, n, &rough, &starts);
    let max = first.iter().copied().fold(0.0, f64::max);
    out.metric("max_ratio", max);
    if first
        .iter()
        .zip(&again)
        .any(|(a, b)| a.to_bits() != b.to_bits())
    {
        out.fail("ratios differ between runs");
    }
    if max > COLLISION_RATIO_ENVELOPE {
        out.fail(format!(
            "max ratio {max:.4} exceeds {COLLISION_RATIO_ENVELOPE}"
        ));
    }
    out.finish(format!("max ratio {max:.4}"))
}

/// Collision-count ratio on the same instances with the override rough set.
pub fn criterion_collision_ratio_override(seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("6s", "collision_ratio_override");
    let q = 10_007;
    let n = collision_length(q);
    let rough = RoughSet::new(OVERRIDE_LEVEL, OVERRIDE_UPPER).expect("override set");
    let starts = seeded_starts(seed, q, 20);
    let first = collision_ratios(q, n, &rough, &starts);
    let again = collision_ratios(q, n, &rough, &starts);
    let max = first.iter().copied().fold(0.0, f64::max);
    out.metric("n", n as f64);
    out.metric("max_ratio", max);
    if first
        .iter()
        .zip(&again)
        .any(|(a, b)| a.to_bits() != b.to_bits())
    {
        out.fail("ratios differ between runs");
    }
    if max > COLLISION_RATIO_ENVELOPE {
        out.fail(format!(
            "max ratio {max:.4} exceeds {COLLISION_RATIO_ENVELOPE}"
        ));
    }
    out.finish(format!("max ratio {max:.4}"))
}

/// Exhaustive interval maximum against q^{1/2} log q for every prime up to a limit.
pub fn criterion_polya_vinogradov(scale: SuiteScale) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("7", "polya_vinogradov");
    let started = Instant::now();
    let limit = match scale {
        SuiteScale::Small => 2_000,
        SuiteScale::Full => 10_000,
    };
    let mut worst = 0.0f64;
    let mut worst_q = 0u64;
    let mut primes = 0u64;
    for q in (3..=limit).filter(|&q| is_prime(q)) {
        let modulus = PrimeModulus::new(q).expect("prime");
        let table = PrefixTable::new(modulus.legendre()).expect("nontrivial");
        let ratio = polya_vinogradov_ratio(&table);
        primes += 1;
        if ratio > worst {
            worst = ratio;
            worst_q = q;
        }
    }
    out.metric("primes", primes as f64);
    out.metric("max_ratio", worst);
    out.metric("argmax_q", worst_q as f64);
    if worst >= 1.0 {
        out.fail(format!("ratio {worst:.4} at q = {worst_q}"));
    }
    out.check_time(started, Duration::from_secs(60));
    out.finish(format!("max ratio {worst:.4} at q = {worst_q}"))
}

/// Sequential moment pass at a large prime, then the parallel pass for equality.
pub fn criterion_moment_performance(scale: SuiteScale) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("8", "moment_performance");
    let (q, v) = match scale {
        SuiteScale::Small => (100_003u64, 300u64),
        SuiteScale::Full => (1_000_003, 1_000),
    };
    let started = Instant::now();
    let modulus = PrimeModulus::new(q).expect("prime");
    let table = PrefixTable::new(modulus.legendre()).expect("nontrivial");
    let sequential = moment_value(&table, v, 2).expect("valid window");
    out.check_time(started, Duration::from_secs(5));
    let parallel = moment_value_parallel(&table, v, 2).expect("valid window");
    if sequential != parallel {
        out.fail("parallel moment differs from sequential");
    }
    out.metric("q", q as f64);
    out.metric("v", v as f64);
    out.metric("ln_moment", sequential.ln());
    out.finish("sequential pass within 5s, parallel pass identical")
}

/// Worst refined-bound ratio over the Hölder cells, rerun for stability, and
/// the log-power ordering at every evaluated point.
pub fn criterion_shape_scan(scale: SuiteScale, seed: u64) -> CriterionOutcome {
    let mut out = CriterionOutcome::new("9", "shape_scan");
    let run = || -> Vec<f64> {
        holder_cells(scale, seed)
            .into_iter()
            .map(|(q, r, n, starts)| {
                let modulus = PrimeModulus::new(q).expect("suite prime");
                let table = PrefixTable::new(modulus.legendre()).expect("nontrivial");
                let scan =
                    extremal_scan(&table, n, &starts, r, DEFAULT_GRH_DELTA).expect("valid scan");
                scan.worst_ratio[&BoundVariant::Refined14r]
            })
            .collect()
    };
    let first = run();
    let again = run();
    let worst = first.iter().copied().fold(0.0, f64::max);
    out.metric("worst_refined_ratio", worst);
    if !worst.is_finite() {
        out.fail("worst ratio is not finite");
    }
    if first
        .iter()
        .zip(&again)
        .any(|(a, b)| a.to_bits() != b.to_bits())
    {
        out.fail("ratios differ between runs");
    }
    for (q, r, n, _) in holder_cells(scale, seed) {
        if !log_power_chain_holds(n, q, r).expect("valid point") {
            out.fail(format!("ordering fails at q = {q}, r = {r}, N = {n}"));
        }
    }
    out.finish(format!("worst refined ratio {worst:.4}"))
}

/// Every criterion in order.
pub fn run_suite(scale: SuiteScale, seed: u64) -> Vec<CriterionOutcome> {
    run_suite_timed(scale, seed)
        .into_iter()
        .map(|(o, _)| o)
        .collect()
}

/// Every criterion in order, with its wall-clock time.
pub fn run_suite_timed(scale: SuiteScale, seed: u64) -> Vec<(CriterionOutcome, Duration)> {
    let criteria: Vec<Box<dyn Fn() -> CriterionOutcome>> = vec![
        Box::new(move || criterion_character_algebra(scale, seed)),
        Box::new(move || criterion_moment_bound(scale)),
        Box::new(move || criterion_congruence_oracle(seed)),
        Box::new(move || criterion_holder_chain(scale, seed)),
        Box::new(move || criterion_holder_chain_override(scale, seed)),
        Box::new(move || criterion_rough_density(scale)),
        Box::new(move || criterion_collision_ratio(seed)),
        Box::new(move || criterion_collision_ratio_override(seed)),
        Box::new(move || criterion_polya_vinogradov(scale)),
        Box::new(move || criterion_moment_performance(scale)),
        Box::new(move || criterion_shape_scan(scale, seed)),
    ];
    criteria
        .into_iter()
        .map(|run| {
            let started = Instant::now();
            let outcome = run();
            (outcome, started.elapsed())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_seeded() {
        let a = random_congruence_instances(7, 50);
        let b = random_congruence_instances(7, 50);
        assert_eq!(a, b);
        assert_ne!(a, random_congruence_instances(8, 50));
        for inst in &a {
            assert!(inst.q <= 97 && inst.n <= 12 && inst.rough.upper() <= 10);
            assert!([2.0, 3.0, 5.0].contains(&inst.rough.z()));
        }
    }

    #[test]
    fn starts_are_in_range() {
        let s = seeded_starts(1, 101, 100);
        assert!(s.iter().all(|&m| (0..101).contains(&m)));
        assert_eq!(s, seeded_starts(1, 101, 100));
    }

    #[test]
    fn scale_parses() {
        assert_eq!("small".parse::<SuiteScale>().unwrap(), SuiteScale::Small);
        assert!("medium".parse::<SuiteScale>().is_err());
    }
}
