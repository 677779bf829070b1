//! Collision counts for the congruence n₁u₁ ≡ n₂u₂ (mod q) with
//! M < n₁, n₂ ≤ M+N and u₁, u₂ in a rough set.
//!
//! Collecting n·u⁻¹ mod q into buckets gives the distribution I(λ); its first
//! moment is N·|U_z(U)| and its second moment is the congruence count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chars::{is_prime, mod_inverse, PrimeModulus};
use crate::error::{Error, Result};
use crate::sieve::RoughSet;

/// Upper limit on N·|rough| accepted by the quadruple-loop oracle.
pub const BRUTE_FORCE_MAX_PAIRS: u64 = 10_000;

/// Which hypotheses of the collision-count bound an instance satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// U ≤ N.
    pub upper_le_length: bool,
    /// U·N ≤ q.
    pub product_le_modulus: bool,
    /// 1 < z ≤ U^A.
    pub level_in_range: bool,
}

impl Hypotheses {
    pub fn all_hold(&self) -> bool {
        self.upper_le_length && self.product_le_modulus && self.level_in_range
    }
}

/// One congruence-count experiment: modulus, interval (M, M+N] and rough set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionInstance {
    pub q: u64,
    pub m: i64,
    pub n: u64,
    pub rough: RoughSet,
    pub a: f64,
    pub hypotheses: Hypotheses,
}

impl CollisionInstance {
    pub fn new(q: u64, m: i64, n: u64, rough: RoughSet, a: f64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::CompositeModulus(q));
        }
        if let Some(&bad) = rough.members().iter().find(|&&u| u % q == 0) {
            return Err(Error::InvalidInput(format!(
                "rough-set member {bad} is not invertible modulo {q}"
            )));
        }
        let upper = rough.upper();
        let z = rough.z();
        let hypotheses = Hypotheses {
            upper_le_length: upper <= n,
            product_le_modulus: (upper as u128) * (n as u128) <= q as u128,
            level_in_range: z > 1.0 && z <= (upper as f64).powf(a),
        };
        Ok(Self {
            q,
            m,
            n,
            rough,
            a,
            hypotheses,
        })
    }

    /// Number of (n, u) pairs.
    pub fn pair_count(&self) -> u64 {
        self.n * self.rough.count()
    }

    fn range(&self) -> impl Iterator<Item = i64> + '_ {
        (1..=self.n as i64).map(move |k| self.m + k)
    }
}

/// The bucket map λ ↦ I(λ) with its first two moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionDistribution {
    pub q: u64,
    /// Occupied buckets (λ, I(λ)) sorted by λ.
    pub buckets: Vec<(u64, u64)>,
    pub first_moment: u64,
    pub second_moment: u128,
}

impl CollisionDistribution {
    /// Builds the distribution with extended-gcd inverses.
    pub fn compute(inst: &CollisionInstance) -> Self {
        let inverses: Vec<u64> = inst
            .rough
            .members()
            .iter()
            .map(|&u| mod_inverse(u, inst.q).expect("members are invertible"))
            .collect();
        Self::from_inverses(inst, &inverses)
    }

    /// Builds the distribution with inverses read off the discrete-log tables.
    pub fn compute_with(inst: &CollisionInstance, modulus: &PrimeModulus) -> Result<Self> {
        if modulus.q() != inst.q {
            return Err(Error::InvalidInput(format!(
                "modulus {} does not match instance modulus {}",
                modulus.q(),
                inst.q
            )));
        }
        let inverses: Vec<u64> = inst
            .rough
            .members()
            .iter()
            .map(|&u| modulus.inverse(u).expect("members are invertible"))
            .collect();
        Ok(Self::from_inverses(inst, &inverses))
    }

    fn from_inverses(inst: &CollisionInstance, inverses: &[u64]) -> Self {
        let q = inst.q as u128;
        let mut lambdas: Vec<u64> = inst
            .range()
            .flat_map(|n| {
                let r = n.rem_euclid(inst.q as i64) as u128;
                inverses
                    .iter()
                    .map(move |&inv| (r * inv as u128 % q) as u64)
            })
            .collect();
        lambdas.par_sort_unstable();

        let mut buckets: Vec<(u64, u64)> = Vec::new();
        for lambda in lambdas {
            match buckets.last_mut() {
                Some((l, c)) if *l == lambda => *c += 1,
                _ => buckets.push((lambda, 1)),
            }
        }
        let first_moment = buckets.iter().map(|&(_, c)| c).sum();
        let second_moment = buckets
            .iter()
            .map(|&(_, c)| (c as u128) * (c as u128))
            .sum();
        Self {
            q: inst.q,
            buckets,
            first_moment,
            second_moment,
        }
    }

    /// I(λ) for λ ∈ [0, q).
    pub fn count(&self, lambda: u64) -> u64 {
        self.buckets
            .binary_search_by_key(&(lambda % self.q), |&(l, _)| l)
            .map(|i| self.buckets[i].1)
            .unwrap_or(0)
    }
}

/// Exact congruence count together with the collision-count bound shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub i_value: u128,
    /// N·|U_z(U)|, the solutions with u₁ = u₂ and n₁ = n₂.
    pub diagonal: u128,
    /// N·|U_z(U)|·(1 + log U / (log z)²).
    pub bound: f64,
    pub ratio: f64,
    pub hypotheses: Hypotheses,
}

/// I(z, M, N, U) as the second moment of the collision distribution.
pub fn congruence_count(inst: &CollisionInstance) -> CongruenceReport {
    report_from(inst, &CollisionDistribution::compute(inst))
}

/// The distribution and the report, with inverses read off the modulus tables.
pub fn congruence_count_with(
    inst: &CollisionInstance,
    modulus: &PrimeModulus,
) -> Result<(CollisionDistribution, CongruenceReport)> {
    let dist = CollisionDistribution::compute_with(inst, modulus)?;
    let report = report_from(inst, &dist);
    Ok((dist, report))
}

pub(crate) fn report_from(
    inst: &CollisionInstance,
    dist: &CollisionDistribution,
) -> CongruenceReport {
    let diagonal = inst.n as u128 * inst.rough.count() as u128;
    let bound = collision_shape(
        inst.n,
        inst.rough.count(),
        inst.rough.upper(),
        inst.rough.z(),
    );
    CongruenceReport {
        i_value: dist.second_moment,
        diagonal,
        bound,
        ratio: if bound > 0.0 {
            dist.second_moment as f64 / bound
        } else {
            0.0
        },
        hypotheses: inst.hypotheses,
    }
}

/// N·|U_z(U)|·(1 + log U / (log z)²).
pub fn collision_shape(n: u64, rough_count: u64, upper: u64, z: f64) -> f64 {
    let log_u = if upper >= 1 { (upper as f64).ln() } else { 0.0 };
    n as f64 * rough_count as f64 * (1.0 + log_u / (z.ln() * z.ln()))
}

/// Literal quadruple loop over (n₁, n₂, u₁, u₂).
pub fn brute_force_congruence_count(inst: &CollisionInstance) -> Result<u128> {
    let pairs = inst.pair_count();
    if pairs > BRUTE_FORCE_MAX_PAIRS {
        return Err(Error::InstanceTooLarge {
            pairs,
            max: BRUTE_FORCE_MAX_PAIRS,
        });
    }
    let q = inst.q as i128;
    let us = inst.rough.members();
    let mut total = 0u128;
    for n1 in inst.range() {
        for n2 in inst.range() {
            for &u1 in us {
                for &u2 in us {
                    if (n1 as i128 * u1 as i128 - n2 as i128 * u2 as i128).rem_euclid(q) == 0 {
                        total += 1;
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Count of n ∈ (M, M+N] with n ≡ t (mod q).
fn residue_count(m: i64, n: u64, t: i64, q: i64) -> u64 {
    let hi = (m + n as i64 - t).div_euclid(q);
    let lo = (m - t).div_euclid(q);
    (hi - lo) as u64
}

/// J(u₁, u₂): pairs (n₁, n₂) ∈ (M, M+N]² with n₁u₁ ≡ n₂u₂ (mod q).
pub fn pair_collision_count(u1: u64, u2: u64, m: i64, n: u64, q: u64) -> u64 {
    let qi = q as i64;
    let range = (1..=n as i64).map(|k| m + k);
    match mod_inverse(u1 % q, q) {
        Some(inv) => range
            .map(|n2| {
                let t = (n2.rem_euclid(qi) as i128 * (u2 % q) as i128 % q as i128 * inv as i128
                    % q as i128) as i64;
                residue_count(m, n, t, qi)
            })
            .sum(),
        None => {
            let zero_side = range
                .filter(|&n2| (n2 as i128 * u2 as i128) % q as i128 == 0)
                .count();
            zero_side as u64 * n
        }
    }
}
