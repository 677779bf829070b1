//! Sieve sets: the primorial P(z), the Mertens product V(w) and the
//! z-rough sets U_z(U) = {1 ≤ u ≤ U : (u, P(z)) = 1}.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default memory cap for smallest-prime-factor tables (4 bytes per entry).
pub const DEFAULT_SPF_LIMIT: u64 = 1 << 27;

/// Default guard exponent C in z^C ≤ U.
pub const DEFAULT_GUARD_EXPONENT: f64 = 10.0;

/// Default value of the small constant A (sieve hypothesis z < (U/t)^A, z ≤ U^A).
pub const DEFAULT_SIEVE_A: f64 = 0.1;

/// Mertens products are kept as exact fractions up to this level.
pub const MERTENS_EXACT_MAX: f64 = 100.0;

/// Smallest-prime-factor table built by a linear sieve.
#[derive(Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl std::fmt::Debug for SpfTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpfTable")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

impl SpfTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::with_cap(limit, DEFAULT_SPF_LIMIT)
    }

    pub fn with_cap(limit: u64, cap: u64) -> Result<Self> {
        if limit < 2 || limit > cap {
            return Err(Error::LimitTooLarge { limit, max: cap });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let multiple = i * p as usize;
                if p > si || multiple > n {
                    break;
                }
                spf[multiple] = p;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n` for 2 ≤ n ≤ limit.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// True when n has no prime factor below z (n = 1 always qualifies).
    #[inline]
    pub fn is_rough(&self, n: u64, z: f64) -> bool {
        n == 1 || self.spf(n) as f64 >= z
    }
}

/// Primes p < z in increasing order.
pub fn primes_below(z: f64) -> Vec<u64> {
    if z.is_nan() || z <= 2.0 {
        return Vec::new();
    }
    let top = z.ceil() as usize;
    let mut composite = vec![false; top + 1];
    let mut primes = Vec::new();
    for i in 2..=top {
        if composite[i] {
            continue;
        }
        if (i as f64) < z {
            primes.push(i as u64);
        }
        let mut j = i * i;
        while j <= top {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// P(z) = ∏_{p<z} p, held in factored form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Primorial {
    pub z: f64,
    pub primes: Vec<u64>,
}

impl Primorial {
    pub fn new(z: f64) -> Self {
        Self {
            z,
            primes: primes_below(z),
        }
    }

    /// The product itself, if it fits in 128 bits.
    pub fn product(&self) -> Option<u128> {
        self.primes
            .iter()
            .try_fold(1u128, |acc, &p| acc.checked_mul(p as u128))
    }

    /// gcd(n, P(z)) = 1.
    pub fn is_coprime(&self, n: u64) -> bool {
        self.primes.iter().all(|&p| !n.is_multiple_of(p))
    }
}

/// V(w) = ∏_{p<w} (1 − 1/p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MertensValue {
    pub w: f64,
    pub value: f64,
    /// Reduced numerator and denominator, present for w ≤ 100.
    pub exact: Option<(u128, u128)>,
}

pub fn mertens_v(w: f64) -> MertensValue {
    let primes = primes_below(w);
    let value = primes.iter().map(|&p| 1.0 - 1.0 / p as f64).product();
    let exact = (w <= MERTENS_EXACT_MAX).then(|| {
        primes.iter().fold((1u128, 1u128), |(num, den), &p| {
            let (num, den) = (num * (p as u128 - 1), den * p as u128);
            let g = num.gcd(&den);
            (num / g, den / g)
        })
    });
    MertensValue { w, value, exact }
}

/// The set U_z(U) of integers in [1, U] with no prime factor below z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughSet {
    z: f64,
    upper: u64,
    members: Vec<u64>,
    /// False for hand-built sets that need not equal U_z(U).
    complete: bool,
}

impl RoughSet {
    /// Enumerates U_z(U) with a fresh table sized to U.
    pub fn new(z: f64, upper: u64) -> Result<Self> {
        check_level(z)?;
        if upper < 2 {
            return Ok(Self {
                z,
                upper,
                members: (1..=upper).collect(),
                complete: true,
            });
        }
        let table = SpfTable::build(upper)?;
        Self::enumerate(&table, z, upper)
    }

    /// Enumerates U_z(U) against an existing table.
    pub fn enumerate(table: &SpfTable, z: f64, upper: u64) -> Result<Self> {
        check_level(z)?;
        if upper > table.limit() {
            return Err(Error::LimitTooLarge {
                limit: upper,
                max: table.limit(),
            });
        }
        let members = (1..=upper).filter(|&n| table.is_rough(n, z)).collect();
        Ok(Self {
            z,
            upper,
            members,
            complete: true,
        })
    }

    /// A set with explicitly chosen members, for forced or degenerate experiments.
    pub fn from_members(z: f64, upper: u64, mut members: Vec<u64>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self {
            z,
            upper,
            members,
            complete: false,
        }
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn upper(&self) -> u64 {
        self.upper
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn count(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// Number of members divisible by t.
    ///
    /// For an enumerated set, u = t·k is z-rough iff both t and k are, so the
    /// count is |U_z(⌊U/t⌋)| when t is z-rough and 0 otherwise.
    pub fn count_divisible(&self, t: u64) -> u64 {
        if t == 0 {
            return 0;
        }
        if !self.complete {
            return self.members.iter().filter(|&&u| u % t == 0).count() as u64;
        }
        if t > 1 && !Primorial::new(self.z).is_coprime(t) {
            return 0;
        }
        let cap = self.upper / t;
        self.members.partition_point(|&m| m <= cap) as u64
    }
}

fn check_level(z: f64) -> Result<()> {
    if z > 1.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "sieve level z must exceed 1, got {z}"
        )))
    }
}

/// Σ_{u ∈ U_z(U), t | u} 1.
pub fn count_rough_divisible(z: f64, upper: u64, t: u64) -> Result<u64> {
    Ok(RoughSet::new(z, upper)?.count_divisible(t))
}

/// |U_z(U)| · log z / U, the empirical constant in |U_z(U)| ≍ U / log z.
///
/// Errors when the guard z^C ≤ U fails.
pub fn rough_ratio(z: f64, upper: u64, guard_exponent: f64) -> Result<f64> {
    check_level(z)?;
    if z.powf(guard_exponent) > upper as f64 {
        return Err(Error::GuardViolated {
            z,
            c: guard_exponent,
            u: upper,
        });
    }
    let set = RoughSet::new(z, upper)?;
    Ok(rough_density_ratio(&set))
}

/// |U_z(U)| · log z / U for an already enumerated set, without any guard.
pub fn rough_density_ratio(set: &RoughSet) -> f64 {
    set.count() as f64 * set.z().ln() / set.upper() as f64
}

/// Which branch of the divisibility bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SieveBranch {
    /// z < (U/t)^A: reference (U/t)·V(z).
    SmallLevel,
    /// (U/t)^A ≤ z: reference (U/t)·V(U/t).
    LargeLevel,
}

/// Observed count of members divisible by t against the divisibility-bound reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityRatio {
    pub t: u64,
    pub count: u64,
    pub branch: SieveBranch,
    pub reference: f64,
    pub ratio: f64,
}

pub fn divisibility_ratio(set: &RoughSet, t: u64, a: f64) -> Result<DivisibilityRatio> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    let count = set.count_divisible(t);
    let scale = set.upper() as f64 / t as f64;
    let (branch, v) = if set.z() < scale.powf(a) {
        (SieveBranch::SmallLevel, mertens_v(set.z()).value)
    } else {
        (SieveBranch::LargeLevel, mertens_v(scale).value)
    };
    let reference = scale * v;
    Ok(DivisibilityRatio {
        t,
        count,
        branch,
        reference,
        ratio: if reference > 0.0 {
            count as f64 / reference
        } else {
            0.0
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn spf_small_table() {
        let t = SpfTable::build(10).unwrap();
        let got: Vec<u64> = (2..=10).map(|n| t.spf(n)).collect();
        assert_eq!(got, vec![2, 3, 2, 5, 2, 7, 2, 3, 2]);
        assert_eq!(SpfTable::build(49).unwrap().spf(49), 7);
        assert!(matches!(
            SpfTable::build(1),
            Err(Error::LimitTooLarge { .. })
        ));
        assert!(matches!(
            SpfTable::with_cap(1000, 100),
            Err(Error::LimitTooLarge {
                limit: 1000,
                max: 100
            })
        ));
    }

    #[test]
    fn spf_matches_trial_division() {
        let t = SpfTable::build(5000).unwrap();
        for n in 2..=5000u64 {
            let d = (2..=n).find(|d| n % d == 0).unwrap();
            assert_eq!(t.spf(n), d);
            assert!(t.spf(n) * t.spf(n) <= n || t.spf(n) == n);
        }
        assert_eq!(t.primes().len(), 669);
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(Primorial::new(5.0).primes, vec![2, 3]);
        assert_eq!(Primorial::new(5.0).product(), Some(6));
        assert!(Primorial::new(2.0).primes.is_empty());
        assert_eq!(Primorial::new(2.0).product(), Some(1));
        assert_eq!(Primorial::new(11.0).product(), Some(210));
        assert_eq!(Primorial::new(11.5).primes, vec![2, 3, 5, 7, 11]);
        assert!(Primorial::new(0.0).primes.is_empty());
        assert_eq!(Primorial::new(1000.0).product(), None);
    }

    #[test]
    fn mertens_examples() {
        assert_eq!(mertens_v(3.0).exact, Some((1, 2)));
        assert_eq!(mertens_v(2.0).exact, Some((1, 1)));
        assert_eq!(mertens_v(2.0).value, 1.0);
        assert_eq!(mertens_v(6.0).exact, Some((4, 15)));
        assert_eq!(mertens_v(10.0).exact, Some((8, 35)));
        assert!(mertens_v(101.0).exact.is_none());
        let v100 = mertens_v(100.0);
        let (num, den) = v100.exact.unwrap();
        assert!((num as f64 / den as f64 - v100.value).abs() < 1e-15);
    }

    #[test]
    fn mertens_window_and_monotonicity() {
        let mut prev = 1.0f64;
        for w in (3..20_000).step_by(37) {
            let v = mertens_v(w as f64).value;
            let scaled = v * (w as f64).ln();
            assert!((0.2..=2.0).contains(&scaled), "w = {w}: {scaled}");
            assert!(v <= prev);
            assert!(v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn rough_examples() {
        assert_eq!(RoughSet::new(3.0, 10).unwrap().members(), &[1, 3, 5, 7, 9]);
        assert_eq!(RoughSet::new(2.0, 10).unwrap().count(), 10);
        assert_eq!(RoughSet::new(4.0, 10).unwrap().members(), &[1, 5, 7]);
        assert_eq!(RoughSet::new(50.0, 1).unwrap().members(), &[1]);
        assert!(RoughSet::new(1.0, 10).is_err());
    }

    #[test]
    fn rough_membership_matches_gcd_scan() {
        let table = SpfTable::build(10_000).unwrap();
        for z in [2.0, 2.5, 3.0, 5.0, 7.3, 11.0, 30.0, 101.0] {
            let p = Primorial::new(z);
            let set = RoughSet::enumerate(&table, z, 10_000).unwrap();
            let oracle: Vec<u64> = (1..=10_000u64)
                .filter(|&u| p.primes.iter().all(|&q| gcd(u, q) == 1))
                .collect();
            assert_eq!(set.members(), oracle.as_slice(), "z = {z}");
        }
    }

    #[test]
    fn count_divisible_examples() {
        assert_eq!(count_rough_divisible(3.0, 20, 5).unwrap(), 2);
        assert_eq!(count_rough_divisible(3.0, 20, 2).unwrap(), 0);
        let set = RoughSet::new(5.0, 500).unwrap();
        assert_eq!(set.count_divisible(1), set.count());
    }

    #[test]
    fn count_divisible_matches_filter() {
        let table = SpfTable::build(3000).unwrap();
        for z in [2.0, 3.0, 5.0, 7.0, 13.0] {
            let set = RoughSet::enumerate(&table, z, 3000).unwrap();
            let p = Primorial::new(z);
            for t in 1..400u64 {
                let filtered = set.members().iter().filter(|&&u| u % t == 0).count() as u64;
                assert_eq!(set.count_divisible(t), filtered, "z = {z}, t = {t}");
                if t > 1 && !p.is_coprime(t) {
                    assert_eq!(filtered, 0);
                }
            }
        }
    }

    #[test]
    fn forced_sets_count_by_filter() {
        let set = RoughSet::from_members(3.0, 20, vec![4, 2, 6, 2]);
        assert_eq!(set.members(), &[2, 4, 6]);
        assert_eq!(set.count_divisible(2), 3);
        assert_eq!(set.count_divisible(3), 1);
    }

    #[test]
    fn rough_count_monotone_in_z() {
        let table = SpfTable::build(20_000).unwrap();
        let mut prev = u64::MAX;
        for z in 2..60 {
            let c = RoughSet::enumerate(&table, z as f64, 20_000)
                .unwrap()
                .count();
            assert!(c <= prev);
            prev = c;
        }
    }

    #[test]
    fn rough_ratio_guard_and_examples() {
        assert!(matches!(
            rough_ratio(10.0, 1_000_000, DEFAULT_GUARD_EXPONENT),
            Err(Error::GuardViolated { .. })
        ));
        let r = rough_ratio(10.0, 1_000_000, 6.0).unwrap();
        assert!((r - 0.526).abs() < 0.005, "{r}");
        let r2 = rough_ratio(2.0, 1_000_000, DEFAULT_GUARD_EXPONENT).unwrap();
        assert!((r2 - 2f64.ln()).abs() < 1e-12);
        let r3 = rough_ratio(10.0, 1000, 3.0).unwrap();
        assert!((0.3..=3.0).contains(&r3));
    }

    #[test]
    fn divisibility_ratio_branches() {
        let set = RoughSet::new(2.5, 100_000).unwrap();
        let small = divisibility_ratio(&set, 5, DEFAULT_SIEVE_A).unwrap();
        assert_eq!(small.branch, SieveBranch::SmallLevel);
        assert_eq!(small.count, set.count_divisible(5));
        let large = divisibility_ratio(&set, 30_001, DEFAULT_SIEVE_A).unwrap();
        assert_eq!(large.branch, SieveBranch::LargeLevel);
        assert!(divisibility_ratio(&set, 0, 0.1).is_err());
    }
}
