//! Bound formulas for short character sums, the shift-and-average parameters
//! (U, V, z), the Hölder chain that combines the collision distribution with
//! the complete moment, extremal scans over intervals, and quadratic
//! nonresidue statistics.
//!
//! All bound formulas are evaluated with implied constant 1; empirical
//! constants are measured as ratios and never compared against a claimed value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::chars::{is_prime, mod_pow, Character, PrefixTable};
use crate::congruence::{CollisionDistribution, CollisionInstance};
use crate::error::{Error, Result};
use crate::moments::{moment_value, weil_window, MomentValue};
use crate::sieve::{RoughSet, DEFAULT_SIEVE_A};

/// Relative slack allowed on the floating Hölder comparison.
pub const HOLDER_SLACK: f64 = 1e-9;

/// Default stand-in for the o(1) exponent in the conditional bound N^{1/2} q^{o(1)}.
pub const DEFAULT_GRH_DELTA: f64 = 0.05;

/// Parameters U, V, z of the shift-and-average step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurgessParams {
    pub n: u64,
    pub q: u64,
    pub r: u32,
    /// ⌊N / (16 r q^{1/2r})⌋.
    pub u: u64,
    /// ⌊r q^{1/2r}⌋.
    pub v: u64,
    /// exp((log U)^{1/2}); absent when U < 2.
    pub z: Option<f64>,
    pub degenerate: bool,
    /// N ≤ q^{1/2 + 1/4r}.
    pub in_hypothesis: bool,
}

/// Computes U, V, z with exact floors.
///
/// U is the largest integer with (16 r U)^{2r} q ≤ N^{2r}; V the largest with
/// V^{2r} ≤ r^{2r} q.
pub fn derive_params(n: u64, q: u64, r: u32) -> Result<BurgessParams> {
    if r < 2 {
        return Err(Error::InvalidInput(format!(
            "r must be at least 2, got {r}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    if !is_prime(q) {
        return Err(Error::CompositeModulus(q));
    }
    let e = 2 * r;
    let n_pow = BigUint::from(n).pow(e);
    let q_big = BigUint::from(q);
    let fits = |u: u64| BigUint::from(16 * r as u64 * u).pow(e) * &q_big <= n_pow;
    let guess = (n as f64 / (16.0 * r as f64 * (q as f64).powf(1.0 / e as f64))).floor() as u64;
    let mut u = guess;
    while u > 0 && !fits(u) {
        u -= 1;
    }
    while fits(u + 1) {
        u += 1;
    }
    let v = weil_window(q, r);
    let degenerate = u < 2;
    let z = (!degenerate).then(|| (u as f64).ln().sqrt().exp());
    // N^{4r} ≤ q^{2r+1}
    let in_hypothesis = BigUint::from(n).pow(4 * r) <= BigUint::from(q).pow(2 * r + 1);
    Ok(BurgessParams {
        n,
        q,
        r,
        u,
        v,
        z,
        degenerate,
        in_hypothesis,
    })
}

/// The bound shapes compared in scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// q^{1/2} log q.
    PolyaVinogradov,
    /// N^{1/2} q^δ, δ standing in for o(1).
    Grh,
    /// q^{1/2} log log q.
    MvLoglog,
    /// N^{1−1/r} q^{(r+1)/4r²} log q.
    BurgessClassic,
    /// … (log q)^{1/r}.
    #[serde(rename = "ik_1r")]
    Ik1r,
    /// … (log q)^{1/2r}.
    #[serde(rename = "ik_12r")]
    Ik12r,
    /// … (log q)^{1/4r}.
    #[serde(rename = "refined_14r")]
    Refined14r,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 7] = [
        BoundVariant::PolyaVinogradov,
        BoundVariant::Grh,
        BoundVariant::MvLoglog,
        BoundVariant::BurgessClassic,
        BoundVariant::Ik1r,
        BoundVariant::Ik12r,
        BoundVariant::Refined14r,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundVariant::PolyaVinogradov => "polya_vinogradov",
            BoundVariant::Grh => "grh",
            BoundVariant::MvLoglog => "mv_loglog",
            BoundVariant::BurgessClassic => "burgess_classic",
            BoundVariant::Ik1r => "ik_1r",
            BoundVariant::Ik12r => "ik_12r",
            BoundVariant::Refined14r => "refined_14r",
        }
    }

    /// Smallest r the formula is stated for, if it depends on r.
    pub fn min_r(&self) -> Option<u32> {
        match self {
            BoundVariant::PolyaVinogradov | BoundVariant::Grh | BoundVariant::MvLoglog => None,
            BoundVariant::BurgessClassic => Some(1),
            BoundVariant::Ik1r | BoundVariant::Ik12r | BoundVariant::Refined14r => Some(2),
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub variant: BoundVariant,
    pub value: f64,
    pub n: u64,
    pub q: u64,
    pub r: Option<u32>,
    pub delta: Option<f64>,
}

/// Shape value of a bound with implied constant 1.
pub fn bound_value(
    variant: BoundVariant,
    n: u64,
    q: u64,
    r: u32,
    delta: f64,
) -> Result<BoundReport> {
    if q < 3 {
        return Err(Error::InvalidInput(format!("bounds need q ≥ 3, got {q}")));
    }
    if let Some(min) = variant.min_r() {
        if r < min {
            return Err(Error::InvalidInput(format!(
                "{variant} needs r ≥ {min}, got {r}"
            )));
        }
    }
    let (nf, qf, rf) = (n as f64, q as f64, r as f64);
    let log_q = qf.ln();
    let burgess_core = || nf.powf(1.0 - 1.0 / rf) * qf.powf((rf + 1.0) / (4.0 * rf * rf));
    let value = match variant {
        BoundVariant::PolyaVinogradov => qf.sqrt() * log_q,
        BoundVariant::Grh => nf.sqrt() * qf.powf(delta),
        BoundVariant::MvLoglog => qf.sqrt() * log_q.ln(),
        BoundVariant::BurgessClassic => burgess_core() * log_q,
        BoundVariant::Ik1r => burgess_core() * log_q.powf(1.0 / rf),
        BoundVariant::Ik12r => burgess_core() * log_q.powf(1.0 / (2.0 * rf)),
        BoundVariant::Refined14r => burgess_core() * log_q.powf(1.0 / (4.0 * rf)),
    };
    Ok(BoundReport {
        variant,
        value,
        n,
        q,
        r: variant.min_r().map(|_| r),
        delta: (variant == BoundVariant::Grh).then_some(delta),
    })
}

/// Every variant that is defined at this r.
pub fn all_bounds(n: u64, q: u64, r: u32, delta: f64) -> Result<Vec<BoundReport>> {
    BoundVariant::ALL
        .into_iter()
        .filter(|v| v.min_r().is_none_or(|m| r >= m))
        .map(|v| bound_value(v, n, q, r, delta))
        .collect()
}

/// refined ≤ ik_12r ≤ ik_1r ≤ classic at (N, q, r).
pub fn log_power_chain_holds(n: u64, q: u64, r: u32) -> Result<bool> {
    let get = |v| bound_value(v, n, q, r, DEFAULT_GRH_DELTA).map(|b| b.value);
    let refined = get(BoundVariant::Refined14r)?;
    let half = get(BoundVariant::Ik12r)?;
    let one = get(BoundVariant::Ik1r)?;
    let classic = get(BoundVariant::BurgessClassic)?;
    Ok(refined <= half && half <= one && one <= classic)
}

/// Every quantity in W^{2r} ≤ (Σ I)^{2r−2} (Σ I²) Σ |window|^{2r}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderChainReport {
    /// Derived parameters, absent when the setup was supplied directly.
    pub params: Option<BurgessParams>,
    pub q: u64,
    pub m: i64,
    pub n: u64,
    pub r: u32,
    pub v: u64,
    pub z: f64,
    pub upper: u64,
    pub rough_count: u64,
    /// Σ_λ I(λ) |window(λ, V)|.
    pub w: f64,
    /// Decimal form of W when it is an exact integer.
    pub w_exact: Option<String>,
    pub first_moment: u64,
    pub second_moment: u128,
    pub moment2r: MomentValue,
    pub holder_lhs_ln: f64,
    pub holder_rhs_ln: f64,
    pub exact_comparison: bool,
    pub pass: bool,
    /// |Σ_{M<n≤M+N} χ(n)|.
    pub interval_abs: f64,
    /// W / (|U_z(U)| V), the averaged shifted sum.
    pub shifted_average: f64,
}

/// The Hölder chain with U, V, z from [`derive_params`].
pub fn holder_chain(chi: Character<'_>, m: i64, n: u64, r: u32) -> Result<HolderChainReport> {
    let params = derive_params(n, chi.q(), r)?;
    let z = match params.z {
        Some(z) if !params.degenerate => z,
        _ => return Err(Error::DegenerateParams { u: params.u }),
    };
    let rough = RoughSet::new(z, params.u)?;
    let table = PrefixTable::new(chi)?;
    let mut report = holder_chain_with(&table, m, n, r, params.v, rough)?;
    report.params = Some(params);
    Ok(report)
}

/// The Hölder chain for an explicit window length and rough set.
pub fn holder_chain_with(
    table: &PrefixTable<'_>,
    m: i64,
    n: u64,
    r: u32,
    v: u64,
    rough: RoughSet,
) -> Result<HolderChainReport> {
    if r == 0 {
        return Err(Error::InvalidInput("r must be at least 1".into()));
    }
    let q = table.q();
    let (z, upper, rough_count) = (rough.z(), rough.upper(), rough.count());
    let instance = CollisionInstance::new(q, m, n, rough, DEFAULT_SIEVE_A)?;
    let dist = CollisionDistribution::compute_with(&instance, table.character().modulus())?;
    let moment2r = moment_value(table, v, r)?;
    let interval_abs = table.interval_sum(m, n).abs();
    let first = dist.first_moment;
    let second = dist.second_moment;
    let e = 2 * r;

    let (w, w_exact, lhs_ln, rhs_ln, pass, exact_comparison) = match moment2r.exact() {
        Some(mom) => {
            let w: u128 = dist
                .buckets
                .iter()
                .map(|&(lambda, c)| {
                    c as u128 * table.window_exact(lambda, v).unsigned_abs() as u128
                })
                .sum();
            let lhs = BigUint::from(w).pow(e);
            let rhs = BigUint::from(first).pow(e - 2) * BigUint::from(second) * mom;
            let lhs_ln = MomentValue::Exact(lhs.clone()).ln();
            let rhs_ln = MomentValue::Exact(rhs.clone()).ln();
            (
                w.to_f64().unwrap_or(f64::INFINITY),
                Some(w.to_string()),
                lhs_ln,
                rhs_ln,
                lhs <= rhs,
                true,
            )
        }
        None => {
            let w: f64 = dist
                .buckets
                .iter()
                .map(|&(lambda, c)| {
                    let [re, im] = table.window_float(lambda, v);
                    c as f64 * re.hypot(im)
                })
                .sum();
            let lhs_ln = e as f64 * w.ln();
            let rhs_ln =
                (e - 2) as f64 * (first as f64).ln() + (second as f64).ln() + moment2r.ln();
            let pass = w == 0.0 || lhs_ln <= rhs_ln + HOLDER_SLACK;
            (w, None, lhs_ln, rhs_ln, pass, false)
        }
    };
    let denom = rough_count as f64 * v as f64;
    Ok(HolderChainReport {
        params: None,
        q,
        m,
        n,
        r,
        v,
        z,
        upper,
        rough_count,
        w,
        w_exact,
        first_moment: first,
        second_moment: second,
        moment2r,
        holder_lhs_ln: lhs_ln,
        holder_rhs_ln: rhs_ln,
        exact_comparison,
        pass,
        interval_abs,
        shifted_average: if denom > 0.0 { w / denom } else { 0.0 },
    })
}

/// Largest |Σ_{M<n≤M+N} χ(n)| over a list of starting points, against every bound shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub q: u64,
    pub n: u64,
    pub r: u32,
    pub char_index: u64,
    pub windows: u64,
    pub max_abs_sum: f64,
    pub argmax_m: i64,
    /// max |S| / bound for each variant defined at r.
    pub worst_ratio: BTreeMap<BoundVariant, f64>,
    /// N ≤ q^{1/2 + 1/4r}.
    pub in_hypothesis: bool,
}

pub fn extremal_scan(
    table: &PrefixTable<'_>,
    n: u64,
    m_values: &[i64],
    r: u32,
    delta: f64,
) -> Result<ScanResult> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be positive".into()));
    }
    if m_values.is_empty() {
        return Err(Error::InvalidInput("no starting points to scan".into()));
    }
    let q = table.q();
    let mut max_abs_sum = -1.0f64;
    let mut argmax_m = m_values[0];
    for &m in m_values {
        let s = table.interval_sum(m, n).abs();
        if s > max_abs_sum {
            max_abs_sum = s;
            argmax_m = m;
        }
    }
    let worst_ratio = all_bounds(n, q, r, delta)?
        .into_iter()
        .map(|b| (b.variant, max_abs_sum / b.value))
        .collect();
    let in_hypothesis = BigUint::from(n).pow(4 * r) <= BigUint::from(q).pow(2 * r + 1);
    Ok(ScanResult {
        q,
        n,
        r,
        char_index: table.character().index(),
        windows: m_values.len() as u64,
        max_abs_sum,
        argmax_m,
        worst_ratio,
        in_hypothesis,
    })
}

/// max over every interval of |Σ χ(n)| divided by q^{1/2} log q.
pub fn polya_vinogradov_ratio(table: &PrefixTable<'_>) -> f64 {
    let q = table.q() as f64;
    table.max_interval_abs() / (q.sqrt() * q.ln())
}

fn check_odd_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::CompositeModulus(q));
    }
    if q == 2 {
        return Err(Error::InvalidInput("q must be an odd prime".into()));
    }
    Ok(())
}

fn is_nonresidue(n: u64, q: u64) -> bool {
    mod_pow(n, (q - 1) / 2, q) == q - 1
}

/// Smallest n ≥ 2 with (n/q) = −1.
pub fn least_nonresidue(q: u64) -> Result<u64> {
    check_odd_prime(q)?;
    Ok((2..q)
        .find(|&n| is_nonresidue(n, q))
        .expect("odd primes have nonresidues"))
}

/// Longest run of consecutive n ∈ [1, q−1] with (n/q) ≠ −1, as (length, start).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonresidueGap {
    pub gap: u64,
    pub start: u64,
}

pub fn nonresidue_max_gap(q: u64) -> Result<NonresidueGap> {
    check_odd_prime(q)?;
    let mut best = NonresidueGap { gap: 0, start: 1 };
    let mut run_start = 1u64;
    let mut run = 0u64;
    for n in 1..q {
        if is_nonresidue(n, q) {
            run = 0;
            run_start = n + 1;
        } else {
            run += 1;
            if run > best.gap {
                best = NonresidueGap {
                    gap: run,
                    start: run_start,
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::PrimeModulus;

    fn direct_w(chi: Character<'_>, m: i64, n: u64, rough: &RoughSet, v: u64) -> i64 {
        let mut w = 0i64;
        for k in 1..=n as i64 {
            for &u in rough.members() {
                let s: i64 = (1..=v as i64)
                    .map(|j| chi.eval(m + k + u as i64 * j).to_sign().unwrap())
                    .sum();
                w += s.abs();
            }
        }
        w
    }

    #[test]
    fn derive_params_example() {
        let p = derive_params(5000, 10_007, 2).unwrap();
        assert_eq!(p.v, 20);
        assert_eq!(p.u, 15);
        assert!((p.z.unwrap() - 5.18).abs() < 0.01);
        assert!(!p.degenerate);
        assert!(!p.in_hypothesis);
        assert!(16 * p.u * p.v <= p.n);
    }

    #[test]
    fn derive_params_degenerate_and_errors() {
        let p = derive_params(100, 10_007, 2).unwrap();
        assert_eq!(p.u, 0);
        assert!(p.degenerate && p.z.is_none());
        assert!(p.in_hypothesis);
        assert!(derive_params(100, 10_007, 1).is_err());
        assert!(derive_params(0, 10_007, 2).is_err());
        assert_eq!(
            derive_params(100, 10_005, 2).unwrap_err(),
            Error::CompositeModulus(10_005)
        );
    }

    #[test]
    fn derive_params_floor_is_exact() {
        for q in [101u64, 1009, 10_007, 1_000_003] {
            for r in 2..=4u32 {
                for n in (1..200_000u64).step_by(977) {
                    let p = derive_params(n, q, r).unwrap();
                    let x = n as f64 / (16.0 * r as f64 * (q as f64).powf(1.0 / (2 * r) as f64));
                    assert!((p.u as f64) <= x + 1e-9 && x < (p.u + 1) as f64 + 1e-9);
                    assert!(16 * p.u * p.v <= n);
                }
            }
        }
    }

    #[test]
    fn bound_values() {
        let pv = bound_value(BoundVariant::PolyaVinogradov, 1, 10_007, 2, 0.05).unwrap();
        assert!((pv.value - 921.4).abs() < 0.1, "{}", pv.value);
        let q = 10_007f64;
        let n = q.sqrt().floor() as u64;
        let refined = bound_value(BoundVariant::Refined14r, n, 10_007, 2, 0.05).unwrap();
        let expected = (n as f64).sqrt() * q.powf(3.0 / 16.0) * q.ln().powf(0.125);
        assert!((refined.value - expected).abs() < 1e-9 * expected);
        let grh = bound_value(BoundVariant::Grh, 400, 10_007, 2, 0.05).unwrap();
        assert!((grh.value - 20.0 * q.powf(0.05)).abs() < 1e-9);
        assert_eq!(grh.delta, Some(0.05));
        assert!(bound_value(BoundVariant::Ik12r, 400, 10_007, 1, 0.05).is_err());
        assert!(bound_value(BoundVariant::BurgessClassic, 400, 10_007, 1, 0.05).is_ok());
        assert!(bound_value(BoundVariant::PolyaVinogradov, 4, 2, 2, 0.05).is_err());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in BoundVariant::ALL {
            assert_eq!(v.name().parse::<BoundVariant>().unwrap(), v);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{}\"", v.name()));
            assert_eq!(serde_json::from_str::<BoundVariant>(&json).unwrap(), v);
        }
        assert_eq!(
            "burgess".parse::<BoundVariant>().unwrap_err(),
            Error::UnknownVariant("burgess".into())
        );
    }

    #[test]
    fn log_power_chain_everywhere() {
        for q in [3u64, 5, 101, 10_007, 1_000_003] {
            for r in 2..6 {
                for n in [1u64, 10, 1000, 100_000] {
                    assert!(log_power_chain_holds(n, q, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn holder_chain_derived_params_are_degenerate_for_small_n() {
        let m = PrimeModulus::new(101).unwrap();
        assert_eq!(
            holder_chain(m.legendre(), 0, 50, 2).unwrap_err(),
            Error::DegenerateParams { u: 0 }
        );
    }

    #[test]
    fn holder_chain_nondegenerate() {
        let m = PrimeModulus::new(10_007).unwrap();
        let rep = holder_chain(m.legendre(), 123, 5000, 2).unwrap();
        let params = rep.params.unwrap();
        assert_eq!((params.u, params.v), (15, 20));
        assert!(rep.pass && rep.exact_comparison);
        assert_eq!(rep.first_moment, 5000 * rep.rough_count);
        assert!(rep.holder_lhs_ln <= rep.holder_rhs_ln);
    }

    #[test]
    fn holder_chain_single_unit() {
        let m = PrimeModulus::new(101).unwrap();
        let chi = m.legendre();
        let table = PrefixTable::new(chi).unwrap();
        let rough = RoughSet::from_members(2.0, 1, vec![1]);
        let rep = holder_chain_with(&table, 7, 30, 2, 6, rough.clone()).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.first_moment, 30);
        assert_eq!(rep.second_moment, 30);
        let direct: i64 = (8..=37)
            .map(|n| table.window_sum(n, 6).unwrap().exact.unwrap().abs())
            .sum();
        assert_eq!(rep.w_exact.as_deref(), Some(direct.to_string().as_str()));
        assert_eq!(direct, direct_w(chi, 7, 30, &rough, 6));
    }

    #[test]
    fn collected_w_matches_direct_triple_sum() {
        for q in [31u64, 61, 101] {
            let m = PrimeModulus::new(q).unwrap();
            let chi = m.legendre();
            let table = PrefixTable::new(chi).unwrap();
            for (start, n, z, upper, v) in [
                (0i64, 10u64, 2.0, 3u64, 4u64),
                (17, 12, 3.0, 9, 5),
                (-40, 8, 2.0, 5, 3),
            ] {
                let rough = RoughSet::new(z, upper).unwrap();
                let rep = holder_chain_with(&table, start, n, 2, v, rough.clone()).unwrap();
                let direct = direct_w(chi, start, n, &rough, v);
                assert_eq!(rep.w_exact.unwrap(), direct.to_string(), "q = {q}");
                assert!(rep.pass);
            }
        }
    }

    #[test]
    fn holder_chain_complex_character() {
        let m = PrimeModulus::new(1009).unwrap();
        let chi = m.character_of_order(3).unwrap();
        let table = PrefixTable::new(chi).unwrap();
        for start in [0i64, 250, 999] {
            let rough = RoughSet::new(2.0, 4).unwrap();
            let rep = holder_chain_with(&table, start, 30, 3, 6, rough).unwrap();
            assert!(!rep.exact_comparison);
            assert!(rep.pass);
        }
    }

    #[test]
    fn scan_examples() {
        let m = PrimeModulus::new(101).unwrap();
        let table = PrefixTable::new(m.legendre()).unwrap();
        let full = extremal_scan(&table, 101, &[0], 2, 0.05).unwrap();
        assert_eq!(full.max_abs_sum, 0.0);
        assert!(full.worst_ratio.values().all(|&r| r == 0.0));

        let ms: Vec<i64> = (0..=90).collect();
        let scan = extremal_scan(&table, 10, &ms, 2, 0.05).unwrap();
        let brute = ms
            .iter()
            .map(|&s| m.legendre().interval_sum(s, 10).exact.unwrap().abs())
            .max()
            .unwrap();
        assert_eq!(scan.max_abs_sum, brute as f64);
        assert!(scan.max_abs_sum <= 10.0 && scan.max_abs_sum >= 10f64.sqrt() * 0.3);
        assert_eq!(
            m.legendre().interval_sum(scan.argmax_m, 10).abs(),
            scan.max_abs_sum
        );
        assert_eq!(scan.worst_ratio.len(), 7);
        assert!(extremal_scan(&table, 10, &[], 2, 0.05).is_err());
    }

    #[test]
    fn scan_invariant_under_conjugation() {
        let m = PrimeModulus::new(211).unwrap();
        let ms: Vec<i64> = (0..211).collect();
        for idx in [1u64, 7, 35, 70] {
            let chi = m.character(idx).unwrap();
            let a = extremal_scan(&PrefixTable::new(chi).unwrap(), 25, &ms, 2, 0.05).unwrap();
            let b = extremal_scan(
                &PrefixTable::new(chi.conjugate()).unwrap(),
                25,
                &ms,
                2,
                0.05,
            )
            .unwrap();
            assert!((a.max_abs_sum - b.max_abs_sum).abs() < 1e-9);
        }
    }

    #[test]
    fn nonresidue_examples() {
        assert_eq!(least_nonresidue(7).unwrap(), 3);
        assert_eq!(least_nonresidue(3).unwrap(), 2);
        assert_eq!(least_nonresidue(41).unwrap(), 3);
        assert_eq!(
            nonresidue_max_gap(7).unwrap(),
            NonresidueGap { gap: 2, start: 1 }
        );
        assert_eq!(
            nonresidue_max_gap(3).unwrap(),
            NonresidueGap { gap: 1, start: 1 }
        );
        assert!(least_nonresidue(9).is_err());
        assert!(nonresidue_max_gap(2).is_err());
    }

    #[test]
    fn nonresidue_consistency() {
        for q in (3..5000u64).filter(|&q| is_prime(q)) {
            let m = PrimeModulus::new(q).unwrap();
            let chi = m.legendre();
            let lnr = least_nonresidue(q).unwrap();
            assert_eq!(chi.eval(lnr as i64).to_sign(), Some(-1));
            assert!((2..lnr).all(|n| chi.eval(n as i64).to_sign() == Some(1)));
            let gap = nonresidue_max_gap(q).unwrap();
            assert!(lnr <= gap.start + gap.gap);
            assert!(
                (gap.start..gap.start + gap.gap).all(|n| chi.eval(n as i64).to_sign() != Some(-1))
            );
        }
    }
}
