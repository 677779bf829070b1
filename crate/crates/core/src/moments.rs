//! Complete moments Σ_{λ=1..q} |Σ_{v=1..V} χ(λ+v)|^{2r} and the Weil-type
//! bound (2r)^r V^r q + 2r V^{2r} q^{1/2}.
//!
//! Every window is two prefix-table differences, so a moment costs O(q)
//! after the table is built. The λ-range is cut into fixed chunks; the
//! sequential and parallel paths combine the same chunk partials in the same
//! order, so both produce identical bits.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::chars::{PrefixTable, PrimeModulus};
use crate::error::{Error, Result};

const CHUNK: u64 = 1 << 14;

/// Value of the bound together with its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    /// May be `inf` when the magnitude exceeds f64; compare via `ln_value` then.
    pub value: f64,
    pub ln_value: f64,
}

impl BoundValue {
    pub fn from_ln(ln_value: f64) -> Self {
        Self {
            value: ln_value.exp(),
            ln_value,
        }
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// (2r)^r V^r q + 2r V^{2r} q^{1/2}.
pub fn weil_bound(r: u32, v: u64, q: u64) -> Result<BoundValue> {
    if r == 0 || v == 0 || q == 0 {
        return Err(Error::InvalidInput(format!(
            "weil bound needs r ≥ 1, V ≥ 1, q ≥ 1 (got r = {r}, V = {v}, q = {q})"
        )));
    }
    let (rf, vf, qf) = (r as f64, v as f64, q as f64);
    let two_r = 2.0 * rf;
    let ln_first = rf * two_r.ln() + rf * vf.ln() + qf.ln();
    let ln_second = two_r.ln() + two_r * vf.ln() + 0.5 * qf.ln();
    let ln_value = log_sum_exp(ln_first, ln_second);
    if !ln_value.is_finite() {
        return Err(Error::Overflow);
    }
    let direct =
        two_r.powi(r as i32) * vf.powi(r as i32) * qf + two_r * vf.powi(2 * r as i32) * qf.sqrt();
    let value = if direct.is_finite() {
        direct
    } else {
        f64::INFINITY
    };
    Ok(BoundValue { value, ln_value })
}

/// (2r)^{2r} q^{3/2}, the bound once V = ⌊r q^{1/2r}⌋.
pub fn specialized_bound(r: u32, q: u64) -> BoundValue {
    let two_r = 2.0 * r as f64;
    BoundValue::from_ln(two_r * two_r.ln() + 1.5 * (q as f64).ln())
}

/// ⌊r · q^{1/(2r)}⌋, computed exactly as the largest V with V^{2r} ≤ r^{2r} q.
pub fn weil_window(q: u64, r: u32) -> u64 {
    let e = 2 * r;
    let target = BigUint::from(r).pow(e) * BigUint::from(q);
    let guess = (r as f64 * (q as f64).powf(1.0 / e as f64)).floor() as u64;
    let fits = |v: u64| BigUint::from(v).pow(e) <= target;
    let mut v = guess.max(1);
    while !fits(v) {
        v -= 1;
    }
    while fits(v + 1) {
        v += 1;
    }
    v
}

/// A moment that is exact on the quadratic path.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentValue {
    Exact(BigUint),
    Approx(f64),
}

impl MomentValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            MomentValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            MomentValue::Approx(v) => *v,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            MomentValue::Exact(v) if v.is_zero() => f64::NEG_INFINITY,
            MomentValue::Exact(v) => {
                let bits = v.bits();
                if bits < 1000 {
                    self.to_f64().ln()
                } else {
                    let shift = bits - 64;
                    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
                }
            }
            MomentValue::Approx(v) => v.ln(),
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            MomentValue::Exact(v) => Some(v),
            MomentValue::Approx(_) => None,
        }
    }

    /// self ≤ bound, in log space when the bound has left f64 range.
    pub fn le_bound(&self, bound: &BoundValue) -> bool {
        if bound.value.is_finite() {
            self.to_f64() <= bound.value
        } else {
            self.ln() <= bound.ln_value
        }
    }
}

impl Serialize for MomentValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MomentValue::Exact(v) => s.serialize_str(&v.to_string()),
            MomentValue::Approx(v) => s.serialize_f64(*v),
        }
    }
}

/// 128-bit accumulator that spills into a big integer on overflow.
#[derive(Debug, Clone, Default)]
pub(crate) struct ExactSum {
    low: u128,
    high: Option<BigUint>,
}

impl ExactSum {
    pub(crate) fn add_u128(&mut self, x: u128) {
        match self.low.checked_add(x) {
            Some(s) => self.low = s,
            None => {
                let spill = BigUint::from(self.low) + BigUint::from(x);
                *self.high.get_or_insert_with(BigUint::zero) += spill;
                self.low = 0;
            }
        }
    }

    pub(crate) fn add_power(&mut self, base: u64, exp: u32) {
        match (base as u128).checked_pow(exp) {
            Some(t) => self.add_u128(t),
            None => *self.high.get_or_insert_with(BigUint::zero) += BigUint::from(base).pow(exp),
        }
    }

    pub(crate) fn merge(&mut self, other: ExactSum) {
        self.add_u128(other.low);
        if let Some(h) = other.high {
            *self.high.get_or_insert_with(BigUint::zero) += h;
        }
    }

    pub(crate) fn finish(self) -> BigUint {
        self.high.unwrap_or_default() + BigUint::from(self.low)
    }
}

/// Bound check specialised to V = ⌊r q^{1/2r}⌋.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecializedCheck {
    pub bound: f64,
    /// The general bound does not exceed (2r)^{2r} q^{3/2}.
    pub general_within: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub q: u64,
    pub v: u64,
    pub r: u32,
    pub char_index: u64,
    pub moment: MomentValue,
    pub bound: f64,
    pub bound_ln: f64,
    pub margin: f64,
    pub pass: bool,
    /// Present only when V equals ⌊r q^{1/2r}⌋.
    pub specialized: Option<SpecializedCheck>,
}

impl MomentReport {
    pub fn all_pass(&self) -> bool {
        self.pass && self.specialized.as_ref().is_none_or(|s| s.pass)
    }
}

fn check_args(table: &PrefixTable<'_>, v: u64, r: u32) -> Result<()> {
    let q = table.q();
    if v == 0 || v > q {
        return Err(Error::WindowTooLarge { v, q });
    }
    if r == 0 {
        return Err(Error::InvalidInput(
            "moment order r must be at least 1".into(),
        ));
    }
    Ok(())
}

enum Partial {
    Exact(ExactSum),
    Float(f64),
}

fn chunk_partial(table: &PrefixTable<'_>, lo: u64, hi: u64, v: u64, r: u32) -> Partial {
    let q = table.q();
    if table.is_exact() {
        let mut acc = ExactSum::default();
        for lambda in lo..hi {
            let w = table.window_exact(lambda % q, v).unsigned_abs();
            acc.add_power(w, 2 * r);
        }
        Partial::Exact(acc)
    } else {
        let mut acc = 0.0f64;
        for lambda in lo..hi {
            let [re, im] = table.window_float(lambda % q, v);
            acc += (re * re + im * im).powi(r as i32);
        }
        Partial::Float(acc)
    }
}

fn chunk_bounds(q: u64) -> Vec<(u64, u64)> {
    (0..q.div_ceil(CHUNK))
        .map(|c| (1 + c * CHUNK, (1 + (c + 1) * CHUNK).min(q + 1)))
        .collect()
}

fn combine(partials: Vec<Partial>) -> MomentValue {
    let mut exact: Option<ExactSum> = None;
    let mut float = 0.0f64;
    let mut is_exact = false;
    for p in partials {
        match p {
            Partial::Exact(e) => {
                is_exact = true;
                exact.get_or_insert_with(ExactSum::default).merge(e);
            }
            Partial::Float(f) => float += f,
        }
    }
    if is_exact {
        MomentValue::Exact(exact.unwrap_or_default().finish())
    } else {
        MomentValue::Approx(float)
    }
}

/// Σ_{λ=1..q} |window(λ, V)|^{2r} on one thread.
pub fn moment_value(table: &PrefixTable<'_>, v: u64, r: u32) -> Result<MomentValue> {
    check_args(table, v, r)?;
    let partials = chunk_bounds(table.q())
        .into_iter()
        .map(|(lo, hi)| chunk_partial(table, lo, hi, v, r))
        .collect();
    Ok(combine(partials))
}

/// Same as [`moment_value`] with the λ-chunks spread across the rayon pool.
pub fn moment_value_parallel(table: &PrefixTable<'_>, v: u64, r: u32) -> Result<MomentValue> {
    check_args(table, v, r)?;
    let partials = chunk_bounds(table.q())
        .into_par_iter()
        .map(|(lo, hi)| chunk_partial(table, lo, hi, v, r))
        .collect();
    Ok(combine(partials))
}

fn build_report(
    table: &PrefixTable<'_>,
    v: u64,
    r: u32,
    moment: MomentValue,
) -> Result<MomentReport> {
    let q = table.q();
    let bound = weil_bound(r, v, q)?;
    let pass = moment.le_bound(&bound);
    let specialized = (v == weil_window(q, r)).then(|| {
        let sb = specialized_bound(r, q);
        SpecializedCheck {
            bound: sb.value,
            general_within: bound.ln_value <= sb.ln_value,
            pass: moment.le_bound(&sb),
        }
    });
    Ok(MomentReport {
        q,
        v,
        r,
        char_index: table.character().index(),
        margin: bound.value - moment.to_f64(),
        moment,
        bound: bound.value,
        bound_ln: bound.ln_value,
        pass,
        specialized,
    })
}

/// Moment with its bound comparison, single-threaded.
pub fn moment_sum(table: &PrefixTable<'_>, v: u64, r: u32) -> Result<MomentReport> {
    let moment = moment_value(table, v, r)?;
    build_report(table, v, r, moment)
}

/// Moment with its bound comparison, λ-partitioned across threads.
pub fn moment_sum_parallel(table: &PrefixTable<'_>, v: u64, r: u32) -> Result<MomentReport> {
    let moment = moment_value_parallel(table, v, r)?;
    build_report(table, v, r, moment)
}

/// Builds the modulus, character and table, then checks the moment bound.
pub fn moment_check(q: u64, char_index: u64, v: u64, r: u32) -> Result<MomentReport> {
    let modulus = PrimeModulus::new(q)?;
    let chi = modulus.character(char_index)?;
    let table = PrefixTable::new(chi)?;
    moment_sum(&table, v, r)
}
