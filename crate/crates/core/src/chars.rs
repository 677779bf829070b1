//! Multiplicative characters modulo a prime.
//!
//! The group (Z/qZ)* is cyclic of order q−1. Fixing the smallest primitive
//! root g, the character of index m is
//!
//! ```text
//! χ_m(g^k) = e(m·k / (q−1)),    χ_m(n) = 0 when q | n.
//! ```
//!
//! Values are kept as exact fractions of the (q−1)-st root of unity and only
//! projected to floating point when summed. The quadratic character
//! (m = (q−1)/2) takes values in {−1, 0, 1} and is summed in exact integers.
//!
//! [`PrefixTable`] stores the cumulative sums S_k = Σ_{n ≤ k} χ(n) for
//! k ∈ [0, q] and answers every window sum Σ_{v=1..V} χ(λ+v) with at most
//! two table differences.

use std::f64::consts::TAU;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on q for the discrete-log table.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 26;

/// Per-summand rounding budget for floating-point character sums.
pub const SUM_EPSILON: f64 = 1e-9;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Distinct prime factors of `n` by trial division, in increasing order.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    let m = modulus as i128;
    let (mut old_r, mut r) = ((a as i128).rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m) as u64)
}

/// Smallest primitive root of the prime `q`.
///
/// A candidate g has order q−1 iff g^((q−1)/p) ≠ 1 for every prime p | q−1.
pub fn find_primitive_root(q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::CompositeModulus(q));
    }
    if q == 2 {
        return Ok(1);
    }
    let order = q - 1;
    let factors = distinct_prime_factors(order);
    (2..q)
        .find(|&g| factors.iter().all(|&p| mod_pow(g, order / p, q) != 1))
        .ok_or(Error::CompositeModulus(q))
}

/// A prime modulus together with its primitive root and discrete-log tables.
#[derive(Clone)]
pub struct PrimeModulus {
    q: u64,
    g: u64,
    /// `dlog[n] = k` with g^k ≡ n; `dlog[0]` is a sentinel.
    dlog: Vec<u32>,
    /// `exp[k] = g^k mod q` for k ∈ [0, q−2].
    exp: Vec<u32>,
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeModulus")
            .field("q", &self.q)
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_limit(q, DEFAULT_TABLE_LIMIT)
    }

    /// Builds the tables with a single pass over the powers of g.
    pub fn with_limit(q: u64, limit: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::CompositeModulus(q));
        }
        if q < 3 {
            return Err(Error::InvalidInput(format!(
                "modulus must be an odd prime, got {q}"
            )));
        }
        if q > limit || q > u32::MAX as u64 {
            return Err(Error::TableLimitExceeded { q, limit });
        }
        let g = find_primitive_root(q)?;
        let order = (q - 1) as usize;
        let mut dlog = vec![u32::MAX; q as usize];
        let mut exp = Vec::with_capacity(order);
        let mut power = 1u64;
        for k in 0..order {
            if dlog[power as usize] != u32::MAX {
                return Err(Error::InvalidInput(format!(
                    "{g} is not a generator modulo {q}"
                )));
            }
            dlog[power as usize] = k as u32;
            exp.push(power as u32);
            power = power * g % q;
        }
        if power != 1 {
            return Err(Error::InvalidInput(format!(
                "powers of {g} do not cycle modulo {q}"
            )));
        }
        Ok(Self { q, g, dlog, exp })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Order of the multiplicative group, q − 1.
    pub fn group_order(&self) -> u64 {
        self.q - 1
    }

    /// Reduces any integer into [0, q).
    #[inline]
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }

    /// Discrete log of `n mod q`, or `None` when q | n.
    #[inline]
    pub fn dlog(&self, n: u64) -> Option<u64> {
        let r = (n % self.q) as usize;
        (r != 0).then(|| self.dlog[r] as u64)
    }

    /// g^k mod q.
    #[inline]
    pub fn power(&self, k: u64) -> u64 {
        self.exp[(k % (self.q - 1)) as usize] as u64
    }

    /// Inverse of `n mod q` through the tables: n⁻¹ = g^(−dlog n).
    pub fn inverse(&self, n: u64) -> Option<u64> {
        self.dlog(n)
            .map(|k| self.power((self.q - 1 - k) % (self.q - 1)))
    }

    pub fn character(&self, index: u64) -> Result<Character<'_>> {
        Character::new(self, index)
    }

    /// The quadratic (Legendre) character.
    pub fn legendre(&self) -> Character<'_> {
        Character {
            modulus: self,
            index: (self.q - 1) / 2,
        }
    }

    /// Smallest positive index of a character of exact order `d`, if d | q−1.
    pub fn character_of_order(&self, d: u64) -> Option<Character<'_>> {
        let order = self.q - 1;
        if d == 0 || !order.is_multiple_of(d) {
            return None;
        }
        Some(Character {
            modulus: self,
            index: order / d,
        })
    }
}

/// Value of a character: zero, or the root of unity e(num/den).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharValue {
    Zero,
    Root { num: u64, den: u64 },
}

impl CharValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn magnitude(&self) -> u32 {
        match self {
            CharValue::Zero => 0,
            CharValue::Root { .. } => 1,
        }
    }

    /// Projection to (re, im).
    pub fn to_complex(&self) -> (f64, f64) {
        match *self {
            CharValue::Zero => (0.0, 0.0),
            CharValue::Root { num, den } => {
                let (s, c) = (TAU * num as f64 / den as f64).sin_cos();
                (c, s)
            }
        }
    }

    /// Integer form for values in {−1, 0, 1}.
    pub fn to_sign(&self) -> Option<i64> {
        match *self {
            CharValue::Zero => Some(0),
            CharValue::Root { num: 0, .. } => Some(1),
            CharValue::Root { num, den } if 2 * num == den => Some(-1),
            CharValue::Root { .. } => None,
        }
    }

    /// Product of two values of the same modulus.
    pub fn mul(&self, other: &CharValue) -> CharValue {
        match (*self, *other) {
            (CharValue::Root { num: a, den }, CharValue::Root { num: b, .. }) => CharValue::Root {
                num: (a + b) % den,
                den,
            },
            _ => CharValue::Zero,
        }
    }

    pub fn pow(&self, k: u64) -> CharValue {
        match *self {
            CharValue::Zero if k == 0 => CharValue::Root { num: 0, den: 1 },
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => CharValue::Root {
                num: ((num as u128 * k as u128) % den as u128) as u64,
                den,
            },
        }
    }

    pub fn conj(&self) -> CharValue {
        match *self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => CharValue::Root {
                num: (den - num) % den,
                den,
            },
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CharValue::Root { num: 0, .. })
    }
}

/// A multiplicative character modulo q, identified by its index m.
#[derive(Debug, Clone, Copy)]
pub struct Character<'m> {
    modulus: &'m PrimeModulus,
    index: u64,
}

impl<'m> Character<'m> {
    pub fn new(modulus: &'m PrimeModulus, index: u64) -> Result<Self> {
        if index > modulus.q - 2 {
            return Err(Error::InvalidCharacterIndex {
                index,
                q: modulus.q,
            });
        }
        Ok(Self { modulus, index })
    }

    pub fn modulus(&self) -> &'m PrimeModulus {
        self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// (q−1)/gcd(m, q−1).
    pub fn order(&self) -> u64 {
        let n = self.modulus.q - 1;
        n / self.index.gcd(&n)
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    pub fn is_quadratic(&self) -> bool {
        self.index == (self.modulus.q - 1) / 2
    }

    /// The character of index q−1−m, i.e. the complex conjugate.
    pub fn conjugate(&self) -> Character<'m> {
        let n = self.modulus.q - 1;
        Character {
            modulus: self.modulus,
            index: (n - self.index) % n,
        }
    }

    /// χ(n) for any integer n.
    pub fn eval(&self, n: i64) -> CharValue {
        self.eval_residue(self.modulus.reduce(n))
    }

    /// χ(n) for n already reduced or nonnegative.
    #[inline]
    pub fn eval_residue(&self, n: u64) -> CharValue {
        let den = self.modulus.q - 1;
        match self.modulus.dlog(n) {
            None => CharValue::Zero,
            Some(k) => CharValue::Root {
                num: (self.index * k) % den,
                den,
            },
        }
    }

    /// Integer value in {−1, 0, 1}; only meaningful for the quadratic character.
    #[inline]
    pub(crate) fn sign_residue(&self, n: u64) -> i64 {
        match self.modulus.dlog(n) {
            None => 0,
            Some(k) if k % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    /// Σ_{M<n≤M+N} χ(n) by direct summation.
    pub fn interval_sum(&self, m: i64, n: u64) -> ComplexSum {
        let q = self.modulus.q;
        let start = self.modulus.reduce(m);
        let residues = (0..n).map(move |i| (start + 1 + i % q) % q);
        if self.is_quadratic() {
            let total: i64 = residues.map(|r| self.sign_residue(r)).sum();
            ComplexSum::exact(total)
        } else {
            let (re, im) = residues.fold((0.0, 0.0), |(re, im), r| {
                let (c, s) = self.eval_residue(r).to_complex();
                (re + c, im + s)
            });
            ComplexSum::float(re, im)
        }
    }
}

/// A character sum with its optional exact integer value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexSum {
    pub re: f64,
    pub im: f64,
    /// Present iff the sum came from the quadratic character.
    pub exact: Option<i64>,
}

impl ComplexSum {
    pub fn exact(value: i64) -> Self {
        Self {
            re: value as f64,
            im: 0.0,
            exact: Some(value),
        }
    }

    pub fn float(re: f64, im: f64) -> Self {
        Self {
            re,
            im,
            exact: None,
        }
    }

    pub fn zero() -> Self {
        Self::float(0.0, 0.0)
    }

    pub fn abs(&self) -> f64 {
        match self.exact {
            Some(v) => v.unsigned_abs() as f64,
            None => self.re.hypot(self.im),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

#[derive(Clone)]
enum PrefixData {
    Exact(Vec<i32>),
    Float(Vec<[f64; 2]>),
}

/// Cumulative sums S_k = Σ_{n=1..k} χ(n), k ∈ [0, q], of a nontrivial character.
#[derive(Clone)]
pub struct PrefixTable<'m> {
    character: Character<'m>,
    data: PrefixData,
}

impl fmt::Debug for PrefixTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrefixTable")
            .field("character", &self.character)
            .field("exact", &self.is_exact())
            .field("len", &self.len())
            .finish()
    }
}

impl<'m> PrefixTable<'m> {
    pub fn new(character: Character<'m>) -> Result<Self> {
        if character.is_trivial() {
            return Err(Error::TrivialCharacter);
        }
        let q = character.q() as usize;
        let data = if character.is_quadratic() {
            let mut sums = Vec::with_capacity(q + 1);
            let mut acc = 0i32;
            sums.push(0);
            for n in 1..=q as u64 {
                acc += character.sign_residue(n) as i32;
                sums.push(acc);
            }
            PrefixData::Exact(sums)
        } else {
            let mut sums = Vec::with_capacity(q + 1);
            let (mut re, mut im) = (0.0f64, 0.0f64);
            sums.push([0.0, 0.0]);
            for n in 1..=q as u64 {
                let (c, s) = character.eval_residue(n).to_complex();
                re += c;
                im += s;
                sums.push([re, im]);
            }
            PrefixData::Float(sums)
        };
        Ok(Self { character, data })
    }

    pub fn character(&self) -> Character<'m> {
        self.character
    }

    pub fn q(&self) -> u64 {
        self.character.q()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.data, PrefixData::Exact(_))
    }

    /// Number of entries, q + 1.
    pub fn len(&self) -> usize {
        match &self.data {
            PrefixData::Exact(s) => s.len(),
            PrefixData::Float(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// S_k for k ∈ [0, q].
    pub fn at(&self, k: usize) -> ComplexSum {
        match &self.data {
            PrefixData::Exact(s) => ComplexSum::exact(s[k] as i64),
            PrefixData::Float(s) => ComplexSum::float(s[k][0], s[k][1]),
        }
    }

    /// Σ_{v=1..V} χ(λ+v) for 1 ≤ V ≤ q.
    pub fn window_sum(&self, lambda: i64, v: u64) -> Result<ComplexSum> {
        let q = self.q();
        if v == 0 || v > q {
            return Err(Error::WindowTooLarge { v, q });
        }
        let start = self.character.modulus().reduce(lambda);
        Ok(match &self.data {
            PrefixData::Exact(_) => ComplexSum::exact(self.window_exact(start, v)),
            PrefixData::Float(_) => {
                let [re, im] = self.window_float(start, v);
                ComplexSum::float(re, im)
            }
        })
    }

    /// Exact window sum; `start < q`, `v ≤ q`, quadratic tables only.
    #[inline]
    pub(crate) fn window_exact(&self, start: u64, v: u64) -> i64 {
        let PrefixData::Exact(s) = &self.data else {
            unreachable!("window_exact on a floating-point table")
        };
        let q = s.len() - 1;
        let a = start as usize;
        let b = a + v as usize;
        if b <= q {
            (s[b] - s[a]) as i64
        } else {
            (s[q] - s[a] + s[b - q]) as i64
        }
    }

    /// Floating window sum; `start < q`, `v ≤ q`.
    #[inline]
    pub(crate) fn window_float(&self, start: u64, v: u64) -> [f64; 2] {
        match &self.data {
            PrefixData::Exact(_) => [self.window_exact(start, v) as f64, 0.0],
            PrefixData::Float(s) => {
                let q = s.len() - 1;
                let a = start as usize;
                let b = a + v as usize;
                if b <= q {
                    [s[b][0] - s[a][0], s[b][1] - s[a][1]]
                } else {
                    [
                        s[q][0] - s[a][0] + s[b - q][0],
                        s[q][1] - s[a][1] + s[b - q][1],
                    ]
                }
            }
        }
    }

    /// Σ_{M<n≤M+N} χ(n) for any N, using whole periods plus one window.
    pub fn interval_sum(&self, m: i64, n: u64) -> ComplexSum {
        let q = self.q();
        let periods = n / q;
        let rest = n % q;
        let full = self.at(q as usize);
        let window = if rest == 0 {
            match &self.data {
                PrefixData::Exact(_) => ComplexSum::exact(0),
                PrefixData::Float(_) => ComplexSum::zero(),
            }
        } else {
            let start = self.character.modulus().reduce(m);
            match &self.data {
                PrefixData::Exact(_) => ComplexSum::exact(self.window_exact(start, rest)),
                PrefixData::Float(_) => {
                    let [re, im] = self.window_float(start, rest);
                    ComplexSum::float(re, im)
                }
            }
        };
        match (full.exact, window.exact) {
            (Some(f), Some(w)) => ComplexSum::exact(f * periods as i64 + w),
            _ => ComplexSum::float(
                full.re * periods as f64 + window.re,
                full.im * periods as f64 + window.im,
            ),
        }
    }

    /// max over all intervals (M, M+N] of |Σ χ(n)|.
    ///
    /// Every interval sum is a difference S_b − S_a of two table entries, so
    /// the maximum is the diameter of the point set {S_0, …, S_{q−1}}: max − min
    /// on the exact path, the convex-hull diameter on the complex path.
    pub fn max_interval_abs(&self) -> f64 {
        match &self.data {
            PrefixData::Exact(s) => {
                let body = &s[..s.len() - 1];
                let max = body.iter().copied().max().unwrap_or(0);
                let min = body.iter().copied().min().unwrap_or(0);
                (max - min) as f64
            }
            PrefixData::Float(s) => hull_diameter(&s[..s.len() - 1]),
        }
    }

    /// Exact variant of [`Self::max_interval_abs`] for quadratic tables.
    pub fn max_interval_exact(&self) -> Option<i64> {
        match &self.data {
            PrefixData::Exact(s) => {
                let body = &s[..s.len() - 1];
                let max = body.iter().copied().max().unwrap_or(0);
                let min = body.iter().copied().min().unwrap_or(0);
                Some((max - min) as i64)
            }
            PrefixData::Float(_) => None,
        }
    }
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Largest pairwise distance in a planar point set (monotone-chain hull, then all hull pairs).
fn hull_diameter(points: &[[f64; 2]]) -> f64 {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 2 {
        return 0.0;
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let mut best = 0.0f64;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i + 1..] {
            best = best.max((a[0] - b[0]).hypot(a[1] - b[1]));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler_criterion(n: u64, q: u64) -> i64 {
        match mod_pow(n, (q - 1) / 2, q) {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    fn order_by_enumeration(g: u64, q: u64) -> u64 {
        let mut x = g % q;
        let mut k = 1;
        while x != 1 {
            x = x * g % q;
            k += 1;
        }
        k
    }

    #[test]
    fn primitive_roots_match_exhaustive_order() {
        assert_eq!(find_primitive_root(3).unwrap(), 2);
        assert_eq!(find_primitive_root(7).unwrap(), 3);
        assert_eq!(find_primitive_root(4), Err(Error::CompositeModulus(4)));
        for q in (3..500).filter(|&q| is_prime(q)) {
            let g = find_primitive_root(q).unwrap();
            assert_eq!(order_by_enumeration(g, q), q - 1, "q = {q}");
            for h in 2..g {
                assert!(
                    order_by_enumeration(h, q) < q - 1,
                    "q = {q}, smaller root {h}"
                );
            }
        }
    }

    #[test]
    fn dlog_table_mod_7() {
        let m = PrimeModulus::new(7).unwrap();
        assert_eq!(m.generator(), 3);
        let dlogs: Vec<u64> = (1..7).map(|n| m.dlog(n).unwrap()).collect();
        assert_eq!(dlogs, vec![0, 2, 1, 4, 5, 3]);
        assert_eq!(m.dlog(7), None);
    }

    #[test]
    fn dlog_table_mod_3() {
        let m = PrimeModulus::new(3).unwrap();
        assert_eq!(m.dlog(1), Some(0));
        assert_eq!(m.dlog(2), Some(1));
    }

    #[test]
    fn build_modulus_rejects_composites_and_oversized() {
        let q = (1u64 << 26) + 1;
        assert_eq!(
            PrimeModulus::new(q).unwrap_err(),
            Error::CompositeModulus(q)
        );
        assert_eq!(
            PrimeModulus::new(1).unwrap_err(),
            Error::CompositeModulus(1)
        );
        assert!(matches!(
            PrimeModulus::new(2).unwrap_err(),
            Error::InvalidInput(_)
        ));
        assert_eq!(
            PrimeModulus::with_limit(101, 100).unwrap_err(),
            Error::TableLimitExceeded { q: 101, limit: 100 }
        );
    }

    #[test]
    fn dlog_is_a_bijection() {
        for q in [5u64, 101, 1009] {
            let m = PrimeModulus::new(q).unwrap();
            let mut seen = vec![false; q as usize - 1];
            for n in 1..q {
                let k = m.dlog(n).unwrap() as usize;
                assert!(!seen[k]);
                seen[k] = true;
                assert_eq!(m.power(k as u64), n);
                assert_eq!(m.inverse(n).unwrap() * n % q, 1);
                assert_eq!(m.inverse(n), mod_inverse(n, q));
            }
            assert_eq!(m.dlog(m.generator()), Some(1));
        }
    }

    #[test]
    fn legendre_values_mod_7() {
        let m = PrimeModulus::new(7).unwrap();
        let chi = m.legendre();
        assert_eq!(chi.index(), 3);
        assert_eq!(chi.eval(3).to_sign(), Some(-1));
        assert_eq!(chi.eval(2).to_sign(), Some(1));
        for other in 0..6 {
            assert_eq!(m.character(other).unwrap().eval(14), CharValue::Zero);
        }
        for n in -20..20 {
            assert_eq!(
                chi.eval(n).to_sign(),
                Some(euler_criterion(n.rem_euclid(7) as u64, 7))
            );
        }
    }

    #[test]
    fn character_index_range_checked() {
        let m = PrimeModulus::new(7).unwrap();
        assert!(m.character(5).is_ok());
        assert_eq!(
            m.character(6).unwrap_err(),
            Error::InvalidCharacterIndex { index: 6, q: 7 }
        );
    }

    #[test]
    fn orders_divide_group_order() {
        let m = PrimeModulus::new(13).unwrap();
        let orders: Vec<u64> = (0..12).map(|i| m.character(i).unwrap().order()).collect();
        assert_eq!(orders, vec![1, 12, 6, 4, 3, 12, 2, 12, 3, 4, 6, 12]);
        assert_eq!(m.character_of_order(3).unwrap().order(), 3);
        assert!(m.character_of_order(5).is_none());
    }

    #[test]
    fn interval_sum_examples() {
        let m = PrimeModulus::new(7).unwrap();
        let chi = m.legendre();
        assert_eq!(chi.interval_sum(0, 7).exact, Some(0));
        assert_eq!(chi.interval_sum(0, 3).exact, Some(1));
        for idx in 0..6 {
            let s = m.character(idx).unwrap().interval_sum(5, 0);
            assert_eq!(s.abs(), 0.0);
        }
        let cubic = m.character_of_order(3).unwrap();
        assert!(cubic.interval_sum(-4, 7).abs() < 7.0 * SUM_EPSILON);
        assert_eq!(cubic.interval_sum(-4, 7).exact, None);
    }

    #[test]
    fn prefix_table_mod_5() {
        let m = PrimeModulus::new(5).unwrap();
        let t = PrefixTable::new(m.legendre()).unwrap();
        let s: Vec<i64> = (0..t.len()).map(|k| t.at(k).exact.unwrap()).collect();
        assert_eq!(s, vec![0, 1, 0, -1, 0, 0]);
        assert_eq!(
            PrefixTable::new(m.character(0).unwrap()).unwrap_err(),
            Error::TrivialCharacter
        );
    }

    #[test]
    fn window_sum_examples() {
        let m = PrimeModulus::new(5).unwrap();
        let t = PrefixTable::new(m.legendre()).unwrap();
        assert_eq!(t.window_sum(0, 2).unwrap().exact, Some(0));
        assert_eq!(t.window_sum(4, 2).unwrap().exact, Some(1));
        for lambda in -6..6 {
            assert_eq!(t.window_sum(lambda, 5).unwrap().exact, Some(0));
        }
        assert_eq!(
            t.window_sum(0, 6).unwrap_err(),
            Error::WindowTooLarge { v: 6, q: 5 }
        );
        assert!(t.window_sum(0, 0).is_err());

        let m = PrimeModulus::new(13).unwrap();
        let t = PrefixTable::new(m.character(1).unwrap()).unwrap();
        for lambda in 0..13 {
            assert!(t.window_sum(lambda, 13).unwrap().abs() < 13.0 * SUM_EPSILON);
        }
    }

    #[test]
    fn conjugate_character_values() {
        let m = PrimeModulus::new(31).unwrap();
        for idx in 1..30 {
            let chi = m.character(idx).unwrap();
            let bar = chi.conjugate();
            assert_eq!(bar.index(), 30 - idx);
            for n in 0..31 {
                assert_eq!(bar.eval(n), chi.eval(n).conj());
            }
        }
    }

    #[test]
    fn max_interval_matches_quadratic_brute_force() {
        for q in [3u64, 5, 7, 11, 101, 211] {
            let m = PrimeModulus::new(q).unwrap();
            let chi = m.legendre();
            let t = PrefixTable::new(chi).unwrap();
            let mut best = 0i64;
            for start in 0..q as i64 {
                for len in 0..=q {
                    best = best.max(chi.interval_sum(start, len).exact.unwrap().abs());
                }
            }
            assert_eq!(t.max_interval_exact(), Some(best), "q = {q}");
        }
    }

    #[test]
    fn max_interval_matches_complex_brute_force() {
        let m = PrimeModulus::new(61).unwrap();
        for idx in [1u64, 4, 12, 20] {
            let t = PrefixTable::new(m.character(idx).unwrap()).unwrap();
            let mut best = 0.0f64;
            for a in 0..61 {
                for len in 0..=61 {
                    best = best.max(t.interval_sum(a, len).abs());
                }
            }
            assert!((t.max_interval_abs() - best).abs() < 1e-9, "index {idx}");
        }
    }

    #[test]
    fn table_interval_sum_handles_multiple_periods() {
        let m = PrimeModulus::new(11).unwrap();
        let chi = m.legendre();
        let t = PrefixTable::new(chi).unwrap();
        for start in -15..15 {
            for len in 0..40 {
                assert_eq!(t.interval_sum(start, len), chi.interval_sum(start, len));
            }
        }
    }
}
