//! Experiment configuration: defaults, a `key = value` file, and the parsers
//! for prime, length and starting-point lists.

use std::fmt;
use std::path::Path;

use burgess_core::bounds::DEFAULT_GRH_DELTA;
use burgess_core::chars::is_prime;
use burgess_core::sieve::{DEFAULT_GUARD_EXPONENT, DEFAULT_SIEVE_A};
use burgess_core::suite::DEFAULT_SEED;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A user-facing input error; the CLI exits with status 2 on these.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<burgess_core::Error> for InputError {
    fn from(e: burgess_core::Error) -> Self {
        InputError(e.to_string())
    }
}

pub type InputResult<T> = std::result::Result<T, InputError>;

fn bad<T>(msg: impl Into<String>) -> InputResult<T> {
    Err(InputError(msg.into()))
}

/// Every setting an experiment can take. All fields have defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Prime list `101,1009` or inclusive range `100..200` (primes inside it).
    pub primes: String,
    /// `legendre`, `index:m` or `orders:d` (every nontrivial character whose order divides d).
    pub chars: String,
    /// Comma-separated r values.
    pub r: String,
    /// Comma-separated lengths; each is an integer or `q^x`.
    pub n: String,
    /// Starting points: a list, an inclusive range `a..b`, `random:k` or `all`.
    pub m: String,
    pub z: Option<f64>,
    pub u: Option<u64>,
    /// Window length; `auto` means ⌊r q^{1/2r}⌋.
    pub v: String,
    pub a: f64,
    pub c: f64,
    pub delta: f64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            primes: "101".into(),
            chars: "legendre".into(),
            r: "2".into(),
            n: "q^0.5".into(),
            m: "0".into(),
            z: None,
            u: None,
            v: "auto".into(),
            a: DEFAULT_SIEVE_A,
            c: DEFAULT_GUARD_EXPONENT,
            delta: DEFAULT_GRH_DELTA,
            seed: DEFAULT_SEED,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> InputResult<T> {
    value
        .trim()
        .parse()
        .map_err(|_| InputError(format!("invalid value for {key}: '{value}'")))
}

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> InputResult<()> {
        let value = value.trim();
        match key.trim() {
            "primes" | "q" => self.primes = value.into(),
            "chars" | "char" => self.chars = value.into(),
            "r" => self.r = value.into(),
            "n" | "N" => self.n = value.into(),
            "m" | "M" => self.m = value.into(),
            "z" => self.z = Some(parse_num("z", value)?),
            "u" | "U" => self.u = Some(parse_num("U", value)?),
            "v" | "V" => self.v = value.into(),
            "a" | "A" => self.a = parse_num("A", value)?,
            "c" | "C" => self.c = parse_num("C", value)?,
            "delta" => self.delta = parse_num("delta", value)?,
            "seed" => self.seed = parse_num("seed", value)?,
            other => return bad(format!("unknown config key '{other}'")),
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> InputResult<Self> {
        let mut cfg = Self::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return bad(format!("config line {}: expected key = value", no + 1));
            };
            cfg.set(key, value)
                .map_err(|e| InputError(format!("config line {}: {e}", no + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> InputResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Parses a prime list or an inclusive range of candidates.
pub fn parse_primes(spec: &str) -> InputResult<Vec<u64>> {
    let spec = spec.trim();
    let primes: Vec<u64> = if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u64 = parse_num("primes", lo)?;
        let hi: u64 = parse_num("primes", hi)?;
        if hi < lo {
            return bad(format!("empty prime range '{spec}'"));
        }
        (lo.max(3)..=hi).filter(|&p| is_prime(p)).collect()
    } else {
        let list = spec
            .split(',')
            .map(|s| parse_num::<u64>("primes", s))
            .collect::<InputResult<Vec<_>>>()?;
        if let Some(&bad_q) = list.iter().find(|&&q| !is_prime(q) || q < 3) {
            return bad(format!("q = {bad_q} is not an odd prime"));
        }
        list
    };
    if primes.is_empty() {
        return bad(format!("no primes in '{spec}'"));
    }
    let mut primes = primes;
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

pub fn parse_r_values(spec: &str) -> InputResult<Vec<u32>> {
    let mut rs = spec
        .split(',')
        .map(|s| parse_num::<u32>("r", s))
        .collect::<InputResult<Vec<_>>>()?;
    if rs.contains(&0) {
        return bad("r must be positive");
    }
    rs.sort_unstable();
    rs.dedup();
    Ok(rs)
}

/// Evaluates a length list at q; `q^x` means ⌊q^x⌋.
pub fn parse_lengths(spec: &str, q: u64) -> InputResult<Vec<u64>> {
    spec.split(',')
        .map(|item| {
            let item = item.trim();
            let n = if let Some(exp) = item.strip_prefix("q^") {
                let x: f64 = parse_num("N", exp)?;
                if !(x > 0.0 && x.is_finite()) {
                    return bad(format!("invalid exponent in '{item}'"));
                }
                (q as f64).powf(x).floor() as u64
            } else {
                parse_num("N", item)?
            };
            if n == 0 {
                return bad(format!("N = '{item}' evaluates to 0 at q = {q}"));
            }
            Ok(n)
        })
        .collect()
}

/// Expands a starting-point list at q.
pub fn parse_starts(spec: &str, q: u64, seed: u64) -> InputResult<Vec<i64>> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok((0..q as i64).collect());
    }
    if let Some(k) = spec.strip_prefix("random:") {
        let k: usize = parse_num("M", k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ q.rotate_left(17));
        return Ok((0..k).map(|_| rng.gen_range(0..q) as i64).collect());
    }
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: i64 = parse_num("M", lo)?;
        let hi: i64 = parse_num("M", hi)?;
        if hi < lo {
            return bad(format!("empty range '{spec}'"));
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',').map(|s| parse_num("M", s)).collect()
}

/// Which characters to evaluate at each prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharSpec {
    Legendre,
    Index(u64),
    OrdersDividing(u64),
}

impl CharSpec {
    pub fn parse(spec: &str) -> InputResult<Self> {
        let spec = spec.trim();
        if spec == "legendre" {
            return Ok(CharSpec::Legendre);
        }
        if let Some(m) = spec.strip_prefix("index:") {
            return Ok(CharSpec::Index(parse_num("chars", m)?));
        }
        if let Some(d) = spec.strip_prefix("orders:") {
            let d: u64 = parse_num("chars", d)?;
            if d < 2 {
                return bad("orders:d needs d ≥ 2");
            }
            return Ok(CharSpec::OrdersDividing(d));
        }
        bad(format!("unknown character spec '{spec}'"))
    }

    /// Character indices at q, in increasing order.
    pub fn indices(&self, q: u64) -> InputResult<Vec<u64>> {
        match *self {
            CharSpec::Legendre => Ok(vec![(q - 1) / 2]),
            CharSpec::Index(m) => {
                if m == 0 || m > q - 2 {
                    return bad(format!("character index {m} outside [1, {}]", q - 2));
                }
                Ok(vec![m])
            }
            CharSpec::OrdersDividing(d) => {
                let order = q - 1;
                Ok((1..order)
                    .filter(|&m| {
                        let ord = order / gcd(m, order);
                        d % ord == 0
                    })
                    .collect())
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The dlog-table cap, from BURGESS_TABLE_LIMIT when set.
pub fn table_limit() -> InputResult<u64> {
    match std::env::var("BURGESS_TABLE_LIMIT") {
        Ok(v) => parse_num("BURGESS_TABLE_LIMIT", &v),
        Err(_) => Ok(burgess_core::chars::DEFAULT_TABLE_LIMIT),
    }
}
