//! Subcommand implementations. Each one expands the configuration into cells,
//! evaluates them (in parallel where cells are independent) and returns records.

use std::time::Instant;

use burgess_core::bounds::{
    all_bounds, bound_value, derive_params, extremal_scan, holder_chain, holder_chain_with,
    least_nonresidue, log_power_chain_holds, nonresidue_max_gap, polya_vinogradov_ratio,
    BoundVariant,
};
use burgess_core::chars::{PrefixTable, PrimeModulus};
use burgess_core::congruence::{
    brute_force_congruence_count, congruence_count_with, pair_collision_count, CollisionInstance,
};
use burgess_core::moments::{moment_sum, moment_sum_parallel, weil_window};
use burgess_core::sieve::{
    count_rough_divisible, divisibility_ratio, mertens_v, rough_ratio, Primorial, RoughSet,
    SpfTable,
};
use burgess_core::suite::{run_suite_timed, SuiteScale};
use burgess_core::Error;
use rayon::prelude::*;

use crate::config::{
    parse_lengths, parse_primes, parse_r_values, parse_starts, table_limit, CharSpec,
    ExperimentConfig, InputError, InputResult,
};
use crate::record::ResultRecord;

/// Every library operation and the one subcommand that exposes it.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("find_primitive_root", "sum"),
    ("build_modulus", "sum"),
    ("char_eval", "sum"),
    ("interval_sum", "sum"),
    ("window_sum", "sum"),
    ("prefix_table", "scan"),
    ("extremal_scan", "scan"),
    ("moment_sum", "moments"),
    ("weil_bound", "moments"),
    ("moment_check", "moments"),
    ("build_spf", "sieve"),
    ("primorial_P", "sieve"),
    ("mertens_V", "sieve"),
    ("count_rough_divisible", "sieve"),
    ("enumerate_rough", "rough"),
    ("rough_ratio", "rough"),
    ("collision_distribution", "congruence"),
    ("congruence_count", "congruence"),
    ("brute_force_congruence_count", "congruence"),
    ("pair_collision_count", "congruence"),
    ("derive_params", "holder"),
    ("holder_chain", "holder"),
    ("bound_value", "bounds"),
    ("least_nonresidue", "nonresidue"),
    ("nonresidue_max_gap", "nonresidue"),
    ("run_suite", "verify"),
];

/// Evaluation context shared by all cells of one invocation.
pub struct Ctx {
    pub config: ExperimentConfig,
    pub hash: String,
    pub table_limit: u64,
}

impl Ctx {
    pub fn new(config: ExperimentConfig) -> InputResult<Self> {
        Ok(Self {
            hash: config.hash(),
            table_limit: table_limit()?,
            config,
        })
    }

    fn record(&self, command: &str) -> ResultRecord {
        ResultRecord::new(command, &self.hash)
    }

    fn modulus(&self, q: u64) -> InputResult<PrimeModulus> {
        Ok(PrimeModulus::with_limit(q, self.table_limit)?)
    }

    fn primes(&self) -> InputResult<Vec<u64>> {
        parse_primes(&self.config.primes)
    }

    fn chars(&self) -> InputResult<CharSpec> {
        CharSpec::parse(&self.config.chars)
    }

    fn rs(&self) -> InputResult<Vec<u32>> {
        parse_r_values(&self.config.r)
    }

    fn window(&self, q: u64, r: u32) -> InputResult<u64> {
        match self.config.v.trim() {
            "auto" => Ok(weil_window(q, r)),
            other => other
                .parse()
                .map_err(|_| InputError(format!("invalid V '{other}'"))),
        }
    }

    fn rough_level(&self, command: &str) -> InputResult<(f64, u64)> {
        match (self.config.z, self.config.u) {
            (Some(z), Some(u)) => Ok((z, u)),
            _ => Err(InputError(format!("{command} needs both --z and --U"))),
        }
    }
}

/// Evaluates cells in parallel, keeping the first error in cell order.
fn run_cells<T: Sync>(
    cells: Vec<T>,
    f: impl Fn(&T) -> InputResult<ResultRecord> + Sync,
) -> InputResult<Vec<ResultRecord>> {
    cells
        .par_iter()
        .map(|cell| {
            let started = Instant::now();
            f(cell).map(|mut rec| {
                rec.timing_ms = started.elapsed().as_secs_f64() * 1e3;
                rec
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn char_cells(ctx: &Ctx) -> InputResult<Vec<(u64, u64)>> {
    let spec = ctx.chars()?;
    let mut cells = Vec::new();
    for q in ctx.primes()? {
        for idx in spec.indices(q)? {
            cells.push((q, idx));
        }
    }
    Ok(cells)
}

fn within(abs: f64, n: u64) -> bool {
    abs <= n as f64 * (1.0 + 1e-9)
}

pub struct SumOptions {
    pub eval: Vec<i64>,
    pub window: Option<u64>,
}

pub fn sum(ctx: &Ctx, opts: &SumOptions) -> InputResult<Vec<ResultRecord>> {
    let mut cells = Vec::new();
    for (q, idx) in char_cells(ctx)? {
        for n in parse_lengths(&ctx.config.n, q)? {
            for m in parse_starts(&ctx.config.m, q, ctx.config.seed)? {
                cells.push((q, idx, n, m));
            }
        }
    }
    run_cells(cells, |&(q, idx, n, m)| {
        let modulus = ctx.modulus(q)?;
        let chi = modulus.character(idx)?;
        let s = chi.interval_sum(m, n);
        let mut rec = ctx
            .record("sum")
            .input("q", q)
            .input("char_index", idx)
            .input("N", n)
            .input("M", m)
            .output("generator", modulus.generator())
            .output("order", chi.order())
            .output("sum", s)
            .output("abs", s.abs());
        let mut pass = within(s.abs(), n);
        for &x in &opts.eval {
            rec = rec.output(&format!("eval_{x}"), chi.eval(x));
        }
        if let Some(v) = opts.window {
            let table = PrefixTable::new(chi)?;
            let w = table.window_sum(m, v)?;
            pass &= within(w.abs(), v);
            rec = rec.input("V", v).output("window", w);
        }
        rec.pass = Some(pass);
        Ok(rec)
    })
}

pub fn scan(ctx: &Ctx, exhaustive: bool) -> InputResult<Vec<ResultRecord>> {
    let rs = ctx.rs()?;
    let mut cells = Vec::new();
    for (q, idx) in char_cells(ctx)? {
        for &r in &rs {
            for n in parse_lengths(&ctx.config.n, q)? {
                cells.push((q, idx, r, n));
            }
        }
    }
    run_cells(cells, |&(q, idx, r, n)| {
        let modulus = ctx.modulus(q)?;
        let table = PrefixTable::new(modulus.character(idx)?)?;
        let starts = parse_starts(&ctx.config.m, q, ctx.config.seed)?;
        let result = extremal_scan(&table, n, &starts, r, ctx.config.delta)?;
        let mut rec = ctx
            .record("scan")
            .input("q", q)
            .input("char_index", idx)
            .input("r", r)
            .input("N", n)
            .input("M_spec", &ctx.config.m)
            .input("delta", ctx.config.delta)
            .outputs_from(&result);
        rec.pass = Some(within(result.max_abs_sum, n));
        if exhaustive {
            rec = rec
                .output("max_interval_abs", table.max_interval_abs())
                .output("polya_vinogradov_ratio", polya_vinogradov_ratio(&table));
        }
        Ok(rec)
    })
}

pub fn moments(ctx: &Ctx, parallel: bool) -> InputResult<Vec<ResultRecord>> {
    let rs = ctx.rs()?;
    let mut cells = Vec::new();
    for (q, idx) in char_cells(ctx)? {
        for &r in &rs {
            cells.push((q, idx, r, ctx.window(q, r)?));
        }
    }
    let eval = |&(q, idx, r, v): &(u64, u64, u32, u64)| -> InputResult<ResultRecord> {
        let modulus = ctx.modulus(q)?;
        let table = PrefixTable::new(modulus.character(idx)?)?;
        let report = if parallel {
            moment_sum_parallel(&table, v, r)?
        } else {
            moment_sum(&table, v, r)?
        };
        let mut rec = ctx
            .record("moments")
            .input("q", q)
            .input("char_index", idx)
            .input("r", r)
            .input("V", v)
            .outputs_from(&report);
        rec.pass = Some(report.all_pass());
        Ok(rec)
    };
    if parallel {
        // The moment pass itself is parallel; run cells one at a time.
        cells
            .iter()
            .map(|cell| {
                let started = Instant::now();
                eval(cell).map(|mut rec| {
                    rec.timing_ms = started.elapsed().as_secs_f64() * 1e3;
                    rec
                })
            })
            .collect()
    } else {
        run_cells(cells, eval)
    }
}

fn parse_list_u64(spec: &str, key: &str) -> InputResult<Vec<u64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| InputError(format!("invalid {key} '{s}'")))
        })
        .collect()
}

pub fn sieve(ctx: &Ctx, ts: &str, w: Option<f64>) -> InputResult<Vec<ResultRecord>> {
    let (z, upper) = ctx.rough_level("sieve")?;
    let ts = parse_list_u64(ts, "t")?;
    let set = RoughSet::new(z, upper)?;
    let primorial = Primorial::new(z);
    let mertens = mertens_v(w.unwrap_or(z));
    let spf = if upper >= 2 {
        Some(SpfTable::build(upper)?)
    } else {
        None
    };
    ts.iter()
        .map(|&t| {
            let started = Instant::now();
            if t == 0 {
                return Err(InputError("t must be positive".into()));
            }
            let count = count_rough_divisible(z, upper, t)?;
            let filtered = set.members().iter().filter(|&&u| u % t == 0).count() as u64;
            let ratio = divisibility_ratio(&set, t, ctx.config.a)?;
            let mut rec = ctx
                .record("sieve")
                .input("z", z)
                .input("U", upper)
                .input("t", t)
                .input("A", ctx.config.a)
                .input("w", mertens.w)
                .output("primorial_primes", &primorial.primes)
                .output(
                    "primorial_product",
                    primorial.product().map(|p| p.to_string()),
                )
                .output("mertens_v", mertens.value)
                .output(
                    "mertens_exact",
                    mertens.exact.map(|(a, b)| format!("{a}/{b}")),
                )
                .output("spf_prime_count", spf.as_ref().map(|s| s.primes().len()))
                .output("count", count)
                .output("branch", ratio.branch)
                .output("reference", ratio.reference)
                .output("ratio", ratio.ratio);
            rec.pass = Some(count == filtered);
            rec.timing_ms = started.elapsed().as_secs_f64() * 1e3;
            Ok(rec)
        })
        .collect()
}

pub fn rough(ctx: &Ctx, members: bool) -> InputResult<Vec<ResultRecord>> {
    let (z, upper) = ctx.rough_level("rough")?;
    let started = Instant::now();
    let ratio = rough_ratio(z, upper, ctx.config.c)?;
    let set = RoughSet::new(z, upper)?;
    let mut rec = ctx
        .record("rough")
        .input("z", z)
        .input("U", upper)
        .input("C", ctx.config.c)
        .output("count", set.count())
        .output("ratio", ratio);
    if members {
        rec = rec.output("members", set.members());
    }
    rec.pass = Some((0.3..=3.0).contains(&ratio));
    rec.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(vec![rec])
}

pub struct CongruenceOptions {
    pub brute: bool,
    pub pair: Option<(u64, u64)>,
}

pub fn congruence(ctx: &Ctx, opts: &CongruenceOptions) -> InputResult<Vec<ResultRecord>> {
    let (z, upper) = ctx.rough_level("congruence")?;
    let rough = RoughSet::new(z, upper)?;
    let mut cells = Vec::new();
    for q in ctx.primes()? {
        for n in parse_lengths(&ctx.config.n, q)? {
            for m in parse_starts(&ctx.config.m, q, ctx.config.seed)? {
                cells.push((q, n, m));
            }
        }
    }
    run_cells(cells, |&(q, n, m)| {
        let inst = CollisionInstance::new(q, m, n, rough.clone(), ctx.config.a)?;
        let modulus = ctx.modulus(q)?;
        let (dist, report) = congruence_count_with(&inst, &modulus)?;
        let mut pass =
            report.i_value == dist.second_moment && dist.first_moment == n * rough.count();
        let mut rec = ctx
            .record("congruence")
            .input("q", q)
            .input("N", n)
            .input("M", m)
            .input("z", z)
            .input("U", upper)
            .input("A", ctx.config.a)
            .output("rough_count", rough.count())
            .output("first_moment", dist.first_moment)
            .output("second_moment", dist.second_moment.to_string())
            .output("occupied_buckets", dist.buckets.len())
            .output("i_value", report.i_value.to_string())
            .output("diagonal", report.diagonal.to_string())
            .output("bound", report.bound)
            .output("ratio", report.ratio)
            .output("hypotheses", report.hypotheses);
        if opts.brute {
            let brute = brute_force_congruence_count(&inst)?;
            pass &= brute == report.i_value;
            rec = rec.output("brute_force", brute.to_string());
        }
        if let Some((u1, u2)) = opts.pair {
            rec = rec
                .input("u1", u1)
                .input("u2", u2)
                .output("pair_count", pair_collision_count(u1, u2, m, n, q));
        }
        rec.pass = Some(pass);
        Ok(rec)
    })
}

pub fn holder(ctx: &Ctx) -> InputResult<Vec<ResultRecord>> {
    let rs = ctx.rs()?;
    let override_set = match (ctx.config.z, ctx.config.u) {
        (Some(z), Some(u)) => Some(RoughSet::new(z, u)?),
        (None, None) => None,
        _ => return Err(InputError("holder overrides need both --z and --U".into())),
    };
    let mut cells = Vec::new();
    for (q, idx) in char_cells(ctx)? {
        for &r in &rs {
            if r < 2 {
                return Err(InputError("holder needs r ≥ 2".into()));
            }
            for n in parse_lengths(&ctx.config.n, q)? {
                for m in parse_starts(&ctx.config.m, q, ctx.config.seed)? {
                    cells.push((q, idx, r, n, m));
                }
            }
        }
    }
    run_cells(cells, |&(q, idx, r, n, m)| {
        let modulus = ctx.modulus(q)?;
        let chi = modulus.character(idx)?;
        let params = derive_params(n, q, r)?;
        let rec = ctx
            .record("holder")
            .input("q", q)
            .input("char_index", idx)
            .input("r", r)
            .input("N", n)
            .input("M", m)
            .output("params", params);
        let result = match &override_set {
            Some(set) => {
                let table = PrefixTable::new(chi)?;
                holder_chain_with(&table, m, n, r, ctx.window(q, r)?, set.clone())
            }
            None => holder_chain(chi, m, n, r),
        };
        match result {
            Ok(report) => {
                let mut rec = rec
                    .input("override", override_set.is_some())
                    .output("degenerate", false)
                    .output("report", report.clone());
                rec.pass = Some(report.pass);
                Ok(rec)
            }
            Err(Error::DegenerateParams { .. }) => {
                let mut rec = rec
                    .input("override", false)
                    .output("degenerate", true)
                    .output("report", Option::<()>::None);
                rec.pass = None;
                Ok(rec)
            }
            Err(e) => Err(e.into()),
        }
    })
}

pub fn bounds(ctx: &Ctx, variants: Option<&str>) -> InputResult<Vec<ResultRecord>> {
    let rs = ctx.rs()?;
    let selected: Option<Vec<BoundVariant>> = variants
        .map(|v| {
            v.split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
        })
        .transpose()?;
    let mut records = Vec::new();
    for q in ctx.primes()? {
        for &r in &rs {
            for n in parse_lengths(&ctx.config.n, q)? {
                let started = Instant::now();
                let reports = match &selected {
                    Some(list) => list
                        .iter()
                        .map(|&v| bound_value(v, n, q, r, ctx.config.delta))
                        .collect::<Result<Vec<_>, _>>()?,
                    None => all_bounds(n, q, r, ctx.config.delta)?,
                };
                let chain = if r >= 2 {
                    Some(log_power_chain_holds(n, q, r)?)
                } else {
                    None
                };
                let in_hypothesis = if r >= 2 {
                    Some(derive_params(n, q, r)?.in_hypothesis)
                } else {
                    None
                };
                for b in reports {
                    let mut rec = ctx
                        .record("bounds")
                        .input("q", q)
                        .input("r", r)
                        .input("N", n)
                        .input("variant", b.variant)
                        .input("delta", b.delta)
                        .output("value", b.value)
                        .output("in_hypothesis", in_hypothesis);
                    rec.pass = chain;
                    rec.timing_ms = started.elapsed().as_secs_f64() * 1e3;
                    records.push(rec);
                }
            }
        }
    }
    Ok(records)
}

pub fn nonresidue(ctx: &Ctx) -> InputResult<Vec<ResultRecord>> {
    run_cells(ctx.primes()?, |&q| {
        let least = least_nonresidue(q)?;
        let gap = nonresidue_max_gap(q)?;
        let qf = q as f64;
        let scale = (qf.powf(0.25) * qf.ln()).ceil();
        let mut rec = ctx
            .record("nonresidue")
            .input("q", q)
            .output("least_nonresidue", least)
            .output("gap", gap.gap)
            .output("gap_start", gap.start)
            .output("gap_constant", gap.gap as f64 / scale);
        rec.pass = Some(least <= gap.start + gap.gap);
        Ok(rec)
    })
}

pub fn verify(ctx: &Ctx, suite: &str) -> InputResult<Vec<ResultRecord>> {
    let scale: SuiteScale = suite.parse()?;
    Ok(run_suite_timed(scale, ctx.config.seed)
        .into_iter()
        .map(|(o, elapsed)| {
            let mut rec = ctx
                .record("verify")
                .input("suite", scale)
                .input("seed", ctx.config.seed)
                .input("criterion", &o.id)
                .output("name", &o.name)
                .output("detail", &o.detail)
                .output("metrics", &o.metrics);
            rec.pass = Some(o.pass);
            rec.timing_ms = elapsed.as_secs_f64() * 1e3;
            rec
        })
        .collect())
}
