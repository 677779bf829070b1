//! `burgess`: experiments on short character sums modulo a prime.

mod commands;
mod config;
mod record;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use commands::{CongruenceOptions, Ctx, SumOptions};
use config::{ExperimentConfig, InputError, InputResult};
use record::{emit, Format, ResultRecord};

#[derive(Debug, Parser)]
#[command(
    name = "burgess",
    version,
    about = "Short character sums, rough-number sieves and moment inequalities modulo a prime"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Experiment configuration file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
struct Common {
    /// Primes: list `101,1009` or inclusive range `100..200`.
    #[arg(long)]
    q: Option<String>,
    /// Use the Legendre character.
    #[arg(long, conflicts_with_all = ["index", "orders"])]
    legendre: bool,
    /// Use the character with this index m.
    #[arg(long, conflicts_with = "orders")]
    index: Option<u64>,
    /// Use every nontrivial character whose order divides d.
    #[arg(long)]
    orders: Option<u64>,
    /// r values, comma separated.
    #[arg(long = "r")]
    r: Option<String>,
    /// Lengths: integers or `q^x`, comma separated.
    #[arg(long = "N")]
    n: Option<String>,
    /// Starting points: list, inclusive range `a..b`, `random:k` or `all`.
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<String>,
    /// Sieve level z.
    #[arg(long)]
    z: Option<f64>,
    /// Rough-set bound U.
    #[arg(long = "U")]
    u: Option<u64>,
    /// Window length V, or `auto` for ⌊r q^{1/2r}⌋.
    #[arg(long = "V")]
    v: Option<String>,
    /// Sieve constant A.
    #[arg(long = "A")]
    a: Option<f64>,
    /// Guard exponent C in z^C ≤ U.
    #[arg(long = "C")]
    c: Option<f64>,
    /// Exponent δ of the conditional bound N^{1/2} q^δ.
    #[arg(long)]
    delta: Option<f64>,
    /// Seed for randomized starting points and suite instances.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interval sums Σ_{M<n≤M+N} χ(n), character values and window sums.
    Sum {
        #[command(flatten)]
        common: Common,
        /// Evaluate χ at these integers.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eval: Vec<i64>,
        /// Also report the prefix-table window sum of this length at λ = M.
        #[arg(long)]
        window: Option<u64>,
    },
    /// Largest interval sum over the starting points against every bound shape.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Also report the maximum over all intervals.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Complete 2r-th moments against the Weil-type bound.
    Moments {
        #[command(flatten)]
        common: Common,
        /// Partition the moment pass across threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Primorial, Mertens product and divisibility counts in U_z(U).
    Sieve {
        #[command(flatten)]
        common: Common,
        /// Divisors t, comma separated.
        #[arg(long, default_value = "1")]
        t: String,
        /// Level of the Mertens product (defaults to z).
        #[arg(long)]
        w: Option<f64>,
    },
    /// Size of the rough set U_z(U) and its density ratio.
    Rough {
        #[command(flatten)]
        common: Common,
        /// List the members.
        #[arg(long)]
        members: bool,
    },
    /// Multiplicative congruence collision counts.
    Congruence {
        #[command(flatten)]
        common: Common,
        /// Compare with the direct quadruple loop.
        #[arg(long)]
        brute: bool,
        /// Count pair collisions for `u1,u2`.
        #[arg(long)]
        pair: Option<String>,
    },
    /// The Hölder chain of the shift-and-average argument.
    Holder {
        #[command(flatten)]
        common: Common,
    },
    /// Bound shapes with implied constant 1.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Variants, comma separated (default: every variant defined at r).
        #[arg(long)]
        variant: Option<String>,
    },
    /// Least quadratic nonresidue and the longest nonresidue-free run.
    Nonresidue {
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// `small` or `full`.
        #[arg(long, default_value = "small")]
        suite: String,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Sum { common, .. }
            | Command::Scan { common, .. }
            | Command::Moments { common, .. }
            | Command::Sieve { common, .. }
            | Command::Rough { common, .. }
            | Command::Congruence { common, .. }
            | Command::Holder { common }
            | Command::Bounds { common, .. }
            | Command::Nonresidue { common }
            | Command::Verify { common, .. } => common,
        }
    }
}

fn apply(common: &Common, cfg: &mut ExperimentConfig) {
    if let Some(q) = &common.q {
        cfg.primes = q.clone();
    }
    if common.legendre {
        cfg.chars = "legendre".into();
    }
    if let Some(m) = common.index {
        cfg.chars = format!("index:{m}");
    }
    if let Some(d) = common.orders {
        cfg.chars = format!("orders:{d}");
    }
    if let Some(r) = &common.r {
        cfg.r = r.clone();
    }
    if let Some(n) = &common.n {
        cfg.n = n.clone();
    }
    if let Some(m) = &common.m {
        cfg.m = m.clone();
    }
    if common.z.is_some() {
        cfg.z = common.z;
    }
    if common.u.is_some() {
        cfg.u = common.u;
    }
    if let Some(v) = &common.v {
        cfg.v = v.clone();
    }
    if let Some(a) = common.a {
        cfg.a = a;
    }
    if let Some(c) = common.c {
        cfg.c = c;
    }
    if let Some(d) = common.delta {
        cfg.delta = d;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
}

fn parse_pair(spec: &str) -> InputResult<(u64, u64)> {
    let parts: Vec<u64> = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| InputError(format!("invalid pair '{spec}'")))
        })
        .collect::<InputResult<_>>()?;
    match parts.as_slice() {
        [a, b] if *a > 0 && *b > 0 => Ok((*a, *b)),
        _ => Err(InputError(format!(
            "--pair needs two positive integers, got '{spec}'"
        ))),
    }
}

fn execute(cli: &Cli) -> InputResult<Vec<ResultRecord>> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    apply(cli.command.common(), &mut cfg);
    let ctx = Ctx::new(cfg)?;
    match &cli.command {
        Command::Sum { eval, window, .. } => commands::sum(
            &ctx,
            &SumOptions {
                eval: eval.clone(),
                window: *window,
            },
        ),
        Command::Scan { exhaustive, .. } => commands::scan(&ctx, *exhaustive),
        Command::Moments { parallel, .. } => commands::moments(&ctx, *parallel),
        Command::Sieve { t, w, .. } => commands::sieve(&ctx, t, *w),
        Command::Rough { members, .. } => commands::rough(&ctx, *members),
        Command::Congruence { brute, pair, .. } => commands::congruence(
            &ctx,
            &CongruenceOptions {
                brute: *brute,
                pair: pair.as_deref().map(parse_pair).transpose()?,
            },
        ),
        Command::Holder { .. } => commands::holder(&ctx),
        Command::Bounds { variant, .. } => commands::bounds(&ctx, variant.as_deref()),
        Command::Nonresidue { .. } => commands::nonresidue(&ctx),
        Command::Verify { suite, .. } => commands::verify(&ctx, suite),
    }
}

/// The clap command, with the operation table appended to `--help`.
fn cli_command() -> clap::Command {
    let table: String = commands::OPERATIONS
        .iter()
        .map(|(op, sub)| format!("  {op:<30} {sub}\n"))
        .collect();
    Cli::command().after_long_help(format!("Library operations by subcommand:\n{table}"))
}

fn main() -> ExitCode {
    let cli = match cli_command()
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let records = match execute(&cli) {
        Ok(records) => records,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let failed = records.iter().any(|r| r.pass == Some(false));
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = emit(records, cli.format, &mut lock).and_then(|_| lock.flush()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
