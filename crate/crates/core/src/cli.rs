//! `cyclodyne` command-line surface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter
//! error. Output is deterministic for a fixed configuration.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::adic::{fcsr_expand, raa_synthesize, two_adic_complexity};
use crate::cyclotomy::Partition;
use crate::error::Error;
use crate::ntcore::{twin_pairs, PeriodParams};
use crate::par::Execution;
use crate::sequences::{linear_complexity, BinarySequence, SequenceClass};
use crate::verify::{self, twin};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "CYCLODYNE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "cyclodyne",
    version,
    about = "Ding-Helleseth generalized cyclotomic sequences and their 2-adic complexity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the period parameters (p, q, N, e, g, x), or the partition.
    Params(ParamsArgs),
    /// Write one period of a sequence.
    Gen(GenArgs),
    /// 2-adic and linear complexity report.
    Analyze(AnalyzeArgs),
    /// Check the cyclotomic lemmas against enumeration.
    VerifyLemmas(LemmaArgs),
    /// Check a determinant closed form against the modular oracle.
    VerifyDet(DetArgs),
    /// Check gcd(S(2), 2^N - 1) = 1 and phi2 = N - 1 for twin pairs.
    VerifyTwin(TwinArgs),
    /// Rational approximation of a bit stream.
    Raa(RaaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// '0'/'1' characters, index 0 first.
    Bits,
    /// S(2) in hex: bit i is the coefficient of 2^i, so nibbles are packed
    /// LSB-first and the string is zero-padded at the top to ceil(N/4)
    /// digits.
    Hex,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    /// Common primitive root to use instead of the smallest one.
    #[arg(long = "g")]
    pub g_override: Option<u64>,
}

impl PairArgs {
    fn params(&self) -> Result<PeriodParams, Error> {
        PeriodParams::new(self.p, self.q, self.g_override)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Export the D0/D1/P/Q class lists.
    #[arg(long)]
    pub partition: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub class: u8,
    #[arg(long, value_enum, default_value = "bits")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long, requires = "q", conflicts_with = "input")]
    pub p: Option<u64>,
    #[arg(long, requires = "p")]
    pub q: Option<u64>,
    #[arg(long = "g")]
    pub g_override: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value = "1")]
    pub class: u8,
    /// Sequence file: one line of '0'/'1'.
    #[arg(long, required_unless_present = "p")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DetArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub class: u8,
    /// Number of seeded 60-bit trial primes.
    #[arg(long, default_value_t = 5)]
    pub primes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TwinArgs {
    #[arg(long)]
    pub max_p: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Skip the Berlekamp-Massey column.
    #[arg(long)]
    pub no_lc: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RaaArgs {
    /// Bit stream, index 0 first.
    #[arg(long, conflicts_with_all = ["input", "p"])]
    pub bits: Option<String>,
    #[arg(long, conflicts_with = "p")]
    pub input: Option<PathBuf>,
    /// Use the periodic extension of a generated sequence.
    #[arg(long, requires = "q")]
    pub p: Option<u64>,
    #[arg(long, requires = "p")]
    pub q: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value = "1")]
    pub class: u8,
    /// Bits of the periodic extension to use (default 2N + 4).
    #[arg(long)]
    pub count: Option<usize>,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn usage(err: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: EXIT_USAGE,
        }
    }

    fn verdict(stdout: String, passed: bool) -> Self {
        Outcome {
            stdout,
            stderr: if passed {
                String::new()
            } else {
                "verification failed\n".into()
            },
            code: if passed { EXIT_OK } else { EXIT_VIOLATION },
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses `CYCLODYNE_SEED` when present.
pub fn seed_from_env() -> Result<Option<u64>, String> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(None),
    }
}

/// Runs a parsed command. `env_seed`, when set, replaces every `--seed`.
pub fn run(cli: &Cli, env_seed: Option<u64>) -> Outcome {
    let mut outcome = match &cli.command {
        Command::Params(a) => cmd_params(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::VerifyLemmas(a) => cmd_verify_lemmas(a, env_seed.unwrap_or(a.seed)),
        Command::VerifyDet(a) => cmd_verify_det(a, env_seed.unwrap_or(a.seed)),
        Command::VerifyTwin(a) => cmd_verify_twin(a),
        Command::Raa(a) => cmd_raa(a),
    };
    let output = match &cli.command {
        Command::Gen(a) => a.output.as_ref(),
        Command::Analyze(a) => a.output.as_ref(),
        Command::VerifyLemmas(a) => a.output.as_ref(),
        Command::VerifyDet(a) => a.output.as_ref(),
        Command::VerifyTwin(a) => a.output.as_ref(),
        Command::Params(_) | Command::Raa(_) => None,
    };
    if let Some(path) = output {
        if outcome.code != EXIT_USAGE {
            if let Err(e) = fs::write(path, &outcome.stdout) {
                return Outcome::usage(format!("cannot write {}: {e}", path.display()));
            }
            outcome.stdout.clear();
        }
    }
    outcome
}

pub fn cmd_params(a: &ParamsArgs) -> Outcome {
    let params = match a.pair.params() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    if a.partition {
        match Partition::build(&params) {
            Ok(part) => Outcome::ok(pretty(&part.export())),
            Err(e) => Outcome::usage(e),
        }
    } else {
        Outcome::ok(pretty(&params))
    }
}

fn generated(pair: &PairArgs, class: u8) -> Result<(Partition, BinarySequence), Error> {
    let part = Partition::build(&pair.params()?)?;
    let seq = BinarySequence::generate(&part, SequenceClass::from_number(class)?)?;
    Ok((part, seq))
}

pub fn cmd_gen(a: &GenArgs) -> Outcome {
    let (part, seq) = match generated(&a.pair, a.class) {
        Ok(v) => v,
        Err(e) => return Outcome::usage(e),
    };
    match a.format {
        Format::Bits => Outcome::ok(format!("{}\n", seq.to_bit_string())),
        Format::Hex => Outcome::ok(format!("{}\n", seq.to_hex())),
        Format::Json => Outcome::ok(pretty(&seq.export(Some(&part)))),
        Format::Csv => Outcome::usage("gen supports --format bits, hex or json"),
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Outcome {
    let (params, seq) = match (&a.input, a.p, a.q) {
        (Some(path), _, _) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return Outcome::usage(format!("cannot read {}: {e}", path.display())),
            };
            match text.parse::<BinarySequence>() {
                Ok(seq) => (None, seq),
                Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
            }
        }
        (None, Some(p), Some(q)) => {
            let pair = PairArgs {
                p,
                q,
                g_override: a.g_override,
            };
            match generated(&pair, a.class) {
                Ok((part, seq)) => (Some(*part.params()), seq),
                Err(e) => return Outcome::usage(e),
            }
        }
        _ => return Outcome::usage("analyze needs --p/--q or --input"),
    };
    let report = two_adic_complexity(&seq);
    let body = json!({
        "p": params.map(|x| x.p()),
        "q": params.map(|x| x.q()),
        "class": seq.class(),
        "N": seq.period(),
        "weight": seq.weight(),
        "S2": report.s2.to_string(),
        "gcd": report.gcd.to_string(),
        "phi2": report.phi2,
        "linear_complexity": linear_complexity(&seq),
    });
    Outcome::ok(pretty(&body))
}

pub fn cmd_verify_lemmas(a: &LemmaArgs, seed: u64) -> Outcome {
    let params = match a.pair.params() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    match verify::verify_lemmas(&params, seed, Execution::default()) {
        Ok(report) => Outcome::verdict(pretty(&report), report.ok),
        Err(e) => Outcome::usage(e),
    }
}

pub fn cmd_verify_det(a: &DetArgs, seed: u64) -> Outcome {
    let params = match a.pair.params() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let class = match SequenceClass::from_number(a.class) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e),
    };
    match verify::verify_det(&params, class, a.primes, seed) {
        Ok(report) => {
            let passed = report.ensure().is_ok() && report.audit.ensure(class).is_ok();
            Outcome::verdict(pretty(&report), passed)
        }
        Err(e) => Outcome::usage(e),
    }
}

pub fn cmd_verify_twin(a: &TwinArgs) -> Outcome {
    if !matches!(a.format, Format::Json | Format::Csv) {
        return Outcome::usage("verify-twin supports --format json or csv");
    }
    let rows = match twin::twin_sweep(a.max_p, !a.no_lc, Execution::default()) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let passed = rows.iter().all(|r| r.ok);
    let pairs = twin_pairs(a.max_p).len();
    let stdout = match a.format {
        Format::Csv => twin::to_csv(&rows),
        _ => pretty(&json!({
            "max_p": a.max_p,
            "pairs": pairs,
            "rows": rows,
            "ok": passed,
        })),
    };
    let mut out = Outcome::verdict(stdout, passed);
    if pairs == 0 {
        out.stderr.push_str(&format!(
            "warning: no twin prime pairs with p <= {}\n",
            a.max_p
        ));
    }
    out
}

pub fn cmd_raa(a: &RaaArgs) -> Outcome {
    let bits: Vec<u8> = if let Some(s) = &a.bits {
        match s.parse::<BinarySequence>() {
            Ok(seq) => seq.bits().to_vec(),
            Err(e) => return Outcome::usage(e),
        }
    } else if let Some(path) = &a.input {
        match fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| t.parse::<BinarySequence>().map_err(|e| e.to_string()))
        {
            Ok(seq) => seq.bits().to_vec(),
            Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
        }
    } else if let (Some(p), Some(q)) = (a.p, a.q) {
        let pair = PairArgs {
            p,
            q,
            g_override: None,
        };
        match generated(&pair, a.class) {
            Ok((_, seq)) => seq.periodized(a.count.unwrap_or(2 * seq.period() + 4)),
            Err(e) => return Outcome::usage(e),
        }
    } else {
        return Outcome::usage("raa needs --bits, --input or --p/--q");
    };
    let bits = match a.count {
        Some(c) if c < bits.len() => bits[..c].to_vec(),
        _ => bits,
    };
    if bits.len() < 2 {
        return Outcome::usage("raa needs at least 2 bits");
    }
    let r = raa_synthesize(&bits);
    let body = json!({
        "bits": bits.len(),
        "numerator": r.numerator().to_string(),
        "denominator": r.denominator().to_string(),
        "complexity": r.complexity(),
        "reproduces_input": fcsr_expand(&r, bits.len()) == bits,
    });
    Outcome::ok(pretty(&body))
}
