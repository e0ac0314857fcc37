//! Configuration and subcommands behind the `qrperm` binary.
//!
//! Every command accepts the same flag set, but each one only uses some of
//! the keys; passing a flag the command ignores is a usage error. A
//! `--config FILE` of `key = value` lines supplies defaults, the
//! `QRPERM_WORKERS` and `QRPERM_OUT_DIR` environment variables override the
//! file, and flags override both.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use qrperm::disc::DiscrepancyReport;
use qrperm::expsum::{
    completion_check, gauss_power_sum, incomplete_sigma_sum, kloosterman, twisted_full_sum, w_sum,
};
use qrperm::numtheory::PrimeModulus;
use qrperm::par;
use qrperm::perm::{
    bit_reversal, eta_power, lambda_inv, psi, random_perm, rho_exp, sos_perm, Permutation, TieBreak,
};
use qrperm::quadratic::Alpha;
use qrperm::scan::{
    emit, scan_gauss, scan_obryant, scan_psi, scan_sos, scan_zaremba, ASet, Format, MPolicy,
    ScanOptions,
};
use qrperm::stats::{PatternCaps, PropertyProfile};

macro_rules! params {
    ($($field:ident => $key:literal : $help:literal),* $(,)?) => {
        #[derive(Debug, Default, Clone, Args)]
        pub struct Params {
            /// File of `key = value` lines; flags win on conflict
            #[arg(long, value_name = "FILE")]
            config: Option<PathBuf>,
            /// golden, sqrt:D, quad:a,b,d,c or rat:p/q (repeatable)
            #[arg(long)]
            alpha: Vec<String>,
            /// Record wall time per scan point
            #[arg(long)]
            timing: bool,
            /// Emit per-parameter rows as well as aggregates
            #[arg(long)]
            detail: bool,
            $(
                #[doc = $help]
                #[arg(long = $key)]
                $field: Option<String>,
            )*
        }

        impl Params {
            fn flags(&self) -> Vec<(&'static str, String)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(($key, v.clone()));
                    }
                )*
                if !self.alpha.is_empty() {
                    out.push(("alpha", self.alpha.join("; ")));
                }
                if self.timing {
                    out.push(("timing", "true".to_string()));
                }
                if self.detail {
                    out.push(("detail", "true".to_string()));
                }
                out
            }
        }

        const VALUE_KEYS: &[&str] = &[$($key),*];
    };
}

params! {
    family => "family": "identity, reversal, psi, lambda, eta, rho, sos, bitrev or random",
    n => "n": "Permutation size",
    p => "p": "Prime modulus",
    k => "k": "Multiplier (psi) or exponent (eta, gauss)",
    a => "a": "Shift or coefficient",
    b => "b": "Second Kloosterman coefficient",
    c => "c": "Coefficient of the inner power in W sums",
    tau => "tau": "Primitive root for rho",
    theta => "theta": "Generator of the order-t subgroup for W sums",
    t => "t": "Order of theta",
    m => "m": "Prefix length",
    freq => "freq": "Frequency for sums over a permutation",
    twist => "twist": "Linear twist for the full sum over a permutation",
    seed => "seed": "Seed for the random family",
    from_file => "from-file": "Read the permutation from a text file",
    sum => "sum": "kloosterman, gauss, w, incomplete, twisted or completion",
    p_min => "p-min": "Smallest prime scanned",
    p_max => "p-max": "Largest prime scanned",
    n_min => "n-min": "Smallest n scanned",
    n_max => "n-max": "Largest n scanned",
    n_list => "n-list": "Comma-separated sizes",
    a_set => "a-set": "`all` or comma-separated coefficients",
    m_stride => "m-stride": "Scan prefixes M = stride, 2 stride, ... (always including p)",
    bound => "bound": "Partial quotient bound",
    limit => "limit": "Largest k for B values",
    targets => "targets": "Comma-separated values to look for in the rank set",
    workers => "workers": "Worker threads (0 = all cores)",
    out => "out": "Output directory",
    format => "format": "csv or json",
    stem => "stem": "Output file stem (defaults to the command name)",
    d_limit => "d-limit": "Largest n for exact full discrepancy",
    len2_cap => "len2-cap": "Largest n for length-2 pattern counts",
    len3_cap => "len3-cap": "Largest n for length-3 pattern counts",
}

const FLAG_KEYS: &[&str] = &["alpha", "timing", "detail"];

#[derive(Debug, Parser)]
#[command(
    name = "qrperm",
    version,
    about = "Discrepancy and exponential-sum scans for arithmetic permutations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build a permutation and print it in text form
    Gen(Params),
    /// Discrepancy report for one permutation
    Disc(Params),
    /// Evaluate one exponential sum
    Sums(Params),
    /// Quasirandomness profile for one permutation
    Stats(Params),
    /// D* of every psi_k for each prime in a range
    ScanPsi(Params),
    /// Incomplete power sums S(a, k, M) for each prime in a range
    ScanGauss(Params),
    /// D* of Sós permutations against prefix discrepancies
    ScanSos(Params),
    /// Bounded partial quotients k/n for each n in a range
    Zaremba(Params),
    /// Rank set of a Sós permutation and its gap bound
    Obryant(Params),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gen,
    Disc,
    Sums,
    Stats,
    ScanPsi,
    ScanGauss,
    ScanSos,
    Zaremba,
    Obryant,
}

const PERM: &[&str] = &["family", "n", "p", "k", "a", "tau", "alpha", "seed"];
const COMMON: &[&str] = &["workers", "out", "stem"];
const SCAN: &[&str] = &["format", "d-limit", "timing", "detail"];

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gen => "gen",
            Command::Disc => "disc",
            Command::Sums => "sums",
            Command::Stats => "stats",
            Command::ScanPsi => "scan-psi",
            Command::ScanGauss => "scan-gauss",
            Command::ScanSos => "scan-sos",
            Command::Zaremba => "zaremba",
            Command::Obryant => "obryant",
        }
    }

    fn is_scan(self) -> bool {
        matches!(
            self,
            Command::ScanPsi
                | Command::ScanGauss
                | Command::ScanSos
                | Command::Zaremba
                | Command::Obryant
        )
    }

    /// Keys this command reads.
    pub fn keys(self) -> Vec<&'static str> {
        let own: &[&str] = match self {
            Command::Gen => PERM,
            Command::Disc => &["from-file", "d-limit"],
            Command::Stats => &["from-file", "d-limit", "len2-cap", "len3-cap"],
            Command::Sums => &[
                "from-file",
                "sum",
                "b",
                "c",
                "theta",
                "t",
                "m",
                "freq",
                "twist",
            ],
            Command::ScanPsi => &["p-min", "p-max"],
            Command::ScanGauss => &["p-min", "p-max", "a-set", "m-stride"],
            Command::ScanSos => &["alpha", "n-list"],
            Command::Zaremba => &["n-min", "n-max", "bound"],
            Command::Obryant => &["alpha", "limit", "targets"],
        };
        let mut keys: Vec<&str> = COMMON.iter().chain(own).copied().collect();
        if matches!(self, Command::Disc | Command::Stats | Command::Sums) {
            keys.extend(PERM);
        }
        if self.is_scan() {
            keys.extend(SCAN);
        }
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    fn defaults(self) -> Vec<(&'static str, String)> {
        let mut d = vec![
            ("workers", "0".to_string()),
            ("stem", self.name().to_string()),
        ];
        match self {
            Command::Disc => d.push(("d-limit", "512".into())),
            Command::Stats => d.extend([
                ("d-limit", "512".to_string()),
                ("len2-cap", PatternCaps::default().len2.to_string()),
                ("len3-cap", PatternCaps::default().len3.to_string()),
            ]),
            Command::ScanGauss => {
                d.extend([("a-set", "all".to_string()), ("m-stride", "1".to_string())])
            }
            Command::ScanSos => d.push(("alpha", "golden; sqrt:2; sqrt:3".into())),
            Command::Zaremba => d.push(("bound", "5".into())),
            _ => {}
        }
        if self.is_scan() {
            d.extend([
                ("format", "csv".to_string()),
                ("d-limit", "512".to_string()),
                ("timing", "false".to_string()),
                ("detail", "false".to_string()),
                ("out", ".".to_string()),
            ]);
        }
        d
    }
}

/// A configuration problem, always tied to the key that caused it.
#[derive(Debug)]
pub enum UsageError {
    /// Argument syntax, `--help` and `--version`; clap formats these.
    Clap(clap::Error),
    Key {
        key: String,
        message: String,
    },
}

impl UsageError {
    fn key(key: &str, message: impl Into<String>) -> Self {
        UsageError::Key {
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// Prints the error and returns the exit code: 0 for help and version,
    /// 2 for usage errors.
    pub fn report(&self) -> ExitCode {
        match self {
            UsageError::Clap(e) => {
                let _ = e.print();
                ExitCode::from(e.exit_code() as u8)
            }
            UsageError::Key { .. } => {
                eprintln!("usage error: {self}");
                ExitCode::from(2)
            }
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UsageError::Clap(e) => write!(f, "{e}"),
            UsageError::Key { key, message } => write!(f, "`{key}`: {message}"),
        }
    }
}

impl std::error::Error for UsageError {}

type Parsed<T> = std::result::Result<T, UsageError>;

#[derive(Debug, Clone, PartialEq)]
pub enum PermSpec {
    Identity { n: usize },
    Reversal { n: usize },
    Psi { n: usize, k: u64 },
    Lambda { p: u64, a: u64 },
    Eta { p: u64, a: u64, k: u64 },
    Rho { p: u64, a: u64, tau: u64 },
    Sos { n: usize, alpha: Alpha },
    Bitrev { n: usize },
    Random { n: usize, seed: u64 },
    File(PathBuf),
}

impl PermSpec {
    pub fn build(&self) -> anyhow::Result<Permutation> {
        let prime = |p: u64| PrimeModulus::new(p).with_context(|| format!("p = {p}"));
        Ok(match self {
            PermSpec::Identity { n } => Permutation::identity(*n)?,
            PermSpec::Reversal { n } => Permutation::reversal(*n)?,
            PermSpec::Psi { n, k } => psi(*n, *k)?,
            PermSpec::Lambda { p, a } => lambda_inv(&prime(*p)?, *a)?,
            PermSpec::Eta { p, a, k } => eta_power(&prime(*p)?, *a, *k)?,
            PermSpec::Rho { p, a, tau } => rho_exp(&prime(*p)?, *a, *tau)?,
            PermSpec::Sos { n, alpha } => sos_perm(*n, alpha, TieBreak::Error)?,
            PermSpec::Bitrev { n } => bit_reversal(*n)?,
            PermSpec::Random { n, seed } => random_perm(*n, *seed)?,
            PermSpec::File(path) => Permutation::read_file(path)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SumSpec {
    Kloosterman {
        p: u64,
        a: i64,
        b: i64,
    },
    Gauss {
        p: u64,
        a: u64,
        k: u64,
        m: u64,
    },
    W {
        p: u64,
        a: i64,
        c: i64,
        theta: u64,
        t: u64,
    },
    Incomplete {
        freq: i64,
        m: usize,
    },
    Twisted {
        freq: i64,
        twist: i64,
    },
    Completion {
        freq: i64,
    },
}

impl SumSpec {
    fn needs_perm(&self) -> bool {
        matches!(
            self,
            SumSpec::Incomplete { .. } | SumSpec::Twisted { .. } | SumSpec::Completion { .. }
        )
    }
}

/// Fully resolved configuration for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub perm: Option<PermSpec>,
    pub sum: Option<SumSpec>,
    pub p_range: Option<(u64, u64)>,
    pub n_range: Option<(u64, u64)>,
    pub n_list: Vec<usize>,
    pub alphas: Vec<Alpha>,
    pub a_set: ASet,
    pub m_policy: MPolicy,
    pub bound: u64,
    pub limit: usize,
    pub targets: Vec<u64>,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub stem: String,
    pub format: Format,
    pub d_limit: usize,
    pub caps: PatternCaps,
    pub scan: ScanOptions,
    /// Every effective `key = value`, sorted, starting with `command`.
    pub effective: Vec<(String, String)>,
}

/// Reads `key = value` lines. Blank lines and `#` comments are skipped;
/// underscores in keys are accepted for dashes.
pub fn parse_config_file(text: &str) -> Parsed<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            UsageError::key(line, format!("line {}: expected `key = value`", i + 1))
        })?;
        let key = k.trim().replace('_', "-");
        if !is_known(&key) {
            return Err(UsageError::key(
                &key,
                format!("line {}: unknown key", i + 1),
            ));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(UsageError::key(&key, format!("line {}: set twice", i + 1)));
        }
    }
    Ok(out)
}

fn is_known(key: &str) -> bool {
    VALUE_KEYS.contains(&key) || FLAG_KEYS.contains(&key)
}

pub fn parse_config<I, T>(argv: I) -> Parsed<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    parse_config_with_env(argv, |k| std::env::var(k).ok())
}

/// As [`parse_config`] with an explicit environment lookup.
pub fn parse_config_with_env<I, T>(
    argv: I,
    env: impl Fn(&str) -> Option<String>,
) -> Parsed<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(UsageError::Clap)?;
    let (command, params) = match cli.command {
        Cmd::Gen(p) => (Command::Gen, p),
        Cmd::Disc(p) => (Command::Disc, p),
        Cmd::Sums(p) => (Command::Sums, p),
        Cmd::Stats(p) => (Command::Stats, p),
        Cmd::ScanPsi(p) => (Command::ScanPsi, p),
        Cmd::ScanGauss(p) => (Command::ScanGauss, p),
        Cmd::ScanSos(p) => (Command::ScanSos, p),
        Cmd::Zaremba(p) => (Command::Zaremba, p),
        Cmd::Obryant(p) => (Command::Obryant, p),
    };
    let used = command.keys();
    let mut merged: BTreeMap<String, String> = command
        .defaults()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    if let Some(path) = &params.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::key("config", format!("{}: {e}", path.display())))?;
        // a shared file may carry keys for other commands
        merged.extend(
            parse_config_file(&text)?
                .into_iter()
                .filter(|(k, _)| used.contains(&k.as_str())),
        );
    }
    for (var, key) in [("QRPERM_WORKERS", "workers"), ("QRPERM_OUT_DIR", "out")] {
        if let Some(v) = env(var).filter(|v| !v.is_empty()) {
            merged.insert(key.to_string(), v);
        }
    }
    for (key, value) in params.flags() {
        if !used.contains(&key) {
            return Err(UsageError::key(
                key,
                format!("not used by `{}`", command.name()),
            ));
        }
        merged.insert(key.to_string(), value);
    }
    if !command.is_scan() && !merged.contains_key("out") {
        merged.remove("stem");
    }
    resolve(command, merged)
}

struct Keys(BTreeMap<String, String>);

impl Keys {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Parsed<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| UsageError::key(key, format!("`{v}`: {e}")))
            })
            .transpose()
    }

    fn req<T: std::str::FromStr>(&self, key: &str) -> Parsed<T>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| UsageError::key(key, "required"))
    }

    fn or<T: std::str::FromStr>(&self, key: &str, default: T) -> Parsed<T>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Parsed<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        let Some(v) = self.raw(key) else {
            return Ok(Vec::new());
        };
        v.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| UsageError::key(key, format!("`{s}`: {e}")))
            })
            .collect()
    }

    fn flag(&self, key: &str) -> Parsed<bool> {
        self.or(key, false)
    }

    fn alphas(&self) -> Parsed<Vec<Alpha>> {
        let Some(v) = self.raw("alpha") else {
            return Ok(Vec::new());
        };
        v.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<Alpha>()
                    .map_err(|e| UsageError::key("alpha", format!("`{s}`: {e}")))
            })
            .collect()
    }

    fn unsigned(&self, key: &str) -> Parsed<u64> {
        let v: i64 = self.req(key)?;
        u64::try_from(v).map_err(|_| UsageError::key(key, format!("`{v}` must be non-negative")))
    }

    fn range(&self, lo: &str, hi: &str) -> Parsed<(u64, u64)> {
        let (a, b): (u64, u64) = (self.req(lo)?, self.req(hi)?);
        if a > b {
            return Err(UsageError::key(
                lo,
                format!("{a} exceeds {hi} = {b}; ranges must be nonempty"),
            ));
        }
        Ok((a, b))
    }

    fn at_least(&self, key: &str, default: usize, min: usize) -> Parsed<usize> {
        let v = self.or(key, default)?;
        if v < min {
            return Err(UsageError::key(key, format!("must be at least {min}")));
        }
        Ok(v)
    }
}

fn perm_spec(k: &Keys) -> Parsed<Option<PermSpec>> {
    if let Some(path) = k.raw("from-file") {
        if k.has("family") {
            return Err(UsageError::key("from-file", "conflicts with `family`"));
        }
        return Ok(Some(PermSpec::File(PathBuf::from(path))));
    }
    let Some(family) = k.raw("family") else {
        return Ok(None);
    };
    let spec = match family {
        "identity" => PermSpec::Identity { n: k.req("n")? },
        "reversal" => PermSpec::Reversal { n: k.req("n")? },
        "bitrev" => PermSpec::Bitrev { n: k.req("n")? },
        "psi" => PermSpec::Psi {
            n: k.req("n")?,
            k: k.req("k")?,
        },
        "lambda" => PermSpec::Lambda {
            p: k.req("p")?,
            a: k.unsigned("a")?,
        },
        "eta" => PermSpec::Eta {
            p: k.req("p")?,
            a: k.unsigned("a")?,
            k: k.req("k")?,
        },
        "rho" => PermSpec::Rho {
            p: k.req("p")?,
            a: k.unsigned("a")?,
            tau: k.req("tau")?,
        },
        "random" => PermSpec::Random {
            n: k.req("n")?,
            seed: k.or("seed", 0)?,
        },
        "sos" => {
            let mut alphas = k.alphas()?;
            if alphas.len() != 1 {
                return Err(UsageError::key("alpha", "sos needs exactly one value"));
            }
            PermSpec::Sos {
                n: k.req("n")?,
                alpha: alphas.remove(0),
            }
        }
        other => {
            return Err(UsageError::key(
                "family",
                format!("unknown family `{other}`"),
            ))
        }
    };
    Ok(Some(spec))
}

fn sum_spec(k: &Keys) -> Parsed<SumSpec> {
    let kind: String = k.req("sum")?;
    Ok(match kind.as_str() {
        "kloosterman" => SumSpec::Kloosterman {
            p: k.req("p")?,
            a: k.req("a")?,
            b: k.req("b")?,
        },
        "gauss" => SumSpec::Gauss {
            p: k.req("p")?,
            a: k.unsigned("a")?,
            k: k.req("k")?,
            m: k.req("m")?,
        },
        "w" => SumSpec::W {
            p: k.req("p")?,
            a: k.req("a")?,
            c: k.req("c")?,
            theta: k.req("theta")?,
            t: k.req("t")?,
        },
        "incomplete" => SumSpec::Incomplete {
            freq: k.req("freq")?,
            m: k.req("m")?,
        },
        "twisted" => SumSpec::Twisted {
            freq: k.req("freq")?,
            twist: k.or("twist", 0)?,
        },
        "completion" => SumSpec::Completion {
            freq: k.req("freq")?,
        },
        other => return Err(UsageError::key("sum", format!("unknown sum `{other}`"))),
    })
}

fn resolve(command: Command, merged: BTreeMap<String, String>) -> Parsed<RunConfig> {
    let k = Keys(merged);
    let format = match k.raw("format").unwrap_or("csv") {
        "csv" => Format::Csv,
        "json" => Format::Json,
        other => {
            return Err(UsageError::key(
                "format",
                format!("`{other}` is not csv or json"),
            ))
        }
    };
    let d_limit = k.at_least("d-limit", 512, 1)?;
    let caps = PatternCaps {
        len2: k.at_least("len2-cap", PatternCaps::default().len2, 2)?,
        len3: k.at_least("len3-cap", PatternCaps::default().len3, 3)?,
    };
    let a_set = match k.raw("a-set") {
        None | Some("all") => ASet::All,
        Some(_) => ASet::List(k.list("a-set")?),
    };
    let stride: u64 = k.or("m-stride", 1)?;
    let m_policy = match stride {
        0 => return Err(UsageError::key("m-stride", "must be positive")),
        1 => MPolicy::All,
        s => MPolicy::Stride(s),
    };
    let perm = if matches!(
        command,
        Command::Gen | Command::Disc | Command::Stats | Command::Sums
    ) {
        perm_spec(&k)?
    } else {
        None
    };
    if matches!(command, Command::Gen) && matches!(perm, Some(PermSpec::File(_))) {
        return Err(UsageError::key("from-file", "not used by `gen`"));
    }
    let sum = if command == Command::Sums {
        Some(sum_spec(&k)?)
    } else {
        None
    };
    let needs_perm = match command {
        Command::Gen | Command::Disc | Command::Stats => true,
        Command::Sums => sum.as_ref().is_some_and(SumSpec::needs_perm),
        _ => false,
    };
    if needs_perm && perm.is_none() {
        return Err(UsageError::key("family", "required (or `from-file`)"));
    }
    if !needs_perm && command == Command::Sums && k.has("family") {
        return Err(UsageError::key(
            "family",
            "this sum does not take a permutation",
        ));
    }
    let alphas = k.alphas()?;
    let p_range = match command {
        Command::ScanPsi | Command::ScanGauss => Some(k.range("p-min", "p-max")?),
        _ => None,
    };
    let n_range = match command {
        Command::Zaremba => Some(k.range("n-min", "n-max")?),
        _ => None,
    };
    let n_list: Vec<usize> = k.list("n-list")?;
    if command == Command::ScanSos && n_list.is_empty() {
        return Err(UsageError::key("n-list", "required"));
    }
    if command == Command::ScanSos && alphas.is_empty() {
        return Err(UsageError::key("alpha", "required"));
    }
    let limit: usize = k.or("limit", 0)?;
    if command == Command::Obryant {
        if limit == 0 {
            return Err(UsageError::key("limit", "required and positive"));
        }
        if alphas.len() != 1 {
            return Err(UsageError::key("alpha", "obryant needs exactly one value"));
        }
    }
    let bound = k.or("bound", 5)?;
    if command == Command::Zaremba && bound == 0 {
        return Err(UsageError::key("bound", "must be positive"));
    }
    let mut effective = vec![("command".to_string(), command.name().to_string())];
    effective.extend(k.0.iter().map(|(a, b)| (a.clone(), b.clone())));
    Ok(RunConfig {
        command,
        perm,
        sum,
        p_range,
        n_range,
        n_list,
        alphas,
        a_set,
        m_policy,
        bound,
        limit,
        targets: k.list("targets")?,
        workers: k.or("workers", 0)?,
        out: k.raw("out").map(PathBuf::from),
        stem: k.raw("stem").unwrap_or(command.name()).to_string(),
        format,
        d_limit,
        caps,
        scan: ScanOptions {
            d_limit,
            timing: k.flag("timing")?,
            detail: k.flag("detail")?,
        },
        effective,
    })
}

/// Runs the command on `cfg.workers` threads and returns what goes to stdout.
pub fn run(cfg: &RunConfig) -> anyhow::Result<String> {
    par::with_workers(cfg.workers, || run_inner(cfg))
}

fn config_json(cfg: &RunConfig) -> serde_json::Value {
    serde_json::Value::Object(
        cfg.effective
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect(),
    )
}

fn single(cfg: &RunConfig, result: serde_json::Value) -> anyhow::Result<String> {
    let doc = serde_json::json!({ "config": config_json(cfg), "result": result });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
        let path = dir.join(format!("{}.json", cfg.stem));
        std::fs::write(&path, &text).with_context(|| path.display().to_string())?;
    }
    Ok(text)
}

fn run_inner(cfg: &RunConfig) -> anyhow::Result<String> {
    let sigma = match &cfg.perm {
        Some(spec) => Some(spec.build()?),
        None => None,
    };
    let records =
        match cfg.command {
            Command::Gen => {
                let s = sigma.expect("validated");
                let mut text = s.to_text();
                for (k, v) in &cfg.effective {
                    text.push_str(&format!("# {k} = {v}\n"));
                }
                if let Some(dir) = &cfg.out {
                    std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
                    let path = dir.join(format!("{}.perm", cfg.stem));
                    std::fs::write(&path, &text).with_context(|| path.display().to_string())?;
                }
                return Ok(text);
            }
            Command::Disc => {
                let r = DiscrepancyReport::compute(&sigma.expect("validated"), cfg.d_limit);
                return single(cfg, serde_json::to_value(r)?);
            }
            Command::Stats => {
                let r =
                    PropertyProfile::compute(&sigma.expect("validated"), cfg.d_limit, cfg.caps)?;
                return single(cfg, serde_json::to_value(r)?);
            }
            Command::Sums => {
                let prime = |p: u64| PrimeModulus::new(p).with_context(|| format!("p = {p}"));
                let value =
                    match cfg.sum.as_ref().expect("validated") {
                        SumSpec::Kloosterman { p, a, b } => {
                            serde_json::to_value(kloosterman(&prime(*p)?, *a, *b))?
                        }
                        SumSpec::Gauss { p, a, k, m } => {
                            serde_json::to_value(gauss_power_sum(&prime(*p)?, *a, *k, *m)?)?
                        }
                        SumSpec::W { p, a, c, theta, t } => serde_json::json!({
                            "value": w_sum(&prime(*p)?, *a, *c, *theta, *t)?,
                        }),
                        SumSpec::Incomplete { freq, m } => serde_json::to_value(
                            incomplete_sigma_sum(sigma.as_ref().expect("validated"), *freq, *m)?,
                        )?,
                        SumSpec::Twisted { freq, twist } => serde_json::to_value(
                            twisted_full_sum(sigma.as_ref().expect("validated"), *freq, *twist),
                        )?,
                        SumSpec::Completion { freq } => serde_json::to_value(completion_check(
                            sigma.as_ref().expect("validated"),
                            *freq,
                        ))?,
                    };
                return single(cfg, value);
            }
            Command::ScanPsi => {
                let (lo, hi) = cfg.p_range.expect("validated");
                scan_psi(lo, hi, cfg.scan)?
            }
            Command::ScanGauss => {
                let (lo, hi) = cfg.p_range.expect("validated");
                scan_gauss(lo, hi, &cfg.a_set, cfg.m_policy, cfg.scan)?
            }
            Command::ScanSos => scan_sos(&cfg.alphas, &cfg.n_list, cfg.scan)?,
            Command::Zaremba => {
                let (lo, hi) = cfg.n_range.expect("validated");
                scan_zaremba(lo, hi, cfg.bound, cfg.scan)?
            }
            Command::Obryant => scan_obryant(&cfg.alphas[0], cfg.limit, &cfg.targets, cfg.scan)?,
        };
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let w = emit(&dir, &cfg.stem, &records, &cfg.effective, cfg.format)?;
    Ok(format!(
        "{} records\nrecords: {}\nsummary: {}\nplot: {}\nbody sha256: {}\n",
        records.len(),
        w.records.display(),
        w.summary.display(),
        w.plot.display(),
        w.digest
    ))
}
