//! Parameter sweeps producing flat records, and their CSV / JSON / plot output.
//!
//! Each sweep is a parallel map over independent parameter points. Records
//! are buffered and stably sorted by `(n_or_p, params)` before emission, so
//! output bytes never depend on the worker count.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::contfrac::{cf_of_rational, zaremba_search};
use crate::disc::{d_exact, d_star_scaled, DiscrepancyReport, DEFAULT_EXACT_LIMIT};
use crate::error::{Error, Result};
use crate::expsum::gauss_partial_magnitudes;
use crate::numtheory::{gcd, primes_between, PrimeModulus};
use crate::par;
use crate::perm::{psi, sos_perm, TieBreak};
use crate::quadratic::Alpha;
use crate::sos::{a_set, b_values, discrelation, gap_length};

/// Version of the CSV and JSON layouts.
pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 8] = [
    "family",
    "n_or_p",
    "params",
    "statistic",
    "value_num",
    "value_den_or_float",
    "normalized",
    "wall_time_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Value {
    Exact { num: i64, den: i64 },
    Real { value: f64 },
}

impl Value {
    pub fn exact(r: Ratio<i64>) -> Self {
        Value::Exact {
            num: *r.numer(),
            den: *r.denom(),
        }
    }

    pub fn int(x: i64) -> Self {
        Value::Exact { num: x, den: 1 }
    }

    pub fn flag(b: bool) -> Self {
        Value::int(b as i64)
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Value::Exact { num, den } => num as f64 / den as f64,
            Value::Real { value } => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub family: String,
    pub n_or_p: u64,
    pub params: Vec<(String, String)>,
    pub statistic: String,
    pub value: Value,
    /// Name of the normalizer, e.g. `ln^2 p`.
    pub normalizer: String,
    /// `value / normalizer`; absent when the normalizer is zero.
    pub normalized: Option<f64>,
    pub wall_time_ms: u64,
}

impl ScanRecord {
    fn new(
        family: &str,
        n_or_p: u64,
        params: &[(&str, String)],
        statistic: &str,
        value: Value,
    ) -> Self {
        ScanRecord {
            family: family.to_string(),
            n_or_p,
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            statistic: statistic.to_string(),
            value,
            normalizer: "1".into(),
            normalized: Some(value.to_f64()),
            wall_time_ms: 0,
        }
    }

    fn norm(mut self, name: &str, by: f64) -> Self {
        self.normalizer = name.to_string();
        self.normalized = (by != 0.0).then(|| self.value.to_f64() / by);
        self
    }

    pub fn flat_params(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Integers compare numerically, everything else as text.
fn natural_cmp(a: &[(String, String)], b: &[(String, String)]) -> Ordering {
    for ((ka, va), (kb, vb)) in a.iter().zip(b) {
        let o = ka
            .cmp(kb)
            .then_with(|| match (va.parse::<i64>(), vb.parse::<i64>()) {
                (Ok(x), Ok(y)) => x.cmp(&y),
                _ => va.cmp(vb),
            });
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Stable sort by `(n_or_p, params)`.
pub fn sort_records(records: &mut [ScanRecord]) {
    records.sort_by(|x, y| {
        x.n_or_p
            .cmp(&y.n_or_p)
            .then_with(|| natural_cmp(&x.params, &y.params))
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub d_limit: usize,
    /// Record wall times; off by default so output is reproducible.
    pub timing: bool,
    /// Emit per-parameter rows in addition to aggregates.
    pub detail: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            d_limit: DEFAULT_EXACT_LIMIT,
            timing: false,
            detail: false,
        }
    }
}

fn run_points<P, F>(points: &[P], opts: ScanOptions, f: F) -> Result<Vec<ScanRecord>>
where
    P: Sync,
    F: Fn(&P) -> Result<Vec<ScanRecord>> + Sync + Send,
{
    let chunks = par::map(points, |p| {
        let start = Instant::now();
        let mut rows = f(p)?;
        if opts.timing {
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut rows {
                r.wall_time_ms = ms;
            }
        }
        Ok(rows)
    });
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    sort_records(&mut out);
    Ok(out)
}

/// For each prime `p` in `[lo, hi]`: mean and min of `D*(ψ_k)` over units
/// `k`, the minimising `k` and the continued fraction of `k/p`.
pub fn scan_psi(lo: u64, hi: u64, opts: ScanOptions) -> Result<Vec<ScanRecord>> {
    let primes = primes_between(lo, hi);
    run_points(&primes, opts, |&p| {
        let n = p as usize;
        let ks: Vec<u64> = (1..p).collect();
        let scaled = par::map(&ks, |&k| d_star_scaled(&psi(n, k).expect("unit")));
        let sum: i64 = scaled.iter().sum();
        let (argmin, min) =
            ks.iter().zip(&scaled).fold(
                (0u64, i64::MAX),
                |acc, (&k, &d)| if d < acc.1 { (k, d) } else { acc },
            );
        let ln = (p as f64).ln();
        let log2 = (p as f64).log2();
        let pn = p as i64;
        let mut rows = vec![
            ScanRecord::new(
                "psi",
                p,
                &[],
                "mean_dstar",
                Value::exact(Ratio::new(sum, pn * (pn - 1))),
            )
            .norm("ln^2 p", ln * ln),
            ScanRecord::new(
                "psi",
                p,
                &[],
                "min_dstar",
                Value::exact(Ratio::new(min, pn)),
            )
            .norm("ln p", ln),
            ScanRecord::new(
                "psi",
                p,
                &[],
                "min_dstar_log2",
                Value::exact(Ratio::new(min, pn)),
            )
            .norm("log2 p", log2),
            ScanRecord::new("psi", p, &[], "argmin_k", Value::int(argmin as i64)),
        ];
        let cf = cf_of_rational(argmin as i64, p)?;
        let q = &cf.quotients;
        rows.push(
            ScanRecord::new(
                "psi",
                p,
                &[],
                "argmin_cf_max_quotient",
                Value::int(q.iter().copied().max().unwrap_or(0) as i64),
            )
            .norm("ln p", ln),
        );
        rows.push(
            ScanRecord::new(
                "psi",
                p,
                &[],
                "argmin_cf_quotient_sum",
                Value::int(q.iter().sum::<u64>() as i64),
            )
            .norm("ln p", ln),
        );
        rows.push(
            ScanRecord::new(
                "psi",
                p,
                &[],
                "argmin_cf_length",
                Value::int(q.len() as i64),
            )
            .norm("ln p", ln),
        );
        if n <= opts.d_limit {
            let d = d_exact(&psi(n, argmin)?, opts.d_limit)?;
            rows.push(
                ScanRecord::new("psi", p, &[], "argmin_d_exact", Value::exact(d)).norm("ln p", ln),
            );
            rows.push(
                ScanRecord::new("psi", p, &[], "argmin_d_exact_log2", Value::exact(d))
                    .norm("log2 p", log2),
            );
        }
        if opts.detail {
            for (&k, &d) in ks.iter().zip(&scaled) {
                rows.push(
                    ScanRecord::new(
                        "psi",
                        p,
                        &[("k", k.to_string())],
                        "dstar",
                        Value::exact(Ratio::new(d, pn)),
                    )
                    .norm("ln p", ln),
                );
            }
        }
        Ok(rows)
    })
}

/// Which `M` values a Gauss power-sum scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MPolicy {
    All,
    /// Multiples of the stride, plus `M = p`.
    Stride(u64),
}

/// Which multipliers `a` a Gauss power-sum scan visits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ASet {
    All,
    List(Vec<u64>),
}

/// For each prime `p` and exponent `k >= 2` with `gcd(k, p-1) = 1`:
/// `max_{a, M} |S(a, k, M)|` against `p^{3/4}`, and the complete sum.
pub fn scan_gauss(
    lo: u64,
    hi: u64,
    aset: &ASet,
    policy: MPolicy,
    opts: ScanOptions,
) -> Result<Vec<ScanRecord>> {
    if let MPolicy::Stride(0) = policy {
        return Err(Error::InvalidArgument("M stride must be positive".into()));
    }
    let points: Vec<(u64, u64)> = primes_between(lo.max(3), hi)
        .into_iter()
        .flat_map(|p| {
            (2..p - 1)
                .filter(move |&k| gcd(k, p - 1) == 1)
                .map(move |k| (p, k))
        })
        .collect();
    let mut rows = run_points(&points, opts, |&(p, k)| {
        let pm = PrimeModulus::new(p)?;
        let aa: Vec<u64> = match aset {
            ASet::All => (1..p).collect(),
            ASet::List(v) => {
                let mut v: Vec<u64> = v.iter().map(|a| a % p).filter(|&a| a != 0).collect();
                v.sort_unstable();
                v.dedup();
                v
            }
        };
        let p34 = (p as f64).powf(0.75);
        let (mut best, mut best_a, mut best_m, mut complete) = (0.0f64, 0u64, 0u64, 0.0f64);
        for &a in &aa {
            let mags = gauss_partial_magnitudes(&pm, a, k)?;
            for (i, &v) in mags.iter().enumerate() {
                let m = i as u64 + 1;
                let visit = match policy {
                    MPolicy::All => true,
                    MPolicy::Stride(s) => m.is_multiple_of(s) || m == p,
                };
                if visit && v > best {
                    (best, best_a, best_m) = (v, a, m);
                }
            }
            complete = complete.max(mags[p as usize - 1]);
        }
        let kp = [("k", k.to_string())];
        Ok(vec![
            ScanRecord::new("gauss", p, &kp, "max_partial", Value::Real { value: best })
                .norm("p^(3/4)", p34),
            ScanRecord::new("gauss", p, &kp, "argmax_a", Value::int(best_a as i64)),
            ScanRecord::new("gauss", p, &kp, "argmax_m", Value::int(best_m as i64)),
            ScanRecord::new(
                "gauss",
                p,
                &kp,
                "complete_sum",
                Value::Real { value: complete },
            ),
        ])
    })?;
    // one global row per prime, placed before its per-k rows
    let mut by_p: BTreeMap<u64, f64> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.statistic == "max_partial") {
        let e = by_p.entry(r.n_or_p).or_insert(0.0);
        *e = e.max(r.value.to_f64());
    }
    for (p, v) in by_p {
        rows.push(
            ScanRecord::new("gauss", p, &[], "global_max", Value::Real { value: v })
                .norm("p^(3/4)", (p as f64).powf(0.75)),
        );
    }
    sort_records(&mut rows);
    Ok(rows)
}

/// For each `α` and `n`: `D*(β_α)`, `max_s d*(A_s(α))`, and the exact check
/// `D* <= 2 max_s d*(A_s)`.
pub fn scan_sos(alphas: &[Alpha], ns: &[usize], opts: ScanOptions) -> Result<Vec<ScanRecord>> {
    let points: Vec<(Alpha, usize)> = alphas
        .iter()
        .flat_map(|a| ns.iter().map(move |&n| (*a, n)))
        .collect();
    run_points(&points, opts, |(alpha, n)| {
        let n = *n;
        let sigma = sos_perm(n, alpha, TieBreak::Error)?;
        let report = DiscrepancyReport::compute(&sigma, opts.d_limit);
        let rel = discrelation(alpha, n, report.d_star.0)?;
        let log2 = (n as f64).log2();
        let pa = [("alpha", alpha.to_string())];
        let mut rows =
            vec![
                ScanRecord::new("sos", n as u64, &pa, "dstar", Value::exact(report.d_star.0))
                    .norm("log2 n", log2),
            ];
        if let Some(d) = report.d_exact {
            rows.push(
                ScanRecord::new("sos", n as u64, &pa, "d_exact", Value::exact(d.0))
                    .norm("log2 n", log2),
            );
        }
        rows.push(
            ScanRecord::new(
                "sos",
                n as u64,
                &pa,
                "prefix_max",
                Value::Real {
                    value: rel.prefix.max,
                },
            )
            .norm("log2 n", log2),
        );
        rows.push(
            ScanRecord::new(
                "sos",
                n as u64,
                &pa,
                "prefix_full",
                Value::Real {
                    value: rel.prefix.full,
                },
            )
            .norm("log2 n", log2),
        );
        rows.push(ScanRecord::new(
            "sos",
            n as u64,
            &pa,
            "discrelation_holds",
            Value::flag(rel.holds),
        ));
        Ok(rows)
    })
}

/// `B_α(k)` for `k <= limit`, presence of each target in `A_α`, the size of
/// `A_α ∩ [n]` against `√(n / ln n)`, and the gap bound.
pub fn scan_obryant(
    alpha: &Alpha,
    limit: usize,
    targets: &[u64],
    opts: ScanOptions,
) -> Result<Vec<ScanRecord>> {
    if limit == 0 {
        return Err(Error::InvalidArgument("k limit must be positive".into()));
    }
    let sigma = sos_perm(limit, alpha, TieBreak::Error)?;
    let start = Instant::now();
    let b = b_values(&sigma);
    let a = a_set(&sigma);
    let report = DiscrepancyReport::compute(&sigma, opts.d_limit);
    let n = limit as u64;
    let pa = |extra: Option<(&'static str, u64)>| {
        let mut v = vec![("alpha", alpha.to_string())];
        if let Some((k, x)) = extra {
            v.push((k, x.to_string()));
        }
        v
    };
    let mut rows = Vec::new();
    if opts.detail || limit <= 64 {
        for (k, &bk) in b.iter().enumerate() {
            rows.push(ScanRecord::new(
                "obryant",
                n,
                &pa(Some(("k", k as u64 + 1))),
                "b",
                Value::int(bk as i64),
            ));
        }
    }
    for &t in targets {
        let first = b
            .iter()
            .position(|&x| x as u64 == t)
            .map_or(0, |i| i as i64 + 1);
        let p = pa(Some(("target", t)));
        rows.push(ScanRecord::new(
            "obryant",
            n,
            &p,
            "target_present",
            Value::flag(first > 0),
        ));
        rows.push(ScanRecord::new(
            "obryant",
            n,
            &p,
            "target_first_k",
            Value::int(first),
        ));
    }
    let nf = limit as f64;
    let length = gap_length(limit, report.d_upper.0);
    let widest = a.widest_empty.map_or(0, |(_, l)| l as u64);
    rows.push(
        ScanRecord::new(
            "obryant",
            n,
            &pa(None),
            "a_count",
            Value::int(a.count() as i64),
        )
        .norm(
            "sqrt(n/ln n)",
            if limit > 1 {
                (nf / nf.ln()).sqrt()
            } else {
                0.0
            },
        ),
    );
    rows.push(
        ScanRecord::new(
            "obryant",
            n,
            &pa(None),
            "max_gap",
            Value::int(a.max_gap as i64),
        )
        .norm("gap bound", length as f64),
    );
    rows.push(ScanRecord::new(
        "obryant",
        n,
        &pa(None),
        "gap_bound",
        Value::int(length as i64),
    ));
    rows.push(ScanRecord::new(
        "obryant",
        n,
        &pa(None),
        "gap_holds",
        Value::flag(widest < length),
    ));
    rows.push(
        ScanRecord::new(
            "obryant",
            n,
            &pa(None),
            "d_upper",
            Value::exact(report.d_upper.0),
        )
        .norm("log2 n", nf.log2()),
    );
    if opts.timing {
        let ms = start.elapsed().as_millis() as u64;
        rows.iter_mut().for_each(|r| r.wall_time_ms = ms);
    }
    sort_records(&mut rows);
    Ok(rows)
}

/// Zaremba search for every `n` in `[lo, hi]`.
pub fn scan_zaremba(lo: u64, hi: u64, bound: u64, opts: ScanOptions) -> Result<Vec<ScanRecord>> {
    let ns: Vec<u64> = (lo.max(2)..=hi).collect();
    run_points(&ns, opts, |&n| {
        let z = zaremba_search(n, bound)?;
        let r = |x: Ratio<u64>| Value::exact(Ratio::new(*x.numer() as i64, *x.denom() as i64));
        let pb = [("bound", bound.to_string())];
        Ok(vec![
            ScanRecord::new("zaremba", n, &pb, "k", Value::int(z.k as i64)),
            ScanRecord::new(
                "zaremba",
                n,
                &pb,
                "max_quotient",
                Value::int(z.max_quotient as i64),
            ),
            ScanRecord::new("zaremba", n, &pb, "max_prefix_avg", r(z.max_prefix_avg)),
            ScanRecord::new("zaremba", n, &pb, "certified", Value::flag(z.certified)),
            ScanRecord::new(
                "zaremba",
                n,
                &pb,
                "best_average_k",
                Value::int(z.best_average_k as i64),
            ),
            ScanRecord::new("zaremba", n, &pb, "best_average", r(z.best_average)),
        ])
    })
}

fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Header row plus one row per record, in the fixed column order.
pub fn csv_body(records: &[ScanRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for r in records {
        let (num, den) = match r.value {
            Value::Exact { num, den } => (num.to_string(), den.to_string()),
            Value::Real { value } => (String::new(), fmt_f64(value)),
        };
        w.write_record([
            r.family.clone(),
            r.n_or_p.to_string(),
            r.flat_params(),
            r.statistic.clone(),
            num,
            den,
            r.normalized.map(fmt_f64).unwrap_or_default(),
            r.wall_time_ms.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parses a CSV body back into `(statistic, n_or_p, params, value)` rows;
/// used to cross-check emitted files.
pub fn read_csv_values(text: &str) -> Result<Vec<(String, u64, String, f64)>> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(|e| Error::parse("csv", e.to_string()))?;
        let get = |i: usize| row.get(i).unwrap_or("");
        let value = if get(4).is_empty() {
            get(5).parse::<f64>()
        } else {
            get(4)
                .parse::<f64>()
                .and_then(|n| get(5).parse::<f64>().map(|d| n / d))
        }
        .map_err(|e| Error::parse("value", e.to_string()))?;
        let n = get(1).parse().map_err(|_| Error::parse("n_or_p", get(1)))?;
        out.push((get(3).to_string(), n, get(2).to_string(), value));
    }
    Ok(out)
}

/// Lowercase hex SHA-256.
pub fn digest(body: &str) -> String {
    Sha256::digest(body.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub normalizer: String,
    pub normalized_min: Option<f64>,
    pub normalized_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub library_version: String,
    pub schema_version: u32,
    pub config: BTreeMap<String, String>,
    pub records: usize,
    pub csv_body_sha256: String,
    pub statistics: BTreeMap<String, StatSummary>,
}

pub fn summarize(
    records: &[ScanRecord],
    config: &[(String, String)],
    body_digest: &str,
) -> Summary {
    let mut statistics: BTreeMap<String, StatSummary> = BTreeMap::new();
    let mut sums: BTreeMap<String, f64> = BTreeMap::new();
    for r in records {
        let v = r.value.to_f64();
        let e = statistics
            .entry(r.statistic.clone())
            .or_insert(StatSummary {
                count: 0,
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
                mean: 0.0,
                normalizer: r.normalizer.clone(),
                normalized_min: None,
                normalized_max: None,
            });
        e.count += 1;
        e.min = e.min.min(v);
        e.max = e.max.max(v);
        if let Some(x) = r.normalized {
            e.normalized_min = Some(e.normalized_min.map_or(x, |m| m.min(x)));
            e.normalized_max = Some(e.normalized_max.map_or(x, |m| m.max(x)));
        }
        *sums.entry(r.statistic.clone()).or_insert(0.0) += v;
    }
    for (k, s) in &mut statistics {
        s.mean = sums[k] / s.count as f64;
    }
    Summary {
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        schema_version: SCHEMA_VERSION,
        config: config.iter().cloned().collect(),
        records: records.len(),
        csv_body_sha256: body_digest.to_string(),
        statistics,
    }
}

/// `x, y, series` rows: `n_or_p`, the normalized value (raw when there is no
/// normalizer), and `statistic[params]`.
pub fn plot_data(records: &[ScanRecord]) -> String {
    let mut s = String::from("x,y,series\n");
    for r in records {
        let y = r.normalized.unwrap_or_else(|| r.value.to_f64());
        let series = if r.params.is_empty() {
            r.statistic.clone()
        } else {
            format!("{}[{}]", r.statistic, r.flat_params())
        };
        s.push_str(&format!(
            "{},{},\"{}\"\n",
            r.n_or_p,
            fmt_f64(y),
            series.replace('"', "'")
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Written {
    pub records: PathBuf,
    pub summary: PathBuf,
    pub plot: PathBuf,
    pub digest: String,
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `<stem>.csv` (or `.json`), `<stem>.summary.json` and
/// `<stem>.plot.csv` under `dir`. The CSV starts with `# key = value` lines
/// echoing `config`, followed by the body whose digest is returned.
pub fn emit(
    dir: &Path,
    stem: &str,
    records: &[ScanRecord],
    config: &[(String, String)],
    format: Format,
) -> Result<Written> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let body = csv_body(records)?;
    let dg = digest(&body);
    let records_path = match format {
        Format::Csv => {
            let mut text = String::new();
            for (k, v) in config {
                text.push_str(&format!("# {k} = {v}\n"));
            }
            text.push_str(&format!("# schema = {SCHEMA_VERSION}\n"));
            text.push_str(&body);
            let path = dir.join(format!("{stem}.csv"));
            write(&path, &text)?;
            path
        }
        Format::Json => {
            let path = dir.join(format!("{stem}.json"));
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "config": config.iter().cloned().collect::<BTreeMap<_, _>>(),
                "records": records,
            });
            write(
                &path,
                &serde_json::to_string_pretty(&doc).expect("records serialize"),
            )?;
            path
        }
    };
    let summary_path = dir.join(format!("{stem}.summary.json"));
    let summary = summarize(records, config, &dg);
    write(
        &summary_path,
        &serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;
    let plot_path = dir.join(format!("{stem}.plot.csv"));
    write(&plot_path, &plot_data(records))?;
    Ok(Written {
        records: records_path,
        summary: summary_path,
        plot: plot_path,
        digest: dg,
    })
}
