//! Exponential sums `Σ e(·)` with `e(x) = exp(2πix)`, and the Erdős–Turán
//! and completion bounds built on them.
//!
//! Phases that are rational with denominator `n` are reduced to an integer
//! residue first and read from a table of `n`-th roots of unity.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numtheory::{inverse_table, mod_pow, multiplicative_order, PrimeModulus};
use crate::perm::Permutation;

/// Neumaier-compensated sum of `f64`s.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ComplexAcc {
    re: Compensated,
    im: Compensated,
    terms: u64,
}

impl ComplexAcc {
    #[inline]
    fn add(&mut self, (re, im): (f64, f64)) {
        self.re.add(re);
        self.im.add(im);
        self.terms += 1;
    }

    fn finish(&self, params: Vec<(String, String)>) -> SumValue {
        SumValue {
            re: self.re.value(),
            im: self.im.value(),
            terms: self.terms,
            params,
        }
    }
}

/// Table of `e(r/n)` for `r` in `Z_n`.
#[derive(Debug, Clone)]
pub struct UnitRoots {
    n: u64,
    table: Vec<(f64, f64)>,
}

impl UnitRoots {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        let table = (0..n)
            .map(|r| {
                let (s, c) = (TAU * r as f64 / n as f64).sin_cos();
                (c, s)
            })
            .collect();
        Ok(UnitRoots { n, table })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `e(r/n)` for any integer `r`.
    #[inline]
    pub fn e(&self, r: i128) -> (f64, f64) {
        self.table[r.rem_euclid(self.n as i128) as usize]
    }

    #[inline]
    fn e_reduced(&self, r: u64) -> (f64, f64) {
        self.table[r as usize]
    }
}

/// `e(x)` for a real `x`, reducing the phase mod 1 first.
pub fn e_real(x: f64) -> (f64, f64) {
    let (s, c) = (TAU * (x - x.floor())).sin_cos();
    (c, s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumValue {
    pub re: f64,
    pub im: f64,
    pub terms: u64,
    pub params: Vec<(String, String)>,
}

impl SumValue {
    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn params(kv: &[(&str, i128)]) -> Vec<(String, String)> {
    kv.iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// `A(k) = Σ e(k x_i)`.
pub fn weyl_sum(points: &[f64], k: i64) -> Result<SumValue> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be nonzero".into()));
    }
    let mut acc = ComplexAcc::default();
    for &x in points {
        acc.add(e_real(k as f64 * x));
    }
    Ok(acc.finish(params(&[("m", points.len() as i128), ("k", k as i128)])))
}

/// `Σ_{s<m} e(k σ(s)/n)`.
pub fn incomplete_sigma_sum(sigma: &Permutation, k: i64, m: usize) -> Result<SumValue> {
    let n = sigma.n();
    if m == 0 || m > n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as u64,
            expected: "1 <= m <= n",
        });
    }
    let roots = UnitRoots::new(n as u64)?;
    let kr = (k as i128).rem_euclid(n as i128) as u64;
    let mut acc = ComplexAcc::default();
    for &v in &sigma.image()[..m] {
        acc.add(roots.e_reduced(kr * v as u64 % n as u64));
    }
    Ok(acc.finish(params(&[
        ("n", n as i128),
        ("k", k as i128),
        ("m", m as i128),
    ])))
}

/// `Σ_{s<n} e((k σ(s) + a s)/n)`.
pub fn twisted_full_sum(sigma: &Permutation, k: i64, a: i64) -> SumValue {
    let n = sigma.n() as u64;
    let roots = UnitRoots::new(n).expect("permutations are nonempty");
    twisted_with(&roots, sigma, k, a)
}

fn twisted_with(roots: &UnitRoots, sigma: &Permutation, k: i64, a: i64) -> SumValue {
    let n = roots.n();
    let kr = (k as i128).rem_euclid(n as i128) as u64;
    let ar = (a as i128).rem_euclid(n as i128) as u64;
    let mut acc = ComplexAcc::default();
    for (s, &v) in sigma.image().iter().enumerate() {
        acc.add(roots.e_reduced((kr * v as u64 + ar * s as u64) % n));
    }
    acc.finish(params(&[
        ("n", n as i128),
        ("k", k as i128),
        ("a", a as i128),
    ]))
}

/// `K(a, b) = Σ_{s ∈ Z_p^×} e((a s + b s^{-1})/p)`.
pub fn kloosterman(p: &PrimeModulus, a: i64, b: i64) -> SumValue {
    let q = p.get();
    let roots = UnitRoots::new(q).expect("prime modulus");
    let inv = inverse_table(p);
    let ar = (a as i128).rem_euclid(q as i128) as u64;
    let br = (b as i128).rem_euclid(q as i128) as u64;
    let mut acc = ComplexAcc::default();
    for s in 1..q {
        acc.add(roots.e_reduced((ar * s % q + br * inv[s as usize] % q) % q));
    }
    acc.finish(params(&[
        ("p", q as i128),
        ("a", a as i128),
        ("b", b as i128),
    ]))
}

/// Residues `a s^k mod p` for `s = 1..=p`.
fn power_residues(p: u64, a: u64, k: u64) -> Vec<u64> {
    (1..=p)
        .map(|s| {
            let sk = mod_pow(s % p, k, p).expect("prime modulus");
            a % p * sk % p
        })
        .collect()
}

fn check_power_args(p: &PrimeModulus, a: u64) -> Result<()> {
    if a.is_multiple_of(p.get()) {
        return Err(Error::NotAUnit {
            value: a,
            modulus: p.get(),
            gcd: p.get(),
        });
    }
    Ok(())
}

/// `S(a, k, M) = Σ_{s=1}^{M} e(a s^k / p)`.
pub fn gauss_power_sum(p: &PrimeModulus, a: u64, k: u64, m: u64) -> Result<SumValue> {
    check_power_args(p, a)?;
    let q = p.get();
    if m == 0 || m > q {
        return Err(Error::OutOfRange {
            what: "M",
            value: m,
            expected: "1 <= M <= p",
        });
    }
    let roots = UnitRoots::new(q)?;
    let mut acc = ComplexAcc::default();
    for s in 1..=m {
        let sk = mod_pow(s % q, k, q)?;
        acc.add(roots.e_reduced(a % q * sk % q));
    }
    Ok(acc.finish(params(&[
        ("p", q as i128),
        ("a", a as i128),
        ("k", k as i128),
        ("M", m as i128),
    ])))
}

/// `|S(a, k, M)|` for every `M = 1..=p`, from one compensated running sum.
pub fn gauss_partial_magnitudes(p: &PrimeModulus, a: u64, k: u64) -> Result<Vec<f64>> {
    check_power_args(p, a)?;
    let q = p.get();
    let roots = UnitRoots::new(q)?;
    let mut acc = ComplexAcc::default();
    Ok(power_residues(q, a, k)
        .into_iter()
        .map(|r| {
            acc.add(roots.e_reduced(r));
            acc.re.value().hypot(acc.im.value())
        })
        .collect())
}

/// `W_{a,c}(t) = Σ_{k=1}^{t} |Σ_{x=1}^{t} e((a θ^x + c θ^{xk})/p)|` where
/// `θ` has order `t`.
pub fn w_sum(p: &PrimeModulus, a: i64, c: i64, theta: u64, t: u64) -> Result<f64> {
    let q = p.get();
    let cr = (c as i128).rem_euclid(q as i128) as u64;
    if cr == 0 {
        return Err(Error::InvalidArgument("c must be nonzero mod p".into()));
    }
    let order = multiplicative_order(theta, p)?;
    if order != t {
        return Err(Error::InvalidGenerator {
            tau: theta,
            p: q,
            order,
        });
    }
    let ar = (a as i128).rem_euclid(q as i128) as u64;
    let roots = UnitRoots::new(q)?;
    // powers[x] = θ^x for x in 0..t; θ^{xk} = powers[xk mod t]
    let mut powers = Vec::with_capacity(t as usize);
    let mut cur = 1u64;
    for _ in 0..t {
        powers.push(cur);
        cur = cur * (theta % q) % q;
    }
    let tt = t as usize;
    let mut total = Compensated::default();
    for k in 1..=tt {
        let mut acc = ComplexAcc::default();
        for x in 1..=tt {
            let r = (ar * powers[x % tt] + cr * powers[x * k % tt]) % q;
            acc.add(roots.e_reduced(r));
        }
        total.add(acc.re.value().hypot(acc.im.value()));
    }
    Ok(total.value())
}

/// `J̃(k) = Σ_{x ∈ J} e(-k x / n)`.
pub fn interval_fourier(j: &Interval, k: i64) -> Result<SumValue> {
    let n = j.n() as u64;
    let kr = (k as i128).rem_euclid(n as i128) as u64;
    if kr == 0 {
        return Err(Error::InvalidArgument(format!("k = {k} is 0 mod {n}")));
    }
    let roots = UnitRoots::new(n)?;
    let neg = n - kr;
    let mut acc = ComplexAcc::default();
    for x in j.iter() {
        acc.add(roots.e_reduced(neg * x as u64 % n));
    }
    Ok(acc.finish(params(&[
        ("n", n as i128),
        ("start", j.start() as i128),
        ("len", j.len() as i128),
        ("k", k as i128),
    ])))
}

/// `|A(k)|` for `k = 1..=kmax`.
pub fn weyl_spectrum(points: &[f64], kmax: usize) -> Vec<f64> {
    (1..=kmax as i64)
        .map(|k| weyl_sum(points, k).expect("k >= 1").magnitude())
        .collect()
}

/// `|A(k)|` for `x_i = σ(i)/n`, `k = 1..=kmax`, from exact residues.
pub fn sigma_spectrum(sigma: &Permutation, kmax: usize) -> Vec<f64> {
    let n = sigma.n() as u64;
    let roots = UnitRoots::new(n).expect("permutations are nonempty");
    (1..=kmax as u64)
        .map(|k| {
            let mut acc = ComplexAcc::default();
            for &v in sigma.image() {
                acc.add(roots.e_reduced(k % n * v as u64 % n));
            }
            acc.re.value().hypot(acc.im.value())
        })
        .collect()
}

/// `C (m/K + Σ_{k=1}^{K} |A(k)|/k)`.
pub fn erdos_turan_bound(points: &[f64], k: usize, c: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be positive".into()));
    }
    Ok(erdos_turan_profile(points.len(), &weyl_spectrum(points, k), c)[k - 1])
}

/// The bound for every `K = 1..=spectrum.len()` given `|A(k)|`.
pub fn erdos_turan_profile(m: usize, spectrum: &[f64], c: f64) -> Vec<f64> {
    let mut tail = Compensated::default();
    spectrum
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let k = (i + 1) as f64;
            tail.add(a / k);
            c * (m as f64 / k + tail.value())
        })
        .collect()
}

/// `(K, bound)` minimising the bound over `K = 1..=kmax`.
pub fn erdos_turan_min(points: &[f64], kmax: usize, c: f64) -> Result<(usize, f64)> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("K must be positive".into()));
    }
    let profile = erdos_turan_profile(points.len(), &weyl_spectrum(points, kmax), c);
    let (i, b) = profile
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("kmax >= 1");
    Ok((i + 1, *b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionReport {
    pub n: usize,
    pub k: i64,
    /// Max over intervals of `Z_n` of `|Σ_{s ∈ I} e(k σ(s)/n)|`.
    pub incomplete_max: f64,
    /// Max over `a` of the twisted full sum.
    pub twisted_max: f64,
    pub ratio: f64,
    /// `1 + ln n`
    pub bound: f64,
    pub holds: bool,
}

/// Compares the worst incomplete sum with the worst complete twisted sum.
pub fn completion_check(sigma: &Permutation, k: i64) -> CompletionReport {
    let n = sigma.n();
    let roots = UnitRoots::new(n as u64).expect("permutations are nonempty");
    let kr = (k as i128).rem_euclid(n as i128) as u64;
    // prefix sums over two periods so every cyclic window is a difference
    let mut pre = Vec::with_capacity(2 * n + 1);
    let mut acc = ComplexAcc::default();
    pre.push((0.0, 0.0));
    for s in 0..2 * n {
        acc.add(roots.e_reduced(kr * sigma.image()[s % n] as u64 % n as u64));
        pre.push((acc.re.value(), acc.im.value()));
    }
    let mut incomplete_max: f64 = 0.0;
    for j in 0..n {
        for len in 1..=n {
            let (a, b) = (pre[j + len], pre[j]);
            incomplete_max = incomplete_max.max((a.0 - b.0).hypot(a.1 - b.1));
        }
    }
    let twisted_max = (0..n as i64)
        .map(|a| twisted_with(&roots, sigma, k, a).magnitude())
        .fold(0.0, f64::max);
    let ratio = incomplete_max / twisted_max;
    let bound = 1.0 + (n as f64).ln();
    CompletionReport {
        n,
        k,
        incomplete_max,
        twisted_max,
        ratio,
        bound,
        holds: ratio <= bound,
    }
}
