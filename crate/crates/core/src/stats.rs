//! Statistics for the equivalent quasirandomness properties: pattern counts,
//! separability, eigenvalue and translation functionals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::disc::DiscrepancyReport;
use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::expsum::UnitRoots;
use crate::interval::Interval;
use crate::par;
use crate::perm::Permutation;

/// A pattern `τ ∈ S_m`, `m <= 3`, written as its one-line image, e.g. `021`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pattern(Vec<u8>);

impl Pattern {
    pub fn new(image: &[u8]) -> Result<Self> {
        let m = image.len();
        if m == 0 || m > 3 {
            return Err(Error::InvalidArgument(format!(
                "pattern length {m} not in 1..=3"
            )));
        }
        let mut seen = [false; 3];
        for &v in image {
            if v as usize >= m || seen[v as usize] {
                return Err(Error::InvalidArgument(format!(
                    "{image:?} is not a permutation"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Pattern(image.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn image(&self) -> &[u8] {
        &self.0
    }

    /// All patterns of length `m`, lexicographic.
    pub fn all(m: usize) -> Vec<Pattern> {
        match m {
            1 => vec![Pattern(vec![0])],
            2 => vec![Pattern(vec![0, 1]), Pattern(vec![1, 0])],
            3 => [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ]
            .iter()
            .map(|p| Pattern(p.to_vec()))
            .collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let digits = t
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::parse("pattern", format!("bad digit {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(&digits).map_err(|e| Error::parse("pattern", e.to_string()))
    }
}

impl TryFrom<String> for Pattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> String {
        p.to_string()
    }
}

/// Size limits for pattern counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCaps {
    pub len2: usize,
    pub len3: usize,
}

impl Default for PatternCaps {
    fn default() -> Self {
        PatternCaps {
            len2: 1_000_000,
            len3: 2000,
        }
    }
}

/// `(less, greater)` counts among earlier entries, for each position.
fn left_counts(values: &[u32], n: usize) -> Vec<(u64, u64)> {
    let mut tree = vec![0u32; n + 1];
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut less = 0u64;
            let mut j = v as usize;
            while j > 0 {
                less += tree[j] as u64;
                j -= j & j.wrapping_neg();
            }
            let mut j = v as usize + 1;
            while j <= n {
                tree[j] += 1;
                j += j & j.wrapping_neg();
            }
            (less, i as u64 - less)
        })
        .collect()
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Occurrences of `τ` in a sequence of distinct values below `bound`.
fn count_in(values: &[u32], bound: usize, tau: &Pattern) -> u64 {
    let m = values.len() as u64;
    match tau.image() {
        [0] => m,
        [0, 1] => left_counts(values, bound).iter().map(|c| c.0).sum(),
        [1, 0] => left_counts(values, bound).iter().map(|c| c.1).sum(),
        t => {
            let left = left_counts(values, bound);
            let rev: Vec<u32> = values.iter().rev().copied().collect();
            let mut right = left_counts(&rev, bound);
            right.reverse();
            // right[i] = (less, greater) among later entries
            let mut s = [0u64; 6];
            for (&(ll, lg), &(rl, rg)) in left.iter().zip(&right) {
                s[0] += ll * rg;
                s[1] += lg * rl;
                s[2] += choose2(rg);
                s[3] += ll * rl;
                s[4] += choose2(rl);
                s[5] += lg * rg;
            }
            let (p012, p210) = (s[0], s[1]);
            let p021 = s[2] - p012;
            let p120 = s[3] - p021;
            let p201 = s[4] - p210;
            let p102 = s[5] - p201;
            match t {
                [0, 1, 2] => p012,
                [0, 2, 1] => p021,
                [1, 0, 2] => p102,
                [1, 2, 0] => p120,
                [2, 0, 1] => p201,
                _ => p210,
            }
        }
    }
}

fn check_caps(n: usize, tau: &Pattern, caps: PatternCaps) -> Result<()> {
    let limit = match tau.len() {
        3 => caps.len3,
        2 => caps.len2,
        _ => usize::MAX,
    };
    if n > limit {
        return Err(Error::SizeRefused {
            op: "pattern_count",
            n,
            limit,
        });
    }
    Ok(())
}

/// `X^τ(σ)`.
pub fn pattern_count(sigma: &Permutation, tau: &Pattern) -> Result<u64> {
    pattern_count_capped(sigma, tau, PatternCaps::default())
}

pub fn pattern_count_capped(sigma: &Permutation, tau: &Pattern, caps: PatternCaps) -> Result<u64> {
    check_caps(sigma.n(), tau, caps)?;
    Ok(count_in(sigma.image(), sigma.n(), tau))
}

/// Values of `σ` at the positions `I ∩ σ^{-1}(J)`, in increasing position order.
pub fn restriction(sigma: &Permutation, i: &Interval, j: &Interval) -> Vec<u32> {
    let mut xs: Vec<usize> = i.iter().filter(|&x| j.contains(sigma.apply(x))).collect();
    xs.sort_unstable();
    xs.into_iter().map(|x| sigma.image()[x]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedCount {
    pub count: u64,
    /// `|I ∩ σ^{-1}(J)|`
    pub size: usize,
}

/// `X^τ(σ|_{I ∩ σ^{-1}(J)})` with positions in domain order.
pub fn restricted_pattern_count(
    sigma: &Permutation,
    tau: &Pattern,
    i: &Interval,
    j: &Interval,
) -> Result<RestrictedCount> {
    check_caps(sigma.n(), tau, PatternCaps::default())?;
    let r = restriction(sigma, i, j);
    Ok(RestrictedCount {
        count: count_in(&r, sigma.n(), tau),
        size: r.len(),
    })
}

/// `X^{(01)} - X^{(10)}` on the restriction.
pub fn two_subseq_stat(sigma: &Permutation, i: &Interval, j: &Interval) -> Result<i64> {
    check_caps(sigma.n(), &Pattern(vec![0, 1]), PatternCaps::default())?;
    let r = restriction(sigma, i, j);
    let asc: u64 = left_counts(&r, sigma.n()).iter().map(|c| c.0).sum();
    let m = r.len() as u64;
    Ok(2 * asc as i64 - choose2(m) as i64)
}

/// `|Σ_{x ∈ K ∩ σ^{-1}(K')} I(x) J(σ(x)) - (1/n) Σ_{x ∈ K, y ∈ K'} I(x) J(y)|`.
pub fn separability_stat(
    sigma: &Permutation,
    i: &Interval,
    j: &Interval,
    k: &Interval,
    k2: &Interval,
) -> Ratio<i64> {
    let n = sigma.n() as i64;
    let mut hits = 0i64;
    let mut dom = 0i64;
    for x in 0..sigma.n() {
        if k.contains(x) && i.contains(x) {
            dom += 1;
            let y = sigma.apply(x);
            if k2.contains(y) && j.contains(y) {
                hits += 1;
            }
        }
    }
    let cod = (0..sigma.n())
        .filter(|&y| k2.contains(y) && j.contains(y))
        .count() as i64;
    Ratio::new((n * hits - dom * cod).abs(), n)
}

/// Sum over every cyclic window of `z` is a difference of two prefix points,
/// so the largest window magnitude is the diameter of the prefix polygon
/// when the full sum vanishes. Returns `(magnitude, a, b)` for prefix
/// indices `a`, `b`.
fn prefix_diameter(prefix: &[(f64, f64)]) -> (f64, usize, usize) {
    let mut idx: Vec<usize> = (0..prefix.len()).collect();
    idx.sort_by(|&a, &b| {
        prefix[a]
            .0
            .total_cmp(&prefix[b].0)
            .then(prefix[a].1.total_cmp(&prefix[b].1))
    });
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (prefix[o], prefix[a], prefix[b]);
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let it: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &p in it {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.is_empty() {
        hull.push(idx[0]);
    }
    let mut best = (0.0, 0, 0);
    for (x, &a) in hull.iter().enumerate() {
        for &b in &hull[x + 1..] {
            let d = (prefix[a].0 - prefix[b].0).hypot(prefix[a].1 - prefix[b].1);
            if d > best.0 {
                best = (d, a.min(b), a.max(b));
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueStat {
    pub alpha: f64,
    /// `max_{k, I} |Σ_{s ∈ σ(I)} e(-ks/n)| / |k|^α`
    pub value: f64,
    pub k: i64,
    pub interval: Interval,
    /// The unnormalized magnitude at the maximiser.
    pub magnitude: f64,
}

pub const EIGENVALUE_CAP: usize = 4096;

fn window_max(sigma: &Permutation, roots: &UnitRoots, k: i64) -> (f64, Interval) {
    let n = sigma.n();
    let neg = (-(k as i128)).rem_euclid(n as i128) as u64;
    let mut prefix = Vec::with_capacity(n);
    let (mut re, mut im) = (0.0f64, 0.0f64);
    prefix.push((0.0, 0.0));
    for &v in &sigma.image()[..n - 1] {
        let (c, s) = roots.e(neg as i128 * v as i128);
        re += c;
        im += s;
        prefix.push((re, im));
    }
    let (mag, a, b) = prefix_diameter(&prefix);
    let interval = if a == b {
        Interval::new(n, 0, 1).expect("n >= 1")
    } else {
        Interval::new(n, a, b - a).expect("a < b < n")
    };
    (mag, interval)
}

/// The `[E(α)]` statistic over `k ∈ (-n/2, n/2] \ {0}` and all intervals `I`.
pub fn eigenvalue_stat(sigma: &Permutation, alpha: f64) -> Result<Option<EigenvalueStat>> {
    let n = sigma.n();
    if n > EIGENVALUE_CAP {
        return Err(Error::SizeRefused {
            op: "eigenvalue_stat",
            n,
            limit: EIGENVALUE_CAP,
        });
    }
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must be positive"
        )));
    }
    if n < 2 {
        return Ok(None);
    }
    let roots = UnitRoots::new(n as u64)?;
    let half = (n / 2) as i64;
    let ks: Vec<i64> = (-(((n - 1) / 2) as i64)..=half)
        .filter(|&k| k != 0)
        .collect();
    let rows = par::map(&ks, |&k| {
        let (mag, interval) = window_max(sigma, &roots, k);
        (
            mag / (k.unsigned_abs() as f64).powf(alpha),
            k,
            interval,
            mag,
        )
    });
    // deterministic: first maximiser in k order
    let best = rows
        .into_iter()
        .fold(None::<(f64, i64, Interval, f64)>, |acc, r| match acc {
            Some(a) if a.0 >= r.0 => Some(a),
            _ => Some(r),
        })
        .expect("n >= 2");
    Ok(Some(EigenvalueStat {
        alpha,
        value: best.0,
        k: best.1,
        interval: best.2,
        magnitude: best.3,
    }))
}

/// `Σ_{k ∈ Z_n} (|σ(I) ∩ (J + k)| - |I||J|/n)²`.
pub fn translation_stat(sigma: &Permutation, i: &Interval, j: &Interval) -> Ratio<i64> {
    let n = sigma.n();
    // k with y - k ∈ J form the cyclic range y - start - len + 1 ..= y - start
    let mut diff = vec![0i64; n + 1];
    let mut add = |lo: usize, len: usize| {
        let hi = lo + len;
        if hi <= n {
            diff[lo] += 1;
            diff[hi] -= 1;
        } else {
            diff[lo] += 1;
            diff[n] -= 1;
            diff[0] += 1;
            diff[hi - n] -= 1;
        }
    };
    for x in i.iter() {
        let y = sigma.apply(x);
        let lo = (y + 2 * n - j.start() - j.len() + 1) % n;
        add(lo, j.len());
    }
    let prod = (i.len() * j.len()) as i64;
    let nn = n as i64;
    let mut c = 0i64;
    let mut total = 0i128;
    for d in &diff[..n] {
        c += d;
        let dev = (nn * c - prod) as i128;
        total += dev * dev;
    }
    Ratio::new(i64::try_from(total).expect("translation sum fits"), nn * nn)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyProfile {
    pub n: usize,
    /// Upper bound on `D(σ)`: exact below the cap, else `4 D*`.
    pub ub: Exact,
    /// `X^{(01)} - X^{(10)}` over the full domain.
    pub two_s: i64,
    /// Separability deviation over `K, K'` halves and initial `I, J`.
    pub sp_max: Exact,
    /// Eigenvalue statistic at `α = 1`; absent above its cap.
    pub e_alpha_max: Option<f64>,
    /// Translation sum for `I = J = [0, ⌊n/2⌋)`.
    pub t_sum: Exact,
    pub pattern_counts: BTreeMap<Pattern, u64>,
}

/// `max |hits - |K∩I||K'∩J|/n|` over initial `I`, `J` for fixed `K`, `K'`.
fn separability_initial(sigma: &Permutation, k: &Interval, k2: &Interval) -> i64 {
    let n = sigma.n();
    let nn = n as i64;
    // cod[b] = |K' ∩ [0, b)|
    let mut cod = vec![0i64; n + 1];
    for b in 0..n {
        cod[b + 1] = cod[b] + k2.contains(b) as i64;
    }
    let mut g = vec![0i64; n + 1];
    let mut dom = 0i64;
    let mut best = 0i64;
    for x in 0..n {
        if !k.contains(x) {
            continue;
        }
        dom += 1;
        let y = sigma.apply(x);
        let inside = k2.contains(y);
        for b in 0..=n {
            let hit = (inside && y < b) as i64;
            g[b] += nn * hit;
            best = best.max((g[b] - dom * cod[b]).abs());
        }
    }
    best
}

impl PropertyProfile {
    pub fn compute(sigma: &Permutation, d_limit: usize, caps: PatternCaps) -> Result<Self> {
        let n = sigma.n();
        let report = DiscrepancyReport::compute(sigma, d_limit);
        let full = Interval::full(n);
        let two_s = two_subseq_stat(sigma, &full, &full)?;
        let h = n / 2;
        let halves: Vec<Interval> = if h == 0 {
            vec![full]
        } else {
            vec![Interval::new(n, 0, h)?, Interval::new(n, h, n - h)?]
        };
        let pairs: Vec<(Interval, Interval)> = halves
            .iter()
            .flat_map(|a| halves.iter().map(move |b| (*a, *b)))
            .collect();
        let sp = par::map(&pairs, |(k, k2)| separability_initial(sigma, k, k2))
            .into_iter()
            .max()
            .unwrap_or(0);
        let e_alpha_max = if n <= EIGENVALUE_CAP {
            eigenvalue_stat(sigma, 1.0)?.map(|e| e.value)
        } else {
            None
        };
        let half = Interval::new(n, 0, h.max(1))?;
        let t_sum = translation_stat(sigma, &half, &half);
        let mut pattern_counts = BTreeMap::new();
        for m in 1..=3 {
            for tau in Pattern::all(m) {
                if let Ok(c) = pattern_count_capped(sigma, &tau, caps) {
                    pattern_counts.insert(tau, c);
                }
            }
        }
        Ok(PropertyProfile {
            n,
            ub: report.d_upper,
            two_s,
            sp_max: Ratio::new(sp, n as i64).into(),
            e_alpha_max,
            t_sum: t_sum.into(),
            pattern_counts,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::PrimeModulus;
    use crate::perm::{lambda_inv, psi, random_perm, Family, Provenance};
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn from(v: &[u32]) -> Permutation {
        Permutation::from_image(v.to_vec(), Provenance::new(Family::External)).unwrap()
    }

    fn brute(values: &[u32], tau: &Pattern) -> u64 {
        let m = values.len();
        let t = tau.image();
        let fits = |idx: &[usize]| {
            (0..idx.len())
                .all(|a| (0..idx.len()).all(|b| (values[idx[a]] < values[idx[b]]) == (t[a] < t[b])))
        };
        let mut c = 0;
        match t.len() {
            1 => c = m as u64,
            2 => {
                for x in 0..m {
                    for y in x + 1..m {
                        c += fits(&[x, y]) as u64;
                    }
                }
            }
            _ => {
                for x in 0..m {
                    for y in x + 1..m {
                        for z in y + 1..m {
                            c += fits(&[x, y, z]) as u64;
                        }
                    }
                }
            }
        }
        c
    }

    #[test]
    fn pattern_parse() {
        assert_eq!("(021)".parse::<Pattern>().unwrap().image(), &[0, 2, 1]);
        assert_eq!("1,0".parse::<Pattern>().unwrap().to_string(), "10");
        assert!("011".parse::<Pattern>().is_err());
        assert!("0123".parse::<Pattern>().is_err());
        assert!("0x".parse::<Pattern>().is_err());
    }

    #[test]
    fn pattern_examples() {
        let n = 40;
        let c2 = (n * (n - 1) / 2) as u64;
        let p01 = Pattern::new(&[0, 1]).unwrap();
        let p10 = Pattern::new(&[1, 0]).unwrap();
        assert_eq!(
            pattern_count(&Permutation::identity(n).unwrap(), &p01).unwrap(),
            c2
        );
        assert_eq!(
            pattern_count(&Permutation::reversal(n).unwrap(), &p10).unwrap(),
            c2
        );
        let s = from(&[0, 2, 1, 3]);
        assert_eq!(
            pattern_count(&s, &Pattern::new(&[0, 1, 2]).unwrap()).unwrap(),
            2
        );
        let big = Permutation::identity(2001).unwrap();
        assert!(matches!(
            pattern_count(&big, &Pattern::new(&[0, 1, 2]).unwrap()),
            Err(Error::SizeRefused { .. })
        ));
        assert!(pattern_count(&big, &p01).is_ok());
    }

    #[test]
    fn fast_counts_match_brute_force() {
        for n in 1..=30 {
            let s = random_perm(n, n as u64).unwrap();
            let mut total3 = 0;
            for m in 1..=3 {
                for tau in Pattern::all(m) {
                    let c = pattern_count(&s, &tau).unwrap();
                    assert_eq!(c, brute(s.image(), &tau), "n={n} tau={tau}");
                    if m == 3 {
                        total3 += c;
                    }
                }
            }
            assert_eq!(
                total3,
                (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as u64
            );
        }
    }

    #[test]
    fn restricted_examples() {
        let n = 101;
        let full = Interval::full(n);
        let s = psi(n, 37).unwrap();
        for tau in Pattern::all(3) {
            let r = restricted_pattern_count(&s, &tau, &full, &full).unwrap();
            assert_eq!(r.count, pattern_count(&s, &tau).unwrap());
            assert_eq!(r.size, n);
        }
        let id = Permutation::identity(n).unwrap();
        let i = Interval::new(n, 90, 40).unwrap();
        let j = Interval::new(n, 10, 60).unwrap();
        let r = restricted_pattern_count(&id, &Pattern::new(&[0, 1]).unwrap(), &i, &j).unwrap();
        assert_eq!(r.count, (r.size * (r.size - 1) / 2) as u64);
        let halves = [
            Interval::new(n, 0, 51).unwrap(),
            Interval::new(n, 50, 51).unwrap(),
        ];
        for i in &halves {
            for j in &halves {
                let vals: Vec<u32> = (0..n)
                    .filter(|&x| i.contains(x) && j.contains(s.apply(x)))
                    .map(|x| s.image()[x])
                    .collect();
                for tau in Pattern::all(3) {
                    let r = restricted_pattern_count(&s, &tau, i, j).unwrap();
                    assert_eq!(r.count, brute(&vals, &tau));
                }
            }
        }
    }

    #[test]
    fn two_subseq_examples() {
        let n = 64;
        let full = Interval::full(n);
        let c2 = (n * (n - 1) / 2) as i64;
        assert_eq!(
            two_subseq_stat(&Permutation::identity(n).unwrap(), &full, &full).unwrap(),
            c2
        );
        assert_eq!(
            two_subseq_stat(&Permutation::reversal(n).unwrap(), &full, &full).unwrap(),
            -c2
        );
        let s = random_perm(n, 5).unwrap();
        let flipped = s.compose(&Permutation::reversal(n).unwrap()).unwrap();
        assert_eq!(
            two_subseq_stat(&s, &full, &full).unwrap(),
            -two_subseq_stat(&flipped, &full, &full).unwrap()
        );
    }

    #[test]
    fn separability_examples() {
        let n = 64;
        let s = random_perm(n, 3).unwrap();
        let full = Interval::full(n);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut iv = || Interval::new(n, rng.gen_range(0..n), rng.gen_range(1..=n)).unwrap();
        for _ in 0..200 {
            let (i, j, k, k2) = (iv(), iv(), iv(), iv());
            let got = separability_stat(&s, &i, &j, &k, &k2);
            // direct double loop
            let mut first = 0i64;
            for x in 0..n {
                if k.contains(x)
                    && k2.contains(s.apply(x))
                    && i.contains(x)
                    && j.contains(s.apply(x))
                {
                    first += 1;
                }
            }
            let mut second = 0i64;
            for x in 0..n {
                for y in 0..n {
                    second +=
                        (k.contains(x) && k2.contains(y) && i.contains(x) && j.contains(y)) as i64;
                }
            }
            assert_eq!(
                got,
                (Ratio::from_integer(first) - Ratio::new(second, n as i64)).abs()
            );
            let collapsed = separability_stat(&s, &i, &j, &full, &full);
            let inter = i.iter().filter(|&x| j.contains(s.apply(x))).count() as i64;
            assert_eq!(
                collapsed,
                Ratio::new(
                    (n as i64 * inter - (i.len() * j.len()) as i64).abs(),
                    n as i64
                )
            );
        }
        assert_eq!(
            separability_stat(&s, &full, &full, &full, &full),
            Ratio::from_integer(0)
        );
    }

    fn direct_window(s: &Permutation, k: i64, i: &Interval) -> f64 {
        let n = s.n() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for x in i.iter() {
            let t = -std::f64::consts::TAU * k as f64 * s.apply(x) as f64 / n;
            re += t.cos();
            im += t.sin();
        }
        f64::hypot(re, im)
    }

    #[test]
    fn eigenvalue_examples() {
        let id = Permutation::identity(30).unwrap();
        for k in 1..15 {
            assert!(direct_window(&id, k, &Interval::full(30)) < 1e-9);
        }
        let s = random_perm(24, 1).unwrap();
        let e = eigenvalue_stat(&s, 1.0).unwrap().unwrap();
        let mut best: f64 = 0.0;
        for k in -11..=12i64 {
            if k == 0 {
                continue;
            }
            for st in 0..24 {
                for len in 1..=24 {
                    let i = Interval::new(24, st, len).unwrap();
                    let v = direct_window(&s, k, &i);
                    assert!(v <= len as f64 + 1e-9);
                    best = best.max(v / k.unsigned_abs() as f64);
                }
            }
        }
        assert!((e.value - best).abs() < 1e-9, "{} vs {best}", e.value);
        assert!((direct_window(&s, e.k, &e.interval) - e.magnitude).abs() < 1e-9);
        assert!(eigenvalue_stat(&Permutation::identity(4097).unwrap(), 1.0).is_err());
    }

    #[test]
    fn eigenvalue_probes_psi() {
        let s = psi(257, 3).unwrap();
        let e = eigenvalue_stat(&s, 1.0).unwrap().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let k = rng.gen_range(1..=128i64) * if rng.gen_bool(0.5) { -1 } else { 1 };
            let i = Interval::new(257, rng.gen_range(0..257), rng.gen_range(1..=257)).unwrap();
            let v = direct_window(&s, k, &i) / k.unsigned_abs() as f64;
            assert!(v <= e.value + 1e-9);
        }
        assert!(
            (direct_window(&s, e.k, &e.interval) / e.k.unsigned_abs() as f64 - e.value).abs()
                < 1e-9
        );
    }

    fn translation_direct(s: &Permutation, i: &Interval, j: &Interval) -> Ratio<i64> {
        let n = s.n();
        let mut total = Ratio::from_integer(0);
        for k in 0..n {
            let jk = j.shifted(k);
            let c = i.iter().filter(|&x| jk.contains(s.apply(x))).count() as i64;
            let d = Ratio::from_integer(c) - Ratio::new((i.len() * j.len()) as i64, n as i64);
            total += d * d;
        }
        total
    }

    #[test]
    fn translation_examples() {
        let n = 64;
        let full = Interval::full(n);
        let s = random_perm(n, 6).unwrap();
        assert_eq!(translation_stat(&s, &full, &full), Ratio::from_integer(0));
        let zero = Interval::new(n, 0, 1).unwrap();
        let id = Permutation::identity(n).unwrap();
        assert_eq!(
            translation_stat(&id, &zero, &zero),
            Ratio::new(n as i64 - 1, n as i64)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let i = Interval::new(n, rng.gen_range(0..n), rng.gen_range(1..=n)).unwrap();
            let j = Interval::new(n, rng.gen_range(0..n), rng.gen_range(1..=n)).unwrap();
            let t = translation_stat(&s, &i, &j);
            assert_eq!(t, translation_direct(&s, &i, &j));
            assert_eq!(t, translation_stat(&s, &i, &j.shifted(rng.gen_range(0..n))));
        }
    }

    #[test]
    fn profile_separates_psi_from_identity() {
        let n = 256;
        let caps = PatternCaps::default();
        let id = PropertyProfile::compute(&Permutation::identity(n).unwrap(), 512, caps).unwrap();
        // best k by D*
        let best = (1..n as u64)
            .filter(|&k| crate::numtheory::gcd(k, n as u64) == 1)
            .map(|k| psi(n, k).unwrap())
            .min_by_key(crate::disc::d_star)
            .unwrap();
        let qr = PropertyProfile::compute(&best, 512, caps).unwrap();
        assert!(qr.two_s.abs() < id.two_s.abs());
        assert!(qr.e_alpha_max.unwrap() < id.e_alpha_max.unwrap());
        assert!(qr.t_sum < id.t_sum);
        assert_eq!(
            id.pattern_counts[&Pattern::new(&[0, 1]).unwrap()],
            (n * (n - 1) / 2) as u64
        );
        let json = serde_json::to_string(&qr).unwrap();
        let back: PropertyProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.pattern_counts, qr.pattern_counts);
    }

    #[test]
    fn lambda_profile_runs() {
        let p = PrimeModulus::new(101).unwrap();
        let l = lambda_inv(&p, 1).unwrap();
        let prof = PropertyProfile::compute(&l, 512, PatternCaps::default()).unwrap();
        let c = &prof.pattern_counts;
        let p01 = c[&Pattern::new(&[0, 1]).unwrap()];
        let p10 = c[&Pattern::new(&[1, 0]).unwrap()];
        assert_eq!(p01 + p10, 101 * 100 / 2);
        assert_eq!(prof.two_s, p01 as i64 - p10 as i64);
    }
}
