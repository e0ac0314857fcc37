//! Rank sets `A_σ` and the prefix point sets `{xα : x <= s}` behind Sós
//! permutations.

use std::cmp::Ordering;

use num_integer::Roots;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::perm::{sos_perm, Permutation, TieBreak};
use crate::quadratic::{frac_compare, Alpha, Surd};

struct Fenwick(Vec<u32>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick(vec![0; n + 1])
    }

    fn add(&mut self, i: usize) {
        let mut i = i + 1;
        while i < self.0.len() {
            self.0[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Count of inserted values `<= i`.
    fn prefix(&self, i: usize) -> u32 {
        let mut i = i + 1;
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// `B_α(k) = |{1 <= q <= k : {qα} <= {kα}}|`.
pub fn b_of_k(alpha: &Alpha, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            expected: ">= 1",
        });
    }
    let mut count = 0;
    for q in 1..=k {
        if frac_compare(alpha, q, k)? != Ordering::Greater {
            count += 1;
        }
    }
    Ok(count)
}

/// `B_σ(k)` for every `k` in `[n]`, listed in order of `k`.
pub fn b_values(sigma: &Permutation) -> Vec<u32> {
    let mut fw = Fenwick::new(sigma.n());
    sigma
        .image()
        .iter()
        .map(|&v| {
            fw.add(v as usize);
            fw.prefix(v as usize)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSet {
    pub n: usize,
    /// `A_σ`, sorted ascending.
    pub values: Vec<u32>,
    /// One more than the longest empty run; `1` when `A_σ = [n]`.
    pub max_gap: usize,
    /// Longest run of consecutive integers in `[n]` missing from `A_σ`,
    /// as `(first, length)`.
    pub widest_empty: Option<(usize, usize)>,
}

impl RankSet {
    pub fn count(&self) -> usize {
        self.values.len()
    }
}

pub fn a_set(sigma: &Permutation) -> RankSet {
    let n = sigma.n();
    // seen[n + 1] closes a run that reaches n
    let mut seen = vec![false; n + 2];
    seen[n + 1] = true;
    for b in b_values(sigma) {
        seen[b as usize] = true;
    }
    let values: Vec<u32> = (1..=n as u32).filter(|&b| seen[b as usize]).collect();
    let mut widest: Option<(usize, usize)> = None;
    let mut run_start = None;
    for (x, &present) in seen.iter().enumerate().skip(1) {
        match (present, run_start) {
            (false, None) => run_start = Some(x),
            (true, Some(s)) => {
                if widest.is_none_or(|(_, l)| x - s > l) {
                    widest = Some((s, x - s));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    RankSet {
        n,
        values,
        max_gap: widest.map_or(1, |(_, l)| l + 1),
        widest_empty: widest,
    }
}

/// `⌈√(32 n D)⌉` for a rational `D`.
pub fn gap_length(n: usize, d: Ratio<i64>) -> u64 {
    // smallest L with L²·den >= 32·n·num
    let num = 32u128 * n as u128 * (*d.numer()).max(0) as u128;
    let den = *d.denom() as u128;
    let target = num.div_ceil(den);
    let mut l = target.sqrt();
    while l * l * den < num {
        l += 1;
    }
    l as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCheck {
    pub holds: bool,
    /// Interval length tested: `⌈√(32 n D)⌉`.
    pub length: u64,
    pub widest_empty: Option<(usize, usize)>,
}

/// Every interval of length `⌈√(32 n D)⌉` inside `[n]` meets `A_σ`.
/// `d_upper` may be any upper bound for `D(σ)`.
pub fn gap_check(sigma: &Permutation, d_upper: Ratio<i64>) -> GapCheck {
    let length = gap_length(sigma.n(), d_upper);
    let a = a_set(sigma);
    let widest = a.widest_empty.map_or(0, |(_, l)| l as u64);
    GapCheck {
        // n = 1 has D = 0; only nonempty intervals are meaningful
        holds: widest < length.max(1),
        length,
        widest_empty: a.widest_empty,
    }
}

/// Where a prefix star discrepancy is attained: the `i`-th smallest point of
/// `A_s` (1-based), evaluated at that point (`at`) or just below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub s: u64,
    pub x: u64,
    pub i: u64,
    pub at: bool,
}

impl Witness {
    /// The deviation at this witness as an exact surd.
    pub fn exact(&self, alpha: &Alpha) -> Result<Surd> {
        let y = alpha.frac(self.x as i64)?;
        if self.at {
            // i - s·y
            y.affine(self.i as i128, self.s as i128)
        } else {
            // s·y - (i - 1)
            Ok(y.affine(self.i as i128 - 1, self.s as i128)?.neg())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixDisc {
    pub n: usize,
    /// `max_s d*(A_s(α))`
    pub max: f64,
    pub witness: Witness,
    /// `d*(A_n(α))`
    pub full: f64,
}

/// `max_{s <= n} d*(A_s(α))` with `A_s(α) = {{xα} : 1 <= x <= s}` and the
/// closed convention `d*(A) = sup_x ||A ∩ [0, x]| - x|A||`.
///
/// Values are floats; the attaining witness can be re-evaluated exactly.
pub fn prefix_star_disc(alpha: &Alpha, n: usize) -> Result<PrefixDisc> {
    let beta = sos_perm(n, alpha, TieBreak::SmallerFirst)?;
    let by_rank = beta.invert();
    let y: Vec<f64> = (1..=n as i64).map(|x| alpha.frac_f64(x)).collect();
    let rank_order: Vec<usize> = by_rank.image().iter().map(|&x| x as usize).collect();
    let per_s = par::map_range(1..n + 1, |s| {
        let sf = s as f64;
        let mut best = (
            0.0f64,
            Witness {
                s: s as u64,
                x: 1,
                i: 1,
                at: true,
            },
        );
        let mut i = 0u64;
        for &x in &rank_order {
            if x >= s {
                continue;
            }
            i += 1;
            let v = y[x];
            let at = i as f64 - sf * v;
            let below = sf * v - (i - 1) as f64;
            let w = |at| Witness {
                s: s as u64,
                x: x as u64 + 1,
                i,
                at,
            };
            if at > best.0 {
                best = (at, w(true));
            }
            if below > best.0 {
                best = (below, w(false));
            }
        }
        best
    });
    let full = per_s.last().map_or(0.0, |b| b.0);
    let (max, witness) =
        per_s.into_iter().fold(
            (f64::MIN, None),
            |acc, (v, w)| {
                if v > acc.0 {
                    (v, Some(w))
                } else {
                    acc
                }
            },
        );
    Ok(PrefixDisc {
        n,
        max,
        witness: witness.ok_or(Error::InvalidSize {
            n,
            reason: "n >= 1",
        })?,
        full,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscRelation {
    pub d_star: f64,
    pub prefix: PrefixDisc,
    /// `D*(β_α) <= 2·max_s d*(A_s(α))`, decided exactly through the witness.
    pub holds: bool,
}

/// Checks `D*(β_α) <= 2 max_s d*(A_s(α))` given an exact `D*`.
pub fn discrelation(alpha: &Alpha, n: usize, d_star: Ratio<i64>) -> Result<DiscRelation> {
    let prefix = prefix_star_disc(alpha, n)?;
    let twice = prefix.witness.exact(alpha)?.scale(2)?;
    let rhs = Surd::rational(*d_star.numer() as i128, *d_star.denom() as i128);
    let holds = twice.cmp_exact(&rhs)? != Ordering::Less;
    Ok(DiscRelation {
        d_star: *d_star.numer() as f64 / *d_star.denom() as f64,
        prefix,
        holds,
    })
}
