//! Continued fractions of rationals and quadratic surds, convergents,
//! continuants, and the bounded-average quotient tests behind Zaremba-style
//! searches.

use std::collections::HashMap;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::gcd;
use crate::quadratic::QuadraticIrrational;

/// `[a0; a1, a2, ...]`. When `periodic_tail = Some(t)`, the block
/// `quotients[t..]` repeats forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub a0: i64,
    pub quotients: Vec<u64>,
    pub periodic_tail: Option<usize>,
}

impl ContinuedFraction {
    pub fn is_periodic(&self) -> bool {
        self.periodic_tail.is_some()
    }

    /// Partial quotient `a_i` for `i >= 1`, unrolling the periodic block.
    pub fn quotient(&self, i: usize) -> Option<u64> {
        if i == 0 {
            return None;
        }
        let j = i - 1;
        if j < self.quotients.len() {
            return Some(self.quotients[j]);
        }
        let t = self.periodic_tail?;
        let period = self.quotients.len() - t;
        Some(self.quotients[t + (j - t) % period])
    }

    /// The first `m` partial quotients after `a0`, unrolled.
    pub fn unrolled(&self, m: usize) -> Option<Vec<u64>> {
        (1..=m).map(|i| self.quotient(i)).collect()
    }
}

fn checked(op: &'static str) -> impl Fn() -> Error {
    move || Error::WidthExceeded(op)
}

/// Euclidean expansion of `num/den`; the last quotient is at least 2 unless
/// the value is an integer.
pub fn cf_of_rational(num: i64, den: u64) -> Result<ContinuedFraction> {
    if den == 0 {
        return Err(Error::InvalidArgument(
            "denominator must be positive".into(),
        ));
    }
    let (mut p, mut q) = (num as i128, den as i128);
    let a0 = Integer::div_floor(&p, &q);
    let mut quotients = Vec::new();
    (p, q) = (q, p - a0 * q);
    while q != 0 {
        let a = p / q;
        quotients.push(a as u64);
        (p, q) = (q, p - a * q);
    }
    Ok(ContinuedFraction {
        a0: a0 as i64,
        quotients,
        periodic_tail: None,
    })
}

fn surd_floor(p: i128, root: i128, q: i128) -> i128 {
    // floor((p + √D)/q) with √D irrational and floor(√D) = root
    if q > 0 {
        Integer::div_floor(&(p + root), &q)
    } else {
        -Integer::div_floor(&(p + root), &-q) - 1
    }
}

/// Exact expansion of a quadratic irrational by the `(P + √D)/Q` recurrence.
/// Stops when a state repeats (marking the period) or after `max_terms`
/// quotients.
pub fn cf_of_quadratic(alpha: &QuadraticIrrational, max_terms: usize) -> Result<ContinuedFraction> {
    let (a, b, d, c) = alpha.parts();
    let w = checked("quadratic expansion");
    let big_d = (b as i128)
        .checked_mul(b as i128)
        .and_then(|x| x.checked_mul(d as i128))
        .ok_or_else(&w)?;
    let (mut p, mut q, mut big_d) = if b > 0 {
        (a as i128, c as i128, big_d)
    } else {
        (-(a as i128), -(c as i128), big_d)
    };
    if (big_d - p * p) % q != 0 {
        let aq = q.abs();
        p = p.checked_mul(aq).ok_or_else(&w)?;
        big_d = big_d
            .checked_mul(q.checked_mul(q).ok_or_else(&w)?)
            .ok_or_else(&w)?;
        q = q.checked_mul(aq).ok_or_else(&w)?;
    }
    let root = big_d.sqrt();
    let step = |p: i128, q: i128| -> Result<(i128, i128, i128)> {
        let term = surd_floor(p, root, q);
        let np = term.checked_mul(q).ok_or_else(&w)? - p;
        let nq = (big_d - np.checked_mul(np).ok_or_else(&w)?) / q;
        Ok((term, np, nq))
    };
    let (a0, np, nq) = step(p, q)?;
    (p, q) = (np, nq);
    let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut periodic_tail = None;
    while quotients.len() < max_terms {
        if let Some(&first) = seen.get(&(p, q)) {
            periodic_tail = Some(first);
            break;
        }
        seen.insert((p, q), quotients.len());
        let (term, np, nq) = step(p, q)?;
        quotients.push(u64::try_from(term).map_err(|_| Error::WidthExceeded("partial quotient"))?);
        (p, q) = (np, nq);
    }
    // a state may close exactly at the cap
    if periodic_tail.is_none() {
        if let Some(&first) = seen.get(&(p, q)) {
            periodic_tail = Some(first);
        }
    }
    Ok(ContinuedFraction {
        a0: i64::try_from(a0).map_err(|_| Error::WidthExceeded("integer part"))?,
        quotients,
        periodic_tail,
    })
}

/// The first `m` convergents `p_s/q_s`, `s = 0, 1, ..., m-1`, where
/// `p_0/q_0 = a0/1`.
pub fn convergents(cf: &ContinuedFraction, m: usize) -> Result<Vec<(i128, u128)>> {
    let mut out = Vec::with_capacity(m);
    if m == 0 {
        return Ok(out);
    }
    let (mut p_prev, mut q_prev) = (1i128, 0u128);
    let (mut p, mut q) = (cf.a0 as i128, 1u128);
    out.push((p, q));
    for s in 1..m {
        let a = cf
            .quotient(s)
            .ok_or_else(|| Error::InvalidArgument(format!("only {} convergents available", s)))?;
        let np = (a as i128)
            .checked_mul(p)
            .and_then(|x| x.checked_add(p_prev))
            .ok_or(Error::WidthExceeded("convergent numerator"))?;
        let nq = (a as u128)
            .checked_mul(q)
            .and_then(|x| x.checked_add(q_prev))
            .ok_or(Error::WidthExceeded("convergent denominator"))?;
        (p_prev, q_prev, p, q) = (p, q, np, nq);
        out.push((p, q));
    }
    Ok(out)
}

/// `K(a_1, ..., a_m)`: the denominator of `[0; a_1, ..., a_m]`.
pub fn continuant(quotients: &[u64]) -> Result<u128> {
    let (mut prev, mut cur) = (0u128, 1u128);
    for &a in quotients {
        if a == 0 {
            return Err(Error::InvalidArgument(
                "partial quotients must be >= 1".into(),
            ));
        }
        let next = (a as u128)
            .checked_mul(cur)
            .and_then(|x| x.checked_add(prev))
            .ok_or(Error::WidthExceeded("continuant"))?;
        (prev, cur) = (cur, next);
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AverageCheck {
    pub bounded: bool,
    /// Length of the first prefix whose mean exceeds the bound.
    pub witness: Option<usize>,
}

/// True iff every prefix mean `(a_1 + ... + a_m)/m` is at most `bound`.
pub fn bounded_average_check(quotients: &[u64], bound: Ratio<u64>) -> Result<AverageCheck> {
    if quotients.is_empty() {
        return Err(Error::InvalidArgument("empty quotient sequence".into()));
    }
    let (bn, bd) = (*bound.numer() as u128, *bound.denom() as u128);
    let mut sum = 0u128;
    for (i, &a) in quotients.iter().enumerate() {
        sum += a as u128;
        let m = i as u128 + 1;
        if sum * bd > bn * m {
            return Ok(AverageCheck {
                bounded: false,
                witness: Some(i + 1),
            });
        }
    }
    Ok(AverageCheck {
        bounded: true,
        witness: None,
    })
}

/// Largest prefix mean of a nonempty sequence.
pub fn max_prefix_average(quotients: &[u64]) -> Ratio<u64> {
    let mut best = Ratio::new(0u64, 1);
    let mut sum = 0u64;
    for (i, &a) in quotients.iter().enumerate() {
        sum += a;
        best = best.max(Ratio::new(sum, i as u64 + 1));
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZarembaResult {
    pub n: u64,
    pub bound: u64,
    /// Winner: least maximal quotient, then least maximal prefix mean, then least k.
    pub k: u64,
    pub quotients: Vec<u64>,
    pub max_quotient: u64,
    pub max_prefix_avg: Ratio<u64>,
    /// Whether the winner's expansion is bounded in average by `bound`.
    pub certified: bool,
    /// The k with the least maximal prefix mean over all units.
    pub best_average_k: u64,
    pub best_average: Ratio<u64>,
}

/// Scan all units `k` mod `n` and expand `k/n`.
pub fn zaremba_search(n: u64, bound: u64) -> Result<ZarembaResult> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            expected: "n >= 2",
        });
    }
    let mut best: Option<(u64, Ratio<u64>, u64, Vec<u64>)> = None;
    let mut best_avg: Option<(Ratio<u64>, u64)> = None;
    for k in (1..n).filter(|&k| gcd(k, n) == 1) {
        let cf = cf_of_rational(k as i64, n)?;
        let mq = cf.quotients.iter().copied().max().unwrap_or(0);
        let avg = max_prefix_average(&cf.quotients);
        let better = match &best {
            None => true,
            Some((bq, ba, _, _)) => (mq, avg) < (*bq, *ba),
        };
        if better {
            best = Some((mq, avg, k, cf.quotients));
        }
        if best_avg.is_none_or(|(a, _)| avg < a) {
            best_avg = Some((avg, k));
        }
    }
    let (max_quotient, max_prefix_avg, k, quotients) = best.expect("1 is a unit");
    let (best_average, best_average_k) = best_avg.expect("1 is a unit");
    Ok(ZarembaResult {
        n,
        bound,
        k,
        quotients,
        max_quotient,
        max_prefix_avg,
        certified: max_prefix_avg <= Ratio::from_integer(bound),
        best_average_k,
        best_average,
    })
}
