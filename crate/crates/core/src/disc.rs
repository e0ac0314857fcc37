//! Interval discrepancy of permutations and of real point sets.
//!
//! For a permutation `σ` of `Z_n` and intervals `I`, `J`, the scaled signed
//! deviation `n·|σ(I) ∩ J| - |I|·|J|` is an integer, so every maximum here is
//! computed exactly in `i64` and returned as a rational with denominator `n`.
//!
//! All kernels grow `I` one element at a time and keep the profile
//! `g(b) = n·|σ(I) ∩ [0, b)| - |I|·b` for `b = 0..=n`. For initial `J` the
//! answer is `max |g(b)|`; for arbitrary non-wrapping `J = [c, e)` it is
//! `g(e) - g(c)`, maximised by `max g - min g`.
//!
//! Wrap-around intervals never need enumerating: replacing `J` by its
//! complement negates the signed deviation, and likewise for `I`, so the
//! all-interval maximum equals the maximum over non-wrapping pairs.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Exact;
use crate::interval::Interval;
use crate::par;
use crate::perm::{Permutation, Provenance};

/// Default size cap for the cubic all-interval kernels.
pub const DEFAULT_EXACT_LIMIT: usize = 512;

const CHUNK: usize = 512;

/// `D_T(S) = ||S ∩ T| - |S||T|/n|`.
pub fn set_discrepancy(s: &[usize], t: &[usize], n: usize) -> Result<Ratio<i64>> {
    let mark = |xs: &[usize]| -> Result<Vec<bool>> {
        let mut v = vec![false; n];
        for &x in xs {
            if x >= n {
                return Err(Error::InvalidArgument(format!("{x} is not in Z_{n}")));
            }
            v[x] = true;
        }
        Ok(v)
    };
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let (ms, mt) = (mark(s)?, mark(t)?);
    let cs = ms.iter().filter(|&&b| b).count() as i64;
    let ct = mt.iter().filter(|&&b| b).count() as i64;
    let both = ms.iter().zip(&mt).filter(|(a, b)| **a && **b).count() as i64;
    Ok(Ratio::new((n as i64 * both - cs * ct).abs(), n as i64))
}

/// `n·D*(σ)`: initial intervals only.
pub fn d_star_scaled(sigma: &Permutation) -> i64 {
    let n = sigma.n();
    let img = sigma.image();
    let nn = n as i64;
    // b ranges over 1..=n, split into chunks processed independently
    let chunks = n.div_ceil(CHUNK);
    par::max_range(0..chunks, 0, |c| {
        let lo = 1 + c * CHUNK;
        let hi = (lo + CHUNK).min(n + 1);
        let bs: Vec<i64> = (lo as i64..hi as i64).collect();
        let mut g = vec![0i64; bs.len()];
        let mut best = 0i64;
        for &v in img {
            let v = v as i64;
            let mut local = 0i64;
            for (gb, &b) in g.iter_mut().zip(&bs) {
                *gb += if b > v { nn - b } else { -b };
                local = local.max(gb.abs());
            }
            best = best.max(local);
        }
        best
    })
}

/// `D*(σ)`: max over initial intervals `I = [0, a)`, `J = [0, b)`.
pub fn d_star(sigma: &Permutation) -> Ratio<i64> {
    Ratio::new(d_star_scaled(sigma), sigma.n() as i64)
}

/// `n·max` over non-wrapping `I`, `J` of the deviation.
fn linear_max_scaled(sigma: &Permutation) -> i64 {
    let n = sigma.n();
    let img = sigma.image();
    let nn = n as i64;
    let neg_b: Vec<i64> = (0..=n as i64).map(|b| -b).collect();
    par::max_range(0..n, 0, |x| {
        let mut g = vec![0i64; n + 1];
        let mut best = 0i64;
        for &v in &img[x..] {
            let v = v as usize;
            let (lo, hi) = g.split_at_mut(v + 1);
            for (gb, &d) in lo.iter_mut().zip(&neg_b[..=v]) {
                *gb += d;
            }
            for (gb, &d) in hi.iter_mut().zip(&neg_b[v + 1..]) {
                *gb += nn + d;
            }
            let (mut mx, mut mn) = (i64::MIN, i64::MAX);
            for &gb in &g {
                mx = mx.max(gb);
                mn = mn.min(gb);
            }
            best = best.max(mx - mn);
        }
        best
    })
}

fn check_limit(op: &'static str, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::SizeRefused { op, n, limit });
    }
    Ok(())
}

/// `D(σ)`: max over all intervals of `Z_n`, wrap-around included.
pub fn d_exact(sigma: &Permutation, limit: usize) -> Result<Ratio<i64>> {
    check_limit("d_exact", sigma.n(), limit)?;
    Ok(Ratio::new(linear_max_scaled(sigma), sigma.n() as i64))
}

/// `D_0(σ)`: max over intervals that do not wrap around.
///
/// By the complement identity this always equals [`d_exact`].
pub fn d_zero(sigma: &Permutation, limit: usize) -> Result<Ratio<i64>> {
    check_limit("d_zero", sigma.n(), limit)?;
    Ok(Ratio::new(linear_max_scaled(sigma), sigma.n() as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    pub log2_n: Option<f64>,
    pub sqrt_n: Option<f64>,
    pub sqrt_n_ln_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub d_star: Exact,
    pub d_exact: Option<Exact>,
    pub d_lower: Exact,
    pub d_upper: Exact,
    pub d0: Option<Exact>,
    /// `d_upper` divided by each normalizer.
    pub ratios: Ratios,
    pub provenance: Provenance,
}

impl DiscrepancyReport {
    /// `D*` always; `D` and `D_0` exactly when `n <= limit`, otherwise the
    /// sandwich `D* <= D <= 4 D*` bounds `D`.
    pub fn compute(sigma: &Permutation, limit: usize) -> Self {
        let n = sigma.n();
        let ds = d_star(sigma);
        let exact = (n <= limit).then(|| Ratio::new(linear_max_scaled(sigma), n as i64));
        let (lower, upper) = match exact {
            Some(d) => (d, d),
            None => (ds, ds * 4),
        };
        let nf = n as f64;
        let up = *upper.numer() as f64 / *upper.denom() as f64;
        let norm = |x: f64| (x > 0.0).then(|| up / x);
        DiscrepancyReport {
            n,
            d_star: ds.into(),
            d_exact: exact.map(Exact),
            d_lower: lower.into(),
            d_upper: upper.into(),
            d0: exact.map(Exact),
            ratios: Ratios {
                log2_n: norm(nf.log2()),
                sqrt_n: norm(nf.sqrt()),
                sqrt_n_ln_n: norm((nf * nf.ln()).sqrt()),
            },
            provenance: sigma.provenance().clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.d_exact.is_some()
    }
}

/// Both conventions for the discrepancy of a finite multiset in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealDiscrepancy {
    /// `sup_{0<=x<=1} ||A ∩ [0, x]| - x|A||`
    pub closed: f64,
    /// `sup_{0<=x<=1} ||A ∩ [0, x)| - x|A||`
    pub half_open: f64,
}

/// Exact suprema by jump analysis: the counting function is a step function,
/// so the deviation is extremal just before or at a point.
pub fn real_star_disc(points: &[f64]) -> Result<RealDiscrepancy> {
    if let Some(&x) = points.iter().find(|x| !(0.0..1.0).contains(*x)) {
        return Err(Error::InvalidArgument(format!("point {x} outside [0, 1)")));
    }
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let (mut closed, mut half_open) = (0.0f64, 0.0f64);
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let below = i as f64;
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let upto = j as f64;
        // closed: just below v sees `below`, at v sees `upto`
        closed = closed.max((below - v * m).abs()).max((upto - v * m).abs());
        // half-open: at v sees `below`, just above v sees `upto`
        half_open = half_open
            .max((below - v * m).abs())
            .max((upto - v * m).abs());
        i = j;
    }
    Ok(RealDiscrepancy { closed, half_open })
}

/// Whether `σ(I) ∩ J` is nonempty.
pub fn interval_hit(sigma: &Permutation, i: &Interval, j: &Interval) -> bool {
    i.iter().any(|x| j.contains(sigma.apply(x)))
}

/// `√(n·D)`: intervals longer than this on both sides must meet.
pub fn hit_threshold(n: usize, d_upper: Ratio<i64>) -> f64 {
    (n as f64 * *d_upper.numer() as f64 / *d_upper.denom() as f64).sqrt()
}
