//! Modular and multiplicative arithmetic on 64-bit moduli.
//!
//! Products go through `u128`, so any modulus below `2^64` is safe. Primality
//! is deterministic Miller-Rabin with the first twelve primes as witnesses,
//! which is exact for every `u64`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply.
pub fn mod_pow(base: u64, exp: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    Ok(pow_unchecked(base % m, exp, m))
}

#[inline]
pub(crate) fn pow_unchecked(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
pub fn mod_inv(a: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    let a = a % m;
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotAUnit {
            value: a,
            modulus: m,
            gcd: old_r as u64,
        });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_unchecked(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    // 6k +- 1 wheel
    let mut f = 5u64;
    while f.saturating_mul(f) <= n {
        push(f, &mut n);
        push(f + 2, &mut n);
        f += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(_, e)| e as u64 + 1)
        .product()
}

/// A prime modulus, certified at construction. Caches the distinct prime
/// factors of `p - 1` for order computations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeModulus {
    p: u64,
    certified: bool,
    #[serde(skip)]
    order_factors: Vec<u64>,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Self {
            p,
            certified: true,
            order_factors: factorize(p - 1).into_iter().map(|(q, _)| q).collect(),
        })
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.p
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    /// Distinct primes dividing `p - 1`.
    pub fn order_factors(&self) -> &[u64] {
        &self.order_factors
    }
}

/// Least `t >= 1` with `x^t = 1 (mod p)`.
pub fn multiplicative_order(x: u64, p: &PrimeModulus) -> Result<u64> {
    let m = p.get();
    let x = x % m;
    if x == 0 {
        return Err(Error::NotAUnit {
            value: x,
            modulus: m,
            gcd: m,
        });
    }
    let mut t = m - 1;
    for &q in p.order_factors() {
        while t.is_multiple_of(q) && pow_unchecked(x, t / q, m) == 1 {
            t /= q;
        }
    }
    Ok(t)
}

pub fn is_primitive_root(x: u64, p: &PrimeModulus) -> bool {
    let m = p.get();
    let x = x % m;
    if x == 0 {
        return false;
    }
    p.order_factors()
        .iter()
        .all(|&q| pow_unchecked(x, (m - 1) / q, m) != 1)
}

/// Smallest generator of `Z_p^x`.
pub fn find_primitive_root(p: &PrimeModulus) -> u64 {
    (1..p.get())
        .find(|&g| is_primitive_root(g, p))
        .expect("Z_p^x is cyclic")
}

/// All generators of `Z_p^x`, ascending.
pub fn primitive_roots(p: &PrimeModulus) -> Vec<u64> {
    (1..p.get()).filter(|&g| is_primitive_root(g, p)).collect()
}

/// `inv[s] = s^-1 mod p` for `1 <= s < p`, with `inv[0] = 0`, in linear time.
pub fn inverse_table(p: &PrimeModulus) -> Vec<u64> {
    let m = p.get() as usize;
    let mut inv = vec![0u64; m];
    if m > 1 {
        inv[1] = 1;
    }
    for s in 2..m {
        let q = (m / s) as u64;
        inv[s] = mod_mul(m as u64 - q, inv[m % s], m as u64);
    }
    inv
}

/// Primes in `[lo, hi]` (inclusive), ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    if hi > 50_000_000 {
        return (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect();
    }
    let hi_us = hi as usize;
    let mut composite = vec![false; hi_us + 1];
    let mut i = 2usize;
    while i * i <= hi_us {
        if !composite[i] {
            let mut j = i * i;
            while j <= hi_us {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=hi_us)
        .filter(|&n| !composite[n])
        .map(|n| n as u64)
        .collect()
}
