//! Reference collections of permutations used by sweeps and regression tests.

use crate::numtheory::{gcd, is_prime, primes_between, primitive_roots, PrimeModulus};
use crate::perm::{
    bit_reversal, eta_power, lambda_inv, psi, random_perm, rho_exp, sos_perm, Permutation, TieBreak,
};
use crate::quadratic::Alpha;

/// The α values used for Sós permutations in the corpus.
pub fn corpus_alphas() -> Vec<Alpha> {
    vec![
        Alpha::golden(),
        Alpha::sqrt(2).expect("2 is not a square"),
        Alpha::sqrt(3).expect("3 is not a square"),
    ]
}

/// Every named family member of size `n`: identity, reversal, all `ψ_k`,
/// the Sós permutations for [`corpus_alphas`], bit reversal when `n` is a
/// power of two, and for prime `n` all `λ_a`, `η_{1,k}` and `ρ_{1,τ}`.
pub fn family_members(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    out.push(Permutation::identity(n).expect("n >= 1"));
    out.push(Permutation::reversal(n).expect("n >= 1"));
    let m = n as u64;
    if m == 1 {
        out.push(psi(1, 0).expect("Z_1"));
    }
    for k in (1..m).filter(|&k| gcd(k, m) == 1) {
        out.push(psi(n, k).expect("unit"));
    }
    for a in corpus_alphas() {
        out.push(sos_perm(n, &a, TieBreak::Error).expect("irrational α"));
    }
    if n.is_power_of_two() {
        out.push(bit_reversal(n).expect("power of two"));
    }
    if is_prime(m) {
        let p = PrimeModulus::new(m).expect("prime");
        for a in 1..m {
            out.push(lambda_inv(&p, a).expect("unit"));
        }
        for k in 2..m.saturating_sub(1) {
            if gcd(k, m - 1) == 1 {
                out.push(eta_power(&p, 1, k).expect("valid exponent"));
            }
        }
        for tau in primitive_roots(&p) {
            out.push(rho_exp(&p, 1, tau).expect("primitive root"));
        }
    }
    out
}

/// Family members at every prime `p <= max_p`, bit reversals up to
/// `max_bitrev`, and `random_count` seeded permutations of size `random_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_p: u64,
    pub max_bitrev: usize,
    pub random_n: usize,
    pub random_count: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_p: 127,
            max_bitrev: 256,
            random_n: 100,
            random_count: 50,
        }
    }
}

pub fn corpus(spec: CorpusSpec) -> Vec<Permutation> {
    let mut out = Vec::new();
    for p in primes_between(2, spec.max_p) {
        out.extend(family_members(p as usize));
    }
    let mut n = 1;
    while n <= spec.max_bitrev {
        if !is_prime(n as u64) {
            out.push(bit_reversal(n).expect("power of two"));
        }
        n *= 2;
    }
    for seed in 0..spec.random_count {
        out.push(random_perm(spec.random_n, seed).expect("n >= 1"));
    }
    out
}
