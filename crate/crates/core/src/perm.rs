//! Permutations of `Z_n` in one-line notation, and the arithmetic families
//! built on them.
//!
//! Every constructor validates the bijection before returning. Permutations
//! on `[n] = {1, ..., n}` (the Sós family) are stored shifted to `0..n` with
//! the shift recorded in the provenance.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{
    gcd, is_primitive_root, mod_mul, multiplicative_order, pow_unchecked, PrimeModulus,
};
use crate::quadratic::Alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Identity,
    Reversal,
    Psi,
    Lambda,
    Eta,
    Rho,
    Sos,
    Bitrev,
    Random,
    Inverse,
    Compose,
    External,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Identity,
        Family::Reversal,
        Family::Psi,
        Family::Lambda,
        Family::Eta,
        Family::Rho,
        Family::Sos,
        Family::Bitrev,
        Family::Random,
        Family::Inverse,
        Family::Compose,
        Family::External,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Identity => "identity",
            Family::Reversal => "reversal",
            Family::Psi => "psi",
            Family::Lambda => "lambda",
            Family::Eta => "eta",
            Family::Rho => "rho",
            Family::Sos => "sos",
            Family::Bitrev => "bitrev",
            Family::Random => "random",
            Family::Inverse => "inverse",
            Family::Compose => "compose",
            Family::External => "external",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::parse("family", format!("unknown family `{s}`")))
    }
}

/// Family tag plus the parameters the permutation was built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub family: Family,
    pub params: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// `k=v` pairs joined by `;`, the flattened form used in scan records.
    pub fn flat_params(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split(' ');
        let family: Family = words.next().unwrap_or("").parse()?;
        let mut prov = Provenance::new(family);
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::parse("provenance", format!("`{w}` is not key=value")))?;
            prov.params.push((k.to_string(), v.to_string()));
        }
        Ok(prov)
    }
}

/// How `sos_perm` treats coinciding fractional parts (rational `α` only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    #[default]
    Error,
    SmallerFirst,
}

/// A bijection of `{0, ..., n-1}`; `image[s] = σ(s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<u32>,
    provenance: Provenance,
}

impl Permutation {
    /// Validate `image` as a bijection of `0..image.len()`.
    pub fn from_image(image: Vec<u32>, provenance: Provenance) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidSize {
                n,
                reason: "permutations need n >= 1",
            });
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidSize {
                n,
                reason: "n exceeds 32-bit image width",
            });
        }
        let mut seen = vec![false; n];
        for &v in &image {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(Error::InvalidArgument(format!(
                    "image is not a bijection of 0..{n} (value {v})"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { image, provenance })
    }

    fn trusted(image: Vec<u32>, provenance: Provenance) -> Self {
        debug_assert!(Self::from_image(image.clone(), provenance.clone()).is_ok());
        Self { image, provenance }
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_image((0..n as u32).collect(), Provenance::new(Family::Identity))
    }

    pub fn reversal(n: usize) -> Result<Self> {
        Self::from_image(
            (0..n as u32).rev().collect(),
            Provenance::new(Family::Reversal),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn image(&self) -> &[u32] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, s: usize) -> usize {
        self.image[s] as usize
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn family(&self) -> Family {
        self.provenance.family
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// `σ^{-1}`. Inverting an inverse restores the original provenance.
    pub fn invert(&self) -> Self {
        let mut inv = vec![0u32; self.n()];
        for (s, &v) in self.image.iter().enumerate() {
            inv[v as usize] = s as u32;
        }
        let provenance = if self.provenance.family == Family::Inverse {
            self.provenance
                .param("of")
                .and_then(|p| p.replace('|', " ").parse().ok())
                .unwrap_or_else(|| Provenance::new(Family::External))
        } else {
            Provenance::new(Family::Inverse)
                .with("of", self.provenance.to_string().replace(' ', "|"))
        };
        Self::trusted(inv, provenance)
    }

    /// `self ∘ other`, i.e. `s -> self(other(s))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::InvalidArgument(format!(
                "cannot compose sizes {} and {}",
                self.n(),
                other.n()
            )));
        }
        let image = other
            .image
            .iter()
            .map(|&s| self.image[s as usize])
            .collect();
        Ok(Self::trusted(image, Provenance::new(Family::Compose)))
    }

    /// Three-line text form: `n`, the one-line image, `# provenance`.
    pub fn to_text(&self) -> String {
        let body = self
            .image
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        format!("{}\n{}\n# {}\n", self.n(), body, self.provenance)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::parse("n", "missing size line"))?
            .trim()
            .parse()
            .map_err(|e| Error::parse("n", format!("{e}")))?;
        let image = lines
            .next()
            .ok_or_else(|| Error::parse("image", "missing image line"))?
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|e| Error::parse("image", format!("`{w}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if image.len() != n {
            return Err(Error::parse(
                "image",
                format!("expected {n} entries, found {}", image.len()),
            ));
        }
        let provenance = match lines.next() {
            Some(line) => line
                .strip_prefix("# ")
                .ok_or_else(|| Error::parse("provenance", "expected `# ` comment"))?
                .parse()?,
            None => Provenance::new(Family::External),
        };
        Self::from_image(image, provenance)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// `ψ_k : s -> k·s mod n`.
pub fn psi(n: usize, k: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidSize {
            n,
            reason: "n >= 1",
        });
    }
    let m = n as u64;
    if k >= m && m > 1 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            expected: "1 <= k < n",
        });
    }
    let g = gcd(k, m);
    if g != 1 {
        return Err(Error::NotAUnit {
            value: k,
            modulus: m,
            gcd: g,
        });
    }
    let mut image = Vec::with_capacity(n);
    let mut acc = 0u64;
    for _ in 0..n {
        image.push(acc as u32);
        acc += k;
        if acc >= m {
            acc -= m;
        }
    }
    Ok(Permutation::trusted(
        image,
        Provenance::new(Family::Psi).with("k", k),
    ))
}

fn check_unit(a: u64, p: &PrimeModulus) -> Result<()> {
    if a.is_multiple_of(p.get()) {
        return Err(Error::NotAUnit {
            value: a,
            modulus: p.get(),
            gcd: p.get(),
        });
    }
    if a >= p.get() {
        return Err(Error::OutOfRange {
            what: "a",
            value: a,
            expected: "1 <= a < p",
        });
    }
    Ok(())
}

/// `λ_a : s -> a·s^{-1}`, with `0 -> 0`.
pub fn lambda_inv(p: &PrimeModulus, a: u64) -> Result<Permutation> {
    check_unit(a, p)?;
    let inv = crate::numtheory::inverse_table(p);
    let m = p.get();
    let image = inv.iter().map(|&x| mod_mul(a, x, m) as u32).collect();
    Ok(Permutation::trusted(
        image,
        Provenance::new(Family::Lambda).with("a", a),
    ))
}

/// `η_{a,k} : s -> a·s^k` for `2 <= k < p-1` with `gcd(k, p-1) = 1`.
pub fn eta_power(p: &PrimeModulus, a: u64, k: u64) -> Result<Permutation> {
    check_unit(a, p)?;
    let m = p.get();
    if k < 2 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            expected: "k >= 2 (k = 1 is psi_a)",
        });
    }
    if k >= m - 1 {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            expected: "k < p - 1",
        });
    }
    let g = gcd(k, m - 1);
    if g != 1 {
        return Err(Error::NotAPermutation { k, p: m, gcd: g });
    }
    let image = (0..m)
        .map(|s| mod_mul(a, pow_unchecked(s, k, m), m) as u32)
        .collect();
    Ok(Permutation::trusted(
        image,
        Provenance::new(Family::Eta).with("a", a).with("k", k),
    ))
}

/// `ρ_{a,τ} : s -> a·τ^s` for `1 <= s <= p-1`, with `0 -> 0`.
pub fn rho_exp(p: &PrimeModulus, a: u64, tau: u64) -> Result<Permutation> {
    check_unit(a, p)?;
    let m = p.get();
    if !is_primitive_root(tau, p) {
        let order = multiplicative_order(tau, p).unwrap_or(0);
        return Err(Error::InvalidGenerator { tau, p: m, order });
    }
    let mut image = vec![0u32; m as usize];
    let mut x = a % m;
    for slot in image.iter_mut().skip(1) {
        x = mod_mul(x, tau, m);
        *slot = x as u32;
    }
    Ok(Permutation::trusted(
        image,
        Provenance::new(Family::Rho).with("a", a).with("tau", tau),
    ))
}

/// The Sós permutation `β_α` on `[n]`, stored 0-indexed:
/// `image[s-1] = β_α(s) - 1`.
pub fn sos_perm(n: usize, alpha: &Alpha, ties: TieBreak) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::InvalidSize {
            n,
            reason: "n >= 1",
        });
    }
    let fracs = (1..=n as i64)
        .map(|s| alpha.frac(s))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut failure = None;
    order.sort_by(
        |&x, &y| match fracs[x as usize].cmp_exact(&fracs[y as usize]) {
            Ok(Ordering::Equal) => x.cmp(&y),
            Ok(o) => o,
            Err(e) => {
                failure.get_or_insert(e);
                x.cmp(&y)
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if ties == TieBreak::Error && alpha.is_rational() {
        for w in order.windows(2) {
            if fracs[w[0] as usize] == fracs[w[1] as usize] {
                return Err(Error::AmbiguousOrder {
                    s: w[0] as u64 + 1,
                    t: w[1] as u64 + 1,
                });
            }
        }
    }
    let mut image = vec![0u32; n];
    for (rank, &s) in order.iter().enumerate() {
        image[s as usize] = rank as u32;
    }
    let ties_tag = match ties {
        TieBreak::Error => "error",
        TieBreak::SmallerFirst => "smaller-first",
    };
    Ok(Permutation::trusted(
        image,
        Provenance::new(Family::Sos)
            .with("alpha", alpha)
            .with("shift", 1)
            .with("ties", ties_tag),
    ))
}

/// Reverse the `log2 n` low bits of each index.
pub fn bit_reversal(n: usize) -> Result<Permutation> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidSize {
            n,
            reason: "bit reversal needs a power of two",
        });
    }
    let bits = n.trailing_zeros();
    let image = (0..n as u32)
        .map(|s| {
            if bits == 0 {
                0
            } else {
                s.reverse_bits() >> (32 - bits)
            }
        })
        .collect();
    Ok(Permutation::trusted(
        image,
        Provenance::new(Family::Bitrev).with("bits", bits),
    ))
}

/// Uniform shuffle of the identity driven by ChaCha8 seeded from `seed`.
pub fn random_perm(n: usize, seed: u64) -> Result<Permutation> {
    let mut image: Vec<u32> = (0..n as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    image.shuffle(&mut rng);
    Permutation::from_image(image, Provenance::new(Family::Random).with("seed", seed))
}
