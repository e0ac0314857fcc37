//! Exact real handles for Sós permutations: quadratic irrationals
//! `(a + b√d)/c` and rationals `p/q`.
//!
//! Fractional parts `{sα}` are formed with integer square roots only and
//! compared by sign-preserving squaring, so orderings never depend on
//! floating-point rounding. Intermediates are `i128`; anything that would
//! overflow is reported as [`Error::WidthExceeded`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The real number `(u + v√d)/den` with `den > 0`. `d` is square-free and
/// at least 2, or 0 for rationals (then `v = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    pub u: i128,
    pub v: i128,
    pub den: i128,
    pub d: u64,
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::WidthExceeded("surd product"))
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b)
        .ok_or(Error::WidthExceeded("surd difference"))
}

/// Sign of `x + y√d` for non-square `d`.
pub fn surd_sign(x: i128, y: i128, d: u64) -> Result<Ordering> {
    if y == 0 || d == 0 {
        return Ok(x.cmp(&0));
    }
    if x == 0 {
        return Ok(y.cmp(&0));
    }
    if (x > 0) == (y > 0) {
        return Ok(x.cmp(&0));
    }
    let x2 = mul(x, x)?;
    let y2d = mul(mul(y, y)?, d as i128)?;
    Ok(if x > 0 { x2.cmp(&y2d) } else { y2d.cmp(&x2) })
}

impl Surd {
    pub fn rational(num: i128, den: i128) -> Self {
        debug_assert!(den > 0);
        Surd {
            u: num,
            v: 0,
            den,
            d: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        (self.u as f64 + self.v as f64 * (self.d as f64).sqrt()) / self.den as f64
    }

    fn common_d(&self, other: &Surd) -> u64 {
        if self.v == 0 {
            other.d
        } else {
            self.d
        }
    }

    /// Exact comparison. Both operands must share `d` unless one is rational.
    pub fn cmp_exact(&self, other: &Surd) -> Result<Ordering> {
        let d = self.common_d(other);
        debug_assert!(self.v == 0 || other.v == 0 || self.d == other.d);
        if self.den == other.den {
            return surd_sign(sub(self.u, other.u)?, sub(self.v, other.v)?, d);
        }
        let x = sub(mul(self.u, other.den)?, mul(other.u, self.den)?)?;
        let y = sub(mul(self.v, other.den)?, mul(other.v, self.den)?)?;
        surd_sign(x, y, d)
    }

    /// `k - m·self` for integers `k`, `m`.
    pub fn affine(&self, k: i128, m: i128) -> Result<Surd> {
        Ok(Surd {
            u: sub(mul(k, self.den)?, mul(m, self.u)?)?,
            v: mul(-m, self.v)?,
            den: self.den,
            d: self.d,
        })
    }

    pub fn neg(&self) -> Surd {
        Surd {
            u: -self.u,
            v: -self.v,
            ..*self
        }
    }

    pub fn scale(&self, m: i128) -> Result<Surd> {
        Ok(Surd {
            u: mul(self.u, m)?,
            v: mul(self.v, m)?,
            ..*self
        })
    }
}

/// `(a + b√d)/c` in canonical form: `d` square-free and `>= 2`, `b != 0`,
/// `c > 0`, `gcd(a, b, c) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    a: i64,
    b: i64,
    d: u64,
    c: i64,
}

impl QuadraticIrrational {
    pub fn new(a: i64, b: i64, d: u64, c: i64) -> Result<Self> {
        if b == 0 {
            return Err(Error::parse("b", "coefficient of the root must be nonzero"));
        }
        if c == 0 {
            return Err(Error::parse("c", "denominator must be nonzero"));
        }
        if d < 2 {
            return Err(Error::parse("d", "radicand must be at least 2"));
        }
        // pull square factors out of the radicand
        let (mut rad, mut outside) = (d, 1u64);
        let mut f = 2u64;
        while f * f <= rad {
            while rad % (f * f) == 0 {
                rad /= f * f;
                outside *= f;
            }
            f += 1;
        }
        if rad == 1 {
            return Err(Error::parse("d", format!("{d} is a perfect square")));
        }
        let b = (b as i128)
            .checked_mul(outside as i128)
            .and_then(|x| i64::try_from(x).ok())
            .ok_or(Error::WidthExceeded("radicand reduction"))?;
        let (mut a, mut b, mut c) = (a, b, c);
        if c < 0 {
            (a, b, c) = (-a, -b, -c);
        }
        let g = a.gcd(&b).gcd(&c);
        Ok(Self {
            a: a / g,
            b: b / g,
            d: rad,
            c: c / g,
        })
    }

    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(0, 1, d, 1)
    }

    /// `(1 + √5)/2`
    pub fn golden() -> Self {
        Self::new(1, 1, 5, 2).expect("golden ratio is canonical")
    }

    pub fn parts(&self) -> (i64, i64, u64, i64) {
        (self.a, self.b, self.d, self.c)
    }

    pub fn as_surd(&self) -> Surd {
        Surd {
            u: self.a as i128,
            v: self.b as i128,
            den: self.c as i128,
            d: self.d,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.as_surd().to_f64()
    }

    /// `floor(s·α)` computed from `isqrt(b²s²d)`.
    pub fn floor_mul(&self, s: i64) -> Result<i128> {
        let bs = mul(self.b as i128, s as i128)?;
        let sq = (bs.unsigned_abs())
            .checked_mul(bs.unsigned_abs())
            .and_then(|x| x.checked_mul(self.d as u128))
            .ok_or(Error::WidthExceeded("floor of multiple"))?;
        let root = i128::try_from(sq.sqrt()).map_err(|_| Error::WidthExceeded("isqrt"))?;
        // √(b²s²d) is irrational unless bs = 0
        let floor_root = match bs.cmp(&0) {
            Ordering::Less => -root - 1,
            _ => root,
        };
        let numer = mul(self.a as i128, s as i128)?
            .checked_add(floor_root)
            .ok_or(Error::WidthExceeded("floor of multiple"))?;
        Ok(Integer::div_floor(&numer, &(self.c as i128)))
    }
}

/// An exactly representable real: quadratic irrational or rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alpha {
    Quadratic(QuadraticIrrational),
    Rational { num: i64, den: u64 },
}

impl Alpha {
    pub fn golden() -> Self {
        Alpha::Quadratic(QuadraticIrrational::golden())
    }

    pub fn sqrt(d: u64) -> Result<Self> {
        QuadraticIrrational::sqrt(d).map(Alpha::Quadratic)
    }

    pub fn rational(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::parse("q", "denominator must be positive"));
        }
        let g = (num.unsigned_abs()).gcd(&den).max(1);
        Ok(Alpha::Rational {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Alpha::Rational { .. })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Alpha::Quadratic(q) => q.to_f64(),
            Alpha::Rational { num, den } => *num as f64 / *den as f64,
        }
    }

    /// The exact value as a [`Surd`].
    pub fn as_surd(&self) -> Surd {
        match self {
            Alpha::Quadratic(q) => q.as_surd(),
            Alpha::Rational { num, den } => Surd::rational(*num as i128, *den as i128),
        }
    }

    /// `floor(s·α)`.
    pub fn floor_mul(&self, s: i64) -> Result<i128> {
        match self {
            Alpha::Quadratic(q) => q.floor_mul(s),
            Alpha::Rational { num, den } => Ok(Integer::div_floor(
                &mul(*num as i128, s as i128)?,
                &(*den as i128),
            )),
        }
    }

    /// `{s·α}` as an exact surd over the denominator of `α`.
    pub fn frac(&self, s: i64) -> Result<Surd> {
        match self {
            Alpha::Quadratic(q) => {
                let f = q.floor_mul(s)?;
                Ok(Surd {
                    u: sub(mul(q.a as i128, s as i128)?, mul(q.c as i128, f)?)?,
                    v: mul(q.b as i128, s as i128)?,
                    den: q.c as i128,
                    d: q.d,
                })
            }
            Alpha::Rational { num, den } => {
                let r = mul(*num as i128, s as i128)?.rem_euclid(*den as i128);
                Ok(Surd::rational(r, *den as i128))
            }
        }
    }

    pub fn frac_f64(&self, s: i64) -> f64 {
        let x = self.to_f64() * s as f64;
        x - x.floor()
    }
}

/// Exact comparison of `{sα}` and `{tα}`.
pub fn frac_compare(alpha: &Alpha, s: u64, t: u64) -> Result<Ordering> {
    if s == t {
        return Ok(Ordering::Equal);
    }
    let fs = alpha.frac(s as i64)?;
    let ft = alpha.frac(t as i64)?;
    fs.cmp_exact(&ft)
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Quadratic(q) if *q == QuadraticIrrational::golden() => write!(f, "golden"),
            Alpha::Quadratic(q) if q.a == 0 && q.b == 1 && q.c == 1 => write!(f, "sqrt:{}", q.d),
            Alpha::Quadratic(q) => write!(f, "quad:{},{},{},{}", q.a, q.b, q.d, q.c),
            Alpha::Rational { num, den } => write!(f, "rat:{num}/{den}"),
        }
    }
}

fn parse_int<T: FromStr>(field: &str, text: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    text.trim()
        .parse::<T>()
        .map_err(|e| Error::parse(field, format!("`{text}`: {e}")))
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts `golden`, `sqrt:D`, `quad:a,b,d,c` and `rat:p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "golden" {
            return Ok(Alpha::golden());
        }
        let (kind, body) = s.split_once(':').ok_or_else(|| {
            Error::parse(
                "alpha",
                format!("`{s}`: expected golden, sqrt:D, quad:a,b,d,c or rat:p/q"),
            )
        })?;
        match kind {
            "sqrt" => {
                Alpha::sqrt(parse_int("alpha.d", body)?).map_err(|e| rename_field(e, "alpha."))
            }
            "quad" => {
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 4 {
                    return Err(Error::parse(
                        "alpha",
                        format!("quad needs 4 fields, got {}", parts.len()),
                    ));
                }
                let a = parse_int("alpha.a", parts[0])?;
                let b = parse_int("alpha.b", parts[1])?;
                let d = parse_int("alpha.d", parts[2])?;
                let c = parse_int("alpha.c", parts[3])?;
                QuadraticIrrational::new(a, b, d, c)
                    .map(Alpha::Quadratic)
                    .map_err(|e| rename_field(e, "alpha."))
            }
            "rat" => {
                let (p, q) = body
                    .split_once('/')
                    .ok_or_else(|| Error::parse("alpha", format!("`{body}`: expected p/q")))?;
                Alpha::rational(parse_int("alpha.p", p)?, parse_int("alpha.q", q)?)
                    .map_err(|e| rename_field(e, "alpha."))
            }
            other => Err(Error::parse("alpha", format!("unknown kind `{other}`"))),
        }
    }
}

fn rename_field(e: Error, prefix: &str) -> Error {
    match e {
        Error::Parse { field, message } if !field.starts_with(prefix) => Error::Parse {
            field: format!("{prefix}{field}"),
            message,
        },
        other => other,
    }
}
