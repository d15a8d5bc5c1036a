use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{malformed, Error, Result};

/// Largest prime accepted for `𝔽_p`.
pub const MAX_PRIME: u64 = 1 << 31;

/// Coefficient field: `ℚ` or `𝔽_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// A field element. Prime-field elements carry their modulus, so arithmetic
/// never needs the field passed around; mixing fields is a logic error and
/// panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, p: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return malformed(format!("{p} is not a prime at most 2^31"));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp {
                value: v.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rationals => Ok(Scalar::Q(q.clone())),
            Field::Prime(p) => {
                let modulus = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = x % &modulus;
                    let r = if r.is_negative() { r + &modulus } else { r };
                    r.to_u64().expect("reduced below p")
                };
                let num = reduce(q.numer());
                let den = reduce(q.denom());
                if den == 0 {
                    return malformed(format!("{q} has no image in F_{p}"));
                }
                Ok(Scalar::Fp {
                    value: num * pow_mod(den, p - 2, p) % p,
                    p,
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => f.write_str("q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// `q` or `fp:P`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" {
            return Ok(Field::Rationals);
        }
        match s.strip_prefix("fp:") {
            Some(p) => Field::prime(crate::categories::parse_natural(p)? as u64),
            None => malformed(format!("unknown field `{s}`, expected `q` or `fp:P`")),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    fn mod_pair(&self, other: &Scalar) -> (u64, u64, u64) {
        match (self, other) {
            (Scalar::Fp { value: a, p }, Scalar::Fp { value: b, p: q }) if p == q => (*a, *b, *p),
            _ => panic!("arithmetic between {} and {}", self.field(), other.field()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => {
                let (a, b, p) = self.mod_pair(other);
                Scalar::Fp {
                    value: (a + b) % p,
                    p,
                }
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => {
                let (a, b, p) = self.mod_pair(other);
                Scalar::Fp {
                    value: a * b % p,
                    p,
                }
            }
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { value, p } => Scalar::Fp {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    /// Whether the printed form needs a leading minus sign.
    pub(crate) fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}
