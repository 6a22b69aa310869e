//! Coefficient rings.
//!
//! Every scalar is stored as a [`Rat`]. The [`Ring`] descriptor decides how
//! arithmetic is interpreted: over the rationals and the p-local rationals
//! it is ordinary rational arithmetic, over a prime field every value is
//! kept as its canonical representative in `0..q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HrError, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Valuation of a nonzero integer at `p`.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(x: &Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

/// `x` is p-integral (zero counts as integral).
pub fn is_p_integral(x: &Rat, p: u64) -> bool {
    valuation(x, p).is_none_or(|v| v >= 0)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    // generalized binomial n(n-1)...(n-k+1)/k!, valid for negative n as well
    let mut num = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
    }
    num / factorial(k as u64)
}

/// A field in which linear algebra is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(q) => *q,
        }
    }

    /// Canonical representative. Panics if a denominator is divisible by `q`;
    /// callers that accept user data go through [`Field::try_reduce`].
    pub fn reduce(&self, x: Rat) -> Rat {
        self.try_reduce(x).expect("denominator not invertible in prime field")
    }

    pub fn try_reduce(&self, x: Rat) -> Option<Rat> {
        match self {
            Field::Rational => Some(x),
            Field::Prime(q) => {
                let q = BigInt::from(*q);
                let num = x.numer().mod_floor(&q);
                let den = x.denom().mod_floor(&q);
                if den.is_zero() {
                    return None;
                }
                let inv = mod_inverse(&den, &q)?;
                Some(Rat::from_integer((num * inv).mod_floor(&q)))
            }
        }
    }

    pub fn add(&self, a: &Rat, b: &Rat) -> Rat {
        self.wrap(a + b)
    }

    pub fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.wrap(a - b)
    }

    pub fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        self.wrap(a * b)
    }

    pub fn neg(&self, a: &Rat) -> Rat {
        self.wrap(-a)
    }

    pub fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(a.recip()),
            Field::Prime(q) => {
                let q = BigInt::from(*q);
                mod_inverse(&a.to_integer(), &q).map(Rat::from_integer)
            }
        }
    }

    pub fn div(&self, a: &Rat, b: &Rat) -> Option<Rat> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn from_int(&self, n: i64) -> Rat {
        self.wrap(rat(n))
    }

    // Integer-only fast path for already-reduced operands.
    fn wrap(&self, x: Rat) -> Rat {
        match self {
            Field::Rational => x,
            Field::Prime(q) => {
                if x.is_integer() {
                    Rat::from_integer(x.to_integer().mod_floor(&BigInt::from(*q)))
                } else {
                    self.reduce(x)
                }
            }
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Coefficient ring of a graded module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// The rationals.
    Rational,
    /// The prime field with `q` elements, `q` odd.
    PrimeField(u64),
    /// Rationals whose denominator is prime to `p`; stands in for the p-adic integers.
    PLocal(u64),
}

impl Ring {
    pub fn prime_field(q: u64) -> Result<Self> {
        Self::check_prime(q)?;
        Ok(Ring::PrimeField(q))
    }

    pub fn p_local(p: u64) -> Result<Self> {
        Self::check_prime(p)?;
        Ok(Ring::PLocal(p))
    }

    fn check_prime(p: u64) -> Result<()> {
        if p == 2 {
            return Err(HrError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(HrError::NotPrime(p));
        }
        Ok(())
    }

    /// Validates a descriptor built by hand or read from JSON.
    pub fn validate(self) -> Result<Self> {
        match self {
            Ring::Rational => Ok(self),
            Ring::PrimeField(q) => Self::prime_field(q),
            Ring::PLocal(p) => Self::p_local(p),
        }
    }

    /// Field used for linear algebra: the p-local ring computes inside its
    /// fraction field.
    pub fn field(&self) -> Field {
        match self {
            Ring::Rational | Ring::PLocal(_) => Field::Rational,
            Ring::PrimeField(q) => Field::Prime(*q),
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Ring::Rational => None,
            Ring::PrimeField(q) | Ring::PLocal(q) => Some(*q),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Ring::Rational => "Q",
            Ring::PrimeField(_) => "Fq",
            Ring::PLocal(_) => "Zp",
        }
    }

    /// Parses `Q`, `F<q>`, `Z<p>` or the kind names `Fq`/`Zp` with a separate prime.
    pub fn parse(spec: &str, p: Option<u64>) -> Result<Self> {
        let spec = spec.trim();
        let bad = || HrError::Format(format!("unknown ring '{spec}'"));
        let need_p = || p.ok_or_else(|| HrError::Format(format!("ring '{spec}' needs a prime")));
        match spec {
            "Q" => Ok(Ring::Rational),
            "Fq" | "F" => Ring::prime_field(need_p()?),
            "Zp" | "Z" => Ring::p_local(need_p()?),
            _ => {
                let (head, tail) = spec.split_at(1);
                let q: u64 = tail.parse().map_err(|_| bad())?;
                match head {
                    "F" => Ring::prime_field(q),
                    "Z" => Ring::p_local(q),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rational => write!(f, "Q"),
            Ring::PrimeField(q) => write!(f, "F{q}"),
            Ring::PLocal(p) => write!(f, "Z({p})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RingJson { kind: self.kind().to_string(), p: self.prime() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RingJson::deserialize(d)?;
        Ring::parse(&raw.kind, raw.p).map_err(serde::de::Error::custom)
    }
}

/// Encodes a rational as a `"num/den"` string (plain `"num"` when integral).
pub fn encode_rat(x: &Rat) -> String {
    x.to_string()
}

pub fn decode_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| HrError::Format(format!("bad rational '{s}'")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(HrError::Format(format!("zero denominator in '{s}'")));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn to_i64(x: &Rat) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_two_rejected() {
        assert!(matches!(Ring::prime_field(2), Err(HrError::CharacteristicTwo)));
        assert!(matches!(Ring::p_local(2), Err(HrError::CharacteristicTwo)));
        assert!(matches!(Ring::parse("F2", None), Err(HrError::CharacteristicTwo)));
        assert!(matches!(Ring::prime_field(9), Err(HrError::NotPrime(9))));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(3);
        assert_eq!(f.add(&rat(2), &rat(2)), rat(1));
        assert_eq!(f.reduce(rat_frac(1, 2)), rat(2));
        assert_eq!(f.inv(&rat(2)), Some(rat(2)));
        assert_eq!(f.inv(&rat(0)), None);
        assert!(f.try_reduce(rat_frac(1, 3)).is_none());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&rat(12), 3), Some(1));
        assert_eq!(valuation(&rat_frac(5, 9), 3), Some(-2));
        assert_eq!(valuation(&rat(0), 3), None);
        assert!(is_p_integral(&rat_frac(1, 2), 5));
        assert!(!is_p_integral(&rat_frac(1, 5), 5));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
    }

    #[test]
    fn rational_codec() {
        assert_eq!(decode_rat("-6/4").unwrap(), rat_frac(-3, 2));
        assert_eq!(encode_rat(&rat_frac(-3, 2)), "-3/2");
        assert_eq!(encode_rat(&rat(7)), "7");
        assert!(decode_rat("1/0").is_err());
        assert!(decode_rat("x").is_err());
    }

    #[test]
    fn ring_json() {
        let r: Ring = serde_json::from_str(r#"{"kind":"Zp","p":5}"#).unwrap();
        assert_eq!(r, Ring::PLocal(5));
        assert_eq!(serde_json::to_string(&Ring::Rational).unwrap(), r#"{"kind":"Q"}"#);
        assert!(serde_json::from_str::<Ring>(r#"{"kind":"Fq","p":2}"#).is_err());
    }
}
