//! Exact scalar fields.
//!
//! Two fields are supported: arbitrary-precision rationals and prime fields
//! `F_p` with `p < 2^31`. Both are exposed through the [`Field`] trait so the
//! matrix and complex code is written once; runtime dispatch on a
//! [`FieldTag`] happens only at the edges (CLI, FFI).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FieldTag {
    Rationals,
    PrimeField(u64),
}

impl FieldTag {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Rationals => 0,
            FieldTag::PrimeField(p) => *p,
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| f.tag())
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

impl From<FieldTag> for String {
    fn from(tag: FieldTag) -> String {
        tag.to_string()
    }
}

impl TryFrom<String> for FieldTag {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    /// Accepts `q`, `Q`, `f2`, `F3`, `fp7`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "q" || lower == "rationals" {
            return Ok(FieldTag::Rationals);
        }
        let digits = lower
            .strip_prefix("fp")
            .or_else(|| lower.strip_prefix('f'))
            .ok_or_else(|| Error::Field(format!("unknown field '{s}'")))?;
        let p: u64 = digits.parse().map_err(|_| Error::Field(format!("unknown field '{s}'")))?;
        FieldTag::prime(p)
    }
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

/// Arithmetic of an exact field. Elements are plain values; the field value
/// carries any runtime parameter (the modulus).
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn tag(&self) -> FieldTag;
    fn zero(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Absolute value, when the field has one.
    fn abs(&self, a: &Self::Elem) -> Option<BigRational>;
    /// Canonical rational representative (the residue in `0..p` for `F_p`).
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Indices of a maximal independent subset of a sparse row list. Rows
    /// are sorted by column, without zeros.
    fn pivot_rows(&self, rows: Vec<Vec<(usize, Self::Elem)>>, ncols: usize) -> Vec<usize> {
        crate::linalg::field_pivots(self, rows, ncols)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> FieldTag {
        FieldTag::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn abs(&self, a: &BigRational) -> Option<BigRational> {
        Some(a.abs())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }

    fn pivot_rows(&self, rows: Vec<Vec<(usize, BigRational)>>, ncols: usize) -> Vec<usize> {
        crate::linalg::rational_pivots(rows, ncols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if p >= Self::MAX_MODULUS {
            return Err(Error::Field(format!("modulus {p} is too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> FieldTag {
        FieldTag::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        let inv = self.inv(&den).ok_or_else(|| Error::Field(format!("denominator of {q} vanishes mod {}", self.p)))?;
        Ok(num * inv % self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn abs(&self, _a: &u64) -> Option<BigRational> {
        None
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(*a))
    }
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse { source_name: "rational".into(), message: format!("cannot parse '{s}' as p/q") };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
