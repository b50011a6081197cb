//! Extended-precision reals with exact reduction modulo one.
//!
//! A [`PrecReal`] stores its value as an exact rational. Integers, decimal
//! literals and fractions are held exactly; irrational constants are rounded
//! to `precision_bits` fractional bits and carry an error radius. Because
//! multiplying by an integer never rounds, the fractional part of `h·α·xᵏ` is
//! computed exactly no matter how large the integer part gets.
//!
//! [`Phase`] is the fast companion type: a point of ℝ/ℤ stored as a 128-bit
//! fixed-point fraction, where addition and integer scaling wrap exactly
//! modulo one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const MIN_PRECISION_BITS: u32 = 64;

/// Guard bits used while expanding constants before the final rounding.
const GUARD_BITS: u32 = 32;

/// Named irrational constants accepted wherever a real is parsed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    /// √n for a positive integer n.
    Sqrt(u64),
    Pi,
    E,
    /// (1 + √5) / 2
    Golden,
}

impl NamedConstant {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pi" => Some(Self::Pi),
            "e" => Some(Self::E),
            "golden" | "phi" => Some(Self::Golden),
            _ => {
                let n: u64 = s.strip_prefix("sqrt")?.parse().ok()?;
                (n > 0).then_some(Self::Sqrt(n))
            }
        }
    }

    /// floor(value · 2^bits)
    fn fixed_point(self, bits: u32) -> BigInt {
        match self {
            Self::Sqrt(n) => (BigInt::from(n) << (2 * bits as usize)).sqrt(),
            Self::Pi => {
                // Machin: π = 16·atan(1/5) − 4·atan(1/239)
                16 * atan_inv(5, bits) - 4 * atan_inv(239, bits)
            }
            Self::E => {
                let one = BigInt::one() << bits as usize;
                let mut sum = one.clone();
                let mut term = one;
                let mut n = 1u64;
                while !term.is_zero() {
                    term /= n;
                    sum += &term;
                    n += 1;
                }
                sum
            }
            Self::Golden => {
                let root5 = (BigInt::from(5) << (2 * bits as usize)).sqrt();
                ((BigInt::one() << bits as usize) + root5) >> 1
            }
        }
    }
}

impl fmt::Display for NamedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sqrt(n) => write!(f, "sqrt{n}"),
            Self::Pi => f.write_str("pi"),
            Self::E => f.write_str("e"),
            Self::Golden => f.write_str("golden"),
        }
    }
}

/// atan(1/x) · 2^bits, truncated term by term.
fn atan_inv(x: u64, bits: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << bits as usize) / x;
    let mut sum = power.clone();
    let mut k = 1u64;
    while !power.is_zero() {
        power /= &x2;
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

/// Upper bound on log2 |v|; very negative for zero.
pub(crate) fn log2_upper(v: &BigRational) -> i64 {
    if v.is_zero() {
        return i64::MIN / 4;
    }
    v.numer().bits() as i64 - v.denom().bits() as i64 + 1
}

/// An extended-precision real number.
///
/// The stored rational is the number every computation uses. For values built
/// from irrational constants `radius_log2` bounds the distance to the intended
/// real: `|true − stored| ≤ 2^radius_log2`. Exact values have no radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecReal {
    value: BigRational,
    precision_bits: u32,
    radius_log2: Option<i64>,
}

impl PrecReal {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// The exact fraction p/q.
    pub fn from_ratio<P: Into<BigInt>, Q: Into<BigInt>>(p: P, q: Q) -> Result<Self> {
        let q = q.into();
        if q.is_zero() {
            return Err(Error::ParseReal("zero denominator".into()));
        }
        Ok(Self::from_rational(BigRational::new(p.into(), q)))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self { value, precision_bits: DEFAULT_PRECISION_BITS, radius_log2: None }
    }

    /// Exact binary value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::from_rational)
    }

    /// A named constant rounded to `bits` fractional bits.
    pub fn constant(c: NamedConstant, bits: u32) -> Self {
        let bits = bits.max(MIN_PRECISION_BITS);
        if let NamedConstant::Sqrt(n) = c {
            let r = n.sqrt();
            if r * r == n {
                return Self::from_int(r).with_precision(bits);
            }
        }
        let wide = c.fixed_point(bits + GUARD_BITS);
        let half = BigInt::one() << (GUARD_BITS - 1) as usize;
        let rounded = (wide + half) >> GUARD_BITS as usize;
        Self {
            value: BigRational::new(rounded, BigInt::one() << bits as usize),
            precision_bits: bits,
            radius_log2: Some(-(bits as i64)),
        }
    }

    /// Parses a decimal literal (`2.3`, `-1e18`, `0.5e-3`), a fraction
    /// (`355/113`) or a named constant (`sqrt2`, `pi`, `e`, `golden`),
    /// each optionally preceded by `-`.
    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        let t = s.trim();
        let err = || Error::ParseReal(s.to_string());
        if t.is_empty() {
            return Err(err());
        }
        if let Some(rest) = t.strip_prefix('-') {
            return Ok(-Self::parse(rest, bits)?);
        }
        let t = t.strip_prefix('+').unwrap_or(t);
        if let Some(c) = NamedConstant::parse(t) {
            return Ok(Self::constant(c, bits));
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            return Self::from_ratio(p, q).map(|v| v.with_precision(bits)).map_err(|_| err());
        }
        parse_decimal(t).map(|v| Self::from_rational(v).with_precision(bits)).ok_or_else(err)
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits.max(MIN_PRECISION_BITS);
        self
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn radius_log2(&self) -> Option<i64> {
        self.radius_log2
    }

    pub fn is_exact(&self) -> bool {
        self.radius_log2.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self { value: self.value.abs(), ..self.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn floor(&self) -> BigInt {
        self.value.numer().div_floor(self.value.denom())
    }

    /// Fractional part in [0, 1), exact.
    pub fn fract(&self) -> BigRational {
        let (n, d) = (self.value.numer(), self.value.denom());
        BigRational::new(n.mod_floor(d), d.clone())
    }

    /// Distance to the nearest integer, exact, in [0, 1/2].
    pub fn frac_norm_exact(&self) -> BigRational {
        let f = self.fract();
        let g = BigRational::one() - &f;
        if g < f {
            g
        } else {
            f
        }
    }

    /// Distance to the nearest integer, rounded to `f64` after the exact
    /// reduction.
    pub fn frac_norm(&self) -> f64 {
        self.frac_norm_exact().to_f64().unwrap_or(f64::NAN)
    }

    /// The value modulo one as a 128-bit fixed-point phase (truncated).
    pub fn phase(&self) -> Phase {
        Phase::of_rational(&self.value)
    }

    /// Product with an integer; exact, the radius scales with |n|.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        let radius_log2 = if n.is_zero() {
            None
        } else {
            self.radius_log2.map(|r| r + n.bits() as i64)
        };
        Self {
            value: &self.value * BigRational::from_integer(n.clone()),
            precision_bits: self.precision_bits,
            radius_log2,
        }
    }

    /// Compact exact representation `n/d` (or `n` for integers).
    pub fn to_exact_string(&self) -> String {
        if self.value.is_integer() {
            self.value.numer().to_string()
        } else {
            format!("{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

fn parse_decimal(t: &str) -> Option<BigRational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let shift = exp - frac_part.len() as i64;
    if shift.unsigned_abs() > 100_000 {
        return None;
    }
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-shift) as usize))
    })
}

impl FromStr for PrecReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, DEFAULT_PRECISION_BITS)
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() && self.value.denom().bits() <= 64 {
            f.write_str(&self.to_exact_string())
        } else {
            write!(f, "{:e}", self.to_f64())
        }
    }
}

impl Serialize for PrecReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrecReal", 3)?;
        st.serialize_field("approx", &self.to_f64())?;
        st.serialize_field("exact", &self.to_exact_string())?;
        st.serialize_field("radius_log2", &self.radius_log2)?;
        st.end()
    }
}

fn combine_radius(a: &PrecReal, b: &PrecReal) -> Option<i64> {
    match (a.radius_log2, b.radius_log2) {
        (None, None) => None,
        (Some(r), None) | (None, Some(r)) => Some(r),
        (Some(r), Some(s)) => Some(r.max(s) + 1),
    }
}

impl Add for &PrecReal {
    type Output = PrecReal;
    fn add(self, rhs: &PrecReal) -> PrecReal {
        PrecReal {
            value: &self.value + &rhs.value,
            precision_bits: self.precision_bits.max(rhs.precision_bits),
            radius_log2: combine_radius(self, rhs),
        }
    }
}

impl Sub for &PrecReal {
    type Output = PrecReal;
    fn sub(self, rhs: &PrecReal) -> PrecReal {
        PrecReal {
            value: &self.value - &rhs.value,
            precision_bits: self.precision_bits.max(rhs.precision_bits),
            radius_log2: combine_radius(self, rhs),
        }
    }
}

impl Mul for &PrecReal {
    type Output = PrecReal;
    fn mul(self, rhs: &PrecReal) -> PrecReal {
        // |ab − a'b'| ≤ |a|·rb + |b|·ra + ra·rb
        let radius_log2 = match (self.radius_log2, rhs.radius_log2) {
            (None, None) => None,
            (ra, rb) => {
                let la = log2_upper(&self.value);
                let lb = log2_upper(&rhs.value);
                let terms = [
                    rb.map(|r| la + r),
                    ra.map(|r| lb + r),
                    ra.zip(rb).map(|(r, s)| r + s),
                ];
                terms.into_iter().flatten().max().map(|m| m + 2)
            }
        };
        PrecReal {
            value: &self.value * &rhs.value,
            precision_bits: self.precision_bits.max(rhs.precision_bits),
            radius_log2,
        }
    }
}

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal { value: -self.value, ..self }
    }
}

impl Neg for &PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        -self.clone()
    }
}

/// Distance from `x` to the nearest integer.
pub fn frac_norm(x: &PrecReal) -> f64 {
    x.frac_norm()
}

/// e(z) = exp(2πi·z), with z reduced modulo one exactly before any
/// trigonometry.
pub fn e_of(z: &PrecReal) -> UnitComplex {
    z.phase().unit()
}

/// A point on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitComplex {
    pub re: f64,
    pub im: f64,
}

impl UnitComplex {
    pub const ONE: UnitComplex = UnitComplex { re: 1.0, im: 0.0 };

    /// exp(2πi·t) for t given in turns.
    pub fn from_turns(t: f64) -> Self {
        let (im, re) = (std::f64::consts::TAU * t).sin_cos();
        Self { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl Mul for UnitComplex {
    type Output = UnitComplex;
    fn mul(self, o: UnitComplex) -> UnitComplex {
        UnitComplex {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// A point of ℝ/ℤ as a 128-bit binary fraction: the value is `self.0 / 2^128`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(pub u128);

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

impl Phase {
    pub const ZERO: Phase = Phase(0);

    /// floor(frac(v) · 2^128)
    pub fn of_rational(v: &BigRational) -> Phase {
        Self::of_ratio(v.numer(), v.denom())
    }

    /// floor(frac(n/d) · 2^128) for `d > 0`.
    pub fn of_ratio(n: &BigInt, d: &BigInt) -> Phase {
        let r: BigInt = n.mod_floor(d) << 128usize;
        let q = r / d;
        let (_, digits) = q.to_u64_digits();
        let lo = digits.first().copied().unwrap_or(0) as u128;
        let hi = digits.get(1).copied().unwrap_or(0) as u128;
        debug_assert!(q.sign() != Sign::Minus && digits.len() <= 2);
        Phase(lo | (hi << 64))
    }

    /// The phase `n·self`, exact modulo one up to the truncation already in `self`.
    pub fn times(self, n: u128) -> Phase {
        Phase(self.0.wrapping_mul(n))
    }

    pub fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }

    /// Representative in [−1/2, 1/2).
    pub fn signed_turns(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// Distance to the nearest integer in units of 2^−128.
    pub fn norm_units(self) -> u128 {
        self.0.min(self.0.wrapping_neg())
    }

    pub fn norm(self) -> f64 {
        self.norm_units() as f64 / TWO_POW_128
    }

    pub fn unit(self) -> UnitComplex {
        UnitComplex::from_turns(self.signed_turns())
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase(self.0.wrapping_add(o.0))
    }
}
