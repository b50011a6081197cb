//! Continued fractions and Dirichlet approximations `|qα − a| ≤ 1/N`.
//!
//! A non-exact [`PrecReal`] stands for the interval `value ± 2^radius`. A
//! partial quotient is reported only when both ends of that interval agree on
//! it, so every returned quotient is correct for the true number.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::PrecReal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    #[serde(serialize_with = "ser_int")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub q: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    #[serde(serialize_with = "ser_ints")]
    pub quotients: Vec<BigInt>,
    pub convergents: Vec<Convergent>,
    /// The expansion reached the end of a rational number.
    pub terminated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalApproximation {
    #[serde(serialize_with = "ser_int")]
    pub a: BigInt,
    pub q: u64,
    /// `|qα − a|`
    pub err: PrecReal,
    pub bound_n: u64,
}

impl RationalApproximation {
    pub fn err_f64(&self) -> f64 {
        self.err.to_f64()
    }
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn pow2(e: i64) -> BigRational {
    let one = BigInt::one();
    if e >= 0 {
        BigRational::from_integer(one << e as usize)
    } else {
        BigRational::new(one, BigInt::one() << (-e) as usize)
    }
}

enum Step {
    Quotient(BigInt),
    Terminated,
    Exhausted,
}

/// Euclid on both interval endpoints in lock step.
struct Expander {
    lo: Option<BigRational>,
    hi: Option<BigRational>,
    exact: bool,
}

impl Expander {
    fn new(alpha: &PrecReal) -> Self {
        let v = alpha.value().clone();
        match alpha.radius_log2() {
            None => Self { lo: Some(v.clone()), hi: Some(v), exact: true },
            Some(r) => {
                let rad = pow2(r);
                Self { lo: Some(&v - &rad), hi: Some(&v + &rad), exact: false }
            }
        }
    }

    fn next(&mut self) -> Step {
        let (Some(lo), Some(hi)) = (&self.lo, &self.hi) else {
            return if self.exact { Step::Terminated } else { Step::Exhausted };
        };
        let a = lo.floor().to_integer();
        if hi.floor().to_integer() != a {
            self.lo = None;
            self.hi = None;
            return Step::Exhausted;
        }
        let ai = BigRational::from_integer(a.clone());
        let advance = |x: &BigRational| {
            let f = x - &ai;
            if f.is_zero() { None } else { Some(f.recip()) }
        };
        self.lo = advance(lo);
        self.hi = advance(hi);
        if !self.exact && (self.lo.is_none() || self.hi.is_none()) {
            self.lo = None;
            self.hi = None;
        }
        Step::Quotient(a)
    }
}

struct Convergents {
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Convergents {
    fn new() -> Self {
        Self { p: (BigInt::zero(), BigInt::one()), q: (BigInt::one(), BigInt::zero()) }
    }

    fn push(&mut self, a: &BigInt) -> Convergent {
        let p = a * &self.p.1 + &self.p.0;
        let q = a * &self.q.1 + &self.q.0;
        self.p = (std::mem::take(&mut self.p.1), p.clone());
        self.q = (std::mem::take(&mut self.q.1), q.clone());
        Convergent { p, q }
    }
}

/// Up to `max_terms` partial quotients with their convergents `pᵢ/qᵢ`.
///
/// Stops early when a rational input is fully expanded. Fails with
/// [`Error::PrecisionExhausted`] when the stored precision cannot decide the
/// next quotient.
pub fn continued_fraction(alpha: &PrecReal, max_terms: usize) -> Result<ContinuedFraction> {
    if max_terms == 0 {
        return Err(Error::InvalidParams("max_terms must be at least 1".into()));
    }
    let mut ex = Expander::new(alpha);
    let mut conv = Convergents::new();
    let mut out = ContinuedFraction { quotients: vec![], convergents: vec![], terminated: false };
    while out.quotients.len() < max_terms {
        match ex.next() {
            Step::Quotient(a) => {
                out.convergents.push(conv.push(&a));
                out.quotients.push(a);
            }
            Step::Terminated => {
                out.terminated = true;
                break;
            }
            Step::Exhausted => return Err(Error::PrecisionExhausted { certified: out.quotients.len() }),
        }
    }
    if ex.exact && ex.lo.is_none() {
        out.terminated = true;
    }
    Ok(out)
}

fn approximation(alpha: &PrecReal, a: BigInt, q: u64, n: u64) -> RationalApproximation {
    let err = (&alpha.mul_int(&BigInt::from(q)) - &PrecReal::from_int(a.clone())).abs();
    RationalApproximation { a, q, err, bound_n: n }
}

/// `(a, q)` with `q ≤ N`, `gcd(a, q) = 1` and `|qα − a| ≤ 1/N`: the last
/// convergent of α with denominator at most `N`.
///
/// Returns `(0, 1)` whenever `|α| ≤ 1/(2N)`.
pub fn dirichlet_approx(alpha: &PrecReal, n: u64) -> Result<RationalApproximation> {
    if n == 0 {
        return Err(Error::InvalidParams("N must be at least 1".into()));
    }
    let abs = alpha.abs();
    if abs.value() * BigRational::from_integer(BigInt::from(2 * n as u128)) <= BigRational::one() {
        return Ok(approximation(alpha, BigInt::zero(), 1, n));
    }
    let bound = BigInt::from(n);
    let mut ex = Expander::new(&abs);
    let mut conv = Convergents::new();
    let mut certified = 0;
    let mut best: Option<Convergent> = None;
    loop {
        match ex.next() {
            Step::Quotient(a) => {
                certified += 1;
                let c = conv.push(&a);
                if c.q > bound {
                    break;
                }
                best = Some(c);
            }
            Step::Terminated => break,
            Step::Exhausted => return Err(Error::PrecisionExhausted { certified }),
        }
    }
    // The first convergent has q = 1, so `best` is always set.
    let best = best.expect("first convergent has denominator 1");
    let q = best.q.to_u64().expect("q <= N");
    let a = if alpha.is_negative() { -best.p } else { best.p };
    Ok(approximation(alpha, a, q, n))
}

/// Brute force over every `q ≤ N`: the smallest `|qα − a|`, smallest `q` on ties.
pub fn dirichlet_exact_best(alpha: &PrecReal, n: u64) -> Result<RationalApproximation> {
    if n == 0 {
        return Err(Error::InvalidParams("N must be at least 1".into()));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut best: Option<(BigRational, BigInt, u64)> = None;
    for q in 1..=n {
        let qa = alpha.value() * BigRational::from_integer(BigInt::from(q));
        let a = (&qa + &half).floor().to_integer();
        let err = (&qa - BigRational::from_integer(a.clone())).abs();
        if best.as_ref().is_none_or(|(e, _, _)| err < *e) {
            best = Some((err, a, q));
        }
    }
    let (_, a, q) = best.expect("n >= 1");
    debug_assert!(a.gcd(&BigInt::from(q)).is_one() || a.is_zero());
    Ok(approximation(alpha, a, q, n))
}
