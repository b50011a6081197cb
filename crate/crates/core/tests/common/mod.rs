//! Independent oracles shared by the integration tests. Everything here is
//! written directly from the definitions with plain big-integer arithmetic,
//! without going through the library's walkers or closed forms.
#![allow(dead_code)]

use binform::BinaryForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub struct Gen(Xoshiro256PlusPlus);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `lo..=hi`, up to a negligible modulo bias.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.0.next_u64() % (hi - lo + 1)
    }

    pub fn signed(&mut self, bound: i64) -> i64 {
        self.range(0, 2 * bound as u64) as i64 - bound
    }

    /// A dyadic in `[0, 1)` with `bits` random bits.
    pub fn unit(&mut self, bits: usize) -> BigRational {
        let mut n = BigInt::zero();
        for _ in 0..bits.div_ceil(64) {
            n = (n << 64usize) + BigInt::from(self.0.next_u64());
        }
        let extra = 64 * bits.div_ceil(64) - bits;
        BigRational::new(n >> extra, BigInt::one() << bits)
    }

    pub fn f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// `∥v∥` exactly.
pub fn dist_to_int(v: &BigRational) -> BigRational {
    let f = v - BigRational::from_integer(v.floor().to_integer());
    let g = BigRational::one() - &f;
    if f < g { f } else { g }
}

/// `n/d mod 1` in turns, to f64.
pub fn turns(n: &BigInt, d: &BigInt) -> f64 {
    let r = n.mod_floor(d);
    // 64 fractional bits are far more than f64 keeps
    let scaled = (r << 64usize) / d;
    scaled.to_f64().unwrap() / 18446744073709551616.0
}

pub fn turns_of(v: &BigRational) -> f64 {
    turns(v.numer(), v.denom())
}

/// Running complex sum of `e(t)` for phases `t` in turns.
#[derive(Default, Clone, Copy)]
pub struct Acc {
    pub re: f64,
    pub im: f64,
}

impl Acc {
    pub fn push(&mut self, t: f64) {
        let a = std::f64::consts::TAU * t;
        self.re += a.cos();
        self.im += a.sin();
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Integer numerators `c_j` of `α_j` over one common denominator `D`, for `j = 0..=k`.
pub struct IntForm {
    pub k: u32,
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl IntForm {
    pub fn of(f: &BinaryForm) -> Self {
        let k = f.k();
        let coeffs: Vec<BigRational> = (0..=k).map(|j| f.alpha(j).value().clone()).collect();
        let den = coeffs.iter().fold(BigInt::one(), |d, c| d.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self { k, num, den }
    }

    /// `D·Ψ(x, y)`.
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (j, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                acc += c * num_traits::pow(x.clone(), j) * num_traits::pow(y.clone(), self.k as usize - j);
            }
        }
        acc
    }

    /// `∥Ψ(x, y)∥` exactly.
    pub fn norm(&self, x: i64, y: i64) -> BigRational {
        dist_to_int(&BigRational::new(self.eval(&x.into(), &y.into()), self.den.clone()))
    }
}

/// Largest prime factor by trial division, with `lpf(1) = 1`.
pub fn largest_prime_factor(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            best = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        best = best.max(n);
    }
    best
}

/// `|a − b| ≤ tol·max(|b|, 1)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

pub fn abs_r(v: &BigRational) -> BigRational {
    v.abs()
}
