//! Incremental evaluation of a polynomial modulo one along consecutive
//! integers.
//!
//! The forward-difference table `Δʲp(t)` is seeded exactly, truncated to
//! 128-bit phases, and then advanced with wrapping additions. Each truncation
//! is below one unit (2⁻¹²⁸), so after `n` steps the value carries at most
//! `Σⱼ C(n, j)` units of error. The table is reseeded before that bound passes
//! [`PHASE_ERROR_UNITS`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numerics::Phase;

/// Error bound on every phase produced by [`PhaseWalker`]: 2⁻⁶⁰ turns.
pub(crate) const PHASE_ERROR_UNITS: u128 = 1 << 68;

const MAX_BLOCK: u64 = 1 << 40;

/// Integer numerators over a common positive denominator, so that no
/// rational normalization happens in the hot path.
pub(crate) fn common_denominator(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let denom = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let numers = coeffs.iter().map(|c| c.numer() * (&denom / c.denom())).collect();
    (numers, denom)
}

/// The polynomial `Σⱼ numers[j]·tʲ / denom`.
pub(crate) struct PhaseWalker {
    numers: Vec<BigInt>,
    denom: BigInt,
    block: u64,
}

impl PhaseWalker {
    /// `coeffs[j]` multiplies `tʲ`.
    pub(crate) fn new(coeffs: Vec<BigRational>) -> Self {
        let (numers, denom) = common_denominator(&coeffs);
        Self::scaled(numers, denom)
    }

    /// `numers[j] / denom` multiplies `tʲ`; `denom` must be positive.
    pub(crate) fn scaled(mut numers: Vec<BigInt>, denom: BigInt) -> Self {
        while numers.len() > 1 && numers.last().is_some_and(Zero::is_zero) {
            numers.pop();
        }
        if numers.is_empty() {
            numers.push(BigInt::zero());
        }
        let block = block_len(numers.len() - 1);
        Self { numers, denom, block }
    }

    fn degree(&self) -> usize {
        self.numers.len() - 1
    }

    fn numer_at(&self, t: u64) -> BigInt {
        let t = BigInt::from(t);
        let mut acc = BigInt::zero();
        for c in self.numers.iter().rev() {
            acc = acc * &t + c;
        }
        acc
    }

    #[cfg(test)]
    fn exact_at(&self, t: u64) -> BigRational {
        BigRational::new(self.numer_at(t), self.denom.clone())
    }

    fn seed(&self, t: u64, table: &mut Vec<Phase>) {
        let d = self.degree();
        let mut vals: Vec<BigInt> = (0..=d as u64).map(|i| self.numer_at(t + i)).collect();
        table.clear();
        for j in 0..=d {
            table.push(Phase::of_ratio(&vals[0], &self.denom));
            for i in 0..d - j {
                vals[i] = &vals[i + 1] - &vals[i];
            }
        }
    }

    /// Calls `visit(t, phase)` for every `t` in `start..=end`, in order.
    pub(crate) fn walk(&self, start: u64, end: u64, mut visit: impl FnMut(u64, Phase)) {
        if start > end {
            return;
        }
        let d = self.degree();
        let mut table = Vec::with_capacity(d + 1);
        let mut t = start;
        loop {
            self.seed(t, &mut table);
            let stop = end.min(t.saturating_add(self.block - 1));
            loop {
                visit(t, table[0]);
                if t == stop {
                    break;
                }
                for j in 0..d {
                    table[j] = table[j] + table[j + 1];
                }
                t += 1;
            }
            if t == end {
                return;
            }
            t += 1;
        }
    }
}

/// Largest block length `n` with `Σ_{j≤d} C(n−1, j)` within the error budget.
fn block_len(d: usize) -> u64 {
    let fits = |n: u64| -> bool {
        let steps = (n - 1) as u128;
        let mut binom: u128 = 1;
        let mut total: u128 = 1;
        for j in 1..=d as u128 {
            if j > steps {
                break;
            }
            binom = match binom.checked_mul(steps + 1 - j) {
                Some(v) => v / j,
                None => return false,
            };
            total += binom;
            if total > PHASE_ERROR_UNITS {
                return false;
            }
        }
        total <= PHASE_ERROR_UNITS
    };
    let (mut lo, mut hi) = (1u64, MAX_BLOCK);
    if fits(hi) {
        return hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
