//! Exhaustive minimization of `∥Ψ(x, y)∥` over integer boxes.
//!
//! Rows of fixed `y` are scanned along `x` with a [`PhaseWalker`], whose
//! phases are within [`PHASE_ERROR_UNITS`] of the truth. A point is evaluated
//! exactly only when its approximate norm could match or beat the current
//! best, so the reported minimum and its position are exact and independent of
//! how rows are spread over workers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, ScaledForm};
use crate::numerics::PrecReal;
use crate::smooth::enumerate_smooth;
use crate::walk::{PhaseWalker, PHASE_ERROR_UNITS};

/// Default cap on the number of points one search may evaluate.
pub const DEFAULT_EVAL_CAP: u128 = 10_000_000_000;

/// Rows handed to one worker at a time.
const ROWS_PER_TASK: usize = 8;

/// Slack added to the walker error: one unit for truncating the exact value
/// and one for rounding the best value up.
const SLACK_UNITS: u128 = PHASE_ERROR_UNITS + 2;

/// `0 ≤ x ≤ X`, `0 ≤ y ≤ Y` without the origin, or `1 ≤ x ≤ X`, `1 ≤ y ≤ Y`
/// when `include_axes` is false. `Y = 0` leaves the single row `y = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBox {
    pub x_max: u64,
    pub y_max: u64,
    pub include_axes: bool,
    pub exclude_origin: bool,
}

impl SearchBox {
    pub fn new(x_max: u64, y_max: u64) -> Result<Self> {
        Self::with_axes(x_max, y_max, true)
    }

    pub fn with_axes(x_max: u64, y_max: u64, include_axes: bool) -> Result<Self> {
        if x_max < 1 {
            return Err(Error::InvalidParams("X must be at least 1".into()));
        }
        if !include_axes && y_max < 1 {
            return Err(Error::InvalidParams("a box without axes needs Y >= 1".into()));
        }
        Ok(Self { x_max, y_max, include_axes, exclude_origin: true })
    }

    /// Number of points searched.
    pub fn size(&self) -> u128 {
        let (x, y) = (self.x_max as u128, self.y_max as u128);
        if self.include_axes {
            (x + 1) * (y + 1) - 1
        } else {
            x * y
        }
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        let lo = u64::from(!self.include_axes);
        (x, y) != (0, 0) && (lo..=self.x_max).contains(&x) && (lo..=self.y_max).contains(&y)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_x: u64,
    pub best_y: u64,
    /// `∥Ψ(best_x, best_y)∥`
    pub min_value: f64,
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smooth_r: Option<u64>,
    pub evaluations: u64,
    pub certified_exhaustive: bool,
}

/// `α xᵏ + β yᵏ`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalForm {
    pub alpha: PrecReal,
    pub beta: PrecReal,
    pub k: u32,
}

impl DiagonalForm {
    pub fn new(alpha: PrecReal, beta: PrecReal, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidForm(format!("diagonal forms need k >= 2, got {k}")));
        }
        Ok(Self { alpha, beta, k })
    }

    pub fn to_form(&self) -> BinaryForm {
        BinaryForm::diagonal(self.k, self.alpha.clone(), self.beta.clone()).expect("k >= 2")
    }
}

#[derive(Clone, Debug)]
struct Best {
    /// `∥Ψ(x, y)∥` times the common denominator
    norm: BigInt,
    /// ⌈∥Ψ(x, y)∥·2¹²⁸⌉
    units: u128,
    x: u64,
    y: u64,
}

impl Best {
    fn key(&self) -> (&BigInt, u64, u64) {
        (&self.norm, self.x, self.y)
    }

    fn better(a: &Option<Best>, b: &Best) -> bool {
        a.as_ref().is_none_or(|a| b.key().cmp(&a.key()) == Ordering::Less)
    }
}

fn ceil_units(norm: &BigInt, d: &BigInt) -> u128 {
    let n: BigInt = norm << 128usize;
    let q: BigInt = (&n + d - 1u32) / d;
    q.to_u128().unwrap_or(u128::MAX)
}

/// One row `y` for `x` in `x_lo..=x_hi`, folding into `best`.
fn scan_row(f: &ScaledForm, y: u64, x_lo: u64, x_hi: u64, best: &mut Option<Best>) {
    let walker = PhaseWalker::scaled(f.poly_in_x(y), f.denom.clone());
    walker.walk(x_lo, x_hi, |x, phase| {
        let threshold = match best {
            Some(b) if b.norm.is_zero() && x > b.x => return,
            Some(b) => b.units.saturating_add(SLACK_UNITS),
            None => u128::MAX,
        };
        if phase.norm_units() > threshold {
            return;
        }
        let norm = f.norm_numer(x, y);
        let cand = Best { units: ceil_units(&norm, &f.denom), norm, x, y };
        if Best::better(best, &cand) {
            *best = Some(cand);
        }
    });
}

/// Minimizes over `x ∈ [x_lo(y), X]` for each row `y` in `rows`.
fn search_rows(f: &BinaryForm, rows: &[u64], x_max: u64, x_lo: impl Fn(u64) -> u64 + Sync) -> Option<(Best, BigInt)> {
    let f = &ScaledForm::new(f);
    rows.par_chunks(ROWS_PER_TASK)
        .map(|chunk| {
            let mut best = None;
            for &y in chunk {
                let lo = x_lo(y);
                if lo <= x_max {
                    scan_row(f, y, lo, x_max, &mut best);
                }
            }
            best
        })
        .reduce(|| None, |a, b| match (a, b) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => Some(if b.key() < a.key() { b } else { a }),
        })
        .map(|b| (b, f.denom.clone()))
}

fn finish(best: Option<(Best, BigInt)>, search_box: SearchBox, smooth_r: Option<u64>, evaluations: u128) -> Result<SearchResult> {
    let (best, denom) = best.ok_or_else(|| Error::InvalidParams("empty search box".into()))?;
    Ok(SearchResult {
        best_x: best.x,
        best_y: best.y,
        min_value: BigRational::new(best.norm, denom).to_f64().unwrap_or(f64::NAN),
        search_box,
        smooth_r,
        evaluations: evaluations as u64,
        certified_exhaustive: true,
    })
}

/// `min ∥Ψ(x, y)∥` over the box; ties go to the smallest `x`, then `y`.
pub fn min_fracpart(f: &BinaryForm, search_box: SearchBox) -> Result<SearchResult> {
    let size = search_box.size();
    crate::check_budget(size, DEFAULT_EVAL_CAP)?;
    let best = if search_box.include_axes {
        let rows: Vec<u64> = (0..=search_box.y_max).collect();
        search_rows(f, &rows, search_box.x_max, |y| u64::from(y == 0))
    } else {
        let rows: Vec<u64> = (1..=search_box.y_max).collect();
        search_rows(f, &rows, search_box.x_max, |_| 1)
    };
    finish(best, search_box, None, size)
}

/// [`min_fracpart`] for `αxᵏ + βyᵏ` over `0 ≤ x ≤ X`, `0 ≤ y ≤ Y`.
pub fn min_fracpart_diagonal(d: &DiagonalForm, x_max: u64, y_max: u64) -> Result<SearchResult> {
    min_fracpart(&d.to_form(), SearchBox::new(x_max, y_max)?)
}

/// `min ∥Ψ(x, y)∥` over `1 ≤ x ≤ X`, `y ∈ 𝒜(Y, R)`.
pub fn min_fracpart_smooth_y(f: &BinaryForm, x_max: u64, y_max: u64, r: u64) -> Result<SearchResult> {
    let search_box = SearchBox::with_axes(x_max, y_max, false)?;
    let rows = enumerate_smooth(y_max, r).members;
    let size = x_max as u128 * rows.len() as u128;
    crate::check_budget(size, DEFAULT_EVAL_CAP)?;
    let best = search_rows(f, &rows, x_max, |_| 1);
    finish(best, search_box, Some(r), size)
}
