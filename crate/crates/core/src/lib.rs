//! Binary forms near integers: exact evaluation modulo one,
//! Weyl differencing, smooth-number decompositions, exponential sums,
//! exponent formulas, searches, and the inductive reduction that finds
//! certified small values.

pub mod error;
pub mod exponents;
pub mod expsums;
pub mod forms;
pub mod harness;
pub mod numerics;
pub mod rational;
pub mod reduction;
pub mod search;
pub mod smooth;
pub(crate) mod walk;

pub use error::{Error, Result};
pub use forms::{Axis, BinaryForm, IntegerBinaryForm};
pub use numerics::{e_of, frac_norm, PrecReal};

/// Environment variable that overrides every evaluation cap.
pub const BUDGET_ENV: &str = "BINFORM_BUDGET";

/// `default`, unless [`BUDGET_ENV`] holds a positive integer.
pub fn budget_cap(default: u128) -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse::<u128>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(default)
}

pub(crate) fn check_budget(needed: u128, default: u128) -> Result<()> {
    let cap = budget_cap(default);
    if needed > cap {
        Err(Error::Budget { needed, cap })
    } else {
        Ok(())
    }
}
