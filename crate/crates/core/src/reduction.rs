//! The inductive reduction: Dirichlet approximations `qα ≈ a` and the
//! substitutions `y = q·y₁` carry `Ψ` down to a diagonal form `α_k xᵏ + β yᵏ`,
//! and small values of that diagonal form lift back to small values of `Ψ`.
//!
//! At stage `i` the form is `Ψ⁽ⁱ⁾ = α_k xᵏ + Σ_{j ≤ l−i} α⁽ⁱ⁾_j xʲ y^{k−j}` and
//!
//! ```text
//! Ψ⁽ⁱ⁾(x, q y₁) = Ψ⁽ⁱ⁺¹⁾(x, y₁) + α⁽ⁱ⁾_{l−i} x^{l−i} (q y₁)^{k−l+i},   α⁽ⁱ⁺¹⁾_j = α⁽ⁱ⁾_j q^{k−j}.
//! ```
//!
//! The dropped term is `x^{l−i}(qy₁)^{k−l+i−1}y₁` times `qα⁽ⁱ⁾_{l−i}`, so its
//! norm is at most that integer times `∥qα⁽ⁱ⁾_{l−i}∥`.
//!
//! Three schedules pick the Dirichlet modulus and the shrinking `y`-boxes:
//!
//! * [`Mode::T11`]: `Yᵢ = X^{1−i/(l+1)}` and
//!   `q ≤ X^{l−i+1} Yᵢ^{k−l+i} H^{1−2^{k−1}} X^{−δ}`, with `σ = (l+2)/(l+1)·2^{1−k}`.
//! * [`Mode::T13`], [`Mode::T14`]: `Yᵢ = X^{1−(2^{l+1}(k−l)+⋯+2^{l−i+2}(k−l+i−1))σ}` and
//!   `q ≤ H X^{l−i−2^{l−i+1}(k−l+i)σ+η} Yᵢ^{k−l+i}`, with `σ = 2/(k(k−1)+ρ)` or
//!   `σ = 2/(k log k + ρ + Ck log log k)`.
//!
//! In every mode `H = X^{σ−ε}`. The windows are built for astronomically large
//! `X`; when one is empty the step fails with [`Error::StepFailure`] and
//! [`find_small`] falls back to exhaustive search.
//!
//! Boxes are `0 ≤ x, y ≤ X` without the origin, as in the bounds themselves.
//! The arguments for the `T13`/`T14` schedules work with `1 ≤ x, y` instead;
//! allowing the axes only adds candidates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents;
use crate::forms::BinaryForm;
use crate::numerics::PrecReal;
use crate::rational::dirichlet_approx;
use crate::search::{min_fracpart, min_fracpart_diagonal, DiagonalForm, SearchBox, SearchResult};

/// Rounding slack allowed in a lift certificate.
pub const CERTIFICATE_SLACK_LOG2: i32 = -30;

/// Largest Dirichlet modulus handed to a step.
const WINDOW_CAP: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    T11,
    T13,
    T14,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "t11" => Ok(Mode::T11),
            "t13" => Ok(Mode::T13),
            "t14" => Ok(Mode::T14),
            _ => Err(Error::InvalidParams(format!("unknown mode `{s}` (expected t11, t13 or t14)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::T11 => "t11",
            Mode::T13 => "t13",
            Mode::T14 => "t14",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionConfig {
    /// The `X^{−δ}` in the `T11` window.
    pub delta: f64,
    /// The `X^{η}` in the `T13`/`T14` window and the target `X^{−η}/H`.
    pub eta: f64,
    /// `H = X^{σ−ε}`. Clamped to `σ/2` when `ε ≥ σ`, so that `H > 1`.
    pub epsilon: f64,
    /// The constant `C` of the `T14` exponent.
    pub c: f64,
    /// Reject `l > l₀(k)` for `T13` and `l > l₁(k)` for `T14`.
    pub enforce_hypotheses: bool,
    /// Also cap each window at `Yᵢ/Y_{i+1}`, the size of `q` the argument
    /// itself derives, so the substitution always leaves room for `y₁ ≥ 1`.
    #[serde(default)]
    pub clip_to_schedule: bool,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self { delta: 0.05, eta: 0.05, epsilon: 0.1, c: exponents::DEFAULT_C, enforce_hypotheses: true, clip_to_schedule: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionStep {
    pub step_index: usize,
    /// `α⁽ⁱ⁾_{l−i}`, the coefficient being approximated
    pub pivot: PrecReal,
    /// Dirichlet modulus `N`: the step finds `q ≤ N` with `|qα − a| ≤ 1/N`.
    pub window: u64,
    /// The window formula exceeded [`u64`] range and was capped.
    pub window_capped: bool,
    /// The window was cut down to `q_schedule_bound`.
    pub window_clipped: bool,
    pub q: u64,
    #[serde(serialize_with = "ser_int")]
    pub a: BigInt,
    /// `|q·pivot − a|`
    pub approx_error: PrecReal,
    /// `⌊Yᵢ⌋`
    pub y_box: u64,
    /// `Yᵢ = X^{y_exponent}`
    pub y_exponent: f64,
    /// `α⁽ⁱ⁺¹⁾_{l−i−1}, …, α⁽ⁱ⁺¹⁾_0`
    pub coeffs_after: Vec<PrecReal>,
    /// `X^{l−i} (qY_{i+1})^{k−l+i−1} Y_{i+1} ∥q·pivot∥`
    pub substitution_budget: f64,
    /// `Yᵢ/Y_{i+1}`, the largest `q` the schedule has room for
    pub q_schedule_bound: f64,
    pub within_schedule: bool,
    /// `substitution_budget ≤ X^{−η}/H`
    pub budget_ok: bool,
}

impl ReductionStep {
    /// The step met both the schedule and the error target.
    pub fn honored(&self) -> bool {
        self.within_schedule && self.budget_ok
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionTrace {
    pub original: BinaryForm,
    pub mode: Mode,
    pub x_max: u64,
    pub config: ReductionConfig,
    pub sigma: f64,
    /// The `ε` actually used in `H`.
    pub epsilon_used: f64,
    pub h: f64,
    /// `X^{−η}/H`
    pub target: f64,
    pub steps: Vec<ReductionStep>,
    pub final_diagonal: DiagonalForm,
    /// `Π qᵢ`
    #[serde(serialize_with = "ser_int")]
    pub q_product: BigInt,
    /// `⌊Y_l⌋`
    pub final_y_box: u64,
    /// `min(⌊Y_l⌋, ⌊X/Πqᵢ⌋)`: the `y`-range whose lift stays in the box.
    pub search_y_max: u64,
    pub lifted_point: Option<(u64, u64)>,
}

impl ReductionTrace {
    /// Recomputes every `coeffs_after` from the original form and the `qᵢ`
    /// and compares exactly.
    pub fn replay_matches(&self) -> bool {
        let qs: Vec<u64> = self.steps.iter().map(|s| s.q).collect();
        let replayed = replay(&self.original, &qs);
        replayed.len() == self.steps.len()
            && replayed.iter().zip(&self.steps).all(|(r, s)| *r == s.coeffs_after)
            && replayed.last().map_or(self.original.alpha(0), |r| r[0].clone()) == self.final_diagonal.beta
    }

    /// Steps that missed the schedule or the error target.
    pub fn flagged_steps(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| !s.honored()).map(|s| s.step_index).collect()
    }
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Lower coefficients after each substitution: entry `i` lists
/// `α⁽ⁱ⁺¹⁾_{l−i−1}, …, α⁽ⁱ⁺¹⁾_0` for `y = qᵢ·y₁`.
pub fn replay(original: &BinaryForm, qs: &[u64]) -> Vec<Vec<PrecReal>> {
    let k = original.k();
    let mut coeffs = original.lower_coeffs().to_vec();
    let mut out = vec![];
    for &q in qs {
        if coeffs.len() < 2 {
            break;
        }
        coeffs = replay_step(&coeffs, k, q);
        out.push(coeffs.clone());
    }
    out
}

pub(crate) fn sigma_for(mode: Mode, k: u32, l: u32, cfg: &ReductionConfig) -> Result<f64> {
    let kf = k as f64;
    let to_f64 = |r: BigRational| r.to_f64().unwrap_or(f64::NAN);
    let sigma = match (mode, l) {
        (Mode::T11, 0) => 2.0 * 0.5f64.powi(k as i32 - 1),
        (Mode::T11, _) => to_f64(exponents::sigma_theorem11(k, l)?),
        (Mode::T13, 0) => 2.0 / (kf * (kf - 1.0)),
        (Mode::T13, _) if cfg.enforce_hypotheses => to_f64(exponents::sigma_theorem13(k, l)?),
        (Mode::T13, _) => 2.0 / (kf * (kf - 1.0) + exponents::rho(k, l)?.to_f64().unwrap_or(f64::INFINITY)),
        (Mode::T14, 0) => 2.0 / (kf * kf.ln() + cfg.c * kf * kf.ln().ln()),
        (Mode::T14, _) if cfg.enforce_hypotheses => exponents::sigma_theorem14(k, l, cfg.c)?,
        (Mode::T14, _) => exponents::sigma_theorem14_formula(k, l, cfg.c)?,
    };
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("no positive exponent for {mode} with k = {k}, l = {l}")));
    }
    Ok(sigma)
}

/// `⌊X^{p/q}⌋` exactly.
fn floor_root_pow(x: u64, p: u32, q: u32) -> u64 {
    let v = num_traits::pow(BigInt::from(x), p as usize).nth_root(q);
    v.to_u64().unwrap_or(u64::MAX)
}

/// `⌊X^e⌋` in floating point, clamped to `[0, X]`.
fn floor_pow(x: u64, e: f64) -> u64 {
    ((x as f64).powf(e).floor() as u64).min(x)
}

struct Schedule {
    /// `Yᵢ = X^{exps[i]}` for `0 ≤ i ≤ l`
    exps: Vec<f64>,
    boxes: Vec<u64>,
}

fn schedule(mode: Mode, k: u32, l: u32, sigma: f64, x: u64) -> Schedule {
    let (mut exps, mut boxes) = (vec![], vec![]);
    let mut spent = 0.0;
    for i in 0..=l {
        match mode {
            Mode::T11 => {
                exps.push(1.0 - i as f64 / (l + 1) as f64);
                boxes.push(floor_root_pow(x, l + 1 - i, l + 1));
            }
            Mode::T13 | Mode::T14 => {
                let e = 1.0 - spent * sigma;
                exps.push(e);
                boxes.push(if e <= 0.0 { 0 } else { floor_pow(x, e) });
                spent += (1u64 << (l - i + 1)) as f64 * (k - l + i) as f64;
            }
        }
    }
    Schedule { exps, boxes }
}

/// Carries `f` down to a diagonal form, recording every step.
pub fn reduce(f: &BinaryForm, x_max: u64, mode: Mode, cfg: &ReductionConfig) -> Result<ReductionTrace> {
    if x_max < 2 {
        return Err(Error::InvalidParams("reduction needs X >= 2".into()));
    }
    if !(cfg.delta > 0.0 && cfg.eta > 0.0 && cfg.epsilon > 0.0) {
        return Err(Error::InvalidParams("delta, eta and epsilon must be positive".into()));
    }
    let (k, l) = (f.k(), f.l());
    let sigma = sigma_for(mode, k, l, cfg)?;
    let epsilon_used = if cfg.epsilon < sigma { cfg.epsilon } else { sigma / 2.0 };
    let ln_x = (x_max as f64).ln();
    let h_exp = sigma - epsilon_used;
    let h = (h_exp * ln_x).exp();
    let target_exp = -cfg.eta - h_exp;
    let sched = schedule(mode, k, l, sigma, x_max);

    let mut coeffs = f.lower_coeffs().to_vec();
    let mut steps = vec![];
    let mut q_product = BigInt::one();
    for i in 0..l as usize {
        let iu = i as u32;
        let (e_i, e_next) = (sched.exps[i], sched.exps[i + 1]);
        let m = (k - l + iu) as f64;
        let window_exp = match mode {
            Mode::T11 => (l - iu + 1) as f64 + m * e_i + (1.0 - 2f64.powi(k as i32 - 1)) * h_exp - cfg.delta,
            Mode::T13 | Mode::T14 => {
                h_exp + (l - iu) as f64 - 2f64.powi((l - iu + 1) as i32) * m * sigma + cfg.eta + m * e_i
            }
        };
        let window_real = (window_exp * ln_x).exp();
        if window_real < 1.0 {
            return Err(Error::StepFailure {
                step: i,
                reason: format!("Dirichlet window X^{window_exp:.4} = {window_real:.4} is below 1"),
            });
        }
        let window_capped = window_real >= WINDOW_CAP as f64;
        let mut window = if window_capped { WINDOW_CAP } else { window_real.floor() as u64 };
        let q_schedule_bound = ((e_i - e_next) * ln_x).exp();
        let window_clipped = cfg.clip_to_schedule && q_schedule_bound < window as f64;
        if window_clipped {
            window = q_schedule_bound.floor() as u64;
            if window < 1 {
                return Err(Error::StepFailure { step: i, reason: format!("schedule bound {q_schedule_bound:.4} is below 1") });
            }
        }

        let pivot = coeffs[0].clone();
        // The stored rational is the form being reduced and certified, so it is
        // approximated as an exact number; `pivot` keeps its radius on record.
        let exact = PrecReal::from_rational(pivot.value().clone());
        let approx = dirichlet_approx(&exact, window)?;
        let q = approx.q;
        let qb = BigInt::from(q);
        let norm = pivot.mul_int(&qb).frac_norm();
        let substitution_budget = if norm == 0.0 {
            0.0
        } else {
            let ln_b = (l - iu) as f64 * ln_x + (m - 1.0) * ((q as f64).ln() + e_next * ln_x) + e_next * ln_x + norm.ln();
            ln_b.exp()
        };
        let after = replay_step(&coeffs, k, q);
        q_product *= &qb;
        steps.push(ReductionStep {
            step_index: i,
            pivot,
            window,
            window_capped,
            window_clipped,
            q,
            a: approx.a,
            approx_error: approx.err,
            y_box: sched.boxes[i],
            y_exponent: e_i,
            coeffs_after: after.clone(),
            substitution_budget,
            q_schedule_bound,
            within_schedule: q as f64 <= q_schedule_bound * (1.0 + 1e-12),
            budget_ok: substitution_budget <= (target_exp * ln_x).exp(),
        });
        coeffs = after;
    }

    let final_y_box = sched.boxes[l as usize];
    let room = (BigInt::from(x_max) / &q_product).to_u64().unwrap_or(0);
    Ok(ReductionTrace {
        original: f.clone(),
        mode,
        x_max,
        config: *cfg,
        sigma,
        epsilon_used,
        h,
        target: (target_exp * ln_x).exp(),
        steps,
        final_diagonal: DiagonalForm::new(f.alpha_k().clone(), coeffs[0].clone(), k)?,
        q_product,
        final_y_box,
        search_y_max: final_y_box.min(room),
        lifted_point: None,
    })
}

fn replay_step(coeffs: &[PrecReal], k: u32, q: u64) -> Vec<PrecReal> {
    let top = coeffs.len() as u32 - 1;
    coeffs[1..]
        .iter()
        .enumerate()
        // entry t of the shortened list is α_j with j = top − 1 − t
        .map(|(t, c)| c.mul_int(&num_traits::pow(BigInt::from(q), (k - (top - 1 - t as u32)) as usize)))
        .collect()
}

/// The chain `∥Ψ(x, Πqᵢ·y₀)∥ ≤ ∥α_k xᵏ + β y₀ᵏ∥ + Σ ∥droppedᵢ∥ ≤ ∥α_k xᵏ + β y₀ᵏ∥ + Σ boundᵢ`,
/// evaluated at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftCertificate {
    /// `∥Ψ(x, y)∥` at the lifted point
    pub lhs: f64,
    /// `∥α_k xᵏ + β y₀ᵏ∥`
    pub diagonal_value: f64,
    /// `∥α⁽ⁱ⁾_{l−i} x^{l−i} yᵢ^{k−l+i}∥` with `yᵢ = q_i⋯q_{l−1}·y₀`
    pub dropped: Vec<f64>,
    /// `x^{l−i} yᵢ^{k−l+i−1} y_{i+1} ∥qᵢα⁽ⁱ⁾_{l−i}∥`
    pub dropped_bounds: Vec<f64>,
    /// `diagonal_value + Σ dropped`
    pub rhs: f64,
    /// `diagonal_value + Σ dropped_bounds`
    pub rhs_bound: f64,
    /// Both inequalities hold up to `2^{−30}`, checked in exact arithmetic.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lift {
    pub x: u64,
    pub y: u64,
    pub certificate: LiftCertificate,
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Maps a point `(x, y₀)` of the final diagonal form back to `(x, Πqᵢ·y₀)`
/// and certifies its value.
pub fn lift(trace: &ReductionTrace, x: u64, y0: u64) -> Result<Lift> {
    if x > trace.x_max || y0 > trace.final_y_box {
        return Err(Error::InvalidParams(format!(
            "({x}, {y0}) lies outside the final box X = {}, Y = {}",
            trace.x_max, trace.final_y_box
        )));
    }
    let y_big = &trace.q_product * BigInt::from(y0);
    let y = match y_big.to_u64() {
        Some(y) if y <= trace.x_max => y,
        _ => return Err(Error::LiftOutOfBox { y: y_big.to_string(), x_max: trace.x_max }),
    };

    let (k, l) = (trace.original.k(), trace.original.l());
    let xb = BigInt::from(x);
    let lhs = trace.original.evaluate(&xb, &y_big).frac_norm_exact();
    let diag = trace.final_diagonal.to_form().evaluate(&xb, &BigInt::from(y0)).frac_norm_exact();

    // yᵢ for i = l, l−1, …, 0, then reversed
    let mut ys = vec![BigInt::from(y0)];
    for s in trace.steps.iter().rev() {
        let next = ys.last().expect("non-empty") * BigInt::from(s.q);
        ys.push(next);
    }
    ys.reverse();

    let mut dropped = vec![];
    let mut bounds = vec![];
    for (i, s) in trace.steps.iter().enumerate() {
        let j = l - i as u32;
        let xj = num_traits::pow(xb.clone(), j as usize);
        let term = s.pivot.mul_int(&(&xj * num_traits::pow(ys[i].clone(), (k - j) as usize)));
        dropped.push(term.frac_norm_exact());
        let mult = &xj * num_traits::pow(ys[i].clone(), (k - j - 1) as usize) * &ys[i + 1];
        let qn = s.pivot.mul_int(&BigInt::from(s.q)).frac_norm_exact();
        bounds.push(BigRational::from_integer(mult) * qn);
    }
    let rhs = dropped.iter().fold(diag.clone(), |acc, d| acc + d);
    let rhs_bound = bounds.iter().fold(diag.clone(), |acc, b| acc + b);
    let slack = BigRational::new(BigInt::one(), BigInt::one() << (-CERTIFICATE_SLACK_LOG2) as usize);
    let holds = lhs <= &rhs + &slack && rhs <= &rhs_bound + &slack;

    Ok(Lift {
        x,
        y,
        certificate: LiftCertificate {
            lhs: to_f64(&lhs),
            diagonal_value: to_f64(&diag),
            dropped: dropped.iter().map(to_f64).collect(),
            dropped_bounds: bounds.iter().map(to_f64).collect(),
            rhs: to_f64(&rhs),
            rhs_bound: to_f64(&rhs_bound),
            holds,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Constructive,
    ExhaustiveFallback,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FindSmall {
    /// The point in original coordinates and `∥Ψ∥` there.
    pub result: SearchResult,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ReductionTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<LiftCertificate>,
}

/// Reduce, minimize the diagonal form over `(X, min(Y_l, X/Πqᵢ))`, lift.
///
/// When a step fails the result is the exhaustive minimum over the original
/// box instead, marked [`Provenance::ExhaustiveFallback`].
pub fn find_small(f: &BinaryForm, x_max: u64, mode: Mode, cfg: &ReductionConfig) -> Result<FindSmall> {
    let full_box = SearchBox::new(x_max, x_max)?;
    let mut trace = match reduce(f, x_max, mode, cfg) {
        Ok(t) => t,
        Err(Error::StepFailure { step, reason }) => {
            return Ok(FindSmall {
                result: min_fracpart(f, full_box)?,
                provenance: Provenance::ExhaustiveFallback,
                fallback_reason: Some(format!("step {step}: {reason}")),
                trace: None,
                certificate: None,
            })
        }
        Err(e) => return Err(e),
    };
    let diag = min_fracpart_diagonal(&trace.final_diagonal, x_max, trace.search_y_max)?;
    let lifted = lift(&trace, diag.best_x, diag.best_y)?;
    trace.lifted_point = Some((lifted.x, lifted.y));
    let result = SearchResult {
        best_x: lifted.x,
        best_y: lifted.y,
        min_value: lifted.certificate.lhs,
        search_box: full_box,
        smooth_r: None,
        evaluations: diag.evaluations,
        // with no steps the diagonal search already covered the whole box
        certified_exhaustive: trace.steps.is_empty(),
    };
    Ok(FindSmall {
        result,
        provenance: Provenance::Constructive,
        fallback_reason: None,
        trace: Some(trace),
        certificate: Some(lifted.certificate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> BinaryForm {
        BinaryForm::parse(s).unwrap()
    }

    fn cfg() -> ReductionConfig {
        ReductionConfig::default()
    }

    #[test]
    fn diagonal_input_has_no_steps() {
        let f = form("k=3 l=0 alpha_k=sqrt2 alphas=[pi]");
        let t = reduce(&f, 1000, Mode::T11, &cfg()).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.final_diagonal.beta, f.alpha(0));
        assert_eq!(t.q_product, BigInt::one());
        let l = lift(&t, 7, 3).unwrap();
        assert_eq!((l.x, l.y), (7, 3));
        assert_eq!(l.certificate.lhs, l.certificate.diagonal_value);
    }

    #[test]
    fn diagonal_find_small_matches_search() {
        let f = form("k=2 l=0 alpha_k=sqrt2 alphas=[sqrt3]");
        let got = find_small(&f, 60, Mode::T11, &cfg()).unwrap();
        let d = DiagonalForm::new(f.alpha_k().clone(), f.alpha(0), 2).unwrap();
        assert_eq!(got.result, min_fracpart_diagonal(&d, 60, 60).unwrap());
    }

    #[test]
    fn rational_coefficients_give_exact_steps() {
        // denominators 7 and 3: every q divides a power of 21
        let f = form("k=4 l=2 alpha_k=sqrt2 alphas=[3/7, 2/3, 5/21]");
        let t = reduce(&f, 10_000, Mode::T11, &cfg()).unwrap();
        assert_eq!(t.steps.len(), 2);
        for s in &t.steps {
            assert!(s.approx_error.is_zero());
            assert_eq!(21u64.pow(4) % s.q, 0, "q = {}", s.q);
        }
        assert!(t.replay_matches());
        let fs = find_small(&f, 10_000, Mode::T11, &cfg()).unwrap();
        assert!(fs.certificate.unwrap().holds);
    }

    #[test]
    fn replay_by_hand() {
        // α_2 = 1/2, α_1 = 1/3, α_0 = 1/5, k = 5, q = (2, 3)
        let f = form("k=5 l=2 alpha_k=1 alphas=[1/2, 1/3, 1/5]");
        let r = replay(&f, &[2, 3]);
        let v = |p: i64, q: i64| PrecReal::from_ratio(p, q).unwrap();
        assert_eq!(r[0], vec![v(16, 3), v(32, 5)]);
        assert_eq!(r[1], vec![v(32 * 243, 5)]);
    }

    #[test]
    fn final_beta_is_alpha0_times_q_product_power() {
        let f = form("k=4 l=2 alpha_k=sqrt2 alphas=[pi, e, sqrt3]");
        let t = reduce(&f, 10_000, Mode::T11, &cfg()).unwrap();
        assert!(t.replay_matches());
        let want = f.alpha(0).mul_int(&num_traits::pow(t.q_product.clone(), 4));
        assert_eq!(t.final_diagonal.beta.value(), want.value());
    }

    #[test]
    fn lift_certificate_holds() {
        let f = form("k=4 l=2 alpha_k=sqrt2 alphas=[pi, e, sqrt3]");
        let t = reduce(&f, 10_000, Mode::T11, &cfg()).unwrap();
        for (x, y0) in [(1, 0), (17, 0), (9999, 0), (3, 1), (100, t.search_y_max)] {
            if y0 > t.search_y_max {
                continue;
            }
            let l = lift(&t, x, y0).unwrap();
            assert!(l.certificate.holds, "{:?}", l.certificate);
            assert!(l.certificate.lhs <= l.certificate.rhs + 1e-9);
        }
    }

    #[test]
    fn lift_rejects_points_that_leave_the_box() {
        let f = form("k=4 l=1 alpha_k=1 alphas=[1/3, 1/5]");
        let t = reduce(&f, 1000, Mode::T11, &cfg()).unwrap();
        assert_eq!(t.q_product, BigInt::from(3));
        assert!(lift(&t, 1, t.final_y_box + 1).is_err());
        // Y_1 = ⌊√1000⌋ = 31 and 3·31 ≤ 1000, so every final point lifts
        assert_eq!(t.final_y_box, 31);
        assert_eq!(lift(&t, 1, 31).unwrap().y, 93);
    }

    #[test]
    fn find_small_not_below_exhaustive() {
        let f = form("k=3 l=1 alpha_k=1 alphas=[pi, e]");
        let x = 300;
        let fs = find_small(&f, x, Mode::T11, &cfg()).unwrap();
        let ex = min_fracpart(&f, SearchBox::new(x, x).unwrap()).unwrap();
        assert!(fs.result.min_value >= ex.min_value);
        if let Some(c) = &fs.certificate {
            assert!(c.holds);
        }
    }

    #[test]
    fn hypotheses_are_enforced() {
        let f = form("k=6 l=2 alpha_k=sqrt2 alphas=[pi, e, sqrt3]");
        assert!(matches!(reduce(&f, 10_000, Mode::T13, &cfg()), Err(Error::Domain(_))));
        let loose = ReductionConfig { enforce_hypotheses: false, ..cfg() };
        let t = reduce(&f, 10_000, Mode::T13, &loose);
        assert!(matches!(t, Ok(_) | Err(Error::StepFailure { .. })), "{t:?}");
    }

    #[test]
    fn empty_window_falls_back() {
        // T13 with hypotheses off: Y shrinks fast and the window closes at small X
        let f = form("k=6 l=2 alpha_k=sqrt2 alphas=[pi, e, sqrt3]");
        let loose = ReductionConfig { enforce_hypotheses: false, eta: 0.01, ..cfg() };
        match reduce(&f, 20, Mode::T13, &loose) {
            Err(Error::StepFailure { .. }) => {
                let fs = find_small(&f, 20, Mode::T13, &loose).unwrap();
                assert_eq!(fs.provenance, Provenance::ExhaustiveFallback);
                assert!(fs.fallback_reason.is_some());
                assert!(fs.result.certified_exhaustive);
            }
            Ok(t) => assert!(t.replay_matches()),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn clipped_windows_leave_room() {
        let f = form("k=4 l=2 alpha_k=sqrt2 alphas=[pi, e, sqrt3]");
        let clip = ReductionConfig { clip_to_schedule: true, ..cfg() };
        let t = reduce(&f, 10_000, Mode::T11, &clip).unwrap();
        assert!(t.steps.iter().all(|s| s.within_schedule && s.window_clipped));
        assert!(t.search_y_max >= 1);
        for y0 in 0..=t.search_y_max {
            for x in [1, 2, 77, 9_999] {
                let l = lift(&t, x, y0).unwrap();
                assert!(l.certificate.holds, "{:?}", l.certificate);
            }
        }
        let fs = find_small(&f, 10_000, Mode::T11, &clip).unwrap();
        assert_eq!(fs.provenance, Provenance::Constructive);
    }

    #[test]
    fn t11_schedule_boxes() {
        let s = schedule(Mode::T11, 5, 2, 0.1, 1_000_000);
        assert_eq!(s.boxes, vec![1_000_000, 10_000, 100]);
        let s = schedule(Mode::T11, 4, 1, 0.1, 8);
        assert_eq!(s.boxes, vec![8, 2]);
    }

    #[test]
    fn mode_round_trip() {
        for m in [Mode::T11, Mode::T13, Mode::T14] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("t12".parse::<Mode>().is_err());
    }
}
