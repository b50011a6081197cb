//! Exponential sums over boxes and smooth sets: Weyl sums, `T(𝛂)`, `S(𝛂)`,
//! `Ξ(β)`, the `N/6` lower bound for sums over points far from integers, and
//! the one-variable sums used to bound `Ξ`.
//!
//! Every phase is reduced modulo one exactly (or through the certified
//! [`PhaseWalker`]) before any floating-point trigonometry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, ScaledForm};
use crate::numerics::{Phase, PrecReal};
use crate::rational::dirichlet_approx;
use crate::smooth::enumerate_smooth;
use crate::walk::PhaseWalker;

/// Default cap on the number of terms of one sum.
pub const DEFAULT_TERM_CAP: u128 = 10_000_000_000;

/// Number of row groups a sum is split into. Fixed so the floating-point
/// summation order never depends on the worker count.
const MAX_GROUPS: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Cx {
    re: f64,
    im: f64,
}

impl Cx {
    fn of(p: Phase) -> Self {
        let u = p.unit();
        Cx { re: u.re, im: u.im }
    }

    fn add(&mut self, o: Cx) {
        self.re += o.re;
        self.im += o.im;
    }

    fn mul(self, o: Cx) -> Cx {
        Cx { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSumParams {
    pub kind: String,
    pub h: u64,
    pub x: u64,
    pub y: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub form: BinaryForm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSumValue {
    pub value: f64,
    pub params: ExpSumParams,
    /// `|inner sum|` for h = 1, …, H.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<f64>>,
}

/// `|Σ_{x=1}^{X} e(hαxᵏ)|`.
pub fn weyl_sum(alpha: &PrecReal, k: u32, x_max: u64, h: u64) -> f64 {
    let mut coeffs = vec![BigRational::zero(); k as usize + 1];
    coeffs[k as usize] = alpha.value() * BigRational::from_integer(BigInt::from(h));
    let mut s = Cx::default();
    PhaseWalker::new(coeffs).walk(1, x_max, |_, p| s.add(Cx::of(p)));
    s.abs()
}

fn group_size(n: usize) -> usize {
    n.div_ceil(MAX_GROUPS).max(1)
}

/// `Σ_{x≤X} Σ_{y∈ys} e(h g(x, y))` for every `h ≤ H`.
fn inner_sums(f: &ScaledForm, h_max: u64, x_max: u64, ys: &[u64]) -> Vec<Cx> {
    let h = h_max as usize;
    let partial: Vec<Vec<Cx>> = ys
        .par_chunks(group_size(ys.len()))
        .map(|group| {
            let mut acc = vec![Cx::default(); h];
            for &y in group {
                PhaseWalker::scaled(f.poly_in_x(y), f.denom.clone()).walk(1, x_max, |_, p| {
                    let z = Cx::of(p);
                    let mut w = z;
                    for slot in acc.iter_mut() {
                        slot.add(w);
                        w = w.mul(z);
                    }
                });
            }
            acc
        })
        .collect();
    let mut total = vec![Cx::default(); h];
    for acc in partial {
        for (t, a) in total.iter_mut().zip(acc) {
            t.add(a);
        }
    }
    total
}

fn outer_sum(f: &BinaryForm, kind: &str, h: u64, x: u64, y: u64, r: Option<u64>, ys: &[u64]) -> Result<ExpSumValue> {
    if h == 0 || x == 0 || y == 0 {
        return Err(Error::InvalidParams("H, X and Y must be at least 1".into()));
    }
    crate::check_budget(h as u128 * x as u128 * ys.len() as u128, DEFAULT_TERM_CAP)?;
    let terms: Vec<f64> = inner_sums(&ScaledForm::new(f), h, x, ys).into_iter().map(Cx::abs).collect();
    let value = terms.iter().sum();
    let params = ExpSumParams { kind: kind.into(), h, x, y, r, form: f.clone() };
    Ok(ExpSumValue { value, params, terms: Some(terms) })
}

/// `T(𝛂) = Σ_{h≤H} |Σ_{x≤X} Σ_{y≤Y} e(h g(x, y))|`.
pub fn sum_t(f: &BinaryForm, h: u64, x: u64, y: u64) -> Result<ExpSumValue> {
    let ys: Vec<u64> = (1..=y).collect();
    outer_sum(f, "T", h, x, y, None, &ys)
}

/// `S(𝛂)`: as [`sum_t`] with `y` running over `𝒜(Y, R)`.
pub fn sum_s(f: &BinaryForm, h: u64, x: u64, y: u64, r: u64) -> Result<ExpSumValue> {
    let ys = enumerate_smooth(y, r).members;
    outer_sum(f, "S", h, x, y, Some(r), &ys)
}

/// Parameters of `Ξ(β) = Σ_{vᵢ≤Vᵢ} Σ_{U/2<u₁,u₂≤U} |Σ_{x≤L} e(β(v₁⋯v_r)^{k−l}(u₁^{k−l}−u₂^{k−l})x)|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiParams {
    pub v: Vec<f64>,
    pub u: f64,
    pub l_len: f64,
    pub k: u32,
    pub l: u32,
    pub beta: PrecReal,
    /// `1 ≤ U ≤ ½(L·V₁^{k−l}⋯V_r^{k−l})^{1/(2(k−l)−1)}`
    pub u_ok: bool,
    /// `1 ≤ V_r < ½ L^{1/(k−l)} U^{−1/(2(k−l))}`
    pub v_last_ok: bool,
    /// `1 ≤ Vᵢ < ½ L^{1/(k−l)} V_{i+1}⋯V_r U^{−1}` for `i < r`
    pub v_chain_ok: bool,
}

impl XiParams {
    pub fn new(v: Vec<f64>, u: f64, l_len: f64, k: u32, l: u32, beta: PrecReal) -> Result<Self> {
        if l >= k || v.is_empty() || l_len < 1.0 || u < 1.0 {
            return Err(Error::InvalidParams("need l < k, r >= 1, U >= 1 and L >= 1".into()));
        }
        let d = (k - l) as f64;
        let vprod: f64 = v.iter().map(|vi| vi.powf(d)).product();
        let u_ok = u <= 0.5 * (l_len * vprod).powf(1.0 / (2.0 * d - 1.0));
        let root = l_len.powf(1.0 / d);
        let last = *v.last().expect("non-empty");
        let v_last_ok = (1.0..0.5 * root * u.powf(-1.0 / (2.0 * d))).contains(&last);
        let v_chain_ok = (0..v.len() - 1).all(|i| {
            let tail: f64 = v[i + 1..].iter().product();
            (1.0..0.5 * root * tail / u).contains(&v[i])
        });
        Ok(Self { v, u, l_len, k, l, beta, u_ok, v_last_ok, v_chain_ok })
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.u_ok && self.v_last_ok && self.v_chain_ok
    }

    fn u_range(&self) -> std::ops::RangeInclusive<u64> {
        ((self.u / 2.0).floor() as u64 + 1)..=(self.u.floor() as u64)
    }

    fn v_tuples(&self) -> Vec<u64> {
        let mut prods = vec![1u64];
        for &vi in &self.v {
            let top = vi.floor() as u64;
            prods = prods.iter().flat_map(|&p| (1..=top).map(move |t| p * t)).collect();
        }
        prods
    }

    /// The right-hand side `V₁⋯V_r U² L^{1+ε}/(q + Q|qβ − a|)^{1/(k−l)} + V₁⋯V_r L^{1+ε} U^{3/2}`
    /// with `Q = V₁^{k−l}⋯V_r^{k−l}U^{k−l}L`. Refuses parameters that fail
    /// the hypotheses.
    pub fn bound(&self, q: u64, a: &BigInt, eps: f64) -> Result<f64> {
        if !self.hypotheses_hold() {
            return Err(Error::Domain("Xi parameters violate the size hypotheses".into()));
        }
        let d = (self.k - self.l) as f64;
        let vp: f64 = self.v.iter().product();
        let big_q = self.v.iter().map(|vi| vi.powf(d)).product::<f64>() * self.u.powf(d) * self.l_len;
        let dist = (&self.beta.mul_int(&BigInt::from(q)) - &PrecReal::from_int(a.clone())).abs().to_f64();
        let l1 = self.l_len.powf(1.0 + eps);
        Ok(vp * self.u * self.u * l1 / (q as f64 + big_q * dist).powf(1.0 / d) + vp * l1 * self.u.powf(1.5))
    }
}

/// `|Σ_{x=1}^{L} e(θx)| = |sin(πLθ)/sin(πθ)|`, or `L` when θ is an integer.
pub fn geometric_abs(theta: Phase, len: u64) -> f64 {
    if theta.0 == 0 {
        return len as f64;
    }
    let num = (std::f64::consts::PI * theta.times(len as u128).signed_turns()).sin();
    let den = (std::f64::consts::PI * theta.signed_turns()).sin();
    (num / den).abs()
}

fn scaled_phase(beta: &PrecReal, beta_phase: Phase, m: &BigInt) -> Phase {
    match m.to_i64() {
        Some(s) => {
            let p = beta_phase.times(s.unsigned_abs() as u128);
            if s < 0 { p.neg() } else { p }
        }
        None => beta.mul_int(m).phase(),
    }
}

/// `Ξ(β)` by enumeration of `(v₁, …, v_r, u₁, u₂)` with the closed-form inner sum.
pub fn sum_xi(p: &XiParams) -> Result<f64> {
    let d = (p.k - p.l) as usize;
    let us: Vec<u64> = p.u_range().collect();
    let vs = p.v_tuples();
    let len = p.l_len.floor() as u64;
    crate::check_budget(vs.len() as u128 * (us.len() * us.len()) as u128, DEFAULT_TERM_CAP)?;
    let upow: Vec<BigInt> = us.iter().map(|&u| num_traits::pow(BigInt::from(u), d)).collect();
    let beta_phase = p.beta.phase();
    let partial: Vec<f64> = vs
        .par_chunks(group_size(vs.len()))
        .map(|group| {
            let mut s = 0.0;
            for &v in group {
                let vpow = num_traits::pow(BigInt::from(v), d);
                for a in &upow {
                    for b in &upow {
                        let m = &vpow * (a - b);
                        let theta = if m.is_zero() { Phase::ZERO } else { scaled_phase(&p.beta, beta_phase, &m) };
                        s += geometric_abs(theta, len);
                    }
                }
            }
            s
        })
        .collect();
    Ok(partial.iter().sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma21Check {
    pub holds_hypothesis: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// `Σ_{h≤H} |Σ_n e(h xₙ)|` against `N/6`; the hypothesis is `∥xₙ∥ ≥ 1/H` for all n.
pub fn lemma21_check(values: &[PrecReal], h: u64) -> Result<Lemma21Check> {
    if h == 0 || values.is_empty() {
        return Err(Error::InvalidParams("need H >= 1 and at least one value".into()));
    }
    let inv_h = BigRational::new(BigInt::one(), BigInt::from(h));
    let holds_hypothesis = values.iter().all(|v| v.frac_norm_exact() >= inv_h);
    let phases: Vec<Phase> = values.iter().map(PrecReal::phase).collect();
    let lhs = (1..=h as u128)
        .map(|hh| {
            let mut s = Cx::default();
            for p in &phases {
                s.add(Cx::of(p.times(hh)));
            }
            s.abs()
        })
        .sum();
    Ok(Lemma21Check { holds_hypothesis, lhs, rhs: values.len() as f64 / 6.0 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixSum {
    pub variant: u8,
    pub sum: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// The finite sums over `1 ≤ n ≤ N` and their bounds (natural logarithm):
///
/// 1. `Σ 1/(1+αn^d)` against `N/(1+N^dα)^{1/d}`
/// 2. `Σ 1/(1+αn^d)^{1/d}` against `N log N/(1+N^dα)^{1/d}`
/// 3. `Σ 1/(1+αn)^{2/d}` against `N log N/(1+Nα)^{2/d}`
///
/// where `d = k − l`.
pub fn appendix_sum(variant: u8, alpha: f64, n: u64, k_minus_l: u32) -> Result<AppendixSum> {
    if !(alpha > 0.0) || n < 2 || k_minus_l < 2 {
        return Err(Error::InvalidParams("need alpha > 0, N >= 2, k - l >= 2".into()));
    }
    let d = k_minus_l as f64;
    let nf = n as f64;
    let term: Box<dyn Fn(f64) -> f64> = match variant {
        1 => Box::new(|t: f64| 1.0 / (1.0 + alpha * t.powf(d))),
        2 => Box::new(|t: f64| (1.0 + alpha * t.powf(d)).powf(-1.0 / d)),
        3 => Box::new(|t: f64| (1.0 + alpha * t).powf(-2.0 / d)),
        _ => return Err(Error::InvalidParams(format!("variant must be 1, 2 or 3, got {variant}"))),
    };
    let sum: f64 = (1..=n).map(|t| term(t as f64)).sum();
    let bound = match variant {
        1 => nf / (1.0 + nf.powf(d) * alpha).powf(1.0 / d),
        2 => nf * nf.ln() / (1.0 + nf.powf(d) * alpha).powf(1.0 / d),
        _ => nf * nf.ln() / (1.0 + nf * alpha).powf(2.0 / d),
    };
    Ok(AppendixSum { variant, sum, bound, ratio: sum / bound })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    pub h: u64,
    pub x: u64,
    pub y: u64,
    pub q1: u64,
    pub q2: u64,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// `T(𝛂)` divided by
/// `H(XY)^{1+ε}(1/q₁+1/X+q₁/(HXᵏ))^{2^{1−k}}(1/q₂+1/Y+q₂/(HXˡY^{k−l}))^{2^{1−k}}`,
/// with `q₁`, `q₂` the Dirichlet denominators of `α_k` and `α_l` at moduli
/// `⌊√(HXᵏ)⌋` and `⌊√(HXˡY^{k−l})⌋`.
pub fn lemma31_ratio(f: &BinaryForm, h: u64, x: u64, y: u64, eps: f64) -> Result<TrendPoint> {
    let (k, l) = (f.k() as i32, f.l() as i32);
    let (hf, xf, yf) = (h as f64, x as f64, y as f64);
    let n1 = (hf * xf.powi(k)).sqrt().floor().clamp(1.0, 1e18) as u64;
    let n2 = (hf * xf.powi(l) * yf.powi(k - l)).sqrt().floor().clamp(1.0, 1e18) as u64;
    let q1 = dirichlet_approx(f.alpha_k(), n1)?.q;
    let q2 = dirichlet_approx(&f.alpha(f.l()), n2)?.q;
    let value = sum_t(f, h, x, y)?.value;
    let w = 2f64.powi(1 - k);
    let (q1f, q2f) = (q1 as f64, q2 as f64);
    let bound = hf
        * (xf * yf).powf(1.0 + eps)
        * (1.0 / q1f + 1.0 / xf + q1f / (hf * xf.powi(k))).powf(w)
        * (1.0 / q2f + 1.0 / yf + q2f / (hf * xf.powi(l) * yf.powi(k - l))).powf(w);
    Ok(TrendPoint { h, x, y, q1, q2, value, bound, ratio: value / bound })
}

/// `S(𝛂)` divided by
/// `H(XY)^{1+ε}/(q+HXˡY^{k−l}|qα_l−a|)^{1/(2^{l+1}(k−l))} + H(XY)^{1+ε}Z^{−1/2^{l+2}}`
/// with `Z = min((HXˡ)^{1/(2(k−l))}, Y)`, `N = ⌊√(HXˡY^{k−l})⌋` and `(q, a)` the
/// Dirichlet approximation of `α_l` at modulus `N`.
pub fn lemma32_ratio(f: &BinaryForm, h: u64, x: u64, y: u64, r: u64, eps: f64) -> Result<TrendPoint> {
    let (k, l) = (f.k() as i32, f.l() as i32);
    let (hf, xf, yf) = (h as f64, x as f64, y as f64);
    let d = (k - l) as f64;
    let big = hf * xf.powi(l) * yf.powi(k - l);
    let n = big.sqrt().floor().clamp(1.0, 1e18) as u64;
    let approx = dirichlet_approx(&f.alpha(f.l()), n)?;
    let z = (hf * xf.powi(l)).powf(1.0 / (2.0 * d)).min(yf);
    let value = sum_s(f, h, x, y, r)?.value;
    let lead = hf * (xf * yf).powf(1.0 + eps);
    let qf = approx.q as f64;
    let bound = lead / (qf + big * approx.err_f64()).powf(1.0 / (2f64.powi(l + 1) * d)) + lead * z.powf(-1.0 / 2f64.powi(l + 2));
    Ok(TrendPoint { h, x, y, q1: approx.q, q2: approx.q, value, bound, ratio: value / bound })
}
