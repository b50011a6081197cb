//! Exponents σ in bounds of the shape `min ∥Ψ(x, y)∥ < X^{−σ+ε}`, the
//! quantity `ρ(k, l) = Σ_{j=1}^{l} 2^{j+1}(k−j)`, and the thresholds `l₀`, `l₁`
//! that limit which `l` each bound covers. Logarithms are natural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default constant `C` in `2/(k log k + ρ + Ck log log k)`.
pub const DEFAULT_C: f64 = 1.0;

fn check_kl(k: u32, l: u32) -> Result<()> {
    if l < 1 || l + 2 > k {
        return Err(Error::Domain(format!("need 1 <= l <= k - 2, got k = {k}, l = {l}")));
    }
    Ok(())
}

fn rho_unchecked(k: u32, l: u32) -> BigInt {
    (1..=l).map(|j| (BigInt::one() << (j + 1) as usize) * BigInt::from(k - j)).sum()
}

/// `ρ(k, l) = 2²(k−1) + 2³(k−2) + ⋯ + 2^{l+1}(k−l)`.
pub fn rho(k: u32, l: u32) -> Result<BigInt> {
    check_kl(k, l)?;
    Ok(rho_unchecked(k, l))
}

/// `(l + 2)/(l + 1) · 2^{1−k}`.
pub fn sigma_theorem11(k: u32, l: u32) -> Result<BigRational> {
    check_kl(k, l)?;
    Ok(BigRational::new(BigInt::from(l + 2), BigInt::from(l + 1) << (k - 1) as usize))
}

/// `2/(k(k−1) + ρ(k, l))`, valid for `1 ≤ l ≤ l₀(k)`.
pub fn sigma_theorem13(k: u32, l: u32) -> Result<BigRational> {
    check_kl(k, l)?;
    let (l0, _) = thresholds(k)?;
    if l > l0 {
        return Err(Error::Domain(format!("l = {l} exceeds l0({k}) = {l0}")));
    }
    let kk = BigInt::from(k) * BigInt::from(k - 1);
    Ok(BigRational::new(BigInt::from(2), kk + rho_unchecked(k, l)))
}

/// `2/(k log k + ρ(k, l) + Ck log log k)` without the `l ≤ l₁(k)` restriction.
pub fn sigma_theorem14_formula(k: u32, l: u32, c: f64) -> Result<f64> {
    check_kl(k, l)?;
    if !(c > 0.0) {
        return Err(Error::Domain(format!("C must be positive, got {c}")));
    }
    let kf = k as f64;
    let rho = rho_unchecked(k, l).to_f64().unwrap_or(f64::INFINITY);
    Ok(2.0 / (kf * kf.ln() + rho + c * kf * kf.ln().ln()))
}

/// [`sigma_theorem14_formula`] restricted to `1 ≤ l ≤ l₁(k)`.
pub fn sigma_theorem14(k: u32, l: u32, c: f64) -> Result<f64> {
    check_kl(k, l)?;
    let (_, l1) = thresholds(k)?;
    if l > l1 {
        return Err(Error::Domain(format!("l = {l} exceeds l1({k}) = {l1}")));
    }
    sigma_theorem14_formula(k, l, c)
}

/// `(l₀, l₁)`: the largest `l ≤ k − 2` with `7ρ(k, l) ≤ k(k−1)`, respectively
/// `7ρ(k, l) ≤ k log k`; zero when `l = 1` already fails.
pub fn thresholds(k: u32) -> Result<(u32, u32)> {
    if k < 3 {
        return Err(Error::Domain(format!("need k >= 3, got {k}")));
    }
    let kk = BigInt::from(k) * BigInt::from(k - 1);
    let klogk = k as f64 * (k as f64).ln();
    let (mut l0, mut l1) = (0, 0);
    let mut rho = BigInt::from(0);
    for l in 1..=k - 2 {
        rho += (BigInt::one() << (l + 1) as usize) * BigInt::from(k - l);
        let seven = BigInt::from(7) * &rho;
        if seven > kk {
            break;
        }
        l0 = l;
        if seven.to_f64().is_some_and(|s| s <= klogk) {
            l1 = l;
        }
    }
    Ok((l0, l1))
}

/// `λ(k) = 1 − log log k / log k`.
pub fn default_lambda(k: u32) -> f64 {
    let lk = (k as f64).ln();
    1.0 - lk.ln() / lk
}

/// `σ₀ = σ/(1 − λ − σ)` with `σ = 1/(k log k + Ck log log k)`.
pub fn sigma0_prop62(k: u32, c: f64, lambda: f64) -> Result<f64> {
    if k < 3 || !(lambda > 0.0 && lambda < 1.0) || !(c > 0.0) {
        return Err(Error::Domain(format!("need k >= 3, 0 < lambda < 1, C > 0 (k = {k}, lambda = {lambda}, C = {c})")));
    }
    let kf = k as f64;
    let sigma = 1.0 / (kf * kf.ln() + c * kf * kf.ln().ln());
    let den = 1.0 - lambda - sigma;
    if den <= 0.0 {
        return Err(Error::Domain(format!("1 - lambda - sigma = {den} is not positive")));
    }
    Ok(sigma / den)
}

/// `2^{1−k}`
pub fn sigma_danicic(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << (k.max(1) - 1) as usize)
}

/// `1/(k(k−1))`
pub fn sigma_baker(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(k) * BigInt::from(k.max(1) - 1))
}

fn ser_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_opt_ratio<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn ser_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

/// All exponents for one `(k, l)`. Entries outside their range of validity are `None`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentTable {
    pub k: u32,
    pub l: u32,
    #[serde(serialize_with = "ser_opt_int")]
    pub rho: Option<BigInt>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub sigma_t11: Option<BigRational>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub sigma_t13: Option<BigRational>,
    pub sigma_t14: Option<f64>,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma_baker: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub sigma_danicic: BigRational,
    pub l0: u32,
    pub l1: u32,
    pub c_t14: f64,
    pub lambda: f64,
    pub sigma0: Option<f64>,
    pub notes: Vec<String>,
}

/// Builds the table; `lambda` defaults to [`default_lambda`].
pub fn exponent_table(k: u32, l: u32, c: f64, lambda: Option<f64>) -> Result<ExponentTable> {
    let (l0, l1) = thresholds(k)?;
    let lambda = lambda.unwrap_or_else(|| default_lambda(k));
    let mut notes = vec![];
    let sigma_t13 = sigma_theorem13(k, l).ok();
    if l == 1 {
        notes.push(format!(
            "l = 1: 2/(k(k-1)+rho) = 2/((k+4)(k-1)) = {}; the simplified form 2/((k+2)(k-1)) = {} does not agree with it",
            BigRational::new(BigInt::from(2), BigInt::from(k + 4) * BigInt::from(k - 1)),
            BigRational::new(BigInt::from(2), BigInt::from(k + 2) * BigInt::from(k - 1)),
        ));
    }
    if l > l0 {
        notes.push(format!("sigma_t13 omitted: l = {l} > l0 = {l0}"));
    }
    if l > l1 {
        notes.push(format!("sigma_t14 omitted: l = {l} > l1 = {l1}"));
    }
    notes.push(format!("C = {c} and lambda = {lambda} are configurable defaults, not derived values"));
    Ok(ExponentTable {
        k,
        l,
        rho: rho(k, l).ok(),
        sigma_t11: sigma_theorem11(k, l).ok(),
        sigma_t13,
        sigma_t14: sigma_theorem14(k, l, c).ok(),
        sigma_baker: sigma_baker(k),
        sigma_danicic: sigma_danicic(k),
        l0,
        l1,
        c_t14: c,
        lambda,
        sigma0: sigma0_prop62(k, c, lambda).ok(),
        notes,
    })
}

fn tex_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// A LaTeX `tabular` comparing `(l+2)/(l+1)·2^{1−k}` and `2/(k(k−1)+ρ)` with
/// `2^{1−k}` and `1/(k(k−1))`, one row per `k`.
pub fn latex_table(ks: &[u32], l: u32) -> Result<String> {
    let mut out = String::from(
        "\\begin{tabular}{rrllll}\n$k$ & $l$ & $(l+2)2^{1-k}/(l+1)$ & $2/(k(k-1)+\\rho)$ & $2^{1-k}$ & $1/(k(k-1))$ \\\\\n\\hline\n",
    );
    for &k in ks {
        let t11 = sigma_theorem11(k, l)?;
        let t13 = sigma_theorem13(k, l).map(|v| format!("${}$", tex_ratio(&v))).unwrap_or_else(|_| "--".into());
        out.push_str(&format!(
            "{k} & {l} & ${}$ & {t13} & ${}$ & ${}$ \\\\\n",
            tex_ratio(&t11),
            tex_ratio(&sigma_danicic(k)),
            tex_ratio(&sigma_baker(k)),
        ));
    }
    out.push_str("\\end{tabular}\n");
    Ok(out)
}
