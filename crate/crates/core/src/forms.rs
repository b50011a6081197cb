//! Binary forms `Ψ(x, y) = α_k xᵏ + α_l xˡ y^{k−l} + ⋯ + α₀ yᵏ`, their
//! iterated Weyl differences, and the integer change of variables that removes
//! the `x^{k−1}y` term of an integral form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{PrecReal, DEFAULT_PRECISION_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// `α_k xᵏ + Σ_{j=0}^{l} α_j xʲ y^{k−j}` with `l ≤ k − 2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinaryForm {
    degree_k: u32,
    top_lower_index_l: u32,
    alpha_k: PrecReal,
    /// α_l, α_{l−1}, …, α₀
    lower_coeffs: Vec<PrecReal>,
}

impl BinaryForm {
    /// `lower` lists α_l, α_{l−1}, …, α₀ (so it has `l + 1` entries).
    pub fn new(k: u32, l: u32, alpha_k: PrecReal, lower: Vec<PrecReal>) -> Result<Self> {
        if k < 2 || l + 2 > k {
            return Err(Error::InvalidForm(format!("need 0 <= l <= k - 2, got k = {k}, l = {l}")));
        }
        if lower.len() != l as usize + 1 {
            return Err(Error::InvalidForm(format!(
                "expected {} lower coefficients (alpha_l .. alpha_0), got {}",
                l + 1,
                lower.len()
            )));
        }
        Ok(Self { degree_k: k, top_lower_index_l: l, alpha_k, lower_coeffs: lower })
    }

    /// The two-term form `α xᵏ + β yᵏ`.
    pub fn diagonal(k: u32, alpha: PrecReal, beta: PrecReal) -> Result<Self> {
        Self::new(k, 0, alpha, vec![beta])
    }

    pub fn k(&self) -> u32 {
        self.degree_k
    }

    pub fn l(&self) -> u32 {
        self.top_lower_index_l
    }

    pub fn alpha_k(&self) -> &PrecReal {
        &self.alpha_k
    }

    /// α_l, …, α₀
    pub fn lower_coeffs(&self) -> &[PrecReal] {
        &self.lower_coeffs
    }

    /// Coefficient of `xʲ y^{k−j}`; zero for `l < j < k`.
    pub fn alpha(&self, j: u32) -> PrecReal {
        if j == self.degree_k {
            self.alpha_k.clone()
        } else if j <= self.top_lower_index_l {
            self.lower_coeffs[(self.top_lower_index_l - j) as usize].clone()
        } else {
            PrecReal::zero()
        }
    }

    /// `(j, α_j)` for each stored monomial `xʲ y^{k−j}`, top term first.
    pub fn monomials(&self) -> impl Iterator<Item = (u32, &PrecReal)> {
        let l = self.top_lower_index_l;
        std::iter::once((self.degree_k, &self.alpha_k))
            .chain(self.lower_coeffs.iter().enumerate().map(move |(i, c)| (l - i as u32, c)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.top_lower_index_l == 0
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> PrecReal {
        let k = self.degree_k;
        let mut acc = PrecReal::zero();
        for (j, c) in self.monomials() {
            if c.is_zero() {
                continue;
            }
            let m = num_traits::pow(x.clone(), j as usize) * num_traits::pow(y.clone(), (k - j) as usize);
            acc = &acc + &c.mul_int(&m);
        }
        acc.with_precision(self.alpha_k.precision_bits())
    }

    pub fn evaluate_at(&self, x: i64, y: i64) -> PrecReal {
        self.evaluate(&BigInt::from(x), &BigInt::from(y))
    }

    /// Parses `k=3 l=1 alpha_k=sqrt2 alphas=[pi,e]`. `alphas` lists α_l … α₀;
    /// `prec=<bits>` optionally sets the working precision.
    pub fn parse(s: &str) -> Result<Self> {
        let kv = parse_literal(s)?;
        let bad = |m: &str| Error::InvalidForm(format!("{m} in `{s}`"));
        let get = |key: &str| kv.get(key).ok_or_else(|| bad(&format!("missing `{key}`")));
        let bits = match kv.get("prec") {
            Some(v) => v.parse().map_err(|_| bad("bad `prec`"))?,
            None => DEFAULT_PRECISION_BITS,
        };
        let k: u32 = get("k")?.parse().map_err(|_| bad("bad `k`"))?;
        let l: u32 = get("l")?.parse().map_err(|_| bad("bad `l`"))?;
        let alpha_k = PrecReal::parse(get("alpha_k")?, bits)?;
        let lower = parse_list(get("alphas")?)
            .ok_or_else(|| bad("`alphas` must be a bracketed list"))?
            .iter()
            .map(|t| PrecReal::parse(t, bits))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, l, alpha_k, lower)
    }
}

/// A form with every coefficient written over one common denominator, for
/// loops that evaluate it at many points.
pub(crate) struct ScaledForm {
    k: u32,
    /// (j, numerator of α_j)
    numers: Vec<(u32, BigInt)>,
    pub(crate) denom: BigInt,
}

impl ScaledForm {
    pub(crate) fn new(f: &BinaryForm) -> Self {
        let terms: Vec<(u32, &PrecReal)> = f.monomials().filter(|(_, c)| !c.is_zero()).collect();
        let values: Vec<BigRational> = terms.iter().map(|(_, c)| c.value().clone()).collect();
        let (numers, denom) = crate::walk::common_denominator(&values);
        Self { k: f.k(), numers: terms.iter().map(|(j, _)| *j).zip(numers).collect(), denom }
    }

    /// Numerators of the coefficients of `t ↦ Ψ(t, y)`, lowest degree first.
    pub(crate) fn poly_in_x(&self, y: u64) -> Vec<BigInt> {
        let y = BigInt::from(y);
        let mut c = vec![BigInt::zero(); self.k as usize + 1];
        for (j, n) in &self.numers {
            c[*j as usize] += n * num_traits::pow(y.clone(), (self.k - j) as usize);
        }
        c
    }

    pub(crate) fn numer_at(&self, x: u64, y: u64) -> BigInt {
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        self.numers
            .iter()
            .map(|(j, n)| n * num_traits::pow(x.clone(), *j as usize) * num_traits::pow(y.clone(), (self.k - j) as usize))
            .sum()
    }

    /// `∥Ψ(x, y)∥ · denom`, an integer.
    pub(crate) fn norm_numer(&self, x: u64, y: u64) -> BigInt {
        use num_integer::Integer;
        let r = self.numer_at(x, y).mod_floor(&self.denom);
        let s = &self.denom - &r;
        r.min(s)
    }
}

/// Evaluates `Ψ(x, y)` exactly.
pub fn evaluate(f: &BinaryForm, x: i64, y: i64) -> PrecReal {
    f.evaluate_at(x, y)
}

fn parse_literal(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let eq = rest.find('=').ok_or_else(|| Error::InvalidForm(format!("expected key=value in `{s}`")))?;
        let key = rest[..eq].trim().to_string();
        let after = rest[eq + 1..].trim_start();
        let end = if after.starts_with('[') {
            after.find(']').map(|i| i + 1).ok_or_else(|| Error::InvalidForm(format!("unclosed `[` in `{s}`")))?
        } else {
            after.find(char::is_whitespace).unwrap_or(after.len())
        };
        out.insert(key, after[..end].to_string());
        rest = after[end..].trim_start();
    }
    Ok(out)
}

fn parse_list(v: &str) -> Option<Vec<String>> {
    let inner = v.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(vec![]);
    }
    Some(inner.split(',').map(|t| t.trim().to_string()).collect())
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// An integral binary form `c_k xᵏ + c_{k−1} x^{k−1} y + ⋯ + c₀ yᵏ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerBinaryForm {
    /// c_k, c_{k−1}, …, c₀
    #[serde(serialize_with = "ser_ints")]
    coeffs: Vec<BigInt>,
}

impl IntegerBinaryForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::InvalidForm("empty coefficient list".into())),
            Some(c) if c.is_zero() => Err(Error::DegenerateForm),
            Some(_) => Ok(Self { coeffs }),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses `coeffs=[1,3,0,0]` (c_k first).
    pub fn parse(s: &str) -> Result<Self> {
        let kv = parse_literal(s)?;
        let list = kv
            .get("coeffs")
            .and_then(|v| parse_list(v))
            .ok_or_else(|| Error::InvalidForm(format!("expected coeffs=[..] in `{s}`")))?;
        let coeffs = list
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(|_| Error::InvalidForm(format!("bad integer `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    pub fn k(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// c_k, …, c₀
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// c_i, the coefficient of `xⁱ y^{k−i}`.
    pub fn c(&self, i: u32) -> &BigInt {
        &self.coeffs[(self.k() - i) as usize]
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let k = self.k();
        (0..=k)
            .map(|i| self.c(i) * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), (k - i) as usize))
            .sum()
    }
}

/// `x = x₁ + x_from_y1·y₁`, `y = y_from_y1·y₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Substitution {
    #[serde(serialize_with = "ser_int")]
    pub x_from_y1: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub y_from_y1: BigInt,
}

impl Substitution {
    pub fn map(&self, x1: &BigInt, y1: &BigInt) -> (BigInt, BigInt) {
        (x1 + &self.x_from_y1 * y1, &self.y_from_y1 * y1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChangeOfVariables {
    /// c′_k, …, c′₀ of the form in (x₁, y₁); c′_{k−1} is always zero.
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<BigInt>,
    pub substitution: Substitution,
}

impl ChangeOfVariables {
    pub fn transformed(&self) -> IntegerBinaryForm {
        IntegerBinaryForm { coeffs: self.coeffs.clone() }
    }
}

/// Substitutes `x = x₁ − c_{k−1} y₁`, `y = k c_k y₁`, which annihilates the
/// `x₁^{k−1} y₁` coefficient. Exact over the integers.
pub fn change_of_variables(phi: &IntegerBinaryForm) -> Result<ChangeOfVariables> {
    let k = phi.k();
    let ck = phi.c(k);
    if ck.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let shift = if k >= 1 { -phi.c(k - 1) } else { BigInt::zero() };
    let scale = BigInt::from(k) * ck;
    // c′_m = Σ_{i≥m} c_i C(i, m) shiftⁱ⁻ᵐ scaleᵏ⁻ⁱ
    let mut out = vec![BigInt::zero(); k as usize + 1];
    for i in 0..=k {
        let ci = phi.c(i);
        if ci.is_zero() {
            continue;
        }
        let tail = ci * num_traits::pow(scale.clone(), (k - i) as usize);
        for m in 0..=i {
            let term = &tail * binomial(BigInt::from(i), BigInt::from(m)) * num_traits::pow(shift.clone(), (i - m) as usize);
            out[(k - m) as usize] += term;
        }
    }
    Ok(ChangeOfVariables { coeffs: out, substitution: Substitution { x_from_y1: shift, y_from_y1: scale } })
}

/// The real form `α_k φ(x, y) + α_{k−2} x^{k−2} y² + ⋯ + α₀ yᵏ` written in the
/// coordinates of [`change_of_variables`]; the result has `l = k − 2`.
///
/// `lower` lists α_{k−2}, …, α₀.
pub fn transform_real_form(
    alpha_k: &PrecReal,
    phi: &IntegerBinaryForm,
    lower: &[PrecReal],
) -> Result<(BinaryForm, Substitution)> {
    let k = phi.k();
    if k < 2 {
        return Err(Error::InvalidForm("degree must be at least 2".into()));
    }
    if lower.len() != (k - 1) as usize {
        return Err(Error::InvalidForm(format!("expected {} lower coefficients, got {}", k - 1, lower.len())));
    }
    let cov = change_of_variables(phi)?;
    let sub = cov.substitution.clone();
    let alpha_j = |j: u32| &lower[(k - 2 - j) as usize];
    let coeff = |m: u32| -> PrecReal {
        let mut acc = alpha_k.mul_int(&cov.coeffs[(k - m) as usize]);
        for j in m..=k - 2 {
            let mult = binomial(BigInt::from(j), BigInt::from(m))
                * num_traits::pow(sub.x_from_y1.clone(), (j - m) as usize)
                * num_traits::pow(sub.y_from_y1.clone(), (k - j) as usize);
            acc = &acc + &alpha_j(j).mul_int(&mult);
        }
        acc
    };
    let top = coeff(k);
    let rest = (0..=k - 2).rev().map(coeff).collect();
    Ok((BinaryForm::new(k, k - 2, top, rest)?, sub))
}

/// `(⌊X/2⌋, ⌊X / (k(1+|c_k|)(1+|c_{k−1}|))⌋)`: a box in (x₁, y₁) whose image
/// under the substitution lies in `|x|, |y| ≤ X`.
pub fn transformed_box(phi: &IntegerBinaryForm, x_max: u64) -> (u64, u64) {
    let k = phi.k();
    let ck = phi.c(k).abs();
    let ck1 = if k >= 1 { phi.c(k - 1).abs() } else { BigInt::zero() };
    let denom = BigInt::from(k) * (BigInt::one() + ck) * (BigInt::one() + ck1);
    let y1: BigInt = BigInt::from(x_max) / denom;
    (x_max / 2, u64::try_from(y1).unwrap_or(0))
}

/// A fully expanded iterated difference of a binary form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DifferencedForm {
    pub base: BinaryForm,
    pub axis: Axis,
    pub shifts: Vec<i64>,
    /// (x exponent, y exponent) → coefficient; zero terms are dropped.
    #[serde(serialize_with = "serialize_terms")]
    terms: BTreeMap<(u32, u32), PrecReal>,
}

fn serialize_terms<S: serde::Serializer>(
    t: &BTreeMap<(u32, u32), PrecReal>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Term<'a> {
        x_exp: u32,
        y_exp: u32,
        coeff: &'a PrecReal,
    }
    s.collect_seq(t.iter().map(|(&(x_exp, y_exp), coeff)| Term { x_exp, y_exp, coeff }))
}

impl DifferencedForm {
    pub fn terms(&self) -> &BTreeMap<(u32, u32), PrecReal> {
        &self.terms
    }

    pub fn coefficient(&self, x_exp: u32, y_exp: u32) -> PrecReal {
        self.terms.get(&(x_exp, y_exp)).cloned().unwrap_or_else(PrecReal::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest exponent of the given variable, `None` for the zero polynomial.
    pub fn degree_in(&self, axis: Axis) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| if axis == Axis::X { a } else { b }).max()
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> PrecReal {
        let mut acc = PrecReal::zero();
        for (&(a, b), c) in &self.terms {
            let m = num_traits::pow(x.clone(), a as usize) * num_traits::pow(y.clone(), b as usize);
            acc = &acc + &c.mul_int(&m);
        }
        acc
    }
}

fn difference_once(
    terms: &BTreeMap<(u32, u32), PrecReal>,
    axis: Axis,
    h: i64,
) -> BTreeMap<(u32, u32), PrecReal> {
    let h = BigInt::from(h);
    let mut out: BTreeMap<(u32, u32), PrecReal> = BTreeMap::new();
    for (&(a, b), c) in terms {
        let deg = if axis == Axis::X { a } else { b };
        // (t+h)^deg − t^deg = Σ_{i<deg} C(deg, i) h^{deg−i} tⁱ
        for i in 0..deg {
            let mult = binomial(BigInt::from(deg), BigInt::from(i)) * num_traits::pow(h.clone(), (deg - i) as usize);
            let key = if axis == Axis::X { (i, b) } else { (a, i) };
            let add = c.mul_int(&mult);
            let slot = out.entry(key).or_insert_with(PrecReal::zero);
            *slot = &*slot + &add;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Δⱼ(f; h₁, …, hⱼ)` along `axis`, expanded into monomials.
pub fn weyl_difference(f: &BinaryForm, axis: Axis, shifts: &[i64]) -> Result<DifferencedForm> {
    if shifts.is_empty() {
        return Err(Error::InvalidParams("at least one shift is required".into()));
    }
    let k = f.k();
    let mut terms: BTreeMap<(u32, u32), PrecReal> =
        f.monomials().filter(|(_, c)| !c.is_zero()).map(|(j, c)| ((j, k - j), c.clone())).collect();
    for &h in shifts {
        terms = difference_once(&terms, axis, h);
    }
    Ok(DifferencedForm { base: f.clone(), axis, shifts: shifts.to_vec(), terms })
}
