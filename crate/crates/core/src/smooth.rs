//! Smooth numbers `𝒜(Y, R) = {1 ≤ n ≤ Y : p | n ⇒ p ≤ R}` and the
//! factorization bound that splits a sum over `𝒜(Y, R)` into products
//! `v₁⋯v_r·u` with each `vᵢ ∈ (Mᵢ, MᵢR]`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of `(v₁, …, v_r, u)` cells [`decompose`] visits.
pub const DEFAULT_CELL_CAP: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothSet {
    pub bound_y: u64,
    pub smoothness_r: u64,
    pub members: Vec<u64>,
}

impl SmoothSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = vec![];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    out
}

fn extend(primes: &[u64], start: usize, n: u64, y: u64, out: &mut Vec<u64>) {
    out.push(n);
    for (i, &p) in primes.iter().enumerate().skip(start) {
        match n.checked_mul(p) {
            Some(m) if m <= y => extend(primes, i, m, y, out),
            // primes are increasing, so every later product is larger still
            _ => break,
        }
    }
}

/// `𝒜(Y, R)`, built as products of primes `≤ min(R, Y)`.
pub fn enumerate_smooth(y: u64, r: u64) -> SmoothSet {
    let mut members = vec![];
    if y >= 1 {
        let primes = primes_up_to(r.min(y));
        extend(&primes, 0, 1, y, &mut members);
        members.sort_unstable();
    }
    SmoothSet { bound_y: y, smoothness_r: r, members }
}

/// `M₁, …, M_r` and `R` for [`decompose`], with the `η`, `Z` they came from
/// when built by [`DecompositionParams::schedule`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionParams {
    pub m: Vec<f64>,
    pub r_smooth: u64,
    pub eta: Option<f64>,
    pub z: Option<f64>,
}

impl DecompositionParams {
    pub fn new(m: Vec<f64>, r_smooth: u64) -> Self {
        Self { m, r_smooth, eta: None, z: None }
    }

    /// The schedule `r = 1/η`, `a = ⌊(1/η)(1 − log Z/log Y)⌋`,
    /// `Mᵢ = Y^η` for `i > r − a`, `M_{r−a} = Y/(Z·Y^{aη})`, `Mᵢ = 1` below,
    /// with `R = ⌊Y^η⌋`. Needs `1/η` to be an integer and `1 < Z < Y`.
    pub fn schedule(y: u64, z: f64, eta: f64) -> Result<Self> {
        let inv = 1.0 / eta;
        let r = inv.round();
        if !(eta > 0.0 && eta < 1.0) || (inv - r).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!("1/eta must be an integer, got eta = {eta}")));
        }
        let yf = y as f64;
        if !(z > 1.0 && z < yf) {
            return Err(Error::InvalidParams(format!("need 1 < Z < Y, got Z = {z}, Y = {y}")));
        }
        let r = r as usize;
        let a = (inv * (1.0 - z.ln() / yf.ln())).floor() as usize;
        let y_eta = yf.powf(eta);
        let m = (1..=r)
            .map(|i| {
                if i + a > r {
                    y_eta
                } else if i + a == r {
                    yf / (z * yf.powf(a as f64 * eta))
                } else {
                    1.0
                }
            })
            .collect();
        let params = Self { m, r_smooth: y_eta.floor() as u64, eta: Some(eta), z: Some(z) };
        params.validate(y)?;
        Ok(params)
    }

    pub fn r(&self) -> usize {
        self.m.len()
    }

    /// `1 ≤ Mᵢ < Y`, `M₁⋯M_r < Y`, `1 ≤ R < Y`.
    pub fn validate(&self, y: u64) -> Result<()> {
        let yf = y as f64;
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.m.is_empty() {
            return bad("need at least one M_i".into());
        }
        if let Some(mi) = self.m.iter().find(|&&mi| !(1.0..yf).contains(&mi)) {
            return bad(format!("need 1 <= M_i < Y, got {mi}"));
        }
        let prod: f64 = self.m.iter().product();
        if prod >= yf {
            return bad(format!("need M_1...M_r < Y, got {prod}"));
        }
        if self.r_smooth < 1 || self.r_smooth >= y {
            return bad(format!("need 1 <= R < Y, got R = {}", self.r_smooth));
        }
        Ok(())
    }

    /// `(Mᵢ, MᵢR]` as an integer range.
    fn v_range(&self, i: usize) -> std::ops::RangeInclusive<u64> {
        let mi = self.m[i];
        (mi.floor() as u64 + 1)..=((mi * self.r_smooth as f64).floor() as u64)
    }

    fn u_set(&self, y: u64) -> SmoothSet {
        let prod: f64 = self.m.iter().product();
        enumerate_smooth((y as f64 / prod).floor() as u64, self.r_smooth)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub f_value: f64,
    pub g_value: f64,
    pub cells: u128,
}

fn tuple_products(params: &DecompositionParams, from: usize, acc: u64, out: &mut Vec<u64>) -> Result<()> {
    if from == params.r() {
        out.push(acc);
        return Ok(());
    }
    for v in params.v_range(from) {
        let next = acc.checked_mul(v).ok_or_else(|| Error::InvalidParams("v-product overflows u64".into()))?;
        tuple_products(params, from + 1, next, out)?;
    }
    Ok(())
}

/// `F = Σ_{v₁,…,v_r} Σ_{u ∈ 𝒜(Y/(M₁⋯M_r), R)} |f(v₁⋯v_r·u)|` and
/// `G = Σ_j M₁⋯M_j R^{j−1} sup_{1≤y≤M_j} |f(y)|`, by direct enumeration.
pub fn decompose(f: &(dyn Fn(u64) -> f64 + Sync), y: u64, params: &DecompositionParams) -> Result<Decomposition> {
    params.validate(y)?;
    let u = params.u_set(y);
    let grid: u128 = (0..params.r()).map(|i| params.v_range(i).count() as u128).product();
    let cells = grid * u.len() as u128;
    crate::check_budget(cells, DEFAULT_CELL_CAP)?;

    let first: Vec<u64> = params.v_range(0).collect();
    let per_v1 = first
        .par_iter()
        .map(|&v1| -> Result<f64> {
            let mut prods = vec![];
            tuple_products(params, 1, v1, &mut prods)?;
            let mut s = 0.0;
            for p in prods {
                for &n in &u.members {
                    let arg = p.checked_mul(n).ok_or_else(|| Error::InvalidParams("v·u overflows u64".into()))?;
                    s += f(arg).abs();
                }
            }
            Ok(s)
        })
        .collect::<Result<Vec<f64>>>()?;
    let f_value = per_v1.iter().sum();

    let rf = params.r_smooth as f64;
    let mut g_value = 0.0;
    let mut prefix = 1.0;
    for (j, &mj) in params.m.iter().enumerate() {
        prefix *= mj;
        let sup = (1..=mj.floor() as u64).map(|t| f(t).abs()).fold(0.0, f64::max);
        g_value += prefix * rf.powi(j as i32) * sup;
    }
    Ok(Decomposition { f_value, g_value, cells })
}
