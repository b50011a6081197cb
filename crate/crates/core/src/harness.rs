//! Experiment runner: sweeps over an `X` grid, one row per `X`, written as
//! line-delimited JSON.
//!
//! Seeded coefficients come from xoshiro256++ (state filled from the 64-bit
//! seed by SplitMix64, as in the reference implementation). Each coefficient
//! takes four consecutive 64-bit outputs `w₀, w₁, w₂, w₃` and is the exact
//! dyadic `(w₀·2¹⁹² + w₁·2¹²⁸ + w₂·2⁶⁴ + w₃)/2²⁵⁶ ∈ [0, 1)`. Coefficients are
//! drawn in the order `α_k, α_l, …, α₀`.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsums::{self, XiParams};
use crate::forms::BinaryForm;
use crate::numerics::{PrecReal, DEFAULT_PRECISION_BITS};
use crate::rational::dirichlet_approx;
use crate::reduction::{self, find_small, Mode, Provenance, ReductionConfig};
use crate::search::{self, min_fracpart, min_fracpart_diagonal, DiagonalForm, SearchBox};

pub const SCHEMA_VERSION: u32 = 1;

/// `σ̂` reported when the minimum is exactly zero.
pub const SIGMA_HAT_CAP: f64 = 100.0;

/// `H` for the `lemma21` kind when the spec gives none.
pub const DEFAULT_LEMMA21_H: u64 = 10;

/// Largest allowed `sum/bound` for the `appendixA` kind.
pub const APPENDIX_RATIO_CAP: f64 = 32.0;

const TREND_NOTE: &str =
    "trend check over a finite X range: the bound is asymptotic with unspecified constants, so a slope is evidence, not a reproduction";

const SEED_ALGORITHM: &str = "xoshiro256++ seeded by SplitMix64; 4 words per coefficient, big-endian, over 2^256";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "theorem-bound")]
    TheoremBound,
    #[serde(rename = "diagonal-bound")]
    DiagonalBound,
    #[serde(rename = "lemma21")]
    Lemma21,
    #[serde(rename = "lemma31-trend")]
    Lemma31Trend,
    #[serde(rename = "appendixA")]
    AppendixA,
    #[serde(rename = "xi-eval")]
    XiEval,
}

impl ExperimentKind {
    fn is_trend(self) -> bool {
        matches!(self, Self::TheoremBound | Self::DiagonalBound | Self::Lemma31Trend)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientSource {
    /// Literals such as `sqrt2`, `pi`, `3/7`, listed `α_k, α_l, …, α₀`
    /// (`α, β` for diagonal forms).
    Named(Vec<String>),
    Seeded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub id: String,
    pub kind: ExperimentKind,
    pub k: u32,
    #[serde(default)]
    pub l: u32,
    pub coefficient_source: CoefficientSource,
    #[serde(rename = "X_grid")]
    pub x_grid: Vec<u64>,
    pub epsilon: f64,
    #[serde(rename = "H_rule", default = "default_h_rule")]
    pub h_rule: String,
    #[serde(default)]
    pub seed: u64,
    /// `theorem-bound`: use [`find_small`] in this mode instead of exhaustive search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// `H` for `lemma21` and `lemma31-trend`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionConfig>,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
}

fn default_h_rule() -> String {
    "H = X^(sigma - epsilon)".into()
}

fn default_bits() -> u32 {
    DEFAULT_PRECISION_BITS
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(format!("spec `{}`: {m}", self.id)));
        if self.x_grid.is_empty() {
            return bad("X_grid is empty".into());
        }
        if self.x_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("X_grid must be strictly increasing".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.k < 2 {
            return bad(format!("need k >= 2, got {}", self.k));
        }
        let needs_form = matches!(
            self.kind,
            ExperimentKind::TheoremBound | ExperimentKind::Lemma31Trend | ExperimentKind::XiEval
        );
        if (needs_form || self.kind == ExperimentKind::AppendixA) && self.l + 2 > self.k {
            return bad(format!("need l <= k - 2, got k = {}, l = {}", self.k, self.l));
        }
        if self.kind == ExperimentKind::Lemma21 && self.h.unwrap_or(DEFAULT_LEMMA21_H) < 2 {
            return bad("lemma21 needs H >= 2".into());
        }
        Ok(())
    }
}

/// One grid point. Searches fill `min_value`; sum checks fill `measured`
/// and `bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    #[serde(rename = "X")]
    pub x: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<(u64, u64)>,
    /// `−log min_value / log X`, capped at [`SIGMA_HAT_CAP`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_hat: Option<f64>,
    #[serde(default)]
    pub sigma_capped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<f64>,
    /// Smallest value of the quantity when a row covers several cases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_low: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub pass_trend: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Row {
    fn new(x: u64) -> Self {
        Self {
            x,
            min_value: None,
            point: None,
            sigma_hat: None,
            sigma_capped: false,
            theorem_sigma: None,
            measured: None,
            measured_low: None,
            bound: None,
            pass_trend: false,
            provenance: None,
            note: None,
        }
    }

    fn with_min(mut self, min: f64, point: (u64, u64)) -> Self {
        self.min_value = Some(min);
        self.point = Some(point);
        if min > 0.0 {
            self.sigma_hat = Some((-min.ln() / (self.x as f64).ln()).min(SIGMA_HAT_CAP));
        } else {
            self.sigma_hat = Some(SIGMA_HAT_CAP);
            self.sigma_capped = true;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub sigma_formula: String,
    pub c: f64,
    pub delta: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub eval_cap: u128,
    pub term_cap: u128,
    pub seed_algorithm: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub artifact_version: String,
    pub spec: ExperimentSpec,
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted_slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_note: Option<String>,
    pub all_pass: bool,
    /// The rows compare against an asymptotic bound: a trend, not a proof.
    pub trend_only: bool,
    pub constants: Constants,
    /// Set when a row failed; rows before it are kept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Filled in by the command-line tool, never by [`run`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// A uniform dyadic in `[0, 1)` with 256 bits.
pub fn seeded_unit(rng: &mut Xoshiro256PlusPlus) -> BigRational {
    let mut n = BigInt::from(0u8);
    for _ in 0..4 {
        n = (n << 64usize) + BigInt::from(rng.next_u64());
    }
    BigRational::new(n, BigInt::one() << 256usize)
}

/// `count` seeded coefficients for `seed`.
pub fn seeded_coefficients(seed: u64, count: usize) -> Vec<PrecReal> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..count).map(|_| PrecReal::from_rational(seeded_unit(&mut rng))).collect()
}

/// `n` seeded points in `[1/H, 1 − 1/H]`, so every `∥xₙ∥ ≥ 1/H`.
pub fn points_away_from_integers(seed: u64, n: usize, h: u64) -> Vec<PrecReal> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let lo = BigRational::new(BigInt::one(), BigInt::from(h.max(2)));
    let width = BigRational::one() - &lo - &lo;
    (0..n).map(|_| PrecReal::from_rational(&lo + &width * seeded_unit(&mut rng))).collect()
}

fn coefficients(spec: &ExperimentSpec, count: usize) -> Result<Vec<PrecReal>> {
    match &spec.coefficient_source {
        CoefficientSource::Seeded => Ok(seeded_coefficients(spec.seed, count)),
        CoefficientSource::Named(names) => {
            if names.len() != count {
                return Err(Error::InvalidParams(format!(
                    "spec `{}` needs {count} named coefficients, got {}",
                    spec.id,
                    names.len()
                )));
            }
            names.iter().map(|s| PrecReal::parse(s, spec.precision_bits)).collect()
        }
    }
}

fn spec_form(spec: &ExperimentSpec) -> Result<BinaryForm> {
    let mut c = coefficients(spec, spec.l as usize + 2)?;
    let top = c.remove(0);
    BinaryForm::new(spec.k, spec.l, top, c)
}

/// Ordinary least-squares slope of `log min` against `log X` over the points
/// with a positive minimum.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|&&(x, m)| m > 0.0 && x > 0.0).map(|&(x, m)| (x.ln(), m.ln())).collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientRows(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientRows(1));
    }
    Ok(sxy / sxx)
}

fn sigma_formula(spec: &ExperimentSpec) -> String {
    match spec.kind {
        ExperimentKind::TheoremBound => match spec.mode.unwrap_or(Mode::T11) {
            Mode::T11 if spec.l == 0 => "2 * 2^(1-k)".into(),
            Mode::T11 => "(l+2)/(l+1) * 2^(1-k)".into(),
            Mode::T13 => "2/(k(k-1) + rho(k,l))".into(),
            Mode::T14 => "2/(k log k + rho(k,l) + C k log log k)".into(),
        },
        ExperimentKind::DiagonalBound => "2^(1-k) per variable, bound (XY)^(-sigma+epsilon)".into(),
        _ => "none".into(),
    }
}

struct Ctx<'a> {
    spec: &'a ExperimentSpec,
    cfg: ReductionConfig,
}

impl Ctx<'_> {
    fn row(&self, x: u64) -> Result<Row> {
        let spec = self.spec;
        let xf = x as f64;
        match spec.kind {
            ExperimentKind::TheoremBound => {
                let f = spec_form(spec)?;
                let sigma = reduction::sigma_for(spec.mode.unwrap_or(Mode::T11), spec.k, spec.l, &self.cfg)?;
                let (result, provenance, note) = match spec.mode {
                    None => (min_fracpart(&f, SearchBox::new(x, x)?)?, "exhaustive".to_string(), None),
                    Some(mode) => {
                        let fs = find_small(&f, x, mode, &self.cfg)?;
                        let p = match fs.provenance {
                            Provenance::Constructive => "constructive",
                            Provenance::ExhaustiveFallback => "exhaustive-fallback",
                        };
                        let flagged = fs.trace.as_ref().map(|t| t.flagged_steps()).unwrap_or_default();
                        let note = fs.fallback_reason.clone().or_else(|| {
                            (!flagged.is_empty()).then(|| format!("steps outside schedule or budget: {flagged:?}"))
                        });
                        (fs.result, p.to_string(), note)
                    }
                };
                let mut row = Row::new(x).with_min(result.min_value, (result.best_x, result.best_y));
                let bound = xf.powf(-sigma + spec.epsilon);
                row.theorem_sigma = Some(sigma);
                row.bound = Some(bound);
                row.pass_trend = result.min_value <= bound;
                row.provenance = Some(provenance);
                row.note = note;
                Ok(row)
            }
            ExperimentKind::DiagonalBound => {
                let c = coefficients(spec, 2)?;
                let d = DiagonalForm::new(c[0].clone(), c[1].clone(), spec.k)?;
                let result = min_fracpart_diagonal(&d, x, x)?;
                let sigma = 0.5f64.powi(spec.k as i32 - 1);
                let bound = (xf * xf).powf(-sigma + spec.epsilon);
                let mut row = Row::new(x).with_min(result.min_value, (result.best_x, result.best_y));
                row.theorem_sigma = Some(sigma);
                row.bound = Some(bound);
                row.pass_trend = result.min_value <= bound;
                row.provenance = Some("exhaustive".into());
                Ok(row)
            }
            ExperimentKind::Lemma21 => {
                let h = spec.h.unwrap_or(DEFAULT_LEMMA21_H);
                let values = points_away_from_integers(spec.seed ^ x, x as usize, h);
                let check = expsums::lemma21_check(&values, h)?;
                let mut row = Row::new(x);
                row.measured = Some(check.lhs);
                row.bound = Some(check.rhs);
                row.pass_trend = check.holds_hypothesis && check.lhs >= check.rhs - 2f64.powi(-30);
                Ok(row)
            }
            ExperimentKind::Lemma31Trend => {
                let f = spec_form(spec)?;
                let tp = expsums::lemma31_ratio(&f, spec.h.unwrap_or(1), x, x, spec.epsilon)?;
                let mut row = Row::new(x);
                row.measured = Some(tp.value);
                row.bound = Some(tp.bound);
                row.pass_trend = tp.ratio <= 1.0;
                row.note = Some(format!("q1 = {}, q2 = {}", tp.q1, tp.q2));
                Ok(row)
            }
            ExperimentKind::AppendixA => {
                let d = spec.k - spec.l;
                let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
                for variant in 1..=3 {
                    for e in -20..=20 {
                        let r = expsums::appendix_sum(variant, 2f64.powi(e), x, d)?.ratio;
                        hi = hi.max(r);
                        lo = lo.min(r);
                    }
                }
                let mut row = Row::new(x);
                row.measured = Some(hi);
                row.measured_low = Some(lo);
                row.bound = Some(APPENDIX_RATIO_CAP);
                row.pass_trend = lo > 0.0 && hi <= APPENDIX_RATIO_CAP;
                Ok(row)
            }
            ExperimentKind::XiEval => {
                let f = spec_form(spec)?;
                let beta = f.alpha(spec.l);
                let d = (spec.k - spec.l) as f64;
                let u: f64 = 2.0;
                let v = (0.45 * xf.powf(1.0 / d) * u.powf(-1.0 / (2.0 * d))).floor().max(1.0);
                let p = XiParams::new(vec![v], u, xf, spec.k, spec.l, beta.clone())?;
                let mut row = Row::new(x);
                row.measured = Some(expsums::sum_xi(&p)?);
                if p.hypotheses_hold() {
                    let big_q = v.powf(d) * u.powf(d) * xf;
                    let n = big_q.sqrt().floor().clamp(1.0, 1e18) as u64;
                    let approx = dirichlet_approx(&beta, n)?;
                    let bound = p.bound(approx.q, &approx.a, spec.epsilon)?;
                    row.bound = Some(bound);
                    row.pass_trend = row.measured.unwrap_or(f64::INFINITY) <= bound;
                    row.note = Some(format!("V = {v}, U = {u}, q = {}", approx.q));
                } else {
                    row.note = Some(format!("V = {v}, U = {u}: size hypotheses fail"));
                }
                Ok(row)
            }
        }
    }
}

/// Runs every grid point of `spec`. A failing row ends the sweep; the rows
/// before it stay in the record next to the failure.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentRecord> {
    spec.validate()?;
    let cfg = spec.reduction.unwrap_or_default();
    let ctx = Ctx { spec, cfg: ReductionConfig { epsilon: spec.epsilon, ..cfg } };
    let mut rows = vec![];
    let mut failure = None;
    for &x in &spec.x_grid {
        match ctx.row(x) {
            Ok(r) => rows.push(r),
            Err(e) => {
                failure = Some(format!("X = {x}: {e}"));
                break;
            }
        }
    }
    let (fitted_slope, fit_note) = match spec.kind {
        ExperimentKind::TheoremBound | ExperimentKind::DiagonalBound => {
            let pts: Vec<(f64, f64)> =
                rows.iter().filter_map(|r| r.min_value.map(|m| (r.x as f64, m))).collect();
            match fit_exponent(&pts) {
                Ok(s) => (Some(s), Some(TREND_NOTE.to_string())),
                Err(e) => (None, Some(format!("{TREND_NOTE}; no fit: {e}"))),
            }
        }
        _ => (None, None),
    };
    Ok(ExperimentRecord {
        schema_version: SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        all_pass: failure.is_none() && rows.iter().all(|r| r.pass_trend),
        rows,
        fitted_slope,
        fit_note,
        trend_only: spec.kind.is_trend(),
        constants: Constants {
            sigma_formula: sigma_formula(spec),
            c: ctx.cfg.c,
            delta: ctx.cfg.delta,
            eta: ctx.cfg.eta,
            epsilon: spec.epsilon,
            eval_cap: crate::budget_cap(search::DEFAULT_EVAL_CAP),
            term_cap: crate::budget_cap(expsums::DEFAULT_TERM_CAP),
            seed_algorithm: SEED_ALGORITHM.into(),
        },
        failure,
        timestamp: None,
    })
}

/// Runs the specs on the worker pool; results come back in submission order.
pub fn run_all(specs: &[ExperimentSpec]) -> Vec<Result<ExperimentRecord>> {
    specs.par_iter().map(run).collect()
}

/// Appends one JSON line per record.
pub fn append_jsonl(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = std::io::BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let file = std::fs::File::open(path)?;
    let mut out = vec![];
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Md,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Md),
            _ => Err(Error::InvalidParams(format!("unknown report format `{s}` (expected csv or md)"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Md => "md",
        })
    }
}

const COLUMNS: [&str; 13] = [
    "id", "kind", "k", "l", "X", "min_value", "sigma_hat", "theorem_sigma", "measured", "bound", "pass_trend",
    "provenance", "fitted_slope",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One line per row, ready for plotting.
pub fn report(records: &[ExperimentRecord], format: ReportFormat) -> String {
    let mut lines = vec![];
    for rec in records {
        let kind = serde_json::to_value(rec.spec.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        for row in &rec.rows {
            lines.push(vec![
                rec.spec.id.clone(),
                kind.clone(),
                rec.spec.k.to_string(),
                rec.spec.l.to_string(),
                row.x.to_string(),
                opt(row.min_value),
                opt(row.sigma_hat),
                opt(row.theorem_sigma),
                opt(row.measured),
                opt(row.bound),
                row.pass_trend.to_string(),
                row.provenance.clone().unwrap_or_default(),
                opt(rec.fitted_slope),
            ]);
        }
    }
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for l in lines {
                out.push_str(&l.iter().map(|s| csv_field(s)).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
        }
        ReportFormat::Md => {
            out.push_str(&format!("| {} |\n", COLUMNS.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(COLUMNS.len())));
            for l in lines {
                out.push_str(&format!("| {} |\n", l.join(" | ").replace('\n', " ")));
            }
        }
    }
    out
}
