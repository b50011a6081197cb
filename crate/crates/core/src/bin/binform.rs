//! Command-line front end. Every subcommand prints one JSON document
//! (or a table for `report` and `exponents --latex`).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use binform::expsums::{self, XiParams};
use binform::harness::{self, ExperimentRecord, ExperimentSpec, ReportFormat};
use binform::numerics::{PrecReal, DEFAULT_PRECISION_BITS};
use binform::reduction::{self, Mode, ReductionConfig};
use binform::search::{self, SearchBox};
use binform::{exponents, rational, smooth, BinaryForm, Error, Result};

#[derive(Parser)]
#[command(name = "binform", version, about = "Exact search and bounds for binary forms near integers")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Smooth numbers up to Y with prime factors at most R.
    Smooth {
        #[arg(long = "Y")]
        y: u64,
        #[arg(long = "R")]
        r: u64,
        #[arg(long)]
        count_only: bool,
    },
    /// Evaluate an exponential sum.
    Expsum {
        #[command(subcommand)]
        sum: SumCmd,
    },
    /// Run one of the numerical checks.
    Check {
        #[command(subcommand)]
        check: CheckCmd,
    },
    /// Exponents sigma for each k (and l).
    Exponents {
        #[arg(long, num_args = 1.., required = true)]
        k: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long = "C", default_value_t = exponents::DEFAULT_C)]
        c: f64,
        #[arg(long)]
        lambda: Option<f64>,
        /// Emit a LaTeX comparison table instead of JSON.
        #[arg(long)]
        latex: bool,
    },
    /// Exhaustive minimum of the fractional part over a box.
    Search {
        #[arg(long)]
        form: String,
        #[arg(long = "X")]
        x: u64,
        #[arg(long = "Y")]
        y: u64,
        /// Restrict y to R-smooth numbers.
        #[arg(long = "smooth-R")]
        smooth_r: Option<u64>,
        /// Search 1 <= x, y instead of 0 <= x, y.
        #[arg(long)]
        no_axes: bool,
    },
    /// Carry a form down to a diagonal form.
    Reduce(ReduceArgs),
    /// Reduce, search the diagonal form and lift the best point.
    FindSmall(ReduceArgs),
    /// Run experiments from a JSON spec (one object or an array).
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate a results file.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Rational approximation |q alpha - a| <= 1/N with q <= N.
    Dirichlet {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long = "N")]
        n: u64,
        /// Scan every q <= N for the best approximation.
        #[arg(long)]
        exact_best: bool,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        prec: u32,
    },
    /// Continued fraction expansion.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
        prec: u32,
    },
    /// Evaluate a form and its fractional part at one point.
    Eval {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        x: i64,
        #[arg(long, allow_hyphen_values = true)]
        y: i64,
    },
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    form: String,
    #[arg(long = "X")]
    x: u64,
    #[arg(long, default_value = "t11")]
    mode: String,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long = "C")]
    c: Option<f64>,
    /// Allow l beyond the thresholds of the chosen mode.
    #[arg(long)]
    no_enforce: bool,
    /// Cap each Dirichlet window at Y_i/Y_{i+1}.
    #[arg(long)]
    clip_to_schedule: bool,
}

impl ReduceArgs {
    fn config(&self) -> ReductionConfig {
        let d = ReductionConfig::default();
        ReductionConfig {
            delta: self.delta.unwrap_or(d.delta),
            eta: self.eta.unwrap_or(d.eta),
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            c: self.c.unwrap_or(d.c),
            enforce_hypotheses: !self.no_enforce,
            clip_to_schedule: self.clip_to_schedule,
        }
    }
}

#[derive(Subcommand)]
enum SumCmd {
    /// T over 1 <= x <= X, 1 <= y <= Y.
    #[command(name = "T", alias = "t")]
    T(BoxSum),
    /// S with y restricted to R-smooth numbers.
    #[command(name = "S", alias = "s")]
    S {
        #[command(flatten)]
        b: BoxSum,
        #[arg(long = "R")]
        r: u64,
    },
    /// Xi(beta) with V_1..V_r, U and L.
    Xi {
        #[arg(long, num_args = 1.., required = true)]
        v: Vec<f64>,
        #[arg(long = "U")]
        u: f64,
        #[arg(long = "L")]
        len: f64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// |sum_{x <= X} e(h alpha x^k)|.
    Weyl {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        k: u32,
        #[arg(long = "X")]
        x: u64,
        #[arg(long, default_value_t = 1)]
        h: u64,
    },
}

#[derive(Args)]
struct BoxSum {
    #[arg(long)]
    form: String,
    #[arg(long = "H")]
    h: u64,
    #[arg(long = "X")]
    x: u64,
    #[arg(long = "Y")]
    y: u64,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// sum_{h<=H} |sum_n e(h x_n)| >= N/6 for points with ||x_n|| >= 1/H.
    Lemma21 {
        /// Explicit points; seeded points are used when absent.
        #[arg(long, num_args = 1.., allow_hyphen_values = true)]
        values: Vec<String>,
        #[arg(long = "N", default_value_t = 100)]
        n: usize,
        #[arg(long = "H", default_value_t = 10)]
        h: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ratio of the finite sums to their bounds; the full grid when no
    /// single case is given.
    #[command(name = "appendixA")]
    AppendixA {
        #[arg(long)]
        variant: Option<u8>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "N")]
        n: Option<u64>,
        /// k - l
        #[arg(long)]
        d: Option<u32>,
    },
    /// T divided by its bound, with Dirichlet denominators for alpha_k and alpha_l.
    #[command(name = "lemma31-trend")]
    Lemma31Trend {
        #[command(flatten)]
        b: BoxSum,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
}

fn real(s: &str, bits: u32) -> Result<PrecReal> {
    PrecReal::parse(s, bits)
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// As [`timed`], with the per-h magnitudes next to the total.
fn box_sum(params: Value, f: impl FnOnce() -> Result<expsums::ExpSumValue>) -> Result<Value> {
    let start = Instant::now();
    let v = f()?;
    Ok(json!({ "params": params, "value": v.value, "terms": v.terms, "elapsed_ms": start.elapsed().as_millis() as u64 }))
}

fn timed<T: Serialize>(params: Value, f: impl FnOnce() -> Result<T>) -> Result<Value> {
    let start = Instant::now();
    let value = f()?;
    Ok(json!({ "params": params, "value": to_json(&value)?, "elapsed_ms": start.elapsed().as_millis() as u64 }))
}

fn appendix_grid(variants: &[u8], alphas: &[f64], ns: &[u64], ds: &[u32]) -> Result<Value> {
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut cases = 0u64;
    for &v in variants {
        for &a in alphas {
            for &n in ns {
                for &d in ds {
                    let r = expsums::appendix_sum(v, a, n, d)?.ratio;
                    hi = hi.max(r);
                    lo = lo.min(r);
                    cases += 1;
                }
            }
        }
    }
    let cap = harness::APPENDIX_RATIO_CAP;
    Ok(json!({ "check": "appendixA", "cases": cases, "max_ratio": hi, "min_ratio": lo, "cap": cap,
               "holds": lo > 0.0 && hi <= cap }))
}

fn read_specs(path: &PathBuf) -> Result<Vec<ExperimentSpec>> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    Ok(match v {
        Value::Array(_) => serde_json::from_value(v)?,
        _ => vec![serde_json::from_value(v)?],
    })
}

fn unix_now() -> String {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

enum Output {
    Json(Value),
    Text(String),
}

fn execute(cmd: Cmd) -> Result<Output> {
    let out = match cmd {
        Cmd::Smooth { y, r, count_only } => {
            let s = smooth::enumerate_smooth(y, r);
            let mut v = json!({ "Y": y, "R": r, "count": s.len() });
            if !count_only {
                v["members"] = to_json(&s.members)?;
            }
            Output::Json(v)
        }
        Cmd::Expsum { sum } => Output::Json(match sum {
            SumCmd::T(b) => {
                let f = BinaryForm::parse(&b.form)?;
                box_sum(json!({ "kind": "T", "form": b.form, "H": b.h, "X": b.x, "Y": b.y }), || {
                    expsums::sum_t(&f, b.h, b.x, b.y)
                })?
            }
            SumCmd::S { b, r } => {
                let f = BinaryForm::parse(&b.form)?;
                box_sum(json!({ "kind": "S", "form": b.form, "H": b.h, "X": b.x, "Y": b.y, "R": r }), || {
                    expsums::sum_s(&f, b.h, b.x, b.y, r)
                })?
            }
            SumCmd::Xi { v, u, len, k, l, beta } => {
                let p = XiParams::new(v, u, len, k, l, real(&beta, DEFAULT_PRECISION_BITS)?)?;
                timed(to_json(&p)?, || expsums::sum_xi(&p))?
            }
            SumCmd::Weyl { alpha, k, x, h } => {
                let a = real(&alpha, DEFAULT_PRECISION_BITS)?;
                timed(json!({ "kind": "weyl", "alpha": alpha, "k": k, "X": x, "h": h }), || {
                    Ok(expsums::weyl_sum(&a, k, x, h))
                })?
            }
        }),
        Cmd::Check { check } => Output::Json(match check {
            CheckCmd::Lemma21 { values, n, h, seed } => {
                let pts = if values.is_empty() {
                    harness::points_away_from_integers(seed, n, h)
                } else {
                    values.iter().map(|s| real(s, DEFAULT_PRECISION_BITS)).collect::<Result<_>>()?
                };
                let c = expsums::lemma21_check(&pts, h)?;
                let holds = c.holds_hypothesis && c.lhs >= c.rhs - 2f64.powi(-30);
                json!({ "check": "lemma21", "N": pts.len(), "H": h, "result": to_json(&c)?, "holds": holds })
            }
            CheckCmd::AppendixA { variant, alpha, n, d } => {
                let variants = variant.map(|v| vec![v]).unwrap_or_else(|| vec![1, 2, 3]);
                let alphas = alpha.map(|a| vec![a]).unwrap_or_else(|| (-20..=20).map(|e| 2f64.powi(e)).collect());
                let ns = n.map(|n| vec![n]).unwrap_or_else(|| vec![10, 100, 1000, 10_000]);
                let ds = d.map(|d| vec![d]).unwrap_or_else(|| vec![2, 3, 4]);
                appendix_grid(&variants, &alphas, &ns, &ds)?
            }
            CheckCmd::Lemma31Trend { b, eps } => {
                let f = BinaryForm::parse(&b.form)?;
                let tp = expsums::lemma31_ratio(&f, b.h, b.x, b.y, eps)?;
                json!({ "check": "lemma31-trend", "result": to_json(&tp)?, "within_bound": tp.ratio <= 1.0 })
            }
        }),
        Cmd::Exponents { k, l, c, lambda, latex } => {
            if latex {
                Output::Text(exponents::latex_table(&k, l)?)
            } else {
                let tables = k.iter().map(|&k| exponents::exponent_table(k, l, c, lambda)).collect::<Result<Vec<_>>>()?;
                Output::Json(if tables.len() == 1 { to_json(&tables[0])? } else { to_json(&tables)? })
            }
        }
        Cmd::Search { form, x, y, smooth_r, no_axes } => {
            let f = BinaryForm::parse(&form)?;
            let r = match smooth_r {
                Some(r) => search::min_fracpart_smooth_y(&f, x, y, r)?,
                None => search::min_fracpart(&f, SearchBox::with_axes(x, y, !no_axes)?)?,
            };
            Output::Json(to_json(&r)?)
        }
        Cmd::Reduce(a) => {
            let f = BinaryForm::parse(&a.form)?;
            let mode: Mode = a.mode.parse()?;
            let t = reduction::reduce(&f, a.x, mode, &a.config())?;
            let mut v = to_json(&t)?;
            v["replay_matches"] = json!(t.replay_matches());
            v["flagged_steps"] = to_json(&t.flagged_steps())?;
            Output::Json(v)
        }
        Cmd::FindSmall(a) => {
            let f = BinaryForm::parse(&a.form)?;
            let mode: Mode = a.mode.parse()?;
            Output::Json(to_json(&reduction::find_small(&f, a.x, mode, &a.config())?)?)
        }
        Cmd::Run { spec, out } => {
            let specs = read_specs(&spec)?;
            let stamp = unix_now();
            let mut written = vec![];
            let mut errors = vec![];
            for (s, r) in specs.iter().zip(harness::run_all(&specs)) {
                match r {
                    Ok(mut rec) => {
                        rec.timestamp = Some(stamp.clone());
                        written.push(rec);
                    }
                    Err(e) => errors.push(json!({ "id": s.id, "error": e.to_string() })),
                }
            }
            harness::append_jsonl(&out, &written)?;
            let summary: Vec<Value> = written
                .iter()
                .map(|r: &ExperimentRecord| {
                    json!({ "id": r.spec.id, "rows": r.rows.len(), "all_pass": r.all_pass,
                            "fitted_slope": r.fitted_slope, "failure": r.failure })
                })
                .collect();
            Output::Json(json!({ "out": out, "records": summary, "errors": errors }))
        }
        Cmd::Report { input, format } => {
            let fmt: ReportFormat = format.parse()?;
            Output::Text(harness::report(&harness::read_jsonl(&input)?, fmt))
        }
        Cmd::Dirichlet { alpha, n, exact_best, prec } => {
            let a = real(&alpha, prec)?;
            let r = if exact_best { rational::dirichlet_exact_best(&a, n)? } else { rational::dirichlet_approx(&a, n)? };
            Output::Json(to_json(&r)?)
        }
        Cmd::Cf { alpha, terms, prec } => {
            Output::Json(to_json(&rational::continued_fraction(&real(&alpha, prec)?, terms)?)?)
        }
        Cmd::Eval { form, x, y } => {
            let f = BinaryForm::parse(&form)?;
            let v = f.evaluate_at(x, y);
            Output::Json(json!({ "x": x, "y": y, "value": to_json(&v)?, "frac_norm": v.frac_norm() }))
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParams(e.to_string()))
            .and_then(|pool| pool.install(|| execute(cli.cmd))),
        None => execute(cli.cmd),
    };
    match result {
        Ok(out) => {
            let text = match out {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n",
                Output::Text(t) => t,
            };
            // a closed pipe (`| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
