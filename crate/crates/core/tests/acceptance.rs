//! Acceptance run: every criterion prints one PASS/FAIL line. The first pass
//! runs on one worker and is timed; the whole set is then repeated on 4 and 8
//! workers and the JSON records must match byte for byte.

mod common;

use std::time::{Duration, Instant};

use binform::exponents::{rho, sigma_theorem11, sigma_theorem13, thresholds};
use binform::expsums::{appendix_sum, lemma21_check, sum_s, sum_t, sum_xi, XiParams};
use binform::forms::weyl_difference;
use binform::harness::{self, CoefficientSource, ExperimentKind, ExperimentSpec};
use binform::rational::{dirichlet_approx, dirichlet_exact_best};
use binform::reduction::{find_small, lift, Mode, Provenance, ReductionConfig, ReductionTrace};
use binform::search::{min_fracpart, SearchBox};
use binform::smooth::enumerate_smooth;
use binform::{Axis, BinaryForm, PrecReal};
use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

struct Check {
    pass: bool,
    detail: String,
    record: Value,
}

impl Check {
    fn new(failures: &[String], detail: String, record: Value) -> Self {
        let detail = match failures.first() {
            None => detail,
            Some(f) => format!("{detail}; {} failure(s), first: {f}", failures.len()),
        };
        Self { pass: failures.is_empty(), detail, record }
    }
}

fn far_from_integers() -> Check {
    let mut g = Gen::new(0x11);
    let mut fails = vec![];
    let mut rows = vec![];
    for set in 0..500 {
        let n = g.range(1, 1000) as usize;
        let h = g.range(2, 100);
        // a/M with M = H·2^32 and 2^32 ≤ a ≤ (H−1)·2^32, so every ∥a/M∥ ≥ 1/H
        let m = h << 32;
        let nums: Vec<u64> = (0..n).map(|_| g.range(1 << 32, (h - 1) << 32)).collect();
        let values: Vec<PrecReal> = nums.iter().map(|&a| PrecReal::from_ratio(a, m).unwrap()).collect();
        let got = lemma21_check(&values, h).unwrap();
        let oracle: f64 = (1..=h)
            .map(|hh| {
                let mut acc = Acc::default();
                for &a in &nums {
                    acc.push(((hh * a) % m) as f64 / m as f64);
                }
                acc.abs()
            })
            .sum();
        let floor = n as f64 / 6.0 - 2f64.powi(-30);
        if !got.holds_hypothesis {
            fails.push(format!("set {set}: hypothesis reported false"));
        }
        if got.rhs != n as f64 / 6.0 || got.lhs < floor || oracle < floor {
            fails.push(format!("set {set}: lhs {} oracle {oracle} below N/6 = {}", got.lhs, got.rhs));
        }
        if !close(got.lhs, oracle, 1e-9) {
            fails.push(format!("set {set}: lhs {} differs from oracle {oracle}", got.lhs));
        }
        rows.push(json!([n, h, got.lhs]));
    }
    Check::new(&fails, "500 point sets, N <= 1000, H <= 100".into(), json!(rows))
}

fn dirichlet() -> Check {
    let mut g = Gen::new(0x22);
    let mut fails = vec![];
    let mut rows = vec![];
    for i in 0..200 {
        let alpha = match i % 4 {
            // small denominators exercise the exact-hit branch
            0 => BigRational::new(BigInt::from(g.range(0, 5000)) - 2500, BigInt::from(g.range(1, 2000))),
            1 => -g.unit(256) - BigRational::from_integer(g.range(0, 50).into()),
            _ => g.unit(256) + BigRational::from_integer(g.range(0, 50).into()),
        };
        let n = g.range(1, 1000);
        let a_real = PrecReal::from_rational(alpha.clone());
        let got = dirichlet_approx(&a_real, n).unwrap();
        let err = (BigRational::from_integer(got.q.into()) * &alpha - BigRational::from_integer(got.a.clone())).abs();
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        if got.q < 1 || got.q > n || !got.a.gcd(&BigInt::from(got.q)).is_one() || err > inv_n {
            fails.push(format!("alpha #{i}, N = {n}: q = {}, a = {}, err = {err}", got.q, got.a));
        }
        if got.err.value() != &err {
            fails.push(format!("alpha #{i}: reported error differs from |q alpha - a|"));
        }
        let best = (1..=n)
            .map(|q| (dist_to_int(&(BigRational::from_integer(q.into()) * &alpha)), q))
            .min()
            .unwrap();
        if best.0 > inv_n {
            fails.push(format!("alpha #{i}: brute force finds no pair within 1/N"));
        }
        let exact = dirichlet_exact_best(&a_real, n).unwrap();
        if exact.err.value() != &best.0 {
            fails.push(format!("alpha #{i}: exact best {} vs brute force {}", exact.err.value(), best.0));
        }
        rows.push(json!([n, got.q, got.a.to_string()]));
    }
    Check::new(&fails, "200 values, N <= 1000, brute-force oracle".into(), json!(rows))
}

/// `Σ_S (−1)^{j−|S|} D·f(x + Σ_S h, y)` (or shifted in y).
fn telescoped(f: &IntForm, axis: Axis, shifts: &[i64], x: i64, y: i64) -> BigInt {
    let j = shifts.len();
    let mut total = BigInt::zero();
    for mask in 0u32..(1 << j) {
        let s: i64 = (0..j).filter(|b| mask >> b & 1 == 1).map(|b| shifts[b]).sum();
        let (px, py) = if axis == Axis::X { (x + s, y) } else { (x, y + s) };
        let v = f.eval(&px.into(), &py.into());
        if (j as u32 - mask.count_ones()) % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    total
}

fn random_form(g: &mut Gen, k: u32, l: u32) -> BinaryForm {
    let mut c: Vec<PrecReal> = (0..l + 2).map(|_| PrecReal::from_rational(g.unit(256) * BigInt::from(g.range(1, 9)))).collect();
    let top = c.remove(0);
    BinaryForm::new(k, l, top, c).unwrap()
}

fn differencing() -> Check {
    let mut g = Gen::new(0x33);
    let mut fails = vec![];
    let mut rows = vec![];
    for i in 0..100 {
        let k = g.range(2, 8) as u32;
        let l = g.range(0, k as u64 - 2) as u32;
        let f = random_form(&mut g, k, l);
        let axis = if g.range(0, 1) == 0 { Axis::X } else { Axis::Y };
        let j = g.range(1, k as u64 - 1) as usize;
        let shifts: Vec<i64> = (0..j).map(|_| g.signed(10)).collect();
        let d = weyl_difference(&f, axis, &shifts).unwrap();
        let oracle = IntForm::of(&f);
        for _ in 0..100 {
            let (x, y) = (g.signed(50), g.signed(50));
            let want = BigRational::new(telescoped(&oracle, axis, &shifts, x, y), oracle.den.clone());
            let got = d.evaluate(&x.into(), &y.into());
            if got.value() != &want {
                fails.push(format!("form {i} ({axis:?}, {shifts:?}) at ({x}, {y})"));
                break;
            }
        }
        // the monomial α_l xˡ y^{k−l}, differenced l times in x, is constant in x
        if l >= 1 {
            let mut lower = vec![PrecReal::zero(); l as usize + 1];
            lower[0] = f.alpha(l);
            let mono = BinaryForm::new(k, l, PrecReal::zero(), lower).unwrap();
            let hs: Vec<i64> = (0..l).map(|_| g.range(1, 10) as i64 * if g.range(0, 1) == 0 { 1 } else { -1 }).collect();
            let dm = weyl_difference(&mono, Axis::X, &hs).unwrap();
            let fact: i64 = (1..=l as i64).product::<i64>() * hs.iter().product::<i64>();
            let expect = f.alpha(l).value() * BigInt::from(fact);
            if dm.degree_in(Axis::X) != Some(0) || dm.coefficient(0, k - l).value() != &expect || dm.terms().len() != 1 {
                fails.push(format!("form {i}: l-fold x-difference of the x^{l} term is not l!·Πh·α_l·y^(k-l)"));
            }
        }
        rows.push(json!([k, l, shifts, d.terms().len()]));
    }
    Check::new(&fails, "100 forms, k <= 8, 100 points each, exact".into(), json!(rows))
}

fn smooth_sets() -> Check {
    let top = 10_000u64;
    let lpf: Vec<u64> = (0..=top).map(|n| if n == 0 { 0 } else { largest_prime_factor(n) }).collect();
    let mut fails = vec![];
    let mut sizes = vec![];
    for r in 1..=50u64 {
        let oracle: Vec<u64> = (1..=top).filter(|&n| lpf[n as usize] <= r).collect();
        for y in 1..=top {
            let got = enumerate_smooth(y, r);
            let cut = oracle.partition_point(|&n| n <= y);
            if got.members != oracle[..cut] {
                fails.push(format!("Y = {y}, R = {r}"));
                break;
            }
        }
        sizes.push(oracle.len());
    }
    let small = enumerate_smooth(20, 3).len();
    if small != 10 {
        fails.push(format!("|A(20, 3)| = {small}, expected 10"));
    }
    Check::new(&fails, "all Y <= 10^4, R <= 50".into(), json!({ "sizes_at_top": sizes, "a_20_3": small }))
}

fn direct_t(f: &BinaryForm, h: u64, x: u64, ys: &[u64]) -> f64 {
    let o = IntForm::of(f);
    let mut acc = vec![Acc::default(); h as usize];
    for xx in 1..=x {
        for &y in ys {
            let v = o.eval(&xx.into(), &y.into());
            for (hh, a) in acc.iter_mut().enumerate() {
                a.push(turns(&(&v * BigInt::from(hh + 1)), &o.den));
            }
        }
    }
    acc.iter().map(Acc::abs).sum()
}

fn direct_xi(p: &XiParams) -> f64 {
    let d = (p.k - p.l) as usize;
    let beta = p.beta.value();
    let us: Vec<u64> = ((p.u / 2.0).floor() as u64 + 1..=p.u.floor() as u64).collect();
    let mut prods = vec![1u64];
    for &vi in &p.v {
        prods = prods.iter().flat_map(|&q| (1..=vi.floor() as u64).map(move |t| q * t)).collect();
    }
    let len = p.l_len.floor() as u64;
    let mut total = 0.0;
    for &v in &prods {
        for &u1 in &us {
            for &u2 in &us {
                let m = num_traits::pow(BigInt::from(v), d)
                    * (num_traits::pow(BigInt::from(u1), d) - num_traits::pow(BigInt::from(u2), d));
                let theta = (beta.numer() * m).mod_floor(beta.denom());
                let mut acc = Acc::default();
                for x in 1..=len {
                    acc.push(turns(&(&theta * BigInt::from(x)), beta.denom()));
                }
                total += acc.abs();
            }
        }
    }
    total
}

fn exponential_sums() -> Check {
    let tol = 2f64.powi(-35);
    let mut g = Gen::new(0x55);
    let mut fails = vec![];
    let mut rows = vec![];
    let lpf: Vec<u64> = (0..=400).map(|n| if n == 0 { 0 } else { largest_prime_factor(n) }).collect();
    for i in 0..20 {
        let k = g.range(2, 5) as u32;
        let l = g.range(0, k as u64 - 2) as u32;
        let f = random_form(&mut g, k, l);
        let (h, x, y) = (g.range(1, 4), g.range(1, 40), g.range(1, 40));
        let got = sum_t(&f, h, x, y).unwrap().value;
        let want = direct_t(&f, h, x, &(1..=y).collect::<Vec<_>>());
        if !close(got, want, tol) {
            fails.push(format!("T set {i}: {got} vs {want}"));
        }

        let (xs, ys, r) = (g.range(1, 20), g.range(1, 400), g.range(2, 20));
        let smooth: Vec<u64> = (1..=ys).filter(|&n| lpf[n as usize] <= r).collect();
        let got_s = sum_s(&f, h, xs, ys, r).unwrap().value;
        let want_s = direct_t(&f, h, xs, &smooth);
        if !close(got_s, want_s, tol) {
            fails.push(format!("S set {i}: {got_s} vs {want_s}"));
        }

        let d = g.range(2, 4) as u32;
        let lx = g.range(0, 2) as u32;
        let nv = g.range(1, 2) as usize;
        let v: Vec<f64> = (0..nv).map(|_| g.range(1, 4) as f64 + 0.5 * g.range(0, 1) as f64).collect();
        let u = g.range(2, 10) as f64;
        let len = g.range(1, 300) as f64;
        let beta = PrecReal::from_rational(g.unit(256));
        let p = XiParams::new(v, u, len, d + lx, lx, beta).unwrap();
        let got_x = sum_xi(&p).unwrap();
        let want_x = direct_xi(&p);
        if !close(got_x, want_x, tol) {
            fails.push(format!("Xi set {i}: {got_x} vs {want_x}"));
        }
        rows.push(json!([got, got_s, got_x]));
    }
    Check::new(&fails, "20 sets each for T, S and Xi, relative 2^-35".into(), json!(rows))
}

fn rho_oracle(k: u32, l: u32) -> BigInt {
    (1..=l).map(|j| BigInt::from(2u32).pow(j + 1) * BigInt::from(k - j)).sum()
}

fn exponents_exact() -> Check {
    let mut fails = vec![];
    if rho(10, 2).unwrap() != BigInt::from(100) {
        fails.push("rho(10, 2) != 100".into());
    }
    if sigma_theorem11(3, 1).unwrap() != BigRational::new(3.into(), 8.into()) {
        fails.push("sigma_theorem11(3, 1) != 3/8".into());
    }
    let mut pairs11 = 0u64;
    let mut pairs13 = 0u64;
    for k in 3..=1000u32 {
        let base = BigRational::new(BigInt::one(), BigInt::one() << (k - 1) as usize);
        for l in 1..=k - 2 {
            let s = sigma_theorem11(k, l).unwrap();
            let want = BigRational::new(BigInt::from(l + 2), BigInt::from(l + 1) << (k - 1) as usize);
            if s != want || s <= base {
                fails.push(format!("sigma_theorem11({k}, {l})"));
            }
            pairs11 += 1;
        }
        let kk = BigInt::from(k) * BigInt::from(k - 1);
        // l₀ oracle: the largest l with 7ρ ≤ k(k−1)
        let l0 = (1..=k - 2).take_while(|&l| BigInt::from(7) * rho_oracle(k, l) <= kk).last().unwrap_or(0);
        let (got_l0, got_l1) = thresholds(k).unwrap();
        if got_l0 != l0 || got_l1 > got_l0 {
            fails.push(format!("thresholds({k}) = ({got_l0}, {got_l1}), oracle l0 = {l0}"));
        }
        let floor = BigRational::new(BigInt::one(), kk.clone());
        for l in 1..=k - 2 {
            match sigma_theorem13(k, l) {
                Ok(s) if l <= l0 => {
                    if s != BigRational::new(BigInt::from(2), &kk + rho_oracle(k, l)) || s <= floor {
                        fails.push(format!("sigma_theorem13({k}, {l})"));
                    }
                    pairs13 += 1;
                }
                Err(_) if l > l0 => break,
                other => fails.push(format!("sigma_theorem13({k}, {l}) domain: {other:?}")),
            }
        }
    }
    let t30 = thresholds(30).unwrap();
    if t30.0 != 1 || t30.1 > 1 {
        fails.push(format!("thresholds(30) = {t30:?}"));
    }
    Check::new(
        &fails,
        format!("{pairs11} (k, l) pairs for the first bound, {pairs13} for the second"),
        json!({ "pairs11": pairs11, "pairs13": pairs13, "thresholds30": t30 }),
    )
}

fn appendix_grid() -> Check {
    let mut fails = vec![];
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    for variant in 1..=3u8 {
        for e in -20..=20 {
            let alpha = 2f64.powi(e);
            for n in [10u64, 100, 1000, 10_000] {
                for d in 2..=4u32 {
                    let got = appendix_sum(variant, alpha, n, d).unwrap();
                    let df = d as f64;
                    let want: f64 = (1..=n)
                        .rev()
                        .map(|t| {
                            let t = t as f64;
                            match variant {
                                1 => 1.0 / (1.0 + alpha * t.powi(d as i32)),
                                2 => (1.0 + alpha * t.powi(d as i32)).powf(-1.0 / df),
                                _ => (1.0 + alpha * t).powf(-2.0 / df),
                            }
                        })
                        .sum();
                    if !close(got.sum, want, 1e-9) {
                        fails.push(format!("variant {variant}, alpha 2^{e}, N {n}, d {d}: sum {} vs {want}", got.sum));
                    }
                    if !(got.ratio > 0.0 && got.ratio <= 32.0) {
                        fails.push(format!("variant {variant}, alpha 2^{e}, N {n}, d {d}: ratio {}", got.ratio));
                    }
                    lo = lo.min(got.ratio);
                    hi = hi.max(got.ratio);
                }
            }
        }
    }
    Check::new(&fails, format!("ratios in [{lo:.3e}, {hi:.4}]"), json!({ "min_ratio": lo, "max_ratio": hi }))
}

/// Lower coefficients `c[j] = α_j`, `j ≤ l`, after each substitution `y = qᵢ y₁`.
fn replay_oracle(f: &BinaryForm, trace: &ReductionTrace, fails: &mut Vec<String>, tag: &str) -> BigRational {
    let (k, l) = (f.k(), f.l());
    let mut c: Vec<BigRational> = (0..=l).map(|j| f.alpha(j).value().clone()).collect();
    for (i, s) in trace.steps.iter().enumerate() {
        let pivot = c.pop().unwrap();
        if s.pivot.value() != &pivot {
            fails.push(format!("{tag}: step {i} pivot differs from replay"));
        }
        let err = (&pivot * BigInt::from(s.q) - BigRational::from_integer(s.a.clone())).abs();
        if s.approx_error.value() != &err {
            fails.push(format!("{tag}: step {i} approximation error is not |q pivot - a|"));
        }
        for (j, cj) in c.iter_mut().enumerate() {
            *cj = &*cj * BigInt::from(s.q).pow(k - j as u32);
        }
        let listed: Vec<&BigRational> = s.coeffs_after.iter().map(PrecReal::value).collect();
        if listed != c.iter().rev().collect::<Vec<_>>() {
            fails.push(format!("{tag}: step {i} coefficients differ from replay"));
        }
    }
    if c.len() != 1 {
        fails.push(format!("{tag}: {} steps for l = {l}", trace.steps.len()));
    }
    c[0].clone()
}

/// Checks one lift exactly: `Ψ(x, Q y₀) = α_k xᵏ + β y₀ᵏ + Σ pivotᵢ x^{l−i} zᵢ^{k−l+i}`
/// with `zᵢ = q_i⋯q_{l−1} y₀`, then the certificate's inequalities.
fn check_lift(f: &BinaryForm, trace: &ReductionTrace, beta: &BigRational, x: u64, y0: u64, fails: &mut Vec<String>, tag: &str) {
    let lifted = match lift(trace, x, y0) {
        Ok(l) => l,
        Err(e) => return fails.push(format!("{tag}: lift({x}, {y0}) failed: {e}")),
    };
    let (k, l) = (f.k(), f.l());
    let xb = BigInt::from(x);
    let mut z = vec![BigInt::from(y0)];
    for s in trace.steps.iter().rev() {
        let next = z.last().unwrap() * BigInt::from(s.q);
        z.push(next);
    }
    z.reverse();
    if z[0] != BigInt::from(lifted.y) {
        fails.push(format!("{tag}: lifted y {} is not Q y0", lifted.y));
    }
    let o = IntForm::of(f);
    let psi = BigRational::new(o.eval(&xb, &z[0]), o.den.clone());
    let mut rhs = f.alpha_k().value() * xb.pow(k) + beta * z[l as usize].pow(k);
    for (i, s) in trace.steps.iter().enumerate() {
        let j = l - i as u32;
        rhs += s.pivot.value() * (xb.pow(j) * z[i].pow(k - j));
    }
    if psi != rhs {
        fails.push(format!("{tag}: ({x}, {y0}) does not split into diagonal plus dropped terms"));
    }
    let c = &lifted.certificate;
    let lhs = dist_to_int(&psi).to_f64().unwrap();
    let eps = 2f64.powi(-30);
    if !c.holds || c.lhs != lhs || c.lhs > c.rhs + eps || c.rhs > c.rhs_bound + eps {
        fails.push(format!("{tag}: certificate at ({x}, {y0}) fails: {c:?}"));
    }
}

fn reduction_soundness() -> Check {
    let x_max = 10_000u64;
    let mut g = Gen::new(0x88);
    let mut fails = vec![];
    let mut rows = vec![];
    let (mut lifts, mut constructive) = (0usize, 0usize);
    let clipped = ReductionConfig { clip_to_schedule: true, ..ReductionConfig::default() };
    for i in 0..50 {
        let k = g.range(2, 6) as u32;
        let l = g.range(0, (k as u64 - 2).min(2)) as u32;
        let f = random_form(&mut g, k, l);
        let o = IntForm::of(&f);
        let exhaustive = min_fracpart(&f, SearchBox::new(x_max, x_max).unwrap()).unwrap();
        let mut row = vec![json!([k, l, exhaustive.min_value, [exhaustive.best_x, exhaustive.best_y]])];
        for (name, cfg) in [("default", ReductionConfig::default()), ("clipped", clipped)] {
            let tag = format!("instance {i} ({name}, k = {k}, l = {l})");
            let fs = find_small(&f, x_max, Mode::T11, &cfg).unwrap();
            let r = &fs.result;
            if r.min_value < exhaustive.min_value {
                fails.push(format!("{tag}: {} below the exhaustive minimum {}", r.min_value, exhaustive.min_value));
            }
            let at = o.norm(r.best_x as i64, r.best_y as i64).to_f64().unwrap();
            if at != r.min_value || !r.search_box.contains(r.best_x, r.best_y) {
                fails.push(format!("{tag}: reported point does not carry the reported value"));
            }
            if let Some(trace) = &fs.trace {
                constructive += 1;
                let beta = replay_oracle(&f, trace, &mut fails, &tag);
                if trace.final_diagonal.beta.value() != &beta || !trace.replay_matches() {
                    fails.push(format!("{tag}: final diagonal coefficient differs from replay"));
                }
                let (px, py) = trace.lifted_point.unwrap();
                let y0 = (BigInt::from(py) / &trace.q_product).to_u64().unwrap();
                check_lift(&f, trace, &beta, px, y0, &mut fails, &tag);
                lifts += 1;
                for _ in 0..10 {
                    let (x, y0) = (g.range(1, x_max), g.range(0, trace.search_y_max));
                    check_lift(&f, trace, &beta, x, y0, &mut fails, &tag);
                    lifts += 1;
                }
            } else if fs.provenance != Provenance::ExhaustiveFallback || r.min_value != exhaustive.min_value {
                fails.push(format!("{tag}: fallback without the exhaustive result"));
            }
            row.push(serde_json::to_value(&fs).unwrap());
        }
        rows.push(Value::Array(row));
    }
    Check::new(
        &fails,
        format!("50 instances at X = 10^4, {constructive} reductions, {lifts} lift certificates"),
        json!(rows),
    )
}

fn diagonal_trend() -> Check {
    let mut fails = vec![];
    let mut rows = vec![];
    let mut slopes = vec![];
    for (a, b) in [("sqrt2", "sqrt3"), ("pi", "e"), ("golden", "sqrt5")] {
        let spec = ExperimentSpec {
            id: format!("trend-{a}-{b}"),
            kind: ExperimentKind::DiagonalBound,
            k: 2,
            l: 0,
            coefficient_source: CoefficientSource::Named(vec![a.into(), b.into()]),
            x_grid: vec![50, 100, 200, 400, 800, 1600, 3200],
            epsilon: 0.1,
            h_rule: "none".into(),
            seed: 0,
            mode: None,
            h: None,
            reduction: None,
            precision_bits: 256,
        };
        let rec = harness::run(&spec).unwrap();
        let slope = rec.fitted_slope.unwrap_or(f64::NAN);
        if !(slope <= -0.5 + 0.25) || !rec.trend_only || !rec.fit_note.as_deref().is_some_and(|n| n.contains("trend check")) || rec.failure.is_some() {
            fails.push(format!("{a}, {b}: slope {slope}, trend_only {}, note {:?}", rec.trend_only, rec.fit_note));
        }
        slopes.push(format!("{slope:.3}"));
        rows.push(serde_json::to_value(&rec).unwrap());
    }
    Check::new(&fails, format!("k = 2, X up to 3200, slopes {}", slopes.join(", ")), json!(rows))
}

struct Criterion {
    name: &'static str,
    run: fn() -> Check,
    limit: Option<Duration>,
}

const CRITERIA: [Criterion; 9] = [
    Criterion { name: "far-from-integers sum bound", run: far_from_integers, limit: Some(Duration::from_secs(10)) },
    Criterion { name: "Dirichlet approximation", run: dirichlet, limit: Some(Duration::from_secs(5)) },
    Criterion { name: "Weyl differencing vs telescoped oracle", run: differencing, limit: None },
    Criterion { name: "smooth sets vs trial division", run: smooth_sets, limit: None },
    Criterion { name: "exponential sums vs direct loops", run: exponential_sums, limit: None },
    Criterion { name: "exponent calculators", run: exponents_exact, limit: None },
    Criterion { name: "appendix sum ratios bounded", run: appendix_grid, limit: Some(Duration::from_secs(30)) },
    Criterion { name: "reduction soundness", run: reduction_soundness, limit: None },
    Criterion { name: "diagonal trend slope", run: diagonal_trend, limit: Some(Duration::from_secs(120)) },
];

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn line(pass: bool, idx: usize, name: &str, detail: &str) {
    println!("{} criterion {idx:>2}: {name} ({detail})", if pass { "PASS" } else { "FAIL" });
}

fn main() {
    let mut all_pass = true;
    let mut reference = vec![];
    pool(1).install(|| {
        for (i, c) in CRITERIA.iter().enumerate() {
            let start = Instant::now();
            let check = (c.run)();
            let took = start.elapsed();
            let in_time = c.limit.is_none_or(|l| took <= l);
            let pass = check.pass && in_time;
            let limit = c.limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
            line(pass, i + 1, c.name, &format!("{}; {:.2}s{limit}", check.detail, took.as_secs_f64()));
            all_pass &= pass;
            reference.push(serde_json::to_string(&check.record).unwrap());
        }
    });

    let mut mismatched = vec![];
    for threads in [4, 8] {
        let again: Vec<String> =
            pool(threads).install(|| CRITERIA.iter().map(|c| serde_json::to_string(&(c.run)().record).unwrap()).collect());
        for (i, (a, b)) in reference.iter().zip(&again).enumerate() {
            if a != b {
                mismatched.push(format!("criterion {} on {threads} workers", i + 1));
            }
        }
    }
    let det = mismatched.is_empty();
    let detail = if det {
        format!("records identical on 1, 4 and 8 workers ({} bytes)", reference.iter().map(String::len).sum::<usize>())
    } else {
        format!("differs: {}", mismatched.join(", "))
    };
    line(det, 10, "determinism across worker counts", &detail);
    all_pass &= det;

    if !all_pass {
        std::process::exit(1);
    }
}
