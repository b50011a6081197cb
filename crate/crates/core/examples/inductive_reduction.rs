//! Reduce a form to a diagonal one by substitutions `y = q·y₁`, then lift a
//! small value back with a certificate.
use binform::reduction::{find_small, reduce, Mode, ReductionConfig};
use binform::search::{min_fracpart, SearchBox};
use binform::BinaryForm;

fn main() {
    let f = BinaryForm::parse("k=5 l=2 alpha_k=sqrt2 alphas=[pi, e, sqrt3]").unwrap();
    let x = 5000;
    for (name, cfg) in [
        ("windows as stated", ReductionConfig::default()),
        ("windows clipped to the schedule", ReductionConfig { clip_to_schedule: true, ..Default::default() }),
    ] {
        let t = reduce(&f, x, Mode::T11, &cfg).unwrap();
        println!("{name}: H = {:.2}, target {:.3e}", t.h, t.target);
        for s in &t.steps {
            println!(
                "  step {}: q = {}, window {}, |q a - p| = {:.3e}, within schedule {}, budget ok {}",
                s.step_index, s.q, s.window, s.approx_error.to_f64(), s.within_schedule, s.budget_ok
            );
        }
        println!("  prod q = {}, diagonal search y <= {}, replay exact: {}", t.q_product, t.search_y_max, t.replay_matches());
        let fs = find_small(&f, x, Mode::T11, &cfg).unwrap();
        let c = fs.certificate.unwrap();
        println!(
            "  lifted ({}, {}): {:.3e} <= {:.3e} <= {:.3e}, holds {}",
            fs.result.best_x, fs.result.best_y, c.lhs, c.rhs, c.rhs_bound, c.holds
        );
    }
    let ex = min_fracpart(&f, SearchBox::new(x, x).unwrap()).unwrap();
    println!("exhaustive minimum: {:.3e} at ({}, {})", ex.min_value, ex.best_x, ex.best_y);
}
