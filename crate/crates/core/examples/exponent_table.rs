//! The exponents σ for several k, with a LaTeX comparison table.
use binform::exponents::{exponent_table, latex_table, thresholds, DEFAULT_C};

fn main() {
    for k in [3, 4, 6, 10, 30] {
        let t = exponent_table(k, 1, DEFAULT_C, None).unwrap();
        let (l0, l1) = thresholds(k).unwrap();
        println!(
            "k = {k:>2}: sigma11 = {:?}, sigma13 = {:?}, sigma14 = {:?}, l0 = {l0}, l1 = {l1}",
            t.sigma_t11.map(|s| s.to_string()),
            t.sigma_t13.map(|s| s.to_string()),
            t.sigma_t14.map(|s| format!("{s:.5}")),
        );
    }
    println!("{}", latex_table(&[3, 4, 5, 6, 8], 1).unwrap());
}
