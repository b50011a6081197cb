//! Convergents and Dirichlet approximation `|qα − a| ≤ 1/N` with `q ≤ N`.
use binform::rational::{continued_fraction, dirichlet_approx, dirichlet_exact_best};
use binform::PrecReal;

fn main() {
    let pi = PrecReal::parse("pi", 256).unwrap();
    let cf = continued_fraction(&pi, 8).unwrap();
    let qs: Vec<String> = cf.quotients.iter().map(|q| q.to_string()).collect();
    println!("pi = [{}; ...]", qs.join(", "));
    for c in &cf.convergents {
        println!("  {}/{}", c.p, c.q);
    }
    for n in [10, 100, 1000, 100_000] {
        let d = dirichlet_approx(&pi, n).unwrap();
        let b = dirichlet_exact_best(&pi, n).unwrap();
        println!("N = {n:>6}: a/q = {}/{}  err {:.3e} (best q {} err {:.3e})", d.a, d.q, d.err_f64(), b.q, b.err_f64());
    }
}
