//! The exponential sums T, S (y restricted to smooth numbers), Ξ and a plain Weyl sum.
use binform::expsums::{sum_s, sum_t, sum_xi, weyl_sum, XiParams};
use binform::{BinaryForm, PrecReal};

fn main() {
    let f = BinaryForm::parse("k=4 l=1 alpha_k=sqrt2 alphas=[pi, e]").unwrap();
    let t = sum_t(&f, 4, 200, 200).unwrap();
    println!("T(H=4, X=Y=200) = {:.3}  (trivial bound {})", t.value, 4 * 200 * 200);
    println!("  per h: {:?}", t.terms.unwrap().iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>());
    let s = sum_s(&f, 4, 200, 200, 7).unwrap();
    println!("S(H=4, X=Y=200, R=7) = {:.3}", s.value);

    let beta = PrecReal::parse("sqrt5", 256).unwrap();
    let p = XiParams::new(vec![3.0], 3.0, 500.0, 4, 1, beta).unwrap();
    println!("Xi = {:.3}, size hypotheses hold: {}", sum_xi(&p).unwrap(), p.hypotheses_hold());

    let alpha = PrecReal::parse("golden", 256).unwrap();
    for x in [100, 1000, 10_000] {
        println!("|sum e(golden x^2)|, x <= {x}: {:.3}", weyl_sum(&alpha, 2, x, 1));
    }
}
