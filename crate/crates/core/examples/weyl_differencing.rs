//! Weyl differencing: each difference in x lowers the x-degree by one.
use binform::forms::weyl_difference;
use binform::{Axis, BinaryForm};

fn main() {
    let f = BinaryForm::parse("k=4 l=2 alpha_k=1/3 alphas=[1/5, 1/7, 1/11]").unwrap();
    for shifts in [vec![1], vec![1, 2], vec![1, 2, 3]] {
        let d = weyl_difference(&f, Axis::X, &shifts).unwrap();
        println!("shifts {shifts:?}: x-degree {:?}", d.degree_in(Axis::X));
        for (&(a, b), c) in d.terms() {
            println!("  {} x^{a} y^{b}", c.to_exact_string());
        }
    }
}
