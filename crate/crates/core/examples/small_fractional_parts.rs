//! Exhaustive search for min ∥Ψ(x, y)∥ over a box, with and without smooth y.
use binform::search::{min_fracpart, min_fracpart_smooth_y, SearchBox};
use binform::BinaryForm;

fn main() {
    let f = BinaryForm::parse("k=3 l=1 alpha_k=sqrt2 alphas=[pi, e]").unwrap();
    for x in [10, 100, 1000] {
        let r = min_fracpart(&f, SearchBox::new(x, x).unwrap()).unwrap();
        let s = min_fracpart_smooth_y(&f, x, x, 5).unwrap();
        println!(
            "X = {x:>4}: min {:.3e} at ({}, {});  5-smooth y: {:.3e} at ({}, {})",
            r.min_value, r.best_x, r.best_y, s.min_value, s.best_x, s.best_y
        );
    }
}
