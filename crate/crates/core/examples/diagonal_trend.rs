//! How min ∥αx² + βy²∥ over an X × X box shrinks with X, and the fitted slope.
use binform::harness::fit_exponent;
use binform::search::{min_fracpart_diagonal, DiagonalForm};
use binform::PrecReal;

fn main() {
    let d = DiagonalForm::new(PrecReal::parse("sqrt2", 256).unwrap(), PrecReal::parse("sqrt3", 256).unwrap(), 2).unwrap();
    let mut pts = vec![];
    for x in [50, 100, 200, 400, 800, 1600, 3200] {
        let r = min_fracpart_diagonal(&d, x, x).unwrap();
        println!("X = {x:>4}: {:.3e} at ({}, {})", r.min_value, r.best_x, r.best_y);
        pts.push((x as f64, r.min_value));
    }
    println!("slope of log min against log X: {:.3}", fit_exponent(&pts).unwrap());
}
