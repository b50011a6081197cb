//! Exact reals with a precision tag, and the distance to the nearest integer.
use binform::{e_of, frac_norm, PrecReal};

fn main() {
    for lit in ["sqrt2", "pi", "e", "golden", "-7/3", "0.4999"] {
        let x = PrecReal::parse(lit, 128).unwrap();
        let z = e_of(&x);
        println!("{lit:>8}: ~{:.12}  ||x|| = {:.3e}  e(x) = ({:+.6}, {:+.6})", x.to_f64(), frac_norm(&x), z.re, z.im);
    }
    // 355/113 is the famous approximation: ||113 pi|| is tiny
    let pi = PrecReal::parse("pi", 256).unwrap();
    println!("||113 pi|| = {:.3e}", pi.mul_int(&113.into()).frac_norm());
}
