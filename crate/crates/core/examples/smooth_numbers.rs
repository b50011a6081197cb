//! R-smooth numbers up to Y, and a sum over them majorized by a sum over
//! factorizations `v₁⋯v_r·u`.
use binform::smooth::{decompose, enumerate_smooth, DecompositionParams};

fn main() {
    let a = enumerate_smooth(20, 3);
    println!("A(20, 3) = {:?}", a.members);
    for r in [2, 5, 10, 50] {
        println!("|A(10^4, {r})| = {}", enumerate_smooth(10_000, r).len());
    }
    let params = DecompositionParams::schedule(2000, 2.0, 0.5).unwrap();
    let f = |y: u64| (y as f64).sqrt().sin().abs();
    let d = decompose(&f, 2000, &params).unwrap();
    let direct: f64 = enumerate_smooth(2000, params.r_smooth).members.iter().map(|&y| f(y)).sum();
    println!("M = {:?}, R = {}", params.m, params.r_smooth);
    println!("sum over A(Y, R) = {direct:.2}  vs  F + G = {:.2} + {:.2}  ({} cells)", d.f_value, d.g_value, d.cells);
}
