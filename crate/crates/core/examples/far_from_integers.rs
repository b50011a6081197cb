//! Points at distance at least 1/H from the integers give
//! `Σ_{h≤H} |Σ_n e(h xₙ)| ≥ N/6`.
use binform::expsums::lemma21_check;
use binform::harness::points_away_from_integers;

fn main() {
    for (n, h) in [(10, 2), (100, 5), (1000, 20), (1000, 100)] {
        let pts = points_away_from_integers(7, n, h);
        let c = lemma21_check(&pts, h).unwrap();
        println!("N = {n:>4}, H = {h:>3}: {:>10.3} >= {:>8.3}  ({:.1}x)", c.lhs, c.rhs, c.lhs / c.rhs);
    }
}
