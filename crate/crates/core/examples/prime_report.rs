//! Rank and Sha[2] summaries for a range of primes.
//!
//! cargo run --release --example prime_report -- 5 120

use redei::arith::primes_in;
use redei::family::report;

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("bound")).collect();
    let (lo, hi) = match args[..] {
        [a, b] => (a, b),
        _ => (5, 120),
    };
    println!("{:>5} {:>4} {:>6} {:>8} {:>8}  theorem", "p", "mod24", "dim_Q", "rank", "sha2");
    for p in primes_in(lo.max(5), hi) {
        let r = match report(p) {
            Ok(r) => r,
            Err(e) => {
                println!("{p:>5}  error: {e}");
                continue;
            }
        };
        let rank = match r.rank() {
            Some(k) => k.to_string(),
            None => format!("[{},{}]", r.rank_lower, r.rank_upper),
        };
        let sha = r.sha2_dim.map(|s| s.to_string()).unwrap_or_else(|| format!("[{},{}]", r.sha2_range.0, r.sha2_range.1));
        let tag = r.theorem_applied.first().or(r.conditional.first()).cloned().unwrap_or_default();
        println!("{p:>5} {:>4} {:>6} {rank:>8} {sha:>8}  {tag}", r.classes.mod24, r.dim_s2_jp_q);
    }
}
