//! 2-Selmer ranks of J_p over Q and over Q(√±p).

use redei::family::quad_sign;
use redei::selmer::{selmer_dim_j_over_quad, selmer_dim_jp_over_q};

fn main() {
    for p in [7u64, 17, 23, 41, 47, 73, 89, 97, 113] {
        let over_q = selmer_dim_jp_over_q(p).expect("selmer over Q");
        let quad = quad_sign(p).map(|s| selmer_dim_j_over_quad(p, s).expect("selmer over Q(sqrt(+-p))"));
        match quad {
            Some(r) => {
                let syms: Vec<String> = r.symbols.iter().map(|(n, v)| format!("{n}={v:+}")).collect();
                println!("p={p:>3}: dim S2(J_p/Q) = {over_q}, dim S2(J/Q(sqrt({}))) = {}  {}", r.d, r.dim, syms.join(" "));
            }
            None => println!("p={p:>3}: dim S2(J_p/Q) = {over_q}"),
        }
    }
}
