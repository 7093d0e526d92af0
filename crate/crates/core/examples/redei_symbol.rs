//! Rédei symbols with their prime-by-prime contributions.
//!
//! cargo run --example redei_symbol -- 2 2 -23

use redei::redei::redei_symbol;

fn main() {
    let args: Vec<i64> = std::env::args().skip(1).map(|s| s.parse().expect("integer argument")).collect();
    let triples = if args.len() == 3 { vec![(args[0], args[1], args[2])] } else { vec![(2, 2, -23), (2, 2, -47), (2, -1, 17), (2, 2, 113)] };
    for (a, b, c) in triples {
        match redei_symbol(a, b, c) {
            Ok(cert) => {
                let parts: Vec<String> = cert.contributions.iter().map(|(v, s)| format!("{v}:{s:+}")).collect();
                println!("[{a},{b},{c}] = {:+}  ({})", cert.value, parts.join(" "));
            }
            Err(e) => println!("[{a},{b},{c}]: {e}"),
        }
    }
}
