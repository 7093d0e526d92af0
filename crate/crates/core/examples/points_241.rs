//! Rank 2 and the rational points of y² = x(x² − 241²)(x² − 4·241²).

use redei::localdescent::SplitModel;
use redei::points::{delta_mumford, known_divisors, rank_lower_bound, weierstrass_only};
use redei::selmer::torsion_delta;

fn main() {
    let m = SplitModel::scaled(241);
    let divisors = known_divisors(241);
    let mut images = Vec::new();
    for d in &divisors {
        let img = delta_mumford(d, &m).expect("delta");
        println!("{d}: delta = {img:?}");
        images.push(img);
    }
    println!("rank >= {}", rank_lower_bound(&images, &torsion_delta(&m)).expect("rank"));

    let res = weierstrass_only(241).expect("points");
    for c in &res.conic_checks {
        println!("conic {}Y1^2 + {}Y2^2 = {}: obstructed at {:?}", c.a, c.b, c.c, c.obstructed);
    }
    for q in &res.quotients {
        let cert = &q.certificate;
        let l = cert.central_value.as_ref().map(|v| format!("N = {}, L(E,1) = {:.4}", v.conductor, v.l_value)).unwrap_or_default();
        println!("{}: Selmer dim {}, {l}", cert.curve.equation(), cert.selmer_dim);
    }
    let pts: Vec<String> = res.points.iter().map(|p| p.to_string()).collect();
    println!("C(Q) = {{{}}}, complete: {}", pts.join(", "), res.complete);
}
