//! Acceptance criteria, one PASS/FAIL line each (written to stderr, bypassing capture).
//!
//! A criterion can print FAIL without failing the test only when the failing item is listed
//! as a documented deviation; the test then asserts the value actually computed, so the
//! deviation cannot drift silently. Any other failure panics.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use redei::arith::{self, LocalField, Place};
use redei::f2;
use redei::family::{self, QuarticField};
use redei::localdescent::{self, SplitModel};
use redei::points::{self, TwoCover};
use redei::quadfield;
use redei::redei as rs;
use redei::selmer;

const PER_PRIME_LIMIT: Duration = Duration::from_secs(10);
const LARGE_QUAD_LIMIT: Duration = Duration::from_secs(60);
const SWEEP_BOUND: u64 = 5000;
const RANDOM_TRIPLES: usize = 200;
const HILBERT_PAIRS: usize = 500;
const HILBERT_BOX: i64 = 50;
const UNIT_BOUND: u64 = 10_000;

struct Check {
    label: String,
    ok: bool,
    /// Failure expected and explained in the decision notes.
    documented: bool,
}

fn check(label: impl Into<String>, ok: bool) -> Check {
    Check { label: label.into(), ok, documented: false }
}

fn deviation(label: impl Into<String>, ok: bool) -> Check {
    Check { label: label.into(), ok, documented: true }
}

fn report(id: u32, name: &str, checks: Vec<Check>) {
    let pass = checks.iter().all(|c| c.ok);
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "[{}] criterion {id:>2}: {name}", if pass { "PASS" } else { "FAIL" });
    for c in checks.iter().filter(|c| !c.ok) {
        let tag = if c.documented { "documented deviation" } else { "UNEXPECTED" };
        let _ = writeln!(err, "         - {} ({tag})", c.label);
    }
    let unexpected: Vec<&str> = checks.iter().filter(|c| !c.ok && !c.documented).map(|c| c.label.as_str()).collect();
    assert!(unexpected.is_empty(), "criterion {id}: {unexpected:?}");
}

#[test]
fn criterion_01_selmer_dims_over_q() {
    let table = [(73u64, 8usize), (5, 5), (11, 5), (13, 5), (19, 5), (7, 4), (17, 6), (23, 6)];
    let mut checks = Vec::new();
    for (p, want) in table {
        let t = Instant::now();
        let got = selmer::selmer_dim_jp_over_q(p).unwrap();
        let dt = t.elapsed();
        checks.push(check(format!("p={p}: got {got}, want {want}"), got == want));
        checks.push(check(format!("p={p}: {dt:?} within {PER_PRIME_LIMIT:?}"), dt <= PER_PRIME_LIMIT));
    }
    report(1, "dim S2(J_p/Q) table", checks);
}

#[test]
fn criterion_02_rank_zero_of_c() {
    let base = SplitModel::base();
    let g = selmer::selmer_group(&selmer::problem_over_q(&base).unwrap()).unwrap();
    let q3 = LocalField::Qp(3);
    let img = localdescent::local_image(&base, q3).unwrap();
    let v = localdescent::pack_ints(&[1, 2, -1, 6, -3], q3);
    report(
        2,
        "dim S2(J/Q) = 4 and (1,2,-1,6,-3) outside im(delta_3)",
        vec![check(format!("dim {}", g.dim), g.dim == 4), check("Q3 membership rejected", !img.contains(v))],
    );
}

#[test]
fn criterion_03_local_image_tables() {
    let base = SplitModel::base();
    let ints = |field: LocalField, rows: &[[i64; 5]]| -> Vec<u64> { rows.iter().map(|r| localdescent::pack_ints(r, field)).collect() };
    let q2 = LocalField::Qp(2);
    let q3 = LocalField::Qp(3);
    let u3 = LocalField::UnramQuad(3);
    let tables: Vec<(&str, LocalField, Vec<u64>)> = vec![
        (
            "Q2",
            q2,
            ints(
                q2,
                &[[6, -1, -2, -3, -1], [1, -6, -1, -2, -3], [2, 1, 1, -1, -2], [3, 2, 1, -6, -1], [2, -1, 6, -3, 1], [1, 2, -1, 6, -3]],
            ),
        ),
        ("Q3", q3, ints(q3, &[[-3, -1, 1, -3, -1], [1, 3, -1, 1, -3], [-1, 1, 1, -1, 1], [1, -3, -1, 1, 3]])),
        (
            "Q3(i)",
            u3,
            [["3", "1", "1", "3", "1"], ["1", "3", "1", "1", "3"], ["r", "r", "1", "r", "r"], ["3r", "1", "1", "3r", "1"]]
                .iter()
                .map(|r| {
                    localdescent::pack(&r.iter().map(|s| localdescent::class_from_label(s, u3).unwrap()).collect::<Vec<_>>())
                })
                .collect(),
        ),
        ("R", LocalField::Real, ints(LocalField::Real, &[[1, -1, -1, -1, -1], [1, 1, 1, -1, -1]])),
    ];
    let mut checks = Vec::new();
    for (name, field, rows) in tables {
        let img = localdescent::local_image(&base, field).unwrap();
        checks.push(check(format!("{name}: spans equal (dim {})", img.dim()), f2::same_span(&img.vectors, &rows)));
    }
    report(3, "local image spans over Q2, Q3, Q3(i), R", checks);
}

#[test]
fn criterion_04_two_two_minus_p() {
    let mut bad = Vec::new();
    let mut n = 0;
    for p in arith::primes_in(3, SWEEP_BOUND).into_iter().filter(|p| p % 8 == 7) {
        n += 1;
        let v = rs::redei(2, 2, -(p as i64)).unwrap();
        if (v == 1) != (p % 16 == 15) {
            bad.push(p);
        }
    }
    report(4, "[2,2,-p] = 1 iff p = 15 mod 16", vec![check(format!("{n} primes, mismatches {bad:?}"), bad.is_empty())]);
}

#[test]
fn criterion_05_two_p_p_and_dichotomy() {
    let mut bad_identity = Vec::new();
    let mut bad_dichotomy = Vec::new();
    let mut bad_quartic = Vec::new();
    let mut n = 0;
    for p in arith::primes_in(3, SWEEP_BOUND).into_iter().filter(|p| p % 8 == 1) {
        n += 1;
        let pi = p as i64;
        let a = rs::redei(2, pi, pi).unwrap();
        let b = rs::redei(2, -2, pi).unwrap();
        if a != b {
            bad_identity.push(p);
        }
        let quartic_root = (0..p as u128).any(|x| (x * x % p as u128 * x % p as u128 * x) % p as u128 == 2 % p as u128);
        if (b == 1) != quartic_root {
            bad_quartic.push(p);
        }
        let i = arith::sqrt_mod(-1, p).unwrap() as i128;
        let one_plus_i_square = arith::jacobi(1 + i, p as u128) == 1;
        if ((a == 1) == one_plus_i_square) != (p % 16 == 1) {
            bad_dichotomy.push(p);
        }
    }
    report(
        5,
        "[2,p,p] = [2,-2,p] and the mod-16 dichotomy",
        vec![
            check(format!("{n} primes, identity mismatches {bad_identity:?}"), bad_identity.is_empty()),
            check(format!("x^4 - 2 root test mismatches {bad_quartic:?}"), bad_quartic.is_empty()),
            check(format!("dichotomy mismatches {bad_dichotomy:?}"), bad_dichotomy.is_empty()),
        ],
    );
}

fn sqf(n: i128) -> i64 {
    arith::squarefree_part(n).unwrap() as i64
}

#[test]
fn criterion_06_symmetry_and_multiplicativity() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let primes = arith::primes_in(17, 500);
    let draw = |rng: &mut StdRng| -> i64 {
        let small = [1i64, 2, 3, 5, 7, 11, 13];
        let v = if rng.gen_bool(0.6) { small[rng.gen_range(0..small.len())] } else { primes[rng.gen_range(0..primes.len())] as i64 };
        if rng.gen_bool(0.5) { -v } else { v }
    };
    let mut triples = Vec::new();
    let mut attempts = 0;
    while triples.len() < RANDOM_TRIPLES && attempts < 200_000 {
        attempts += 1;
        let t = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        if let Ok(v) = rs::redei(t.0, t.1, t.2) {
            if [t.0, t.1, t.2].iter().all(|&x| x != 1) {
                triples.push((t, v));
            }
        }
    }
    let mut perm_bad = 0;
    let mut mult_tested = 0;
    let mut mult_bad = 0;
    for &((a, b, c), v) in &triples {
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            if rs::redei(x, y, z).ok() != Some(v) {
                perm_bad += 1;
            }
        }
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            for _ in 0..20 {
                let z2 = draw(&mut rng);
                let z12 = sqf(z as i128 * z2 as i128);
                if let (Ok(u), Ok(w)) = (rs::redei(x, y, z2), rs::redei(x, y, z12)) {
                    mult_tested += 1;
                    if rs::redei(x, y, z).unwrap() * u != w {
                        mult_bad += 1;
                    }
                    break;
                }
            }
        }
    }
    report(
        6,
        "symbol symmetry and trilinearity on random admissible triples",
        vec![
            check(format!("{} admissible triples drawn", triples.len()), triples.len() == RANDOM_TRIPLES),
            check(format!("permutation violations {perm_bad}"), perm_bad == 0),
            check(format!("multiplicativity: {mult_tested} slot tests, {mult_bad} violations"), mult_bad == 0 && mult_tested >= RANDOM_TRIPLES),
        ],
    );
}

#[test]
fn criterion_07_quadratic_tables() {
    let mut checks = Vec::new();
    let mut run = |p: u64, sign: i64, want_dim: usize, keys: &[&str], want: &[i8], documented: bool| {
        let t = Instant::now();
        let got = selmer::selmer_dim_j_over_quad(p, sign);
        let dt = t.elapsed();
        let label = format!("p={p}");
        match got {
            Ok(r) => {
                let d = sign * p as i64;
                let syms: Vec<i8> = keys
                    .iter()
                    .map(|k| {
                        let key = format!("[{k},{d}]");
                        r.symbols.iter().find(|(n, _)| *n == key).map(|(_, v)| *v).unwrap_or(0)
                    })
                    .collect();
                let ok = r.dim == want_dim && syms == want;
                let limit = if p > 2000 { LARGE_QUAD_LIMIT } else { PER_PRIME_LIMIT };
                checks.push(Check { label: format!("{label}: dim {} symbols {syms:?}", r.dim), ok, documented });
                checks.push(check(format!("{label}: {dt:?} within {limit:?}"), dt <= limit));
            }
            Err(e) => checks.push(Check { label: format!("{label}: {e}"), ok: false, documented }),
        }
    };
    for (p, d, s) in [(191u64, 6usize, [1i8, 1]), (47, 6, [1, -1]), (167, 4, [-1, 1]), (23, 4, [-1, -1])] {
        run(p, -1, d, &["2,2", "3,6"], &s, false);
    }
    for (p, d, s) in [(113u64, 6usize, [1i8, 1]), (17, 4, [1, -1]), (41, 4, [-1, 1]), (89, 6, [-1, -1])] {
        run(p, 1, d, &["2,2", "2,-1"], &s, false);
    }
    let rows: [(u64, [i8; 4], usize); 16] = [
        (2593, [1, 1, 1, 1], 8),
        (1153, [1, 1, 1, -1], 8),
        (337, [1, 1, -1, 1], 4),
        (557, [1, 1, -1, -1], 4),
        (433, [1, -1, 1, 1], 4),
        (97, [1, -1, 1, -1], 4),
        (241, [1, -1, -1, 1], 6),
        (193, [1, -1, -1, -1], 6),
        (1321, [-1, 1, 1, 1], 6),
        (409, [-1, 1, 1, -1], 6),
        (1129, [-1, 1, -1, 1], 4),
        (313, [-1, 1, -1, -1], 4),
        (937, [-1, -1, 1, 1], 6),
        (1033, [-1, -1, 1, -1], 6),
        (73, [-1, -1, -1, 1], 4),
        (601, [-1, -1, -1, -1], 4),
    ];
    for (p, s, d) in rows {
        // 557 is 5 mod 24, so it cannot head a row of this table; 577 carries the row's data.
        run(p, 1, d, &["2,2", "2,-1", "3,-2", "3,6"], &s, p == 557);
    }
    let r577 = selmer::selmer_dim_j_over_quad(577, 1).unwrap();
    let syms577: Vec<i8> = r577.symbols.iter().map(|(_, v)| *v).collect();
    assert_eq!((r577.dim, syms577), (4, vec![1, 1, -1, -1]));
    assert!(selmer::selmer_dim_j_over_quad(557, 1).is_err());
    report(7, "quadratic-field Selmer tables", checks);
}

#[test]
fn criterion_08_theorem_reports() {
    let r23 = family::report(23).unwrap();
    let r89 = family::report(89).unwrap();
    let r97 = family::report(97).unwrap();
    let r7 = family::report(7).unwrap();
    // 89 is 1 mod 8 with 2^22 = 1 mod 89, so x^4 - 2 splits mod 89 and the rank bound stays at 2.
    assert!(family::splits_in_quartic(89, QuarticField::FourthRootOfTwo).unwrap());
    assert_eq!((r89.rank_lower, r89.rank_upper, r89.dim_s2_j_quad.as_ref().unwrap().dim), (0, 2, 6));
    report(
        8,
        "reports for 23, 89, 97, 7",
        vec![
            check("23: rank 0, dim Sha[2] = 2", r23.rank() == Some(0) && r23.sha2_dim == Some(2)),
            deviation(
                format!("89: rank 0, dim Sha[2] = 2 (got rank in [{}, {}])", r89.rank_lower, r89.rank_upper),
                r89.rank() == Some(0) && r89.sha2_dim == Some(2),
            ),
            check("97: rank 0, dim Sha[2] = 4", r97.rank() == Some(0) && r97.sha2_dim == Some(4)),
            check("7: rank 0, six rational points", r7.rank() == Some(0) && r7.rational_points == Some(6)),
        ],
    );
}

#[test]
fn criterion_09_p241_rank_two() {
    let m = SplitModel::scaled(241);
    let d = points::known_divisors(241);
    let ints = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() };
    let dp = points::delta_mumford(&d[0], &m).unwrap();
    let dq = points::delta_mumford(&d[1], &m).unwrap();
    // u_P(241) < 0: the fourth and fifth coordinates are negative classes.
    assert_eq!(dp, ints(&[2, 241, 1, -241, -2]));
    let lower = points::rank_lower_bound(&[dp.clone(), dq.clone()], &selmer::torsion_delta(&m)).unwrap();
    let dim_q = selmer::selmer_dim_jp_over_q(241).unwrap();
    let r = family::report(241).unwrap();
    report(
        9,
        "p = 241: divisors, rank 2, Sha[2] of dimension 2",
        vec![
            check("P and Q valid", d.iter().all(|x| points::mumford_valid(x, &m))),
            deviation(format!("delta(P) = (2,241,1,241,2), got {dp:?}"), dp == ints(&[2, 241, 1, 241, 2])),
            check("delta(Q) = (1,241,241,241,241)", dq == ints(&[1, 241, 241, 241, 241])),
            check(format!("rank lower bound {lower}"), lower == 2),
            check(format!("dim S2(J_241/Q) = {dim_q}"), dim_q == 8),
            check("report: rank 2, dim Sha[2] = 2", r.rank() == Some(2) && r.sha2_dim == Some(2)),
        ],
    );
}

#[test]
fn criterion_10_conic_obstruction() {
    let m = SplitModel::scaled(241);
    let cover = TwoCover { model: m, s: vec![2, 241, 1, 241, 2] };
    let conic = cover.conic(0, 3).unwrap();
    let hilbert_2 = arith::hilbert((2 * 723) as i128, (-241 * 723) as i128, Place::Finite(2)) == -1;
    let hilbert_3 = arith::hilbert((2 * 723) as i128, (-241 * 723) as i128, Place::Finite(3)) == -1;
    let search_2 = points::conic_solvable_by_search(2, -241, 723, 2) == Some(false);
    let search_3 = points::conic_solvable_by_search(2, -241, 723, 3) == Some(false);
    report(
        10,
        "2y^2 - 241z^2 = 723 insoluble over Q2 and Q3",
        vec![
            check("equation", (conic.a, conic.b, conic.c) == (2, -241, 723)),
            check("Hilbert route at 2 and 3", hilbert_2 && hilbert_3),
            check("search route at 2 and 3", search_2 && search_3),
            check(
                format!("obstructed at {:?}", conic.obstructed),
                conic.obstructed.contains(&Place::Finite(2)) && conic.obstructed.contains(&Place::Finite(3)),
            ),
        ],
    );
}

#[test]
fn criterion_11_elliptic_quotients() {
    let w = points::weierstrass_only(241).unwrap();
    let model = SplitModel::scaled(241);
    let mut checks = vec![check(format!("{} quotients", w.quotients.len()), w.quotients.len() == 6)];
    for q in &w.quotients {
        let cert = &q.certificate;
        // Every quotient has 2-Selmer dimension 4, so descent alone bounds the rank by 2.
        assert_eq!(cert.selmer_dim, 4, "{}", cert.curve.equation());
        assert!(cert.rank_zero_analytic && cert.torsion_bound == 4, "{}", cert.curve.equation());
        checks.push(deviation(
            format!("{}: rank 0 by 2-descent (Selmer dim {})", cert.curve.equation(), cert.selmer_dim),
            cert.rank_zero,
        ));
        // Recompute the descent from the equation alone.
        let again = points::elliptic_two_descent(&cert.curve).unwrap();
        checks.push(check(format!("{}: descent reproducible", cert.curve.equation()), again.selmer_dim == cert.selmer_dim));
    }
    checks.push(check(
        format!("weierstrass_only(241): {} points, complete {}", w.points.len(), w.complete),
        w.points == points::weierstrass_points(241) && w.points.len() == 6 && w.complete,
    ));
    checks.push(check(
        "every listed point is on C_241",
        w.points.iter().all(|q| match q {
            points::CurvePoint::Infinity => true,
            points::CurvePoint::Affine(x, y) => model.eval(&arith::rat(*x)) == arith::rat(y * y),
        }),
    ));
    report(11, "elliptic quotients of rank 0 and C_241(Q)", checks);
}

#[test]
fn criterion_12_reduction_counts() {
    let order = |p: i64, q: u64| family::count_jacobian(&SplitModel::scaled(p), q).unwrap().jacobian_order;
    let mut checks = Vec::new();
    for p in [7, 11, 241] {
        checks.push(check(format!("#J_{p}(F_5) = {}", order(p, 5)), order(p, 5) == 16));
    }
    checks.push(check(format!("#J_5(F_7) = {}", order(5, 7)), order(5, 7) == 48));
    checks.push(check(format!("#J_5(F_11) = {}", order(5, 11)), order(5, 11) == 128));
    for p in [5, 7, 23, 241] {
        let t = family::torsion_structure(p).unwrap();
        checks.push(check(format!("torsion of J_{p}: {}", t.group), t.certified && t.group == "(Z/2)^4"));
    }
    report(12, "Jacobian orders and torsion", checks);
}

/// Whether a·x² + b·y² = z² has a nonzero integer solution in a box that contains one
/// whenever one exists (Holzer's bound for |a|, |b| ≤ 50).
fn small_solution(a: i64, b: i64) -> bool {
    for x in 0..=HILBERT_BOX + 10 {
        for y in 0..=HILBERT_BOX + 10 {
            if x == 0 && y == 0 {
                continue;
            }
            let v = a as i128 * (x * x) as i128 + b as i128 * (y * y) as i128;
            if v >= 0 && arith::is_square_i128(v) {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_13_arithmetic_properties() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0013);
    let mut product_bad = 0;
    for _ in 0..HILBERT_PAIRS {
        let mut draw = || loop {
            let v: i64 = rng.gen_range(-1_000_000..=1_000_000);
            if v != 0 {
                return v as i128;
            }
        };
        let (a, b) = (draw(), draw());
        let prod: i32 =
            arith::relevant_places(&[a, b]).unwrap().into_iter().map(|v| arith::hilbert(a, b, v) as i32).product();
        if prod != 1 {
            product_bad += 1;
        }
    }
    let mut oracle_bad = Vec::new();
    for a in -HILBERT_BOX..=HILBERT_BOX {
        for b in -HILBERT_BOX..=HILBERT_BOX {
            if a == 0 || b == 0 {
                continue;
            }
            let local = arith::relevant_places(&[a as i128, b as i128])
                .unwrap()
                .into_iter()
                .all(|v| arith::hilbert(a as i128, b as i128, v) == 1);
            if local != small_solution(a, b) {
                oracle_bad.push((a, b));
            }
        }
    }
    let mut unit_bad = Vec::new();
    let mut class_bad = Vec::new();
    for p in arith::primes_in(3, UNIT_BOUND) {
        let pstar = if p % 4 == 1 { p as i64 } else { -(p as i64) };
        let k = quadfield::make_field(pstar).unwrap();
        if k.class_number % 2 == 0 {
            class_bad.push(p);
        }
        if p % 4 == 1 {
            let eps = k.fundamental_unit.as_ref().unwrap();
            if eps.norm() != arith::rat(-1) {
                unit_bad.push(p);
            }
        }
    }
    report(
        13,
        "Hilbert symbols, unit norms, class-number parity",
        vec![
            check(format!("product formula violations {product_bad} of {HILBERT_PAIRS}"), product_bad == 0),
            check(format!("local-global vs small solutions, mismatches {:?}", &oracle_bad[..oracle_bad.len().min(5)]), oracle_bad.is_empty()),
            check(format!("N(eps) = -1 failures {unit_bad:?}"), unit_bad.is_empty()),
            check(format!("even class numbers {class_bad:?}"), class_bad.is_empty()),
        ],
    );
}
