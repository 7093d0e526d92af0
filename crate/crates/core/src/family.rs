//! Per-prime pipeline for C_p: y² = x(x²−p²)(x²−4p²): point counts and torsion, splitting
//! in the two quartic fields, Rédei symbols, Selmer dimensions and the resulting rank and
//! Sha[2] conclusions.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Mu2};
use crate::error::{Error, Result};
use crate::localdescent::SplitModel;
use crate::points;
use crate::redei;
use crate::selmer;

/// Point counts of a genus-2 curve over F_q and F_q², and the Jacobian order they give.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaCount {
    pub q: u64,
    pub points_on_c: u64,
    pub points_on_c_q2: u64,
    pub jacobian_order: u64,
}

fn check_good(model: &SplitModel, q: u64) -> Result<()> {
    if !arith::is_prime(q as u128) {
        return Err(Error::InvalidInput(format!("{q} is not prime; only prime fields are counted")));
    }
    if model.bad_primes().contains(&q) {
        return Err(Error::BadReduction(q));
    }
    Ok(())
}

/// Sum of the quadratic character of f over F_q.
fn char_sum_q(model: &SplitModel, q: u64) -> i64 {
    let qi = q as i128;
    (0..q as i128)
        .map(|x| {
            let v = model.roots.iter().fold(1i128, |acc, &a| acc * (x - a as i128).rem_euclid(qi) % qi);
            arith::jacobi(v, q as u128) as i64
        })
        .sum()
}

/// Sum of the quadratic character of f over F_q² = F_q(√n); a nonzero z is a square there
/// iff its norm is a square in F_q.
fn char_sum_q2(model: &SplitModel, q: u64) -> i64 {
    let qi = q as i128;
    let n = arith::least_nonresidue(q) as i128;
    let mul = |(a, b): (i128, i128), (c, d): (i128, i128)| ((a * c + n * b % qi * d) % qi, (a * d + b * c) % qi);
    let mut s = 0i64;
    for a in 0..qi {
        for b in 0..qi {
            let mut v = (1i128, 0i128);
            for &r in &model.roots {
                v = mul(v, ((a - r as i128).rem_euclid(qi), b));
            }
            let norm = (v.0 * v.0 - n * (v.1 * v.1 % qi)).rem_euclid(qi);
            s += if v == (0, 0) { 0 } else { arith::jacobi(norm, q as u128) as i64 };
        }
    }
    s
}

/// #C(F_q) for y² = f(x) with f of odd degree (one point at infinity).
pub fn count_points(model: &SplitModel, q: u64) -> Result<u64> {
    check_good(model, q)?;
    Ok((q as i64 + 1 + char_sum_q(model, q)) as u64)
}

/// #C(F_q), #C(F_q²) and #J(F_q) = (N₁² + N₂)/2 − q for a genus-2 model.
pub fn count_jacobian(model: &SplitModel, q: u64) -> Result<ZetaCount> {
    if model.genus() != 2 {
        return Err(Error::InvalidInput("Jacobian order formula needs genus 2".into()));
    }
    check_good(model, q)?;
    let n1 = q as i64 + 1 + char_sum_q(model, q);
    let n2 = (q * q) as i64 + 1 + char_sum_q2(model, q);
    let j = (n1 * n1 + n2) / 2 - q as i64;
    let sq = (q as f64).sqrt();
    let (lo, hi) = ((sq - 1.0).powi(4), (sq + 1.0).powi(4));
    if (j as f64) < lo - 1e-9 || (j as f64) > hi + 1e-9 {
        return Err(Error::InternalInconsistency(format!("#J(F_{q}) = {j} violates the Weil bounds")));
    }
    Ok(ZetaCount { q, points_on_c: n1 as u64, points_on_c_q2: n2 as u64, jacobian_order: j as u64 })
}

/// Rational torsion of J_p, certified by reduction at odd primes of good reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionStructure {
    /// e.g. "(Z/2)^4".
    pub group: String,
    /// gcd of the Jacobian orders below; the torsion order divides it.
    pub order_bound: u64,
    pub counts: Vec<ZetaCount>,
    pub certified: bool,
}

/// J_p(Q)_tors: the 16 rational 2-torsion points inject into every J_p(F_q), q odd and good,
/// so the gcd of #J_p(F_q) being 16 pins the torsion to (Z/2)⁴.
pub fn torsion_structure(p: u64) -> Result<TorsionStructure> {
    let model = SplitModel::scaled(p as i64);
    let mut g = 0u64;
    let mut counts = Vec::new();
    for q in arith::primes_in(5, 200) {
        if q == p {
            continue;
        }
        let c = count_jacobian(&model, q)?;
        g = g.gcd(&c.jacobian_order);
        counts.push(c);
        if g == 16 {
            break;
        }
    }
    let certified = g == 16;
    Ok(TorsionStructure {
        group: if certified { "(Z/2)^4".into() } else { format!("(Z/2)^4 of order dividing {g}") },
        order_bound: g,
        counts,
        certified,
    })
}

/// The two quartic fields whose splitting governs the theorems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuarticField {
    /// Q(⁴√2), minimal polynomial x⁴ − 2.
    FourthRootOfTwo,
    /// Q(√(1+√3)), minimal polynomial x⁴ − 2x² − 2.
    SqrtOnePlusSqrtThree,
}

impl QuarticField {
    pub fn name(&self) -> &'static str {
        match self {
            QuarticField::FourthRootOfTwo => "Q(2^(1/4))",
            QuarticField::SqrtOnePlusSqrtThree => "Q(sqrt(1+sqrt(3)))",
        }
    }

    fn roots_mod(&self, p: u64) -> usize {
        let p = p as u128;
        (0..p)
            .filter(|&x| {
                let x2 = x * x % p;
                let x4 = x2 * x2 % p;
                let v = match self {
                    QuarticField::FourthRootOfTwo => (x4 + p - 2 % p) % p,
                    QuarticField::SqrtOnePlusSqrtThree => (x4 + 2 * (p - x2) + p - 2 % p) % p,
                };
                v == 0
            })
            .count()
    }
}

/// Whether p splits completely, decided both by Rédei symbols and by counting roots of the
/// minimal polynomial mod p.
pub fn splits_in_quartic(p: u64, field: QuarticField) -> Result<bool> {
    let pi = p as i64;
    let by_poly = field.roots_mod(p) == 4;
    let by_symbol = match field {
        QuarticField::FourthRootOfTwo => {
            if p % 8 != 1 {
                return Err(Error::InvalidInput(format!("{p} is not 1 mod 8")));
            }
            let a = redei::redei(2, -2, pi)?;
            let b = redei::redei(2, 2, pi)? * redei::redei(2, -1, pi)?;
            if a != b {
                return Err(Error::InternalInconsistency(format!("[2,-2,{p}] is not [2,2,{p}][2,-1,{p}]")));
            }
            a == 1
        }
        QuarticField::SqrtOnePlusSqrtThree => redei::redei(3, -2, pi)? == 1,
    };
    if by_poly != by_symbol {
        return Err(Error::InternalInconsistency(format!(
            "splitting of {p} in {}: symbol says {by_symbol}, polynomial says {by_poly}",
            field.name()
        )));
    }
    Ok(by_symbol)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classes {
    pub mod8: u64,
    pub mod16: u64,
    pub mod24: u64,
    pub mod48: u64,
}

/// dim S²(J/Q(√(sign·p))) as used by a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadDim {
    pub d: i64,
    pub dim: usize,
}

/// Everything the pipeline concludes about J_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub classes: Classes,
    pub symbols: BTreeMap<String, Mu2>,
    pub dim_s2_jp_q: usize,
    pub dim_s2_j_quad: Option<QuadDim>,
    pub rank_lower: usize,
    pub rank_upper: usize,
    /// Exact dim Sha(J_p/Q)[2] when the rank is determined.
    pub sha2_dim: Option<usize>,
    /// Interval for dim Sha[2] implied by the rank interval.
    pub sha2_range: (usize, usize),
    pub torsion: TorsionStructure,
    /// Descriptive tags of the results whose hypotheses p satisfies.
    pub theorem_applied: Vec<String>,
    /// Conclusions that hold only under the stated assumption.
    pub conditional: Vec<String>,
    pub quartic_splittings: BTreeMap<String, bool>,
    /// Number of rational points of C_p when it is determined.
    pub rational_points: Option<usize>,
    pub notes: Vec<String>,
}

impl PrimeReport {
    pub fn rank(&self) -> Option<usize> {
        (self.rank_lower == self.rank_upper).then_some(self.rank_lower)
    }
}

fn collect_symbols(p: i64) -> BTreeMap<String, Mu2> {
    let mut out = BTreeMap::new();
    for (a, b, c) in [(2, 2, p), (2, 2, -p), (2, -1, p), (3, 6, p), (3, 6, -p), (3, -2, p)] {
        if let Ok(v) = redei::redei(a, b, c) {
            out.insert(format!("[{a},{b},{c}]"), v);
        }
    }
    out
}

/// Sign of the quadratic field whose Selmer group bounds the rank: +1 for p ≡ 1 mod 8,
/// −1 for p ≡ 7 mod 8 (2 splits and the class number is odd), none otherwise.
pub fn quad_sign(p: u64) -> Option<i64> {
    match p % 8 {
        1 => Some(1),
        7 => Some(-1),
        _ => None,
    }
}

/// min(dim S²(J_p/Q), dim S²(J/Q(√±p))) − 4, the quadratic field chosen by [`quad_sign`].
pub fn rank_upper_bound(p: u64) -> Result<usize> {
    let mut b = selmer::selmer_dim_jp_over_q(p)? - 4;
    if let Some(s) = quad_sign(p) {
        b = b.min(selmer::selmer_dim_j_over_quad(p, s)?.dim - 4);
    }
    Ok(b)
}

/// Options for [`report_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadChoice {
    Auto,
    Sign(i64),
    Skip,
}

pub fn report(p: u64) -> Result<PrimeReport> {
    report_with(p, QuadChoice::Auto)
}

pub fn report_with(p: u64, quad: QuadChoice) -> Result<PrimeReport> {
    if p <= 3 || !arith::is_prime(p as u128) {
        return Err(Error::InvalidInput(format!("{p} is not a prime > 3")));
    }
    let pi = p as i64;
    let classes = Classes { mod8: p % 8, mod16: p % 16, mod24: p % 24, mod48: p % 48 };
    let symbols = collect_symbols(pi);
    let dim_q = selmer::selmer_dim_jp_over_q(p)?;
    let mut notes = Vec::new();
    let sign = match quad {
        QuadChoice::Auto => quad_sign(p),
        QuadChoice::Sign(s) => Some(s),
        QuadChoice::Skip => None,
    };
    let dim_quad = match sign {
        Some(s) => {
            let r = selmer::selmer_dim_j_over_quad(p, s)?;
            notes.extend(r.notes.iter().filter(|n| n.contains("outside")).cloned());
            Some(QuadDim { d: r.d, dim: r.dim })
        }
        None => None,
    };
    let mut rank_upper = dim_q - 4;
    if let Some(q) = &dim_quad {
        // rank J(Q) = 0, so rank J_p(Q) = rank J(K) ≤ dim S²(J/K) − 4.
        rank_upper = rank_upper.min(q.dim - 4);
    }
    let divisors = points::known_divisors(p);
    let mut rank_lower = 0;
    if !divisors.is_empty() {
        let model = SplitModel::scaled(pi);
        let images: Vec<Vec<num_bigint::BigInt>> =
            divisors.iter().map(|d| points::delta_mumford(d, &model)).collect::<Result<_>>()?;
        rank_lower = points::rank_lower_bound(&images, &selmer::torsion_delta(&model))?;
        notes.push(format!("rank lower bound from {} explicit divisors", divisors.len()));
    }
    if rank_lower > rank_upper {
        return Err(Error::InternalInconsistency(format!("rank bounds {rank_lower} > {rank_upper}")));
    }
    let torsion = torsion_structure(p)?;

    let mut quartic_splittings = BTreeMap::new();
    let mut split2 = None;
    let mut split3 = None;
    if p % 8 == 1 {
        let s = splits_in_quartic(p, QuarticField::FourthRootOfTwo)?;
        quartic_splittings.insert(QuarticField::FourthRootOfTwo.name().to_string(), s);
        split2 = Some(s);
    }
    if p % 24 == 1 {
        let s = splits_in_quartic(p, QuarticField::SqrtOnePlusSqrtThree)?;
        quartic_splittings.insert(QuarticField::SqrtOnePlusSqrtThree.name().to_string(), s);
        split3 = Some(s);
    }

    let mut theorem_applied = Vec::new();
    let mut conditional = Vec::new();
    let mut needs_quad_four = false;
    match p % 24 {
        7 => theorem_applied.push("7 mod 24: dim S2(J_p/Q) = 4, so rank 0 and Sha[2] = 0".to_string()),
        5 | 11 | 13 | 19 => conditional.push(
            "assumes Sha finite: dim Sha[2] even, so rank is odd and equals 1".to_string(),
        ),
        23 if p % 48 == 23 => {
            theorem_applied.push("23 mod 48: [2,2,-p] = -1 forces dim S2(J/Q(sqrt(-p))) = 4".into());
            needs_quad_four = true;
        }
        17 if split2 == Some(false) => {
            theorem_applied.push("17 mod 24, not split in Q(2^(1/4)): dim S2(J/Q(sqrt(p))) = 4".into());
            needs_quad_four = true;
        }
        1 => {
            let (s2, s3) = (split2.unwrap(), split3.unwrap());
            let tag = if s2 && !s3 {
                Some("1 mod 24 (a): split in Q(2^(1/4)), not in Q(sqrt(1+sqrt(3)))")
            } else if p % 48 == 1 && s3 && !s2 {
                Some("1 mod 24 (b): 1 mod 48, split in Q(sqrt(1+sqrt(3))), not in Q(2^(1/4))")
            } else if p % 48 == 25 && !s2 && !s3 {
                Some("1 mod 24 (c): 25 mod 48, split in neither quartic field")
            } else {
                None
            };
            if let Some(t) = tag {
                theorem_applied.push(t.to_string());
                needs_quad_four = true;
            }
        }
        _ => {}
    }
    if needs_quad_four {
        match &dim_quad {
            Some(q) if q.dim == 4 => {}
            Some(q) => {
                return Err(Error::InternalInconsistency(format!(
                    "hypothesis matched but dim S2(J/Q(sqrt({}))) = {}",
                    q.d, q.dim
                )))
            }
            None => notes.push("quadratic Selmer group not computed; theorem not cross-checked".into()),
        }
    }
    if theorem_applied.is_empty() && conditional.is_empty() {
        notes.push("no theorem covers this prime; rank and Sha[2] left as intervals".into());
    }

    let sha2_range = (dim_q - 4 - rank_upper, dim_q - 4 - rank_lower);
    let sha2_dim = (rank_lower == rank_upper).then_some(dim_q - 4 - rank_lower);
    if let Some(s) = sha2_dim {
        if s % 2 != 0 {
            return Err(Error::InternalInconsistency(format!("dim Sha[2] = {s} is odd")));
        }
    }
    let rational_points = if rank_upper == 0 && torsion.certified {
        Some(6)
    } else if p == 241 {
        points::weierstrass_only(p).ok().filter(|r| r.complete).map(|r| r.points.len())
    } else {
        None
    };
    Ok(PrimeReport {
        p,
        classes,
        symbols,
        dim_s2_jp_q: dim_q,
        dim_s2_j_quad: dim_quad,
        rank_lower,
        rank_upper,
        sha2_dim,
        sha2_range,
        torsion,
        theorem_applied,
        conditional,
        quartic_splittings,
        rational_points,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct count over F_q² with explicit field elements, independent of the norm trick.
    fn brute_q2(model: &SplitModel, q: u64) -> u64 {
        let qi = q as i64;
        let n = arith::least_nonresidue(q) as i64;
        let mul = |(a, b): (i64, i64), (c, d): (i64, i64)| ((a * c + n * b * d).rem_euclid(qi), (a * d + b * c).rem_euclid(qi));
        let mut squares = std::collections::HashMap::new();
        for a in 0..qi {
            for b in 0..qi {
                *squares.entry(mul((a, b), (a, b))).or_insert(0u64) += 1;
            }
        }
        let mut count = 1;
        for a in 0..qi {
            for b in 0..qi {
                let mut v = (1, 0);
                for &r in &model.roots {
                    v = mul(v, ((a - r).rem_euclid(qi), b));
                }
                count += squares.get(&v).copied().unwrap_or(0);
            }
        }
        count
    }

    #[test]
    fn counts_match_brute_force() {
        for (p, q) in [(7i64, 5u64), (5, 7), (5, 11), (11, 13), (241, 7)] {
            let m = SplitModel::scaled(p);
            let z = count_jacobian(&m, q).unwrap();
            assert_eq!(z.points_on_c_q2, brute_q2(&m, q), "p={p} q={q}");
        }
    }

    #[test]
    fn jacobian_orders() {
        assert_eq!(count_jacobian(&SplitModel::scaled(7), 5).unwrap().jacobian_order, 16);
        assert_eq!(count_jacobian(&SplitModel::scaled(5), 7).unwrap().jacobian_order, 48);
        assert_eq!(count_jacobian(&SplitModel::scaled(5), 11).unwrap().jacobian_order, 128);
        assert_eq!(count_jacobian(&SplitModel::scaled(7), 7), Err(Error::BadReduction(7)));
        assert!(count_jacobian(&SplitModel::scaled(7), 3).is_err());
    }

    #[test]
    fn quartic_examples() {
        assert!(splits_in_quartic(73, QuarticField::FourthRootOfTwo).unwrap());
        assert!(splits_in_quartic(337, QuarticField::FourthRootOfTwo).unwrap());
        assert!(!splits_in_quartic(337, QuarticField::SqrtOnePlusSqrtThree).unwrap());
        assert!(!splits_in_quartic(17, QuarticField::FourthRootOfTwo).unwrap());
    }

    #[test]
    fn report_seven() {
        let r = report(7).unwrap();
        assert_eq!(r.rank(), Some(0));
        assert_eq!(r.sha2_dim, Some(0));
        assert_eq!(r.rational_points, Some(6));
    }
}
