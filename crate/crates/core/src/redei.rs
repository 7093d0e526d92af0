//! Rédei symbols [a,b,c] ∈ μ₂.
//!
//! A conic solution (x,y,z) of x² = a·y² + b·z² gives α = 2(x + z√b) and β = x + y√a;
//! F = E(√(tα)) for E = Q(√a,√b) and a twist t ∈ Q*. The twist is chosen so that F/Q(√ab)
//! is minimally ramified, and the symbol is the Artin symbol of an ideal of norm |c|
//! (times an infinite prime when c < 0), evaluated prime by prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Mu2, Place};
use crate::error::{Error, Result};
use crate::quadfield::QuadElem;

const CONIC_BOX_LIMIT: i128 = 1_000_000;
const QUARTIC_CHECK_LIMIT: u64 = 200_000;

/// A triple of squarefree representatives and whether the symbol is defined on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedeiTriple {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub admissible: bool,
}

/// Why a triple is not admissible.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// (pair, place) with a nontrivial Hilbert symbol; pair is "ab", "ac" or "bc".
    pub hilbert_failures: Vec<(String, String)>,
    /// Primes dividing gcd(Δ(a), Δ(b), Δ(c)).
    pub gcd_primes: Vec<u64>,
}

impl AdmissibilityReport {
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for (pair, place) in &self.hilbert_failures {
            parts.push(format!("Hilbert symbol of {pair} is -1 at {place}"));
        }
        for p in &self.gcd_primes {
            parts.push(format!("{p} divides all three discriminants"));
        }
        parts.join("; ")
    }
}

/// A primitive integer solution of x² − a·y² − b·z² = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicSolution {
    pub x: i128,
    pub y: i128,
    pub z: i128,
}

/// One ramification verdict of the minimal-ramification certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamVerdict {
    /// Residue characteristic.
    pub prime: u64,
    /// Which condition: "odd-unramified", "unramified-at-2" or "conductor-2".
    pub condition: String,
    pub holds: bool,
    pub detail: String,
}

/// A twisted conic datum with its minimal-ramification certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinRamData {
    pub a: i64,
    pub b: i64,
    pub solution: ConicSolution,
    pub t: i64,
    /// t·2(x + z√b) as (x, y) coordinates over Q(√b).
    #[serde(with = "elem_serde")]
    pub alpha: QuadElem,
    /// t·(x + y√a) over Q(√a).
    #[serde(with = "elem_serde")]
    pub beta: QuadElem,
    pub certificate: Vec<RamVerdict>,
    /// Set when the local conductor-2 condition at 2 was the one exercised.
    pub conductor_two_case: bool,
}

/// The value of a Rédei symbol with the data used to compute it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RedeiCertificate {
    pub triple: RedeiTriple,
    /// Set when one argument is a square, in which case the symbol is +1 by convention.
    pub trivial_argument: bool,
    pub min_ram: Option<MinRamData>,
    /// (place, contribution) for each prime dividing c and for ∞ when c < 0.
    pub contributions: Vec<(String, Mu2)>,
    pub value: Mu2,
}

mod elem_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        x: String,
        y: String,
        d: i64,
    }

    pub fn serialize<S: Serializer>(e: &QuadElem, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr { x: e.x.to_string(), y: e.y.to_string(), d: e.d }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QuadElem, D::Error> {
        let r = Repr::deserialize(d)?;
        let parse = |s: &str| s.parse::<BigRational>().map_err(serde::de::Error::custom);
        Ok(QuadElem::new(parse(&r.x)?, parse(&r.y)?, r.d))
    }
}

fn sqfree(n: i64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidInput("zero is not a square class".into()));
    }
    Ok(arith::squarefree_part(n as i128)? as i64)
}

fn disc(d: i64) -> i128 {
    arith::quad_disc(d as i128)
}

/// Checks the pairwise Hilbert conditions and the discriminant gcd condition.
pub fn admissible(a: i64, b: i64, c: i64) -> Result<AdmissibilityReport> {
    let (a, b, c) = (sqfree(a)?, sqfree(b)?, sqfree(c)?);
    let mut rep = AdmissibilityReport::default();
    let places = arith::relevant_places(&[a as i128, b as i128, c as i128])?;
    for (name, x, y) in [("ab", a, b), ("ac", a, c), ("bc", b, c)] {
        for v in &places {
            if arith::hilbert(x as i128, y as i128, *v) == -1 {
                let place = match v {
                    Place::Finite(l) => l.to_string(),
                    Place::Infinite => "inf".to_string(),
                };
                rep.hilbert_failures.push((name.to_string(), place));
            }
        }
    }
    let g = disc(a).gcd(&disc(b)).gcd(&disc(c));
    if g != 1 {
        rep.gcd_primes = arith::factor(g)?.primes().map(|p| p as u64).collect();
    }
    rep.admissible = rep.hilbert_failures.is_empty() && rep.gcd_primes.is_empty();
    Ok(rep)
}

/// Smallest primitive solution of x² = a·y² + b·z² found by a box search of growing height.
pub fn solve_conic(a: i64, b: i64) -> Result<ConicSolution> {
    let (a, b) = (sqfree(a)?, sqfree(b)?);
    for v in arith::relevant_places(&[a as i128, b as i128])? {
        if arith::hilbert(a as i128, b as i128, v) == -1 {
            let place = match v {
                Place::Finite(l) => l.to_string(),
                Place::Infinite => "inf".into(),
            };
            return Err(Error::NotLocallySolvable { a, b, place });
        }
    }
    let (ai, bi) = (a as i128, b as i128);
    let mut h: i128 = 4;
    let mut lo: i128 = -1;
    loop {
        let mut best: Option<ConicSolution> = None;
        for y in 0..=h {
            for z in 0..=h {
                if y.max(z) <= lo || (y == 0 && z == 0) {
                    continue;
                }
                let s = ai * y * y + bi * z * z;
                if !arith::is_square_i128(s) {
                    continue;
                }
                let x = (s as f64).sqrt().round() as i128;
                let x = (x - 2..=x + 2).find(|&r| r >= 0 && r * r == s).unwrap();
                if x.gcd(&y).gcd(&z) != 1 {
                    continue;
                }
                let cand = ConicSolution { x, y, z };
                let key = |c: &ConicSolution| (c.x.abs(), c.y.abs(), c.z.abs());
                if best.as_ref().is_none_or(|b| key(&cand) < key(b)) {
                    best = Some(cand);
                }
            }
        }
        if let Some(s) = best {
            return Ok(s);
        }
        if h >= CONIC_BOX_LIMIT {
            return Err(Error::BudgetExceeded(format!("no conic solution for ({a},{b}) below {h}")));
        }
        lo = h;
        h *= 2;
    }
}

/// Valuation and unit residue of a nonzero element of Q(√d) under the ℓ-adic embedding
/// √d ↦ r, where r is the root with r ≡ `seed` (mod ℓ, or mod 4 when ℓ = 2).
fn split_embedding(e: &QuadElem, l: u64, seed: u64) -> (i64, BigInt) {
    let (x, y, dd) = e.integer_parts();
    let n = &x * &x - &y * &y * BigInt::from(e.d);
    let (vn, _) = arith::valuation(&n, l);
    let k = vn + 6;
    let modulus = BigInt::from(l).pow(k);
    let r = arith::hensel_sqrt(&BigInt::from(e.d), l, k + 1, seed);
    let z = (&x + &y * r).mod_floor(&modulus);
    let (vz, uz) = arith::valuation(&z, l);
    let (vd, ud) = arith::valuation(&dd, l);
    let m = BigInt::from(l).pow(k - vz);
    let unit = (uz * arith::inv_mod(&ud, &m).unwrap()).mod_floor(&m);
    (vz as i64 - vd as i64, unit)
}

fn residue_roots(d: i64, l: u64) -> Vec<u64> {
    if l == 2 {
        return vec![1, 3];
    }
    match arith::sqrt_mod(d as i128, l) {
        Ok(r) if r == 0 => vec![0],
        Ok(r) => vec![r, l - r],
        Err(_) => vec![],
    }
}

fn is_2adic_integral(e: &QuadElem) -> bool {
    let ok = |q: &BigRational| q.is_zero() || arith::valuation_q(q, 2) >= 0;
    ok(&e.trace()) && ok(&e.norm())
}

/// Completion of Q(√s) at its prime over 2 when that prime does not split.
struct TwoAdicQuad {
    s: i64,
    /// Uniformizer.
    pi: QuadElem,
    /// Residue degree.
    f: i64,
}

impl TwoAdicQuad {
    fn new(s: i64) -> Self {
        let (pi, f) = match s.rem_euclid(8) {
            5 => (QuadElem::from_ints(2, 0, s), 2),
            3 | 7 => (QuadElem::from_ints(1, 1, s), 1),
            2 | 6 => (QuadElem::from_ints(0, 1, s), 1),
            _ => panic!("2 splits in Q(sqrt({s}))"),
        };
        TwoAdicQuad { s, pi, f }
    }

    fn valuation(&self, w: &QuadElem) -> i64 {
        arith::valuation_q(&w.norm(), 2) / self.f
    }

    fn unit_part(&self, w: &QuadElem) -> (i64, QuadElem) {
        let v = self.valuation(w);
        let piv = if v >= 0 { self.pi.pow(v as u32) } else { self.pi.pow((-v) as u32).inv() };
        (v, w.div(&piv))
    }

    /// Whether u ≡ x² modulo the given modulus for some integral x.
    fn square_mod(&self, u: &QuadElem, modulus: &QuadElem) -> bool {
        let basis = if self.s.rem_euclid(4) == 1 {
            QuadElem::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), self.s)
        } else {
            QuadElem::from_ints(0, 1, self.s)
        };
        for m in 0..4 {
            for n in 0..4 {
                let x = QuadElem::from_ints(m, 0, self.s).add(&basis.scale(&arith::rat(n)));
                if is_2adic_integral(&u.sub(&x.mul(&x)).div(modulus)) {
                    return true;
                }
            }
        }
        false
    }

    /// L(√w)/L is unramified.
    fn unramified(&self, w: &QuadElem) -> bool {
        let (v, u) = self.unit_part(w);
        v % 2 == 0 && self.square_mod(&u, &QuadElem::from_ints(4, 0, self.s))
    }

    /// L(√w)/L has conductor dividing (2).
    fn conductor_two(&self, w: &QuadElem) -> bool {
        let (v, u) = self.unit_part(w);
        v % 2 == 0 && self.square_mod(&u, &self.pi.pow(3))
    }
}

/// L(√w)/L unramified at every prime of Q(√d) over 2 (L the completion there).
fn unramified_over_2(w: &QuadElem) -> bool {
    if w.d.rem_euclid(8) == 1 {
        [1u64, 3].iter().all(|&seed| {
            let (v, u) = split_embedding(w, 2, seed);
            v % 2 == 0 && (&u % 4u32) == BigInt::one()
        })
    } else {
        TwoAdicQuad::new(w.d).unramified(w)
    }
}

fn base_alpha(a: i64, b: i64, s: &ConicSolution) -> (QuadElem, QuadElem) {
    let alpha = QuadElem::from_ints(2 * s.x as i64, 2 * s.z as i64, b);
    let beta = QuadElem::from_ints(s.x as i64, s.y as i64, a);
    (alpha, beta)
}

/// Odd primes outside ΔaΔb at which α has odd valuation at some prime of Q(√b).
fn required_odd_twist(a: i64, b: i64, s: &ConicSolution, alpha: &QuadElem) -> Result<i64> {
    let dd = disc(a) * disc(b);
    let mut t = 1i64;
    if s.y == 0 {
        return Ok(1);
    }
    for l in arith::factor(s.y)?.primes() {
        let l = l as u64;
        if l == 2 || dd % l as i128 == 0 {
            continue;
        }
        let odd = match residue_roots(b, l).first() {
            Some(&r) => split_embedding(alpha, l, r).0 % 2 != 0,
            None => arith::valuation(&BigInt::from(s.y), l).0 % 2 == 1,
        };
        if odd {
            t *= l as i64;
        }
    }
    Ok(t)
}

fn twist_candidates(a: i64, b: i64, t_req: i64) -> Result<Vec<i64>> {
    let mut gens = vec![-1i64, 2];
    let dd = disc(a) * disc(b);
    for p in arith::factor(dd)?.primes() {
        if p != 2 {
            gens.push(p as i64);
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << gens.len()) {
        let mut t = t_req;
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                t *= g;
            }
        }
        out.push(t);
    }
    out.sort_by_key(|&t| (t.abs(), t < 0));
    Ok(out)
}

/// Checks the conditions at 2 for the twist t, returning the verdicts (empty if none apply).
fn two_adic_verdicts(a: i64, b: i64, alpha: &QuadElem, beta: &QuadElem) -> (Vec<RamVerdict>, bool) {
    let (da, db) = (disc(a).rem_euclid(8), disc(b).rem_euclid(8));
    let odd = da % 2 == 1 && db % 2 == 1;
    let mut out = Vec::new();
    if odd || da == 1 || db == 1 {
        let (elem, name) = if da == 1 || (odd && db != 1) { (alpha, "alpha") } else { (beta, "beta") };
        let holds = unramified_over_2(elem);
        out.push(RamVerdict {
            prime: 2,
            condition: "unramified-at-2".into(),
            holds,
            detail: format!("square class of t*{name} in the completion of Q(sqrt({})) at 2", elem.d),
        });
        return (out, false);
    }
    let pair = [da, db];
    if pair.contains(&4) && pair.contains(&5) {
        let (elem, s) = if db == 4 { (alpha, b) } else { (beta, a) };
        let holds = TwoAdicQuad::new(s).conductor_two(elem);
        out.push(RamVerdict {
            prime: 2,
            condition: "conductor-2".into(),
            holds,
            detail: format!("local extension over Q2(sqrt({s})) has conductor dividing 2"),
        });
        return (out, true);
    }
    (out, false)
}

fn build_min_ram(a: i64, b: i64, sol: ConicSolution, t: i64) -> Result<MinRamData> {
    let (alpha0, beta0) = base_alpha(a, b, &sol);
    let tq = arith::rat(t);
    let alpha = alpha0.scale(&tq);
    let beta = beta0.scale(&tq);
    let mut certificate = Vec::new();
    // Odd primes outside ΔaΔb: valuations of tα at primes of Q(√b) must be even.
    let dd = disc(a) * disc(b);
    let mut odd_primes: Vec<u64> = Vec::new();
    if sol.y != 0 {
        odd_primes.extend(arith::factor(sol.y)?.primes().map(|p| p as u64));
    }
    odd_primes.extend(arith::factor(t as i128)?.primes().map(|p| p as u64));
    odd_primes.retain(|&l| l != 2 && dd % l as i128 != 0);
    odd_primes.sort_unstable();
    odd_primes.dedup();
    for l in odd_primes {
        let roots = residue_roots(b, l);
        let holds = if roots.is_empty() {
            arith::valuation_q(&alpha.norm(), l) % 4 == 0
        } else {
            roots.iter().all(|&r| split_embedding(&alpha, l, r).0 % 2 == 0)
        };
        certificate.push(RamVerdict {
            prime: l,
            condition: "odd-unramified".into(),
            holds,
            detail: "even valuation of t*alpha at primes over this prime".into(),
        });
    }
    let (two, case_c) = two_adic_verdicts(a, b, &alpha, &beta);
    certificate.extend(two);
    Ok(MinRamData { a, b, solution: sol, t, alpha, beta, certificate, conductor_two_case: case_c })
}

impl MinRamData {
    pub fn certified(&self) -> bool {
        self.certificate.iter().all(|v| v.holds)
    }
}

/// All twists t (from the finite candidate set) making F_t minimally ramified.
pub fn valid_twists(a: i64, b: i64, sol: ConicSolution) -> Result<Vec<MinRamData>> {
    let (a, b) = (sqfree(a)?, sqfree(b)?);
    let (alpha0, _) = base_alpha(a, b, &sol);
    let t_req = required_odd_twist(a, b, &sol, &alpha0)?;
    let mut out = Vec::new();
    for t in twist_candidates(a, b, t_req)? {
        let mr = build_min_ram(a, b, sol, t)?;
        if mr.certified() {
            out.push(mr);
        }
    }
    Ok(out)
}

/// The first twist, in order of increasing |t| with t > 0 first, that is minimally ramified.
pub fn minimal_ramification_twist(a: i64, b: i64, sol: ConicSolution) -> Result<MinRamData> {
    let (a, b) = (sqfree(a)?, sqfree(b)?);
    let (alpha0, _) = base_alpha(a, b, &sol);
    let t_req = required_odd_twist(a, b, &sol, &alpha0)?;
    for t in twist_candidates(a, b, t_req)? {
        let mr = build_min_ram(a, b, sol, t)?;
        if mr.certified() {
            return Ok(mr);
        }
    }
    Err(Error::TwistSearchExhausted { a, b })
}

fn legendre_i(n: &BigInt, q: u64) -> Mu2 {
    arith::legendre_big(n, q)
}

/// Contribution of one prime q | c (q = 0 encodes ∞).
pub fn artin_contribution(mr: &MinRamData, q: u64) -> Result<Mu2> {
    let (a, b) = (mr.a, mr.b);
    if q == 0 {
        if a < 0 || b < 0 {
            // Q(√ab) imaginary: the infinite prime is complex.
            return Ok(1);
        }
        return Ok(mr.alpha.real_sign(1));
    }
    if q == 2 {
        // One of a, b is ≡ 1 mod 8; embed through it.
        let (gamma, other) = if b.rem_euclid(8) == 1 { (&mr.alpha, a) } else { (&mr.beta, b) };
        if gamma.d.rem_euclid(8) != 1 {
            return Err(Error::NotDefined(format!("2 does not split in Q(sqrt({a})) or Q(sqrt({b}))")));
        }
        let (v, u) = split_embedding(gamma, 2, 1);
        let cls = arith::SquareClass::of_rational(
            &(arith::rat(2).pow(v as i32) * BigRational::from_integer(u.clone())),
            arith::LocalField::Qp(2),
        );
        if other.rem_euclid(8) == 1 {
            if v % 2 != 0 || (&u % 4u32) != BigInt::one() {
                return Err(Error::InternalInconsistency(format!("ramified at 2 for ({a},{b})")));
            }
            return Ok(if cls.is_trivial() { 1 } else { -1 });
        }
        // E is completed at 2 to Q2(√other): γ is a square there iff its class is 1 or other's.
        let oc = arith::SquareClass::of_int(other as i128, arith::LocalField::Qp(2));
        let approx = QuadElem::rational(arith::rat(2).pow(v as i32) * BigRational::from_integer(u), other);
        if other.rem_euclid(8) != 5 && !TwoAdicQuad::new(other).unramified(&approx) {
            return Err(Error::InternalInconsistency(format!("ramified at 2 for ({a},{b})")));
        }
        return Ok(if cls.is_trivial() || cls == oc { 1 } else { -1 });
    }
    let qi = q as i64;
    let (gamma, other) = if b % qi != 0 { (&mr.alpha, a) } else { (&mr.beta, b) };
    let d = gamma.d;
    let roots = residue_roots(d, q);
    let Some(&r) = roots.first() else {
        return Err(Error::NotDefined(format!("{q} does not split in Q(sqrt({d}))")));
    };
    let (v, u) = split_embedding(gamma, q, r);
    let mut val = legendre_i(&u, q);
    if other % qi == 0 {
        let m = (a as i128 * b as i128) / q as i128;
        if v.rem_euclid(2) == 1 {
            val *= arith::jacobi(m, q as u128);
        }
    } else if v % 2 != 0 {
        return Err(Error::InternalInconsistency(format!("odd valuation at {q} for ({a},{b})")));
    } else if q <= QUARTIC_CHECK_LIMIT && v == 0 {
        let quartic = quartic_has_root(gamma, q);
        if quartic != Some(val == 1) && quartic.is_some() {
            return Err(Error::InternalInconsistency(format!("quartic cross-check failed at {q}")));
        }
    }
    Ok(val)
}

/// Whether X⁴ − 2uX² + (u² − d·v²) has a root mod q, for γ = u + v√d integral at q.
fn quartic_has_root(gamma: &QuadElem, q: u64) -> Option<bool> {
    let qb = BigInt::from(q);
    let red = |x: &BigRational| -> Option<u64> {
        let inv = arith::inv_mod(x.denom(), &qb)?;
        (x.numer() * inv).mod_floor(&qb).to_u64()
    };
    let u = red(&gamma.x)? as u128;
    let v = red(&gamma.y)? as u128;
    let qq = q as u128;
    let d = (gamma.d as i128).rem_euclid(q as i128) as u128;
    let c0 = (u * u % qq + qq - d * (v * v % qq) % qq) % qq;
    if c0 == 0 {
        return None;
    }
    let two_u = 2 * u % qq;
    Some((0..qq).any(|x| {
        let x2 = x * x % qq;
        (x2 * x2 % qq + qq - two_u * x2 % qq + c0) % qq == 0
    }))
}

fn contributions(mr: &MinRamData, c: i64) -> Result<Vec<(String, Mu2)>> {
    let mut out = Vec::new();
    for q in arith::factor(c as i128)?.primes() {
        out.push((q.to_string(), artin_contribution(mr, q as u64)?));
    }
    if c < 0 {
        out.push(("inf".to_string(), artin_contribution(mr, 0)?));
    }
    Ok(out)
}

fn triple_of(a: i64, b: i64, c: i64) -> Result<(i64, i64, i64)> {
    Ok((sqfree(a)?, sqfree(b)?, sqfree(c)?))
}

/// Evaluates [a,b,c] using the given conic solution for (a, b).
pub fn redei_symbol_with_solution(a: i64, b: i64, c: i64, sol: ConicSolution) -> Result<RedeiCertificate> {
    let (a, b, c) = triple_of(a, b, c)?;
    let rep = admissible(a, b, c)?;
    if a == 1 || b == 1 || c == 1 {
        return Ok(trivial_certificate(a, b, c, rep.admissible));
    }
    if !rep.admissible {
        return Err(Error::NotDefined(rep.summary()));
    }
    if sol.x * sol.x != a as i128 * sol.y * sol.y + b as i128 * sol.z * sol.z || (sol.y == 0 && sol.z == 0) {
        return Err(Error::InvalidInput(format!("{sol:?} does not solve x^2 = {a}y^2 + {b}z^2")));
    }
    let mr = minimal_ramification_twist(a, b, sol)?;
    let contribs = contributions(&mr, c)?;
    let value = contribs.iter().map(|(_, v)| *v).product();
    Ok(RedeiCertificate {
        triple: RedeiTriple { a, b, c, admissible: true },
        trivial_argument: false,
        min_ram: Some(mr),
        contributions: contribs,
        value,
    })
}

fn trivial_certificate(a: i64, b: i64, c: i64, admissible: bool) -> RedeiCertificate {
    RedeiCertificate {
        triple: RedeiTriple { a, b, c, admissible },
        trivial_argument: true,
        min_ram: None,
        contributions: vec![],
        value: 1,
    }
}

/// Evaluates the Rédei symbol [a,b,c].
pub fn redei_symbol(a: i64, b: i64, c: i64) -> Result<RedeiCertificate> {
    let (a, b, c) = triple_of(a, b, c)?;
    if a == 1 || b == 1 || c == 1 {
        return Ok(trivial_certificate(a, b, c, true));
    }
    let rep = admissible(a, b, c)?;
    if !rep.admissible {
        return Err(Error::NotDefined(rep.summary()));
    }
    let sol = solve_conic(a, b)?;
    redei_symbol_with_solution(a, b, c, sol)
}

/// Value of [a,b,c].
pub fn redei(a: i64, b: i64, c: i64) -> Result<Mu2> {
    Ok(redei_symbol(a, b, c)?.value)
}

/// Values of [a,b,c] over every minimally ramified twist of the given solution; all must agree.
pub fn values_over_twists(a: i64, b: i64, c: i64, sol: ConicSolution) -> Result<Vec<Mu2>> {
    let (a, b, c) = triple_of(a, b, c)?;
    let mut out = Vec::new();
    for mr in valid_twists(a, b, sol)? {
        out.push(contributions(&mr, c)?.iter().map(|(_, v)| *v).product());
    }
    Ok(out)
}

/// Other primitive solutions of the conic, from a box search, for solution-independence checks.
pub fn conic_solutions(a: i64, b: i64, limit: i128, max: usize) -> Vec<ConicSolution> {
    let (ai, bi) = (a as i128, b as i128);
    let mut out = Vec::new();
    for y in 0..=limit {
        for z in 0..=limit {
            if y == 0 && z == 0 {
                continue;
            }
            let s = ai * y * y + bi * z * z;
            if !arith::is_square_i128(s) {
                continue;
            }
            let x = (s as f64).sqrt().round() as i128;
            let Some(x) = (x - 2..=x + 2).find(|&r| r >= 0 && r * r == s) else { continue };
            if x.gcd(&y).gcd(&z) != 1 {
                continue;
            }
            for (sy, sz) in [(1, 1), (1, -1)] {
                let sol = ConicSolution { x, y: sy * y, z: sz * z };
                if !out.contains(&sol) {
                    out.push(sol);
                }
            }
            if out.len() >= max {
                return out;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        let r = admissible(2, 2, -1).unwrap();
        assert!(!r.admissible);
        assert_eq!(r.gcd_primes, vec![2]);
        assert!(admissible(2, 2, -23).unwrap().admissible);
    }

    #[test]
    fn conic_examples() {
        assert_eq!(solve_conic(2, 7).unwrap(), ConicSolution { x: 3, y: 1, z: 1 });
        assert_eq!(solve_conic(1, 5).unwrap(), ConicSolution { x: 1, y: 1, z: 0 });
        assert_eq!(solve_conic(2, -1).unwrap(), ConicSolution { x: 1, y: 1, z: 1 });
        assert!(matches!(solve_conic(3, 2), Err(Error::NotLocallySolvable { .. })));
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(redei(2, 2, -23).unwrap(), -1);
        assert_eq!(redei(2, 2, -191).unwrap(), 1);
        assert_eq!(redei(2, 2, -31).unwrap(), 1);
        assert_eq!(redei(2, 2, 1).unwrap(), 1);
        assert_eq!(redei(2, -1, 241).unwrap(), -1);
        assert!(matches!(redei(2, 2, -1), Err(Error::NotDefined(_))));
    }

    #[test]
    fn two_two_p_law() {
        for p in arith::primes_in(3, 600) {
            if p % 8 == 1 {
                let v = redei(2, 2, p as i64).unwrap();
                assert_eq!(v == 1, p % 16 == 1, "p = {p}");
            }
        }
    }

    #[test]
    fn permutations_agree_small() {
        for p in arith::primes_in(3, 300) {
            if p % 8 != 7 {
                continue;
            }
            let c = -(p as i64);
            let v = redei(2, 2, c).unwrap();
            assert_eq!(redei(2, c, 2).unwrap(), v, "p={p}");
            assert_eq!(redei(c, 2, 2).unwrap(), v, "p={p}");
        }
    }

    #[test]
    fn twists_agree() {
        for (a, b, c) in [(2i64, 2i64, -23i64), (2, -1, 241), (2, 17, 17), (3, 6, -191)] {
            let sol = solve_conic(a, b).unwrap();
            let vals = values_over_twists(a, b, c, sol).unwrap();
            assert!(!vals.is_empty());
            assert!(vals.iter().all(|&v| v == vals[0]), "({a},{b},{c}) {vals:?}");
        }
    }
}
