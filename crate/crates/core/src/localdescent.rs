//! Local images of the descent map for y² = f(x), f a quintic with five rational roots.
//!
//! A point with x-coordinate ξ maps to (ξ − α₁, …, ξ − α₅) in ⊕₅ K_v*/K_v*²; Weierstrass
//! points use the completion rule, conjugate pairs over a quadratic extension map to norms.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, LocalField, SquareClass};
use crate::error::{Error, Result};
use crate::f2;
use crate::quadfield::QuadElem;

/// Default number of candidate x-coordinates tried per search level.
pub const DEFAULT_BUDGET: usize = 10_000;

static BUDGET: AtomicUsize = AtomicUsize::new(DEFAULT_BUDGET);

/// Budget used by [`local_image`] and the Selmer computations built on it.
pub fn default_budget() -> usize {
    BUDGET.load(Ordering::Relaxed)
}

/// Process-wide override of [`default_budget`].
pub fn set_default_budget(budget: usize) {
    BUDGET.store(budget.max(1), Ordering::Relaxed);
}

/// y² = (x − α₁)⋯(x − α_n), n odd, with integer roots in increasing order.
///
/// The genus-2 curves of the family use n = 5; the elliptic quotients use n = 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitModel {
    pub roots: Vec<i64>,
}

impl SplitModel {
    pub fn new(roots: &[i64]) -> Result<Self> {
        if roots.len() % 2 == 0 || roots.len() < 3 {
            return Err(Error::InvalidInput(format!("need an odd number (≥ 3) of roots, got {}", roots.len())));
        }
        if roots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!("roots {roots:?} must be strictly increasing")));
        }
        Ok(SplitModel { roots: roots.to_vec() })
    }

    /// Roots (−2c, −c, 0, c, 2c). With c = 1 this is C, with c = p it is C_p.
    pub fn scaled(c: i64) -> Self {
        assert!(c > 0, "scale must be positive");
        SplitModel { roots: vec![-2 * c, -c, 0, c, 2 * c] }
    }

    pub fn base() -> Self {
        Self::scaled(1)
    }

    /// The c with roots (−2c, −c, 0, c, 2c), if the model has that shape.
    pub fn scale(&self) -> Option<i64> {
        let c = *self.roots.get(3)?;
        (c > 0 && *self == Self::scaled(c)).then_some(c)
    }

    /// Number of roots.
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn genus(&self) -> usize {
        (self.roots.len() - 1) / 2
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.roots.iter().fold(BigRational::one(), |acc, &a| acc * (x - arith::rat(a)))
    }

    pub fn eval_quad(&self, x: &QuadElem) -> QuadElem {
        self.roots.iter().fold(QuadElem::one(x.d), |acc, &a| {
            acc.mul(&x.sub(&QuadElem::from_ints(a, 0, x.d)))
        })
    }

    /// Primes dividing 2·disc(f).
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut ps = vec![2u64];
        let n = self.degree();
        for i in 0..n {
            for j in i + 1..n {
                let diff = (self.roots[j] - self.roots[i]) as i128;
                for q in arith::factor(diff).expect("root difference factors").primes() {
                    ps.push(q as u64);
                }
            }
        }
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

impl fmt::Display for SplitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = ")?;
        for &a in &self.roots {
            match a.cmp(&0) {
                std::cmp::Ordering::Equal => write!(f, "x")?,
                std::cmp::Ordering::Greater => write!(f, "(x-{a})")?,
                std::cmp::Ordering::Less => write!(f, "(x+{})", -a)?,
            }
        }
        Ok(())
    }
}

/// Canonical generators of K_v*/K_v*².
pub fn square_class_basis(field: LocalField) -> Vec<SquareClass> {
    (0..field.class_dim()).map(|i| SquareClass::from_bits(field, 1 << i)).collect()
}

/// dim_F₂ J(K_v)/2J(K_v) for a genus-2 Jacobian with full rational 2-torsion.
pub fn target_dim(field: LocalField) -> usize {
    target_dim_genus(field, 2)
}

/// dim_F₂ J(K_v)/2J(K_v) for a genus-g Jacobian whose 2-torsion is rational with all
/// roots real: 2g at odd places, 3g over Q₂ and g over R.
pub fn target_dim_genus(field: LocalField, g: usize) -> usize {
    match field {
        LocalField::Real => g,
        LocalField::Qp(2) => 3 * g,
        LocalField::Qp(_) | LocalField::UnramQuad(_) => 2 * g,
    }
}

/// Packs square classes into `len · class_dim` bits, coordinate j in the j-th block.
pub fn pack(classes: &[SquareClass]) -> u64 {
    let mut v = 0u64;
    for (j, c) in classes.iter().enumerate() {
        v |= c.bits() << (j * c.field.class_dim());
    }
    v
}

pub fn unpack(field: LocalField, len: usize, bits: u64) -> Vec<SquareClass> {
    let w = field.class_dim();
    let mask = (1u64 << w) - 1;
    (0..len).map(|j| SquareClass::from_bits(field, bits >> (j * w) & mask)).collect()
}

/// Packs a vector of nonzero integers given as square-class representatives.
pub fn pack_ints(ints: &[i64], field: LocalField) -> u64 {
    let cs: Vec<SquareClass> = ints.iter().map(|&n| SquareClass::of_int(n as i128, field)).collect();
    pack(&cs)
}

/// Parses a class label: an integer, or for the unramified extension a word in ℓ and `r`
/// such as `3r`.
pub fn class_from_label(label: &str, field: LocalField) -> Result<SquareClass> {
    let bad = || Error::InvalidInput(format!("square class label {label:?}"));
    if let LocalField::UnramQuad(l) = field {
        let (num, r) = match label.strip_suffix('r') {
            Some(rest) => (rest, 1u8),
            None => (label, 0u8),
        };
        let val_odd = match num {
            "" | "1" => false,
            s if s == l.to_string() => true,
            _ => return Err(bad()),
        };
        return Ok(SquareClass { field, val_odd, unit: r });
    }
    let n: i64 = label.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    Ok(SquareClass::of_int(n as i128, field))
}

/// A point (or a conjugate pair of points) over a completion, given by its x-coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalPoint {
    /// The Weierstrass point (α_i, 0), by root index.
    Weierstrass(usize),
    /// ξ ∈ Q, read in Q_ℓ or R.
    Rational(BigRational),
    /// ξ ∈ Q(√n) with n a non-residue, read in the unramified quadratic extension.
    Unram(QuadElem),
    /// ξ ∈ Q(√e) read in Q_ℓ(√e), a quadratic extension of the base; stands for P + P̄.
    Pair(QuadElem),
}

impl fmt::Display for LocalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalPoint::Weierstrass(i) => write!(f, "W{i}"),
            LocalPoint::Rational(x) => write!(f, "{x}"),
            LocalPoint::Unram(x) => write!(f, "{x}"),
            LocalPoint::Pair(x) => write!(f, "{x} + conj"),
        }
    }
}

/// Class of α_i − α_j in the completion, with the product rule at j = i.
pub fn weierstrass_delta(model: &SplitModel, i: usize, field: LocalField) -> Vec<SquareClass> {
    let r = &model.roots;
    let mut out: Vec<SquareClass> = (0..r.len())
        .map(|j| {
            if j == i {
                SquareClass::one(field)
            } else {
                SquareClass::of_int((r[i] - r[j]) as i128, field)
            }
        })
        .collect();
    let prod = out.iter().fold(SquareClass::one(field), |acc, c| acc.mul(c));
    out[i] = prod;
    out
}

/// Square test in the quadratic extension Q_ℓ(√e) of Q_ℓ, e a non-square integer.
struct QuadExt {
    l: u64,
    e: i64,
    ramified: bool,
}

impl QuadExt {
    fn new(l: u64, e: i64) -> Self {
        let (ve, _) = arith::valuation(&BigInt::from(e), l);
        let ramified = ve % 2 == 1 || (l == 2 && e.rem_euclid(4) == 3);
        QuadExt { l, e, ramified }
    }

    /// Normalized valuation v_L.
    fn valuation(&self, z: &QuadElem) -> i64 {
        let vn = arith::valuation_q(&z.norm(), self.l);
        if self.ramified {
            vn
        } else {
            vn / 2
        }
    }

    fn uniformizer(&self) -> QuadElem {
        let e = self.e;
        if !self.ramified {
            QuadElem::from_ints(self.l as i64, 0, e)
        } else if arith::valuation(&BigInt::from(e), self.l).0 % 2 == 1 {
            QuadElem::from_ints(0, 1, e)
        } else {
            QuadElem::from_ints(1, 1, e)
        }
    }

    fn is_square(&self, z: &QuadElem) -> bool {
        if z.is_zero() {
            return false;
        }
        let v = self.valuation(z);
        if v % 2 != 0 {
            return false;
        }
        let pi = self.uniformizer();
        let u = if v >= 0 { z.div(&pi.pow(v as u32)) } else { z.mul(&pi.pow((-v) as u32)) };
        if self.l != 2 {
            if self.ramified {
                // Residue field F_ℓ: u ≡ x mod π.
                let x = &u.x;
                let n = (x.numer() * arith::inv_mod(x.denom(), &BigInt::from(self.l)).unwrap())
                    .mod_floor(&BigInt::from(self.l));
                return arith::legendre_big(&n, self.l) == 1;
            }
            return SquareClass::unram_from_norm(self.l, &u.norm()).map(|c| c.is_trivial()).unwrap_or(false);
        }
        // Units of L are squares iff congruent to a square mod 4π.
        let need = if self.ramified { 5 } else { 3 };
        let half = self.e.rem_euclid(4) == 1;
        for a in 0..4i64 {
            for b in 0..4i64 {
                let x = if half {
                    QuadElem::new(
                        BigRational::new(BigInt::from(2 * a + b), BigInt::from(2)),
                        BigRational::new(BigInt::from(b), BigInt::from(2)),
                        self.e,
                    )
                } else {
                    QuadElem::from_ints(a, b, self.e)
                };
                let diff = u.sub(&x.mul(&x));
                if diff.is_zero() || self.valuation(&diff) >= need {
                    return true;
                }
            }
        }
        false
    }
}

fn nonresidue(l: u64) -> i64 {
    if l % 4 == 3 {
        -1
    } else {
        arith::least_nonresidue(l) as i64
    }
}

/// δ of a point over the completion; errors with `NotOnCurve` when f(ξ) is not a square there.
pub fn delta_point(model: &SplitModel, pt: &LocalPoint, field: LocalField) -> Result<Vec<SquareClass>> {
    let not_on = || Error::NotOnCurve(format!("x = {pt} over {field}"));
    match pt {
        LocalPoint::Weierstrass(i) => {
            if *i >= model.degree() {
                return Err(Error::InvalidInput(format!("root index {i}")));
            }
            Ok(weierstrass_delta(model, *i, field))
        }
        LocalPoint::Rational(x) => {
            if let Some(i) = model.roots.iter().position(|&a| arith::rat(a) == *x) {
                return Ok(weierstrass_delta(model, i, field));
            }
            if matches!(field, LocalField::UnramQuad(_)) {
                let n = nonresidue(field.residue_prime().unwrap());
                return delta_point(model, &LocalPoint::Unram(QuadElem::rational(x.clone(), n)), field);
            }
            if !SquareClass::of_rational(&model.eval(x), field).is_trivial() {
                return Err(not_on());
            }
            Ok(model.roots.iter().map(|&a| SquareClass::of_rational(&(x - arith::rat(a)), field)).collect())
        }
        LocalPoint::Unram(x) => {
            let LocalField::UnramQuad(l) = field else {
                return Err(Error::Unsupported(format!("{pt} over {field}")));
            };
            if x.d != nonresidue(l) {
                return Err(Error::InvalidInput(format!("{pt} is not written over Q(√{})", nonresidue(l))));
            }
            if x.y.is_zero() {
                if let Some(i) = model.roots.iter().position(|&a| arith::rat(a) == x.x) {
                    return Ok(weierstrass_delta(model, i, field));
                }
            }
            let fx = model.eval_quad(x);
            if fx.is_zero() || !SquareClass::unram_from_norm(l, &fx.norm())?.is_trivial() {
                return Err(not_on());
            }
            model
                .roots
                .iter()
                .map(|&a| SquareClass::unram_from_norm(l, &x.sub(&QuadElem::from_ints(a, 0, x.d)).norm()))
                .collect()
        }
        LocalPoint::Pair(x) => {
            let LocalField::Qp(l) = field else {
                return Err(Error::Unsupported(format!("conjugate pairs over {field}")));
            };
            if x.y.is_zero() || SquareClass::of_int(x.d as i128, field).is_trivial() {
                return Err(Error::InvalidInput(format!("{pt} does not generate a quadratic extension")));
            }
            let ext = QuadExt::new(l, x.d);
            if !ext.is_square(&model.eval_quad(x)) {
                return Err(not_on());
            }
            Ok(model
                .roots
                .iter()
                .map(|&a| SquareClass::of_rational(&x.sub(&QuadElem::from_ints(a, 0, x.d)).norm(), field))
                .collect())
        }
    }
}

/// A point used to generate a local image, with its δ-value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageGenerator {
    pub point: String,
    pub classes: Vec<SquareClass>,
}

/// F₂-basis of im(δ_v) inside ⊕_n K_v*/K_v*².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalImage {
    pub field: LocalField,
    pub model: SplitModel,
    /// Packed vectors (see [`pack`]), one per generator.
    pub vectors: Vec<u64>,
    pub target_dim: usize,
    pub generators: Vec<ImageGenerator>,
    /// Candidates examined before the span saturated.
    pub candidates_tried: usize,
}

impl LocalImage {
    pub fn dim(&self) -> usize {
        f2::rank(&self.vectors)
    }

    pub fn contains(&self, v: u64) -> bool {
        f2::in_span(&self.vectors, v)
    }

    /// Width of a packed vector in bits.
    pub fn width(&self) -> usize {
        self.model.degree() * self.field.class_dim()
    }
}

/// F₂ membership of a 5-vector of classes in the image.
pub fn membership(img: &LocalImage, vec: &[SquareClass]) -> bool {
    img.contains(pack(vec))
}

/// Whether the coordinate product of a packed vector is trivial.
pub fn in_hyperplane(field: LocalField, len: usize, v: u64) -> bool {
    unpack(field, len, v).iter().fold(SquareClass::one(field), |a, c| a.mul(c)).is_trivial()
}

struct Search<'a> {
    model: &'a SplitModel,
    field: LocalField,
    vectors: Vec<u64>,
    generators: Vec<ImageGenerator>,
    target: usize,
    tried: usize,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.vectors.len() >= self.target
    }

    fn offer(&mut self, pt: LocalPoint) {
        self.tried += 1;
        let Ok(classes) = delta_point(self.model, &pt, self.field) else {
            return;
        };
        let v = pack(&classes);
        if !f2::in_span(&self.vectors, v) {
            self.vectors.push(v);
            self.generators.push(ImageGenerator { point: format!("D_{pt}"), classes });
        }
    }

    /// Integers by increasing absolute value, then fractions n/d by increasing height.
    fn rationals(&mut self, budget: usize, make: &dyn Fn(BigRational) -> LocalPoint) {
        let start = self.tried;
        let mut k = 0i64;
        while !self.done() && self.tried - start < budget {
            for n in if k == 0 { vec![0] } else { vec![k, -k] } {
                self.offer(make(arith::rat(n)));
            }
            k += 1;
        }
        let start = self.tried;
        let mut h = 2i64;
        while !self.done() && self.tried - start < budget {
            for d in 2..=h {
                for n in -h..=h {
                    if n.abs().max(d) != h || n.gcd(&d) != 1 {
                        continue;
                    }
                    self.offer(make(BigRational::new(BigInt::from(n), BigInt::from(d))));
                }
            }
            h += 1;
        }
    }

    /// ξ = (s + t√e)/den over Q(√e) by increasing height, t ≠ 0.
    fn quadratic(&mut self, e: i64, budget: usize, make: &dyn Fn(QuadElem) -> LocalPoint) {
        let start = self.tried;
        let mut h = 1i64;
        while !self.done() && self.tried - start < budget {
            for den in 1..=h {
                for s in -h..=h {
                    for t in 1..=h {
                        if s.abs().max(t).max(den) != h || s.gcd(&t).gcd(&den) != 1 {
                            continue;
                        }
                        let q = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
                        self.offer(make(QuadElem::new(q(s), q(t), e)));
                        if self.done() {
                            return;
                        }
                    }
                }
            }
            h += 1;
        }
    }
}

/// Local image search with an explicit per-level budget; not cached.
pub fn local_image_with_budget(model: &SplitModel, field: LocalField, budget: usize) -> Result<LocalImage> {
    if field == LocalField::UnramQuad(2) {
        return Err(Error::Unsupported("unramified extension of Q2".into()));
    }
    let mut s = Search {
        model,
        field,
        vectors: Vec::new(),
        generators: Vec::new(),
        target: target_dim_genus(field, model.genus()),
        tried: 0,
    };
    for i in 0..model.degree() {
        if !s.done() {
            s.offer(LocalPoint::Weierstrass(i));
        }
    }
    match field {
        LocalField::Real | LocalField::Qp(_) => s.rationals(budget, &LocalPoint::Rational),
        LocalField::UnramQuad(l) => {
            let n = nonresidue(l);
            s.rationals(budget, &|x| LocalPoint::Unram(QuadElem::rational(x, n)));
            s.quadratic(n, budget, &LocalPoint::Unram);
        }
    }
    if let LocalField::Qp(l) = field {
        let reps: Vec<i64> = if l == 2 {
            vec![-1, 2, -2, 3, -3, 6, -6]
        } else {
            let n = nonresidue(l);
            vec![n, l as i64, n * l as i64]
        };
        for e in reps {
            if s.done() {
                break;
            }
            s.quadratic(e, budget / 7 + 1, &LocalPoint::Pair);
        }
    }
    let found = f2::rank(&s.vectors);
    if found < s.target {
        return Err(Error::SearchBudgetExhausted { field: field.to_string(), found, target: s.target });
    }
    Ok(LocalImage {
        field,
        model: model.clone(),
        vectors: s.vectors,
        target_dim: s.target,
        generators: s.generators,
        candidates_tried: s.tried,
    })
}

type CacheKey = (SplitModel, LocalField, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, LocalImage>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, LocalImage>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Local image with the default budget, memoized per (model, field).
pub fn local_image(model: &SplitModel, field: LocalField) -> Result<LocalImage> {
    local_image_budgeted(model, field, default_budget())
}

/// Memoized [`local_image_with_budget`]. Concurrent callers may both compute; the results
/// are identical so the second insert is harmless.
pub fn local_image_budgeted(model: &SplitModel, field: LocalField, budget: usize) -> Result<LocalImage> {
    let key = (model.clone(), field, budget);
    if let Some(img) = cache().lock().unwrap().get(&key) {
        return Ok(img.clone());
    }
    let img = local_image_with_budget(model, field, budget)?;
    cache().lock().unwrap().entry(key).or_insert_with(|| img.clone());
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(field: LocalField, rows: &[[&str; 5]]) -> Vec<u64> {
        rows.iter()
            .map(|r| pack(&r.iter().map(|s| class_from_label(s, field).unwrap()).collect::<Vec<_>>()))
            .collect()
    }

    #[test]
    fn weierstrass_rows_of_c() {
        let m = SplitModel::base();
        let f = LocalField::Qp(5);
        let d = weierstrass_delta(&m, 0, f);
        assert_eq!(pack(&d), pack_ints(&[6, -1, -2, -3, -1], f));
        let d = weierstrass_delta(&m, 2, f);
        assert_eq!(pack(&d), pack_ints(&[2, 1, 1, -1, -2], f));
    }

    #[test]
    fn tabulated_points() {
        let m = SplitModel::base();
        let q2 = LocalField::Qp(2);
        let d6 = delta_point(&m, &LocalPoint::Rational(arith::rat(6)), q2).unwrap();
        assert_eq!(pack(&d6), pack_ints(&[2, -1, 6, -3, 1], q2));
        let u = LocalField::UnramQuad(3);
        let di = delta_point(&m, &LocalPoint::Unram(QuadElem::from_ints(0, 1, -1)), u).unwrap();
        let labels: Vec<String> = di.iter().map(|c| c.label()).collect();
        assert_eq!(labels, ["r", "r", "1", "r", "r"]);
        assert!(delta_point(&m, &LocalPoint::Rational(arith::rat(3)), q2).is_err());
    }

    #[test]
    fn images_of_c() {
        let m = SplitModel::base();
        let q3 = LocalField::Qp(3);
        let img = local_image(&m, q3).unwrap();
        let expected = [[-3i64, -1, 1, -3, -1], [1, 3, -1, 1, -3], [-1, 1, 1, -1, 1], [1, -3, -1, 1, 3]];
        let rows: Vec<u64> = expected.iter().map(|r| pack_ints(r, q3)).collect();
        assert!(f2::same_span(&img.vectors, &rows));
        assert!(!img.contains(pack_ints(&[1, 2, -1, 6, -3], q3)));
        let u = LocalField::UnramQuad(3);
        let img = local_image(&m, u).unwrap();
        let rows = labels(u, &[["3", "1", "1", "3", "1"], ["1", "3", "1", "1", "3"], ["r", "r", "1", "r", "r"], ["3r", "1", "1", "3r", "1"]]);
        assert!(f2::same_span(&img.vectors, &rows));
    }

    #[test]
    fn pair_square_test() {
        // √−1 ∈ Q₂(√−1); 1 + 2√2 = ... check against squares of small elements.
        for (l, e) in [(2u64, -1i64), (2, 2), (2, -3), (3, 3), (3, -1), (5, 2), (5, 10)] {
            let ext = QuadExt::new(l, e);
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    let x = QuadElem::from_ints(a, b, e);
                    if x.is_zero() {
                        continue;
                    }
                    assert!(ext.is_square(&x.mul(&x)), "({a}+{b}√{e})² over Q{l}");
                }
            }
            assert!(!ext.is_square(&QuadElem::from_ints(l as i64, 0, e).mul(&ext.uniformizer())) || !ext.ramified);
        }
        // 3 is not a square in Q₂(√−1) (its square roots generate Q₂(√3), Q₂(√−3)).
        assert!(!QuadExt::new(2, -1).is_square(&QuadElem::from_ints(3, 0, -1)));
        assert!(QuadExt::new(2, -1).is_square(&QuadElem::from_ints(-1, 0, -1)));
        assert!(QuadExt::new(2, -3).is_square(&QuadElem::from_ints(-3, 0, -3)));
        assert!(!QuadExt::new(2, -3).is_square(&QuadElem::from_ints(2, 0, -3)));
    }

    #[test]
    fn labels_roundtrip() {
        let u = LocalField::UnramQuad(3);
        for s in ["1", "3", "r", "3r"] {
            assert_eq!(class_from_label(s, u).unwrap().label(), s);
        }
        assert!(class_from_label("5", u).is_err());
    }
}
