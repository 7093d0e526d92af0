//! Integer and local-field primitives: factorization, residue symbols,
//! square roots modulo primes, canonical square classes and Hilbert symbols.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of μ₂, stored as `1` or `-1`.
pub type Mu2 = i8;

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_BUDGET: u64 = 1 << 26;

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(l) => write!(f, "{l}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

/// A signed integer with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInt {
    pub sign: i8,
    pub factors: Vec<(u128, u32)>,
}

impl FactoredInt {
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for &(p, e) in &self.factors {
            v *= BigInt::from(p).pow(e);
        }
        v
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b, mut r) = (a % m, b % m, 0u128);
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    r
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Miller–Rabin with the first twelve prime bases; deterministic below 2⁶⁴.
pub fn is_prime(n: u128) -> bool {
    const BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pollard_brent(n: u128, budget: &mut u64) -> Result<u128> {
    if n % 2 == 0 {
        return Ok(2);
    }
    for c in 1u128.. {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, m) = (2u128, 128u64);
        let (mut g, mut r, mut q) = (1u128, 1u64, 1u128);
        let (mut x, mut ys) = (0u128, 0u128);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += m;
                *budget = budget.saturating_sub(m);
                if *budget == 0 {
                    return Err(Error::BudgetExceeded(format!("factoring {n}")));
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    unreachable!()
}

fn factor_into(n: u128, out: &mut Vec<u128>, budget: &mut u64) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    let d = pollard_brent(n, budget)?;
    factor_into(d, out, budget)?;
    factor_into(n / d, out, budget)
}

/// Factors a nonzero integer: trial division to 10⁶, then Pollard–Brent.
pub fn factor(n: i128) -> Result<FactoredInt> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut factors = Vec::new();
    let mut push = |p: u128, m: &mut u128| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u128;
    let mut step = 2;
    while p <= TRIAL_LIMIT as u128 && p * p <= m {
        push(p, &mut m);
        p += step;
        step = 6 - step;
    }
    if m > 1 {
        let mut rest = Vec::new();
        let mut budget = RHO_BUDGET;
        factor_into(m, &mut rest, &mut budget)?;
        rest.sort_unstable();
        for q in rest {
            match factors.last_mut() {
                Some((r, e)) if *r == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    factors.sort_unstable();
    Ok(FactoredInt { sign, factors })
}

/// Factors an arbitrary nonzero big integer (must fit in 127 bits).
pub fn factor_big(n: &BigInt) -> Result<FactoredInt> {
    let v = n
        .to_i128()
        .ok_or_else(|| Error::BudgetExceeded(format!("{n} exceeds 127 bits")))?;
    factor(v)
}

/// The squarefree `m` with `n / m` a positive square.
pub fn squarefree_part(n: i128) -> Result<i128> {
    let f = factor(n)?;
    let mut m = f.sign as i128;
    for (p, e) in f.factors {
        if e % 2 == 1 {
            m *= p as i128;
        }
    }
    Ok(m)
}

/// Squarefree part of a big integer.
pub fn squarefree_part_big(n: &BigInt) -> Result<BigInt> {
    Ok(BigInt::from(squarefree_part(n.to_i128().ok_or_else(|| {
        Error::BudgetExceeded(format!("{n} exceeds 127 bits"))
    })?)?))
}

/// Squarefree integer representing the class of a nonzero rational in Q*/Q*².
pub fn squarefree_part_rational(x: &BigRational) -> Result<BigInt> {
    if x.is_zero() {
        return Err(Error::InvalidInput("zero has no square class".into()));
    }
    squarefree_part_big(&(x.numer() * x.denom()))
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: i128, n: u128) -> i8 {
    assert!(n % 2 == 1, "jacobi needs an odd modulus");
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol of a big integer modulo an odd prime.
pub fn legendre_big(a: &BigInt, p: u64) -> i8 {
    let r = a.mod_floor(&BigInt::from(p)).to_i128().unwrap();
    jacobi(r, p as u128)
}

/// A square root of `a` modulo the odd prime `p` (Tonelli–Shanks), the smaller of the two.
pub fn sqrt_mod(a: i128, p: u64) -> Result<u64> {
    let pp = p as u128;
    let a = a.rem_euclid(p as i128) as u128;
    if a == 0 {
        return Err(Error::ZeroResidue { a: a.to_string(), p });
    }
    if jacobi(a as i128, pp) != 1 {
        return Err(Error::NotASquare { a: a.to_string(), p });
    }
    let s = (pp - 1).trailing_zeros();
    let q = (pp - 1) >> s;
    let mut z = 2u128;
    while jacobi(z as i128, pp) != -1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, pp), pow_mod(a, q, pp), pow_mod(a, q.div_ceil(2), pp));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, pp);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), pp);
        m = i;
        c = mul_mod(b, b, pp);
        t = mul_mod(t, c, pp);
        r = mul_mod(r, b, pp);
    }
    Ok(r.min(pp - r) as u64)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// A square root of `a` modulo `p^k`, congruent to `seed` modulo `p` (odd p) or 4 (p = 2).
///
/// For odd `p` the seed must be a root modulo `p` of a unit `a`; for `p = 2`, `a ≡ 1 mod 8`
/// and the seed selects the root class modulo 4.
pub fn hensel_sqrt(a: &BigInt, p: u64, k: u32, seed: u64) -> BigInt {
    let pb = BigInt::from(p);
    let modulus = pb.pow(k);
    if p == 2 {
        let mut r = BigInt::one();
        for i in 3..k.max(3) {
            let m = BigInt::one() << (i + 1);
            if !(&r * &r - a).mod_floor(&m).is_zero() {
                r += BigInt::one() << (i - 1);
            }
        }
        let r = r.mod_floor(&modulus);
        return if (&r % 4u32) == BigInt::from(seed % 4) {
            r
        } else {
            (-r).mod_floor(&modulus)
        };
    }
    let mut r = BigInt::from(seed);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        let inv = inv_mod(&(BigInt::from(2) * &r), &m).expect("unit root");
        r = (&r - (&r * &r - a) * inv).mod_floor(&m);
    }
    r.mod_floor(&modulus)
}

/// ℓ-adic valuation and cofactor of a nonzero big integer.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// ℓ-adic valuation of a nonzero rational.
pub fn valuation_q(x: &BigRational, p: u64) -> i64 {
    valuation(x.numer(), p).0 as i64 - valuation(x.denom(), p).0 as i64
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&z| jacobi(z as i128, p as u128) == -1).unwrap()
}

/// Completions in which the library computes square classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalField {
    Real,
    /// The ℓ-adic field Q_ℓ.
    Qp(u64),
    /// The unramified quadratic extension of Q_ℓ, ℓ odd.
    UnramQuad(u64),
}

impl LocalField {
    /// Dimension of K_v*/K_v*² over F₂.
    pub fn class_dim(&self) -> usize {
        match self {
            LocalField::Real => 1,
            LocalField::Qp(2) => 3,
            LocalField::Qp(_) | LocalField::UnramQuad(_) => 2,
        }
    }

    pub fn residue_prime(&self) -> Option<u64> {
        match self {
            LocalField::Real => None,
            LocalField::Qp(l) | LocalField::UnramQuad(l) => Some(*l),
        }
    }
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalField::Real => write!(f, "R"),
            LocalField::Qp(l) => write!(f, "Q{l}"),
            LocalField::UnramQuad(l) => write!(f, "Q{l}(unr2)"),
        }
    }
}

/// An element of K_v*/K_v*² in canonical form.
///
/// `unit` is the residue mod 8 in {1,3,5,7} over Q₂, the non-residue bit over odd Q_ℓ and
/// its unramified quadratic extension, and the sign bit (1 = negative) over R.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareClass {
    pub field: LocalField,
    pub val_odd: bool,
    pub unit: u8,
}

impl SquareClass {
    pub fn one(field: LocalField) -> Self {
        let unit = if field == LocalField::Qp(2) { 1 } else { 0 };
        SquareClass { field, val_odd: false, unit }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::one(self.field)
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        assert_eq!(self.field, other.field, "square classes from different fields");
        let unit = match self.field {
            LocalField::Qp(2) => (self.unit * other.unit) % 8,
            _ => self.unit ^ other.unit,
        };
        SquareClass { field: self.field, val_odd: self.val_odd ^ other.val_odd, unit }
    }

    /// Coordinates over F₂, `class_dim` bits.
    ///
    /// Q₂: (valuation, u ≡ 3 mod 4, u ≡ ±3 mod 8); odd ℓ: (valuation, non-residue); R: (sign).
    pub fn bits(&self) -> u64 {
        match self.field {
            LocalField::Real => self.unit as u64,
            LocalField::Qp(2) => {
                let a = (self.unit % 4 == 3) as u64;
                let b = (self.unit == 3 || self.unit == 5) as u64;
                self.val_odd as u64 | a << 1 | b << 2
            }
            _ => self.val_odd as u64 | (self.unit as u64) << 1,
        }
    }

    pub fn from_bits(field: LocalField, bits: u64) -> SquareClass {
        match field {
            LocalField::Real => SquareClass { field, val_odd: false, unit: (bits & 1) as u8 },
            LocalField::Qp(2) => {
                let unit = match (bits >> 1) & 3 {
                    0 => 1,
                    1 => 7,
                    3 => 3,
                    _ => 5,
                };
                SquareClass { field, val_odd: bits & 1 == 1, unit }
            }
            _ => SquareClass { field, val_odd: bits & 1 == 1, unit: ((bits >> 1) & 1) as u8 },
        }
    }

    /// Class of a nonzero rational.
    pub fn of_rational(x: &BigRational, field: LocalField) -> SquareClass {
        assert!(!x.is_zero(), "square class of zero");
        match field {
            LocalField::Real => SquareClass { field, val_odd: false, unit: x.is_negative() as u8 },
            LocalField::Qp(l) => {
                let (vn, un) = valuation(x.numer(), l);
                let (vd, ud) = valuation(x.denom(), l);
                let val_odd = (vn + vd) % 2 == 1;
                if l == 2 {
                    let r = (un.mod_floor(&BigInt::from(8)) * ud.mod_floor(&BigInt::from(8)))
                        .mod_floor(&BigInt::from(8));
                    SquareClass { field, val_odd, unit: r.to_u8().unwrap() }
                } else {
                    let s = legendre_big(&(un * ud), l);
                    SquareClass { field, val_odd, unit: (s == -1) as u8 }
                }
            }
            LocalField::UnramQuad(l) => {
                let (vn, _) = valuation(x.numer(), l);
                let (vd, _) = valuation(x.denom(), l);
                SquareClass { field, val_odd: (vn + vd) % 2 == 1, unit: 0 }
            }
        }
    }

    pub fn of_int(n: i128, field: LocalField) -> SquareClass {
        Self::of_rational(&BigRational::from_integer(BigInt::from(n)), field)
    }

    /// Class in the unramified quadratic extension of Q_ℓ of an element with the given norm.
    pub fn unram_from_norm(l: u64, norm: &BigRational) -> Result<SquareClass> {
        let v = valuation_q(norm, l);
        if v % 2 != 0 {
            return Err(Error::InternalInconsistency(format!(
                "norm {norm} has odd {l}-adic valuation in an unramified extension"
            )));
        }
        let (_, un) = valuation(norm.numer(), l);
        let (_, ud) = valuation(norm.denom(), l);
        let s = legendre_big(&(un * ud), l);
        Ok(SquareClass {
            field: LocalField::UnramQuad(l),
            val_odd: (v / 2).rem_euclid(2) == 1,
            unit: (s == -1) as u8,
        })
    }

    /// A short label: a rational representative, or for the unramified extension
    /// a word in ℓ and `r`, where `r` is any non-square unit.
    pub fn label(&self) -> String {
        match self.field {
            LocalField::UnramQuad(l) => match (self.val_odd, self.unit) {
                (false, 0) => "1".into(),
                (true, 0) => l.to_string(),
                (false, _) => "r".into(),
                (true, _) => format!("{l}r"),
            },
            _ => self.representative().to_string(),
        }
    }

    /// Integer representative; for Q₂ drawn from ⟨−1,2,3⟩, for odd ℓ from ⟨n, ℓ⟩ with n = −1
    /// when ℓ ≡ 3 mod 4 and the least non-residue otherwise.
    pub fn representative(&self) -> i64 {
        match self.field {
            LocalField::Real => {
                if self.unit == 1 {
                    -1
                } else {
                    1
                }
            }
            LocalField::Qp(2) => {
                let u = match self.unit {
                    1 => 1,
                    3 => 3,
                    5 => -3,
                    _ => -1,
                };
                if self.val_odd {
                    2 * u
                } else {
                    u
                }
            }
            LocalField::Qp(l) | LocalField::UnramQuad(l) => {
                let n = if self.unit == 0 {
                    1
                } else if l % 4 == 3 {
                    -1
                } else {
                    least_nonresidue(l) as i64
                };
                if self.val_odd {
                    n * l as i64
                } else {
                    n
                }
            }
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Square class of a nonzero rational at a place of Q.
pub fn square_class(x: &BigRational, v: Place) -> SquareClass {
    SquareClass::of_rational(x, place_field(v))
}

pub fn place_field(v: Place) -> LocalField {
    match v {
        Place::Finite(l) => LocalField::Qp(l),
        Place::Infinite => LocalField::Real,
    }
}

/// Hilbert symbol of two square classes over the same completion.
pub fn hilbert_classes(x: &SquareClass, y: &SquareClass) -> Mu2 {
    assert_eq!(x.field, y.field, "Hilbert symbol across different fields");
    let (a, b) = (x.val_odd as u8, y.val_odd as u8);
    let e = match x.field {
        LocalField::Real => x.unit & y.unit,
        LocalField::Qp(2) => {
            let eps = |u: u8| (u % 4 == 3) as u8;
            let omega = |u: u8| (u == 3 || u == 5) as u8;
            eps(x.unit) & eps(y.unit) ^ a & omega(y.unit) ^ b & omega(x.unit)
        }
        LocalField::Qp(l) => {
            let eps = ((l - 1) / 2 % 2) as u8;
            a & b & eps ^ b & x.unit ^ a & y.unit
        }
        LocalField::UnramQuad(_) => b & x.unit ^ a & y.unit,
    };
    if e & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Hilbert symbol (a,b)_v of nonzero rationals.
pub fn hilbert_q(a: &BigRational, b: &BigRational, v: Place) -> Mu2 {
    hilbert_classes(&square_class(a, v), &square_class(b, v))
}

/// Hilbert symbol (a,b)_v of nonzero integers.
pub fn hilbert(a: i128, b: i128, v: Place) -> Mu2 {
    let f = place_field(v);
    hilbert_classes(&SquareClass::of_int(a, f), &SquareClass::of_int(b, f))
}

/// Places at which (a,b)_v can be nontrivial: ∞ and the primes dividing 2ab.
pub fn relevant_places(ints: &[i128]) -> Result<Vec<Place>> {
    let mut primes = vec![2u64];
    for &n in ints {
        for p in factor(n)?.primes() {
            primes.push(p as u64);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Infinite);
    Ok(out)
}

/// Discriminant of Q(√d) for a squarefree d.
pub fn quad_disc(d: i128) -> i128 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square_i128(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big_sign(n: &BigInt) -> i8 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Primes in `[lo, hi]` by a simple sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 {
        return vec![];
    }
    let n = hi as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_jacobi(a: i128, p: u128) -> i8 {
        let a = a.rem_euclid(p as i128) as u128;
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(1).unwrap(), FactoredInt { sign: 1, factors: vec![] });
        assert_eq!(factor(-723).unwrap(), FactoredInt { sign: -1, factors: vec![(3, 1), (241, 1)] });
        assert_eq!(
            factor(6720).unwrap(),
            FactoredInt { sign: 1, factors: vec![(2, 6), (3, 1), (5, 1), (7, 1)] }
        );
        assert!(factor(0).is_err());
    }

    #[test]
    fn factor_large_semiprimes() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let f = factor((p * q) as i128).unwrap();
        assert_eq!(f.factors, vec![(q, 1), (p, 1)]);
        let r = 18_446_744_073_709_551_557u128;
        let f = factor((r * 3) as i128).unwrap();
        assert_eq!(f.factors, vec![(3, 1), (r, 1)]);
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(4).unwrap(), 1);
        assert_eq!(squarefree_part(-8).unwrap(), -2);
        assert_eq!(squarefree_part(18).unwrap(), 2);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 7), 1);
        assert_eq!(jacobi(2, 5), -1);
        assert_eq!(jacobi(1001, 9907), brute_jacobi(1001, 9907));
        assert_eq!(jacobi(1001, 9907), -1);
        assert_eq!(jacobi(6, 9), 0);
    }

    #[test]
    fn jacobi_matches_residue_search() {
        for p in primes_in(3, 200) {
            for a in -50..50 {
                assert_eq!(jacobi(a, p as u128), brute_jacobi(a, p as u128), "({a}/{p})");
            }
        }
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(2, 7).unwrap(), 3);
        assert_eq!(sqrt_mod(-1, 13).unwrap(), 5);
        assert!(matches!(sqrt_mod(3, 7), Err(Error::NotASquare { .. })));
        assert!(matches!(sqrt_mod(14, 7), Err(Error::ZeroResidue { .. })));
        for p in primes_in(3, 500) {
            for a in 1..40i128 {
                if let Ok(r) = sqrt_mod(a, p) {
                    assert_eq!((r as i128 * r as i128 - a).rem_euclid(p as i128), 0);
                    assert!(r <= p - r);
                }
            }
        }
    }

    #[test]
    fn hensel_roots() {
        let a = BigInt::from(17);
        for seed in [1, 3] {
            let r = hensel_sqrt(&a, 2, 40, seed);
            let m = BigInt::one() << 40;
            assert!((&r * &r - &a).mod_floor(&m).is_zero());
            assert_eq!(r.mod_floor(&BigInt::from(4)), BigInt::from(seed));
        }
        let a = BigInt::from(-23);
        let s = sqrt_mod(-23, 3).unwrap();
        let r = hensel_sqrt(&a, 3, 30, s);
        assert!((&r * &r - &a).mod_floor(&BigInt::from(3).pow(30)).is_zero());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert(2, -1, Place::Finite(2)), 1);
        assert_eq!(hilbert(3, 2, Place::Finite(3)), -1);
        for b in [-7, 2, 5, 12] {
            for v in [Place::Finite(2), Place::Finite(3), Place::Infinite] {
                assert_eq!(hilbert(1, b, v), 1);
            }
        }
    }

    #[test]
    fn square_class_examples() {
        let c = SquareClass::of_int(6720, LocalField::Qp(2));
        assert!(!c.val_odd);
        assert_eq!(c.unit, 1);
        assert_eq!(SquareClass::of_int(-1, LocalField::Real).representative(), -1);
        let c = SquareClass::of_int(12, LocalField::Qp(3));
        assert!(c.val_odd);
        assert_eq!(c.unit, 0);
        assert_eq!(SquareClass::of_int(3, LocalField::Qp(2)), SquareClass::of_int(-5, LocalField::Qp(2)));
    }

    #[test]
    fn bits_roundtrip() {
        for f in [LocalField::Real, LocalField::Qp(2), LocalField::Qp(3), LocalField::UnramQuad(3)] {
            for b in 0..(1u64 << f.class_dim()) {
                assert_eq!(SquareClass::from_bits(f, b).bits(), b);
            }
        }
    }
}
