//! Quadratic fields Q(√d): class numbers from binary quadratic forms, fundamental units,
//! prime ideals and their principal powers, S-unit bases and localization into square classes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, LocalField, SquareClass};
use crate::error::{Error, Result};

const MAX_ABS_D: i64 = 10_000_000;

/// An element x + y√d of Q(√d).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub x: BigRational,
    pub y: BigRational,
    pub d: i64,
}

fn q(n: i64) -> BigRational {
    arith::rat(n)
}

fn qb(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl QuadElem {
    pub fn new(x: BigRational, y: BigRational, d: i64) -> Self {
        QuadElem { x, y, d }
    }

    pub fn from_ints(x: i64, y: i64, d: i64) -> Self {
        QuadElem { x: q(x), y: q(y), d }
    }

    pub fn rational(x: BigRational, d: i64) -> Self {
        QuadElem { x, y: BigRational::zero(), d }
    }

    pub fn one(d: i64) -> Self {
        Self::from_ints(1, 0, d)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn mul(&self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem {
            x: &self.x * &o.x + &self.y * &o.y * q(self.d),
            y: &self.x * &o.y + &self.y * &o.x,
            d: self.d,
        }
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem { x: &self.x + &o.x, y: &self.y + &o.y, d: self.d }
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem { x: &self.x - &o.x, y: &self.y - &o.y, d: self.d }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem { x: -&self.x, y: -&self.y, d: self.d }
    }

    pub fn scale(&self, c: &BigRational) -> QuadElem {
        QuadElem { x: &self.x * c, y: &self.y * c, d: self.d }
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { x: self.x.clone(), y: -&self.y, d: self.d }
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * q(self.d)
    }

    pub fn trace(&self) -> BigRational {
        &self.x * q(2)
    }

    pub fn inv(&self) -> QuadElem {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero");
        self.conj().scale(&n.recip())
    }

    pub fn div(&self, o: &QuadElem) -> QuadElem {
        self.mul(&o.inv())
    }

    pub fn pow(&self, mut e: u32) -> QuadElem {
        let mut base = self.clone();
        let mut r = QuadElem::one(self.d);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// Whether the element lies in the ring of integers.
    pub fn is_integral(&self) -> bool {
        self.trace().is_integer() && self.norm().is_integer()
    }

    /// Sign of the image under √d ↦ s·√d (s = ±1); only for d > 0.
    pub fn real_sign(&self, s: i8) -> i8 {
        assert!(self.d > 0);
        let sx = arith::big_sign(&self.x.numer().clone()) as i32;
        let sy = arith::big_sign(&self.y.numer().clone()) as i32 * s as i32;
        if sy == 0 || sx == sy {
            return if sx == 0 { sy as i8 } else { sx as i8 };
        }
        if sx == 0 {
            return sy as i8;
        }
        // Opposite signs: compare x² with d·y².
        let n = self.norm();
        if n.is_positive() {
            sx as i8
        } else {
            sy as i8
        }
    }

    /// Approximate value under √d ↦ s·√d, for display and ordering only.
    pub fn approx(&self, s: i8) -> f64 {
        self.x.to_f64().unwrap_or(f64::NAN) + s as f64 * self.y.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Writes the element as (X + Y√d)/D with integers X, Y and D > 0.
    pub fn integer_parts(&self) -> (BigInt, BigInt, BigInt) {
        let dd = self.x.denom().lcm(self.y.denom());
        let x = (&self.x * qb(dd.clone())).to_integer();
        let y = (&self.y * qb(dd.clone())).to_integer();
        (x, y, dd)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else if self.x.is_zero() {
            write!(f, "{}*sqrt({})", self.y, self.d)
        } else if self.y.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.x, -&self.y, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}

/// A binary quadratic form (a, b, c) together with a basis (w1, w2) of an ideal I such that
/// N(m·w1 + n·w2) = N(I)·(a m² + b m n + c n²).
#[derive(Clone, Debug)]
struct TrackedForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    w1: QuadElem,
    w2: QuadElem,
}

impl TrackedForm {
    fn key(&self) -> (BigInt, BigInt, BigInt) {
        (self.a.clone(), self.b.clone(), self.c.clone())
    }

    /// (w1, w2) ↦ (w2, −w1 + t·w2); the new middle coefficient is 2ct − b.
    fn rho_with(&mut self, t: &BigInt) {
        let nb = BigInt::from(2) * &self.c * t - &self.b;
        let na = self.c.clone();
        let nc = &self.a - &self.b * t + &self.c * t * t;
        let nw2 = self.w1.neg().add(&self.w2.scale(&qb(t.clone())));
        self.w1 = std::mem::replace(&mut self.w2, nw2);
        self.a = na;
        self.b = nb;
        self.c = nc;
    }

    /// (w1, w2) ↦ (w1, w2 + k·w1).
    fn shift(&mut self, k: &BigInt) {
        let nb = &self.b + BigInt::from(2) * &self.a * k;
        let nc = &self.c + &self.b * k + &self.a * k * k;
        self.w2 = self.w2.add(&self.w1.scale(&qb(k.clone())));
        self.b = nb;
        self.c = nc;
    }

    fn reduce_definite(&mut self) {
        loop {
            // Bring b into (−a, a].
            let two_a = BigInt::from(2) * &self.a;
            let k = (&self.a - &self.b).div_floor(&two_a);
            if !k.is_zero() {
                self.shift(&k);
            }
            if self.a > self.c {
                self.rho_with(&BigInt::zero());
            } else {
                return;
            }
        }
    }

    fn is_reduced_indefinite(&self, disc: &BigInt, r: &BigInt) -> bool {
        // 0 < b < √Δ and √Δ − b < 2|a| < √Δ + b.
        let two_a = BigInt::from(2) * self.a.abs();
        self.b.is_positive()
            && &self.b <= r
            && lt_sqrt(&(&two_a - &self.b), disc)
            && gt_sqrt(&(&two_a + &self.b), disc)
    }

    fn rho_indefinite(&mut self, disc: &BigInt, r: &BigInt) {
        let two_c = BigInt::from(2) * self.c.abs();
        let target = -&self.b;
        let nb = if gt_sqrt(&self.c.abs(), disc) {
            // b' ≡ −b mod 2|c| with −|c| < b' ≤ |c|.
            let cabs = self.c.abs();
            let m = (&target + &cabs - BigInt::one()).mod_floor(&two_c);
            &m - &cabs + BigInt::one()
        } else {
            // largest b' ≤ ⌊√Δ⌋ with b' ≡ −b mod 2|c|.
            r - (r - &target).mod_floor(&two_c)
        };
        let t = (&nb + &self.b) / (BigInt::from(2) * &self.c);
        self.rho_with(&t);
        debug_assert_eq!(self.b, nb);
    }
}

fn lt_sqrt(x: &BigInt, disc: &BigInt) -> bool {
    x.is_negative() || &(x * x) < disc
}

fn gt_sqrt(x: &BigInt, disc: &BigInt) -> bool {
    x.is_positive() && &(x * x) > disc
}

/// Kind of a prime ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal in normal form (ℓ, b + ω) for split/ramified ℓ, or (ℓ) when inert.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadPrime {
    pub l: u64,
    pub b: u64,
    pub kind: PrimeKind,
}

/// Two-element normal form (a, b + c·ω) of an ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadIdeal {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// Decomposition of a rational prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split(QuadPrime, QuadPrime),
    Inert(QuadPrime),
    Ramified(QuadPrime),
}

/// A place of a quadratic field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadPlace {
    Finite(QuadPrime),
    /// Real embedding √d ↦ sign·√d.
    Real(i8),
    Complex,
}

impl fmt::Display for QuadPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadPlace::Finite(p) => match p.kind {
                PrimeKind::Inert => write!(f, "({})", p.l),
                _ => write!(f, "({}, {}+w)", p.l, p.b),
            },
            QuadPlace::Real(s) => write!(f, "sigma{}", if *s > 0 { 1 } else { 2 }),
            QuadPlace::Complex => write!(f, "complex"),
        }
    }
}

/// A quadratic field with its class number and fundamental unit.
#[derive(Clone, Debug)]
pub struct QuadFieldCtx {
    pub d: i64,
    pub disc: i64,
    pub class_number: u64,
    /// Narrow class number (number of proper form classes); equals `class_number` when imaginary.
    pub narrow_class_number: u64,
    /// Fundamental unit ε > 1 under √d ↦ +√d (real fields only).
    pub fundamental_unit: Option<QuadElem>,
    /// Length of the reduced-form cycle of the principal class (real fields only).
    pub principal_cycle_len: usize,
}

impl QuadFieldCtx {
    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn unit_norm(&self) -> Option<i8> {
        self.fundamental_unit.as_ref().map(|e| if e.norm().is_positive() { 1 } else { -1 })
    }

    /// ω = (1+√d)/2 when d ≡ 1 mod 4, else √d.
    pub fn omega(&self) -> QuadElem {
        if self.d.rem_euclid(4) == 1 {
            QuadElem::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), self.d)
        } else {
            QuadElem::from_ints(0, 1, self.d)
        }
    }

    fn omega_minpoly(&self) -> (BigInt, BigInt) {
        // ω² − t·ω + n = 0
        if self.d.rem_euclid(4) == 1 {
            (BigInt::one(), BigInt::from((1 - self.d) / 4))
        } else {
            (BigInt::zero(), BigInt::from(-self.d))
        }
    }

    pub fn split_prime(&self, l: u64) -> Splitting {
        let (t, n) = self.omega_minpoly();
        let lb = BigInt::from(l);
        let roots: Vec<u64> = (0..l)
            .filter(|&r| {
                let r = BigInt::from(r);
                (&r * &r - &t * &r + &n).mod_floor(&lb).is_zero()
            })
            .collect();
        let b_of = |r: u64| (l - r) % l;
        match roots.len() {
            0 => Splitting::Inert(QuadPrime { l, b: 0, kind: PrimeKind::Inert }),
            1 => Splitting::Ramified(QuadPrime { l, b: b_of(roots[0]), kind: PrimeKind::Ramified }),
            _ => {
                let mut bs = [b_of(roots[0]), b_of(roots[1])];
                bs.sort_unstable();
                Splitting::Split(
                    QuadPrime { l, b: bs[0], kind: PrimeKind::Split },
                    QuadPrime { l, b: bs[1], kind: PrimeKind::Split },
                )
            }
        }
    }

    /// Primes above ℓ, conjugate first-second for split ℓ.
    pub fn primes_above(&self, l: u64) -> Vec<QuadPrime> {
        match self.split_prime(l) {
            Splitting::Split(p, q) => vec![p, q],
            Splitting::Inert(p) | Splitting::Ramified(p) => vec![p],
        }
    }

    pub fn conjugate_prime(&self, p: &QuadPrime) -> QuadPrime {
        match self.split_prime(p.l) {
            Splitting::Split(a, b) => {
                if a == *p {
                    b
                } else {
                    a
                }
            }
            _ => *p,
        }
    }

    /// ℓ-adic root of the minimal polynomial of ω attached to a split or ramified prime,
    /// modulo ℓ^k.
    fn omega_root(&self, p: &QuadPrime, k: u32) -> BigInt {
        let (t, n) = self.omega_minpoly();
        let lb = BigInt::from(p.l);
        let modulus = lb.pow(k);
        let mut r = BigInt::from((p.l - p.b) % p.l);
        let mut prec = 1u32;
        while prec < k {
            prec = (2 * prec).min(k);
            let m = lb.pow(prec);
            let g = &r * &r - &t * &r + &n;
            let dg = BigInt::from(2) * &r - &t;
            let inv = arith::inv_mod(&dg, &m).expect("simple root at a split prime");
            r = (&r - g * inv).mod_floor(&m);
        }
        r.mod_floor(&modulus)
    }

    /// Image of √d in Z/ℓ^k under the embedding attached to a split prime.
    pub fn sqrt_d_image(&self, p: &QuadPrime, k: u32) -> BigInt {
        let modulus = BigInt::from(p.l).pow(k);
        if self.d.rem_euclid(4) == 1 {
            let rho = self.omega_root(p, k + 1);
            (BigInt::from(2) * rho - BigInt::one()).mod_floor(&modulus)
        } else {
            self.omega_root(p, k)
        }
    }

    /// Normal form of 𝔭^k for a split prime 𝔭.
    pub fn prime_power_ideal(&self, p: &QuadPrime, k: u32) -> QuadIdeal {
        let a = BigInt::from(p.l).pow(k);
        let rho = self.omega_root(p, k);
        QuadIdeal { b: (-rho).mod_floor(&a), a, c: BigInt::one() }
    }

    fn tracked_form(&self, ideal: &QuadIdeal) -> TrackedForm {
        let disc = BigInt::from(self.disc);
        let bb = BigInt::from(2) * &ideal.b + BigInt::from(self.disc.rem_euclid(2));
        let c = (&bb * &bb - &disc) / (BigInt::from(4) * &ideal.a);
        let w2 = QuadElem::new(
            BigRational::new(bb.clone(), 2.into()),
            BigRational::new(1.into(), 2.into()),
            self.d,
        );
        // When Δ = 4d, (B + √Δ)/2 = B/2 + √d.
        let w2 = if self.disc % 4 == 0 { QuadElem::new(w2.x, q(1), self.d) } else { w2 };
        TrackedForm { a: ideal.a.clone(), b: bb, c, w1: QuadElem::rational(qb(ideal.a.clone()), self.d), w2 }
    }

    /// A generator of the ideal if it is principal.
    pub fn principal_generator(&self, ideal: &QuadIdeal) -> Option<QuadElem> {
        let mut f = self.tracked_form(ideal);
        let norm_i = qb(ideal.a.clone() * &ideal.c);
        if self.d < 0 {
            f.reduce_definite();
            return f.a.is_one().then_some(f.w1);
        }
        let disc = BigInt::from(self.disc);
        let r = disc.sqrt();
        let mut guard = 0;
        while !f.is_reduced_indefinite(&disc, &r) {
            if f.a.abs().is_one() {
                break;
            }
            f.rho_indefinite(&disc, &r);
            guard += 1;
            assert!(guard < 100_000, "indefinite reduction did not terminate");
        }
        let start = f.key();
        for _ in 0..=2 * self.principal_cycle_len + 2 {
            if f.a.abs().is_one() {
                debug_assert_eq!(f.w1.norm().abs(), norm_i);
                return Some(f.w1);
            }
            f.rho_indefinite(&disc, &r);
            if f.key() == start {
                break;
            }
        }
        None
    }

    /// Order k of [𝔭] in the class group and a generator x of 𝔭^k.
    pub fn class_order_and_generator(&self, p: &QuadPrime) -> Result<(u32, QuadElem)> {
        match p.kind {
            PrimeKind::Inert => Ok((1, QuadElem::from_ints(p.l as i64, 0, self.d))),
            PrimeKind::Ramified => {
                let ideal = QuadIdeal { a: BigInt::from(p.l), b: BigInt::from(p.b), c: BigInt::one() };
                match self.principal_generator(&ideal) {
                    Some(x) => Ok((1, x)),
                    None => Ok((2, QuadElem::from_ints(p.l as i64, 0, self.d))),
                }
            }
            PrimeKind::Split => {
                for k in 1..=self.class_number as u32 {
                    if self.class_number % k as u64 != 0 {
                        continue;
                    }
                    if let Some(x) = self.principal_generator(&self.prime_power_ideal(p, k)) {
                        return Ok((k, x));
                    }
                }
                Err(Error::BudgetExceeded(format!("no principal power of prime over {}", p.l)))
            }
        }
    }

    /// Square class of a nonzero element in the completion at a place.
    pub fn localize(&self, x: &QuadElem, w: &QuadPlace) -> Result<SquareClass> {
        assert!(!x.is_zero(), "localizing zero");
        match w {
            QuadPlace::Real(s) => {
                let sign = x.real_sign(*s);
                Ok(SquareClass { field: LocalField::Real, val_odd: false, unit: (sign < 0) as u8 })
            }
            QuadPlace::Complex => Err(Error::Unsupported("complex places carry no square classes".into())),
            QuadPlace::Finite(p) => match p.kind {
                PrimeKind::Inert if p.l != 2 => SquareClass::unram_from_norm(p.l, &x.norm()),
                PrimeKind::Split => {
                    let (xx, yy, dd) = x.integer_parts();
                    let n = &xx * &xx - &yy * &yy * BigInt::from(self.d);
                    let (vn, _) = arith::valuation(&n, p.l);
                    let k = vn + 5;
                    let r = self.sqrt_d_image(p, k);
                    let modulus = BigInt::from(p.l).pow(k);
                    let z = (&xx + &yy * r).mod_floor(&modulus);
                    if z.is_zero() {
                        return Err(Error::InternalInconsistency("localization precision".into()));
                    }
                    let (v, u) = arith::valuation(&z, p.l);
                    let field = LocalField::Qp(p.l);
                    let cls = if p.l == 2 {
                        SquareClass {
                            field,
                            val_odd: v % 2 == 1,
                            unit: u.mod_floor(&BigInt::from(8)).to_u8().unwrap(),
                        }
                    } else {
                        let s = arith::legendre_big(&u, p.l);
                        SquareClass { field, val_odd: v % 2 == 1, unit: (s == -1) as u8 }
                    };
                    Ok(cls.mul(&SquareClass::of_rational(&qb(dd), field)))
                }
                _ => Err(Error::Unsupported(format!(
                    "completion at {} over {} is not handled",
                    w, p.l
                ))),
            },
        }
    }

    /// Square class of a rational number viewed in the completion at `w`.
    pub fn local_field(&self, w: &QuadPlace) -> Result<LocalField> {
        match w {
            QuadPlace::Real(_) => Ok(LocalField::Real),
            QuadPlace::Finite(p) if p.kind == PrimeKind::Split => Ok(LocalField::Qp(p.l)),
            QuadPlace::Finite(p) if p.kind == PrimeKind::Inert && p.l != 2 => Ok(LocalField::UnramQuad(p.l)),
            _ => Err(Error::Unsupported(format!("completion at {w}"))),
        }
    }

    /// The infinite places of the field.
    pub fn infinite_places(&self) -> Vec<QuadPlace> {
        if self.is_real() {
            vec![QuadPlace::Real(1), QuadPlace::Real(-1)]
        } else {
            vec![]
        }
    }
}

/// Builds Q(√d): class number from reduced forms, fundamental unit from the principal cycle.
pub fn make_field(d: i64) -> Result<QuadFieldCtx> {
    if d == 0 || d == 1 || arith::squarefree_part(d as i128)? != d as i128 {
        return Err(Error::InvalidInput(format!("{d} is not a squarefree integer other than 0, 1")));
    }
    if d.abs() > MAX_ABS_D {
        return Err(Error::BudgetExceeded(format!("|d| = {} above {}", d.abs(), MAX_ABS_D)));
    }
    let disc = arith::quad_disc(d as i128) as i64;
    if d < 0 {
        let h = count_reduced_definite(disc);
        return Ok(QuadFieldCtx {
            d,
            disc,
            class_number: h,
            narrow_class_number: h,
            fundamental_unit: None,
            principal_cycle_len: 0,
        });
    }
    let (cycles, principal_len) = indefinite_cycles(disc);
    let mut ctx = QuadFieldCtx {
        d,
        disc,
        class_number: 0,
        narrow_class_number: cycles,
        fundamental_unit: None,
        principal_cycle_len: principal_len,
    };
    let eps = fundamental_unit(&ctx);
    let h = if eps.norm().is_negative() { cycles } else { cycles / 2 };
    ctx.class_number = h;
    ctx.fundamental_unit = Some(eps);
    Ok(ctx)
}

fn count_reduced_definite(disc: i64) -> u64 {
    let n = -disc;
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

/// Reduced indefinite primitive forms of discriminant Δ.
fn reduced_indefinite_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    let r = (disc as f64).sqrt() as i64;
    let r = (r - 2..=r + 2).filter(|&s| s >= 0 && s * s <= disc).max().unwrap();
    let dd = BigInt::from(disc);
    let mut out = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= r {
        let n = (disc - b * b) / 4;
        for m in 1..=n {
            if m * m > n {
                break;
            }
            if n % m != 0 {
                continue;
            }
            for a_abs in [m, n / m] {
                let two_a = 2 * a_abs;
                if lt_sqrt(&BigInt::from(two_a - b), &dd) && gt_sqrt(&BigInt::from(two_a + b), &dd) {
                    for s in [1, -1] {
                        let (a, c) = (s * a_abs, -s * (n / a_abs));
                        if a.gcd(&b).gcd(&c) == 1 {
                            out.push((a, b, c));
                        }
                    }
                }
                if m * m == n {
                    break;
                }
            }
        }
        b += 2;
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn rho_small(f: (i64, i64, i64), r: i64) -> (i64, i64, i64) {
    let (_, b, c) = f;
    let two_c = 2 * c.abs();
    let nb = r - (r + b).rem_euclid(two_c);
    let disc = b * b - 4 * f.0 * c;
    (c, nb, (nb * nb - disc) / (4 * c))
}

/// Number of cycles of reduced forms and the length of the principal cycle.
fn indefinite_cycles(disc: i64) -> (u64, usize) {
    let forms = reduced_indefinite_forms(disc);
    let r = (disc as f64).sqrt() as i64;
    let r = (r - 2..=r + 2).filter(|&s| s >= 0 && s * s <= disc).max().unwrap();
    let mut seen = std::collections::HashSet::new();
    let mut cycles = 0;
    let mut principal_len = 0;
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        let mut len = 0;
        let mut has_one = false;
        loop {
            seen.insert(g);
            has_one |= g.0 == 1;
            len += 1;
            g = rho_small(g, r);
            if g == f {
                break;
            }
        }
        if has_one {
            principal_len = len;
        }
    }
    (cycles, principal_len)
}

fn fundamental_unit(ctx: &QuadFieldCtx) -> QuadElem {
    let unit_ideal = QuadIdeal { a: BigInt::one(), b: BigInt::zero(), c: BigInt::one() };
    let mut f = ctx.tracked_form(&unit_ideal);
    let disc = BigInt::from(ctx.disc);
    let r = disc.sqrt();
    while !f.is_reduced_indefinite(&disc, &r) {
        f.rho_indefinite(&disc, &r);
    }
    let (a0, b0, c0) = f.key();
    let w0 = f.w1.clone();
    for _ in 0..4 * ctx.principal_cycle_len + 8 {
        f.rho_indefinite(&disc, &r);
        let same = f.b == b0 && ((f.a == a0 && f.c == c0) || (f.a == -&a0 && f.c == -&c0));
        if same {
            let eta = f.w1.div(&w0);
            if eta.is_integral() && eta.norm().abs().is_one() {
                let e = if eta.real_sign(1) < 0 { eta.neg() } else { eta };
                return if e.approx(1).abs() < 1.0 { e.inv() } else { e };
            }
        }
    }
    unreachable!("principal cycle of discriminant {} has no unit", ctx.disc)
}

/// A basis of K(S) as in the odd-class-number description: −1 (or a root-of-unity
/// generator), then ε for real fields, then one x_𝔭 per finite prime of S.
#[derive(Clone, Debug)]
pub struct SUnitBasis {
    pub d: i64,
    pub primes: Vec<QuadPrime>,
    pub names: Vec<String>,
    pub gens: Vec<QuadElem>,
    /// Class-group order of each prime of S, aligned with `primes`.
    pub orders: Vec<u32>,
}

impl SUnitBasis {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Product of the generators selected by the bit mask.
    pub fn element(&self, mask: u64) -> QuadElem {
        let mut r = QuadElem::one(self.d);
        for (i, g) in self.gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                r = r.mul(g);
            }
        }
        r
    }

    /// Label of the product of the generators selected by the mask, e.g. `-y2*y3`.
    pub fn label(&self, mask: u64) -> String {
        if mask == 0 {
            return "1".into();
        }
        let mut neg = false;
        let mut parts = Vec::new();
        for (i, n) in self.names.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if n == "-1" {
                    neg = true;
                } else {
                    parts.push(n.clone());
                }
            }
        }
        let body = parts.join("*");
        match (neg, body.is_empty()) {
            (true, true) => "-1".into(),
            (true, false) => format!("-{body}"),
            _ => body,
        }
    }
}

/// S-unit basis for a field of odd class number and finite primes S.
pub fn s_unit_basis(k: &QuadFieldCtx, s: &[QuadPrime]) -> Result<SUnitBasis> {
    if k.class_number % 2 == 0 {
        return Err(Error::OddClassNumberRequired(k.class_number));
    }
    let mut names = vec!["-1".to_string()];
    let mut gens = vec![QuadElem::from_ints(-1, 0, k.d)];
    if k.d == -1 {
        names[0] = "i".into();
        gens[0] = QuadElem::from_ints(0, 1, -1);
    }
    if let Some(e) = &k.fundamental_unit {
        names.push("eps".into());
        gens.push(e.clone());
    }
    let mut orders = Vec::new();
    for (i, p) in s.iter().enumerate() {
        let (ord, x) = k.class_order_and_generator(p)?;
        orders.push(ord);
        names.push(format!("x_{}_{}", p.l, i));
        gens.push(x);
    }
    Ok(SUnitBasis { d: k.d, primes: s.to_vec(), names, gens, orders })
}

/// A sign/unit normalization requirement on one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Generator is a square in the completion at the place.
    SquareAt(usize, QuadPlace),
    /// Generator has positive norm.
    PositiveNorm(usize),
    /// The place is unramified in K(√x) (over 2: class in ⟨−3⟩; odd: even valuation).
    UnramifiedAt(usize, QuadPlace),
    /// Image at the real place is positive.
    PositiveAt(usize, QuadPlace),
}

impl Constraint {
    fn target(&self) -> usize {
        match self {
            Constraint::SquareAt(i, _)
            | Constraint::PositiveNorm(i)
            | Constraint::UnramifiedAt(i, _)
            | Constraint::PositiveAt(i, _) => *i,
        }
    }

    fn holds(&self, k: &QuadFieldCtx, x: &QuadElem) -> Result<bool> {
        Ok(match self {
            Constraint::SquareAt(_, w) => k.localize(x, w)?.is_trivial(),
            Constraint::PositiveNorm(_) => x.norm().is_positive(),
            Constraint::UnramifiedAt(_, w) => is_unramified_class(&k.localize(x, w)?),
            Constraint::PositiveAt(_, w) => k.localize(x, w)?.is_trivial(),
        })
    }
}

/// Whether adjoining a square root of an element of this class is unramified.
pub fn is_unramified_class(c: &SquareClass) -> bool {
    match c.field {
        LocalField::Qp(2) => !c.val_odd && c.unit % 4 == 1,
        LocalField::Real => true,
        _ => !c.val_odd,
    }
}

/// Adjusts generators by multipliers 1, −1, ε, −ε (in that order) until all constraints hold.
pub fn normalize_signs(k: &QuadFieldCtx, basis: &SUnitBasis, constraints: &[Constraint]) -> Result<SUnitBasis> {
    let mut out = basis.clone();
    let mut multipliers = vec![QuadElem::one(k.d), QuadElem::from_ints(-1, 0, k.d)];
    if let Some(e) = &k.fundamental_unit {
        multipliers.push(e.clone());
        multipliers.push(e.neg());
    }
    let mut targets: Vec<usize> = constraints.iter().map(Constraint::target).collect();
    targets.sort_unstable();
    targets.dedup();
    for t in targets {
        let cs: Vec<&Constraint> = constraints.iter().filter(|c| c.target() == t).collect();
        let mut found = None;
        for m in &multipliers {
            let cand = basis.gens[t].mul(m);
            let mut ok = true;
            for c in &cs {
                if !c.holds(k, &cand)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                found = Some(cand);
                break;
            }
        }
        out.gens[t] = found.ok_or_else(|| Error::Unsatisfiable(format!("generator {}", basis.names[t])))?;
    }
    Ok(out)
}

/// Localization vectors of the basis over a list of places, one bit row per generator.
pub fn localization_rows(k: &QuadFieldCtx, basis: &SUnitBasis, places: &[QuadPlace]) -> Result<Vec<u64>> {
    let mut rows = Vec::with_capacity(basis.len());
    for g in &basis.gens {
        rows.push(localize_vector(k, g, places)?);
    }
    Ok(rows)
}

/// Concatenated F₂ coordinates of the square classes of `x` at `places`.
pub fn localize_vector(k: &QuadFieldCtx, x: &QuadElem, places: &[QuadPlace]) -> Result<u64> {
    let mut v = 0u64;
    let mut shift = 0;
    for w in places {
        let c = k.localize(x, w)?;
        v |= c.bits() << shift;
        shift += c.field.class_dim();
    }
    Ok(v)
}

/// Auxiliary places at which S-units are units, used to separate square classes.
pub fn auxiliary_places(k: &QuadFieldCtx, exclude: &[u64], count: usize) -> Vec<QuadPlace> {
    let mut out = Vec::new();
    for l in arith::primes_in(3, 100_000) {
        if exclude.contains(&l) || k.disc.rem_euclid(l as i64) == 0 {
            continue;
        }
        for p in k.primes_above(l) {
            out.push(QuadPlace::Finite(p));
        }
        if out.len() >= count {
            break;
        }
    }
    out
}

/// Localization vectors of the basis and of `x` over S plus auxiliary places, in chunks
/// of places so each chunk fits in 64 bits.
fn chunked_rows(
    k: &QuadFieldCtx,
    basis: &SUnitBasis,
    places: &[QuadPlace],
) -> Result<Vec<Vec<u64>>> {
    places.chunks(16).map(|c| localization_rows(k, basis, c)).collect()
}

fn combine(rows: &[u64], mask: u64) -> u64 {
    rows.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |v, (_, r)| v ^ r)
}

fn places_with_aux(basis: &SUnitBasis, k: &QuadFieldCtx, s_places: &[QuadPlace], extra: usize) -> Vec<QuadPlace> {
    let exclude: Vec<u64> = basis.primes.iter().map(|p| p.l).collect();
    let mut places = s_places.to_vec();
    places.extend(auxiliary_places(k, &exclude, extra));
    places
}

/// Coordinates of `x` in the basis of K(S), found by matching localizations at S and at
/// enough auxiliary places for the localization map to be injective.
pub fn coords(k: &QuadFieldCtx, basis: &SUnitBasis, s_places: &[QuadPlace], x: &QuadElem) -> Result<u64> {
    let n = basis.len();
    if n > 20 {
        return Err(Error::Unsupported("basis too large for coordinate search".into()));
    }
    for extra in [16usize, 48, 128] {
        let places = places_with_aux(basis, k, s_places, extra);
        let rows = chunked_rows(k, basis, &places)?;
        let target: Vec<u64> =
            places.chunks(16).map(|c| localize_vector(k, x, c)).collect::<Result<_>>()?;
        let mut hits = (0..(1u64 << n))
            .filter(|&m| rows.iter().zip(&target).all(|(r, t)| combine(r, m) == *t))
            .take(2);
        match (hits.next(), hits.next()) {
            (Some(m), None) => return Ok(m),
            (None, _) => return Err(Error::InvalidInput(format!("{x} is not in K(S)"))),
            _ => continue,
        }
    }
    Err(Error::InternalInconsistency("localization map not injective on K(S)".into()))
}

/// Checks F₂-independence of the basis through localizations at S and auxiliary places.
pub fn basis_is_independent(k: &QuadFieldCtx, basis: &SUnitBasis, s_places: &[QuadPlace]) -> Result<bool> {
    let places = places_with_aux(basis, k, s_places, 24);
    let rows = chunked_rows(k, basis, &places)?;
    let n = basis.len();
    Ok((1..(1u64 << n)).all(|m| rows.iter().any(|r| combine(r, m) != 0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_unit(d: i64) -> QuadElem {
        // Smallest unit > 1: search (x + y√d)/2 or x + y√d with norm ±1.
        let half = d.rem_euclid(4) == 1;
        for y in 1i64.. {
            for s in [-4i64, 4, -1, 1] {
                if !half && s.abs() == 4 {
                    continue;
                }
                if half && s.abs() == 1 {
                    continue;
                }
                let t = d as i128 * (y as i128) * (y as i128) + s as i128;
                if t <= 0 || !arith::is_square_i128(t) {
                    continue;
                }
                let x = (t as f64).sqrt().round() as i64;
                let e = if half {
                    QuadElem::new(BigRational::new(x.into(), 2.into()), BigRational::new(y.into(), 2.into()), d)
                } else {
                    QuadElem::from_ints(x, y, d)
                };
                return e;
            }
        }
        unreachable!()
    }

    #[test]
    fn class_numbers() {
        assert_eq!(make_field(-23).unwrap().class_number, 3);
        assert_eq!(make_field(-1).unwrap().class_number, 1);
        assert_eq!(make_field(-3).unwrap().class_number, 1);
        assert_eq!(make_field(-5).unwrap().class_number, 2);
        assert_eq!(make_field(-47).unwrap().class_number, 5);
        assert_eq!(make_field(-191).unwrap().class_number, 13);
        assert_eq!(make_field(10).unwrap().class_number, 2);
        assert_eq!(make_field(79).unwrap().class_number, 3);
        assert_eq!(make_field(3).unwrap().class_number, 1);
        assert_eq!(make_field(229).unwrap().class_number, 3);
    }

    #[test]
    fn fundamental_units_match_search() {
        let k = make_field(17).unwrap();
        assert_eq!(k.fundamental_unit.clone().unwrap(), QuadElem::from_ints(4, 1, 17));
        assert_eq!(k.unit_norm(), Some(-1));
        for d in [2i64, 3, 5, 6, 7, 10, 13, 14, 21, 29, 31, 41, 73, 97, 113] {
            let k = make_field(d).unwrap();
            assert_eq!(k.fundamental_unit.clone().unwrap(), brute_unit(d), "d = {d}");
        }
    }

    #[test]
    fn splitting_examples() {
        let k = make_field(-23).unwrap();
        assert!(matches!(k.split_prime(2), Splitting::Split(..)));
        assert!(matches!(make_field(-1).unwrap().split_prime(3), Splitting::Inert(_)));
        assert!(matches!(make_field(241).unwrap().split_prime(241), Splitting::Ramified(_)));
    }

    #[test]
    fn generators_of_prime_powers() {
        let k = make_field(-1).unwrap();
        let p = k.primes_above(2)[0];
        let (ord, x) = k.class_order_and_generator(&p).unwrap();
        assert_eq!(ord, 1);
        assert_eq!(x.norm(), q(2));

        let k = make_field(-23).unwrap();
        let p = k.primes_above(2)[0];
        let (ord, x) = k.class_order_and_generator(&p).unwrap();
        assert_eq!(ord, 3);
        assert_eq!(x.norm(), q(8));
        // x lies in 𝔭³: its image under the 𝔭-adic embedding is divisible by 8.
        let c = k.localize(&x, &QuadPlace::Finite(p)).unwrap();
        assert!(c.val_odd);
        let c2 = k.localize(&x, &QuadPlace::Finite(k.conjugate_prime(&p))).unwrap();
        assert!(!c2.val_odd);

        let r = k.primes_above(23)[0];
        let (ord, x) = k.class_order_and_generator(&r).unwrap();
        assert_eq!(ord, 1);
        assert_eq!(x.norm().abs(), q(23));
    }

    #[test]
    fn real_generators() {
        for d in [17i64, 41, 73, 97, 113, 241, 79] {
            let k = make_field(d).unwrap();
            for l in [2u64, 3, 5, 7] {
                for p in k.primes_above(l) {
                    if p.kind != PrimeKind::Split {
                        continue;
                    }
                    let (ord, x) = k.class_order_and_generator(&p).unwrap();
                    assert_eq!(x.norm().abs(), qb(BigInt::from(l).pow(ord)));
                    assert!(x.is_integral());
                    assert_eq!(k.class_number % ord as u64, 0);
                }
            }
        }
    }

    #[test]
    fn localize_is_multiplicative() {
        let k = make_field(-191).unwrap();
        let ps = k.primes_above(2);
        let (_, x) = k.class_order_and_generator(&ps[0]).unwrap();
        let y = QuadElem::from_ints(3, 5, -191);
        for w in [QuadPlace::Finite(ps[0]), QuadPlace::Finite(ps[1])] {
            let a = k.localize(&x, &w).unwrap();
            let b = k.localize(&y, &w).unwrap();
            assert_eq!(k.localize(&x.mul(&y), &w).unwrap(), a.mul(&b));
        }
    }
}
