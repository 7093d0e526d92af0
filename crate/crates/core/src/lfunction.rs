//! L(E,1) for elliptic curves Y² = (X − r₁)(X − r₂)(X − r₃) with integer roots.
//!
//! The conductor exponent and a₂ at 2 (and the exponent at an additive 3) are not derived by
//! Tate's algorithm; every admissible choice is tested against the functional equation
//! θ(1/t) = ε·t²·θ(t), θ(t) = Σ aₙ e^{−2πnt/√N}, and the survivor is used for
//! L(E,1) = (1 + ε)·Σ aₙ/n·e^{−2πn/√N}. A nonzero value gives analytic rank 0, hence
//! rank 0 by the theorems of Gross–Zagier and Kolyvagin.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::localdescent::SplitModel;

const TEST_POINTS: [f64; 2] = [1.1, 1.27];
const RESIDUAL_TOL: f64 = 1e-9;
const MAX_TERMS: usize = 3_000_000;

/// Functional-equation data and the central value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralValue {
    pub conductor: u64,
    pub root_number: i8,
    pub a2: i64,
    pub l_value: f64,
    /// Bound on the truncation error of `l_value`.
    pub tail_bound: f64,
    pub terms: usize,
    /// Worst relative residual of the functional equation at the test points.
    pub residual: f64,
    /// Other (N, ε, a₂) choices that also satisfied the functional equation.
    pub ambiguous: usize,
}

impl CentralValue {
    pub fn nonvanishing(&self) -> bool {
        self.ambiguous == 0 && self.l_value.abs() > 1e-6 + 10.0 * self.tail_bound
    }
}

/// Roots shifted to (0, d₁, d₂) and divided by q² while all are divisible by it.
fn reduce_roots(model: &SplitModel) -> Result<(i64, i64)> {
    if model.degree() != 3 {
        return Err(Error::InvalidInput("L(E,1) needs a cubic model".into()));
    }
    let (mut d1, mut d2) = (model.roots[1] - model.roots[0], model.roots[2] - model.roots[0]);
    for (q, _) in arith::factor(d1.gcd(&d2) as i128)?.factors {
        let q2 = (q * q) as i64;
        while d1 % q2 == 0 && d2 % q2 == 0 {
            d1 /= q2;
            d2 /= q2;
        }
    }
    Ok((d1, d2))
}

fn count_ap(d1: i64, d2: i64, p: u64, is_sq: &mut Vec<bool>) -> i64 {
    let pu = p as usize;
    is_sq.clear();
    is_sq.resize(pu, false);
    for x in 1..pu {
        is_sq[x * x % pu] = true;
    }
    let pi = p as i64;
    let (a, b) = (d1.rem_euclid(pi), d2.rem_euclid(pi));
    let mut s = 0i64;
    for x in 0..pi {
        let v = (x * ((x - a).rem_euclid(pi)) % pi) * ((x - b).rem_euclid(pi)) % pi;
        if v != 0 {
            s += if is_sq[v as usize] { 1 } else { -1 };
        }
    }
    -s
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Reduction {
    Good,
    Multiplicative,
    Additive,
}

fn reduction_type(d1: i64, d2: i64, q: u64) -> Reduction {
    let q = q as i64;
    let mut rs = [0, d1.rem_euclid(q), d2.rem_euclid(q)];
    rs.sort_unstable();
    let distinct = 1 + usize::from(rs[1] != rs[0]) + usize::from(rs[2] != rs[1]);
    match distinct {
        3 => Reduction::Good,
        2 => Reduction::Multiplicative,
        _ => Reduction::Additive,
    }
}

/// Odd-part coefficients aₘ (m odd, m ≤ terms), with 0 at even indices.
fn odd_coefficients(d1: i64, d2: i64, terms: usize) -> Vec<f64> {
    let mut spf = vec![0u32; terms + 1];
    for i in 2..=terms {
        if spf[i] == 0 {
            let mut j = i;
            while j <= terms {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut a = vec![0f64; terms + 1];
    if terms >= 1 {
        a[1] = 1.0;
    }
    let mut scratch = Vec::new();
    let mut ap = vec![0i64; terms + 1];
    for n in (3..=terms).step_by(2) {
        let p = spf[n] as usize;
        let mut pk = p;
        while (n / pk) % p == 0 {
            pk *= p;
        }
        if pk != n {
            a[n] = a[pk] * a[n / pk];
            continue;
        }
        if p == n {
            ap[p] = count_ap(d1, d2, p as u64, &mut scratch);
            a[n] = ap[p] as f64;
        } else if reduction_type(d1, d2, p as u64) == Reduction::Good {
            a[n] = ap[p] as f64 * a[n / p] - p as f64 * a[n / p / p];
        } else {
            a[n] = ap[p] as f64 * a[n / p];
        }
    }
    a
}

fn theta(a: &[f64], t: f64, sqrt_n: f64) -> f64 {
    let r = (-2.0 * std::f64::consts::PI * t / sqrt_n).exp();
    let mut w = 1.0;
    let mut s = 0.0;
    for &c in &a[1..] {
        w *= r;
        if w < 1e-300 {
            break;
        }
        s += c * w;
    }
    s
}

/// Central value of E: Y² = (X − r₁)(X − r₂)(X − r₃).
pub fn central_value(model: &SplitModel) -> Result<CentralValue> {
    let (d1, d2) = reduce_roots(model)?;
    let disc_support = arith::factor(2 * d1 as i128 * d2 as i128 * (d2 - d1) as i128)?;
    let mut odd_part: u64 = 1;
    let mut three_options = vec![0u32];
    for (q, _) in &disc_support.factors {
        let q = *q as u64;
        if q == 2 {
            continue;
        }
        match reduction_type(d1, d2, q) {
            Reduction::Good => {}
            Reduction::Multiplicative => odd_part *= q,
            Reduction::Additive if q == 3 => three_options = vec![2, 3, 4, 5],
            Reduction::Additive => odd_part *= q * q,
        }
    }
    let max_n = odd_part as f64 * 256.0 * 3f64.powi(*three_options.iter().max().unwrap() as i32);
    let terms = (9.0 * max_n.sqrt()).ceil() as usize + 10;
    if terms > MAX_TERMS {
        return Err(Error::Unsupported(format!("conductor up to {max_n:e} needs {terms} terms")));
    }
    let odd = odd_coefficients(d1, d2, terms);
    let v2: Vec<u32> = (0..=terms).map(|n| if n == 0 { 0 } else { n.trailing_zeros() }).collect();
    let mut passing: Vec<CentralValue> = Vec::new();
    for f2 in 0..=8u32 {
        let a2_options: Vec<i64> = match f2 {
            0 => vec![-2, -1, 0, 1, 2],
            1 => vec![-1, 1],
            _ => vec![0],
        };
        for &f3 in &three_options {
            let conductor = odd_part * 2u64.pow(f2) * 3u64.pow(f3);
            let sqrt_n = (conductor as f64).sqrt();
            for &a2 in &a2_options {
                let mut pow2 = vec![1f64; 40];
                for k in 1..40 {
                    pow2[k] = if f2 == 0 {
                        a2 as f64 * pow2[k - 1] - if k >= 2 { 2.0 * pow2[k - 2] } else { 0.0 }
                    } else {
                        a2 as f64 * pow2[k - 1]
                    };
                }
                let a: Vec<f64> = (0..=terms)
                    .map(|n| if n == 0 { 0.0 } else { pow2[v2[n] as usize] * odd[n >> v2[n]] })
                    .collect();
                for eps in [1i8, -1] {
                    let mut residual = 0f64;
                    for &t in &TEST_POINTS {
                        let lhs = theta(&a, 1.0 / t, sqrt_n);
                        let rhs = eps as f64 * t * t * theta(&a, t, sqrt_n);
                        residual = residual.max((lhs - rhs).abs() / (lhs.abs() + rhs.abs() + 1e-300));
                    }
                    if residual < RESIDUAL_TOL {
                        let c = 2.0 * std::f64::consts::PI / sqrt_n;
                        let r = (-c).exp();
                        let mut w = 1.0;
                        let mut s = 0.0;
                        for (n, &an) in a.iter().enumerate().skip(1) {
                            w *= r;
                            s += an / n as f64 * w;
                        }
                        let l_value = (1.0 + eps as f64) * s;
                        let tail_bound = 2.0 * (-c * (terms as f64 + 1.0)).exp() / (1.0 - r);
                        passing.push(CentralValue {
                            conductor,
                            root_number: eps,
                            a2,
                            l_value,
                            tail_bound,
                            terms,
                            residual,
                            ambiguous: 0,
                        });
                    }
                }
            }
        }
    }
    let extra = passing.len().saturating_sub(1);
    match passing.into_iter().next() {
        Some(mut v) => {
            v.ambiguous = extra;
            Ok(v)
        }
        None => Err(Error::Incomplete("no conductor candidate satisfies the functional equation".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn congruent_number_curves() {
        // n = 1: conductor 32, L ≠ 0. n = 5: rank 1, root number −1.
        let v = central_value(&SplitModel::new(&[-1, 0, 1]).unwrap()).unwrap();
        assert_eq!(v.conductor, 32);
        assert!(v.nonvanishing());
        let v = central_value(&SplitModel::new(&[-5, 0, 5]).unwrap()).unwrap();
        assert_eq!(v.root_number, -1);
        assert!(!v.nonvanishing());
        // n = 17: rank 0 with nontrivial Sha[2].
        let v = central_value(&SplitModel::new(&[-17, 0, 17]).unwrap()).unwrap();
        assert_eq!(v.conductor, 32 * 289);
        assert!(v.nonvanishing());
    }

    #[test]
    fn conductor_twenty_four() {
        // y² = (x − 1)(x − 2)(x + 2) has conductor 24 and rank 0.
        let v = central_value(&SplitModel::new(&[-2, 1, 2]).unwrap()).unwrap();
        assert_eq!((v.conductor, v.root_number, v.ambiguous), (24, 1, 0));
        assert!(v.nonvanishing());
    }
}
