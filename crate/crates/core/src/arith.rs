//! Exact integer and rational primitives.
//!
//! Everything that decides an arithmetic identity goes through this module.
//! Hot paths run on `i128`/`u128` with checked arithmetic and fall back to
//! [`BigInt`] when an intermediate would overflow.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_bigint::BigInt as Int;
pub use num_rational::BigRational as Rat;

/// `⌊√v⌋` for a signed input; negative values are rejected.
pub fn isqrt(v: i128) -> Result<u128> {
    if v < 0 {
        return Err(Error::Domain(format!("isqrt of negative value {v}")));
    }
    Ok(isqrt_u128(v as u128))
}

/// `⌊√v⌋`, seeded from the float estimate and corrected exactly.
pub fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut r = (v as f64).sqrt() as u128;
    // the f64 seed is within a few ulps; walk to the exact floor
    while r.checked_mul(r).map_or(true, |sq| sq > v) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= v) {
        r += 1;
    }
    r
}

// Quadratic residue tables for cheap rejection before the square root.
const fn residue_table<const M: usize>() -> [bool; M] {
    let mut t = [false; M];
    let mut i = 0;
    while i < M {
        t[(i * i) % M] = true;
        i += 1;
    }
    t
}

static QR64: [bool; 64] = residue_table::<64>();
static QR63: [bool; 63] = residue_table::<63>();
static QR65: [bool; 65] = residue_table::<65>();
static QR11: [bool; 11] = residue_table::<11>();

/// Returns `√v` when `v` is a perfect square.
#[inline]
pub fn square_root_exact(v: u128) -> Option<u128> {
    if let Ok(small) = u64::try_from(v) {
        return square_root_exact_u64(small).map(u128::from);
    }
    if !QR64[(v % 64) as usize]
        || !QR63[(v % 63) as usize]
        || !QR65[(v % 65) as usize]
        || !QR11[(v % 11) as usize]
    {
        return None;
    }
    let r = isqrt_u128(v);
    (r * r == v).then_some(r)
}

#[inline]
fn square_root_exact_u64(v: u64) -> Option<u64> {
    if !QR64[(v & 63) as usize] || !QR63[(v % 63) as usize] || !QR65[(v % 65) as usize] || !QR11[(v % 11) as usize] {
        return None;
    }
    let r = isqrt_u128(v as u128) as u64;
    (r * r == v).then_some(r)
}

/// Returns `√v` when `v ≥ 0` is a perfect square, `None` otherwise.
pub fn is_perfect_square(v: i128) -> Option<u128> {
    if v < 0 {
        None
    } else {
        square_root_exact(v as u128)
    }
}

/// Prime factorization, sorted by prime.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds from `(prime, exponent)` pairs in any order; duplicates are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u32)>) -> Self {
        let mut f = Self::one();
        for (p, e) in pairs {
            f.push(p, e);
        }
        f
    }

    fn push(&mut self, p: u64, e: u32) {
        if e == 0 {
            return;
        }
        match self.factors.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (p, e)),
        }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Product of two factorizations (exponents add).
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut out = self.clone();
        for &(p, e) in &other.factors {
            out.push(p, e);
        }
        out
    }

    /// The factored value, or `None` on `u128` overflow.
    pub fn value(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (0..e).try_fold(acc, |a, _| a.checked_mul(p as u128))
        })
    }
}

/// Trial-division factorization. Zero is rejected.
pub fn factor(v: u64) -> Result<Factorization> {
    if v == 0 {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let mut out = Vec::new();
    let mut rest = v;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut p = 5u64;
    while p.saturating_mul(p) <= rest {
        push(p, &mut rest);
        push(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(Factorization { factors: out })
}

/// Splits the factored value `v` as `s·m²` with `s` square-free.
pub fn squarefree_split(f: &Factorization) -> (u128, u128) {
    let mut s = 1u128;
    let mut m = 1u128;
    for &(p, e) in f.factors() {
        let p = p as u128;
        if e % 2 == 1 {
            s *= p;
        }
        for _ in 0..e / 2 {
            m *= p;
        }
    }
    (s, m)
}

fn cmp_sum_with_square_i128(f1: u128, f2: u128, p: i128, q: i128) -> Option<Ordering> {
    // √f1 + √f2 vs p/q, p ≥ 0, q > 0:  D·q² = p² − (f1+f2)q²,  compare (Dq²)² with 4 f1 f2 q⁴
    let (f1, f2) = (i128::try_from(f1).ok()?, i128::try_from(f2).ok()?);
    let q2 = q.checked_mul(q)?;
    let dq2 = p.checked_mul(p)?.checked_sub(f1.checked_add(f2)?.checked_mul(q2)?)?;
    if dq2 < 0 {
        return Some(Ordering::Greater);
    }
    let lhs = f1.checked_mul(f2)?.checked_mul(4)?.checked_mul(q2)?.checked_mul(q2)?;
    let rhs = dq2.checked_mul(dq2)?;
    Some(lhs.cmp(&rhs))
}

fn cmp_sum_with_square_big(f1: u128, f2: u128, p: &BigInt, q: &BigInt) -> Ordering {
    let (f1, f2) = (BigInt::from(f1), BigInt::from(f2));
    let q2 = q * q;
    let dq2 = p * p - (&f1 + &f2) * &q2;
    if dq2.is_negative() {
        return Ordering::Greater;
    }
    let lhs: BigInt = f1 * f2 * 4 * &q2 * &q2;
    lhs.cmp(&(&dq2 * &dq2))
}

/// Exact ordering of `√f1 + √f2` against the rational `p/q` (`q > 0`).
pub fn cmp_sqrt_sum_frac(f1: u128, f2: u128, p: i128, q: i128) -> Ordering {
    assert!(q > 0, "denominator must be positive");
    if p < 0 {
        return Ordering::Greater;
    }
    cmp_sum_with_square_i128(f1, f2, p, q)
        .unwrap_or_else(|| cmp_sum_with_square_big(f1, f2, &BigInt::from(p), &BigInt::from(q)))
}

/// Exact ordering of `√f1 + √f2` against the rational `r`.
///
/// Decided by two squarings: with `D = r² − f1 − f2`, a negative `D` means
/// the sum is larger; otherwise `4·f1·f2` is compared against `D²`.
pub fn cmp_sqrt_sum(f1: u128, f2: u128, r: &BigRational) -> Ordering {
    if r.is_negative() {
        return Ordering::Greater;
    }
    match (r.numer().to_i128(), r.denom().to_i128()) {
        (Some(p), Some(q)) => cmp_sqrt_sum_frac(f1, f2, p, q),
        _ => cmp_sum_with_square_big(f1, f2, r.numer(), r.denom()),
    }
}

/// Exact ordering of `√f1 + √f2` against `√f3`.
pub fn cmp_sqrt_sum_sqrt(f1: u128, f2: u128, f3: u128) -> Ordering {
    // D = f3 − f1 − f2; sum² = f1 + f2 + 2√(f1 f2)
    let fast = || -> Option<Ordering> {
        let (a, b, c) = (i128::try_from(f1).ok()?, i128::try_from(f2).ok()?, i128::try_from(f3).ok()?);
        let d = c.checked_sub(a)?.checked_sub(b)?;
        if d < 0 {
            return Some(Ordering::Greater);
        }
        Some(a.checked_mul(b)?.checked_mul(4)?.cmp(&d.checked_mul(d)?))
    };
    fast().unwrap_or_else(|| {
        let (a, b, c) = (BigInt::from(f1), BigInt::from(f2), BigInt::from(f3));
        let d = &c - &a - &b;
        if d.is_negative() {
            return Ordering::Greater;
        }
        (a * b * BigInt::from(4)).cmp(&(&d * &d))
    })
}

/// `(f3 − f1 − f2)² − 4·f1·f2` as a big integer. It vanishes exactly when
/// `√f3 = ±√f1 ± √f2` for some choice of signs.
pub fn resonance_discriminant(f1: u128, f2: u128, f3: u128) -> BigInt {
    let (a, b, c) = (BigInt::from(f1), BigInt::from(f2), BigInt::from(f3));
    let d = &c - &a - &b;
    &d * &d - a * b * 4
}

/// Reduced rational `p/q` from integers; `q` must be nonzero.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Greatest common divisor on `u64`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Best `f64` value of a big integer (saturating to ±∞).
pub fn big_to_f64(v: &BigInt) -> f64 {
    if v.is_zero() {
        0.0
    } else {
        v.to_f64().unwrap_or(if v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
    }
}
