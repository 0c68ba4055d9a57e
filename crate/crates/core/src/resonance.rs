//! Three-wave resonances, small divisors, normal-form coefficients,
//! kernel solutions of the time-periodic linearization and the pair
//! counting function.
//!
//! A triple `(n₁, n₂, n₃)` is resonant when `Λ(n₃) = Λ(n₁) + Λ(n₂)`, i.e.
//! `√F(n₃) = √F(n₁) + √F(n₂)`. Every test here is decided on integers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, cmp_sqrt_sum, cmp_sqrt_sum_frac, cmp_sqrt_sum_sqrt, Factorization};
use crate::dispersion::{cubic, frequency, ModeIndex};
use crate::error::{Error, Result};

/// `F(n) = s·m²` with `s` square-free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreeForm {
    pub n: ModeIndex,
    pub s: u128,
    pub m: u128,
}

impl SquarefreeForm {
    /// Defined for `n ≥ 2` only, where `F(n) > 0`.
    pub fn of(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("square-free form needs n ≥ 2, got {n}")));
        }
        let f: Factorization = arith::factor(n)?
            .mul(&arith::factor(n - 1)?)
            .mul(&arith::factor(n + 2)?);
        let (s, m) = arith::squarefree_split(&f);
        debug_assert_eq!(s * m * m, cubic(n));
        Ok(Self { n: ModeIndex(n), s, m })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, x: f64) -> f64 {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

/// Signs `(s₁, s₂)` of the combination `Λ(n₃) + s₁Λ(n₁) + s₂Λ(n₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern(pub Sign, pub Sign);

impl SignPattern {
    pub const MINUS_MINUS: SignPattern = SignPattern(Sign::Minus, Sign::Minus);
    pub const MINUS_PLUS: SignPattern = SignPattern(Sign::Minus, Sign::Plus);
    pub const PLUS_MINUS: SignPattern = SignPattern(Sign::Plus, Sign::Minus);
    pub const PLUS_PLUS: SignPattern = SignPattern(Sign::Plus, Sign::Plus);
}

/// A small-divisor value; resonances are reported as an exact zero rather
/// than a tiny float.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Divisor {
    ExactZero,
    Value(f64),
}

impl Divisor {
    pub fn value(self) -> f64 {
        match self {
            Divisor::ExactZero => 0.0,
            Divisor::Value(v) => v,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Divisor::ExactZero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceTriple {
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub resonant: bool,
    /// `Λ(n₃) − Λ(n₁) − Λ(n₂)`; `None` for resonant triples.
    pub divisor: Option<f64>,
}

impl ResonanceTriple {
    pub fn resonant(n1: u64, n2: u64, n3: u64) -> Self {
        let (n1, n2) = (n1.min(n2), n1.max(n2));
        Self { n1, n2, n3, resonant: true, divisor: None }
    }
}

fn require_oscillatory(ns: &[u64]) -> Result<()> {
    match ns.iter().find(|&&n| n < 2) {
        Some(n) => Err(Error::Domain(format!("mode {n} is degenerate; resonance needs all degrees ≥ 2"))),
        None => Ok(()),
    }
}

/// True iff `Λ(n₃) = Λ(n₁) + Λ(n₂)` exactly.
///
/// Equivalent to `[F₁ + F₂ − F₃]² = 4F₁F₂` together with `F₃ ≥ F₁ + F₂`,
/// which excludes the re-oriented solutions `Λ₁ = Λ₂ + Λ₃` of the squared
/// identity.
pub fn is_resonant(n1: u64, n2: u64, n3: u64) -> Result<bool> {
    require_oscillatory(&[n1, n2, n3])?;
    Ok(cmp_sqrt_sum_sqrt(cubic(n1), cubic(n2), cubic(n3)) == Ordering::Equal)
}

/// All resonant triples with `2 ≤ n₁ ≤ n₂` and `n₃ ≤ n_max`, sorted.
///
/// Degrees are bucketed by the square-free part `s` of `F(n)`. If
/// `√s₁·m₁ + √s₂·m₂ = √s₃·m₃` with `s₁, s₂, s₃` square-free, squaring gives
/// `2m₁m₂√(s₁s₂) ∈ ℚ`, so `s₁s₂` is a square and `s₁ = s₂`; then
/// `(m₁ + m₂)√s₁ = m₃√s₃` forces `s₃ = s₁` as well. Within one bucket the
/// condition is just `m₃ = m₁ + m₂`, so the search over buckets is complete.
pub fn enumerate_resonances(n_max: u64) -> Result<Vec<ResonanceTriple>> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be ≥ 2, got {n_max}")));
    }
    let forms: Vec<SquarefreeForm> = (2..=n_max)
        .into_par_iter()
        .map(SquarefreeForm::of)
        .collect::<Result<_>>()?;
    let mut buckets: HashMap<u128, Vec<(u128, u64)>> = HashMap::new();
    for f in &forms {
        buckets.entry(f.s).or_default().push((f.m, f.n.0));
    }
    let buckets: Vec<Vec<(u128, u64)>> = buckets.into_values().filter(|b| b.len() >= 2).collect();

    let mut out: Vec<ResonanceTriple> = buckets
        .par_iter()
        .flat_map_iter(|bucket| {
            // F increases with n, so m increases along the bucket
            let by_m: HashMap<u128, u64> = bucket.iter().copied().collect();
            let mut found = Vec::new();
            for (i, &(m1, n1)) in bucket.iter().enumerate() {
                for &(m2, n2) in &bucket[i..] {
                    if let Some(&n3) = by_m.get(&(m1 + m2)) {
                        found.push(ResonanceTriple::resonant(n1, n2, n3));
                    }
                }
            }
            found
        })
        .collect();
    out.sort_by_key(|t| (t.n1, t.n2, t.n3));
    for t in &out {
        assert!(is_resonant(t.n1, t.n2, t.n3)?, "bucket search produced a non-resonant triple {t:?}");
    }
    Ok(out)
}

/// Stable evaluation of `√a + √b − √c` for positive integers.
///
/// Both numerator and denominator are free of cancellation; the only
/// rounding is in the square roots and divisions, so the relative error is a
/// few ulps even when the value is tiny. Returns `None` exactly when the
/// value is zero.
pub fn sqrt_sum_minus(a: u128, b: u128, c: u128) -> Option<f64> {
    let (ra, rb, rc) = ((a as f64).sqrt(), (b as f64).sqrt(), (c as f64).sqrt());
    let denom = ra + rb + rc;
    let e = a as i128 + b as i128 - c as i128;
    let root_ab = ((a as f64) * (b as f64)).sqrt();
    if e >= 0 {
        return Some((e as f64 + 2.0 * root_ab) / denom);
    }
    // a + b − c + 2√(ab) = (4ab − e²)/(2√(ab) − e) with 2√(ab) − e > 0
    let disc = match (a as i128)
        .checked_mul(b as i128)
        .and_then(|ab| ab.checked_mul(4))
        .and_then(|ab4| e.checked_mul(e).and_then(|e2| ab4.checked_sub(e2)))
    {
        Some(d) => {
            if d == 0 {
                return None;
            }
            d as f64
        }
        None => {
            let d = -arith::resonance_discriminant(a, b, c);
            if d.is_zero() {
                return None;
            }
            arith::big_to_f64(&d)
        }
    };
    Some(disc / (2.0 * root_ab - e as f64) / denom)
}

/// `Λ(n₃) + s₁Λ(n₁) + s₂Λ(n₂)`, with exact zero detection.
pub fn small_divisor(n1: u64, n2: u64, n3: u64, signs: SignPattern) -> Result<Divisor> {
    require_oscillatory(&[n1, n2, n3])?;
    let (f1, f2, f3) = (cubic(n1), cubic(n2), cubic(n3));
    let v = match signs {
        SignPattern(Sign::Plus, Sign::Plus) => {
            return Ok(Divisor::Value(frequency(n3) + frequency(n1) + frequency(n2)))
        }
        // Λ₃ − Λ₁ − Λ₂ = −(√F₁ + √F₂ − √F₃)
        SignPattern(Sign::Minus, Sign::Minus) => sqrt_sum_minus(f1, f2, f3).map(|v| -v),
        // Λ₃ + Λ₂ − Λ₁
        SignPattern(Sign::Minus, Sign::Plus) => sqrt_sum_minus(f3, f2, f1),
        // Λ₃ + Λ₁ − Λ₂
        SignPattern(Sign::Plus, Sign::Minus) => sqrt_sum_minus(f3, f1, f2),
    };
    Ok(v.map_or(Divisor::ExactZero, Divisor::Value))
}

/// Plain float evaluation of the divisor, used only as a cross-check.
pub fn naive_divisor(n1: u64, n2: u64, n3: u64, signs: SignPattern) -> f64 {
    frequency(n3) + signs.0.apply(frequency(n1)) + signs.1.apply(frequency(n2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallDivisorReport {
    pub n_max: u64,
    /// `min |Λ₃ − Λ₁ − Λ₂|·max(nᵢ)^{9/2}` over non-resonant triples.
    pub min_weighted: f64,
    pub argmin: (u64, u64, u64),
    pub divisor_at_min: f64,
    pub triples_scanned: u64,
    pub resonant_skipped: u64,
}

#[derive(Clone, Copy)]
struct ScanBest {
    weighted: f64,
    triple: (u64, u64, u64),
    divisor: f64,
    scanned: u64,
    skipped: u64,
}

impl ScanBest {
    fn empty() -> Self {
        Self { weighted: f64::INFINITY, triple: (0, 0, 0), divisor: f64::NAN, scanned: 0, skipped: 0 }
    }

    // total order on (weighted, triple) keeps the result schedule-independent
    fn merge(self, other: Self) -> Self {
        let key = |s: &Self| (s.weighted, s.triple);
        let mut best = if key(&other).partial_cmp(&key(&self)) == Some(Ordering::Less) { other } else { self };
        best.scanned = self.scanned + other.scanned;
        best.skipped = self.skipped + other.skipped;
        best
    }
}

/// Weighted minimum of `|Λ₃ − Λ₁ − Λ₂|` over all non-resonant triples with
/// `2 ≤ n₁ ≤ n₂ ≤ n_max` and `2 ≤ n₃ ≤ n_max`.
pub fn small_divisor_scan(n_max: u64) -> Result<SmallDivisorReport> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be ≥ 2, got {n_max}")));
    }
    let fs: Vec<u128> = (0..=n_max).map(cubic).collect();
    let best = (2..=n_max)
        .into_par_iter()
        .map(|n3| {
            let mut best = ScanBest::empty();
            for n1 in 2..=n_max {
                for n2 in n1..=n_max {
                    best.scanned += 1;
                    let Some(v) = sqrt_sum_minus(fs[n1 as usize], fs[n2 as usize], fs[n3 as usize]) else {
                        best.skipped += 1;
                        continue;
                    };
                    let top = n3.max(n2) as f64;
                    let w = v.abs() * top.powf(4.5);
                    let cand = ScanBest { weighted: w, triple: (n1, n2, n3), divisor: -v, scanned: 0, skipped: 0 };
                    best = best.merge(cand);
                }
            }
            best
        })
        .reduce(ScanBest::empty, ScanBest::merge);
    Ok(SmallDivisorReport {
        n_max,
        min_weighted: best.weighted,
        argmin: best.triple,
        divisor_at_min: best.divisor,
        triples_scanned: best.scanned,
        resonant_skipped: best.skipped,
    })
}

/// Which of the two literal readings of the second coefficient's
/// denominator to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SecondKindSigns {
    /// `Λ(n₃) − Λ(n₁) + Λ(n₂)`.
    #[default]
    Literal,
    /// `Λ(n₃) + Λ(n₁) − Λ(n₂)`.
    Swapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CoefficientKind {
    First = 1,
    Second = 2,
    Third = 3,
}

impl CoefficientKind {
    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            3 => Ok(Self::Third),
            _ => Err(Error::Domain(format!("coefficient kind must be 1, 2 or 3, got {k}"))),
        }
    }

    pub fn signs(self, conv: SecondKindSigns) -> SignPattern {
        match (self, conv) {
            (Self::First, _) => SignPattern::MINUS_MINUS,
            (Self::Second, SecondKindSigns::Literal) => SignPattern::MINUS_PLUS,
            (Self::Second, SecondKindSigns::Swapped) => SignPattern::PLUS_MINUS,
            (Self::Third, _) => SignPattern::PLUS_PLUS,
        }
    }

    /// The first and third kinds are symmetric in `(n₁, n₂)`.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, Self::Second)
    }
}

/// Normal-form coefficient `b = i·beta`, or an exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormCoefficient {
    pub kind: CoefficientKind,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    /// `None` is the zero flag.
    pub beta: Option<f64>,
}

impl NormalFormCoefficient {
    pub fn is_zero(&self) -> bool {
        self.beta.is_none()
    }
}

/// `b = i / (Λ(n₃) ± Λ(n₁) ± Λ(n₂))`, zero on resonances of the kind's own
/// sign pattern and whenever a degree is at most 1.
pub fn normal_form_coeff(
    kind: CoefficientKind,
    n1: u64,
    n2: u64,
    n3: u64,
    conv: SecondKindSigns,
) -> NormalFormCoefficient {
    let beta = if n1.min(n2).min(n3) <= 1 {
        None
    } else {
        match small_divisor(n1, n2, n3, kind.signs(conv)).expect("degrees checked above") {
            Divisor::ExactZero => None,
            Divisor::Value(d) => Some(1.0 / d),
        }
    };
    NormalFormCoefficient { kind, n1, n2, n3, beta }
}

/// Coefficient table over `0 ≤ nᵢ ≤ n_max`, streamed in lexicographic order.
/// Symmetric kinds list `n₁ ≤ n₂` only.
pub fn normal_form_table(
    kind: CoefficientKind,
    n_max: u64,
    conv: SecondKindSigns,
) -> impl Iterator<Item = NormalFormCoefficient> {
    (0..=n_max).flat_map(move |n1| {
        let lo = if kind.is_symmetric() { n1 } else { 0 };
        (lo..=n_max).flat_map(move |n2| (0..=n_max).map(move |n3| normal_form_coeff(kind, n1, n2, n3, conv)))
    })
}

/// Admissible range of the ratio `n₂/n₁` in the pair count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioWindow {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Default for RatioWindow {
    fn default() -> Self {
        Self { lo: arith::rat(1, 2), hi: arith::rat(2, 1) }
    }
}

impl RatioWindow {
    fn admits(&self, n1: u64, n2: u64) -> bool {
        let r = arith::rat(n2 as i64, n1 as i64);
        self.lo <= r && r <= self.hi
    }
}

/// Largest `n` with `Λ(n) ≤ bound` (at least 1).
fn max_degree_below(bound: &BigRational) -> u64 {
    let mut n = 1u64;
    while cmp_sqrt_sum(cubic(n + 1), 0, bound) != Ordering::Greater {
        n += 1;
    }
    n
}

/// Number of ordered pairs `(n₁, n₂)`, `n₁, n₂ ≥ 2`, in the ratio window
/// with `|Λ(n₁) + Λ(n₂) − A| ≤ 1/2`. Pass `None` to drop the ratio
/// constraint.
pub fn count_pairs(a: &BigRational, window: Option<&RatioWindow>) -> Result<u64> {
    if *a <= BigRational::zero() {
        return Err(Error::Domain("A must be positive".into()));
    }
    let half = arith::rat(1, 2);
    let (lo, hi) = (a - &half, a + &half);
    let top = max_degree_below(&hi);
    let mut count = 0u64;
    for n1 in 2..=top {
        let f1 = cubic(n1);
        for n2 in 2..=top {
            if window.is_some_and(|w| !w.admits(n1, n2)) {
                continue;
            }
            let f2 = cubic(n2);
            if cmp_sqrt_sum(f1, f2, &lo) != Ordering::Less && cmp_sqrt_sum(f1, f2, &hi) != Ordering::Greater {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoPoint {
    pub a: f64,
    /// Largest window count over centres `A′ ∈ [A, 2A]` on the half-integer lattice.
    pub max_count: u64,
    pub argmax: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoReport {
    pub ratio_window: bool,
    pub points: Vec<RhoPoint>,
    pub slope: f64,
    pub intercept: f64,
}

/// Window counts at every half-integer centre `k/2`, `0 ≤ k ≤ k_max`.
///
/// Each pair sum `S` is located exactly between consecutive half-integers
/// (`h ≤ 2S < h+1`); it lies in the window around `k/2` for `k ∈ {h, h+1}`,
/// and also `k = h − 1` when `2S = h` exactly.
pub fn half_integer_window_counts(k_max: u64, window: Option<&RatioWindow>) -> Vec<u64> {
    let bound = arith::rat(k_max as i64 + 1, 2);
    let top = max_degree_below(&bound);
    let fs: Vec<u128> = (0..=top).map(cubic).collect();
    let len = k_max as usize + 1;
    (2..=top)
        .into_par_iter()
        .map(|n1| {
            let mut hist = vec![0u64; len];
            let f1 = fs[n1 as usize];
            for n2 in 2..=top {
                if window.is_some_and(|w| !w.admits(n1, n2)) {
                    continue;
                }
                let f2 = fs[n2 as usize];
                let mut h = (2.0 * ((f1 as f64).sqrt() + (f2 as f64).sqrt())).floor() as i128;
                while cmp_sqrt_sum_frac(f1, f2, h, 2) == Ordering::Less {
                    h -= 1;
                }
                while cmp_sqrt_sum_frac(f1, f2, h + 1, 2) != Ordering::Less {
                    h += 1;
                }
                let exact = cmp_sqrt_sum_frac(f1, f2, h, 2) == Ordering::Equal;
                let lo = if exact { h - 1 } else { h };
                for k in lo..=h + 1 {
                    if (0..len as i128).contains(&k) {
                        hist[k as usize] += 1;
                    }
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; len],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Growth exponent of the maximized window count, fitted on a log-log scale.
pub fn estimate_rho(grid: &[BigRational], window: Option<&RatioWindow>) -> Result<RhoReport> {
    if grid.len() < 10 {
        return Err(Error::Domain(format!("regression needs at least 10 grid points, got {}", grid.len())));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    if grid[0] <= BigRational::zero() {
        return Err(Error::Domain("grid values must be positive".into()));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let four = BigRational::from_integer(BigInt::from(4));
    let k_of = |r: BigRational| r.to_integer().to_u64().expect("grid bound fits u64");
    let k_max = k_of((grid.last().unwrap() * &four).floor());
    let hist = half_integer_window_counts(k_max, window);

    let mut points = Vec::with_capacity(grid.len());
    for a in grid {
        let k_lo = k_of((a * &two).ceil());
        let k_hi = k_of((a * &four).floor());
        let (argmax, max_count) = (k_lo..=k_hi)
            .map(|k| (k, hist[k as usize]))
            .fold((k_lo, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
        points.push(RhoPoint { a: a.to_f64().unwrap_or(f64::NAN), max_count, argmax: argmax as f64 / 2.0 });
    }
    let fit: Vec<(f64, f64)> =
        points.iter().filter(|p| p.max_count > 0).map(|p| (p.a.ln(), (p.max_count as f64).ln())).collect();
    if fit.len() < 2 {
        return Err(Error::Domain("too few nonzero counts for a regression".into()));
    }
    let (slope, intercept) = least_squares(&fit);
    Ok(RhoReport { ratio_window: window.is_some(), points, slope, intercept })
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Geometric grid of `points` rationals between `lo` and `hi` (rounded to
/// thousandths).
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = (0..points)
        .map(|i| {
            let t = if points == 1 { 0.0 } else { i as f64 / (points - 1) as f64 };
            let v = lo * (hi / lo).powf(t);
            arith::rat((v * 1000.0).round() as i64, 1000)
        })
        .collect();
    out.dedup();
    out
}

/// Solution `(j, n)` of `a·j² = b·F(n)` for `ω₀² = a/b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSolution {
    pub a: u64,
    pub b: u64,
    pub j: u64,
    pub n: u64,
}

/// All `(j, n)` with `2 ≤ n ≤ n_max`, `j ≥ 1` and `a·j² = b·F(n)`.
pub fn kernel_solutions(a: u64, b: u64, n_max: u64) -> Result<Vec<KernelSolution>> {
    if a == 0 || b == 0 || arith::gcd(a, b) != 1 {
        return Err(Error::Domain(format!("need coprime positive a, b; got {a}, {b}")));
    }
    let (a128, b128) = (a as u128, b as u128);
    let sols = (2..=n_max)
        .filter_map(|n| {
            let bf = b128.checked_mul(cubic(n))?;
            if bf % a128 != 0 {
                return None;
            }
            let j = arith::square_root_exact(bf / a128)?;
            Some(KernelSolution { a, b, j: j as u64, n })
        })
        .collect();
    Ok(sols)
}

/// Degrees grouped by square-free part, for reporting resonance certificates.
pub fn squarefree_buckets(n_max: u64) -> Result<BTreeMap<u128, Vec<SquarefreeForm>>> {
    let mut out: BTreeMap<u128, Vec<SquarefreeForm>> = BTreeMap::new();
    for n in 2..=n_max {
        let f = SquarefreeForm::of(n)?;
        out.entry(f.s).or_default().push(f);
    }
    Ok(out)
}
