//! Integral points on `E_c : y² = x(x − c)(x + 2c)` and the admissibility
//! analysis linking them to kernel solutions `a·j² = b·F(n)`.
//!
//! The point search is a bounded scan over `x`; nothing is claimed about
//! points beyond the bound.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, square_root_exact};
use crate::dispersion::{cubic, frequency};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurveId(pub u64);

/// Integral point with `y ≥ 0` (points are listed modulo negation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub c: u64,
    pub x: i64,
    pub y: u64,
}

/// Right-hand side `x³ + c·x² − 2c²·x` of the curve equation.
pub fn curve_rhs(c: u64, x: i64) -> i128 {
    let (c, x) = (c as i128, x as i128);
    x * (x - c) * (x + 2 * c)
}

impl EllipticPoint {
    pub fn is_on_curve(&self) -> bool {
        let y = self.y as i128;
        y * y == curve_rhs(self.c, self.x)
    }
}

/// All integral points with `−2c ≤ x ≤ x_bound`, `y ≥ 0`, sorted by `x`.
///
/// The cubic is nonnegative exactly on `[−2c, 0] ∪ [c, ∞)`, so only those
/// ranges are scanned.
pub fn integral_points(c: CurveId, x_bound: u64) -> Result<Vec<EllipticPoint>> {
    let c = c.0;
    if c == 0 {
        return Err(Error::Domain("curve parameter c must be positive".into()));
    }
    if x_bound < 2 * c {
        return Err(Error::Domain(format!("x_bound {x_bound} below 2c = {}", 2 * c)));
    }
    let probe = |x: i64| -> Option<EllipticPoint> {
        let v = curve_rhs(c, x);
        let y = square_root_exact(v as u128)?;
        Some(EllipticPoint { c, x, y: y as u64 })
    };
    let mut pts: Vec<EllipticPoint> = (-2 * c as i64..=0).filter_map(probe).collect();
    const CHUNK: i64 = 1 << 16;
    let (start, end) = (c as i64, x_bound as i64);
    let chunks: Vec<i64> = (start..=end).step_by(CHUNK as usize).collect();
    let upper: Vec<Vec<EllipticPoint>> = chunks
        .par_iter()
        .map(|&lo| (lo..=(lo + CHUNK - 1).min(end)).filter_map(probe).collect())
        .collect();
    pts.extend(upper.into_iter().flatten());
    for p in &pts {
        assert!(p.is_on_curve(), "emitted point {p:?} fails the curve equation");
    }
    Ok(pts)
}

/// Integral point carrying a kernel solution: `x = ab·n₀`, `y = a²b·j₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePoint {
    pub point: EllipticPoint,
    pub a: u64,
    pub b: u64,
    pub n0: u64,
    pub j0: u64,
}

impl AdmissiblePoint {
    /// `a·j₀² = b·F(n₀)`.
    pub fn satisfies_kernel_equation(&self) -> bool {
        let lhs = (self.a as u128).checked_mul((self.j0 as u128).pow(2));
        let rhs = (self.b as u128).checked_mul(cubic(self.n0));
        lhs.is_some() && lhs == rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedPoint {
    pub point: EllipticPoint,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSet {
    pub a: u64,
    pub b: u64,
    pub admissible: Vec<AdmissiblePoint>,
    pub rejected: Vec<RejectedPoint>,
}

impl AdmissibleSet {
    pub fn is_unique(&self) -> bool {
        self.admissible.len() == 1
    }
}

/// Filters `points` (on `E_{ab}`) down to those with `x, y > 0`, `ab | x`
/// and `a²b | y`, re-verifying the kernel equation on each.
pub fn filter_admissible(a: u64, b: u64, points: &[EllipticPoint]) -> AdmissibleSet {
    let ab = a * b;
    let a2b = a * a * b;
    let mut admissible = Vec::new();
    let mut rejected = Vec::new();
    for &p in points {
        if p.x <= 0 || p.y == 0 || p.x as u64 % ab != 0 || p.y % a2b != 0 {
            continue;
        }
        let cand = AdmissiblePoint { point: p, a, b, n0: p.x as u64 / ab, j0: p.y / a2b };
        if cand.satisfies_kernel_equation() {
            admissible.push(cand);
        } else {
            rejected.push(RejectedPoint { point: p, reason: format!("a·j0² ≠ b·F(n0) for (a, b) = ({a}, {b})") });
        }
    }
    AdmissibleSet { a, b, admissible, rejected }
}

/// Admissible points of `E_{ab}` up to `x_bound`.
pub fn admissible_points(a: u64, b: u64, x_bound: u64) -> Result<AdmissibleSet> {
    if a == 0 || b == 0 || arith::gcd(a, b) != 1 {
        return Err(Error::Domain(format!("need coprime positive a, b; got {a}, {b}")));
    }
    let pts = integral_points(CurveId(a * b), x_bound)?;
    Ok(filter_admissible(a, b, &pts))
}

/// Ordered coprime factorizations `c = a·b`.
pub fn coprime_factorizations(c: u64) -> Vec<(u64, u64)> {
    (1..=c).filter(|a| c % a == 0 && arith::gcd(*a, c / a) == 1).map(|a| (a, c / a)).collect()
}

/// `coeff·√radicand` with square-free radicand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Radical {
    pub coeff: u128,
    pub radicand: u128,
}

impl Radical {
    /// `√F(n)` in reduced radical form.
    pub fn frequency_of(n: u64) -> Result<Self> {
        let f = crate::resonance::SquarefreeForm::of(n)?;
        Ok(Self { coeff: f.m, radicand: f.s })
    }

    pub fn to_f64(self) -> f64 {
        self.coeff as f64 * (self.radicand as f64).sqrt()
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coeff, self.radicand) {
            (d, 1) => write!(f, "{d}"),
            (1, k) => write!(f, "√{k}"),
            (d, k) => write!(f, "{d}√{k}"),
        }
    }
}

/// A previously tabulated `(c, n₀, Λ(n₀))` row that recomputation is
/// checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub c: u64,
    pub n0: u64,
    pub frequency: Radical,
}

const fn row(c: u64, n0: u64, coeff: u128, radicand: u128) -> ReferenceRow {
    ReferenceRow { c, n0, frequency: Radical { coeff, radicand } }
}

/// Tabulated bifurcation data for `c ≤ 50`, as originally printed.
pub const REFERENCE_TABLE: [ReferenceRow; 7] = [
    row(15, 6, 4, 15),
    row(17, 49, 4, 323),
    row(22, 9, 6, 22),
    row(26, 50, 15, 78),
    row(42, 7, 3, 42),
    row(46, 576, 2040, 46),
    row(50, 25, 90, 2),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub c: u64,
    pub points: Vec<EllipticPoint>,
    pub factorizations: Vec<AdmissibleSet>,
    /// Some coprime factorization has exactly one admissible point.
    pub unique_kernel: bool,
    pub n0: Option<u64>,
    pub frequency: Option<Radical>,
    pub frequency_exact: Option<String>,
    pub frequency_decimal: Option<f64>,
    pub reference: Option<ReferenceRow>,
    /// Recomputation disagrees with the tabulated row (or one side is missing).
    pub reference_discrepancy: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniquenessTable {
    pub c_max: u64,
    pub x_bound: u64,
    pub curves: Vec<CurveReport>,
    pub min_n0: Option<MinN0>,
    pub footer: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinN0 {
    pub n0: u64,
    pub c: u64,
}

/// Full analysis of a single curve.
pub fn analyze_curve(c: u64, x_bound: u64) -> Result<CurveReport> {
    let points = integral_points(CurveId(c), x_bound)?;
    let factorizations: Vec<AdmissibleSet> =
        coprime_factorizations(c).into_iter().map(|(a, b)| filter_admissible(a, b, &points)).collect();
    let n0 = factorizations.iter().filter(|s| s.is_unique()).map(|s| s.admissible[0].n0).min();
    let frequency = n0.map(Radical::frequency_of).transpose()?;
    let reference = REFERENCE_TABLE.iter().copied().find(|r| r.c == c);
    let reference_discrepancy = match (reference, n0, frequency) {
        (Some(r), Some(n), Some(f)) => r.n0 != n || r.frequency != f,
        (None, None, _) => false,
        _ => true,
    };
    Ok(CurveReport {
        c,
        points,
        unique_kernel: n0.is_some(),
        n0,
        frequency,
        frequency_exact: frequency.map(|f| f.to_string()),
        frequency_decimal: n0.map(crate::dispersion::frequency),
        reference,
        reference_discrepancy,
        factorizations,
    })
}


/// Curve-by-curve admissibility table for `1 ≤ c ≤ c_max`.
pub fn uniqueness_table(c_max: u64, x_bound: u64) -> Result<UniquenessTable> {
    if c_max == 0 {
        return Err(Error::Domain("c_max must be ≥ 1".into()));
    }
    let curves: Vec<CurveReport> =
        (1..=c_max).into_par_iter().map(|c| analyze_curve(c, x_bound)).collect::<Result<_>>()?;
    Ok(UniquenessTable {
        c_max,
        x_bound,
        min_n0: min_n0_of(&curves),
        footer: completeness_caveat(x_bound),
        curves,
    })
}

pub fn completeness_caveat(x_bound: u64) -> String {
    format!("bounded search: only points with x <= {x_bound} were examined; completeness beyond the bound is not established")
}

fn min_n0_of(curves: &[CurveReport]) -> Option<MinN0> {
    curves.iter().filter_map(|r| r.n0.map(|n0| MinN0 { n0, c: r.c })).min_by_key(|m| (m.n0, m.c))
}

/// Smallest `n₀` over unique-kernel curves with `c ≤ c_max`.
pub fn min_n0_scan(c_max: u64, x_bound: u64) -> Result<Option<MinN0>> {
    Ok(uniqueness_table(c_max, x_bound)?.min_n0)
}

/// One row per admissible point.
pub fn admissible_csv(table: &UniquenessTable) -> String {
    let mut out = String::from("c,a,b,x,y,n0,j0,unique,frequency_exact,frequency\n");
    for curve in &table.curves {
        for set in &curve.factorizations {
            for p in &set.admissible {
                let rad = Radical::frequency_of(p.n0).expect("admissible n0 ≥ 2");
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{:.6}\n",
                    curve.c,
                    p.a,
                    p.b,
                    p.point.x,
                    p.point.y,
                    p.n0,
                    p.j0,
                    set.is_unique(),
                    rad,
                    frequency(p.n0)
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(pts: &[EllipticPoint]) -> Vec<(i64, u64)> {
        pts.iter().map(|p| (p.x, p.y)).collect()
    }

    #[test]
    fn curve_15_points() {
        let pts = integral_points(CurveId(15), 1_000_000).unwrap();
        assert_eq!(xy(&pts), vec![(-30, 0), (-5, 50), (0, 0), (15, 0), (24, 108), (90, 900)]);
    }

    #[test]
    fn curve_1_has_only_roots() {
        let pts = integral_points(CurveId(1), 10_000).unwrap();
        assert_eq!(xy(&pts), vec![(-2, 0), (0, 0), (1, 0)]);
    }

    #[test]
    fn curve_2_contains_far_point() {
        let pts = integral_points(CurveId(2), 1000).unwrap();
        assert!(xy(&pts).contains(&(50, 360)));
    }

    #[test]
    fn bound_is_checked() {
        assert!(integral_points(CurveId(15), 29).is_err());
        assert!(integral_points(CurveId(0), 100).is_err());
    }

    #[test]
    fn roots_always_present() {
        for c in 1..30 {
            let pts = integral_points(CurveId(c), 2 * c).unwrap();
            for x in [-2 * c as i64, 0, c as i64] {
                assert!(pts.contains(&EllipticPoint { c, x, y: 0 }));
            }
        }
    }

    #[test]
    fn admissible_examples() {
        let s = admissible_points(15, 1, 1_000_000).unwrap();
        assert_eq!(s.admissible.len(), 1);
        let p = s.admissible[0];
        assert_eq!((p.point.x, p.point.y, p.n0, p.j0), (90, 900, 6, 4));

        let s = admissible_points(2, 1, 1000).unwrap();
        let n0s: Vec<u64> = s.admissible.iter().map(|p| p.n0).collect();
        assert_eq!(n0s, vec![2, 4, 25]);

        let s = admissible_points(17, 1, 10_000).unwrap();
        let p = s.admissible[0];
        assert_eq!(s.admissible.len(), 1);
        assert_eq!((p.point.x, p.point.y, p.n0, p.j0), (833, 24276, 49, 84));
        assert!(s.rejected.is_empty());
    }

    #[test]
    fn admissible_frequency_matches_scaled_j() {
        for (a, b) in [(15, 1), (1, 15), (3, 5), (5, 3), (2, 11), (25, 2)] {
            for p in admissible_points(a, b, 100_000).unwrap().admissible {
                let lhs = frequency(p.n0);
                let rhs = (a as f64 / b as f64).sqrt() * p.j0 as f64;
                assert!((lhs - rhs).abs() <= 1e-12 * lhs, "{a}/{b}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn cross_check_rejects_inconsistent_points() {
        // (24, 108) on E_15 is not of the form (15n, 225j); a forged point on
        // the right lattice but off the kernel equation must be rejected
        let forged = EllipticPoint { c: 15, x: 30, y: 225 };
        let s = filter_admissible(15, 1, &[forged]);
        assert!(s.admissible.is_empty());
        assert_eq!(s.rejected.len(), 1);
    }

    #[test]
    fn radical_forms() {
        assert_eq!(Radical::frequency_of(6).unwrap().to_string(), "4√15");
        assert_eq!(Radical::frequency_of(9).unwrap().to_string(), "6√22");
        assert_eq!(Radical::frequency_of(49).unwrap().to_string(), "84√17");
        assert_eq!(Radical::frequency_of(50).unwrap().to_string(), "70√26");
    }

    #[test]
    fn uniqueness_rows() {
        let r = analyze_curve(15, 1_000_000).unwrap();
        assert!(r.unique_kernel);
        assert_eq!(r.n0, Some(6));
        assert!(!r.reference_discrepancy);
        assert!(r.factorizations.iter().all(|s| s.is_unique()));

        let r = analyze_curve(22, 100_000).unwrap();
        assert_eq!((r.n0, r.frequency_exact.as_deref()), (Some(9), Some("6√22")));

        let r = analyze_curve(17, 100_000).unwrap();
        assert_eq!((r.n0, r.frequency_exact.as_deref()), (Some(49), Some("84√17")));
        assert!(r.reference_discrepancy);
    }

    #[test]
    fn min_n0_small_ranges() {
        assert_eq!(min_n0_scan(14, 100_000).unwrap(), None);
        assert_eq!(min_n0_scan(1, 10_000).unwrap(), None);
    }
}
