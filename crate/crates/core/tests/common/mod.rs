#![allow(dead_code)]

//! Published integral points `(x, y)` with `y ≥ 0` on `y² = x(x−c)(x+2c)`.
pub const KNOWN_POINTS: &[(u64, &[(i64, u64)])] = &[
    (2, &[(-4, 0), (-2, 4), (-1, 3), (0, 0), (2, 0), (4, 8), (8, 24), (50, 360)]),
    (8, &[(-16, 0), (-8, 32), (-4, 24), (0, 0), (8, 0), (9, 15), (16, 64), (32, 192), (200, 2880)]),
    (13, &[(-26, 0), (0, 0), (13, 0), (121, 1386)]),
    (15, &[(-30, 0), (-5, 50), (0, 0), (15, 0), (24, 108), (90, 900)]),
    (17, &[(-34, 0), (-32, 56), (0, 0), (17, 0), (833, 24276)]),
    (18, &[(-36, 0), (-32, 80), (-18, 108), (-9, 81), (0, 0), (18, 0), (36, 216), (72, 648), (450, 9720)]),
    (22, &[(-44, 0), (-32, 144), (0, 0), (22, 0), (198, 2904)]),
    (23, &[(-46, 0), (0, 0), (23, 0), (50, 360)]),
    (26, &[(-52, 0), (-49, 105), (0, 0), (26, 0), (1300, 47320)]),
    (
        30,
        &[
            (-60, 0),
            (-50, 200),
            (-45, 225),
            (-24, 216),
            (-20, 200),
            (-6, 108),
            (0, 0),
            (30, 0),
            (36, 144),
            (40, 200),
            (75, 675),
            (90, 900),
            (300, 5400),
            (324, 6048),
            (480, 10800),
            (7290, 623700),
            (10830, 1128600),
            (226875, 108070875),
        ],
    ),
    (32, &[(-64, 0), (-32, 256), (-16, 192), (0, 0), (32, 0), (36, 120), (64, 512), (128, 1536), (800, 23040)]),
    (33, &[(-66, 0), (0, 0), (33, 0), (81, 756)]),
    (
        35,
        &[
            (-70, 0),
            (-49, 294),
            (-45, 300),
            (-40, 300),
            (-14, 196),
            (0, 0),
            (35, 0),
            (50, 300),
            (175, 2450),
            (224, 3528),
            (280, 4900),
            (4410, 294000),
            (14450, 1739100),
        ],
    ),
    (39, &[(-78, 0), (0, 0), (39, 0), (147, 1890)]),
    (42, &[(-84, 0), (-56, 392), (-12, 216), (0, 0), (42, 0), (63, 441), (294, 5292)]),
    (43, &[(-86, 0), (-32, 360), (0, 0), (43, 0)]),
    (46, &[(-92, 0), (0, 0), (46, 0), (26496, 4316640)]),
    (50, &[(-100, 0), (-50, 500), (-25, 375), (-4, 144), (0, 0), (50, 0), (100, 1000), (200, 3000), (1250, 45000)]),
];

/// Independently computed `min |Λ₃ − Λ₁ − Λ₂|·max(n₂, n₃)^{9/2}` over
/// non-resonant triples with `2 ≤ n₁ ≤ n₂ ≤ N`, `2 ≤ n₃ ≤ N`, for both
/// `N = 20` (50-digit arithmetic) and `N = 300` (extended precision),
/// attained at `(2, 2, 3)` in both cases.
pub const SMALL_DIVISOR_MIN: f64 = 25.201_205_240_833_526;
pub const SMALL_DIVISOR_AT_MIN: f64 = -0.179_628_674_440_719_06;

/// Sampled degrees `k` for the norm-growth regressions, and the slopes of
/// an independent evaluation (closed forms and Gauss quadrature of `P_k`).
pub const SOGGE_DEGREES: [usize; 8] = [32, 43, 58, 78, 105, 141, 190, 256];
pub const ZONAL_SUP_SLOPE: f64 = 0.496_867_366_751_724;
pub const ZONAL_L6_SLOPE: f64 = 0.165_629_953_115_331;
pub const HIGHEST_WEIGHT_L4_SLOPE: f64 = 0.123_245_689_719_725;

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `‖Y_{k,k}‖_{L⁴}` from `I_p = ∫₀^π sin^p θ dθ`: with `|Y_{k,k}|² = C² sin^{2k}θ`
/// and `2πC²I_{2k+1} = 1`, `‖Y_{k,k}‖⁴_{L⁴} = I_{4k+1} / (2π·I_{2k+1}²)`.
pub fn highest_weight_l4(k: usize) -> f64 {
    // ratios I_{4k+1}/I_{2k+1}² via the recursion I_p = (p−1)/p·I_{p−2}, in logs
    let mut log_i = vec![0.0f64; 4 * k + 2];
    log_i[0] = std::f64::consts::PI.ln();
    log_i[1] = 2f64.ln();
    for p in 2..log_i.len() {
        log_i[p] = log_i[p - 2] + ((p - 1) as f64 / p as f64).ln();
    }
    ((log_i[4 * k + 1] - (2.0 * std::f64::consts::PI).ln() - 2.0 * log_i[2 * k + 1]) / 4.0).exp()
}
