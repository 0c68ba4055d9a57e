//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p droplet-core --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use droplet_core::elliptic::{integral_points, uniqueness_table, CurveId};
use droplet_core::evolution::{
    assemble, decompose, evolve, rk4_order_study, spacetime_norm, strichartz_report, required_time_steps,
    time_series, StrichartzParams,
};
use droplet_core::resonance::{
    enumerate_resonances, estimate_rho, geometric_grid, kernel_solutions, small_divisor_scan, RatioWindow,
    SquarefreeForm,
};
use droplet_core::sphere::{norm, Lq};
use droplet_core::{cubic, SphericalField, SurfaceState};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(elapsed: Duration, limit_secs: u64) -> Outcome {
    ensure!(elapsed.as_secs_f64() < limit_secs as f64, "took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64());
    Ok(String::new())
}

fn resonance_reproduction() -> Outcome {
    let start = Instant::now();
    let triples = enumerate_resonances(10_000).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got: Vec<(u64, u64, u64)> = triples.iter().map(|t| (t.n1, t.n2, t.n3)).collect();
    ensure!(got == vec![(5, 5, 8), (10, 10, 16)], "found {got:?}");
    within(elapsed, 30)?;
    Ok(format!("{got:?} in {:.2}s", elapsed.as_secs_f64()))
}

fn resonance_certificates() -> Outcome {
    ensure!(cubic(5) == 140 && cubic(8) == 560, "F(5) = {}, F(8) = {}", cubic(5), cubic(8));
    ensure!(cubic(5) * cubic(5) == 19_600 && 140 * 140 == 19_600, "F(5)² = {}", cubic(5) * cubic(5));
    for (triple, s, ms) in [((5u64, 5u64, 8u64), 35u128, (2u128, 2u128, 4u128)), ((10, 10, 16), 30, (6, 6, 12))] {
        let forms: Vec<SquarefreeForm> =
            [triple.0, triple.1, triple.2].iter().map(|&n| SquarefreeForm::of(n).unwrap()).collect();
        ensure!(forms.iter().all(|f| f.s == s), "square-free parts of {triple:?}: {forms:?}");
        ensure!((forms[0].m, forms[1].m, forms[2].m) == ms, "m-values of {triple:?}: {forms:?}");
        ensure!(ms.0 + ms.1 == ms.2, "m-values do not add up");
    }
    Ok("s = 35, m = (2,2,4); s = 30, m = (6,6,12)".into())
}

fn known_integral_points() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for (c, expected) in KNOWN_POINTS {
        let pts: Vec<(i64, u64)> = integral_points(CurveId(*c), 1_000_000)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|p| (p.x, p.y))
            .collect();
        ensure!(&pts == expected, "c = {c}: got {pts:?}");
        total += pts.len();
    }
    let elapsed = start.elapsed();
    within(elapsed, 10)?;
    Ok(format!("{} curves, {total} points in {:.2}s", KNOWN_POINTS.len(), elapsed.as_secs_f64()))
}

fn bifurcation_table() -> Outcome {
    let table = uniqueness_table(50, 1_000_000).map_err(|e| e.to_string())?;
    let curve = |c: u64| &table.curves[c as usize - 1];

    let c15 = curve(15);
    ensure!(c15.factorizations.len() == 4, "c = 15 has {} coprime factorizations", c15.factorizations.len());
    let mut js = Vec::new();
    for set in &c15.factorizations {
        ensure!(set.is_unique(), "c = 15, (a,b) = ({},{}) not unique", set.a, set.b);
        let p = set.admissible[0];
        ensure!((p.point.x, p.point.y, p.n0) == (90, 900, 6), "c = 15, (a,b) = ({},{}): {p:?}", set.a, set.b);
        js.push(((set.a, set.b), p.j0));
    }
    ensure!(js.contains(&((15, 1), 4)), "c = 15 kernel values {js:?}");
    ensure!(c15.frequency_exact.as_deref() == Some("4√15"), "Λ(6) = {:?}", c15.frequency_exact);
    let dec = c15.frequency_decimal.unwrap_or(f64::NAN);
    ensure!((dec - 15.4919).abs() <= 1e-4, "Λ(6) ≈ {dec}");

    for (c, want) in [(22, "6√22"), (42, "3√42"), (46, "2040√46"), (50, "90√2")] {
        let r = curve(c);
        ensure!(r.frequency_exact.as_deref() == Some(want), "c = {c}: {:?}", r.frequency_exact);
        ensure!(!r.reference_discrepancy, "c = {c} unexpectedly flagged");
    }
    for (c, want) in [(17, "84√17"), (26, "70√26")] {
        let r = curve(c);
        ensure!(r.frequency_exact.as_deref() == Some(want), "c = {c}: {:?}", r.frequency_exact);
        ensure!(r.reference_discrepancy, "c = {c} not flagged against the tabulated row");
    }
    let min = table.min_n0.ok_or("no unique-kernel curve")?;
    ensure!(min.n0 == 6 && min.c == 15, "min n0 = {min:?}");
    Ok(format!("Λ(6) = 4√15 ≈ {dec:.4}; 17, 26 flagged; min n0 = 6 at c = 15"))
}

fn kernel_solutions_check() -> Outcome {
    for ((a, b), j) in [((15, 1), 4), ((1, 15), 60), ((3, 5), 20), ((5, 3), 12)] {
        let sols = kernel_solutions(a, b, 1000).map_err(|e| e.to_string())?;
        let got: Vec<(u64, u64)> = sols.iter().map(|s| (s.j, s.n)).collect();
        ensure!(got == vec![(j, 6)], "(a,b) = ({a},{b}): {got:?}");
    }
    Ok("n = 6 with j = 4, 60, 20, 12".into())
}

fn small_divisor_positivity() -> Outcome {
    let mut results = Vec::new();
    let mut slowest = Duration::ZERO;
    for threads in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        let start = Instant::now();
        let r = pool.install(|| small_divisor_scan(300)).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        results.push(r);
    }
    let first = &results[0];
    ensure!(first.min_weighted > 0.0, "minimum {}", first.min_weighted);
    for r in &results[1..] {
        ensure!((r.min_weighted - first.min_weighted).abs() <= 1e-9, "thread-count drift {r:?} vs {first:?}");
        ensure!(r.argmin == first.argmin, "argmin drift");
    }
    ensure!(
        (first.min_weighted - SMALL_DIVISOR_MIN).abs() <= 1e-9 * SMALL_DIVISOR_MIN,
        "minimum {} differs from oracle {SMALL_DIVISOR_MIN}",
        first.min_weighted
    );
    within(slowest, 60)?;
    Ok(format!(
        "min = {:.12} at {:?}, {} triples, stable over 1/2/8 threads, slowest {:.2}s",
        first.min_weighted,
        first.argmin,
        first.triples_scanned,
        slowest.as_secs_f64()
    ))
}

fn counting_exponent() -> Outcome {
    let grid = geometric_grid(100.0, 10_000.0, 25);
    let report = estimate_rho(&grid, Some(&RatioWindow::default())).map_err(|e| e.to_string())?;
    ensure!((0.20..=0.45).contains(&report.slope), "slope {}", report.slope);
    Ok(format!("slope {:.4} over {} grid points", report.slope, report.points.len()))
}

fn linear_flow_invariants() -> Outcome {
    let n_max = 64;
    let z = SphericalField::random(n_max, 2, 1.0, true, 2024);
    let p = SphericalField::random(n_max, 2, 1.0, true, 2025);
    let state = SurfaceState::new(z, p).map_err(|e| e.to_string())?;

    let rows = time_series(&state, 100.0, 200).map_err(|e| e.to_string())?;
    let (l2_0, e_0) = (rows[0].l2, rows[0].energy2);
    let l2_drift = rows.iter().map(|r| (r.l2 - l2_0).abs() / l2_0).fold(0.0, f64::max);
    let e_drift = rows.iter().map(|r| (r.energy2 - e_0).abs() / e_0).fold(0.0, f64::max);
    ensure!(l2_drift <= 1e-12 && e_drift <= 1e-12, "drift L2 {l2_drift:e}, energy2 {e_drift:e}");

    let u0 = assemble(&state);
    let group = evolve(&evolve(&u0, 37.5), 62.5).u.max_diff(&evolve(&u0, 100.0).u);
    ensure!(group <= 1e-12, "group law defect {group:e}");
    let round = decompose(&u0).map_err(|e| e.to_string())?.max_diff(&state);
    ensure!(round <= 1e-12, "round-trip defect {round:e}");

    let study = rk4_order_study(&state, 0.5, 2e-4, 3).map_err(|e| e.to_string())?;
    for o in &study.orders {
        ensure!((o - 4.0).abs() <= 0.2, "measured orders {:?}, errors {:?}", study.orders, study.errors);
    }
    Ok(format!(
        "drift L2 {l2_drift:.1e}, energy2 {e_drift:.1e}; group {group:.1e}; RK4 orders {:.3?}",
        study.orders
    ))
}

fn sogge_sharpness() -> Outcome {
    let start = Instant::now();
    let ks: Vec<f64> = SOGGE_DEGREES.iter().map(|&k| k as f64).collect();
    let mut sup = Vec::new();
    let mut l6 = Vec::new();
    let mut hw = Vec::new();
    for &k in &SOGGE_DEGREES {
        let z = SphericalField::zonal(k, k).map_err(|e| e.to_string())?;
        let h = SphericalField::highest_weight(k, k).map_err(|e| e.to_string())?;
        sup.push(norm(&z, Lq::Infinity).map_err(|e| e.to_string())? / z.l2_norm());
        l6.push(norm(&z, Lq::Even(6)).map_err(|e| e.to_string())? / z.l2_norm());
        hw.push(norm(&h, Lq::Even(4)).map_err(|e| e.to_string())? / h.l2_norm());
    }
    let (s_inf, s_6, s_hw) = (loglog_slope(&ks, &sup), loglog_slope(&ks, &l6), loglog_slope(&ks, &hw));
    ensure!((s_inf - 0.50).abs() <= 0.02, "zonal L∞ slope {s_inf}");
    ensure!((s_6 - 1.0 / 6.0).abs() <= 0.03, "zonal L⁶ slope {s_6}");
    ensure!((s_hw - 0.125).abs() <= 0.03, "highest-weight L⁴ slope {s_hw}");
    within(start.elapsed(), 300)?;
    Ok(format!(
        "slopes L∞ {s_inf:.4}, L⁶ {s_6:.4}, highest-weight L⁴ {s_hw:.4} in {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn strichartz_runs() -> Outcome {
    let t = 1.0;
    let mut worst = 0.0f64;
    for f in [SphericalField::highest_weight(16, 16), SphericalField::zonal(9, 16)] {
        let f = f.map_err(|e| e.to_string())?;
        let l4 = norm(&f, Lq::Even(4)).map_err(|e| e.to_string())?;
        let (st, _) = spacetime_norm(&f, 4, t, required_time_steps(t, 16)).map_err(|e| e.to_string())?;
        worst = worst.max((st - t.powf(0.25) * l4).abs());
    }
    ensure!(worst <= 1e-6, "single-mode identity defect {worst:e}");
    let params = StrichartzParams { s: 3.0, q: 4, t_max: t, n_max: 32, n_samples: 3, seed: 7, n_t: None };
    let report = strichartz_report(&params).map_err(|e| e.to_string())?;
    ensure!(report.max_halving_change < 0.01, "resolution halving changes R by {}", report.max_halving_change);
    Ok(format!(
        "single-mode defect {worst:.1e}; {} rows, max halving change {:.2e}",
        report.rows.len(),
        report.max_halving_change
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("resonance reproduction", resonance_reproduction),
        ("resonance certificates", resonance_certificates),
        ("known integral points", known_integral_points),
        ("bifurcation table", bifurcation_table),
        ("kernel solutions", kernel_solutions_check),
        ("small-divisor positivity", small_divisor_positivity),
        ("counting exponent", counting_exponent),
        ("linear flow invariants", linear_flow_invariants),
        ("sogge sharpness", sogge_sharpness),
        ("strichartz experiment", strichartz_runs),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
