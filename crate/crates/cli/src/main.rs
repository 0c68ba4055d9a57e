//! `droplet`: reproducible reports on resonances, elliptic kernels and the
//! linearized droplet flow.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use droplet_core::elliptic::{self, analyze_curve, completeness_caveat, uniqueness_table};
use droplet_core::evolution::{
    self, center_of_mass_residual, energy2, rk4_order_study, strichartz_report, time_series, volume_residual,
    StrichartzParams,
};
use droplet_core::resonance::{
    self, estimate_rho, geometric_grid, kernel_solutions, normal_form_table, small_divisor_scan, CoefficientKind,
    RatioWindow, SecondKindSigns,
};
use droplet_core::{frequency, InitialCondition};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "droplet", version, about = "Resonance, elliptic-curve and spectral reports for capillary droplet oscillations")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DROPLET_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact three-wave resonances Λ(n₃) = Λ(n₁) + Λ(n₂) with all degrees ≤ n-max.
    Resonances(ResonancesArgs),
    /// Integral points, admissible points and unique-kernel table for y² = x(x−c)(x+2c).
    Elliptic(EllipticArgs),
    /// Solutions (j, n) of a·j² = b·n(n−1)(n+2).
    Kernel(KernelArgs),
    /// Normal-form coefficient table over degrees ≥ 2 (CSV: n1,n2,n3,kind,beta,zero).
    Normalform(NormalformArgs),
    /// Window counts of Λ(n₁)+Λ(n₂) near A and their growth exponent.
    Counting(CountingArgs),
    /// Weighted minimum of |Λ₃ − Λ₁ − Λ₂| over non-resonant triples.
    Smalldivisor(SmalldivisorArgs),
    /// Linear flow time series. CSV columns: t, L2 (‖u‖_L²), energy2, L4 (‖ζ‖_L⁴).
    Evolve(EvolveArgs),
    /// Space-time L^q quotients ‖e^{−itΛ}f‖/‖f‖_{H^s} for several field families.
    Strichartz(StrichartzArgs),
}

#[derive(Args, Debug, Serialize)]
struct ResonancesArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..))]
    n_max: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct EllipticArgs {
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    c_max: u64,
    #[arg(long, default_value_t = 1_000_000)]
    x_bound: u64,
    /// Analyze a single curve instead of the table.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    curve: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct KernelArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    a: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    b: u64,
    #[arg(long, default_value_t = 1000)]
    n_max: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SecondKind {
    Literal,
    Swapped,
}

#[derive(Args, Debug, Serialize)]
struct NormalformArgs {
    #[arg(long)]
    n_max: u64,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    kind: u8,
    /// Sign convention for the second kind.
    #[arg(long, value_enum, default_value_t = SecondKind::Literal)]
    second_kind: SecondKind,
    /// Also list rows with a degree ≤ 1 (always zero-flagged).
    #[arg(long)]
    include_degenerate: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if !(lo > 0.0 && hi > lo) {
        return Err("need 0 < lo < hi".into());
    }
    Ok((lo, hi))
}

#[derive(Args, Debug, Serialize)]
struct CountingArgs {
    /// Geometric grid of window centres, lo..hi.
    #[arg(long, default_value = "100..10000", value_parser = parse_range)]
    a_grid: (f64, f64),
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(10..))]
    points: u64,
    /// Count all pairs instead of those with 1/2 ≤ n₂/n₁ ≤ 2.
    #[arg(long)]
    no_ratio_window: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct SmalldivisorArgs {
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(2..))]
    n_max: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct EvolveArgs {
    #[arg(long, default_value_t = 64)]
    n_max: usize,
    /// Final time.
    #[arg(long, default_value_t = 6.2832)]
    t: f64,
    /// RK4 base step for the dt-halving study (default 0.1/Λ(n-max)).
    #[arg(long)]
    dt: Option<f64>,
    /// Time-series rows after t = 0.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Horizon of the RK4 study (default min(t, 0.5)).
    #[arg(long)]
    study_t: Option<f64>,
    /// zonal:k | hw:k | random:seed
    #[arg(long, default_value = "zonal:2", value_parser = parse_init)]
    #[serde(serialize_with = "serialize_display")]
    init: InitialCondition,
    #[arg(long = "out", alias = "format", value_enum, default_value_t)]
    out: Format,
}

fn parse_init(s: &str) -> Result<InitialCondition, String> {
    s.parse().map_err(|e: droplet_core::Error| e.to_string())
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Args, Debug, Serialize)]
struct StrichartzArgs {
    /// Sobolev exponent of the denominator.
    #[arg(long, default_value_t = 3.0)]
    s: f64,
    /// Even Lebesgue exponent, used in both time and space.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..))]
    q: u32,
    #[arg(long = "T", default_value_t = 1.0)]
    #[serde(rename = "T")]
    t_max: f64,
    #[arg(long, default_value_t = 64)]
    n_max: usize,
    /// Random samples per truncation level.
    #[arg(long, default_value_t = 4)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time intervals (must be at least 32·⌈T·Λ(n-max)/2π⌉).
    #[arg(long)]
    n_t: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

enum Failure {
    Runtime(String),
    Io(io::Error),
}

impl From<droplet_core::Error> for Failure {
    fn from(e: droplet_core::Error) -> Self {
        Self::Runtime(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn envelope(command: &str, params: &impl Serialize, payload: Value, started: Instant) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "argv": std::env::args().skip(1).collect::<Vec<_>>(),
        "params": params,
        "payload": payload,
        "timing": { "wall_time_s": started.elapsed().as_secs_f64() },
    })
}

fn emit_json(command: &str, params: &impl Serialize, payload: impl Serialize, started: Instant) -> Outcome {
    let payload = serde_json::to_value(payload).map_err(|e| Failure::Runtime(e.to_string()))?;
    let doc = envelope(command, params, payload, started);
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Failure::Runtime(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn emit_csv(text: &str) -> Outcome {
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn resonances(args: &ResonancesArgs, started: Instant) -> Outcome {
    let triples = resonance::enumerate_resonances(args.n_max)?;
    match args.format {
        Format::Json => emit_json("resonances", args, json!({ "triples": triples }), started),
        Format::Csv => {
            let mut s = String::from("n1,n2,n3\n");
            for t in &triples {
                s.push_str(&format!("{},{},{}\n", t.n1, t.n2, t.n3));
            }
            emit_csv(&s)
        }
    }
}

fn elliptic_cmd(args: &EllipticArgs, started: Instant) -> Outcome {
    if let Some(c) = args.curve {
        let report = analyze_curve(c, args.x_bound)?;
        return match args.format {
            Format::Json => emit_json(
                "elliptic",
                args,
                json!({ "curve": report, "footer": completeness_caveat(args.x_bound) }),
                started,
            ),
            Format::Csv => {
                let table = elliptic::UniquenessTable {
                    c_max: c,
                    x_bound: args.x_bound,
                    min_n0: report.n0.map(|n0| elliptic::MinN0 { n0, c }),
                    footer: completeness_caveat(args.x_bound),
                    curves: vec![report],
                };
                emit_csv(&elliptic::admissible_csv(&table))
            }
        };
    }
    let table = uniqueness_table(args.c_max, args.x_bound)?;
    match args.format {
        Format::Json => {
            let flagged: Vec<u64> = table.curves.iter().filter(|r| r.reference_discrepancy).map(|r| r.c).collect();
            emit_json("elliptic", args, json!({ "table": table, "reference_discrepancies": flagged }), started)
        }
        Format::Csv => emit_csv(&elliptic::admissible_csv(&table)),
    }
}

fn kernel(args: &KernelArgs, started: Instant) -> Outcome {
    let sols = kernel_solutions(args.a, args.b, args.n_max)?;
    match args.format {
        Format::Json => emit_json("kernel", args, json!({ "solutions": sols }), started),
        Format::Csv => {
            let mut s = String::from("a,b,j,n\n");
            for k in &sols {
                s.push_str(&format!("{},{},{},{}\n", k.a, k.b, k.j, k.n));
            }
            emit_csv(&s)
        }
    }
}

fn normalform(args: &NormalformArgs, started: Instant) -> Outcome {
    let kind = CoefficientKind::from_index(args.kind)?;
    let conv = match args.second_kind {
        SecondKind::Literal => SecondKindSigns::Literal,
        SecondKind::Swapped => SecondKindSigns::Swapped,
    };
    let floor = if args.include_degenerate { 0 } else { 2 };
    let table = normal_form_table(kind, args.n_max, conv).filter(move |c| c.n1.min(c.n2).min(c.n3) >= floor);
    match args.format {
        Format::Json => {
            let rows: Vec<_> = table.collect();
            emit_json("normalform", args, json!({ "coefficients": rows }), started)
        }
        Format::Csv => {
            let mut out = BufWriter::new(io::stdout().lock());
            writeln!(out, "n1,n2,n3,kind,beta,zero")?;
            for c in table {
                let beta = c.beta.map_or(String::new(), |b| format!("{b:.17e}"));
                writeln!(out, "{},{},{},{},{},{}", c.n1, c.n2, c.n3, args.kind, beta, c.is_zero())?;
            }
            out.flush()?;
            Ok(())
        }
    }
}

fn counting(args: &CountingArgs, started: Instant) -> Outcome {
    let grid = geometric_grid(args.a_grid.0, args.a_grid.1, args.points as usize);
    let window = RatioWindow::default();
    let report = estimate_rho(&grid, (!args.no_ratio_window).then_some(&window))?;
    match args.format {
        Format::Json => emit_json("counting", args, report, started),
        Format::Csv => {
            let mut s = String::from("a,max_count,argmax\n");
            for p in &report.points {
                s.push_str(&format!("{},{},{}\n", p.a, p.max_count, p.argmax));
            }
            emit_csv(&s)
        }
    }
}

fn smalldivisor(args: &SmalldivisorArgs, started: Instant) -> Outcome {
    let r = small_divisor_scan(args.n_max)?;
    match args.format {
        Format::Json => emit_json("smalldivisor", args, r, started),
        Format::Csv => emit_csv(&format!(
            "n_max,min_weighted,n1,n2,n3,divisor,triples_scanned,resonant_skipped\n{},{:.15e},{},{},{},{:.15e},{},{}\n",
            r.n_max,
            r.min_weighted,
            r.argmin.0,
            r.argmin.1,
            r.argmin.2,
            r.divisor_at_min,
            r.triples_scanned,
            r.resonant_skipped
        )),
    }
}

fn evolve(args: &EvolveArgs, started: Instant) -> Outcome {
    if !(args.t >= 0.0 && args.t.is_finite()) {
        return Err(Failure::Runtime(format!("t must be finite and ≥ 0, got {}", args.t)));
    }
    let state = args.init.state(args.n_max)?;
    let rows = time_series(&state, args.t, args.samples as usize)?;
    match args.out {
        Format::Csv => {
            let mut out = BufWriter::new(io::stdout().lock());
            writeln!(out, "t,L2,energy2,L4")?;
            for r in &rows {
                writeln!(out, "{:.10},{:.17e},{:.17e},{:.17e}", r.t, r.l2, r.energy2, r.l4)?;
            }
            out.flush()?;
            Ok(())
        }
        Format::Json => {
            let dt = args.dt.unwrap_or(0.1 / frequency(args.n_max.max(2) as u64));
            let study_t = args.study_t.unwrap_or(args.t.min(0.5));
            let study = if study_t > 0.0 { Some(rk4_order_study(&state, study_t, dt, 3)?) } else { None };
            let last = evolution::evolve_state(&state, args.t)?;
            let drift = |f: &dyn Fn(&evolution::SeriesRow) -> f64| {
                let f0 = f(&rows[0]);
                rows.iter().map(|r| (f(r) - f0).abs() / f0.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
            };
            let payload = json!({
                "series": rows,
                "max_relative_drift": { "l2": drift(&|r| r.l2), "energy2": drift(&|r| r.energy2) },
                "energy2": energy2(&state),
                "rk4_study": study,
                "diagnostics": {
                    "volume_residual": [volume_residual(&state.zeta)?, volume_residual(&last.zeta)?],
                    "center_of_mass_residual": [center_of_mass_residual(&state.zeta)?, center_of_mass_residual(&last.zeta)?],
                },
            });
            emit_json("evolve", args, payload, started)
        }
    }
}

fn strichartz(args: &StrichartzArgs, started: Instant) -> Outcome {
    let params = StrichartzParams {
        s: args.s,
        q: args.q,
        t_max: args.t_max,
        n_max: args.n_max,
        n_samples: args.seeds,
        seed: args.seed,
        n_t: args.n_t,
    };
    let report = strichartz_report(&params)?;
    match args.format {
        Format::Json => emit_json("strichartz", args, report, started),
        Format::Csv => {
            let mut s = String::from("family,n_max,sample,hs_norm,spacetime_norm,ratio,ratio_half,halving_change\n");
            for r in &report.rows {
                let family = serde_json::to_value(r.family).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                s.push_str(&format!(
                    "{family},{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.3e}\n",
                    r.n_max, r.sample, r.hs_norm, r.spacetime_norm, r.ratio, r.ratio_half, r.halving_change
                ));
            }
            emit_csv(&s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot start a pool of {n} threads");
            return ExitCode::from(2);
        }
    }
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Resonances(a) => resonances(a, started),
        Command::Elliptic(a) => elliptic_cmd(a, started),
        Command::Kernel(a) => kernel(a, started),
        Command::Normalform(a) => normalform(a, started),
        Command::Counting(a) => counting(a, started),
        Command::Smalldivisor(a) => smalldivisor(a, started),
        Command::Evolve(a) => evolve(a, started),
        Command::Strichartz(a) => strichartz(a, started),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
