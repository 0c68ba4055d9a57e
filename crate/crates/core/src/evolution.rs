//! The linearized flow `∂ₜu + iΛu = 0` around the round droplet, the
//! `(ζ, φ) ↔ u` packaging, conserved quantities and space-time norm
//! experiments.
//!
//! Degrees 0 and 1 carry zero frequency. Both propagators leave them
//! untouched, so `evolve_state` and `evolve_ode` agree on every degree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::frequency;
use crate::error::{Error, Result};
use crate::sphere::{index, lq_of_values, Projection, SphereGrid, SphericalField, Synthesizer};

/// Tolerance on the degree-0/1 part of `u` accepted by [`decompose`].
pub const LOW_DEGREE_TOL: f64 = 1e-12;

/// Surface height `ζ` and velocity potential `φ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceState {
    pub zeta: SphericalField,
    pub phi: SphericalField,
}

/// The complex variable `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexState {
    pub u: SphericalField,
}

/// `√((n−1)(n+2))` for `n ≥ 2`, else 1.
pub fn weight_zeta(n: usize) -> f64 {
    if n <= 1 {
        1.0
    } else {
        (((n - 1) * (n + 2)) as f64).sqrt()
    }
}

/// `√n`.
pub fn weight_phi(n: usize) -> f64 {
    (n as f64).sqrt()
}

fn sign(m: i64) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl SurfaceState {
    pub fn new(zeta: SphericalField, phi: SphericalField) -> Result<Self> {
        if zeta.n_max != phi.n_max {
            return Err(Error::Domain("ζ and φ have different truncations".into()));
        }
        if !zeta.real || !phi.real {
            return Err(Error::Domain("ζ and φ must be real fields".into()));
        }
        if phi.get(0, 0) != Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("φ must have zero mean".into()));
        }
        Ok(Self { zeta, phi })
    }

    pub fn zero(n_max: usize) -> Self {
        Self { zeta: SphericalField::zeros_real(n_max), phi: SphericalField::zeros_real(n_max) }
    }

    /// `ζ = f`, `φ = 0`.
    pub fn from_height(zeta: SphericalField) -> Result<Self> {
        let n_max = zeta.n_max;
        Self::new(zeta, SphericalField::zeros_real(n_max))
    }

    pub fn n_max(&self) -> usize {
        self.zeta.n_max
    }

    fn split_low(&self) -> Result<(Self, Self)> {
        let low = Self {
            zeta: self.zeta.project(Projection::AtMost(1))?,
            phi: self.phi.project(Projection::AtMost(1))?,
        };
        let high = Self {
            zeta: self.zeta.project(Projection::AtLeast(2))?,
            phi: self.phi.project(Projection::AtLeast(2))?,
        };
        Ok((low, high))
    }

    fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { zeta: self.zeta.add(&other.zeta)?, phi: self.phi.add(&other.phi)? })
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.zeta.max_diff(&other.zeta).max(self.phi.max_diff(&other.phi))
    }
}

/// Named initial heights with `φ = 0`: `zonal:k`, `hw:k` (the real part of
/// the highest-weight harmonic, `∝ sinᵏθ·cos kφ`) or `random:seed`
/// (degrees ≥ 2, flat in `H¹`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCondition {
    Zonal(usize),
    HighestWeight(usize),
    Random(u64),
}

impl std::str::FromStr for InitialCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("expected zonal:k, hw:k or random:seed, got {s:?}"));
        let (tag, arg) = s.split_once(':').ok_or_else(bad)?;
        match tag {
            "zonal" => Ok(Self::Zonal(arg.parse().map_err(|_| bad())?)),
            "hw" => Ok(Self::HighestWeight(arg.parse().map_err(|_| bad())?)),
            "random" => Ok(Self::Random(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Zonal(k) => write!(f, "zonal:{k}"),
            Self::HighestWeight(k) => write!(f, "hw:{k}"),
            Self::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl InitialCondition {
    pub fn state(self, n_max: usize) -> Result<SurfaceState> {
        let zeta = match self {
            Self::Zonal(k) => SphericalField::zonal(k, n_max)?,
            Self::HighestWeight(k) => {
                let h = SphericalField::highest_weight(k, n_max)?;
                if k == 0 {
                    h
                } else {
                    let mut z = SphericalField::zeros_real(n_max);
                    let c = h.get(k, k as i64) / 2f64.sqrt();
                    z.set(k, k as i64, c);
                    z.set(k, -(k as i64), c.conj() * sign(k as i64));
                    z
                }
            }
            Self::Random(seed) => SphericalField::random(n_max, 2.min(n_max + 1), 1.0, true, seed),
        };
        SurfaceState::from_height(zeta)
    }
}

/// `u_{n,m} = w_ζ(n)·ζ_{n,m} + i·w_φ(n)·φ_{n,m}`.
pub fn assemble(state: &SurfaceState) -> ComplexState {
    let n_max = state.n_max();
    let mut u = SphericalField::zeros(n_max);
    for n in 0..=n_max {
        let (wz, wp) = (weight_zeta(n), weight_phi(n));
        for m in -(n as i64)..=n as i64 {
            let i = index(n, m);
            u.coeffs[i] = state.zeta.coeffs[i] * wz + Complex64::i() * state.phi.coeffs[i] * wp;
        }
    }
    ComplexState { u }
}

/// Inverse of [`assemble`] on states without degree-0/1 content.
pub fn decompose(state: &ComplexState) -> Result<SurfaceState> {
    let u = &state.u;
    let low: f64 = u.degree_energies().iter().take(2).sum::<f64>().sqrt();
    if low > LOW_DEGREE_TOL * u.l2_norm().max(1.0) {
        return Err(Error::Constraint(format!("u has degree-0/1 content of size {low:.3e}")));
    }
    let mut s = SurfaceState::zero(u.n_max);
    for n in 2..=u.n_max {
        let (wz, wp) = (weight_zeta(n), weight_phi(n));
        for m in -(n as i64)..=n as i64 {
            let a = u.get(n, m);
            let b = u.get(n, -m).conj() * sign(m);
            s.zeta.set(n, m, (a + b) / (2.0 * wz));
            s.phi.set(n, m, (a - b) / (Complex64::new(0.0, 2.0) * wp));
        }
    }
    Ok(s)
}

/// `e^{−iΛ(n)t}`, with `Λ(n)·t` formed exactly and reduced mod `2π` in
/// extended precision so that large times keep full phase accuracy.
pub fn propagator_phase(n: usize, t: f64) -> Complex64 {
    const TWO_PI_HI: f64 = 6.283_185_307_179_586;
    const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;
    let lambda = frequency(n as u64);
    let p = lambda * t;
    let err = lambda.mul_add(t, -p);
    let k = (p / TWO_PI_HI).round();
    let r = (-k).mul_add(TWO_PI_HI, p) - k * TWO_PI_LO + err;
    Complex64::from_polar(1.0, -r)
}

/// `u(t)_{n,m} = e^{−iΛ(n)t}·u0_{n,m}`.
pub fn evolve(u0: &ComplexState, t: f64) -> ComplexState {
    let mut u = u0.u.clone();
    u.real = false;
    for n in 0..=u.n_max {
        let phase = propagator_phase(n, t);
        for c in &mut u.coeffs[n * n..(n + 1) * (n + 1)] {
            *c *= phase;
        }
    }
    ComplexState { u }
}

/// Exact flow of `(ζ, φ)`; degrees 0 and 1 are carried unchanged.
pub fn evolve_state(state: &SurfaceState, t: f64) -> Result<SurfaceState> {
    let (low, high) = state.split_low()?;
    let moved = decompose(&evolve(&assemble(&high), t))?;
    low.add(&moved)
}

/// Classic RK4 on `ζ′ = nφ`, `φ′ = −(n−1)(n+2)ζ` for `n ≥ 2`, with
/// `⌈t/dt⌉` equal steps.
pub fn evolve_ode(state0: &SurfaceState, t: f64, dt: f64) -> Result<SurfaceState> {
    if !(dt > 0.0) || !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("need dt > 0 and t ≥ 0, got dt = {dt}, t = {t}")));
    }
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let n_max = state0.n_max();
    let mut out = state0.clone();
    let per_degree: Vec<(Vec<Complex64>, Vec<Complex64>)> = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let a = n as f64;
            let b = -(((n - 1) * (n + 2)) as f64);
            let lo = index(n, -(n as i64));
            let hi = index(n, n as i64) + 1;
            let mut z = state0.zeta.coeffs[lo..hi].to_vec();
            let mut p = state0.phi.coeffs[lo..hi].to_vec();
            for (z, p) in z.iter_mut().zip(p.iter_mut()) {
                for _ in 0..steps {
                    let (k1z, k1p) = (a * *p, b * *z);
                    let (k2z, k2p) = (a * (*p + 0.5 * h * k1p), b * (*z + 0.5 * h * k1z));
                    let (k3z, k3p) = (a * (*p + 0.5 * h * k2p), b * (*z + 0.5 * h * k2z));
                    let (k4z, k4p) = (a * (*p + h * k3p), b * (*z + h * k3z));
                    *z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
                    *p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
                }
            }
            (z, p)
        })
        .collect();
    for (k, (z, p)) in per_degree.into_iter().enumerate() {
        let n = k + 2;
        let lo = index(n, -(n as i64));
        out.zeta.coeffs[lo..lo + z.len()].copy_from_slice(&z);
        out.phi.coeffs[lo..lo + p.len()].copy_from_slice(&p);
    }
    Ok(out)
}

/// `½ Σ_{n≥2,m} [(n−1)(n+2)|ζ_{n,m}|² + n|φ_{n,m}|²]`.
pub fn energy2(state: &SurfaceState) -> f64 {
    let ez = state.zeta.degree_energies();
    let ep = state.phi.degree_energies();
    0.5 * (2..=state.n_max()).map(|n| ((n - 1) * (n + 2)) as f64 * ez[n] + n as f64 * ep[n]).sum::<f64>()
}

fn real_values(f: &SphericalField, grid: SphereGrid) -> Result<(Synthesizer, Vec<f64>)> {
    let syn = Synthesizer::new(grid, f.n_max)?;
    let vals = syn.synthesize(f)?.into_iter().map(|v| v.re).collect();
    Ok((syn, vals))
}

/// `⅓∫(1+ζ)³dμ − 4π/3`: the enclosed-volume defect of `r = 1 + ζ`.
pub fn volume_residual(zeta: &SphericalField) -> Result<f64> {
    let (syn, vals) = real_values(zeta, SphereGrid::for_degree(3 * zeta.n_max.max(1)))?;
    let cubed: Vec<f64> = vals.iter().map(|z| (1.0 + z).powi(3)).collect();
    Ok(syn.grid.integrate(&cubed) / 3.0 - 4.0 * PI / 3.0)
}

/// `∫(1+ζ)⁴N₀dμ`, proportional to the centroid of the enclosed body.
pub fn center_of_mass_residual(zeta: &SphericalField) -> Result<[f64; 3]> {
    let (syn, vals) = real_values(zeta, SphereGrid::for_degree(4 * zeta.n_max.max(1) + 1))?;
    let g = &syn.grid;
    let mut out = [0.0; 3];
    for (axis, slot) in out.iter_mut().enumerate() {
        let integrand: Vec<f64> = vals
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let (j, k) = (i / g.n_lon, i % g.n_lon);
                let (c, s) = (g.cos_theta[j], (1.0 - g.cos_theta[j].powi(2)).max(0.0).sqrt());
                let phi = g.phi(k);
                let normal = [s * phi.cos(), s * phi.sin(), c][axis];
                (1.0 + z).powi(4) * normal
            })
            .collect();
        *slot = g.integrate(&integrand);
    }
    Ok(out)
}

/// One row of a conservation time series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    /// `‖u‖_{L²}`.
    pub l2: f64,
    pub energy2: f64,
    /// `‖ζ‖_{L⁴}`.
    pub l4: f64,
}

/// Samples the exact flow at `t = k·t_end/samples`, `k = 0..=samples`.
pub fn time_series(state: &SurfaceState, t_end: f64, samples: usize) -> Result<Vec<SeriesRow>> {
    if samples == 0 || !(t_end >= 0.0) {
        return Err(Error::Domain("need samples ≥ 1 and t ≥ 0".into()));
    }
    let n_max = state.n_max();
    let syn = Synthesizer::new(SphereGrid::for_power(n_max, 4), n_max)?;
    let (low, high) = state.split_low()?;
    let u0 = assemble(&high);
    (0..=samples)
        .into_par_iter()
        .map(|k| {
            let t = t_end * k as f64 / samples as f64;
            let u = evolve(&u0, t);
            let s = low.add(&decompose(&u)?)?;
            let vals = syn.synthesize(&s.zeta)?;
            let u_full = assemble(&s);
            Ok(SeriesRow { t, l2: u_full.u.l2_norm(), energy2: energy2(&s), l4: lq_of_values(&vals, &syn.grid, 4) })
        })
        .collect()
}

/// RK4 against the exact flow for a sequence of halved steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderStudy {
    pub t: f64,
    pub dts: Vec<f64>,
    /// Max coefficient error against [`evolve_state`].
    pub errors: Vec<f64>,
    /// `log₂(e_k / e_{k+1})`.
    pub orders: Vec<f64>,
    /// Relative energy2 drift of each RK4 run.
    pub energy_drift: Vec<f64>,
}

pub fn rk4_order_study(state: &SurfaceState, t: f64, dt0: f64, levels: usize) -> Result<OrderStudy> {
    if levels < 2 {
        return Err(Error::Domain("an order study needs at least two step sizes".into()));
    }
    let exact = evolve_state(state, t)?;
    let e0 = energy2(state);
    let dts: Vec<f64> = (0..levels).map(|k| dt0 / (1u64 << k) as f64).collect();
    let mut errors = Vec::with_capacity(levels);
    let mut energy_drift = Vec::with_capacity(levels);
    for &dt in &dts {
        let s = evolve_ode(state, t, dt)?;
        errors.push(s.max_diff(&exact));
        energy_drift.push(if e0 > 0.0 { (energy2(&s) - e0).abs() / e0 } else { energy2(&s).abs() });
    }
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(OrderStudy { t, dts, errors, orders, energy_drift })
}

/// `(∫₀ᵀ ∫|e^{−itΛ}f|^q dμ dt)^{1/q}` by the trapezoid rule on `n_t`
/// intervals, together with the same quantity on every other sample.
pub fn spacetime_norm(f: &SphericalField, q: u32, t_max: f64, n_t: usize) -> Result<(f64, f64)> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::Domain(format!("only even exponents are supported, got {q}")));
    }
    if n_t < 2 || n_t % 2 == 1 {
        return Err(Error::Domain("time intervals must be even and ≥ 2".into()));
    }
    let grid = SphereGrid::for_power(f.n_max, q);
    let syn = Synthesizer::for_field(grid, f)?;
    let slices: Vec<f64> = (0..=n_t)
        .into_par_iter()
        .map(|k| {
            let t = t_max * k as f64 / n_t as f64;
            let vals = syn.synthesize_with_phases(f, |n| propagator_phase(n, t));
            lq_of_values(&vals, &syn.grid, q).powi(q as i32)
        })
        .collect();
    let trapezoid = |stride: usize| -> f64 {
        let h = t_max * stride as f64 / n_t as f64;
        let pts: Vec<f64> = slices.iter().step_by(stride).copied().collect();
        let inner: f64 = pts[1..pts.len() - 1].iter().sum();
        h * (inner + 0.5 * (pts[0] + pts[pts.len() - 1]))
    };
    let inv = 1.0 / q as f64;
    Ok((trapezoid(1).powf(inv), trapezoid(2).powf(inv)))
}

/// Smallest admissible number of time intervals: `32·⌈TΛ(n_max)/2π⌉`.
pub fn required_time_steps(t_max: f64, n_max: usize) -> usize {
    let periods = (t_max * frequency(n_max as u64) / (2.0 * PI)).ceil().max(1.0) as usize;
    32 * periods
}

/// Strichartz experiment parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzParams {
    pub s: f64,
    pub q: u32,
    pub t_max: f64,
    pub n_max: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Overrides the time sampling; must not undercut [`required_time_steps`].
    pub n_t: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Random,
    Zonal,
    HighestWeight,
    Band,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzRow {
    pub family: Family,
    pub n_max: usize,
    pub sample: usize,
    pub hs_norm: f64,
    pub spacetime_norm: f64,
    pub ratio: f64,
    /// Ratio on every other time sample.
    pub ratio_half: f64,
    pub halving_change: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyTrend {
    pub family: Family,
    /// Mean ratio per truncation level.
    pub mean_ratio: Vec<(usize, f64)>,
    /// Log-log slope of mean ratio against `n_max` (None with < 2 levels).
    pub slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzReport {
    pub params: StrichartzParams,
    pub levels: Vec<usize>,
    pub rows: Vec<StrichartzRow>,
    pub trends: Vec<FamilyTrend>,
    pub max_halving_change: f64,
}

/// Truncation levels `8, 16, …` below `n_max`, then `n_max`.
pub fn strichartz_levels(n_max: usize) -> Vec<usize> {
    let mut levels: Vec<usize> = std::iter::successors(Some(8usize), |l| Some(l * 2)).take_while(|&l| l < n_max).collect();
    levels.push(n_max);
    levels
}

/// Random coefficients on degrees with `Λ(n) ≥ Λ(n_max)/2`.
pub fn band_field(n_max: usize, s: f64, seed: u64) -> SphericalField {
    let cut = frequency(n_max as u64) / 2.0;
    let lo = (2..=n_max).find(|&n| frequency(n as u64) >= cut).unwrap_or(n_max);
    SphericalField::random(n_max, lo, s, false, seed)
}

pub fn strichartz_report(params: &StrichartzParams) -> Result<StrichartzReport> {
    let p = params;
    if !(p.t_max > 0.0) {
        return Err(Error::Domain("T must be positive".into()));
    }
    if p.q == 0 || p.q % 2 == 1 {
        return Err(Error::Domain(format!("only even exponents are supported, got {}", p.q)));
    }
    if p.n_max < 2 {
        return Err(Error::Domain("n_max must be at least 2".into()));
    }
    let required = required_time_steps(p.t_max, p.n_max);
    if let Some(n_t) = p.n_t {
        if n_t < required {
            return Err(Error::Resolution(format!("{n_t} time steps under-resolve Λ(n_max); need ≥ {required}")));
        }
    }
    let levels = strichartz_levels(p.n_max);
    let mut rows = Vec::new();
    for &n in &levels {
        let n_t = p.n_t.map_or_else(|| required_time_steps(p.t_max, n), |v| v.max(required_time_steps(p.t_max, n)));
        let n_t = n_t + n_t % 2;
        let mut cases: Vec<(Family, usize, SphericalField)> = (0..p.n_samples)
            .map(|k| (Family::Random, k, SphericalField::random(n, 2, p.s, false, p.seed.wrapping_add(k as u64))))
            .collect();
        cases.push((Family::Zonal, 0, SphericalField::zonal(n, n)?));
        cases.push((Family::HighestWeight, 0, SphericalField::highest_weight(n, n)?));
        cases.push((Family::Band, 0, band_field(n, p.s, p.seed)));
        for (family, sample, f) in cases {
            let hs = f.norm_sobolev(p.s);
            let (full, half) = spacetime_norm(&f, p.q, p.t_max, n_t)?;
            let (ratio, ratio_half) = (full / hs, half / hs);
            rows.push(StrichartzRow {
                family,
                n_max: n,
                sample,
                hs_norm: hs,
                spacetime_norm: full,
                ratio,
                ratio_half,
                halving_change: (ratio_half - ratio).abs() / ratio,
            });
        }
    }
    let trends = [Family::Random, Family::Zonal, Family::HighestWeight, Family::Band]
        .into_iter()
        .map(|family| {
            let mean_ratio: Vec<(usize, f64)> = levels
                .iter()
                .map(|&n| {
                    let r: Vec<f64> = rows.iter().filter(|r| r.family == family && r.n_max == n).map(|r| r.ratio).collect();
                    (n, r.iter().sum::<f64>() / r.len().max(1) as f64)
                })
                .filter(|(_, r)| r.is_finite() && *r > 0.0)
                .collect();
            let slope = (mean_ratio.len() >= 2).then(|| {
                let pts: Vec<(f64, f64)> = mean_ratio.iter().map(|(n, r)| ((*n as f64).ln(), r.ln())).collect();
                crate::resonance::least_squares(&pts).0
            });
            FamilyTrend { family, mean_ratio, slope }
        })
        .collect();
    let max_halving_change = rows.iter().map(|r| r.halving_change).fold(0.0, f64::max);
    Ok(StrichartzReport { params: p.clone(), levels, rows, trends, max_halving_change })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_state(n_max: usize, seed: u64) -> SurfaceState {
        let z = SphericalField::random(n_max, 2, 1.0, true, seed);
        let p = SphericalField::random(n_max, 2, 1.0, true, seed + 1000);
        SurfaceState::new(z, p).unwrap()
    }

    #[test]
    fn assemble_examples() {
        let s = SurfaceState::from_height(SphericalField::zonal(2, 4).unwrap()).unwrap();
        let u = assemble(&s);
        assert!((u.u.get(2, 0) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let s = SurfaceState::new(SphericalField::zeros_real(4), SphericalField::zonal(4, 4).unwrap()).unwrap();
        assert!((assemble(&s).u.get(4, 0) - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(assemble(&SurfaceState::zero(3)).u.l2_norm(), 0.0);
    }

    #[test]
    fn decompose_examples() {
        let mut u = SphericalField::zeros(4);
        u.set(2, 0, Complex64::new(2.0, 0.0));
        let s = decompose(&ComplexState { u }).unwrap();
        assert!(s.zeta.max_diff(&SphericalField::zonal(2, 4).unwrap()) < 1e-15);
        assert_eq!(s.phi.l2_norm(), 0.0);
        let mut u = SphericalField::zeros(4);
        u.set(1, 1, Complex64::new(1e-6, 0.0));
        assert!(matches!(decompose(&ComplexState { u }), Err(Error::Constraint(_))));
    }

    #[test]
    fn round_trip_and_parseval_energy() {
        let s = random_state(20, 3);
        let u = assemble(&s);
        assert!(decompose(&u).unwrap().max_diff(&s) < 1e-12);
        assert!((energy2(&s) - 0.5 * u.u.l2_norm().powi(2)).abs() < 1e-12 * energy2(&s));
    }

    #[test]
    fn energy_of_zonal_two() {
        let s = SurfaceState::from_height(SphericalField::zonal(2, 3).unwrap()).unwrap();
        assert!((energy2(&s) - 2.0).abs() < 1e-15);
        assert_eq!(energy2(&SurfaceState::zero(5)), 0.0);
    }

    #[test]
    fn propagator_period_and_group_law() {
        let s = SurfaceState::from_height(SphericalField::zonal(2, 2).unwrap()).unwrap();
        let u0 = assemble(&s);
        let u = evolve(&u0, 2.0 * PI / 8f64.sqrt());
        assert!(u.u.max_diff(&u0.u) < 1e-14);
        let u0 = assemble(&random_state(16, 9));
        let a = evolve(&evolve(&u0, 0.7), 1.9);
        let b = evolve(&u0, 2.6);
        assert!(a.u.max_diff(&b.u) < 1e-12);
        assert!(evolve(&u0, 0.0).u.max_diff(&u0.u) == 0.0);
        assert!((evolve(&u0, 50.0).u.l2_norm() - u0.u.l2_norm()).abs() < 1e-14 * u0.u.l2_norm());
    }

    #[test]
    fn phase_reduction_matches_direct_evaluation() {
        for (n, t) in [(2usize, 0.3), (64, 1.0), (64, -7.25), (500, 1e4)] {
            let direct = Complex64::from_polar(1.0, -frequency(n as u64) * t);
            let tol = 4.0 * f64::EPSILON * (frequency(n as u64) * t).abs().max(1.0);
            assert!((propagator_phase(n, t) - direct).norm() < tol);
        }
        assert_eq!(propagator_phase(0, 123.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn initial_conditions_parse() {
        let ic: InitialCondition = "hw:3".parse().unwrap();
        assert_eq!(ic, InitialCondition::HighestWeight(3));
        assert_eq!(ic.to_string(), "hw:3");
        let s = ic.state(5).unwrap();
        assert!(s.zeta.real && s.zeta.conjugation_defect() == 0.0);
        assert!((s.zeta.l2_norm() - 1.0).abs() < 1e-15);
        assert!("zonal:x".parse::<InitialCondition>().is_err());
        assert!("ring:2".parse::<InitialCondition>().is_err());
        assert!(InitialCondition::Zonal(9).state(4).is_err());
        assert_eq!("random:7".parse::<InitialCondition>().unwrap().state(6).unwrap().zeta.degree_energies()[1], 0.0);
    }

    #[test]
    fn ode_keeps_low_degrees() {
        let mut z = SphericalField::zeros_real(3);
        z.set(0, 0, Complex64::new(0.3, 0.0));
        z.set(1, 0, Complex64::new(0.1, 0.0));
        let s = SurfaceState::from_height(z).unwrap();
        let out = evolve_ode(&s, 1.0, 0.01).unwrap();
        assert_eq!(out, s);
        assert_eq!(evolve_state(&s, 1.0).unwrap().max_diff(&s), 0.0);
        assert!(evolve_ode(&s, 1.0, 0.0).is_err());
    }

    #[test]
    fn rk4_is_fourth_order() {
        let s = random_state(8, 4);
        let study = rk4_order_study(&s, 0.5, 0.01, 3).unwrap();
        for o in &study.orders {
            assert!((o - 4.0).abs() < 0.2, "{:?}", study);
        }
        assert!(study.energy_drift[2] < study.energy_drift[0]);
    }

    #[test]
    fn volume_and_centroid_of_round_sphere() {
        let z = SphericalField::zeros_real(4);
        assert!(volume_residual(&z).unwrap().abs() < 1e-14);
        assert!(center_of_mass_residual(&z).unwrap().iter().all(|v| v.abs() < 1e-14));
        // uniform dilation: r = 1 + ε
        let mut z = SphericalField::zeros_real(2);
        let eps = 0.1;
        z.set(0, 0, Complex64::new(eps * (4.0 * PI).sqrt(), 0.0));
        let v = volume_residual(&z).unwrap();
        assert!((v - 4.0 * PI / 3.0 * ((1.0 + eps).powi(3) - 1.0)).abs() < 1e-12);
        // a shift along the axis moves the centroid along the axis only
        let z = SphericalField::zonal(1, 2).unwrap().scale(Complex64::new(0.05, 0.0));
        let c = center_of_mass_residual(&z).unwrap();
        assert!(c[0].abs() < 1e-14 && c[1].abs() < 1e-14 && c[2] > 0.0);
    }

    #[test]
    fn single_mode_spacetime_norm() {
        let f = SphericalField::highest_weight(6, 6).unwrap();
        let l4 = crate::sphere::norm(&f, crate::sphere::Lq::Even(4)).unwrap();
        let t = 1.3;
        let (full, half) = spacetime_norm(&f, 4, t, required_time_steps(t, 6)).unwrap();
        assert!((full - t.powf(0.25) * l4).abs() < 1e-10);
        assert!((half - full).abs() < 1e-10);
    }

    #[test]
    fn strichartz_report_is_stable() {
        let params = StrichartzParams { s: 3.0, q: 4, t_max: 1.0, n_max: 12, n_samples: 2, seed: 1, n_t: None };
        let r = strichartz_report(&params).unwrap();
        assert_eq!(r.levels, vec![8, 12]);
        assert_eq!(r.rows.len(), 2 * 5);
        assert!(r.max_halving_change < 0.01, "{}", r.max_halving_change);
        assert_eq!(strichartz_report(&params).unwrap(), r);
        let bad = StrichartzParams { n_t: Some(10), ..params };
        assert!(matches!(strichartz_report(&bad), Err(Error::Resolution(_))));
    }

    #[test]
    fn time_series_conserves() {
        let s = random_state(10, 2);
        let rows = time_series(&s, 5.0, 10).unwrap();
        for r in &rows {
            assert!((r.l2 - rows[0].l2).abs() < 1e-12 * rows[0].l2);
            assert!((r.energy2 - rows[0].energy2).abs() < 1e-12 * rows[0].energy2);
        }
    }
}
