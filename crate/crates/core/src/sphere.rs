//! Spherical-harmonic fields on `S²`, Gauss–Legendre × equispaced grids,
//! synthesis/analysis and `L^q` / Sobolev norms.
//!
//! Basis: `Y_{n,m}(θ, φ) = P̄_n^m(cos θ)·e^{imφ}` for `m ≥ 0`, with `P̄`
//! normalized so that `‖Y_{n,m}‖_{L²(S²)} = 1`, no Condon–Shortley phase,
//! and `Y_{n,−m} = (−1)^m·conj(Y_{n,m})`. With this convention a field is
//! real-valued iff `c_{n,−m} = (−1)^m·conj(c_{n,m})`.
//!
//! Coefficients are stored degree-major, `m` ascending:
//! `index(n, m) = n² + n + m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flat position of `(n, m)`, `|m| ≤ n`.
#[inline]
pub fn index(n: usize, m: i64) -> usize {
    debug_assert!(m.unsigned_abs() as usize <= n);
    ((n * n + n) as i64 + m) as usize
}

/// Truncated spherical-harmonic expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalField {
    pub n_max: usize,
    pub coeffs: Vec<Complex64>,
    /// Declares the field real-valued (conjugation-symmetric coefficients).
    pub real: bool,
}

/// Which degrees a projection keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Degree(usize),
    AtMost(usize),
    AtLeast(usize),
}

impl Projection {
    fn keeps(self, n: usize) -> bool {
        match self {
            Projection::Degree(k) => n == k,
            Projection::AtMost(k) => n <= k,
            Projection::AtLeast(k) => n >= k,
        }
    }
}

/// One `(n, m, re, im)` coefficient record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub n: usize,
    pub m: i64,
    pub re: f64,
    pub im: f64,
}

impl SphericalField {
    pub fn zeros(n_max: usize) -> Self {
        Self { n_max, coeffs: vec![Complex64::new(0.0, 0.0); (n_max + 1) * (n_max + 1)], real: false }
    }

    pub fn zeros_real(n_max: usize) -> Self {
        Self { real: true, ..Self::zeros(n_max) }
    }

    fn check_degree(n: usize, n_max: usize) -> Result<()> {
        if n > n_max {
            return Err(Error::Domain(format!("degree {n} exceeds truncation {n_max}")));
        }
        Ok(())
    }

    /// The normalized axisymmetric harmonic of degree `n` (`c_{n,0} = 1`).
    pub fn zonal(n: usize, n_max: usize) -> Result<Self> {
        Self::check_degree(n, n_max)?;
        let mut f = Self::zeros_real(n_max);
        f.coeffs[index(n, 0)] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    /// `c_{n,n} = 1`: the harmonic `∝ sinⁿθ·e^{inφ}` concentrated on the equator.
    pub fn highest_weight(n: usize, n_max: usize) -> Result<Self> {
        Self::check_degree(n, n_max)?;
        let mut f = Self::zeros(n_max);
        f.coeffs[index(n, n as i64)] = Complex64::new(1.0, 0.0);
        f.real = n == 0;
        Ok(f)
    }

    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        self.coeffs[index(n, m)]
    }

    pub fn set(&mut self, n: usize, m: i64, v: Complex64) {
        self.coeffs[index(n, m)] = v;
    }

    /// Iterates `(n, m, c_{n,m})` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.n_max).flat_map(move |n| (-(n as i64)..=n as i64).map(move |m| (n, m, self.get(n, m))))
    }

    pub fn project(&self, which: Projection) -> Result<Self> {
        let k = match which {
            Projection::Degree(k) | Projection::AtMost(k) | Projection::AtLeast(k) => k,
        };
        if k > self.n_max + 1 {
            return Err(Error::Domain(format!("projection degree {k} beyond truncation {}", self.n_max)));
        }
        let mut out = self.clone();
        for n in 0..=self.n_max {
            if !which.keeps(n) {
                for m in -(n as i64)..=n as i64 {
                    out.coeffs[index(n, m)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        Ok(out)
    }

    /// `Σ_m |c_{n,m}|²` for each degree.
    pub fn degree_energies(&self) -> Vec<f64> {
        (0..=self.n_max)
            .map(|n| (-(n as i64)..=n as i64).map(|m| self.get(n, m).norm_sqr()).sum())
            .collect()
    }

    /// `L²` norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(Σ (1 + n(n+1))^s |c_{n,m}|²)^{1/2}`.
    pub fn norm_sobolev(&self, s: f64) -> f64 {
        self.degree_energies()
            .iter()
            .enumerate()
            .map(|(n, e)| (1.0 + (n * (n + 1)) as f64).powf(s) * e)
            .sum::<f64>()
            .sqrt()
    }

    /// Largest violation of `c_{n,−m} = (−1)^m conj(c_{n,m})`.
    pub fn conjugation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..=self.n_max {
            for m in 0..=n as i64 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let d = (self.get(n, -m) - self.get(n, m).conj() * sign).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect(), real: self.real && s.im == 0.0, ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_max != other.n_max {
            return Err(Error::Domain("fields have different truncations".into()));
        }
        Ok(Self {
            n_max: self.n_max,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            real: self.real && other.real,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient-wise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Seeded complex Gaussian coefficients on degrees `lo..=n_max`, each
    /// scaled by `(1 + n(n+1))^{−s/2}` so the `H^s` energy per coefficient
    /// is flat. With `real` the conjugation symmetry is imposed.
    pub fn random(n_max: usize, lo: usize, s: f64, real: bool, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Self::zeros(n_max);
        f.real = real;
        let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
        for n in lo..=n_max {
            let w = (1.0 + (n * (n + 1)) as f64).powf(-s / 2.0);
            if real {
                f.set(n, 0, Complex64::new(gauss() * w, 0.0));
                for m in 1..=n as i64 {
                    let c = Complex64::new(gauss(), gauss()) * (w / 2f64.sqrt());
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    f.set(n, m, c);
                    f.set(n, -m, c.conj() * sign);
                }
            } else {
                for m in -(n as i64)..=n as i64 {
                    f.set(n, m, Complex64::new(gauss(), gauss()) * (w / 2f64.sqrt()));
                }
            }
        }
        f
    }

    pub fn to_records(&self) -> Vec<CoeffRecord> {
        self.iter().map(|(n, m, c)| CoeffRecord { n, m, re: c.re, im: c.im }).collect()
    }

    /// Rebuilds from records; missing coefficients are zero.
    pub fn from_records(n_max: usize, records: &[CoeffRecord], real: bool) -> Result<Self> {
        let mut f = Self::zeros(n_max);
        f.real = real;
        for r in records {
            if r.n > n_max || r.m.unsigned_abs() as usize > r.n {
                return Err(Error::Domain(format!("record ({}, {}) outside truncation {n_max}", r.n, r.m)));
            }
            f.set(r.n, r.m, Complex64::new(r.re, r.im));
        }
        Ok(f)
    }

    /// Little-endian binary: `u32 n_max`, `u8 real`, then `(re, im)` as
    /// `f64` pairs in storage order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(5 + 16 * self.coeffs.len());
        out.extend_from_slice(&(self.n_max as u32).to_le_bytes());
        out.push(self.real as u8);
        for c in &self.coeffs {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 5 {
            return Err(Error::Domain("truncated field header".into()));
        }
        let n_max = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let real = bytes[4] != 0;
        let body = &bytes[5..];
        let len = (n_max + 1) * (n_max + 1);
        if body.len() != 16 * len {
            return Err(Error::Domain(format!("expected {} coefficient bytes, got {}", 16 * len, body.len())));
        }
        let coeffs = body
            .chunks_exact(16)
            .map(|ch| {
                Complex64::new(
                    f64::from_le_bytes(ch[0..8].try_into().unwrap()),
                    f64::from_le_bytes(ch[8..16].try_into().unwrap()),
                )
            })
            .collect();
        Ok(Self { n_max, coeffs, real })
    }

    /// Orders `m ≥ 0` that carry a nonzero coefficient (for either sign of `m`).
    fn active_orders(&self) -> Vec<usize> {
        (0..=self.n_max)
            .filter(|&m| {
                (m..=self.n_max).any(|n| {
                    let mi = m as i64;
                    self.get(n, mi) != Complex64::new(0.0, 0.0) || self.get(n, -mi) != Complex64::new(0.0, 0.0)
                })
            })
            .collect()
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes descending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Smallest `2^a·3^b·5^c ≥ n`.
pub fn smooth_at_least(n: usize) -> usize {
    (n.max(1)..)
        .find(|&k| {
            let mut r = k;
            for p in [2, 3, 5] {
                while r % p == 0 {
                    r /= p;
                }
            }
            r == 1
        })
        .unwrap()
}

/// Tensor grid: Gauss–Legendre in `cos θ`, equispaced in `φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    /// `cos θ_j`, descending from the north pole.
    pub cos_theta: Vec<f64>,
    pub weights: Vec<f64>,
    pub n_lon: usize,
}

impl SphereGrid {
    pub fn new(n_lat: usize, n_lon: usize) -> Self {
        let (cos_theta, weights) = gauss_legendre(n_lat);
        Self { cos_theta, weights, n_lon }
    }

    /// Exact for band-limited integrands of total degree `≤ degree`:
    /// `degree/2 + 2` latitudes and at least `degree + 1` longitudes,
    /// rounded up to a 5-smooth count for the FFT.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree / 2 + 2, smooth_at_least(degree + 1))
    }

    /// Grid on which `∫|f|^q` is computed exactly for fields of degree `n_max`.
    pub fn for_power(n_max: usize, q: u32) -> Self {
        Self::for_degree(q as usize * n_max.max(1))
    }

    pub fn n_lat(&self) -> usize {
        self.cos_theta.len()
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_lon as f64
    }

    /// Whether integrands of total degree `degree` are integrated exactly.
    pub fn integrates_degree(&self, degree: usize) -> bool {
        2 * self.n_lat() > degree && self.n_lon > degree
    }

    /// Synthesis and analysis of degree-`n_max` fields are exact inverses.
    pub fn resolves(&self, n_max: usize) -> bool {
        self.integrates_degree(2 * n_max)
    }

    /// `∫ g dμ` for grid values `g` (row-major, latitude first).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let dphi = 2.0 * PI / self.n_lon as f64;
        self.weights
            .iter()
            .zip(values.chunks_exact(self.n_lon))
            .map(|(w, row)| w * dphi * row.iter().sum::<f64>())
            .sum()
    }
}

/// `P̄_n^m(x)` for `n = m..=n_max` at fixed `m`, `sin θ = s`.
///
/// The sectoral seed `P̄_m^m ∝ sin^m θ` underflows for large `m` near the
/// poles, so the recursion runs on a mantissa with a separate log-scale
/// that is folded back on output.
pub fn legendre_column(m: usize, n_max: usize, x: f64, s: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= n_max + 1 - m);
    let mut log_seed = -(4.0 * PI).ln() / 2.0;
    for k in 1..=m {
        log_seed += 0.5 * ((2 * k + 1) as f64 / (2 * k) as f64).ln();
    }
    if m > 0 {
        if s == 0.0 {
            out.iter_mut().take(n_max + 1 - m).for_each(|v| *v = 0.0);
            return;
        }
        log_seed += m as f64 * s.ln();
    }
    const BIG: f64 = 1e200;
    let mut scale = 0.0;
    let mut seed = log_seed;
    if seed < -600.0 {
        scale = seed + 600.0;
        seed = -600.0;
    }
    let emit = |v: f64, scale: f64| -> f64 {
        if scale == 0.0 {
            v
        } else if v == 0.0 {
            0.0
        } else {
            v.signum() * (v.abs().ln() + scale).exp()
        }
    };
    let mut p_prev = 0.0;
    let mut p = seed.exp();
    out[0] = emit(p, scale);
    for n in (m + 1)..=n_max {
        let (nf, mf) = (n as f64, m as f64);
        let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
        let b = if n == m + 1 {
            0.0
        } else {
            let n1 = nf - 1.0;
            ((n1 * n1 - mf * mf) / (4.0 * n1 * n1 - 1.0)).sqrt()
        };
        let next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
        if scale != 0.0 && p.abs() > BIG {
            p /= BIG;
            p_prev /= BIG;
            scale += BIG.ln();
            if scale >= 0.0 {
                p *= scale.exp();
                p_prev *= scale.exp();
                scale = 0.0;
            }
        }
        out[n - m] = emit(p, scale);
    }
}

/// Point value of `f` at `(θ, φ)`.
pub fn evaluate(f: &SphericalField, theta: f64, phi: f64) -> Complex64 {
    evaluate_orders(f, &f.active_orders(), theta, phi)
}

fn evaluate_orders(f: &SphericalField, orders: &[usize], theta: f64, phi: f64) -> Complex64 {
    let (x, s) = (theta.cos(), theta.sin().abs());
    let mut col = vec![0.0; f.n_max + 1];
    let mut acc = Complex64::new(0.0, 0.0);
    for &m in orders {
        legendre_column(m, f.n_max, x, s, &mut col);
        let mi = m as i64;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let (mut gp, mut gm) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for n in m..=f.n_max {
            gp += f.get(n, mi) * col[n - m];
            if m > 0 {
                gm += f.get(n, -mi) * col[n - m] * sign;
            }
        }
        acc += gp * Complex64::from_polar(1.0, mi as f64 * phi);
        if m > 0 {
            acc += gm * Complex64::from_polar(1.0, -(mi as f64) * phi);
        }
    }
    acc
}

/// Cached Legendre columns for a fixed grid, truncation and set of orders.
pub struct Synthesizer {
    pub grid: SphereGrid,
    pub n_max: usize,
    orders: Vec<usize>,
    /// `table[j][k]` holds the column of `orders[k]` at latitude `j`.
    table: Vec<Vec<Vec<f64>>>,
}

impl Synthesizer {
    /// All orders `0..=n_max`.
    pub fn new(grid: SphereGrid, n_max: usize) -> Result<Self> {
        Self::with_orders(grid, n_max, (0..=n_max).collect())
    }

    /// Only the orders carrying coefficients in `f`.
    pub fn for_field(grid: SphereGrid, f: &SphericalField) -> Result<Self> {
        Self::with_orders(grid, f.n_max, f.active_orders())
    }

    pub fn with_orders(grid: SphereGrid, n_max: usize, orders: Vec<usize>) -> Result<Self> {
        if grid.n_lon < 2 * n_max + 1 || grid.n_lat() < n_max + 1 {
            return Err(Error::Resolution(format!(
                "grid {}x{} cannot represent degree {n_max} (need ≥ {} latitudes, ≥ {} longitudes)",
                grid.n_lat(),
                grid.n_lon,
                n_max + 1,
                2 * n_max + 1
            )));
        }
        let table = grid
            .cos_theta
            .par_iter()
            .map(|&x| {
                let s = (1.0 - x * x).max(0.0).sqrt();
                orders
                    .iter()
                    .map(|&m| {
                        let mut col = vec![0.0; n_max + 1 - m];
                        legendre_column(m, n_max, x, s, &mut col);
                        col
                    })
                    .collect()
            })
            .collect();
        Ok(Self { grid, n_max, orders, table })
    }

    fn check_field(&self, f: &SphericalField) -> Result<()> {
        if f.n_max != self.n_max {
            return Err(Error::Domain(format!("field truncation {} ≠ synthesizer {}", f.n_max, self.n_max)));
        }
        for m in f.active_orders() {
            if self.orders.binary_search(&m).is_err() {
                return Err(Error::Domain(format!("order {m} not cached by this synthesizer")));
            }
        }
        Ok(())
    }

    /// Grid values, row-major by latitude.
    pub fn synthesize(&self, f: &SphericalField) -> Result<Vec<Complex64>> {
        self.check_field(f)?;
        Ok(self.synthesize_with_phases(f, |_| Complex64::new(1.0, 0.0)))
    }

    /// Synthesis of `Σ c_{n,m}·phase(n)·Y_{n,m}` without materializing the
    /// rotated coefficients.
    pub fn synthesize_with_phases(&self, f: &SphericalField, phase: impl Fn(usize) -> Complex64 + Sync) -> Vec<Complex64> {
        let n_lon = self.grid.n_lon;
        let phases: Vec<Complex64> = (0..=self.n_max).map(&phase).collect();
        // rotated coefficients per order, contiguous in n; the (−1)^m of
        // negative orders is folded in
        let rotated: Vec<(Vec<Complex64>, Vec<Complex64>)> = self
            .orders
            .iter()
            .map(|&m| {
                let mi = m as i64;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let pos = (m..=self.n_max).map(|n| f.get(n, mi) * phases[n]).collect();
                let neg = if m == 0 { Vec::new() } else { (m..=self.n_max).map(|n| f.get(n, -mi) * phases[n] * sign).collect() };
                (pos, neg)
            })
            .collect();
        let fft = (self.orders.len() > 8).then(|| FftPlanner::new().plan_fft_inverse(n_lon));
        let rows: Vec<Vec<Complex64>> = self
            .table
            .par_iter()
            .map(|cols| {
                let mut spectrum = vec![Complex64::new(0.0, 0.0); n_lon];
                let mut terms: Vec<(i64, Complex64)> = Vec::with_capacity(2 * self.orders.len());
                for (k, &m) in self.orders.iter().enumerate() {
                    let col = &cols[k];
                    let (pos, neg) = &rotated[k];
                    let mi = m as i64;
                    let gp: Complex64 = pos.iter().zip(col).map(|(c, p)| c * p).sum();
                    terms.push((mi, gp));
                    if m > 0 {
                        let gm: Complex64 = neg.iter().zip(col).map(|(c, p)| c * p).sum();
                        terms.push((-mi, gm));
                    }
                }
                match &fft {
                    Some(plan) => {
                        for (m, g) in terms {
                            spectrum[m.rem_euclid(n_lon as i64) as usize] += g;
                        }
                        plan.process(&mut spectrum);
                        spectrum
                    }
                    None => (0..n_lon)
                        .map(|k| {
                            let phi = 2.0 * PI * k as f64 / n_lon as f64;
                            terms.iter().map(|&(m, g)| g * Complex64::from_polar(1.0, m as f64 * phi)).sum()
                        })
                        .collect(),
                }
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    /// Inverse of [`Synthesizer::synthesize`] for band-limited values.
    pub fn analyze(&self, values: &[Complex64], real: bool) -> Result<SphericalField> {
        let n_lon = self.grid.n_lon;
        if values.len() != n_lon * self.grid.n_lat() {
            return Err(Error::Domain("value array does not match grid".into()));
        }
        if self.orders.len() != self.n_max + 1 {
            return Err(Error::Domain("analysis needs a synthesizer with every order cached".into()));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n_lon);
        let dphi = 2.0 * PI / n_lon as f64;
        let partial: Vec<Vec<Complex64>> = values
            .par_chunks_exact(n_lon)
            .zip(self.table.par_iter())
            .zip(self.grid.weights.par_iter())
            .map(|((row, cols), &w)| {
                let mut spec = row.to_vec();
                fft.process(&mut spec);
                let mut c = vec![Complex64::new(0.0, 0.0); (self.n_max + 1) * (self.n_max + 1)];
                for m in 0..=self.n_max {
                    let mi = m as i64;
                    let gp = spec[m] * (w * dphi);
                    let gm = spec[(n_lon - m) % n_lon] * (w * dphi);
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    for n in m..=self.n_max {
                        let p = cols[m][n - m];
                        c[index(n, mi)] += gp * p;
                        if m > 0 {
                            c[index(n, -mi)] += gm * p * sign;
                        }
                    }
                }
                c
            })
            .collect();
        let mut f = SphericalField::zeros(self.n_max);
        f.real = real;
        for c in partial {
            f.coeffs.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        }
        Ok(f)
    }
}

/// `(∫|f|^q dμ)^{1/q}` for even `q`, by quadrature exact for polynomial
/// integrands of degree `q·n_max`.
pub fn norm_lq(f: &SphericalField, q: u32, grid: &SphereGrid) -> Result<f64> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::Domain(format!("only even exponents are supported, got {q}")));
    }
    if !grid.integrates_degree(q as usize * f.n_max) {
        return Err(Error::Resolution(format!(
            "grid {}x{} does not integrate degree {} exactly",
            grid.n_lat(),
            grid.n_lon,
            q as usize * f.n_max
        )));
    }
    let syn = Synthesizer::for_field(grid.clone(), f)?;
    let vals = syn.synthesize(f)?;
    Ok(lq_of_values(&vals, grid, q))
}

/// `(∫|g|^q)^{1/q}` for grid values.
pub fn lq_of_values(values: &[Complex64], grid: &SphereGrid, q: u32) -> f64 {
    let powered: Vec<f64> = values.iter().map(|v| v.norm_sqr().powi(q as i32 / 2)).collect();
    grid.integrate(&powered).powf(1.0 / q as f64)
}

/// Estimated `sup |f|` with the location and sampling used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    /// Coarse-grid spacing before local refinement.
    pub spacing: f64,
}

/// `sup |f|`: equiangular sampling (poles included) at four points per
/// wavelength, then a shrinking pattern search around the best samples.
/// Exact only up to the refinement tolerance.
pub fn norm_linf(f: &SphericalField) -> SupEstimate {
    let n_theta = 4 * (f.n_max + 1) + 1;
    let active = f.active_orders();
    let axisymmetric = active == [0];
    let n_phi = if axisymmetric { 1 } else { 4 * (2 * f.n_max + 1) };
    let dtheta = PI / (n_theta - 1) as f64;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut samples: Vec<(f64, f64, f64)> = (0..n_theta)
        .into_par_iter()
        .flat_map_iter(|i| {
            let theta = i as f64 * dtheta;
            (0..n_phi).map(move |k| (theta, k as f64 * dphi))
        })
        .map(|(t, p)| (evaluate_orders(f, &active, t, p).norm(), t, p))
        .collect();
    samples.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    let mut best = samples[0];
    for &(v0, t0, p0) in samples.iter().take(4) {
        let (mut v, mut t, mut p) = (v0, t0, p0);
        let mut h = dtheta.max(if axisymmetric { 0.0 } else { dphi });
        while h > 1e-10 {
            let mut improved = false;
            for (dt, dp) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
                if axisymmetric && dp != 0.0 {
                    continue;
                }
                let (tt, pp) = ((t + dt * h).clamp(0.0, PI), p + dp * h);
                let vv = evaluate_orders(f, &active, tt, pp).norm();
                if vv > v {
                    (v, t, p) = (vv, tt, pp);
                    improved = true;
                }
            }
            if !improved {
                h /= 2.0;
            }
        }
        if v > best.0 {
            best = (v, t, p);
        }
    }
    SupEstimate { value: best.0, theta: best.1, phi: best.2.rem_euclid(2.0 * PI), spacing: dtheta }
}

/// `L^q` exponent selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lq {
    Even(u32),
    Infinity,
}

/// `‖f‖_{L^q}` on an automatically sized grid.
pub fn norm(f: &SphericalField, q: Lq) -> Result<f64> {
    match q {
        Lq::Even(q) => norm_lq(f, q, &SphereGrid::for_power(f.n_max, q)),
        Lq::Infinity => Ok(norm_linf(f).value),
    }
}
