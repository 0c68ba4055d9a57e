//! Dispersion relation and spectral multipliers of the flow linearized
//! around the unit sphere.
//!
//! The degree-`n` mode oscillates at `Λ(n) = √F(n)` with
//! `F(n) = n(n−1)(n+2)`. Decisions are made on the integer `F(n)`; the
//! float frequency is for simulation and display only.

use serde::{Deserialize, Serialize};

/// Spherical-harmonic degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex(pub u64);

impl ModeIndex {
    pub fn cubic(self) -> u128 {
        cubic(self.0)
    }

    pub fn frequency(self) -> f64 {
        frequency(self.0)
    }

    /// Degrees 0 and 1 carry zero frequency.
    pub fn is_oscillatory(self) -> bool {
        self.0 >= 2
    }
}

impl From<u64> for ModeIndex {
    fn from(n: u64) -> Self {
        ModeIndex(n)
    }
}

/// `F(n) = n(n−1)(n+2)`, exact.
#[inline]
pub fn cubic(n: u64) -> u128 {
    if n < 2 {
        return 0;
    }
    let n = n as u128;
    n * (n - 1) * (n + 2)
}

/// `Λ(n) = √F(n)`.
#[inline]
pub fn frequency(n: u64) -> f64 {
    (cubic(n) as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultiplierKind {
    /// Dirichlet–Neumann operator of the unit ball: `n`.
    DirichletNeumann,
    /// Linearized mean curvature `Δ + 2`: `−(n−1)(n+2)`.
    CurvatureLinearization,
    /// `Λ(n)`.
    Lambda,
    /// Laplace–Beltrami operator: `−n(n+1)`.
    Laplacian,
}

/// Eigenvalue of the given operator on degree-`n` harmonics.
pub fn multiplier(kind: MultiplierKind, n: u64) -> f64 {
    let x = n as f64;
    match kind {
        MultiplierKind::DirichletNeumann => x,
        MultiplierKind::CurvatureLinearization => -((x - 1.0) * (x + 2.0)),
        MultiplierKind::Lambda => frequency(n),
        MultiplierKind::Laplacian => -(x * (x + 1.0)),
    }
}
