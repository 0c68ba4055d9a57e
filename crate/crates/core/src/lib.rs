//! Number theory and spectral simulation for capillary oscillations of a
//! spherical droplet.
//!
//! * [`arith`]: exact integers, factorization, square-root comparators.
//! * [`dispersion`]: `F(n) = n(n−1)(n+2)` and `Λ(n) = √F(n)`.
//! * [`resonance`]: three-wave resonances, small divisors, normal-form
//!   coefficients, kernel solutions, pair counting.
//! * [`elliptic`]: integral points on `y² = x(x−c)(x+2c)`.
//! * [`sphere`]: spherical-harmonic fields, quadrature grids, norms.
//! * [`evolution`]: the linearized flow and its invariants.

pub mod arith;
pub mod dispersion;
pub mod elliptic;
pub mod error;
pub mod evolution;
pub mod resonance;
pub mod sphere;

pub use dispersion::{cubic, frequency, ModeIndex, MultiplierKind};
pub use elliptic::{AdmissiblePoint, CurveId, EllipticPoint};
pub use error::{Error, Result};
pub use evolution::{ComplexState, InitialCondition, SurfaceState};
pub use sphere::{SphereGrid, SphericalField};

pub use resonance::{KernelSolution, NormalFormCoefficient, ResonanceTriple, SquarefreeForm};

