//! Polar duality and phase-space concentration toolkit.
//!
//! The crate is organized around five concerns:
//!
//! - [`geometry`]: symmetric convex bodies (balls, ellipsoids, polytopes,
//!   boxes), their polar duals `X^ℏ = {p : p·x ≤ ℏ for all x ∈ X}`, supports,
//!   memberships, linear images, and Santaló points.
//! - [`volumes`]: exact and Monte Carlo volumes, Mahler volumes
//!   `v(X) = Vol(X)·Vol(X^ℏ)`, and the closed-form bound suite
//!   (Blaschke–Santaló upper bound, Kuperberg lower bound, the conjectured
//!   parallelepiped minimum, and the dimension factor `δ(n)`).
//! - [`symplectic`]: the standard symplectic form, quantum-blob factorization
//!   of `X × X^ℏ`, polar duality between transverse Lagrangian planes, and the
//!   n = 1 width identity.
//! - [`harmonic`]: sampled states on centered grids, the unitary ℏ-Fourier
//!   transform, Wigner/ambiguity tables, concentration functionals, and the
//!   inequality checks (Donoho–Stark, Hardy, Wigner-ball concentration, and
//!   the concentration trade-off between a body and its polar dual).
//! - [`report`]: uniform pass/fail reports with provenance for every check.
//!
//! All operations are pure functions of their inputs plus an explicit seed;
//! Monte Carlo estimates are bit-reproducible, including when the sample
//! budget is split across threads.

pub mod error;
pub mod geometry;
pub mod harmonic;
mod linalg;
pub mod lp;
pub mod report;
pub mod rng;
pub mod symplectic;
pub mod volumes;

pub use error::Error;
pub use geometry::{BodySpec, ConvexBody, SantaloSearch};
pub use harmonic::{GridSpec, PhaseSpaceFunction, SampledFunction, Space};
pub use report::CheckReport;
pub use rng::McRng;
pub use symplectic::{LagrangianFrame, PhaseSpaceEllipsoid, QuantumBlob, SymplecticMap};
pub use volumes::{BoundReport, Bounds, McParams, VolumeEstimate, VolumeRoute};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
