//! Construction and verification of Euclidean minimal tori with planar
//! ends built from elliptic-soliton data.
//!
//! The crate provides, bottom up:
//!
//! - [`elliptic`]: Weierstrass ℘, ℘′, ζ, σ on an arbitrary lattice with
//!   derived constants (nome series plus a slow lattice-sum oracle),
//! - [`baker`]: the Baker eigenfunction of Hill's equation with the
//!   1-gap Lamé potential −2℘, its monodromy, and factories for
//!   meromorphic functions with prescribed multiplier and poles,
//! - [`spectral`]: multiplier curves of the four-end and two-end
//!   families computed two independent ways (analytic maps vs. the
//!   order-zero boundary-condition matrix) plus the closing-condition
//!   period checks,
//! - [`surfaces`]: spinor families, period solving, closed-form
//!   integration of the Weierstrass representation, and mesh sampling,
//! - [`verify`]: independent differential-geometry and residue checks.
//!
//! All numerics are generic over the scalar type via [`scalar::Real`];
//! the `*64` aliases at the crate root fix `f64`, which all stated
//! tolerances assume.

pub mod baker;
pub mod elliptic;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod spectral;
pub mod surfaces;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision lattice.
pub type Lattice64 = elliptic::Lattice<f64>;
/// Double-precision multiplier.
pub type Multiplier64 = baker::Multiplier<f64>;
