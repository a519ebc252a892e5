//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Lattice generators are zero, non-finite, or wrongly oriented.
    #[error("invalid lattice: {0}")]
    InvalidLattice(&'static str),

    /// Argument coincides with a lattice point where the function has a pole.
    #[error("argument within pole radius of a lattice point")]
    PoleAtLatticePoint,

    /// Argument coincides with an end of the surface.
    #[error("argument within clip radius of a surface end")]
    PoleAtEnd,

    /// A non-finite number was passed where a finite one is required.
    #[error("non-finite input")]
    NonFinite,

    /// Operation requires a non-trivial multiplier.
    #[error("multiplier is (numerically) trivial")]
    TrivialMultiplier,

    /// The spectral point solved from the multiplier landed on the lattice.
    #[error("solved spectral point degenerates onto the lattice")]
    DegenerateAlpha,

    /// Additive periods are incompatible with the multiplier.
    #[error("additive periods inconsistent with multiplier (residual {residual:e})")]
    InconsistentPeriods { residual: f64 },

    /// Branch-point collision e2 = e3 makes the special solution singular.
    #[error("degenerate lattice: |e3 - e2| below threshold")]
    DegenerateLattice,

    /// Iterative solver failed to reach the target residual.
    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    /// First fundamental form degenerated (not an immersion at this point).
    #[error("degenerate metric: EG - F^2 below threshold")]
    DegenerateMetric,

    /// A multiplier was expressed with respect to unexpected generators.
    #[error("multiplier generators do not match the lattice periods")]
    MismatchedGenerators,
}

pub type Result<T> = std::result::Result<T, Error>;
