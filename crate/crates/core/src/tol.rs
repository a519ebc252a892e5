//! Single source of truth for the tolerances used by verification
//! reports and by the test suites. All values assume `f64` arithmetic.

/// Constant identities of the lattice (Legendre relation, e-sum, η-sum).
pub const CONST_IDENTITY: f64 = 1e-12;
/// Quasi-periodicity laws of ζ and σ, relative.
pub const QUASI_PERIOD: f64 = 1e-12;
/// Agreement between nome series and the lattice-sum oracle.
pub const ORACLE_AGREEMENT: f64 = 1e-8;
/// Finite-difference differential identities (ζ′ = −℘, σ′/σ = ζ).
pub const FINITE_DIFFERENCE: f64 = 1e-7;

/// Baker monodromy formula vs direct translation ratios.
pub const BAKER_MONODROMY: f64 = 1e-11;
/// Hill-equation residual of the Baker function.
pub const HILL_RESIDUAL: f64 = 1e-6;
/// Multiplier of factory basis functions vs request.
pub const BASIS_MULTIPLIER: f64 = 1e-10;
/// Laurent coefficients extracted by contour quadrature.
pub const LAURENT_EXTRACTION: f64 = 1e-8;
/// Compatibility of additive periods across generators.
pub const ADDITIVE_PERIODS: f64 = 1e-10;

/// Product identities for Baker-function products.
pub const PRODUCT_IDENTITY: f64 = 1e-10;
/// Closed-form period integrals vs quadrature.
pub const PERIOD_QUADRATURE: f64 = 1e-9;
/// Closedness residuals of a solved period problem.
pub const CLOSEDNESS: f64 = 1e-10;
/// Translation defects of a closed immersion.
pub const TRANSLATION_DEFECT: f64 = 1e-8;
/// Conformality residual |E−G|, |F| relative to E+G.
pub const CONFORMALITY: f64 = 1e-10;
/// Scaled mean-curvature residual.
pub const MEAN_CURVATURE: f64 = 1e-9;
/// Order-zero Laurent terms of the spinors at the ends.
pub const END_PLANARITY: f64 = 1e-9;
/// Spin monodromy of the spinors vs the configured signs.
pub const SPIN_MONODROMY: f64 = 1e-10;
/// Common-zero floor, relative to the sampled median.
pub const COMMON_ZERO_REL_FLOOR: f64 = 1e-10;

/// On-curve ceiling for the order-zero determinant ratio.
pub const SPECTRAL_ON_CURVE: f64 = 1e-7;
/// Off-curve floor for perturbed multipliers at log-distance 1e-2.
pub const SPECTRAL_OFF_CURVE: f64 = 1e-4;
/// Fraction of grid points that must satisfy the on-curve ceiling.
pub const SPECTRAL_ON_FRACTION: f64 = 0.99;
/// Log-distance of the off-curve control multipliers.
pub const SPECTRAL_CONTROL_DISTANCE: f64 = 1e-2;
/// Integrality of closing-condition periods, |period/2πi − nearest ℤ|.
pub const KP_INTEGRALITY: f64 = 1e-8;
/// Residue of the multiplier log-derivative forms at the puncture.
pub const KP_RESIDUE: f64 = 1e-8;

/// Newton solver acceptance residual for the period problem.
pub const NEWTON_RESIDUAL: f64 = 1e-10;
/// Rectangular two-end closedness residual.
pub const TWO_END_RECT: f64 = 1e-12;
/// Branch-point collision threshold |e3 − e2| for the special solve.
pub const DEGENERATE_LATTICE: f64 = 1e-10;

/// Singular values below `ratio * sigma_max` count towards the kernel.
pub const KERNEL_RATIO: f64 = 1e-7;
