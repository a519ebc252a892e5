//! Baker eigenfunction of Hill's equation with the 1-gap Lamé potential
//! −2℘, and factories for meromorphic functions with prescribed
//! multiplier and first-order poles.
//!
//! The Baker function for spectral point α (spectral parameter
//! E = ℘(α)) is
//!
//! ```text
//! Φ_α(x) = σ(α − x) / (σ(α) σ(x)) · exp(ζ(α) x)
//! ```
//!
//! with first-order poles exactly on the lattice, residue 1 at 0, no
//! constant term, and translation behaviour
//! Φ_α(x + 2ω_j) = Φ_α(x) · exp(2(ζ(α)ω_j − αη_j)).

use num_complex::Complex;

use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::{Real, C};
use crate::tol;

/// Spectral point α together with its lattice.
#[derive(Debug, Clone)]
pub struct BakerSpec<R: Real> {
    pub alpha: C<R>,
    pub lat: Lattice<R>,
}

impl<R: Real> BakerSpec<R> {
    /// Fails when α sits on the lattice (the Baker function degenerates).
    pub fn new(alpha: C<R>, lat: Lattice<R>) -> Result<Self> {
        if lat.distance_to_lattice(alpha)? < lat.pole_radius() {
            return Err(Error::DegenerateAlpha);
        }
        Ok(BakerSpec { alpha, lat })
    }
}

/// Multiplier: values of a homomorphism Γ → ℂ* on the two generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplier<R: Real> {
    /// Value on the first generator.
    pub h1: C<R>,
    /// Value on the second generator.
    pub h3: C<R>,
    /// The first generator itself.
    pub gamma1: C<R>,
    /// The second generator itself.
    pub gamma3: C<R>,
}

impl<R: Real> Multiplier<R> {
    pub fn new(h1: C<R>, h3: C<R>, gamma1: C<R>, gamma3: C<R>) -> Self {
        Multiplier { h1, h3, gamma1, gamma3 }
    }

    /// Componentwise conjugate (same generators).
    pub fn conj(&self) -> Self {
        Multiplier {
            h1: self.h1.conj(),
            h3: self.h3.conj(),
            gamma1: self.gamma1,
            gamma3: self.gamma3,
        }
    }

    /// Componentwise inverse (same generators).
    pub fn inv(&self) -> Self {
        Multiplier {
            h1: self.h1.inv(),
            h3: self.h3.inv(),
            gamma1: self.gamma1,
            gamma3: self.gamma3,
        }
    }

    /// Both values within `eps` of 1.
    pub fn is_trivial(&self, eps: R) -> bool {
        (self.h1 - Complex::new(R::one(), R::zero())).norm() < eps
            && (self.h3 - Complex::new(R::one(), R::zero())).norm() < eps
    }

    /// True when the generators match the periods of `lat`.
    pub fn matches_periods(&self, lat: &Lattice<R>) -> bool {
        let (p1, p3) = lat.periods();
        let scale = lat.scale();
        (self.gamma1 - p1).norm() < R::of(1e-9) * scale
            && (self.gamma3 - p3).norm() < R::of(1e-9) * scale
    }
}

/// Evaluate Φ_α at x. Errors on the lattice (poles of Φ).
pub fn baker_eval<R: Real>(spec: &BakerSpec<R>, x: C<R>) -> Result<C<R>> {
    let lat = &spec.lat;
    if lat.distance_to_lattice(x)? < lat.pole_radius() {
        return Err(Error::PoleAtLatticePoint);
    }
    let za = lat.zeta(spec.alpha)?;
    let num = lat.sigma(spec.alpha - x)?;
    let den = lat.sigma(spec.alpha)? * lat.sigma(x)?;
    Ok(num / den * (za * x).exp())
}

/// Multiplier of Φ_α on the two lattice generators:
/// h_j = exp(2(ζ(α)ω_j − αη_j)).
pub fn baker_monodromy<R: Real>(spec: &BakerSpec<R>) -> Result<Multiplier<R>> {
    let lat = &spec.lat;
    let za = lat.zeta(spec.alpha)?;
    let k = lat.constants();
    let two = R::of(2.0);
    let e1 = (za * lat.omega1() - spec.alpha * k.eta1) * two;
    let e3 = (za * lat.omega3() - spec.alpha * k.eta3) * two;
    let (p1, p3) = lat.periods();
    Ok(Multiplier::new(e1.exp(), e3.exp(), p1, p3))
}

/// First Laurent coefficients of Φ_α at 0:
/// Φ_α(x) = 1/x − ℘(α)/2 · x + ℘′(α)/6 · x² + …
pub fn baker_laurent<R: Real>(spec: &BakerSpec<R>) -> Result<(C<R>, C<R>, C<R>, C<R>)> {
    let wp = spec.lat.wp(spec.alpha)?;
    let wpp = spec.lat.wp_prime(spec.alpha)?;
    Ok((
        Complex::new(R::one(), R::zero()),
        Complex::new(R::zero(), R::zero()),
        -wp / R::of(2.0),
        wpp / R::of(6.0),
    ))
}

/// Relative residual of Hill's equation Φ″ − 2℘Φ = ℘(α)Φ at x, with Φ″
/// from 4th-order central differences at the given step.
pub fn hill_residual_with_step<R: Real>(spec: &BakerSpec<R>, x: C<R>, step: R) -> Result<R> {
    let lat = &spec.lat;
    let guard = R::of(1e-3);
    if lat.distance_to_lattice(x)? < guard {
        return Err(Error::PoleAtLatticePoint);
    }
    let h = Complex::new(step, R::zero());
    let f = |z: C<R>| baker_eval(spec, z);
    let fm2 = f(x - h * R::of(2.0))?;
    let fm1 = f(x - h)?;
    let f0 = f(x)?;
    let fp1 = f(x + h)?;
    let fp2 = f(x + h * R::of(2.0))?;
    let second = (-fm2 + fm1 * R::of(16.0) - f0 * R::of(30.0) + fp1 * R::of(16.0) - fp2)
        / (h * h * R::of(12.0));
    let e = lat.wp(spec.alpha)?;
    let lhs = second - lat.wp(x)? * f0 * R::of(2.0) - e * f0;
    Ok(lhs.norm() / f0.norm())
}

/// [`hill_residual_with_step`] at the default step 1e-4.
pub fn hill_residual<R: Real>(spec: &BakerSpec<R>, x: C<R>) -> Result<R> {
    hill_residual_with_step(spec, x, R::of(1e-4))
}

/// A meromorphic function with prescribed multiplier and one first-order
/// pole of residue 1 per fundamental domain, or an elliptic building
/// block for the trivial multiplier.
#[derive(Debug, Clone)]
pub enum BasisFunction<R: Real> {
    /// σ(x − p − α)/σ(x − p) · exp(c(x − p)) / σ(−α): residue 1 at p,
    /// multiplier exp(2cω_j − 2αη_j) determined by (c, α).
    Translate {
        lat: Lattice<R>,
        pole: C<R>,
        alpha: C<R>,
        exp_coeff: C<R>,
    },
    /// ζ(x − p) − ζ(x − q): elliptic, residues +1 at p and −1 at q.
    ZetaDifference { lat: Lattice<R>, pole: C<R>, other: C<R> },
    /// The constant function 1.
    One,
}

impl<R: Real> BasisFunction<R> {
    pub fn eval(&self, x: C<R>) -> Result<C<R>> {
        match self {
            BasisFunction::Translate {
                lat,
                pole,
                alpha,
                exp_coeff,
            } => {
                let y = x - *pole;
                if lat.distance_to_lattice(y)? < lat.pole_radius() {
                    return Err(Error::PoleAtLatticePoint);
                }
                let num = lat.sigma(*alpha - y)?;
                let den = lat.sigma(*alpha)? * lat.sigma(y)?;
                Ok(num / den * (*exp_coeff * y).exp())
            }
            BasisFunction::ZetaDifference { lat, pole, other } => {
                Ok(lat.zeta(x - *pole)? - lat.zeta(x - *other)?)
            }
            BasisFunction::One => Ok(Complex::new(R::one(), R::zero())),
        }
    }

    /// Pole this basis element is responsible for, if any.
    pub fn pole(&self) -> Option<C<R>> {
        match self {
            BasisFunction::Translate { pole, .. } => Some(*pole),
            BasisFunction::ZetaDifference { pole, .. } => Some(*pole),
            BasisFunction::One => None,
        }
    }

    /// Whether the function has a pole at `x` (modulo the lattice).
    pub fn has_pole_at(&self, x: C<R>) -> Result<bool> {
        let near = |lat: &Lattice<R>, y: C<R>| -> Result<bool> {
            Ok(lat.distance_to_lattice(y)? < R::of(1e-6) * lat.scale())
        };
        match self {
            BasisFunction::Translate { lat, pole, .. } => near(lat, x - *pole),
            BasisFunction::ZetaDifference { lat, pole, other } => {
                Ok(near(lat, x - *pole)? || near(lat, x - *other)?)
            }
            BasisFunction::One => Ok(false),
        }
    }

    /// Analytic order-zero Laurent coefficient at the pole in `pole()`.
    pub fn order_zero_at_own_pole(&self) -> Result<C<R>> {
        match self {
            BasisFunction::Translate {
                lat,
                alpha,
                exp_coeff,
                ..
            } => Ok(*exp_coeff - lat.zeta(*alpha)?),
            BasisFunction::ZetaDifference { lat, pole, other } => {
                Ok(-(lat.zeta(*pole - *other)?))
            }
            BasisFunction::One => Ok(Complex::new(R::one(), R::zero())),
        }
    }
}

/// Basis of the space of meromorphic functions with multiplier `h` and
/// at most first-order poles at the given ends: one translate per end,
/// each with residue 1 at its own pole.
///
/// The exponential data (c, α) solves 2cω_j − 2αη_j = Log h_j with the
/// principal branch; the 2×2 determinant of that system is 2πi by the
/// Legendre relation, so it never degenerates.
pub fn multiplier_basis<R: Real>(
    h: &Multiplier<R>,
    ends: &[C<R>],
    lat: &Lattice<R>,
) -> Result<Vec<BasisFunction<R>>> {
    if !h.matches_periods(lat) {
        return Err(Error::MismatchedGenerators);
    }
    if h.is_trivial(R::of(1e-6)) {
        return Err(Error::TrivialMultiplier);
    }
    let b1 = h.h1.ln();
    let b3 = h.h3.ln();
    let k = lat.constants();
    let two = R::of(2.0);
    // 2πi from the Legendre relation.
    let det = (k.eta1 * lat.omega3() - k.eta3 * lat.omega1()) * R::of(4.0);
    let c = (k.eta1 * b3 - k.eta3 * b1) * two / det;
    let alpha = (lat.omega1() * b3 - lat.omega3() * b1) * two / det;
    if lat.distance_to_lattice(alpha)? < R::of(1e-6) * lat.scale() {
        return Err(Error::DegenerateAlpha);
    }
    Ok(ends
        .iter()
        .map(|p| BasisFunction::Translate {
            lat: lat.clone(),
            pole: *p,
            alpha,
            exp_coeff: c,
        })
        .collect())
}

/// Basis of trivial-multiplier meromorphic functions with first-order
/// poles only at the ends: ζ-differences against the last end, plus 1.
pub fn zeta_difference_basis<R: Real>(ends: &[C<R>], lat: &Lattice<R>) -> Vec<BasisFunction<R>> {
    let last = *ends.last().expect("at least two ends");
    let mut out: Vec<BasisFunction<R>> = ends[..ends.len() - 1]
        .iter()
        .map(|p| BasisFunction::ZetaDifference {
            lat: lat.clone(),
            pole: *p,
            other: last,
        })
        .collect();
    out.push(BasisFunction::One);
    out
}

/// The unique constant b with a_γ + b(1 − h_γ) = 0 for all generators,
/// given the additive periods a_γ of a primitive of a 1-form with
/// multiplier h. Checks the compatibility relation
/// a_{γ1}(h_{γ2} − 1) = a_{γ2}(h_{γ1} − 1) before answering.
pub fn fix_additive_monodromy<R: Real>(
    a1: C<R>,
    a3: C<R>,
    h: &Multiplier<R>,
) -> Result<C<R>> {
    let one = Complex::new(R::one(), R::zero());
    let d1 = h.h1 - one;
    let d3 = h.h3 - one;
    if h.is_trivial(R::of(1e-6)) {
        return Err(Error::TrivialMultiplier);
    }
    let compat = a1 * d3 - a3 * d1;
    let scale = (a1.norm() + a3.norm()).max(R::one()) * (d1.norm() + d3.norm());
    if compat.norm() > R::of(tol::ADDITIVE_PERIODS) * scale {
        return Err(Error::InconsistentPeriods {
            residual: (compat.norm() / scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    if d1.norm() >= d3.norm() {
        Ok(a1 / d1)
    } else {
        Ok(a3 / d3)
    }
}

/// Order-zero Laurent coefficient of `f` at `center` by contour
/// extraction with the crate-wide default radius 1e-2·scale.
pub fn order_zero_by_contour<R: Real>(
    f: &BasisFunction<R>,
    center: C<R>,
    scale: R,
) -> Result<C<R>> {
    let radius = R::of(1e-2) * scale;
    quadrature::laurent_coefficient(&|z| f.eval(z), center, 0, radius)
}

/// Spanning check: smallest/largest singular value of the matrix of
/// basis values at generic probe points (plus residue normalization).
pub fn spanning_ratio<R: Real>(basis: &[BasisFunction<R>], lat: &Lattice<R>) -> Result<R> {
    let n = basis.len();
    let mut m = crate::linalg::CMat::zeros(n, n);
    let (p1, p3) = lat.periods();
    for (r, t) in [(0.231, 0.137), (0.383, 0.411), (0.157, 0.329), (0.433, 0.253)]
        .iter()
        .take(n)
        .enumerate()
    {
        let x = p1 * R::of(t.0) + p3 * R::of(t.1);
        for (c, f) in basis.iter().enumerate() {
            m.set(r, c, f.eval(x)?);
        }
    }
    let svd = m.svd();
    Ok(svd.values[n - 1] / svd.values[0])
}

/// Z₂ sign of exp(2(η_k ω_j − ω_k η_j)): the multiplier of the Baker
/// function at half period ω_k over the generator 2ω_j. By the Legendre
/// relation this is lattice independent: Φ₁ ↦ (+1, −1), Φ₂ ↦ (−1, −1),
/// Φ₃ ↦ (−1, +1) on (2ω₁, 2ω₃).
pub fn half_period_sign(k: usize, j: usize) -> f64 {
    debug_assert!((1..=3).contains(&k) && (j == 1 || j == 3));
    match (k, j) {
        (1, 1) | (3, 3) => 1.0,
        (2, _) | (1, 3) | (3, 1) => -1.0,
        _ => unreachable!(),
    }
}

/// Residue signs of the Baker function Φ_{ω_k} at the four points
/// 0, 2ω₁, 2ω₂, 2ω₃ of the index-four sublattice.
pub fn residue_signs(k: usize) -> [f64; 4] {
    let s1 = half_period_sign(k, 1);
    let s3 = half_period_sign(k, 3);
    [1.0, s1, s1 * s3, s3]
}

/// Convenience: Φ at half period ω_k (k = 1, 2, 3) of `lat`.
pub fn half_period_spec<R: Real>(lat: &Lattice<R>, k: usize) -> Result<BakerSpec<R>> {
    let alpha = match k {
        1 => lat.omega1(),
        2 => lat.omega2(),
        3 => lat.omega3(),
        _ => return Err(Error::InvalidLattice("half period index must be 1, 2 or 3")),
    };
    BakerSpec::new(alpha, lat.clone())
}

#[cfg(test)]
mod tests;
