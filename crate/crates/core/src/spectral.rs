//! Spectral curves of minimal tori with planar ends, computed two
//! independent ways.
//!
//! Analytic route: on the predicted component the multiplier is an
//! explicit exponential of ζ-data. Oracle route: a multiplier h lies on
//! the spectrum iff the matrix of order-zero Laurent coefficients over
//! the h-multiplier basis with first-order poles at the ends has a
//! kernel. The scan drives both routes over a grid and reports the
//! separation between on-curve and off-curve determinant ratios.
//!
//! Covering conventions, fixed once: the four-end torus is the
//! index-four cover with periods (4ω₁, 4ω₃) and ends at 0, 2ω₁, 2ω₂,
//! 2ω₃; the α-component is the torus with periods (2ω₁, 2ω₃). The
//! two-end torus has periods (2ω₁, 2ω₃) and ends at 0, ω₂; the
//! α-component is the torus with periods (ω₂, 2ω₃).

use num_complex::Complex;
use rayon::prelude::*;

use crate::baker::{multiplier_basis, zeta_difference_basis, BasisFunction, Multiplier};
use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::quadrature;
use crate::scalar::{cx, Real, C};
use crate::tol;

/// The two end-count families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    FourEnd,
    TwoEnd,
}

/// Ends of the surface together with the torus they live on.
#[derive(Debug, Clone)]
pub struct EndSet<R: Real> {
    pub points: Vec<C<R>>,
    pub surface_lat: Lattice<R>,
}

impl<R: Real> EndSet<R> {
    /// Four ends at the half periods of the index-four cover.
    pub fn four_end(lat: &Lattice<R>) -> Result<Self> {
        let (p1, p3) = lat.periods();
        let surface_lat = Lattice::new(p1, p3)?;
        let points = vec![Complex::new(R::zero(), R::zero()), p1, p1 + p3, p3];
        Ok(EndSet { points, surface_lat })
    }

    /// Two ends at 0 and ω₂ of the given torus.
    pub fn two_end(lat: &Lattice<R>) -> Self {
        EndSet {
            points: vec![Complex::new(R::zero(), R::zero()), lat.omega2()],
            surface_lat: lat.clone(),
        }
    }

    pub fn for_family(family: Family, lat: &Lattice<R>) -> Result<Self> {
        match family {
            Family::FourEnd => Self::four_end(lat),
            Family::TwoEnd => Ok(Self::two_end(lat)),
        }
    }
}

/// The α-component torus the predicted spectral component lives on.
pub fn component_lattice<R: Real>(family: Family, lat: &Lattice<R>) -> Result<Lattice<R>> {
    match family {
        Family::FourEnd => Ok(lat.clone()),
        Family::TwoEnd => Lattice::new(lat.omega2() / R::of(2.0), lat.omega3()),
    }
}

/// Analytic multiplier of the four-end family at spectral point α:
/// h_j = exp(4(ζ(α)ω_j − αη_j)) on the generators (4ω₁, 4ω₃).
pub fn four_end_multiplier<R: Real>(alpha: C<R>, lat: &Lattice<R>) -> Result<Multiplier<R>> {
    let za = lat.zeta(alpha)?;
    let k = lat.constants();
    let four = R::of(4.0);
    let e1 = (za * lat.omega1() - alpha * k.eta1) * four;
    let e3 = (za * lat.omega3() - alpha * k.eta3) * four;
    let (p1, p3) = lat.periods();
    Ok(Multiplier::new(
        e1.exp(),
        e3.exp(),
        p1 * R::of(2.0),
        p3 * R::of(2.0),
    ))
}

/// Analytic multiplier of the two-end family at spectral point α on the
/// component torus (ω₂, 2ω₃), expressed on the surface generators
/// (2ω₁, 2ω₃): the exponent over γ is ζ′(α)γ − α η′(γ) with primes on
/// the component torus, where 2ω₁ = 2·ω₂ − 1·(2ω₃).
pub fn two_end_multiplier<R: Real>(alpha: C<R>, lat: &Lattice<R>) -> Result<Multiplier<R>> {
    let comp = component_lattice(Family::TwoEnd, lat)?;
    let za = comp.zeta(alpha)?;
    let (p1, p3) = lat.periods();
    let e1 = za * p1 - alpha * comp.quasi_period(2, -1);
    let e3 = za * p3 - alpha * comp.quasi_period(0, 1);
    Ok(Multiplier::new(e1.exp(), e3.exp(), p1, p3))
}

/// Matrix of order-zero Laurent coefficients: row m, column i holds the
/// order-zero coefficient at end m of basis function i (extracted by
/// contour quadrature at the function's poles, plain evaluation away
/// from them).
pub fn order_zero_matrix_for_basis<R: Real>(
    basis: &[BasisFunction<R>],
    ends: &EndSet<R>,
) -> Result<CMat<R>> {
    let n = ends.points.len();
    let mut a = CMat::zeros(n, basis.len());
    let radius = R::of(1e-2) * ends.surface_lat.scale();
    for (m, p) in ends.points.iter().enumerate() {
        for (i, f) in basis.iter().enumerate() {
            let entry = if f.has_pole_at(*p)? {
                quadrature::laurent_coefficient(&|z| f.eval(z), *p, 0, radius)?
            } else {
                f.eval(*p)?
            };
            a.set(m, i, entry);
        }
    }
    Ok(a)
}

/// Order-zero matrix over the multiplier basis for `h`.
pub fn order_zero_matrix<R: Real>(h: &Multiplier<R>, ends: &EndSet<R>) -> Result<CMat<R>> {
    let basis = multiplier_basis(h, &ends.points, &ends.surface_lat)?;
    order_zero_matrix_for_basis(&basis, ends)
}

/// Natural magnitude floor for order-zero matrices: entries are values
/// of residue-one functions, i.e. inverse lengths of the surface torus.
fn entry_floor<R: Real>(ends: &EndSet<R>) -> R {
    ends.surface_lat.scale().recip()
}

/// σ_min/σ_max of the order-zero matrix, floored so that a matrix that
/// degenerates entirely (every entry at noise level) still reads as
/// on-curve rather than 0/0.
pub fn det_ratio<R: Real>(h: &Multiplier<R>, ends: &EndSet<R>) -> Result<R> {
    Ok(order_zero_matrix(h, ends)?.singular_ratio(entry_floor(ends)))
}

/// Membership ratio of h in the full (two-component) spectrum: a
/// holomorphic section with monodromy h exists when a meromorphic
/// function exists with multiplier h or with multiplier conj(h), so the
/// membership certificate is the smaller of the two determinant ratios.
pub fn membership_ratio<R: Real>(h: &Multiplier<R>, ends: &EndSet<R>) -> Result<R> {
    let direct = det_ratio(h, ends)?;
    let conjugate = det_ratio(&h.conj(), ends)?;
    Ok(direct.min(conjugate))
}

/// One grid point of a spectral scan.
#[derive(Debug, Clone)]
pub struct SpectralSample<R: Real> {
    /// Spectral point on the predicted component.
    pub alpha: C<R>,
    /// Analytically predicted multiplier at α.
    pub h: Multiplier<R>,
    /// σ_min/σ_max of the order-zero matrix at h.
    pub det_ratio: R,
    /// Same at the conjugated multiplier (the other monodromy route).
    pub conj_det_ratio: R,
    /// Membership ratio at the off-curve control multiplier.
    pub off_curve_ratio: R,
    /// Set when the basis construction degenerated at this point.
    pub skipped: bool,
}

/// Grid resolution along the two component-lattice directions.
#[derive(Debug, Clone, Copy)]
pub struct ScanGrid {
    pub n1: usize,
    pub n2: usize,
}

/// Scan the predicted spectral component: at each grid α compute the
/// analytic multiplier, its determinant ratio, the conjugate-route
/// ratio and an off-curve control at log-distance 1e-2 transverse to
/// the curve. Grid points inside the puncture disk are excluded;
/// points where the basis degenerates are flagged as skipped.
pub fn spectral_scan<R: Real>(
    family: Family,
    lat: &Lattice<R>,
    grid: ScanGrid,
) -> Result<Vec<SpectralSample<R>>> {
    let comp = component_lattice(family, lat)?;
    let ends = EndSet::for_family(family, lat)?;
    let (c1, c3) = comp.periods();
    let puncture_radius = R::of(0.05) * lat.scale();

    let mut alphas: Vec<C<R>> = Vec::new();
    for i in 0..grid.n1 {
        for j in 0..grid.n2 {
            let a = R::of((i as f64 + 0.5) / grid.n1 as f64);
            let b = R::of((j as f64 + 0.5) / grid.n2 as f64);
            let alpha = c1 * a + c3 * b;
            if comp.distance_to_lattice(alpha)? < puncture_radius {
                continue;
            }
            alphas.push(alpha);
        }
    }

    alphas
        .par_iter()
        .map(|alpha| sample_point(family, lat, &comp, &ends, *alpha))
        .collect::<Result<Vec<_>>>()
}

fn sample_point<R: Real>(
    family: Family,
    lat: &Lattice<R>,
    comp: &Lattice<R>,
    ends: &EndSet<R>,
    alpha: C<R>,
) -> Result<SpectralSample<R>> {
    let h = match family {
        Family::FourEnd => four_end_multiplier(alpha, lat)?,
        Family::TwoEnd => two_end_multiplier(alpha, lat)?,
    };
    let nan = R::nan();
    let ratio = match det_ratio(&h, ends) {
        Ok(r) => r,
        Err(Error::TrivialMultiplier) | Err(Error::DegenerateAlpha) => {
            return Ok(SpectralSample {
                alpha,
                h,
                det_ratio: nan,
                conj_det_ratio: nan,
                off_curve_ratio: nan,
                skipped: true,
            });
        }
        Err(e) => return Err(e),
    };
    let conj_ratio = match det_ratio(&h.conj(), ends) {
        Ok(r) => r,
        Err(Error::TrivialMultiplier) | Err(Error::DegenerateAlpha) => nan,
        Err(e) => return Err(e),
    };

    // Off-curve control: perturb log h orthogonally to the curve tangent.
    let tangent = multiplier_log_tangent(family, lat, comp, alpha)?;
    let norm = (tangent.0.norm_sqr() + tangent.1.norm_sqr()).sqrt();
    let u1 = -tangent.1.conj() / norm;
    let u3 = tangent.0.conj() / norm;
    let eps = R::of(tol::SPECTRAL_CONTROL_DISTANCE);
    let h_off = Multiplier::new(
        h.h1 * (u1 * eps).exp(),
        h.h3 * (u3 * eps).exp(),
        h.gamma1,
        h.gamma3,
    );
    let off_ratio = match membership_ratio(&h_off, ends) {
        Ok(r) => r,
        Err(Error::TrivialMultiplier) | Err(Error::DegenerateAlpha) => nan,
        Err(e) => return Err(e),
    };
    Ok(SpectralSample {
        alpha,
        h,
        det_ratio: ratio,
        conj_det_ratio: conj_ratio,
        off_curve_ratio: off_ratio,
        skipped: false,
    })
}

/// d log h_γ / dα on the two surface generators.
fn multiplier_log_tangent<R: Real>(
    family: Family,
    lat: &Lattice<R>,
    comp: &Lattice<R>,
    alpha: C<R>,
) -> Result<(C<R>, C<R>)> {
    match family {
        Family::FourEnd => {
            let wp = lat.wp(alpha)?;
            let k = lat.constants();
            let four = R::of(4.0);
            Ok((
                -(wp * lat.omega1() + k.eta1) * four,
                -(wp * lat.omega3() + k.eta3) * four,
            ))
        }
        Family::TwoEnd => {
            let wp = comp.wp(alpha)?;
            let (p1, p3) = lat.periods();
            Ok((
                -(wp * p1 + comp.quasi_period(2, -1)),
                -(wp * p3 + comp.quasi_period(0, 1)),
            ))
        }
    }
}

/// One period line of the closing-condition check.
#[derive(Debug, Clone)]
pub struct PeriodCheck<R: Real> {
    /// Cycle m·C₁ + n·C₃ in the component torus.
    pub cycle: (i64, i64),
    /// Which surface generator's multiplier form was integrated (1 or 3).
    pub form: usize,
    /// Integral divided by 2πi.
    pub period_over_2pi_i: C<R>,
    /// Nearest integer to the real part.
    pub nearest_integer: i64,
    /// |period/2πi − nearest integer|.
    pub residual: R,
}

/// Residue of a multiplier form at the puncture α = 0.
#[derive(Debug, Clone)]
pub struct ResidueCheck<R: Real> {
    pub form: usize,
    pub residue: C<R>,
}

/// Result of [`kp_closing_check`].
#[derive(Debug, Clone)]
pub struct ClosingCheck<R: Real> {
    pub periods: Vec<PeriodCheck<R>>,
    pub residues: Vec<ResidueCheck<R>>,
}

/// Integrate d log h_j over cycles of the compactified component and
/// report the distance of period/2πi to the nearest integer, plus the
/// residues of the forms at the puncture (both must vanish for a
/// closing spectral curve: the forms have second-order poles only).
pub fn kp_closing_check<R: Real>(
    family: Family,
    lat: &Lattice<R>,
    cycles: &[(i64, i64)],
) -> Result<ClosingCheck<R>> {
    let comp = component_lattice(family, lat)?;
    let (c1, c3) = comp.periods();
    let two_pi_i = cx::<R>(0.0, 2.0 * std::f64::consts::PI);

    // d log h_j as a function of alpha.
    let (p1, p3) = lat.periods();
    let k = *lat.constants();
    let form = |j: usize, a: C<R>| -> Result<C<R>> {
        match family {
            Family::FourEnd => {
                let omega = if j == 1 { lat.omega1() } else { lat.omega3() };
                let eta = if j == 1 { k.eta1 } else { k.eta3 };
                Ok(-(lat.wp(a)? * omega + eta) * R::of(4.0))
            }
            Family::TwoEnd => {
                let gamma = if j == 1 { p1 } else { p3 };
                let quasi = if j == 1 {
                    comp.quasi_period(2, -1)
                } else {
                    comp.quasi_period(0, 1)
                };
                Ok(-(comp.wp(a)? * gamma + quasi))
            }
        }
    };

    let base = c1 * R::of(0.25) + c3 * R::of(0.25);
    let mut periods = Vec::new();
    for &(m, n) in cycles {
        let target = base + c1 * R::of(m as f64) + c3 * R::of(n as f64);
        let poles = lattice_points_near_segment(&comp, base, target);
        for j in [1usize, 3] {
            let value = quadrature::segment_with_detours(
                &|z| form(j, z),
                base,
                target,
                &poles,
                R::of(0.1) * comp.omega1().norm(),
                quadrature::DetourSide::Left,
                32 * (m.unsigned_abs() + n.unsigned_abs()).max(1) as usize,
            )?;
            let scaled = value / two_pi_i;
            let nearest = scaled.re.round().to_f64().unwrap_or(0.0) as i64;
            let residual = (scaled - cx::<R>(nearest as f64, 0.0)).norm();
            periods.push(PeriodCheck {
                cycle: (m, n),
                form: j,
                period_over_2pi_i: scaled,
                nearest_integer: nearest,
                residual,
            });
        }
    }

    let mut residues = Vec::new();
    for j in [1usize, 3] {
        let r = quadrature::contour_residue(
            &|z| form(j, z),
            cx(0.0, 0.0),
            R::of(1e-2) * lat.scale(),
        )?;
        residues.push(ResidueCheck { form: j, residue: r });
    }
    Ok(ClosingCheck { periods, residues })
}

/// Lattice points within one cell of the segment's coordinate bounding box.
pub fn lattice_points_near_segment<R: Real>(lat: &Lattice<R>, a: C<R>, b: C<R>) -> Vec<C<R>> {
    let (a1, a2) = lat.coordinates(a);
    let (b1, b2) = lat.coordinates(b);
    let lo1 = a1.min(b1).floor().to_f64().unwrap_or(0.0) as i64 - 1;
    let hi1 = a1.max(b1).ceil().to_f64().unwrap_or(0.0) as i64 + 1;
    let lo2 = a2.min(b2).floor().to_f64().unwrap_or(0.0) as i64 - 1;
    let hi2 = a2.max(b2).ceil().to_f64().unwrap_or(0.0) as i64 + 1;
    let mut out = Vec::new();
    for m in lo1..=hi1 {
        for n in lo2..=hi2 {
            out.push(lat.point(m, n));
        }
    }
    out
}

/// Monodromy class of the spinors.
#[derive(Debug, Clone)]
pub enum SpinClass<R: Real> {
    Trivial,
    Signs(Multiplier<R>),
}

/// Certificate for the dimension of the admissible space.
#[derive(Debug, Clone)]
pub struct Obstruction<R: Real> {
    /// Dimension of the space of admissible functions (kernel of the
    /// order-zero matrix).
    pub admissible_dim: usize,
    /// Singular values of the order-zero matrix, descending.
    pub singular_values: Vec<R>,
    /// Coefficients of one admissible function in the basis, when the
    /// kernel is non-trivial.
    pub kernel_vector: Option<Vec<C<R>>>,
}

/// Dimension of the space of functions with the given spin monodromy,
/// first-order poles at the ends and vanishing order-zero terms.
pub fn spin_obstruction<R: Real>(ends: &EndSet<R>, spin: &SpinClass<R>) -> Result<Obstruction<R>> {
    let basis = match spin {
        SpinClass::Trivial => zeta_difference_basis(&ends.points, &ends.surface_lat),
        SpinClass::Signs(h) => {
            if h.is_trivial(R::of(1e-6)) {
                zeta_difference_basis(&ends.points, &ends.surface_lat)
            } else {
                multiplier_basis(h, &ends.points, &ends.surface_lat)?
            }
        }
    };
    let a = order_zero_matrix_for_basis(&basis, ends)?;
    let svd = a.svd();
    let floor = entry_floor(ends);
    let dim = svd.kernel_dimension(R::of(tol::KERNEL_RATIO), floor);
    let kernel_vector = if dim > 0 {
        let col = svd.values.len() - 1;
        Some(
            (0..basis.len())
                .map(|r| svd.right_vectors.at(r, col))
                .collect(),
        )
    } else {
        None
    };
    Ok(Obstruction {
        admissible_dim: dim,
        singular_values: svd.values,
        kernel_vector,
    })
}

#[cfg(test)]
mod tests;
