//! Independent numerical checks: differential geometry of the built
//! immersions (conformality, minimality), residue and Laurent
//! extraction, and the aggregated verification suite behind the CLI.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::{Real, C};
use crate::spectral::Family;
use crate::surfaces::{
    closedness_residual, common_zero_scan, spinor_eval, ImmersionForm, SpinorConfig,
};
use crate::tol;

/// Mean curvature from analytic first and second derivatives:
/// H = (eG − 2fF + gE) / (2(EG − F²)) with the unit normal from the
/// cross product.
pub fn mean_curvature<R: Real>(form: &ImmersionForm<R>, x: C<R>) -> Result<R> {
    let (h, _) = scaled_mean_curvature(form, x)?;
    Ok(h)
}

/// Mean curvature together with the magnitude of the second fundamental
/// form (|e| + 2|f| + |g|) / (2(EG − F²)), the natural scale for
/// relative minimality checks near the blowing-up ends.
pub fn scaled_mean_curvature<R: Real>(form: &ImmersionForm<R>, x: C<R>) -> Result<(R, R)> {
    let jet = form.eval(x)?;
    let dot = |a: [R; 3], b: [R; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [R; 3], b: [R; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let e_metric = dot(jet.du, jet.du);
    let f_metric = dot(jet.du, jet.dv);
    let g_metric = dot(jet.dv, jet.dv);
    let det = e_metric * g_metric - f_metric * f_metric;
    if det < R::of(1e-20) {
        return Err(Error::DegenerateMetric);
    }
    let mut normal = cross(jet.du, jet.dv);
    let nn = dot(normal, normal).sqrt();
    for v in &mut normal {
        *v = *v / nn;
    }
    let e2 = dot(jet.duu, normal);
    let f2 = dot(jet.duv, normal);
    let g2 = dot(jet.dvv, normal);
    let h = (e2 * g_metric - f2 * f_metric * R::of(2.0) + g2 * e_metric)
        / (det * R::of(2.0));
    let scale = (e2.abs() + R::of(2.0) * f2.abs() + g2.abs()) / (det * R::of(2.0));
    Ok((h, scale))
}

/// Conformality residual max(|E − G|, 2|F|) / (E + G) at x.
pub fn conformality_residual<R: Real>(form: &ImmersionForm<R>, x: C<R>) -> Result<R> {
    let jet = form.eval(x)?;
    let dot = |a: [R; 3], b: [R; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let e_metric = dot(jet.du, jet.du);
    let f_metric = dot(jet.du, jet.dv);
    let g_metric = dot(jet.dv, jet.dv);
    let denom = e_metric + g_metric;
    Ok((e_metric - g_metric).abs().max(f_metric.abs() * R::of(2.0)) / denom)
}

/// Residue (1/2πi)∮ f over a circle. Trapezoid rule, 256 nodes.
pub fn contour_residue<R, F>(f: &F, center: C<R>, radius: R) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    quadrature::contour_residue(f, center, radius)
}

/// Laurent coefficient of (x − center)^order by weighted contour
/// quadrature. Trapezoid rule, 256 nodes.
pub fn laurent_coefficient<R, F>(f: &F, center: C<R>, order: i32, radius: R) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    quadrature::laurent_coefficient(f, center, order, radius)
}

/// One named check of a verification report.
#[derive(Debug, Clone, Copy)]
pub struct Check<R: Real> {
    pub value: R,
    pub tolerance: R,
    pub pass: bool,
}

/// Aggregated verification results for a configuration.
#[derive(Debug, Clone)]
pub struct VerificationReport<R: Real> {
    pub checks: BTreeMap<String, Check<R>>,
    /// Configuration echo.
    pub context: String,
    /// Informational lines (e.g. the open period of a staircase).
    pub notes: Vec<String>,
}

impl<R: Real> VerificationReport<R> {
    fn insert(&mut self, name: &str, value: R, tolerance: f64) {
        let tolerance = R::of(tolerance);
        self.checks.insert(
            name.to_string(),
            Check {
                value,
                tolerance,
                pass: value < tolerance,
            },
        );
    }

    /// True iff every check passed.
    pub fn pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    /// Names of failing checks.
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(k, _)| k.clone())
            .collect()
    }
}

/// Run the six named checks on a configuration: conformality,
/// minimality, closedness, end planarity, common-zero floor and spin
/// monodromy. For the two-end family the closedness check covers the
/// configured cycle and the transverse open period is reported as a
/// note.
pub fn run_suite<R: Real>(cfg: &SpinorConfig<R>) -> Result<VerificationReport<R>> {
    let form = crate::surfaces::build_immersion(cfg)?;
    let surf = cfg.surface_lattice()?;
    let (p1, p3) = surf.periods();
    let clip = R::of(0.07) * cfg.base_lattice().scale();
    let ends = cfg.translates_for_verify()?;

    let mut report = VerificationReport {
        checks: BTreeMap::new(),
        context: cfg.describe(),
        notes: Vec::new(),
    };

    // Grid sample away from the ends.
    let mut grid = Vec::new();
    let n = 13usize;
    for i in 0..n {
        for j in 0..n {
            let x = p1 * R::of((i as f64 + 0.5) / n as f64)
                + p3 * R::of((j as f64 + 0.5) / n as f64);
            let near_end = ends
                .iter()
                .any(|q| surf.distance_to_lattice(x - *q).map(|d| d < clip) != Ok(false));
            if !near_end {
                grid.push(x);
            }
        }
    }

    let mut conf_max = R::zero();
    let mut h_max = R::zero();
    let mut scale_sum = R::zero();
    for x in &grid {
        conf_max = conf_max.max(conformality_residual(&form, *x)?);
        let (h, s) = scaled_mean_curvature(&form, *x)?;
        h_max = h_max.max(h.abs());
        scale_sum += s;
    }
    let scale_mean = scale_sum / R::of(grid.len() as f64);
    report.insert("conformality", conf_max, tol::CONFORMALITY);
    report.insert("minimality", h_max / scale_mean, tol::MEAN_CURVATURE);

    // Closedness over the cycles the family must close.
    let cycles: Vec<(i64, i64)> = match cfg {
        SpinorConfig::FourEnd { .. } => vec![(1, 0), (0, 1)],
        SpinorConfig::TwoEnd { period, .. } => vec![surface_cycle_of_base(*period)],
    };
    let mut closed_max = R::zero();
    for (m, n) in &cycles {
        let (r1, r2) = closedness_residual(cfg, *m, *n)?;
        closed_max = closed_max.max(r1).max(r2);
    }
    report.insert("closedness", closed_max, tol::CLOSEDNESS);

    if let SpinorConfig::TwoEnd { period, .. } = cfg {
        let open = transverse_cycle(*period);
        let (sm, sn) = surface_cycle_of_base(open);
        let defect = form.translation_defect(sm, sn);
        report.notes.push(format!(
            "open period (expected) over base cycle ({}, {}): [{:e}, {:e}, {:e}]",
            open.0, open.1, defect[0], defect[1], defect[2]
        ));
    }

    // End planarity: order-zero Laurent coefficients of both spinors.
    let radius = R::of(1e-2) * surf.scale();
    let mut order_zero_max = R::zero();
    for q in &ends {
        for pick in 0..2 {
            let coeff = laurent_coefficient(
                &|z| {
                    let (s1, s2) = spinor_eval(cfg, z)?;
                    Ok(if pick == 0 { s1 } else { s2 })
                },
                *q,
                0,
                radius,
            )?;
            order_zero_max = order_zero_max.max(coeff.norm());
        }
    }
    report.insert("end_planarity", order_zero_max, tol::END_PLANARITY);

    // Common-zero floor, relative to the sampled median.
    let scan = common_zero_scan(cfg, 60)?;
    let floor_value = if scan.min_value > R::of(tol::COMMON_ZERO_REL_FLOOR) * scan.median_value {
        R::zero()
    } else {
        R::one()
    };
    report.insert("common_zero_floor", floor_value, 0.5);
    report.notes.push(format!(
        "common zero scan: min {:e} at {:e}+{:e}i (median {:e})",
        scan.min_value, scan.location.re, scan.location.im, scan.median_value
    ));

    // Spin monodromy of both spinors over both surface generators.
    let spin = cfg.spin()?;
    let mut spin_max = R::zero();
    for x in grid.iter().take(5) {
        let (s1, s2) = spinor_eval(cfg, *x)?;
        for (gamma, want) in [(spin.gamma1, spin.h1), (spin.gamma3, spin.h3)] {
            let (t1, t2) = spinor_eval(cfg, *x + gamma)?;
            spin_max = spin_max.max((t1 / s1 - want).norm());
            spin_max = spin_max.max((t2 / s2 - want).norm());
        }
    }
    report.insert("spin_monodromy", spin_max, tol::SPIN_MONODROMY);

    Ok(report)
}

/// Surface-lattice cycle corresponding to the base-lattice cycle
/// γ = 2(mω₁ + nω₃): identical for the two-end family.
fn surface_cycle_of_base(period: (i64, i64)) -> (i64, i64) {
    period
}

/// A base cycle transverse to the given one.
fn transverse_cycle(period: (i64, i64)) -> (i64, i64) {
    if period.1 == 0 {
        (0, 1)
    } else {
        (1, 0)
    }
}

impl<R: Real> SpinorConfig<R> {
    fn translates_for_verify(&self) -> Result<Vec<C<R>>> {
        Ok(self.ends()?.points)
    }

    /// One-line configuration echo used in reports and mesh headers.
    pub fn describe(&self) -> String {
        match self {
            SpinorConfig::FourEnd { lat, a, b, c, d } => format!(
                "four_end omega1=({:e},{:e}) omega3=({:e},{:e}) a=({:e},{:e}) b=({:e},{:e}) c=({:e},{:e}) d=({:e},{:e})",
                lat.omega1().re,
                lat.omega1().im,
                lat.omega3().re,
                lat.omega3().im,
                a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im
            ),
            SpinorConfig::TwoEnd { lat, a, period } => format!(
                "two_end omega1=({:e},{:e}) omega3=({:e},{:e}) a=({:e},{:e}) period=({},{})",
                lat.omega1().re,
                lat.omega1().im,
                lat.omega3().re,
                lat.omega3().im,
                a.re, a.im, period.0, period.1
            ),
        }
    }
}

/// Synthetic planar immersion form (for detector tests): maps the
/// parameter plane isometrically onto the x-y plane.
pub fn planar_test_form<R: Real>(lat: &Lattice<R>) -> Result<ImmersionForm<R>> {
    Ok(ImmersionForm {
        lat: lat.clone(),
        linear: [
            Complex::new(R::one(), R::zero()),
            Complex::new(R::zero(), -R::one()),
            Complex::new(R::zero(), R::zero()),
        ],
        shifts: Vec::new(),
        zeta_coeffs: Vec::new(),
        constant: [Complex::new(R::zero(), R::zero()); 3],
    })
}

#[cfg(test)]
mod tests;
