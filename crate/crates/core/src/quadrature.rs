//! Complex line and contour quadrature.
//!
//! Segments use composite 16-point Gauss-Legendre panels (optionally
//! adaptive); circles use the trapezoidal rule, which is spectrally
//! accurate for integrands analytic in an annulus around the contour.

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::{Real, C};

/// 16-point Gauss-Legendre nodes on [-1, 1].
const GL16_X: [f64; 16] = [
    -0.989_400_934_991_649_9,
    -0.944_575_023_073_232_6,
    -0.865_631_202_387_831_7,
    -0.755_404_408_355_003_0,
    -0.617_876_244_402_643_7,
    -0.458_016_777_657_227_4,
    -0.281_603_550_779_258_9,
    -0.095_012_509_837_637_44,
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];

/// 16-point Gauss-Legendre weights.
const GL16_W: [f64; 16] = [
    0.027_152_459_411_754_095,
    0.062_253_523_938_647_89,
    0.095_158_511_682_492_78,
    0.124_628_971_255_533_87,
    0.149_595_988_816_576_73,
    0.169_156_519_395_002_54,
    0.182_603_415_044_923_59,
    0.189_450_610_455_068_5,
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_59,
    0.169_156_519_395_002_54,
    0.149_595_988_816_576_73,
    0.124_628_971_255_533_87,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_095,
];

/// One Gauss-Legendre panel of ∫ f(z) dz over the straight segment [a, b].
fn gl16_segment<R, F>(f: &F, a: C<R>, b: C<R>) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    let mid = (a + b) * R::of(0.5);
    let half = (b - a) * R::of(0.5);
    let mut acc = Complex::new(R::zero(), R::zero());
    for (x, w) in GL16_X.iter().zip(GL16_W.iter()) {
        let z = mid + half * R::of(*x);
        acc = acc + f(z)? * R::of(*w);
    }
    Ok(acc * half)
}

/// Composite Gauss-Legendre integral over [a, b] with `panels` panels.
pub fn segment<R, F>(f: &F, a: C<R>, b: C<R>, panels: usize) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    let panels = panels.max(1);
    let mut acc = Complex::new(R::zero(), R::zero());
    for k in 0..panels {
        let t0 = R::of(k as f64 / panels as f64);
        let t1 = R::of((k + 1) as f64 / panels as f64);
        let z0 = a + (b - a) * t0;
        let z1 = a + (b - a) * t1;
        acc = acc + gl16_segment(f, z0, z1)?;
    }
    Ok(acc)
}

/// Adaptive Gauss-Legendre integral: panels split until the two-half
/// refinement agrees with the parent panel to `tol` (absolute).
pub fn segment_adaptive<R, F>(f: &F, a: C<R>, b: C<R>, tol: R) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    fn recurse<R, F>(f: &F, a: C<R>, b: C<R>, whole: C<R>, tol: R, depth: usize) -> Result<C<R>>
    where
        R: Real,
        F: Fn(C<R>) -> Result<C<R>>,
    {
        let mid = (a + b) * R::of(0.5);
        let left = gl16_segment(f, a, mid)?;
        let right = gl16_segment(f, mid, b)?;
        let refined = left + right;
        if (refined - whole).norm() <= tol || depth >= 24 {
            return Ok(refined);
        }
        let half_tol = tol * R::of(0.5);
        Ok(recurse(f, a, mid, left, half_tol, depth + 1)?
            + recurse(f, mid, b, right, half_tol, depth + 1)?)
    }
    let whole = gl16_segment(f, a, b)?;
    recurse(f, a, b, whole, tol, 0)
}

/// Which side of the travel direction a detour arc bulges to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetourSide {
    Left,
    Right,
}

/// Integrate along [a, b], replacing the portion of the segment near
/// each listed pole by a semicircular arc of the given radius.
///
/// Poles further than `radius` from the segment are ignored. The path
/// is the same for both sides up to arc orientation, so for integrands
/// whose poles carry no residue the two sides must agree; tests assert
/// exactly that.
pub fn segment_with_detours<R, F>(
    f: &F,
    a: C<R>,
    b: C<R>,
    poles: &[C<R>],
    radius: R,
    side: DetourSide,
    panels_per_unit: usize,
) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    let dir = b - a;
    let len = dir.norm();
    let unit = dir / len;

    // Poles close to the segment, by arclength along it.
    let mut events: Vec<(R, C<R>)> = Vec::new();
    for p in poles {
        let rel = (*p - a) / unit; // rotate so segment is the real axis
        if rel.im.abs() <= radius && rel.re > -radius && rel.re < len + radius {
            events.push((rel.re, *p));
        }
    }
    events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let mut acc = Complex::new(R::zero(), R::zero());
    let mut cursor = a;
    let mut cursor_t = R::zero();
    let panels = |l: R| ((l / len).to_f64().unwrap_or(1.0) * panels_per_unit as f64).ceil() as usize + 1;

    for (t, p) in events {
        // Entry and exit points of the arc on the segment line.
        let rel_im = ((p - a) / unit).im;
        let chord = (radius * radius - rel_im * rel_im).max(R::zero()).sqrt();
        let t_in = (t - chord).max(cursor_t);
        let t_out = (t + chord).min(len);
        if t_out <= cursor_t {
            continue;
        }
        let z_in = a + unit * t_in;
        let z_out = a + unit * t_out;
        if t_in > cursor_t {
            acc = acc + segment(f, cursor, z_in, panels(t_in - cursor_t))?;
        }
        // Arc around p from z_in to z_out, bulging to the requested side.
        let th_in = (z_in - p).arg();
        let th_out = (z_out - p).arg();
        let r_in = (z_in - p).norm();
        let r_out = (z_out - p).norm();
        let mut dth = th_out - th_in;
        let two_pi = R::PI() * R::of(2.0);
        while dth > R::PI() {
            dth -= two_pi;
        }
        while dth <= -R::PI() {
            dth += two_pi;
        }
        // Of the two candidate arcs pick the one whose midpoint lies on the
        // requested side of the travel line; neither winds around the pole.
        let alt = if dth > R::zero() { dth - two_pi } else { dth + two_pi };
        let on_side = |d: R| -> bool {
            let r_mid = (r_in + r_out) * R::of(0.5);
            let zm = p + Complex::from_polar(r_mid, th_in + d * R::of(0.5));
            let s = ((zm - a) / unit).im;
            match side {
                DetourSide::Left => s > R::zero(),
                DetourSide::Right => s < R::zero(),
            }
        };
        if !on_side(dth) && on_side(alt) {
            dth = alt;
        }
        let arc_panels = 8usize;
        for k in 0..arc_panels {
            let f0 = R::of(k as f64 / arc_panels as f64);
            let f1 = R::of((k + 1) as f64 / arc_panels as f64);
            // Radius interpolates so the arc joins the entry/exit points even
            // when the pole sits slightly off the segment.
            acc = acc + gl16_arc(f, p, r_in, r_out - r_in, th_in, dth, f0, f1)?;
        }
        cursor = z_out;
        cursor_t = t_out;
    }
    if cursor_t < len {
        acc = acc + segment(f, cursor, b, panels(len - cursor_t))?;
    }
    Ok(acc)
}

/// Gauss-Legendre panel of ∫ f(z) dz along the spiral arc
/// z(s) = p + (r0 + dr·s) · exp(i(th0 + dth·s)), with analytic tangent.
#[allow(clippy::too_many_arguments)]
fn gl16_arc<R, F>(f: &F, p: C<R>, r0: R, dr: R, th0: R, dth: R, s0: R, s1: R) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    let mid = (s0 + s1) * R::of(0.5);
    let half = (s1 - s0) * R::of(0.5);
    let iunit = Complex::new(R::zero(), R::one());
    let mut acc = Complex::new(R::zero(), R::zero());
    for (x, w) in GL16_X.iter().zip(GL16_W.iter()) {
        let s = mid + half * R::of(*x);
        let r = r0 + dr * s;
        let e = Complex::from_polar(R::one(), th0 + dth * s);
        let z = p + e * r;
        let dz = e * (Complex::new(dr, R::zero()) + iunit * r * dth);
        acc = acc + f(z)? * dz * R::of(*w);
    }
    Ok(acc * half)
}

/// Trapezoidal samples of f on the circle |z − center| = radius.
fn circle_sum<R, F>(f: &F, center: C<R>, radius: R, nodes: usize, power: i32) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    let mut acc = Complex::new(R::zero(), R::zero());
    let n = R::of(nodes as f64);
    for k in 0..nodes {
        let th = R::of(2.0 * std::f64::consts::PI * k as f64 / nodes as f64);
        let e = Complex::from_polar(radius, th);
        acc = acc + f(center + e)? * e.powi(power);
    }
    Ok(acc / n)
}

/// Number of trapezoid nodes used by the contour extractors.
pub const CONTOUR_NODES: usize = 256;

/// Residue (1/2πi) ∮ f over the circle of the given radius.
pub fn contour_residue<R, F>(f: &F, center: C<R>, radius: R) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    circle_sum(f, center, radius, CONTOUR_NODES, 1)
}

/// Laurent coefficient of (z − center)^order by weighted contour quadrature.
pub fn laurent_coefficient<R, F>(f: &F, center: C<R>, order: i32, radius: R) -> Result<C<R>>
where
    R: Real,
    F: Fn(C<R>) -> Result<C<R>>,
{
    circle_sum(f, center, radius, CONTOUR_NODES, -order)
}
