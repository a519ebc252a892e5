//! Minimal immersions from spinor data: the four-end family on the
//! index-four cover and the two-end (staircase) family, their period
//! problems, closed-form integration of the Weierstrass representation
//! df = Re(2s₁s₂, s₁² − s₂², i(s₁² + s₂²)) dz, and mesh sampling.
//!
//! The numerical backbone is that every product of two spinor basis
//! functions is a signed sum of ℘-translates plus a constant, with the
//! signs given by products of the Z₂ residue signs of the Baker
//! functions at the half periods. Integration therefore replaces each
//! ℘-translate by a −ζ-translate, and all periods are available in
//! closed form through the lattice constants.

use num_complex::Complex;

use crate::baker::{baker_eval, residue_signs, BakerSpec, Multiplier};
use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cx, Real, C};
use crate::spectral::{EndSet, Family};
use crate::tol;

/// Spinor configuration of a surface family.
///
/// Four ends: s₁ = Φ₁ + aΦ₂ + bΦ₃, s₂ = cΦ₂ + dΦ₃ with Φ_k the Baker
/// functions at the half periods ω_k, all seen on the index-four cover;
/// the spin is trivial there. Two ends: s₁ = Φ₁ + Φ₂, s₂ = a(Φ₁ − Φ₂)
/// with Φ₁, Φ₂ the Baker functions at the half periods ω₂/2 and
/// ω₂/2 + ω₃ of the component torus (ω₂, 2ω₃); `period` selects the
/// closed direction γ = 2(mω₁ + nω₃).
#[derive(Debug, Clone)]
pub enum SpinorConfig<R: Real> {
    FourEnd {
        lat: Lattice<R>,
        a: C<R>,
        b: C<R>,
        c: C<R>,
        d: C<R>,
    },
    TwoEnd {
        lat: Lattice<R>,
        a: C<R>,
        period: (i64, i64),
    },
}

impl<R: Real> SpinorConfig<R> {
    pub fn family(&self) -> Family {
        match self {
            SpinorConfig::FourEnd { .. } => Family::FourEnd,
            SpinorConfig::TwoEnd { .. } => Family::TwoEnd,
        }
    }

    pub fn base_lattice(&self) -> &Lattice<R> {
        match self {
            SpinorConfig::FourEnd { lat, .. } => lat,
            SpinorConfig::TwoEnd { lat, .. } => lat,
        }
    }

    /// The torus the surface is parametrized over.
    pub fn surface_lattice(&self) -> Result<Lattice<R>> {
        match self {
            SpinorConfig::FourEnd { lat, .. } => {
                let (p1, p3) = lat.periods();
                Lattice::new(p1, p3)
            }
            SpinorConfig::TwoEnd { lat, .. } => Ok(lat.clone()),
        }
    }

    pub fn ends(&self) -> Result<EndSet<R>> {
        EndSet::for_family(self.family(), self.base_lattice())
    }

    /// Z₂ spin monodromy of the spinors on the surface generators.
    pub fn spin(&self) -> Result<Multiplier<R>> {
        let surf = self.surface_lattice()?;
        let (p1, p3) = surf.periods();
        let one = Complex::new(R::one(), R::zero());
        match self {
            SpinorConfig::FourEnd { .. } => Ok(Multiplier::new(one, one, p1, p3)),
            SpinorConfig::TwoEnd { .. } => Ok(Multiplier::new(-one, -one, p1, p3)),
        }
    }

    /// Baker data of the spinor basis functions.
    fn basis_specs(&self) -> Result<Vec<BakerSpec<R>>> {
        match self {
            SpinorConfig::FourEnd { lat, .. } => Ok(vec![
                BakerSpec::new(lat.omega1(), lat.clone())?,
                BakerSpec::new(lat.omega2(), lat.clone())?,
                BakerSpec::new(lat.omega3(), lat.clone())?,
            ]),
            SpinorConfig::TwoEnd { lat, .. } => {
                let comp = crate::spectral::component_lattice(Family::TwoEnd, lat)?;
                let half = comp.omega1();
                Ok(vec![
                    BakerSpec::new(half, comp.clone())?,
                    BakerSpec::new(comp.omega2(), comp)?,
                ])
            }
        }
    }

    /// Coefficient vectors of (s₁, s₂) over the Baker basis.
    fn coefficient_vectors(&self) -> (Vec<C<R>>, Vec<C<R>>) {
        let zero = Complex::new(R::zero(), R::zero());
        let one = Complex::new(R::one(), R::zero());
        match self {
            SpinorConfig::FourEnd { a, b, c, d, .. } => {
                (vec![one, *a, *b], vec![zero, *c, *d])
            }
            SpinorConfig::TwoEnd { a, .. } => (vec![one, one], vec![*a, -*a]),
        }
    }

    /// Residue signs ε_k(q) of basis function k at translate q; the q
    /// order matches `translates()`.
    fn sign_table(&self) -> Vec<[f64; 4]> {
        match self {
            SpinorConfig::FourEnd { .. } => (1..=3).map(residue_signs).collect(),
            // Two ends 0 and ω₂: Φ₁ has residue signs (1, +1), Φ₂ has
            // (1, −1); the trailing entries are unused.
            SpinorConfig::TwoEnd { .. } => vec![[1.0, 1.0, 0.0, 0.0], [1.0, -1.0, 0.0, 0.0]],
        }
    }

    /// Diagonal constants β_k with Φ_k² = Σ_q ℘(x−q) − β_k.
    fn diagonal_constants(&self) -> Result<Vec<C<R>>> {
        match self {
            SpinorConfig::FourEnd { lat, .. } => {
                let k = lat.constants();
                Ok(vec![k.e1, k.e2, k.e3])
            }
            SpinorConfig::TwoEnd { lat, .. } => {
                let (b1, b2) = two_end_constants(lat)?;
                Ok(vec![b1, b2])
            }
        }
    }

    /// The ℘-translate shifts (equal to the ends).
    fn translates(&self) -> Result<Vec<C<R>>> {
        Ok(self.ends()?.points)
    }
}

/// The constants b₁ = 2℘(ω₂/2) and b₂ = 2℘(ω₂/2 + ω₃) of the two-end
/// family (℘ of the base torus).
pub fn two_end_constants<R: Real>(lat: &Lattice<R>) -> Result<(C<R>, C<R>)> {
    let half = lat.omega2() / R::of(2.0);
    let two = R::of(2.0);
    Ok((lat.wp(half)? * two, lat.wp(half + lat.omega3())? * two))
}

/// Evaluate the spinor pair at x. Errors within the pole radius of an end.
pub fn spinor_eval<R: Real>(cfg: &SpinorConfig<R>, x: C<R>) -> Result<(C<R>, C<R>)> {
    let specs = cfg.basis_specs()?;
    let pole_lat = &specs[0].lat;
    if pole_lat.distance_to_lattice(x)? < pole_lat.pole_radius() {
        return Err(Error::PoleAtEnd);
    }
    let values: Vec<C<R>> = specs
        .iter()
        .map(|s| baker_eval(s, x))
        .collect::<Result<Vec<_>>>()?;
    let (v1, v2) = cfg.coefficient_vectors();
    let dot = |v: &[C<R>]| {
        v.iter()
            .zip(values.iter())
            .fold(Complex::new(R::zero(), R::zero()), |acc, (c, f)| acc + *c * *f)
    };
    Ok((dot(&v1), dot(&v2)))
}

/// Relative residual of the product identity for basis functions k and
/// l (1-based) at x: the product of Baker functions against its signed
/// ℘-translate decomposition.
pub fn product_identity_residual<R: Real>(
    family: Family,
    lat: &Lattice<R>,
    k: usize,
    l: usize,
    x: C<R>,
) -> Result<R> {
    let cfg = match family {
        Family::FourEnd => SpinorConfig::FourEnd {
            lat: lat.clone(),
            a: cx(0.0, 0.0),
            b: cx(0.0, 0.0),
            c: cx(0.0, 0.0),
            d: cx(0.0, 0.0),
        },
        Family::TwoEnd => SpinorConfig::TwoEnd {
            lat: lat.clone(),
            a: cx(0.0, 0.0),
            period: (1, 0),
        },
    };
    let specs = cfg.basis_specs()?;
    let lhs = baker_eval(&specs[k - 1], x)? * baker_eval(&specs[l - 1], x)?;

    let surf = cfg.surface_lattice()?;
    let signs = cfg.sign_table();
    let translates = cfg.translates()?;
    let mut rhs = Complex::new(R::zero(), R::zero());
    for (t, q) in translates.iter().enumerate() {
        let s = R::of(signs[k - 1][t] * signs[l - 1][t]);
        rhs = rhs + surf.wp(x - *q)? * s;
    }
    if k == l {
        rhs = rhs - cfg.diagonal_constants()?[k - 1];
    }
    Ok((lhs - rhs).norm() / lhs.norm().max(R::one()))
}

/// Closed form of ∫ Φ_k² dx over the four-end surface generator 4ω_l:
/// −4(η_l + e_k ω_l). `l` is 1 or 3.
pub fn period_integral_closed<R: Real>(lat: &Lattice<R>, k: usize, l: usize) -> C<R> {
    let kc = lat.constants();
    let (e, eta, omega) = match (k, l) {
        (1, 1) => (kc.e1, kc.eta1, lat.omega1()),
        (2, 1) => (kc.e2, kc.eta1, lat.omega1()),
        (3, 1) => (kc.e3, kc.eta1, lat.omega1()),
        (1, 3) => (kc.e1, kc.eta3, lat.omega3()),
        (2, 3) => (kc.e2, kc.eta3, lat.omega3()),
        (3, 3) => (kc.e3, kc.eta3, lat.omega3()),
        _ => panic!("k must be 1..=3, l must be 1 or 3"),
    };
    -(eta + e * omega) * R::of(4.0)
}

/// Closed-form square periods ∫ Φ_k² over the surface cycle indexed by
/// (m, n) in surface generators.
fn square_periods<R: Real>(cfg: &SpinorConfig<R>, m: i64, n: i64) -> Result<Vec<C<R>>> {
    let lat = cfg.base_lattice();
    let k = lat.constants();
    let mf = R::of(m as f64);
    let nf = R::of(n as f64);
    let eta_mn = k.eta1 * mf + k.eta3 * nf;
    let omega_mn = lat.omega1() * mf + lat.omega3() * nf;
    match cfg {
        SpinorConfig::FourEnd { .. } => Ok(vec![
            -(eta_mn + k.e1 * omega_mn) * R::of(4.0),
            -(eta_mn + k.e2 * omega_mn) * R::of(4.0),
            -(eta_mn + k.e3 * omega_mn) * R::of(4.0),
        ]),
        SpinorConfig::TwoEnd { lat, .. } => {
            let (b1, b2) = two_end_constants(lat)?;
            Ok(vec![
                -eta_mn * R::of(4.0) - b1 * omega_mn * R::of(2.0),
                -eta_mn * R::of(4.0) - b2 * omega_mn * R::of(2.0),
            ])
        }
    }
}

/// The three complex spinor-form periods (∫ s₁s₂, ∫ s₁², ∫ s₂²) over
/// the surface cycle (m, n), in closed form. Cross products of distinct
/// basis functions carry no periods, so only the square periods enter.
pub fn spinor_form_periods<R: Real>(
    cfg: &SpinorConfig<R>,
    m: i64,
    n: i64,
) -> Result<(C<R>, C<R>, C<R>)> {
    let squares = square_periods(cfg, m, n)?;
    let (v1, v2) = cfg.coefficient_vectors();
    let mut s12 = Complex::new(R::zero(), R::zero());
    let mut s11 = s12;
    let mut s22 = s12;
    for (k, i) in squares.iter().enumerate() {
        s12 = s12 + v1[k] * v2[k] * *i;
        s11 = s11 + v1[k] * v1[k] * *i;
        s22 = s22 + v2[k] * v2[k] * *i;
    }
    Ok((s12, s11, s22))
}

/// Closedness residuals over the cycle (m, n):
/// r₁ = |Re ∫ s₁s₂| and r₂ = |∫ s₁² − conj(∫ s₂²)|.
pub fn closedness_residual<R: Real>(cfg: &SpinorConfig<R>, m: i64, n: i64) -> Result<(R, R)> {
    let (s12, s11, s22) = spinor_form_periods(cfg, m, n)?;
    Ok((s12.re.abs(), (s11 - s22.conj()).norm()))
}

/// Translation vector of the immersion over the surface cycle (m, n):
/// the real periods of the three coordinate forms.
pub fn period_vector<R: Real>(cfg: &SpinorConfig<R>, m: i64, n: i64) -> Result<[R; 3]> {
    let (s12, s11, s22) = spinor_form_periods(cfg, m, n)?;
    Ok([
        (s12 * R::of(2.0)).re,
        (s11 - s22).re,
        -(s11 + s22).im,
    ])
}

/// Determinant of the special-solution 2×2 system, which must equal
/// (e₃ − e₂)·πi/2.
pub fn special_determinant<R: Real>(lat: &Lattice<R>) -> C<R> {
    let k = lat.constants();
    let l21 = k.eta1 + k.e2 * lat.omega1();
    let l31 = k.eta1 + k.e3 * lat.omega1();
    let l23 = k.eta3 + k.e2 * lat.omega3();
    let l33 = k.eta3 + k.e3 * lat.omega3();
    l21 * l33 - l31 * l23
}

/// Special four-end solution: a = b = 0, (c², d²) from inverting the
/// 2×2 closedness system, principal square roots.
pub fn solve_special_four_end<R: Real>(lat: &Lattice<R>) -> Result<(C<R>, C<R>)> {
    let k = lat.constants();
    if (k.e3 - k.e2).norm() < R::of(tol::DEGENERATE_LATTICE) {
        return Err(Error::DegenerateLattice);
    }
    let l21 = k.eta1 + k.e2 * lat.omega1();
    let l31 = k.eta1 + k.e3 * lat.omega1();
    let l23 = k.eta3 + k.e2 * lat.omega3();
    let l33 = k.eta3 + k.e3 * lat.omega3();
    let rhs1 = (k.eta1 + k.e1 * lat.omega1()).conj();
    let rhs3 = (k.eta3 + k.e1 * lat.omega3()).conj();
    let (c2, d2) = linalg::solve2(l21, l31, l23, l33, rhs1, rhs3);
    Ok((c2.sqrt(), d2.sqrt()))
}

/// Gauss-Newton solve of the four-end closedness system in (c, d) for
/// fixed (a, b): six real equations, four real unknowns, damped steps.
pub fn solve_general_four_end<R: Real>(
    lat: &Lattice<R>,
    a: C<R>,
    b: C<R>,
    guess: (C<R>, C<R>),
) -> Result<(C<R>, C<R>)> {
    let k = lat.constants();
    let l2 = [k.eta1 + k.e2 * lat.omega1(), k.eta3 + k.e2 * lat.omega3()];
    let l3 = [k.eta1 + k.e3 * lat.omega1(), k.eta3 + k.e3 * lat.omega3()];
    let l1 = [k.eta1 + k.e1 * lat.omega1(), k.eta3 + k.e1 * lat.omega3()];

    let residual = |c: C<R>, d: C<R>| -> Vec<R> {
        let mut f = Vec::with_capacity(6);
        for i in 0..2 {
            f.push((a * c * l2[i] + b * d * l3[i]).re);
        }
        for i in 0..2 {
            let g = c * c * l2[i] + d * d * l3[i]
                - (l1[i] + a * a * l2[i] + b * b * l3[i]).conj();
            f.push(g.re);
            f.push(g.im);
        }
        f
    };
    let norm = |f: &[R]| f.iter().fold(R::zero(), |acc, v| acc + *v * *v).sqrt();

    let (mut c, mut d) = guess;
    let mut best = norm(&residual(c, d));
    let target = R::of(tol::NEWTON_RESIDUAL);
    for _iter in 0..50 {
        let f = residual(c, d);
        let fnorm = norm(&f);
        if fnorm < target {
            return Ok((c, d));
        }
        // Analytic Jacobian in (Re c, Im c, Re d, Im d).
        let mut jac: Vec<Vec<R>> = Vec::with_capacity(6);
        let iunit = Complex::new(R::zero(), R::one());
        for i in 0..2 {
            let gc = a * l2[i];
            let gd = b * l3[i];
            jac.push(vec![gc.re, (gc * iunit).re, gd.re, (gd * iunit).re]);
        }
        for i in 0..2 {
            let gc = c * l2[i] * R::of(2.0);
            let gd = d * l3[i] * R::of(2.0);
            jac.push(vec![gc.re, (gc * iunit).re, gd.re, (gd * iunit).re]);
            jac.push(vec![gc.im, (gc * iunit).im, gd.im, (gd * iunit).im]);
        }
        let neg_f: Vec<R> = f.iter().map(|v| -*v).collect();
        let Some(step) = linalg::lstsq_real(&jac, &neg_f) else {
            break;
        };
        // Damped update: halve the step while the residual grows.
        let mut lambda = R::one();
        let mut accepted = false;
        for _try in 0..20 {
            let nc = c + Complex::new(step[0] * lambda, step[1] * lambda);
            let nd = d + Complex::new(step[2] * lambda, step[3] * lambda);
            let nnorm = norm(&residual(nc, nd));
            if nnorm < fnorm {
                c = nc;
                d = nd;
                best = nnorm;
                accepted = true;
                break;
            }
            lambda = lambda * R::of(0.5);
        }
        if !accepted {
            break;
        }
    }
    if best < target {
        Ok((c, d))
    } else {
        Err(Error::NoConvergence {
            iterations: 50,
            best_residual: best.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Two-end period solve for the cycle (m, n).
#[derive(Debug, Clone)]
pub struct TwoEndSolution<R: Real> {
    /// Spinor coefficient with |a| = 1.
    pub a: C<R>,
    /// |Re ∫ s₁s₂| with this a (the one condition not solvable exactly).
    pub residual: R,
    /// Signed value of the same period; roots of this along a lattice
    /// family locate closed examples.
    pub signed_value: R,
    pub b1: C<R>,
    pub b2: C<R>,
}

/// Solve the two-end period problem in direction γ = 2(mω₁ + nω₃):
/// a is fixed up to sign by ∫ s₁² = conj(∫ s₂²); the remaining
/// condition Re ∫ s₁s₂ = 0 is reported as a residual.
pub fn solve_two_end<R: Real>(lat: &Lattice<R>, m: i64, n: i64) -> Result<TwoEndSolution<R>> {
    if m == 0 && n == 0 {
        return Err(Error::InvalidLattice("period index (0, 0) selects no cycle"));
    }
    let (b1, b2) = two_end_constants(lat)?;
    let k = lat.constants();
    let mf = R::of(m as f64);
    let nf = R::of(n as f64);
    let omega_mn = lat.omega1() * mf + lat.omega3() * nf;
    // P = ∫ (s₁² with a = 1) = sum of both square periods.
    let p = -(k.eta1 * mf + k.eta3 * nf) * R::of(8.0) - (b1 + b2) * omega_mn * R::of(2.0);
    let a = if p.norm() == R::zero() {
        Complex::new(R::one(), R::zero())
    } else {
        (p / p.norm()).conj()
    };
    let cfg = SpinorConfig::TwoEnd {
        lat: lat.clone(),
        a,
        period: (m, n),
    };
    let (s12, _, _) = spinor_form_periods(&cfg, m, n)?;
    Ok(TwoEndSolution {
        a,
        residual: s12.re.abs(),
        signed_value: s12.re,
        b1,
        b2,
    })
}

/// Closed-form antiderivative of the Weierstrass representation:
/// f_k(x) = Re(λ_k x − Σ_q μ_{k,q} ζ(x − q) + κ_k) on the surface torus.
#[derive(Debug, Clone)]
pub struct ImmersionForm<R: Real> {
    /// Surface torus lattice the ζ-translates live on.
    pub lat: Lattice<R>,
    /// λ_k.
    pub linear: [C<R>; 3],
    /// Translate shifts q (the ends).
    pub shifts: Vec<C<R>>,
    /// μ_{k,q}: outer index matches `shifts`, inner the ℝ³ component.
    pub zeta_coeffs: Vec<[C<R>; 3]>,
    /// κ_k.
    pub constant: [C<R>; 3],
}

/// Assemble the immersion form of a configuration. The base point
/// (ω₁ + ω₃)/2 is mapped to the origin.
pub fn build_immersion<R: Real>(cfg: &SpinorConfig<R>) -> Result<ImmersionForm<R>> {
    let surf = cfg.surface_lattice()?;
    let shifts = cfg.translates()?;
    let signs = cfg.sign_table();
    let betas = cfg.diagonal_constants()?;
    let (v1, v2) = cfg.coefficient_vectors();
    let nb = v1.len();

    // Signed sums A_t = Σ_k v_k ε_k(t) per translate, for each spinor.
    let signed_sum = |v: &[C<R>], t: usize| -> C<R> {
        (0..nb).fold(Complex::new(R::zero(), R::zero()), |acc, k| {
            acc + v[k] * R::of(signs[k][t])
        })
    };
    // Product constants −Σ_k v_k w_k β_k.
    let const_part = |v: &[C<R>], w: &[C<R>]| -> C<R> {
        -(0..nb).fold(Complex::new(R::zero(), R::zero()), |acc, k| {
            acc + v[k] * w[k] * betas[k]
        })
    };

    let two = R::of(2.0);
    let iunit = Complex::new(R::zero(), R::one());
    let mut zeta_coeffs: Vec<[C<R>; 3]> = Vec::with_capacity(shifts.len());
    for t in 0..shifts.len() {
        let a1 = signed_sum(&v1, t);
        let a2 = signed_sum(&v2, t);
        // ℘-translate coefficients of (2s₁s₂, s₁² − s₂², i(s₁² + s₂²)).
        let w1 = a1 * a2 * two;
        let w2 = a1 * a1 - a2 * a2;
        let w3 = (a1 * a1 + a2 * a2) * iunit;
        zeta_coeffs.push([w1, w2, w3]);
    }
    let c12 = const_part(&v1, &v2);
    let c11 = const_part(&v1, &v1);
    let c22 = const_part(&v2, &v2);
    let linear = [c12 * two, c11 - c22, (c11 + c22) * iunit];

    let mut form = ImmersionForm {
        lat: surf,
        linear,
        shifts,
        zeta_coeffs,
        constant: [Complex::new(R::zero(), R::zero()); 3],
    };
    let base = (cfg.base_lattice().omega1() + cfg.base_lattice().omega3()) / two;
    let raw = form.complex_position(base)?;
    form.constant = [-raw[0], -raw[1], -raw[2]];
    Ok(form)
}

/// Position and analytic derivatives of the immersion at a parameter
/// point, with x = u + iv.
#[derive(Debug, Clone, Copy)]
pub struct ImmersionJet<R: Real> {
    pub position: [R; 3],
    pub du: [R; 3],
    pub dv: [R; 3],
    pub duu: [R; 3],
    pub duv: [R; 3],
    pub dvv: [R; 3],
}

impl<R: Real> ImmersionForm<R> {
    fn guard(&self, x: C<R>) -> Result<()> {
        for q in &self.shifts {
            if self.lat.distance_to_lattice(x - *q)? < self.lat.pole_radius() {
                return Err(Error::PoleAtEnd);
            }
        }
        Ok(())
    }

    /// F_k(x) before taking real parts (κ included).
    fn complex_position(&self, x: C<R>) -> Result<[C<R>; 3]> {
        self.guard(x)?;
        let mut out = [self.constant[0], self.constant[1], self.constant[2]];
        for k in 0..3 {
            out[k] = out[k] + self.linear[k] * x;
        }
        for (q, mu) in self.shifts.iter().zip(self.zeta_coeffs.iter()) {
            let z = self.lat.zeta(x - *q)?;
            for k in 0..3 {
                out[k] = out[k] - mu[k] * z;
            }
        }
        Ok(out)
    }

    /// F′_k(x): equals the coordinate forms (2s₁s₂, s₁²−s₂², i(s₁²+s₂²)).
    pub fn complex_derivative(&self, x: C<R>) -> Result<[C<R>; 3]> {
        self.guard(x)?;
        let mut out = [self.linear[0], self.linear[1], self.linear[2]];
        for (q, mu) in self.shifts.iter().zip(self.zeta_coeffs.iter()) {
            let w = self.lat.wp(x - *q)?;
            for k in 0..3 {
                out[k] = out[k] + mu[k] * w;
            }
        }
        Ok(out)
    }

    fn complex_second_derivative(&self, x: C<R>) -> Result<[C<R>; 3]> {
        self.guard(x)?;
        let mut out = [Complex::new(R::zero(), R::zero()); 3];
        for (q, mu) in self.shifts.iter().zip(self.zeta_coeffs.iter()) {
            let w = self.lat.wp_prime(x - *q)?;
            for k in 0..3 {
                out[k] = out[k] + mu[k] * w;
            }
        }
        Ok(out)
    }

    /// Evaluate position f = Re F and its analytic partials.
    pub fn eval(&self, x: C<R>) -> Result<ImmersionJet<R>> {
        let f = self.complex_position(x)?;
        let f1 = self.complex_derivative(x)?;
        let f2 = self.complex_second_derivative(x)?;
        let re3 = |v: [C<R>; 3]| [v[0].re, v[1].re, v[2].re];
        let negim3 = |v: [C<R>; 3]| [-v[0].im, -v[1].im, -v[2].im];
        Ok(ImmersionJet {
            position: re3(f),
            du: re3(f1),
            dv: negim3(f1),
            duu: re3(f2),
            duv: negim3(f2),
            dvv: [-f2[0].re, -f2[1].re, -f2[2].re],
        })
    }

    /// Translation defect f(x + γ) − f(x) for γ = m·P₁ + n·P₃ in the
    /// surface periods: constant in x, computed in closed form.
    pub fn translation_defect(&self, m: i64, n: i64) -> [R; 3] {
        let gamma = self.lat.point(m, n);
        let eta = self.lat.quasi_period(m, n);
        let mut out = [R::zero(); 3];
        for k in 0..3 {
            let mut musum = Complex::new(R::zero(), R::zero());
            for mu in &self.zeta_coeffs {
                musum = musum + mu[k];
            }
            out[k] = (self.linear[k] * gamma - musum * eta).re;
        }
        out
    }
}

/// Triangulated sample of an immersion over whole fundamental domains.
#[derive(Debug, Clone)]
pub struct Mesh<R: Real> {
    pub vertices: Vec<[R; 3]>,
    pub faces: Vec<[u32; 3]>,
    pub uv: Vec<C<R>>,
    /// One-line description echoed into exports.
    pub description: String,
    pub clip_radius: R,
}

/// Sample the immersion on a `resolution`-per-domain grid over
/// `copies = (c₁, c₂)` fundamental domains, clipping disks of
/// `clip_radius` around the ends. Faces are counterclockwise in the
/// parameter plane.
pub fn sample_mesh<R: Real>(
    form: &ImmersionForm<R>,
    resolution: usize,
    clip_radius: R,
    copies: (usize, usize),
    description: &str,
) -> Result<Mesh<R>> {
    let resolution = resolution.max(8);
    let (p1, p3) = form.lat.periods();
    let n1 = resolution * copies.0.max(1);
    let n2 = resolution * copies.1.max(1);

    let mut index: Vec<Option<u32>> = vec![None; (n1 + 1) * (n2 + 1)];
    let mut vertices = Vec::new();
    let mut uv = Vec::new();
    for j in 0..=n2 {
        for i in 0..=n1 {
            let x = p1 * R::of(i as f64 / resolution as f64)
                + p3 * R::of(j as f64 / resolution as f64);
            let clipped = form
                .shifts
                .iter()
                .any(|q| form.lat.distance_to_lattice(x - *q).map(|d| d < clip_radius) != Ok(false));
            if clipped {
                continue;
            }
            let jet = form.eval(x)?;
            index[j * (n1 + 1) + i] = Some(vertices.len() as u32);
            vertices.push(jet.position);
            uv.push(x);
        }
    }
    let mut faces = Vec::new();
    for j in 0..n2 {
        for i in 0..n1 {
            let v00 = index[j * (n1 + 1) + i];
            let v10 = index[j * (n1 + 1) + i + 1];
            let v11 = index[(j + 1) * (n1 + 1) + i + 1];
            let v01 = index[(j + 1) * (n1 + 1) + i];
            if let (Some(a), Some(b), Some(c)) = (v00, v10, v11) {
                faces.push([a, b, c]);
            }
            if let (Some(a), Some(b), Some(c)) = (v00, v11, v01) {
                faces.push([a, b, c]);
            }
        }
    }
    Ok(Mesh {
        vertices,
        faces,
        uv,
        description: description.to_string(),
        clip_radius,
    })
}

/// Result of a common-zero scan of the spinor pair.
#[derive(Debug, Clone)]
pub struct CommonZeroScan<R: Real> {
    /// Minimum of |s₁|² + |s₂|² over the grid.
    pub min_value: R,
    /// Location of the minimum.
    pub location: C<R>,
    /// Median of the sampled values, for relative floor checks.
    pub median_value: R,
}

/// Scan |s₁|² + |s₂|² over a fundamental domain away from the ends: a
/// positive floor is a (heuristic) certificate that the spinors have no
/// common zero and the data defines an immersion.
pub fn common_zero_scan<R: Real>(
    cfg: &SpinorConfig<R>,
    resolution: usize,
) -> Result<CommonZeroScan<R>> {
    let surf = cfg.surface_lattice()?;
    let ends = cfg.translates()?;
    let (p1, p3) = surf.periods();
    let clip = R::of(0.05) * cfg.base_lattice().scale();
    let mut min_value = R::infinity();
    let mut location = Complex::new(R::zero(), R::zero());
    let mut samples: Vec<R> = Vec::new();
    for i in 0..resolution {
        for j in 0..resolution {
            let x = p1 * R::of((i as f64 + 0.5) / resolution as f64)
                + p3 * R::of((j as f64 + 0.5) / resolution as f64);
            if ends
                .iter()
                .any(|q| surf.distance_to_lattice(x - *q).map(|d| d < clip) != Ok(false))
            {
                continue;
            }
            let (s1, s2) = spinor_eval(cfg, x)?;
            let v = s1.norm_sqr() + s2.norm_sqr();
            samples.push(v);
            if v < min_value {
                min_value = v;
                location = x;
            }
        }
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_value = samples[samples.len() / 2];
    Ok(CommonZeroScan {
        min_value,
        location,
        median_value,
    })
}

#[cfg(test)]
mod tests;
