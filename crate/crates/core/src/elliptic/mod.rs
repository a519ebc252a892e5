//! Weierstrass elliptic functions ℘, ℘′, ζ, σ on an arbitrary lattice.
//!
//! Conventions: a [`Lattice`] is given by half periods ω₁, ω₃ with
//! Im(ω₃/ω₁) > 0; the periods of the torus are 2ω₁ and 2ω₃, and
//! ω₂ = ω₁ + ω₃. Derived constants are e_j = ℘(ω_j) and η_j = ζ(ω_j),
//! tied together by the Legendre relation η₁ω₃ − η₃ω₁ = πi/2.
//!
//! Evaluation reduces the argument into the fundamental parallelogram
//! centered at 0 (corners ±ω₁ ± ω₃) and sums rapidly convergent Jacobi
//! theta series in the nome q = exp(iπ ω₃/ω₁); see e.g. DLMF §23.6. A
//! slow lattice-sum reference lives in [`oracle`] and is used by tests
//! only.

pub mod oracle;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cx, is_finite, Real, C};

/// Result of reducing a point into the fundamental parallelogram:
/// `x = base + 2 m ω₁ + 2 n ω₃` with `base` in the centered cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction<R: Real> {
    pub base: C<R>,
    pub m: i64,
    pub n: i64,
}

/// The six derived lattice constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConstants<R: Real> {
    pub e1: C<R>,
    pub e2: C<R>,
    pub e3: C<R>,
    pub eta1: C<R>,
    pub eta2: C<R>,
    pub eta3: C<R>,
}

/// Oriented period lattice with precomputed theta data and constants.
///
/// Construction validates the orientation, builds the nome series and
/// derives all constants once; evaluation afterwards is pure and cheap.
#[derive(Debug, Clone)]
pub struct Lattice<R: Real> {
    omega1: C<R>,
    omega3: C<R>,
    /// Signed area Im(conj(2ω₁)·2ω₃) used for coordinate solves.
    inv_area: R,
    /// Theta coefficients (−1)^n q^{(n+1/2)²}.
    coeff: Vec<C<R>>,
    /// θ₁′(0).
    th1p0: C<R>,
    consts: LatticeConstants<R>,
    pole_radius: R,
}

struct ThetaJet<R: Real> {
    s: C<R>,
    d1: C<R>,
    d2: C<R>,
    d3: C<R>,
}

impl<R: Real> Lattice<R> {
    /// Build a lattice from its half periods.
    ///
    /// Fails if either half period is zero or non-finite, if
    /// Im(ω₃/ω₁) ≤ 0, or if the nome is so close to 1 that the series
    /// cannot reach working accuracy.
    pub fn new(omega1: C<R>, omega3: C<R>) -> Result<Self> {
        if !is_finite(omega1) || !is_finite(omega3) {
            return Err(Error::NonFinite);
        }
        if omega1.norm() == R::zero() || omega3.norm() == R::zero() {
            return Err(Error::InvalidLattice("half period is zero"));
        }
        let tau = omega3 / omega1;
        if !(tau.im > R::zero()) {
            return Err(Error::InvalidLattice("Im(omega3/omega1) must be positive"));
        }

        // |q| = exp(-pi Im tau). Coefficients c_n = (-1)^n q^{(n+1/2)^2}
        // are generated by complex multiplications from exp(i pi tau).
        let q: C<R> = (crate::scalar::i::<R>() * R::PI() * tau).exp();
        let abs_q = q.norm();
        let q_quarter: C<R> = (crate::scalar::i::<R>() * R::PI() * tau / cx(4.0, 0.0)).exp();
        let q2 = q * q;

        let mut coeff: Vec<C<R>> = Vec::new();
        let mut body = Complex::new(R::one(), R::zero()); // q^{n(n+1)}
        let mut step = q2; // q^{2(n+1)} factor to advance body
        let mut sign = R::one();
        let stop = R::of(1e-19);
        let mut n: usize = 0;
        loop {
            coeff.push(body * q_quarter * sign);
            // Worst-case term bound over the reduced domain is
            // |q|^{n^2 - 1/4}; include the (2n+1)^3 derivative weight.
            let nf = R::of(n as f64);
            let weight = (R::of(2.0) * nf + R::one()).powi(3);
            let bound = abs_q.powf(nf * nf - R::of(0.25)) * weight;
            if n >= 2 && bound < stop {
                break;
            }
            n += 1;
            if n > 1000 {
                return Err(Error::InvalidLattice("nome too close to 1"));
            }
            body = body * step;
            step = step * q2;
            sign = -sign;
        }

        let two = R::of(2.0);
        let mut th1p0 = Complex::new(R::zero(), R::zero());
        let mut th1ppp0 = Complex::new(R::zero(), R::zero());
        for (k, c) in coeff.iter().enumerate() {
            let odd = R::of((2 * k + 1) as f64);
            th1p0 = th1p0 + *c * odd;
            th1ppp0 = th1ppp0 - *c * odd * odd * odd;
        }
        th1p0 = th1p0 * two;
        th1ppp0 = th1ppp0 * two;

        let pi = R::PI();
        let eta1 = -(th1ppp0 / th1p0) * (pi * pi) / (omega1 * R::of(12.0));

        let p1 = omega1 * two;
        let p3 = omega3 * two;
        let area = p1.re * p3.im - p1.im * p3.re;
        let mut lat = Lattice {
            omega1,
            omega3,
            inv_area: area.recip(),
            coeff,
            th1p0,
            consts: LatticeConstants {
                e1: Complex::new(R::zero(), R::zero()),
                e2: Complex::new(R::zero(), R::zero()),
                e3: Complex::new(R::zero(), R::zero()),
                eta1,
                eta2: Complex::new(R::zero(), R::zero()),
                eta3: Complex::new(R::zero(), R::zero()),
            },
            pole_radius: R::of(1e-8) * p1.norm(),
        };

        // Remaining constants come straight from the raw series at the
        // half periods (all inside the series' comfort zone), so the
        // Legendre and e-sum identities stay honest cross-checks.
        let omega2 = omega1 + omega3;
        lat.consts.eta3 = lat.zeta_raw(omega3);
        lat.consts.eta2 = lat.zeta_raw(omega2);
        lat.consts.e1 = lat.wp_raw(omega1);
        lat.consts.e2 = lat.wp_raw(omega2);
        lat.consts.e3 = lat.wp_raw(omega3);

        let legendre = lat.consts.eta1 * omega3 - lat.consts.eta3 * omega1
            - cx::<R>(0.0, std::f64::consts::FRAC_PI_2);
        if legendre.norm() > R::of(1e-7) {
            return Err(Error::InvalidLattice("derived constants failed Legendre check"));
        }
        Ok(lat)
    }

    pub fn omega1(&self) -> C<R> {
        self.omega1
    }

    pub fn omega3(&self) -> C<R> {
        self.omega3
    }

    /// ω₂ = ω₁ + ω₃.
    pub fn omega2(&self) -> C<R> {
        self.omega1 + self.omega3
    }

    /// The torus periods (2ω₁, 2ω₃).
    pub fn periods(&self) -> (C<R>, C<R>) {
        (self.omega1 * R::of(2.0), self.omega3 * R::of(2.0))
    }

    /// Characteristic length |2ω₁| used for relative radii.
    pub fn scale(&self) -> R {
        self.omega1.norm() * R::of(2.0)
    }

    pub fn pole_radius(&self) -> R {
        self.pole_radius
    }

    pub fn constants(&self) -> &LatticeConstants<R> {
        &self.consts
    }

    /// Lattice point 2mω₁ + 2nω₃.
    pub fn point(&self, m: i64, n: i64) -> C<R> {
        self.omega1 * R::of(2.0 * m as f64) + self.omega3 * R::of(2.0 * n as f64)
    }

    /// Quasi-period 2mη₁ + 2nη₃ of ζ for the lattice vector 2mω₁ + 2nω₃.
    pub fn quasi_period(&self, m: i64, n: i64) -> C<R> {
        self.consts.eta1 * R::of(2.0 * m as f64) + self.consts.eta3 * R::of(2.0 * n as f64)
    }

    /// Real coordinates of `x` in the period basis (2ω₁, 2ω₃).
    pub fn coordinates(&self, x: C<R>) -> (R, R) {
        let (p1, p3) = self.periods();
        let a = (x.re * p3.im - x.im * p3.re) * self.inv_area;
        let b = (p1.re * x.im - p1.im * x.re) * self.inv_area;
        (a, b)
    }

    /// Reduce into the fundamental parallelogram centered at 0 with
    /// corners ±ω₁ ± ω₃, so that `x = base + 2mω₁ + 2nω₃`.
    pub fn reduce(&self, x: C<R>) -> Result<Reduction<R>> {
        if !is_finite(x) {
            return Err(Error::NonFinite);
        }
        let (a, b) = self.coordinates(x);
        let m = a.round().to_f64().map(|v| v as i64).unwrap_or(0);
        let n = b.round().to_f64().map(|v| v as i64).unwrap_or(0);
        Ok(Reduction {
            base: x - self.point(m, n),
            m,
            n,
        })
    }

    /// Euclidean distance from `x` to the nearest lattice point.
    pub fn distance_to_lattice(&self, x: C<R>) -> Result<R> {
        let red = self.reduce(x)?;
        let mut best = red.base.norm();
        for dm in -1..=1i64 {
            for dn in -1..=1i64 {
                let d = (red.base - self.point(dm, dn)).norm();
                if d < best {
                    best = d;
                }
            }
        }
        Ok(best)
    }

    fn guard_pole(&self, x: C<R>) -> Result<Reduction<R>> {
        let red = self.reduce(x)?;
        let mut best = red.base.norm();
        for dm in -1..=1i64 {
            for dn in -1..=1i64 {
                let d = (red.base - self.point(dm, dn)).norm();
                if d < best {
                    best = d;
                }
            }
        }
        if best < self.pole_radius {
            return Err(Error::PoleAtLatticePoint);
        }
        Ok(red)
    }

    /// θ₁ and its first three derivatives at `v` (argument already scaled).
    fn theta(&self, v: C<R>) -> ThetaJet<R> {
        let two = R::of(2.0);
        // sin/cos((2n+1)v) by recurrence in steps of 2v.
        let (s2, c2) = {
            let w = v * two;
            (w.sin(), w.cos())
        };
        let mut sk = v.sin();
        let mut ck = v.cos();
        let mut s = Complex::new(R::zero(), R::zero());
        let mut d1 = s;
        let mut d2 = s;
        let mut d3 = s;
        for (k, c) in self.coeff.iter().enumerate() {
            let odd = R::of((2 * k + 1) as f64);
            let odd2 = odd * odd;
            s = s + *c * sk;
            d1 = d1 + *c * ck * odd;
            d2 = d2 - *c * sk * odd2;
            d3 = d3 - *c * ck * odd2 * odd;
            let ns = sk * c2 + ck * s2;
            let nc = ck * c2 - sk * s2;
            sk = ns;
            ck = nc;
        }
        ThetaJet {
            s: s * two,
            d1: d1 * two,
            d2: d2 * two,
            d3: d3 * two,
        }
    }

    #[inline]
    fn vscale(&self) -> C<R> {
        // pi / (2 omega1)
        Complex::new(R::PI(), R::zero()) / (self.omega1 * R::of(2.0))
    }

    /// ζ by direct series, no argument reduction. Intended for arguments
    /// within (a small multiple of) the fundamental parallelogram.
    fn zeta_raw(&self, x: C<R>) -> C<R> {
        let k = self.vscale();
        let t = self.theta(k * x);
        self.consts.eta1 * x / self.omega1 + k * (t.d1 / t.s)
    }

    fn wp_raw(&self, x: C<R>) -> C<R> {
        let k = self.vscale();
        let t = self.theta(k * x);
        let f = t.d1 / t.s;
        -(self.consts.eta1 / self.omega1) - k * k * (t.d2 / t.s - f * f)
    }

    fn wp_prime_raw(&self, x: C<R>) -> C<R> {
        let k = self.vscale();
        let t = self.theta(k * x);
        let f = t.d1 / t.s;
        let g = t.d2 / t.s;
        -(k * k * k) * (t.d3 / t.s - f * g * R::of(3.0) + f * f * f * R::of(2.0))
    }

    fn sigma_raw(&self, x: C<R>) -> C<R> {
        let k = self.vscale();
        let t = self.theta(k * x);
        let quad = (self.consts.eta1 * x * x / (self.omega1 * R::of(2.0))).exp();
        (self.omega1 * R::of(2.0) / R::PI()) * quad * (t.s / self.th1p0)
    }

    /// Weierstrass ℘.
    pub fn wp(&self, x: C<R>) -> Result<C<R>> {
        let red = self.guard_pole(x)?;
        Ok(self.wp_raw(red.base))
    }

    /// Weierstrass ℘′.
    pub fn wp_prime(&self, x: C<R>) -> Result<C<R>> {
        let red = self.guard_pole(x)?;
        Ok(self.wp_prime_raw(red.base))
    }

    /// Weierstrass ζ (quasi-periodic: ζ(x + 2ω_j) = ζ(x) + 2η_j).
    pub fn zeta(&self, x: C<R>) -> Result<C<R>> {
        let red = self.guard_pole(x)?;
        Ok(self.zeta_raw(red.base) + self.quasi_period(red.m, red.n))
    }

    /// Weierstrass σ (entire; zero exactly on the lattice).
    pub fn sigma(&self, x: C<R>) -> Result<C<R>> {
        let red = self.reduce(x)?;
        let base = self.sigma_raw(red.base);
        let parity = red.m + red.n + red.m * red.n;
        let sign = if parity % 2 == 0 { R::one() } else { -R::one() };
        let eta = self.quasi_period(red.m, red.n);
        let shift = self.omega1 * R::of(red.m as f64) + self.omega3 * R::of(red.n as f64);
        Ok(base * sign * (eta * (red.base + shift)).exp())
    }
}

#[cfg(test)]
pub(crate) mod tests;
