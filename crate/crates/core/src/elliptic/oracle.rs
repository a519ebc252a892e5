//! Slow lattice-sum reference implementations of ℘, ℘′, ζ.
//!
//! These sum the defining series over the lattice in Eisenstein order:
//! each row {2mω₁ + 2nω₃ : m ∈ ℤ} is summed in closed form
//! (Σ_m 1/(z−m) = π cot πz and its derivatives), and the row index n is
//! truncated once the symmetric row pairs fall below a geometric tail
//! bound. The code shares nothing with the theta-series path in the
//! parent module; it exists purely as a cross-check oracle for tests.
//!
//! Valid for arguments within a few fundamental domains of the origin;
//! the row pairs decay like exp(−2π n Im(ω₃/ω₁)).

use num_complex::Complex;

use crate::scalar::{Real, C};

fn csc2<R: Real>(z: C<R>) -> C<R> {
    let s = z.sin();
    (s * s).inv()
}

fn cot<R: Real>(z: C<R>) -> C<R> {
    z.cos() / z.sin()
}

/// Number of row pairs needed for a tail below ~1e-20 at unit scale.
fn row_count<R: Real>(omega1: C<R>, omega3: C<R>) -> usize {
    let im_tau = (omega3 / omega1).im.to_f64().unwrap_or(1.0);
    let n = (22.0 * std::f64::consts::LN_10 / (2.0 * std::f64::consts::PI * im_tau)).ceil();
    (n as usize).max(3) + 3
}

/// ℘ by Eisenstein-ordered lattice summation.
pub fn wp_lattice_sum<R: Real>(omega1: C<R>, omega3: C<R>, x: C<R>) -> C<R> {
    let k = Complex::new(R::PI(), R::zero()) / (omega1 * R::of(2.0));
    let tau = omega3 / omega1;
    let u = k * x;
    let third: C<R> = Complex::new(R::of(1.0 / 3.0), R::zero());
    let mut acc = csc2(u) - third;
    let pi_tau = Complex::new(R::PI(), R::zero()) * tau;
    for n in 1..=row_count(omega1, omega3) {
        let shift = pi_tau * R::of(n as f64);
        acc = acc + csc2(u - shift) + csc2(u + shift) - csc2(shift) * R::of(2.0);
    }
    k * k * acc
}

/// ℘′ by Eisenstein-ordered lattice summation (absolutely convergent rows).
pub fn wp_prime_lattice_sum<R: Real>(omega1: C<R>, omega3: C<R>, x: C<R>) -> C<R> {
    let k = Complex::new(R::PI(), R::zero()) / (omega1 * R::of(2.0));
    let tau = omega3 / omega1;
    let u = k * x;
    let mut acc = cot(u) * csc2(u);
    let pi_tau = Complex::new(R::PI(), R::zero()) * tau;
    for n in 1..=row_count(omega1, omega3) {
        let shift = pi_tau * R::of(n as f64);
        let a = u - shift;
        let b = u + shift;
        acc = acc + cot(a) * csc2(a) + cot(b) * csc2(b);
    }
    // Sum_m 1/(z-m)^3 = pi^3 cot(pi z) csc^2(pi z); wp' = -2 Sum_w (x-w)^{-3}.
    k * k * k * acc * R::of(-2.0)
}

/// ζ by Eisenstein-ordered lattice summation.
pub fn zeta_lattice_sum<R: Real>(omega1: C<R>, omega3: C<R>, x: C<R>) -> C<R> {
    let k = Complex::new(R::PI(), R::zero()) / (omega1 * R::of(2.0));
    let tau = omega3 / omega1;
    let u = k * x;
    // n = 0 row plus its regularizers.
    let mut acc = cot(u);
    let mut reg = x * k * k / R::of(3.0);
    let pi_tau = Complex::new(R::PI(), R::zero()) * tau;
    for n in 1..=row_count(omega1, omega3) {
        let shift = pi_tau * R::of(n as f64);
        acc = acc + cot(u - shift) + cot(u + shift);
        reg = reg + x * k * k * csc2(shift) * R::of(2.0);
    }
    k * acc + reg
}
