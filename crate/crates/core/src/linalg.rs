//! Small dense complex linear algebra: the matrices here are at most a
//! handful of rows, so everything is hand-rolled and generic over the
//! scalar type.

use num_complex::Complex;

use crate::scalar::{Real, C};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<R: Real> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C<R>>,
}

impl<R: Real> CMat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex::new(R::zero(), R::zero()); rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> C<R> {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C<R>) {
        self.data[r * self.cols + c] = v;
    }

    fn col_dot(&self, i: usize, j: usize) -> C<R> {
        let mut acc = Complex::new(R::zero(), R::zero());
        for r in 0..self.rows {
            acc = acc + self.at(r, i).conj() * self.at(r, j);
        }
        acc
    }

    /// Singular value decomposition by one-sided Jacobi rotations.
    ///
    /// Returns singular values sorted descending and the matrix of right
    /// singular vectors (columns). Working on the columns directly, not
    /// on AᴴA, keeps small singular values accurate to ~eps·σ_max.
    pub fn svd(&self) -> Svd<R> {
        let mut a = self.clone();
        let n = a.cols;
        let mut v = CMat::zeros(n, n);
        for k in 0..n {
            v.set(k, k, Complex::new(R::one(), R::zero()));
        }
        let eps = R::epsilon() * R::of(0.5);
        for _sweep in 0..60 {
            let mut rotated = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    let aii = a.col_dot(i, i).re;
                    let ajj = a.col_dot(j, j).re;
                    let g = a.col_dot(i, j);
                    let gn = g.norm();
                    if gn <= eps * (aii * ajj).sqrt() || gn == R::zero() {
                        continue;
                    }
                    rotated = true;
                    let d = aii - ajj;
                    let t = if d == R::zero() {
                        R::one()
                    } else {
                        let sgn = if d > R::zero() { R::one() } else { -R::one() };
                        -sgn * (gn + gn) / (d.abs() + (d * d + R::of(4.0) * gn * gn).sqrt())
                    };
                    let c = (R::one() + t * t).sqrt().recip();
                    let s = t * c;
                    let phase = g / gn;
                    for r in 0..a.rows {
                        let x = a.at(r, i);
                        let y = a.at(r, j);
                        a.set(r, i, x * c - y * phase.conj() * s);
                        a.set(r, j, x * phase * s + y * c);
                    }
                    for r in 0..n {
                        let x = v.at(r, i);
                        let y = v.at(r, j);
                        v.set(r, i, x * c - y * phase.conj() * s);
                        v.set(r, j, x * phase * s + y * c);
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut pairs: Vec<(R, usize)> = (0..n)
            .map(|k| (a.col_dot(k, k).re.max(R::zero()).sqrt(), k))
            .collect();
        pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
        let values: Vec<R> = pairs.iter().map(|p| p.0).collect();
        let mut right = CMat::zeros(n, n);
        for (new_col, (_, old_col)) in pairs.iter().enumerate() {
            for r in 0..n {
                right.set(r, new_col, v.at(r, *old_col));
            }
        }
        Svd {
            values,
            right_vectors: right,
        }
    }

    /// σ_min / max(σ_max, floor). The floor keeps the ratio meaningful
    /// when the whole matrix degenerates to numerical noise.
    pub fn singular_ratio(&self, floor: R) -> R {
        let svd = self.svd();
        let smax = svd.values.first().copied().unwrap_or(R::zero());
        let smin = svd.values.last().copied().unwrap_or(R::zero());
        smin / smax.max(floor)
    }
}

/// Result of [`CMat::svd`].
#[derive(Debug, Clone)]
pub struct Svd<R: Real> {
    /// Singular values, descending.
    pub values: Vec<R>,
    /// Right singular vectors as columns, in the same order.
    pub right_vectors: CMat<R>,
}

impl<R: Real> Svd<R> {
    /// Number of singular values below `ratio * sigma_max(, floor)`.
    pub fn kernel_dimension(&self, ratio: R, floor: R) -> usize {
        let smax = self.values.first().copied().unwrap_or(R::zero()).max(floor);
        self.values.iter().filter(|s| **s < ratio * smax).count()
    }
}

/// Solve the 2×2 complex system [[a11,a12],[a21,a22]] x = (b1,b2).
pub fn solve2<R: Real>(
    a11: C<R>,
    a12: C<R>,
    a21: C<R>,
    a22: C<R>,
    b1: C<R>,
    b2: C<R>,
) -> (C<R>, C<R>) {
    let det = a11 * a22 - a12 * a21;
    ((b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det)
}

/// Solve a small real linear system in place (partial pivoting).
pub fn solve_real<R: Real>(a: &mut [Vec<R>], b: &mut [R]) -> Option<Vec<R>> {
    let n = b.len();
    for k in 0..n {
        let mut pivot = k;
        for r in (k + 1)..n {
            if a[r][k].abs() > a[pivot][k].abs() {
                pivot = r;
            }
        }
        if a[pivot][k].abs() < R::of(1e-300) {
            return None;
        }
        a.swap(k, pivot);
        b.swap(k, pivot);
        for r in (k + 1)..n {
            let f = a[r][k] / a[k][k];
            for c in k..n {
                let v = a[k][c] * f;
                a[r][c] = a[r][c] - v;
            }
            let v = b[k] * f;
            b[r] = b[r] - v;
        }
    }
    let mut x = vec![R::zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for c in (k + 1)..n {
            acc = acc - a[k][c] * x[c];
        }
        x[k] = acc / a[k][k];
    }
    Some(x)
}

/// Least-squares solve of an overdetermined real system via the normal
/// equations; adequate for the well-scaled 6×4 period systems here.
pub fn lstsq_real<R: Real>(a: &[Vec<R>], b: &[R]) -> Option<Vec<R>> {
    let rows = a.len();
    let cols = a[0].len();
    let mut ata = vec![vec![R::zero(); cols]; cols];
    let mut atb = vec![R::zero(); cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut acc = R::zero();
            for r in 0..rows {
                acc += a[r][i] * a[r][j];
            }
            ata[i][j] = acc;
        }
        let mut acc = R::zero();
        for r in 0..rows {
            acc += a[r][i] * b[r];
        }
        atb[i] = acc;
    }
    solve_real(&mut ata, &mut atb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn svd_of_diagonal() {
        let mut m = CMat::<f64>::zeros(3, 3);
        m.set(0, 0, cx(3.0, 0.0));
        m.set(1, 1, cx(0.0, -2.0));
        m.set(2, 2, cx(1e-9, 0.0));
        let svd = m.svd();
        assert!((svd.values[0] - 3.0).abs() < 1e-14);
        assert!((svd.values[1] - 2.0).abs() < 1e-14);
        assert!((svd.values[2] - 1e-9).abs() < 1e-22);
    }

    #[test]
    fn svd_matches_two_by_two_formula() {
        // Singular values of [[a,b],[c,d]] from the exact closed form.
        let m2 = |a: f64, b: f64, c: f64, d: f64| {
            let mut m = CMat::<f64>::zeros(2, 2);
            m.set(0, 0, cx(a, 0.0));
            m.set(0, 1, cx(b, 0.0));
            m.set(1, 0, cx(c, 0.0));
            m.set(1, 1, cx(d, 0.0));
            let s = m.svd().values;
            let q1 = a * a + b * b + c * c + d * d;
            let q2 = ((a * a + b * b - c * c - d * d).powi(2)
                + 4.0 * (a * c + b * d).powi(2))
            .sqrt();
            let hi = ((q1 + q2) / 2.0).sqrt();
            // sigma_1 * sigma_2 = |det|; avoids cancellation for tiny sigma_2.
            let lo = (a * d - b * c).abs() / hi;
            assert!((s[0] - hi).abs() < 1e-12 * hi.max(1.0), "{s:?} vs ({hi},{lo})");
            assert!((s[1] - lo).abs() < 1e-12 * hi.max(1.0), "{s:?} vs ({hi},{lo})");
        };
        m2(1.0, 2.0, 3.0, 4.0);
        m2(1.0, 1.0, 1.0, 1.0 + 1e-9);
        m2(0.0, 5.0, 0.0, 0.0);
    }

    #[test]
    fn rank_one_complex_matrix_has_tiny_second_value() {
        let u = [cx::<f64>(1.0, 2.0), cx(0.5, -1.0), cx(-0.3, 0.4)];
        let v = [cx::<f64>(2.0, -1.0), cx(0.0, 3.0)];
        let mut m = CMat::<f64>::zeros(3, 2);
        for r in 0..3 {
            for c in 0..2 {
                m.set(r, c, u[r] * v[c]);
            }
        }
        let svd = m.svd();
        assert!(svd.values[1] < 1e-14 * svd.values[0]);
        assert_eq!(svd.kernel_dimension(1e-7, 0.0), 1);
    }

    #[test]
    fn kernel_vector_annihilates_matrix() {
        let mut m = CMat::<f64>::zeros(2, 2);
        m.set(0, 0, cx(1.0, 0.0));
        m.set(0, 1, cx(2.0, 1.0));
        m.set(1, 0, cx(2.0, 0.0));
        m.set(1, 1, cx(4.0, 2.0));
        let svd = m.svd();
        let k = 1; // smallest singular value column
        let x = [svd.right_vectors.at(0, k), svd.right_vectors.at(1, k)];
        for r in 0..2 {
            let y = m.at(r, 0) * x[0] + m.at(r, 1) * x[1];
            assert!(y.norm() < 1e-14);
        }
    }

    #[test]
    fn lstsq_recovers_exact_solution() {
        let a = vec![
            vec![1.0, 2.0],
            vec![3.0, -1.0],
            vec![0.5, 0.5],
        ];
        let x_true = [2.0, -1.0];
        let b: Vec<f64> = a.iter().map(|r| r[0] * x_true[0] + r[1] * x_true[1]).collect();
        let x = lstsq_real(&a, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] + 1.0).abs() < 1e-12);
    }
}
