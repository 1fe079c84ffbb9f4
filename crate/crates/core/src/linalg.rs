//! Dense eigenvalue plumbing.
//!
//! Hessenberg reduction and shifted QR come from `faer` (built without its
//! thread pool, so results are deterministic for a fixed input). This module
//! adds diagonal balancing in front of it and a few structured solves used by
//! the generalized pencils.

use faer::linalg::solvers::{Eigen, Solve};
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

const RADIX: f64 = 2.0;

/// Balanced copy of `a` and the diagonal scaling `d` with
/// `balanced = D⁻¹ A D`. Powers of two only, so the transform is exact.
pub fn balance(a: &Mat<f64>) -> (Mat<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut b = a.clone();
    let mut d = vec![1.0; n];
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += b[(j, i)].abs();
                    r += b[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    b[(i, j)] *= inv;
                }
                for j in 0..n {
                    b[(j, i)] *= f;
                }
                d[i] *= f;
            }
        }
        if done {
            break;
        }
    }
    (b, d)
}

fn check_square_finite(a: &Mat<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::LengthMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            if !a[(i, j)].is_finite() {
                return Err(Error::NonFinite("matrix"));
            }
        }
    }
    Ok(())
}

/// All eigenvalues of a real square matrix (balanced, then Hessenberg + QR).
pub fn dense_eigs(a: &Mat<f64>) -> Result<Vec<Complex64>> {
    check_square_finite(a)?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let (b, _) = balance(a);
    b.eigenvalues().map_err(|_| Error::NoConvergence(a.nrows()))
}

/// Eigenvalues without balancing.
pub fn dense_eigs_unbalanced(a: &Mat<f64>) -> Result<Vec<Complex64>> {
    check_square_finite(a)?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    a.eigenvalues().map_err(|_| Error::NoConvergence(a.nrows()))
}

/// Eigenvalues and right eigenvectors (columns, unit 2-norm).
pub fn dense_eig_vectors(a: &Mat<f64>) -> Result<(Vec<Complex64>, Mat<Complex64>)> {
    check_square_finite(a)?;
    let n = a.nrows();
    let (b, d) = balance(a);
    let evd = Eigen::new_from_real(b.as_ref()).map_err(|_| Error::NoConvergence(n))?;
    let values: Vec<Complex64> = (0..n).map(|i| evd.S()[i]).collect();
    let u = evd.U();
    let mut vecs = Mat::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut norm = 0.0;
        for i in 0..n {
            let v = u[(i, j)] * d[i];
            vecs[(i, j)] = v;
            norm += v.norm_sqr();
        }
        let norm = norm.sqrt();
        if norm > 0.0 {
            for i in 0..n {
                vecs[(i, j)] /= norm;
            }
        }
    }
    Ok((values, vecs))
}

/// Solve `B X = A` for a diagonal `B`.
pub fn solve_diagonal(b: &Mat<f64>, a: &Mat<f64>, tag: &'static str) -> Result<Mat<f64>> {
    let n = b.nrows();
    let scale = (0..n).map(|i| b[(i, i)].abs()).fold(0.0, f64::max);
    let mut x = a.clone();
    for i in 0..n {
        let p = b[(i, i)];
        if p.abs() <= f64::EPSILON * scale || scale == 0.0 {
            return Err(Error::SingularPencil(tag));
        }
        for j in 0..a.ncols() {
            x[(i, j)] /= p;
        }
    }
    Ok(x)
}

/// Solve `B X = A` for a tridiagonal `B` (Thomas elimination).
pub fn solve_tridiagonal(b: &Mat<f64>, a: &Mat<f64>, tag: &'static str) -> Result<Mat<f64>> {
    let n = b.nrows();
    if n == 0 {
        return Ok(a.clone());
    }
    let scale = (0..n).map(|i| b[(i, i)].abs()).fold(0.0, f64::max);
    let mut diag: Vec<f64> = (0..n).map(|i| b[(i, i)]).collect();
    let lower: Vec<f64> = (1..n).map(|i| b[(i, i - 1)]).collect();
    let upper: Vec<f64> = (1..n).map(|i| b[(i - 1, i)]).collect();
    let mut x = a.clone();
    let cols = a.ncols();
    for i in 1..n {
        if diag[i - 1].abs() <= f64::EPSILON * scale {
            return Err(Error::SingularPencil(tag));
        }
        let w = lower[i - 1] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        for j in 0..cols {
            let prev = x[(i - 1, j)];
            x[(i, j)] -= w * prev;
        }
    }
    if diag[n - 1].abs() <= f64::EPSILON * scale {
        return Err(Error::SingularPencil(tag));
    }
    for j in 0..cols {
        x[(n - 1, j)] /= diag[n - 1];
        for i in (0..n - 1).rev() {
            let next = x[(i + 1, j)];
            x[(i, j)] = (x[(i, j)] - upper[i] * next) / diag[i];
        }
    }
    Ok(x)
}

/// Solve `B X = A` with partial-pivoting LU.
pub fn solve_general(b: &Mat<f64>, a: &Mat<f64>, tag: &'static str) -> Result<Mat<f64>> {
    let lu = b.partial_piv_lu();
    let u = lu.U();
    let n = u.nrows();
    let scale = (0..n).map(|i| u[(i, i)].abs()).fold(0.0, f64::max);
    if (0..n).any(|i| u[(i, i)].abs() <= f64::EPSILON * scale) || scale == 0.0 {
        return Err(Error::SingularPencil(tag));
    }
    let x = lu.solve(a);
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            if !x[(i, j)].is_finite() {
                return Err(Error::SingularPencil(tag));
            }
        }
    }
    Ok(x)
}

/// Sort ascending by real part, ties by imaginary part.
pub fn sort_by_real_then_imag(values: &mut [Complex64]) {
    // partial_cmp first so that -0.0 and 0.0 tie
    let cmp = |x: f64, y: f64| x.partial_cmp(&y).unwrap_or_else(|| x.total_cmp(&y));
    values.sort_by(|a, b| cmp(a.re, b.re).then(cmp(a.im, b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_has_imaginary_pair() {
        let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => 1.0,
            (1, 0) => -1.0,
            _ => 0.0,
        });
        let mut ev = dense_eigs(&a).unwrap();
        sort_by_real_then_imag(&mut ev);
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let a = Mat::from_fn(1, 1, |_, _| -0.25);
        assert_eq!(dense_eigs(&a).unwrap(), vec![Complex64::new(-0.25, 0.0)]);
    }

    #[test]
    fn balancing_is_a_similarity() {
        // S U S⁻¹ with U upper triangular: eigenvalues 1..4, badly scaled entries
        let s = |i: usize| 10f64.powi(3 * i as i32);
        let a = Mat::from_fn(4, 4, |i, j| {
            let u = if i == j {
                (i + 1) as f64
            } else if i < j {
                1.0 + (i + j) as f64
            } else {
                0.0
            };
            s(i) * u / s(j)
        });
        let (b, d) = balance(&a);
        for i in 0..4 {
            for j in 0..4 {
                let back = b[(i, j)] * d[i] / d[j];
                assert!((back - a[(i, j)]).abs() <= 1e-15 * a[(i, j)].abs());
            }
        }
        let mut ev = dense_eigs(&a).unwrap();
        sort_by_real_then_imag(&mut ev);
        for (k, z) in ev.iter().enumerate() {
            assert!((z - Complex64::new((k + 1) as f64, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn signed_zero_ties() {
        let mut v = vec![Complex64::new(0.0, 1.0), Complex64::new(-0.0, -1.0)];
        sort_by_real_then_imag(&mut v);
        assert_eq!(v[0].im, -1.0);
    }

    #[test]
    fn eigenvectors_satisfy_relation() {
        let a = Mat::from_fn(5, 5, |i, j| {
            if j + 1 == i {
                1.0
            } else if i == 0 {
                -(j as f64 + 1.0)
            } else {
                0.0
            }
        });
        let (vals, vecs) = dense_eig_vectors(&a).unwrap();
        for (k, lam) in vals.iter().enumerate() {
            for i in 0..5 {
                let av: Complex64 = (0..5).map(|j| vecs[(j, k)] * a[(i, j)]).sum();
                assert!((av - vecs[(i, k)] * lam).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_non_finite() {
        let a = Mat::from_fn(2, 2, |i, _| if i == 0 { f64::NAN } else { 1.0 });
        assert_eq!(dense_eigs(&a), Err(Error::NonFinite("matrix")));
    }

    #[test]
    fn structured_solves_agree_with_lu() {
        let n = 6;
        let b = Mat::from_fn(n, n, |i, j| match i as isize - j as isize {
            0 => 4.0 + i as f64,
            1 => 1.0,
            -1 => -0.5,
            _ => 0.0,
        });
        let a = Mat::from_fn(n, 3, |i, j| (i * 3 + j) as f64 - 2.0);
        let x1 = solve_tridiagonal(&b, &a, "t").unwrap();
        let x2 = solve_general(&b, &a, "t").unwrap();
        for i in 0..n {
            for j in 0..3 {
                assert!((x1[(i, j)] - x2[(i, j)]).abs() < 1e-13);
            }
        }
        let singular = Mat::<f64>::zeros(n, n);
        assert!(solve_general(&singular, &a, "t").is_err());
        assert!(solve_diagonal(&singular, &a, "t").is_err());
    }
}
