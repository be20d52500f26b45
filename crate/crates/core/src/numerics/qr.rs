//! Householder QR with a positive real diagonal on `R`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{invalid, Error, Result};

/// Columns whose residual norm falls below this are treated as dependent.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Thin factors `A = Q R` with `Q` of shape `n x m` (orthonormal columns) and
/// `R` of shape `m x m`, upper triangular with strictly positive real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QrFactors {
    pub q: ComplexMatrix,
    pub r: ComplexMatrix,
}

/// Factorizes a tall matrix `a` (`rows >= cols`) by Householder reflections,
/// then rotates the phase of each diagonal entry of `R` onto the positive real
/// axis (row `i` of `R` times `conj(d_i)`, column `i` of `Q` times `d_i`).
pub fn qr_positive_diag(a: &ComplexMatrix) -> Result<QrFactors> {
    let (n, m) = a.shape();
    if m == 0 || n < m {
        return Err(invalid(format!("qr needs rows >= cols >= 1, got {n}x{m}")));
    }

    let mut work = a.clone();
    let mut reflectors: Vec<(Vec<Complex64>, f64)> = Vec::with_capacity(m);

    for k in 0..m {
        let mut v: Vec<Complex64> = (k..n).map(|r| work.get(r, k)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < RANK_TOLERANCE {
            return Err(Error::RankDeficient { col: k, value: norm });
        }
        let head = v[0];
        let phase = if head.norm() > 0.0 { head / head.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();

        for c in k..m {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * work.get(k + i, c)).sum();
            let f = s * (2.0 / vnorm_sq);
            for (i, vi) in v.iter().enumerate() {
                let cur = work.get(k + i, c);
                work.set(k + i, c, cur - f * vi);
            }
        }
        work.set(k, k, alpha);
        for r in k + 1..n {
            work.set(r, k, Complex64::new(0.0, 0.0));
        }
        reflectors.push((v, vnorm_sq));
    }

    // Q = H_0 H_1 ... H_{m-1} applied to the first m columns of the identity.
    let mut q = ComplexMatrix::zeros(n, m);
    for j in 0..m {
        q.set(j, j, Complex64::new(1.0, 0.0));
    }
    for (k, (v, vnorm_sq)) in reflectors.iter().enumerate().rev() {
        for c in 0..m {
            let s: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * q.get(k + i, c)).sum();
            let f = s * (2.0 / vnorm_sq);
            for (i, vi) in v.iter().enumerate() {
                let cur = q.get(k + i, c);
                q.set(k + i, c, cur - f * vi);
            }
        }
    }

    let mut r = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            r.set(i, j, work.get(i, j));
        }
    }

    for i in 0..m {
        let rii = r.get(i, i);
        let mag = rii.norm();
        let d = rii / mag;
        for j in i + 1..m {
            let cur = r.get(i, j);
            r.set(i, j, cur * d.conj());
        }
        r.set(i, i, Complex64::new(mag, 0.0));
        for row in 0..n {
            let cur = q.get(row, i);
            q.set(row, i, cur * d);
        }
    }

    Ok(QrFactors { q, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_complex_gaussian, SeededRng};

    fn random_matrix(seed: u64, n: usize, m: usize) -> ComplexMatrix {
        let mut rng = SeededRng::new(seed, 0);
        let v = sample_complex_gaussian(&mut rng, n * m, 1.0 / n as f64).unwrap();
        ComplexMatrix::new(n, m, v.into_inner()).unwrap()
    }

    fn check(a: &ComplexMatrix) {
        let QrFactors { q, r } = qr_positive_diag(a).unwrap();
        let rel = a.sub(&q.matmul(&r).unwrap()).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(rel < 1e-10, "reconstruction error {rel}");
        let qhq = q.conj_transpose().matmul(&q).unwrap();
        let orth = qhq.sub(&ComplexMatrix::identity(a.cols())).unwrap().frobenius_norm();
        assert!(orth < 1e-10, "orthogonality error {orth}");
        assert!(r.is_upper_triangular(0.0));
        for i in 0..r.rows() {
            assert!(r.get(i, i).re > 0.0);
            assert!(r.get(i, i).im.abs() < 1e-12);
        }
    }

    #[test]
    fn identity_is_fixed_point() {
        let a = ComplexMatrix::identity(3);
        let f = qr_positive_diag(&a).unwrap();
        assert_eq!(f.q, a);
        assert_eq!(f.r, a);
    }

    #[test]
    fn column_three_four() {
        let a = ComplexMatrix::from_real(2, 1, &[3.0, 4.0]).unwrap();
        let f = qr_positive_diag(&a).unwrap();
        assert!((f.r.get(0, 0).re - 5.0).abs() < 1e-14);
        assert!((f.q.get(0, 0).re - 0.6).abs() < 1e-14);
        assert!((f.q.get(1, 0).re - 0.8).abs() < 1e-14);
    }

    #[test]
    fn seeded_eight_by_four() {
        check(&random_matrix(11, 8, 4));
    }

    #[test]
    fn reconstruction_over_many_shapes() {
        let mut seed = 0;
        for &(n, m) in &[(4, 2), (8, 4), (16, 8)] {
            for _ in 0..500 {
                seed += 1;
                check(&random_matrix(seed, n, m));
            }
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let a = ComplexMatrix::from_real(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]).unwrap();
        match qr_positive_diag(&a) {
            Err(Error::RankDeficient { col, .. }) => assert_eq!(col, 1),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        let wide = ComplexMatrix::zeros(2, 3);
        assert!(matches!(qr_positive_diag(&wide), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn complex_phases_are_normalized() {
        let i = Complex64::new(0.0, 1.0);
        let a = ComplexMatrix::new(2, 2, vec![i, Complex64::new(1.0, 1.0), Complex64::new(-1.0, 0.0), i]).unwrap();
        check(&a);
    }
}
