//! Dense symmetric linear algebra over the system LAPACK (reference netlib,
//! single-threaded and therefore bit-reproducible run to run).

use crate::error::{Error, Result};
use std::os::raw::c_char;

extern "C" {
    fn dsyevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn dpotrf_(
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        info: *mut i32,
    );
    fn dpotrs_(
        uplo: *const c_char,
        n: *const i32,
        nrhs: *const i32,
        a: *const f64,
        lda: *const i32,
        b: *mut f64,
        ldb: *const i32,
        info: *mut i32,
    );
}

/// Full eigendecomposition of a symmetric n x n matrix (any consistent
/// row/column-major layout thanks to symmetry).
///
/// Returns eigenvalues ascending and eigenvectors with component i of vector
/// k at `vecs[k*n + i]`, each vector unit in the Euclidean norm.
pub fn eigh(matrix: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if matrix.len() != n * n {
        return Err(Error::shape("matrix buffer does not match dimension"));
    }
    let mut a = matrix.to_vec();
    let mut w = vec![0.0f64; n];
    let nn = n as i32;
    let (jobz, uplo) = (b'V' as c_char, b'L' as c_char);
    let mut info = 0i32;
    unsafe {
        let m1 = -1i32;
        let (mut wkopt, mut iwkopt) = (0.0f64, 0i32);
        dsyevd_(
            &jobz, &uplo, &nn, a.as_mut_ptr(), &nn, w.as_mut_ptr(), &mut wkopt, &m1, &mut iwkopt,
            &m1, &mut info,
        );
        if info != 0 {
            return Err(Error::numeric(format!("dsyevd workspace query failed: info={info}")));
        }
        let lwork = wkopt as i32;
        let liwork = iwkopt;
        let mut work = vec![0.0f64; lwork.max(1) as usize];
        let mut iwork = vec![0i32; liwork.max(1) as usize];
        dsyevd_(
            &jobz, &uplo, &nn, a.as_mut_ptr(), &nn, w.as_mut_ptr(), work.as_mut_ptr(), &lwork,
            iwork.as_mut_ptr(), &liwork, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::numeric(format!(
            "symmetric eigensolver did not converge: info={info}"
        )));
    }
    Ok((w, a))
}

/// Cholesky factorization of a symmetric positive definite matrix, reusable
/// for many right-hand sides.
pub struct CholeskyFactor {
    n: usize,
    factor: Vec<f64>,
}

impl CholeskyFactor {
    pub fn new(matrix: &[f64], n: usize) -> Result<Self> {
        if matrix.len() != n * n {
            return Err(Error::shape("matrix buffer does not match dimension"));
        }
        let mut a = matrix.to_vec();
        let nn = n as i32;
        let uplo = b'L' as c_char;
        let mut info = 0i32;
        unsafe {
            dpotrf_(&uplo, &nn, a.as_mut_ptr(), &nn, &mut info);
        }
        if info != 0 {
            return Err(Error::numeric(format!(
                "Cholesky factorization failed: info={info} (matrix not SPD?)"
            )));
        }
        Ok(CholeskyFactor { n, factor: a })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(Error::shape("rhs length does not match factor dimension"));
        }
        let mut b = rhs.to_vec();
        let nn = self.n as i32;
        let one = 1i32;
        let uplo = b'L' as c_char;
        let mut info = 0i32;
        unsafe {
            dpotrs_(
                &uplo,
                &nn,
                &one,
                self.factor.as_ptr(),
                &nn,
                b.as_mut_ptr(),
                &nn,
                &mut info,
            );
        }
        if info != 0 {
            return Err(Error::numeric(format!("Cholesky solve failed: info={info}")));
        }
        Ok(b)
    }
}

/// y = A x for a dense row-major symmetric matrix.
pub fn matvec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; n];
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        let mut acc = 0.0;
        for (aij, xj) in row.iter().zip(x.iter()) {
            acc += aij * xj;
        }
        y[i] = acc;
    }
    y
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_small_known() {
        // [[2,1],[1,2]] has eigenvalues 1, 3
        let a = vec![2.0, 1.0, 1.0, 2.0];
        let (w, v) = eigh(&a, 2).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 3.0).abs() < 1e-12);
        // residual check
        for k in 0..2 {
            let vk = &v[k * 2..(k + 1) * 2];
            let av = matvec(&a, 2, vk);
            for i in 0..2 {
                assert!((av[i] - w[k] * vk[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cholesky_roundtrip() {
        let a = vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.25, 0.5, 0.25, 2.0];
        let f = CholeskyFactor::new(&a, 3).unwrap();
        let x = vec![1.0, -2.0, 0.5];
        let b = matvec(&a, 3, &x);
        let xs = f.solve(&b).unwrap();
        for i in 0..3 {
            assert!((xs[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0]; // eigenvalues 3, -1
        assert!(CholeskyFactor::new(&a, 2).is_err());
    }
}
