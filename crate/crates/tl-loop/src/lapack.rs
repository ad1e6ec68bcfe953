//! Minimal binding to LAPACK's dgeev for dense nonsymmetric eigenvalues.

use std::os::raw::c_char;

use crate::error::{Error, Result};

extern "C" {
    fn dgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        wr: *mut f64,
        wi: *mut f64,
        vl: *mut f64,
        ldvl: *const i32,
        vr: *mut f64,
        ldvr: *const i32,
        work: *mut f64,
        lwork: *const i32,
        info: *mut i32,
    );
}

/// Eigenvalues of a dense n x n matrix given in row-major order.
/// Returns (real, imaginary) parts, unsorted.
pub fn eigenvalues(n: usize, row_major: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(row_major.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    // dgeev expects column-major; transposing is equivalent to passing A^T,
    // which has the same eigenvalues.
    let mut a = row_major.to_vec();
    let nn = n as i32;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut info = 0i32;
    let no = b"N\0".as_ptr() as *const c_char;
    let one = 1i32;

    let mut query = [0.0f64];
    let neg = -1i32;
    unsafe {
        dgeev_(
            no,
            no,
            &nn,
            a.as_mut_ptr(),
            &nn,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            std::ptr::null_mut(),
            &one,
            query.as_mut_ptr(),
            &neg,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::EigenSolver(info));
    }
    let lwork = query[0] as i32;
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    unsafe {
        dgeev_(
            no,
            no,
            &nn,
            a.as_mut_ptr(),
            &nn,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            std::ptr::null_mut(),
            &one,
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::EigenSolver(info));
    }
    Ok((wr, wi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = [1.0, -2.0, -1.0, 2.0];
        let (mut wr, wi) = eigenvalues(2, &a).unwrap();
        wr.sort_by(f64::total_cmp);
        assert!(wr[0].abs() < 1e-12);
        assert!((wr[1] - 3.0).abs() < 1e-12);
        assert!(wi.iter().all(|x| x.abs() < 1e-12));
    }
}
