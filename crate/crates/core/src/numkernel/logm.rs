//! Principal matrix logarithm and square root.
//!
//! `logm_principal` uses inverse scaling-and-squaring: repeated principal
//! square roots (Denman–Beavers iteration) bring the argument close to the
//! identity, where an atanh power series applies; doublings undo the roots.

use super::{eig, Mat, NumError};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Principal logarithm. Fails if any eigenvalue lies on `(-inf, 0]`.
pub fn logm_principal(a: &Mat) -> Result<Mat, NumError> {
    let n = a.ensure_square()?;
    a.ensure_finite()?;
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }

    let scale = a.norm_fro().max(1.0);
    let spectrum = eig(a)?;
    for lam in &spectrum.eigenvalues {
        if lam.norm() <= 1e-14 * scale || (lam.re <= 0.0 && lam.im.abs() <= 1e-12 * scale) {
            return Err(NumError::SpectrumOnCut { value: *lam });
        }
    }

    let id = DMatrix::<Complex64>::identity(n, n);
    let mut x = a.inner().clone();
    let mut doublings = 0u32;
    while (&x - &id).norm() > 0.3 {
        if doublings > 60 {
            return Err(NumError::NonConvergence {
                what: "inverse scaling in logm",
                iterations: 60,
            });
        }
        x = sqrtm_db(&x)?;
        doublings += 1;
    }

    // log X = 2 atanh(W) with W = (X - I)(X + I)^{-1}; the series in W
    // converges fast because ‖X − I‖ ≤ 0.3 keeps ‖W‖ ≲ 0.16.
    let num = &x - &id;
    let den = &x + &id;
    let w = den
        .clone()
        .lu()
        .solve(&num)
        .ok_or(NumError::Singular)?;
    let w2 = &w * &w;
    let mut term = w.clone();
    let mut acc = w.clone();
    for k in 1..60 {
        term = &term * &w2;
        let contrib = &term / Complex64::from((2 * k + 1) as f64);
        acc += &contrib;
        if contrib.norm() < 1e-18 * acc.norm().max(1.0) {
            break;
        }
    }
    let log = acc * Complex64::from(2.0 * 2f64.powi(doublings as i32));
    Mat::new(log)
}

/// Principal matrix square root (spectrum off the closed negative axis).
pub fn sqrtm_principal(a: &Mat) -> Result<Mat, NumError> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let scale = a.norm_fro().max(1.0);
    let spectrum = eig(a)?;
    for lam in &spectrum.eigenvalues {
        if lam.norm() <= 1e-14 * scale || (lam.re <= 0.0 && lam.im.abs() <= 1e-12 * scale) {
            return Err(NumError::SpectrumOnCut { value: *lam });
        }
    }
    Mat::new(sqrtm_db(a.inner())?)
}

/// Denman–Beavers iteration (product form).
fn sqrtm_db(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>, NumError> {
    let n = a.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut y = a.clone();
    let mut m = a.clone();
    for _ in 0..80 {
        let m_inv = m.clone().try_inverse().ok_or(NumError::Singular)?;
        y = &y * ((&id + &m_inv) * Complex64::from(0.5));
        m = (&id + (&m + m_inv) * Complex64::from(0.5)) * Complex64::from(0.5);
        if (&m - &id).norm() < 1e-15 * n as f64 {
            return Ok(y);
        }
    }
    // Quadratic convergence stalls only near the branch cut.
    if (&m - &id).norm() < 1e-10 * n as f64 {
        return Ok(y);
    }
    Err(NumError::NonConvergence {
        what: "Denman-Beavers square root",
        iterations: 80,
    })
}
