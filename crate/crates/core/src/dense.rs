//! Small dense helpers on top of nalgebra's LU.

use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};

/// Factorization with partial pivoting, rejecting matrices whose pivots collapse
/// to roundoff level relative to the largest pivot.
pub(crate) fn factor(a: &DMatrix<f64>, what: &str) -> Result<LU<f64, Dyn, Dyn>> {
    if !a.is_square() {
        return Err(Error::Domain(format!("{what}: matrix is {}x{}", a.nrows(), a.ncols())));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{what}: matrix has non-finite entries")));
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let diag = u.diagonal();
    let max = diag.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let min = diag.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let n = a.nrows().max(1) as f64;
    if max == 0.0 || min <= n * f64::EPSILON * max {
        return Err(Error::SingularSystem(format!(
            "{what}: pivot ratio {:e}",
            if max == 0.0 { 0.0 } else { min / max }
        )));
    }
    Ok(lu)
}

pub(crate) fn solve(a: &DMatrix<f64>, b: &DVector<f64>, what: &str) -> Result<DVector<f64>> {
    let lu = factor(a, what)?;
    lu.solve(b)
        .ok_or_else(|| Error::SingularSystem(format!("{what}: zero pivot")))
}

/// `||a x - b|| / ||b||`, or the absolute residual when `b` is zero.
pub(crate) fn relative_residual(a: &DMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let r = (a * x - b).norm();
    let scale = b.norm();
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}
