//! Shifted-QR preconditioning of dense saddle systems.
//!
//! With `G = QR`, the shifted factor `H = Q + 2^-n` (added entrywise) gives the
//! preconditioned pair `G_M = (HR)^-1 G`, `(HR)^-1 U`. Since `HR = G + 2^-n e (R^T e)^T`,
//! `G_M` is the identity minus a rank-one term and its condition number falls towards 1
//! as the shift shrinks. The smallest `n` with `cond(G_M) <= M` is used.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dense;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecondConfig {
    /// Target condition number `M`.
    pub target: f64,
    /// Largest shift exponent tried.
    pub n_max: u32,
}

impl Default for PrecondConfig {
    fn default() -> Self {
        PrecondConfig {
            target: 10.0,
            n_max: 64,
        }
    }
}

impl PrecondConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target > 1.0) || !self.target.is_finite() {
            return Err(Error::Config(format!(
                "target condition number must exceed 1, got {}",
                self.target
            )));
        }
        if self.n_max == 0 {
            return Err(Error::Config("n_max must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecondResult {
    pub g_m: DMatrix<f64>,
    pub transformed_rhs: DVector<f64>,
    pub n: u32,
    pub cond_before: f64,
    pub cond_after: f64,
}

/// 2-norm condition number `sigma_max / sigma_min`.
pub fn condition_number(g: &DMatrix<f64>) -> Result<f64> {
    if !g.is_square() || g.is_empty() {
        return Err(Error::Domain(format!(
            "condition number of a {}x{} matrix",
            g.nrows(),
            g.ncols()
        )));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let sv = g.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if max == 0.0 || min <= g.nrows() as f64 * f64::EPSILON * max {
        return Err(Error::SingularSystem(format!("singular values {max:e} / {min:e}")));
    }
    Ok(max / min)
}

fn cond_or_inf(g: &DMatrix<f64>) -> f64 {
    condition_number(g).unwrap_or(f64::INFINITY)
}

/// Condition number of `I - y w^T`, from its two singular values that differ from 1.
fn rank_one_cond(y: &DVector<f64>, w: &DVector<f64>) -> f64 {
    let ab = -y.dot(w);
    let s = 2.0 + 2.0 * ab + y.norm_squared() * w.norm_squared();
    let p = (1.0 + ab).abs();
    let disc = (s * s - 4.0 * p * p).max(0.0);
    let hi2 = 0.5 * (s + disc.sqrt());
    if !(hi2 > 0.0) || !hi2.is_finite() {
        return f64::INFINITY;
    }
    let lo2 = p * p / hi2;
    let (mut hi, mut lo) = (hi2.sqrt(), lo2.sqrt());
    if y.len() > 2 {
        hi = hi.max(1.0);
        lo = lo.min(1.0);
    }
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Scans `n = 1..=n_max` and returns the first shift meeting the target.
///
/// Because `HR = G + 2^-n e (R^T e)^T`, `G_M = I - y w^T` with `w = R^T e` and
/// `y = 2^-n G^-1 e / (1 + 2^-n w^T G^-1 e)`. Its condition number follows from a 2x2
/// problem, so each shift is screened cheaply and `G_M` is formed and measured by a
/// full SVD only for shifts whose screened value is within a factor of two of the target.
pub fn precondition(g: &DMatrix<f64>, u: &DVector<f64>, config: &PrecondConfig) -> Result<PrecondResult> {
    config.validate()?;
    if !g.is_square() || g.nrows() != u.len() {
        return Err(Error::LengthMismatch {
            expected: g.nrows(),
            actual: u.len(),
        });
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let dim = g.nrows();
    let cond_before = cond_or_inf(g);
    let qr = g.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let ones = DVector::from_element(dim, 1.0);
    let w = r.transpose() * &ones;
    let z = r.solve_upper_triangular(&(q.transpose() * &ones));

    let mut best: Option<(u32, f64)> = None;
    let mut any_factored = false;
    for n in 1..=config.n_max {
        let shift = 0.5f64.powi(n as i32);
        let screened = match &z {
            Some(z) => {
                let y = z * (shift / (1.0 + shift * w.dot(z)));
                rank_one_cond(&y, &w)
            }
            None => f64::NAN,
        };
        if screened.is_finite() && screened > 2.0 * config.target {
            log::trace!("shift 2^-{n}: screened cond {screened:e}");
            if best.is_none_or(|(_, c)| screened < c) {
                best = Some((n, screened));
            }
            any_factored = true;
            continue;
        }
        let hr = q.add_scalar(shift) * &r;
        let Ok(lu) = dense::factor(&hr, "shifted factor") else {
            continue;
        };
        any_factored = true;
        let (Some(g_m), Some(t)) = (lu.solve(g), lu.solve(u)) else {
            continue;
        };
        let cond = cond_or_inf(&g_m);
        log::debug!("shift 2^-{n}: cond {cond:e}, screened {screened:e}");
        if best.is_none_or(|(_, c)| cond < c) {
            best = Some((n, cond));
        }
        if cond <= config.target {
            return Ok(PrecondResult {
                g_m,
                transformed_rhs: t,
                n,
                cond_before,
                cond_after: cond,
            });
        }
    }
    if !any_factored {
        return Err(Error::SingularSystem("shifted factor HR singular for every n".into()));
    }
    let (best_n, best_cond) = best.unwrap_or((0, f64::INFINITY));
    Err(Error::NoShiftFound {
        n_max: config.n_max,
        target: config.target,
        best_n,
        best_cond,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn hilbert(n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| 1.0 / (i + j + 1) as f64)
    }

    #[test]
    fn identity_is_already_conditioned() {
        let g = DMatrix::<f64>::identity(4, 4);
        let u = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        let res = precondition(&g, &u, &PrecondConfig::default()).unwrap();
        assert_eq!(res.n, 1);
        assert_relative_eq!(res.cond_before, 1.0, max_relative = 1e-12);
        assert!(res.cond_after <= 10.0);
    }

    #[test]
    fn ill_conditioned_hilbert() {
        let g = hilbert(8);
        let u = DVector::from_fn(8, |i, _| (i as f64).sin() + 1.0);
        let res = precondition(&g, &u, &PrecondConfig::default()).unwrap();
        assert!(res.cond_before > 1e9);
        assert!(res.cond_after <= 10.0);
        let direct = dense::solve(&g, &u, "hilbert").unwrap();
        let pre = dense::solve(&res.g_m, &res.transformed_rhs, "preconditioned").unwrap();
        assert!((&direct - &pre).norm() / pre.norm() < 1e-3);
    }

    #[test]
    fn unreachable_target_reports_best() {
        let g = hilbert(6);
        let u = DVector::from_element(6, 1.0);
        let cfg = PrecondConfig {
            target: 1.0 + 1e-15,
            n_max: 5,
        };
        match precondition(&g, &u, &cfg) {
            Err(Error::NoShiftFound {
                n_max,
                best_n,
                best_cond,
                ..
            }) => {
                assert_eq!(n_max, 5);
                assert!((1..=5).contains(&best_n));
                assert!(best_cond >= 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_config() {
        let g = DMatrix::<f64>::identity(2, 2);
        let u = DVector::from_element(2, 1.0);
        assert!(matches!(
            precondition(&g, &u, &PrecondConfig { target: 0.5, n_max: 4 }),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            precondition(&g, &u, &PrecondConfig { target: 10.0, n_max: 0 }),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn screened_cond_matches_svd() {
        let g = hilbert(7);
        let qr = g.clone().qr();
        let ones = DVector::from_element(7, 1.0);
        let w = qr.r().transpose() * &ones;
        for n in [4, 12, 20, 30] {
            let shift = 0.5f64.powi(n);
            let hr = qr.q().add_scalar(shift) * qr.r();
            let g_m = hr.lu().solve(&g).unwrap();
            let z = g.clone().lu().solve(&ones).unwrap();
            let y = &z * (shift / (1.0 + shift * w.dot(&z)));
            let screened = rank_one_cond(&y, &w);
            let full = condition_number(&g_m).unwrap();
            assert_relative_eq!(screened, full, max_relative = 1e-3);
        }
    }

    #[test]
    fn singular_condition_number() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(condition_number(&g), Err(Error::SingularSystem(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// `HR G_M` reproduces `G`, and the preconditioned solve agrees with the direct one.
        #[test]
        fn reconstruction_and_agreement(
            n in 3usize..9,
            seed in proptest::collection::vec(-1.0f64..1.0, 81),
        ) {
            let g = DMatrix::from_fn(n, n, |i, j| seed[i * 9 + j] + if i == j { 3.0 } else { 0.0 });
            let u = DVector::from_fn(n, |i, _| seed[(i * 7) % 81]);
            let res = precondition(&g, &u, &PrecondConfig::default()).unwrap();
            let qr = g.clone().qr();
            let shift = 0.5f64.powi(res.n as i32);
            let hr = qr.q().add_scalar(shift) * qr.r();
            let back = &hr * &res.g_m;
            prop_assert!((back - &g).norm() / g.norm() <= 1e-10);
            let direct = dense::solve(&g, &u, "g").unwrap();
            let pre = dense::solve(&res.g_m, &res.transformed_rhs, "g_m").unwrap();
            let scale = direct.norm().max(1e-300);
            prop_assert!((&direct - &pre).norm() / scale <= 1e-6);
            prop_assert!(res.cond_after <= 10.0);
        }
    }
}
