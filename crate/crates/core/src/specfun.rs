//! Gamma function and the fractional derivative of a power of `r`.
//!
//! Fractional derivatives use lower limit 0 throughout; a nonzero lower
//! limit is not supported.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sqrt(2 pi)`
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

const LANCZOS_G: f64 = 607.0 / 128.0;

/// Lanczos series coefficients for `g = 607/128`, 15 terms (Godfrey).
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_049e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_4e-6,
];

/// Largest argument whose gamma value is representable as an `f64`.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// One term `coefficient * r^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub coefficient: f64,
    pub power: f64,
}

impl MonomialTerm {
    pub fn new(coefficient: f64, power: f64) -> Self {
        MonomialTerm { coefficient, power }
    }
}

/// Which fractional derivative is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FracKind {
    RiemannLiouville,
    Caputo,
}

impl std::str::FromStr for FracKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "riemann_liouville" | "riemann-liouville" | "rl" => Ok(FracKind::RiemannLiouville),
            "caputo" => Ok(FracKind::Caputo),
            other => Err(Error::Config(format!("unknown fractional kind `{other}`"))),
        }
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(pi * x)` with the argument reduced first, so that integers give an exact zero.
fn sin_pi(x: f64) -> f64 {
    let mut y = x % 2.0;
    if y < -1.0 {
        y += 2.0;
    } else if y > 1.0 {
        y -= 2.0;
    }
    // y in [-1, 1]; fold onto [-1/2, 1/2] using sin(pi - t) = sin(t)
    if y > 0.5 {
        y = 1.0 - y;
    } else if y < -0.5 {
        y = -1.0 - y;
    }
    (PI * y).sin()
}

fn lanczos_positive(x: f64) -> f64 {
    let z = x - 1.0;
    let s = LANCZOS_C
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_C[0], |acc, (k, c)| acc + c / (z + k as f64));
    let t = z + LANCZOS_G + 0.5;
    // the power is split in two so it does not overflow before the final product
    let half = t.powf((z + 0.5) / 2.0) * (-t / 2.0).exp();
    SQRT_TWO_PI * s * half * half
}

/// The gamma function.
///
/// Negative non-integer arguments go through the reflection identity.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(x));
    }
    let value = if x < 0.5 {
        let reflected = lanczos_positive(1.0 - x);
        if reflected.is_infinite() {
            // 1/Gamma(1-x) underflows to zero
            0.0
        } else {
            PI / (sin_pi(x) * reflected)
        }
    } else {
        lanczos_positive(x)
    };
    if value.is_infinite() {
        return Err(Error::Overflow(x));
    }
    Ok(value)
}

/// `Gamma(s + 1) / Gamma(s - alpha + 1)`, the coefficient of the fractional derivative of `r^s`.
fn monomial_ratio(s: f64, alpha: f64) -> Result<f64> {
    let denom_arg = s - alpha + 1.0;
    if is_nonpositive_integer(denom_arg) {
        return Err(Error::Pole(denom_arg));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    let num = gamma(s + 1.0)?;
    let den = gamma(denom_arg)?;
    Ok(num / den)
}

/// Fractional derivative of order `alpha` (an integral when `alpha < 0`) of `r^s`:
/// `Gamma(s+1)/Gamma(s-alpha+1) * r^(s-alpha)`.
///
/// `s = 0` is accepted and stands for the constant function. For the Caputo
/// derivative with `alpha > 0` the power must satisfy `s > ceil(alpha) - 1`,
/// where both definitions agree on `r^s`.
pub fn frac_deriv_monomial(s: f64, alpha: f64, kind: FracKind) -> Result<MonomialTerm> {
    if !s.is_finite() || !alpha.is_finite() {
        return Err(Error::Domain(format!("non-finite power {s} or order {alpha}")));
    }
    if s < 0.0 {
        return Err(Error::Domain(format!("power {s} is negative")));
    }
    if kind == FracKind::Caputo && alpha > 0.0 {
        let bound = alpha.ceil() - 1.0;
        if s <= bound {
            return Err(Error::Domain(format!(
                "Caputo derivative of order {alpha} needs power > {bound}, got {s}"
            )));
        }
    }
    let coefficient = monomial_ratio(s, alpha)?;
    Ok(MonomialTerm::new(coefficient, s - alpha))
}
