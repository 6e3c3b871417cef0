//! Benchmark target functions on the plane.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(sin(8(x+y)) + cos(8(x-y)) + 4) / 35`
pub fn sin8(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    ((8.0 * (a + b)).sin() + (8.0 * (a - b)).cos() + 4.0) / 35.0
}

/// Laplacian of [`sin8`].
pub fn sin8_laplacian(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    -128.0 / 35.0 * ((8.0 * (a + b)).sin() + (8.0 * (a - b)).cos())
}

fn rational_parts(x: &[f64]) -> (f64, f64, f64) {
    let c = (5.4 * x[1]).cos();
    let t = 3.0 * x[0] - 1.0;
    let d = 6.0 * t * t + 6.0;
    (c, t, d)
}

/// `(cos(5.4 y) + 1.25) / (6 (3x - 1)^2 + 6)`
pub fn rational_cos(x: &[f64]) -> f64 {
    let (c, _, d) = rational_parts(x);
    (c + 1.25) / d
}

/// Laplacian of [`rational_cos`].
pub fn rational_cos_laplacian(x: &[f64]) -> f64 {
    let (c, t, d) = rational_parts(x);
    let dx = 36.0 * t;
    2.0 * dx * dx * (c + 1.25) / d.powi(3) - 108.0 * (c + 1.25) / d.powi(2) - 29.16 * c / d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    #[serde(rename = "sin8-interp")]
    Sin8Interp,
    #[serde(rename = "sin8-colloc")]
    Sin8Colloc,
    #[serde(rename = "rational-cos")]
    RationalCos,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Sin8Interp, Problem::Sin8Colloc, Problem::RationalCos];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Sin8Interp => "sin8-interp",
            Problem::Sin8Colloc => "sin8-colloc",
            Problem::RationalCos => "rational-cos",
        }
    }

    /// The exact solution, used as interpolation data and as the Dirichlet data.
    pub fn solution(self) -> fn(&[f64]) -> f64 {
        match self {
            Problem::Sin8Interp | Problem::Sin8Colloc => sin8,
            Problem::RationalCos => rational_cos,
        }
    }

    /// Right-hand side of the Poisson problem whose solution is [`Problem::solution`].
    pub fn source(self) -> fn(&[f64]) -> f64 {
        match self {
            Problem::Sin8Interp | Problem::Sin8Colloc => sin8_laplacian,
            Problem::RationalCos => rational_cos_laplacian,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s || p.name().replace('-', "_") == s)
            .ok_or_else(|| Error::Config(format!("unknown problem `{s}`")))
    }
}
