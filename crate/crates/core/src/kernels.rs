//! Polynomial radial kernels that mimic the thin plate spline `r^N log r`.
//!
//! Every kernel is a short sum `sum_j a_j r^(N+j)` whose coefficients are fixed by
//! conditions on the kernel and its derivatives at the scale `b`. The families
//! differ in the number of terms and in the right-hand side of those conditions.
//! Variants then shift one exponent by `-alpha` or replace terms by their
//! fractional derivatives.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dense;
use crate::error::{Error, Result};
use crate::monomial::MonomialSum;
use crate::specfun::{frac_deriv_monomial, FracKind, MonomialTerm};

/// Distance from the nearest integer below which a value counts as an integer.
pub const INTEGER_TOL: f64 = 1e-9;

pub fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `c0 b^-N r^(N+1) - c0 b^(1-N) r^N`
    TwoTerm,
    /// Three terms matching the TPS value, slope and curvature at `b`.
    ThreeTermTps,
    /// Three terms, zero value and slope at `b`, curvature `-c0`.
    FalseTps,
    /// Four terms, zero value, slope and curvature at `b`, third derivative `c0`.
    FourTerm,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::TwoTerm,
        Family::ThreeTermTps,
        Family::FalseTps,
        Family::FourTerm,
    ];

    pub fn n_terms(self) -> usize {
        match self {
            Family::TwoTerm => 2,
            Family::ThreeTermTps | Family::FalseTps => 3,
            Family::FourTerm => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::TwoTerm => "two_term",
            Family::ThreeTermTps => "three_term_tps",
            Family::FalseTps => "false_tps",
            Family::FourTerm => "four_term",
        }
    }

    /// Coefficients for `c0 = 1`, `b = 1` as `(numerator, denominator)`, highest power first.
    fn unit_coefficients(self) -> Option<&'static [(i64, i64)]> {
        match self {
            Family::TwoTerm => Some(&[(1, 1), (-1, 1)]),
            Family::FalseTps => Some(&[(-1, 2), (1, 1), (-1, 2)]),
            Family::FourTerm => Some(&[(1, 6), (-1, 2), (1, 2), (-1, 6)]),
            Family::ThreeTermTps => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| Error::Config(format!("unknown kernel family `{s}`")))
    }
}

/// How `alpha` enters the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FracMode {
    None,
    /// Shift the exponent of the leading negative term by `-alpha`, `alpha` in `[0, 1)`.
    ExponentShift,
    /// Replace the leading negative term by its fractional derivative, `alpha` in `(-1, 1)`.
    PartialFractional,
    /// Replace every term by its fractional derivative, `alpha` in `(-2, 2)`.
    FullFractional,
}

impl FracMode {
    pub fn name(self) -> &'static str {
        match self {
            FracMode::None => "none",
            FracMode::ExponentShift => "exponent_shift",
            FracMode::PartialFractional => "partial_fractional",
            FracMode::FullFractional => "full_fractional",
        }
    }

    /// Admissible `alpha` interval `(lo, hi)`; `lo` is inclusive only for the exponent shift.
    pub fn alpha_range(self) -> (f64, f64) {
        match self {
            FracMode::None => (0.0, 0.0),
            FracMode::ExponentShift => (0.0, 1.0),
            FracMode::PartialFractional => (-1.0, 1.0),
            FracMode::FullFractional => (-2.0, 2.0),
        }
    }

    fn admits(self, alpha: f64) -> bool {
        let (lo, hi) = self.alpha_range();
        match self {
            FracMode::None => true,
            FracMode::ExponentShift => alpha >= lo && alpha < hi,
            _ => alpha > lo && alpha < hi,
        }
    }
}

impl FromStr for FracMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            FracMode::None,
            FracMode::ExponentShift,
            FracMode::PartialFractional,
            FracMode::FullFractional,
        ]
        .into_iter()
        .find(|m| m.name() == s || m.name().replace('_', "-") == s)
        .ok_or_else(|| Error::Config(format!("unknown fractional mode `{s}`")))
    }
}

/// Parameters from which a kernel is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: Family,
    pub n: f64,
    pub alpha: f64,
    /// Scale of the domain; the boundary conditions are imposed at `r = b`.
    pub b: f64,
    pub c0: f64,
    pub frac_mode: FracMode,
    pub frac_kind: FracKind,
}

impl KernelSpec {
    /// Unperturbed kernel with the family's default `c0`.
    pub fn new(family: Family, n: f64, b: f64) -> Self {
        KernelSpec {
            family,
            n,
            alpha: 0.0,
            b,
            c0: default_c0(family),
            frac_mode: FracMode::None,
            frac_kind: FracKind::RiemannLiouville,
        }
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn with_alpha(mut self, mode: FracMode, alpha: f64) -> Self {
        self.frac_mode = mode;
        self.alpha = alpha;
        self
    }

    pub fn with_kind(mut self, kind: FracKind) -> Self {
        self.frac_kind = kind;
        self
    }

    /// `alpha` as it acts on the kernel; zero when no variant is selected.
    pub fn effective_alpha(&self) -> f64 {
        match self.frac_mode {
            FracMode::None => 0.0,
            _ => self.alpha,
        }
    }

    /// Powers of the unmodified kernel, highest first.
    pub fn base_powers(&self) -> Vec<f64> {
        (0..self.family.n_terms()).rev().map(|k| self.n + k as f64).collect()
    }

    /// Powers of the kernel this spec builds, highest first, computed without gamma evaluations.
    pub fn powers(&self) -> Vec<f64> {
        let base = closed_form(self);
        let alpha = self.effective_alpha();
        let target = leading_negative_index(&base);
        let mut powers: Vec<f64> = base
            .terms()
            .iter()
            .enumerate()
            .map(|(i, t)| match self.frac_mode {
                FracMode::None => t.power,
                FracMode::ExponentShift | FracMode::PartialFractional if Some(i) == target => t.power - alpha,
                FracMode::FullFractional => t.power - alpha,
                _ => t.power,
            })
            .collect();
        powers.sort_by(|a, b| b.total_cmp(a));
        powers
    }

    /// Checks `b > 0`, `N > 0`, the integer restrictions and the `alpha` range of the mode.
    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(Error::Restriction(format!("scale b must be positive, got {}", self.b)));
        }
        if !(self.n > 0.0) || !self.n.is_finite() {
            return Err(Error::Restriction(format!("N must be positive, got {}", self.n)));
        }
        if !self.frac_mode.admits(self.alpha) {
            let (lo, hi) = self.frac_mode.alpha_range();
            return Err(Error::Restriction(format!(
                "alpha = {} outside the {} range ({lo}, {hi})",
                self.alpha,
                self.frac_mode.name()
            )));
        }
        integer_restrictions(self.n, self.effective_alpha())
    }
}

fn integer_restrictions(n: f64, alpha: f64) -> Result<()> {
    if is_integer(n) {
        return Err(Error::Restriction(format!("N = {n} is an integer")));
    }
    if is_integer(n - alpha) {
        return Err(Error::Restriction(format!("N - alpha = {} is an integer", n - alpha)));
    }
    Ok(())
}

/// Falling factorial `p (p-1) ... (p-k+1)`, the `k`-th derivative coefficient of `r^p`.
fn falling_factorial(p: f64, k: u32) -> f64 {
    (0..k).map(|i| p - i as f64).product()
}

/// Matrix of the boundary conditions: row `k`, column `j` holds `d^(o_k)/dr^(o_k) r^(p_j)` at `r = b`.
pub fn condition_matrix(powers: &[f64], orders: &[u32], b: f64) -> DMatrix<f64> {
    DMatrix::from_fn(orders.len(), powers.len(), |k, j| {
        falling_factorial(powers[j], orders[k]) * b.powf(powers[j] - orders[k] as f64)
    })
}

/// Solves the boundary-condition system for the coefficients of `r^(p_j)`.
///
/// The system is solved in the scaled unknowns `a_j b^(p_j)` with rows multiplied
/// by `b^(o_k)`, which removes the dependence of the matrix on `b`.
pub fn solve_coefficients(powers: &[f64], orders: &[u32], rhs: &[f64], b: f64) -> Result<Vec<f64>> {
    let n = powers.len();
    if orders.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: orders.len(),
        });
    }
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: rhs.len(),
        });
    }
    if b == 0.0 {
        return Err(Error::SingularSystem("scale b = 0".into()));
    }
    if !(b > 0.0) {
        return Err(Error::Domain(format!("scale b must be positive, got {b}")));
    }
    for i in 0..n {
        for j in 0..i {
            if powers[i] == powers[j] {
                return Err(Error::SingularSystem(format!("repeated power {}", powers[i])));
            }
        }
    }
    let scaled = DMatrix::from_fn(n, n, |k, j| falling_factorial(powers[j], orders[k]));
    let scaled_rhs = DVector::from_iterator(n, rhs.iter().zip(orders).map(|(c, &o)| c * b.powi(o as i32)));
    let x = dense::solve(&scaled, &scaled_rhs, "boundary conditions")?;
    Ok(x.iter().zip(powers).map(|(xj, &p)| xj * b.powf(-p)).collect())
}

/// Derivative orders and right-hand side that define a family.
pub fn boundary_conditions(family: Family, n: f64, c0: f64) -> (Vec<u32>, Vec<f64>) {
    match family {
        Family::TwoTerm => (vec![0, 1], vec![0.0, c0]),
        Family::ThreeTermTps => (vec![0, 1, 2], vec![0.0, 1.0, 2.0 * n - 1.0]),
        Family::FalseTps => (vec![0, 1, 2], vec![0.0, 0.0, -c0]),
        Family::FourTerm => (vec![0, 1, 2, 3], vec![0.0, 0.0, 0.0, c0]),
    }
}

fn closed_form(spec: &KernelSpec) -> MonomialSum {
    let (n, b, c0) = (spec.n, spec.b, spec.c0);
    let terms: Vec<MonomialTerm> = match spec.family.unit_coefficients() {
        Some(unit) => {
            let top = unit.len() - 1;
            unit.iter()
                .enumerate()
                .map(|(j, &(num, den))| {
                    let c = c0 * num as f64 / den as f64 * b.powf(j as f64 - n);
                    MonomialTerm::new(c, n + (top - j) as f64)
                })
                .collect()
        }
        None => {
            let a2 = 0.5 * (2.0 * n - 1.0) * b.powf(-n) - n * b.powf(-n - 1.0);
            let a1 = (2.0 * n + 1.0) * b.powf(-n) - (2.0 * n - 1.0) * b.powf(1.0 - n);
            let a0 = 0.5 * (2.0 * n - 1.0) * b.powf(2.0 - n) - (n + 1.0) * b.powf(1.0 - n);
            vec![
                MonomialTerm::new(a2, n + 2.0),
                MonomialTerm::new(a1, n + 1.0),
                MonomialTerm::new(a0, n),
            ]
        }
    };
    MonomialSum::new(terms)
}

/// Closed-form kernel of the family, ignoring any `alpha` variant.
pub fn make_kernel(spec: &KernelSpec) -> Result<MonomialSum> {
    spec.validate()?;
    Ok(closed_form(spec))
}

/// Kernel with the `alpha` variant of `spec.frac_mode` applied.
pub fn build_kernel(spec: &KernelSpec) -> Result<MonomialSum> {
    spec.validate()?;
    match spec.frac_mode {
        FracMode::None => Ok(closed_form(spec)),
        FracMode::ExponentShift => perturb(&closed_form(spec), spec.alpha, spec.b),
        FracMode::PartialFractional | FracMode::FullFractional => fractionalize(spec),
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Convexity in the sense of a majority of positive symmetric second differences
/// `f(r_i - h) - 2 f(r_i) + f(r_i + h)` over 64 uniform samples of `[0, 1]`.
fn is_mostly_convex(kernel: &MonomialSum) -> bool {
    const SAMPLES: usize = 64;
    let values: Vec<f64> = (0..SAMPLES)
        .map(|i| kernel.evaluate(i as f64 / (SAMPLES - 1) as f64))
        .collect();
    let (mut positive, mut total) = (0usize, 0usize);
    for i in 1..SAMPLES - 1 {
        for k in 1..=i.min(SAMPLES - 1 - i) {
            let d2 = values[i - k] - 2.0 * values[i] + values[i + k];
            total += 1;
            if d2 > 0.0 {
                positive += 1;
            }
        }
    }
    2 * positive > total
}

/// Default `c0 = p * M`: `M` is the lcm of the denominators of the unit coefficients and
/// the sign of `p` makes the kernel convex on `[0, 1]` at `N = 2.01`.
///
/// The magnitudes of `p` give the published constants 1, 4 and 18. The TPS-matching
/// family does not use `c0`; it returns 1.
pub fn default_c0(family: Family) -> f64 {
    let Some(unit) = family.unit_coefficients() else {
        return 1.0;
    };
    let denominators = unit.iter().fold(1, |m, &(_, den)| lcm(m, den));
    let magnitude = match family {
        Family::TwoTerm => 1,
        Family::FalseTps => 2,
        Family::FourTerm => 3,
        Family::ThreeTermTps => 1,
    };
    let probe = closed_form(&KernelSpec {
        family,
        n: 2.01,
        alpha: 0.0,
        b: 1.0,
        c0: denominators as f64,
        frac_mode: FracMode::None,
        frac_kind: FracKind::RiemannLiouville,
    });
    let sign = if is_mostly_convex(&probe) { 1 } else { -1 };
    (sign * magnitude * denominators) as f64
}

/// Index of the highest-power term with a negative coefficient.
fn leading_negative_index(kernel: &MonomialSum) -> Option<usize> {
    // terms are sorted by descending power
    kernel.terms().iter().position(|t| t.coefficient < 0.0)
}

/// Lowers the exponent of the highest-power negative term by `alpha` and multiplies
/// its coefficient by `b^alpha`.
pub fn perturb(kernel: &MonomialSum, alpha: f64, b: f64) -> Result<MonomialSum> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Restriction(format!(
            "perturbation alpha = {alpha} outside [0, 1)"
        )));
    }
    let target = leading_negative_index(kernel).ok_or(Error::NoNegativeTerm)?;
    if alpha == 0.0 {
        return Ok(kernel.clone());
    }
    Ok(kernel
        .terms()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if i == target {
                MonomialTerm::new(t.coefficient * b.powf(alpha), t.power - alpha)
            } else {
                *t
            }
        })
        .collect())
}

/// Replaces `b^s r^t` by `b^(s+alpha) D^alpha r^t` on the leading negative term
/// (partial) or on every term (full).
pub fn fractionalize(spec: &KernelSpec) -> Result<MonomialSum> {
    let partial = match spec.frac_mode {
        FracMode::PartialFractional => true,
        FracMode::FullFractional => false,
        other => {
            return Err(Error::Domain(format!(
                "fractionalize needs a fractional mode, got {}",
                other.name()
            )))
        }
    };
    spec.validate()?;
    let base = closed_form(spec);
    let target = leading_negative_index(&base);
    let scale = spec.b.powf(spec.alpha);
    let mut terms = Vec::with_capacity(base.len());
    for (i, t) in base.terms().iter().enumerate() {
        if partial && Some(i) != target {
            terms.push(*t);
            continue;
        }
        let d = frac_deriv_monomial(t.power, spec.alpha, spec.frac_kind)?;
        if d.power <= 0.0 {
            return Err(Error::Restriction(format!(
                "fractional term has non-positive power {}",
                d.power
            )));
        }
        terms.push(MonomialTerm::new(t.coefficient * scale * d.coefficient, d.power));
    }
    Ok(MonomialSum::new(terms))
}

/// Kernel value at `r >= 0`.
pub fn evaluate(kernel: &MonomialSum, r: f64) -> f64 {
    kernel.evaluate(r)
}

/// `r^N log r`, the profile the kernels imitate; zero at the origin.
pub fn tps(n: f64, r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        r.powf(n) * r.ln()
    }
}

fn order_of_power(p: f64) -> u32 {
    (p / 2.0).ceil().max(0.0) as u32
}

/// Conditional positive definiteness order: `max_i ceil(p_i / 2)` over the kernel's powers.
pub fn cpd_order(kernel: &MonomialSum) -> Result<u32> {
    if let Some(t) = kernel.terms().iter().find(|t| is_integer(t.power)) {
        return Err(Error::Restriction(format!("integer power {} in kernel", t.power)));
    }
    if let Some(t) = kernel.terms().iter().find(|t| t.power <= 0.0) {
        return Err(Error::Restriction(format!("non-positive power {} in kernel", t.power)));
    }
    Ok(kernel
        .terms()
        .iter()
        .map(|t| order_of_power(t.power))
        .max()
        .unwrap_or(0))
}

/// Order valid for every `alpha` between `lo` and `hi`, evaluated at the two endpoints.
pub fn cpd_order_over_alpha(spec: &KernelSpec, lo: f64, hi: f64) -> u32 {
    [lo, hi]
        .iter()
        .flat_map(|&alpha| KernelSpec { alpha, ..*spec }.powers())
        .map(order_of_power)
        .max()
        .unwrap_or(0)
}

/// Integer restrictions plus `N > q + alpha` for an operator of order `q > 0`, or `N > alpha` otherwise.
pub fn validate_restrictions(spec: &KernelSpec, q: f64) -> Result<()> {
    let alpha = spec.effective_alpha();
    integer_restrictions(spec.n, alpha)?;
    if q > 0.0 {
        if !(spec.n > q + alpha) {
            return Err(Error::Restriction(format!(
                "need N > q + alpha, got N = {} and q + alpha = {}",
                spec.n,
                q + alpha
            )));
        }
    } else if !(spec.n > alpha) {
        return Err(Error::Restriction(format!(
            "need N > alpha, got N = {} and alpha = {alpha}",
            spec.n
        )));
    }
    Ok(())
}
