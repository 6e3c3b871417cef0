//! Interpolation with a conditionally positive definite radial kernel plus a polynomial tail.
//!
//! The interpolant is `s(x) = sum_j lambda_j phi(|x - x_j|) + sum_k beta_k p_k(x)` and the
//! weights solve the saddle system
//!
//! ```text
//! [ A   P ] [lambda]   [u]
//! [ P^T 0 ] [ beta ] = [0]
//! ```
//!
//! with `A_jk = phi(|x_j - x_k|)` and `P_jk = p_k(x_j)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dense;
use crate::error::{Error, Result};
use crate::monomial::MonomialSum;
use crate::nodes::{distance, norm};
use crate::precond::{self, PrecondConfig};

/// Largest accepted `||G x - U|| / ||U||` after a solve.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    /// All monomials of total degree below `m` in `d` variables.
    Multivariate,
    /// `1, r^(1+o), ..., r^(m-1+o)` with `r = |x|`.
    Radial,
}

impl std::str::FromStr for TailKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multivariate" => Ok(TailKind::Multivariate),
            "radial" => Ok(TailKind::Radial),
            other => Err(Error::Config(format!("unknown tail kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    pub kind: TailKind,
    /// Order of conditional positive definiteness; `m = 0` disables the tail.
    pub m: u32,
    pub d: usize,
    /// Exponent offset of the radial tail.
    pub o: f64,
}

impl TailSpec {
    pub fn multivariate(m: u32, d: usize) -> Self {
        TailSpec {
            kind: TailKind::Multivariate,
            m,
            d,
            o: 0.0,
        }
    }

    pub fn radial(m: u32, d: usize, o: f64) -> Self {
        TailSpec {
            kind: TailKind::Radial,
            m,
            d,
            o,
        }
    }

    pub fn none(d: usize) -> Self {
        TailSpec::multivariate(0, d)
    }

    /// Number of tail functions.
    pub fn q(&self) -> usize {
        match self.kind {
            TailKind::Multivariate if self.m == 0 => 0,
            TailKind::Multivariate => binomial(self.m as usize - 1 + self.d, self.d),
            TailKind::Radial => self.m as usize,
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// One tail function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BasisFunction {
    /// `prod_i x_i^(e_i)`
    Monomial(Vec<u32>),
    /// `|x|^p`; `p = 0` is the constant.
    RadialPower(f64),
}

impl BasisFunction {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match self {
            BasisFunction::Monomial(exps) => x.iter().zip(exps).map(|(v, &e)| v.powi(e as i32)).product(),
            BasisFunction::RadialPower(p) if *p == 0.0 => 1.0,
            BasisFunction::RadialPower(p) => norm(x).powf(*p),
        }
    }

    /// Radial profile, for functions of `|x|` only.
    pub fn radial_profile(&self) -> Option<MonomialSum> {
        match self {
            BasisFunction::RadialPower(p) => Some(MonomialSum::monomial(1.0, *p)),
            BasisFunction::Monomial(_) => None,
        }
    }
}

/// Exponent vectors of total degree `degree` in `d` variables, lexicographically descending.
fn exponents_of_degree(degree: u32, d: usize) -> Vec<Vec<u32>> {
    if d == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if d == 1 {
        return vec![vec![degree]];
    }
    (0..=degree)
        .rev()
        .flat_map(|first| {
            exponents_of_degree(degree - first, d - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Tail functions in graded-lex order (multivariate) or increasing power (radial).
pub fn tail_basis(tail: &TailSpec) -> Vec<BasisFunction> {
    match tail.kind {
        TailKind::Multivariate => (0..tail.m)
            .flat_map(|deg| exponents_of_degree(deg, tail.d))
            .map(BasisFunction::Monomial)
            .collect(),
        TailKind::Radial => (0..tail.m)
            .map(|k| {
                if k == 0 {
                    BasisFunction::RadialPower(0.0)
                } else {
                    BasisFunction::RadialPower(k as f64 + tail.o)
                }
            })
            .collect(),
    }
}

/// Block system `[[top, top_tail], [moment, 0]] x = rhs`.
///
/// For interpolation `top = A`, `top_tail = P` and `moment = P^T`. Collocation replaces
/// the interior rows of `top` and `top_tail` by operator images.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleSystem {
    pub top: DMatrix<f64>,
    pub top_tail: DMatrix<f64>,
    pub moment: DMatrix<f64>,
    pub rhs: DVector<f64>,
}

impl SaddleSystem {
    pub fn n_centers(&self) -> usize {
        self.top.ncols()
    }

    pub fn n_tail(&self) -> usize {
        self.top_tail.ncols()
    }

    pub fn dim(&self) -> usize {
        self.n_centers() + self.n_tail()
    }

    /// The full `(N_p + Q) x (N_p + Q)` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let (np, q) = (self.n_centers(), self.n_tail());
        let mut g = DMatrix::zeros(np + q, np + q);
        g.view_mut((0, 0), (np, np)).copy_from(&self.top);
        g.view_mut((0, np), (np, q)).copy_from(&self.top_tail);
        g.view_mut((np, 0), (q, np)).copy_from(&self.moment);
        g
    }
}

pub(crate) fn tail_matrix(points: &[Vec<f64>], basis: &[BasisFunction]) -> DMatrix<f64> {
    DMatrix::from_fn(points.len(), basis.len(), |j, k| basis[k].evaluate(&points[j]))
}

/// Assembles the interpolation system for data `values` at `centers`.
pub fn assemble_interpolation(
    centers: &[Vec<f64>],
    kernel: &MonomialSum,
    tail: &TailSpec,
    values: &[f64],
) -> Result<SaddleSystem> {
    let np = centers.len();
    if values.len() != np {
        return Err(Error::LengthMismatch {
            expected: np,
            actual: values.len(),
        });
    }
    let basis = tail_basis(tail);
    let q = basis.len();
    let mut a = DMatrix::zeros(np, np);
    for j in 0..np {
        for k in 0..=j {
            let v = kernel.evaluate(distance(&centers[j], &centers[k]));
            a[(j, k)] = v;
            a[(k, j)] = v;
        }
    }
    let p = tail_matrix(centers, &basis);
    let mut rhs = DVector::zeros(np + q);
    rhs.rows_mut(0, np).copy_from_slice(values);
    Ok(SaddleSystem {
        top: a,
        moment: p.transpose(),
        top_tail: p,
        rhs,
    })
}

/// Preconditioning details of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecondSummary {
    pub n: u32,
    pub cond_before: f64,
    pub cond_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub lambda: Vec<f64>,
    pub beta: Vec<f64>,
    /// `||G x - U|| / ||U||` on the original system.
    pub residual: f64,
    pub precond: Option<PrecondSummary>,
}

/// Solves the system directly, or through the shifted-QR preconditioner when `precondition` is given.
pub fn solve_system(system: &SaddleSystem, precondition: Option<&PrecondConfig>) -> Result<Solution> {
    let g = system.matrix();
    let u = &system.rhs;
    let (x, summary) = match precondition {
        None => (dense::solve(&g, u, "saddle system")?, None),
        Some(cfg) => {
            let pre = precond::precondition(&g, u, cfg)?;
            let x = dense::solve(&pre.g_m, &pre.transformed_rhs, "preconditioned system")?;
            let summary = PrecondSummary {
                n: pre.n,
                cond_before: pre.cond_before,
                cond_after: pre.cond_after,
            };
            (x, Some(summary))
        }
    };
    let residual = dense::relative_residual(&g, &x, u);
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::Solve(format!(
            "relative residual {residual:e} above {RESIDUAL_TOL:e}"
        )));
    }
    let np = system.n_centers();
    Ok(Solution {
        lambda: x.rows(0, np).iter().copied().collect(),
        beta: x.rows(np, system.n_tail()).iter().copied().collect(),
        residual,
        precond: summary,
    })
}

/// A solved radial expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    pub centers: Vec<Vec<f64>>,
    pub lambda: Vec<f64>,
    pub beta: Vec<f64>,
    pub kernel: MonomialSum,
    pub basis: Vec<BasisFunction>,
}

impl Interpolant {
    /// Assembles, solves and wraps the interpolant of `values` at `centers`.
    pub fn fit(
        centers: &[Vec<f64>],
        values: &[f64],
        kernel: &MonomialSum,
        tail: &TailSpec,
        precondition: Option<&PrecondConfig>,
    ) -> Result<(Interpolant, Solution)> {
        let system = assemble_interpolation(centers, kernel, tail, values)?;
        let solution = solve_system(&system, precondition)?;
        let interpolant = Interpolant {
            centers: centers.to_vec(),
            lambda: solution.lambda.clone(),
            beta: solution.beta.clone(),
            kernel: kernel.clone(),
            basis: tail_basis(tail),
        };
        Ok((interpolant, solution))
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let radial: f64 = self
            .centers
            .iter()
            .zip(&self.lambda)
            .map(|(c, l)| l * self.kernel.evaluate(distance(x, c)))
            .sum();
        let tail: f64 = self.basis.iter().zip(&self.beta).map(|(p, b)| b * p.evaluate(x)).sum();
        radial + tail
    }

    /// `max_k |sum_j lambda_j p_k(x_j)|`
    pub fn moment_residual(&self) -> f64 {
        self.basis
            .iter()
            .map(|p| {
                self.centers
                    .iter()
                    .zip(&self.lambda)
                    .map(|(c, l)| l * p.evaluate(c))
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Root mean square of `truth - approx`.
pub fn rmse(truth: &[f64], approx: &[f64]) -> Result<f64> {
    if truth.len() != approx.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            actual: approx.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::LengthMismatch { expected: 1, actual: 0 });
    }
    let sum: f64 = truth.iter().zip(approx).map(|(u, s)| (u - s) * (u - s)).sum();
    Ok((sum / truth.len() as f64).sqrt())
}
