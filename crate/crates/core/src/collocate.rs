//! Kansa collocation for `L u = f` in the domain and `u = g` on its boundary, where
//! `L = D^(2+beta) + (1/r) D^(1+beta) + beta r` acts on radial profiles. With
//! `beta = 0` this is the two-dimensional Laplacian of a radial function.
//!
//! Interior rows hold `L phi(|x_j - x_k|)` and `L p_k(|x_j|)`, boundary rows the plain
//! kernel and tail values, followed by the moment conditions `P^T lambda = 0`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolate::{
    self, rmse, tail_basis, tail_matrix, BasisFunction, Interpolant, PrecondSummary, SaddleSystem, TailKind, TailSpec,
};
use crate::monomial::{MonomialSum, MonomialTerm};
use crate::nodes::{distance, norm, Domain, NodeSet};
use crate::precond::PrecondConfig;
use crate::specfun::{frac_deriv_monomial, FracKind};

/// Side of the held-out grid of cell centers used to score a collocation solve.
pub const HELDOUT_GRID: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialOperator {
    pub beta: f64,
    pub kind: FracKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryOperator {
    #[default]
    Identity,
}

impl RadialOperator {
    pub fn new(beta: f64, kind: FracKind) -> Self {
        RadialOperator { beta, kind }
    }

    /// The Laplacian of radial functions in the plane.
    pub fn laplacian() -> Self {
        RadialOperator::new(0.0, FracKind::Caputo)
    }

    /// Order `q = max(2 + beta, 0)`.
    pub fn order(&self) -> f64 {
        (2.0 + self.beta).max(0.0)
    }
}

/// `(q, o)`: the operator order and the tail offset `o = q - 1` (or 0 when `q = 0`).
pub fn operator_orders(op: &RadialOperator, _boundary: BoundaryOperator) -> (f64, f64) {
    let q = op.order();
    let o = if q > 0.0 { q - 1.0 } else { 0.0 };
    (q, o)
}

fn derivative_term(c: f64, p: f64, order: f64, kind: FracKind) -> Result<Option<f64>> {
    if p == 0.0 && kind == FracKind::Caputo && order > 0.0 {
        return Ok(None);
    }
    let t = frac_deriv_monomial(p, order, kind)?;
    Ok(Some(c * t.coefficient))
}

/// Image of a radial profile under the operator, term by term.
///
/// `c r^p` maps to `c [G(p+1)/G(p-1-beta) + G(p+1)/G(p-beta)] r^(p-2-beta) + beta c r^(p+1)`.
/// A Caputo derivative of the constant is zero.
pub fn apply_operator(op: &RadialOperator, f: &MonomialSum) -> Result<MonomialSum> {
    let beta = op.beta;
    let mut out = Vec::with_capacity(2 * f.len());
    for t in f.terms() {
        let (c, p) = (t.coefficient, t.power);
        let lowered = p - 2.0 - beta;
        let mut lead = 0.0;
        if let Some(v) = derivative_term(c, p, 2.0 + beta, op.kind)? {
            lead += v;
        }
        if let Some(v) = derivative_term(c, p, 1.0 + beta, op.kind)? {
            lead += v;
        }
        if lead != 0.0 {
            out.push(MonomialTerm::new(lead, lowered));
        }
        if beta != 0.0 {
            out.push(MonomialTerm::new(beta * c, p + 1.0));
        }
    }
    Ok(MonomialSum::new(out))
}

/// A scalar function on the domain.
pub type Field = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct CollocationProblem {
    pub domain: Domain,
    pub nodes: NodeSet,
    pub operator: RadialOperator,
    pub boundary: BoundaryOperator,
    pub f: Field,
    pub g: Field,
}

impl std::fmt::Debug for CollocationProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CollocationProblem")
            .field("domain", &self.domain)
            .field("nodes", &self.nodes.len())
            .field("operator", &self.operator)
            .finish_non_exhaustive()
    }
}

impl CollocationProblem {
    pub fn new(domain: Domain, nodes: NodeSet, operator: RadialOperator, f: Field, g: Field) -> Result<Self> {
        let problem = CollocationProblem {
            domain,
            nodes,
            operator,
            boundary: BoundaryOperator::Identity,
            f,
            g,
        };
        problem.check()?;
        Ok(problem)
    }

    fn check(&self) -> Result<()> {
        if self.nodes.n_interior() == 0 || self.nodes.n_boundary() == 0 {
            return Err(Error::Domain("collocation needs interior and boundary nodes".into()));
        }
        if self.nodes.dim() != Some(self.domain.dim()) {
            return Err(Error::Domain("node dimension differs from the domain".into()));
        }
        if self.operator.kind == FracKind::RiemannLiouville && self.domain.contains_origin() {
            return Err(Error::Domain(
                "the Riemann-Liouville operator needs a domain excluding the origin".into(),
            ));
        }
        Ok(())
    }
}

/// Assembled system with the radial images it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSystem {
    pub system: SaddleSystem,
    pub kernel_image: MonomialSum,
    pub basis: Vec<BasisFunction>,
    pub tail_images: Vec<MonomialSum>,
    /// Set when the constant had no admissible image and was removed from the tail.
    pub dropped_constant: bool,
}

pub fn assemble_collocation(
    problem: &CollocationProblem,
    kernel: &MonomialSum,
    tail: &TailSpec,
) -> Result<CollocationSystem> {
    problem.check()?;
    if tail.kind != TailKind::Radial {
        return Err(Error::Domain("collocation needs a radial tail".into()));
    }
    let op = &problem.operator;
    let kernel_image = apply_operator(op, kernel)?;
    if let Some(p) = kernel_image.terms().iter().map(|t| t.power).find(|p| *p <= 0.0) {
        return Err(Error::Restriction(format!(
            "operator image of the kernel has power {p} and is singular at r = 0"
        )));
    }

    let mut basis = Vec::new();
    let mut tail_images = Vec::new();
    let mut dropped_constant = false;
    for p in tail_basis(tail) {
        let profile = p.radial_profile().expect("radial tail");
        match apply_operator(op, &profile) {
            Ok(image) => {
                basis.push(p);
                tail_images.push(image);
            }
            Err(Error::Pole(_)) if matches!(p, BasisFunction::RadialPower(s) if s == 0.0) => {
                log::debug!("dropping the tail constant: no admissible image");
                dropped_constant = true;
            }
            Err(e) => return Err(e),
        }
    }

    let nodes = problem.nodes.points();
    let (ni, np, q) = (problem.nodes.n_interior(), nodes.len(), basis.len());
    let mut top = DMatrix::zeros(np, np);
    let mut top_tail = DMatrix::zeros(np, q);
    let mut rhs = DVector::zeros(np + q);
    for (j, xj) in nodes.iter().enumerate() {
        let interior = j < ni;
        for (k, xk) in nodes.iter().enumerate() {
            let r = distance(xj, xk);
            top[(j, k)] = if interior {
                kernel_image.evaluate(r)
            } else {
                kernel.evaluate(r)
            };
        }
        let rj = norm(xj);
        for k in 0..q {
            top_tail[(j, k)] = if interior {
                tail_images[k].evaluate(rj)
            } else {
                basis[k].evaluate(xj)
            };
        }
        rhs[j] = if interior { (problem.f)(xj) } else { (problem.g)(xj) };
    }
    let moment = tail_matrix(&nodes, &basis).transpose();
    if top.iter().chain(top_tail.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite collocation entries".into()));
    }
    Ok(CollocationSystem {
        system: SaddleSystem {
            top,
            top_tail,
            moment,
            rhs,
        },
        kernel_image,
        basis,
        tail_images,
        dropped_constant,
    })
}

/// A solved collocation expansion, able to evaluate both `s` and `L s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSolution {
    pub interpolant: Interpolant,
    pub kernel_image: MonomialSum,
    pub tail_images: Vec<MonomialSum>,
}

impl CollocationSolution {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.interpolant.evaluate(x)
    }

    pub fn apply_operator(&self, x: &[f64]) -> f64 {
        let s = &self.interpolant;
        let radial: f64 = s
            .centers
            .iter()
            .zip(&s.lambda)
            .map(|(c, l)| l * self.kernel_image.evaluate(distance(x, c)))
            .sum();
        let r = norm(x);
        let tail: f64 = self
            .tail_images
            .iter()
            .zip(&s.beta)
            .map(|(p, b)| b * p.evaluate(r))
            .sum();
        radial + tail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollocationReport {
    pub cond_before: f64,
    pub precond: Option<PrecondSummary>,
    pub residual: f64,
    /// RMSE of `f - L s` over the interior nodes.
    pub rmse_interior: f64,
    /// RMSE of `f - L s` over a held-out grid of cell centers.
    pub rmse_heldout: f64,
    /// RMSE of `g - s` over the boundary nodes.
    pub rmse_boundary: f64,
    pub dropped_constant: bool,
}

/// Assembles and solves the collocation system, then scores the operator residual.
pub fn solve_collocation(
    problem: &CollocationProblem,
    kernel: &MonomialSum,
    tail: &TailSpec,
    precondition: Option<&PrecondConfig>,
) -> Result<(CollocationSolution, CollocationReport)> {
    let assembled = assemble_collocation(problem, kernel, tail)?;
    let g = assembled.system.matrix();
    let solution = interpolate::solve_system(&assembled.system, precondition)?;
    let cond_before = solution
        .precond
        .map(|p| p.cond_before)
        .unwrap_or_else(|| crate::precond::condition_number(&g).unwrap_or(f64::INFINITY));
    let sol = CollocationSolution {
        interpolant: Interpolant {
            centers: problem.nodes.points(),
            lambda: solution.lambda.clone(),
            beta: solution.beta.clone(),
            kernel: kernel.clone(),
            basis: assembled.basis.clone(),
        },
        kernel_image: assembled.kernel_image,
        tail_images: assembled.tail_images,
    };

    let operator_rmse = |pts: &[Vec<f64>]| -> Result<f64> {
        let truth: Vec<f64> = pts.iter().map(|x| (problem.f)(x)).collect();
        let approx: Vec<f64> = pts.iter().map(|x| sol.apply_operator(x)).collect();
        rmse(&truth, &approx)
    };
    let rmse_interior = operator_rmse(&problem.nodes.interior)?;
    let rmse_heldout = operator_rmse(&problem.domain.cell_centers(HELDOUT_GRID))?;
    let boundary_truth: Vec<f64> = problem.nodes.boundary.iter().map(|x| (problem.g)(x)).collect();
    let boundary_approx: Vec<f64> = problem.nodes.boundary.iter().map(|x| sol.evaluate(x)).collect();
    let rmse_boundary = rmse(&boundary_truth, &boundary_approx)?;

    let report = CollocationReport {
        cond_before,
        precond: solution.precond,
        residual: solution.residual,
        rmse_interior,
        rmse_heldout,
        rmse_boundary,
        dropped_constant: assembled.dropped_constant,
    };
    Ok((sol, report))
}
