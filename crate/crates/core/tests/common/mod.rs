//! Checks shared by the acceptance suite and the property tests.

#![allow(dead_code)]

use std::sync::Arc;

use frbf::collocate::{
    apply_operator, operator_orders, solve_collocation, BoundaryOperator, CollocationProblem, RadialOperator,
};
use frbf::interpolate::{Interpolant, TailSpec};
use frbf::kernels::{build_kernel, cpd_order, Family, FracMode, KernelSpec};
use frbf::monomial::{MonomialSum, MonomialTerm};
use frbf::nodes::{halton_points, make_node_set, Domain, Layout, NodeOptions};
use frbf::precond::PrecondConfig;
use frbf::specfun::FracKind;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// `ln |Gamma(x)|` and the sign of `Gamma(x)`, by upward shifting and a Stirling series.
pub fn ln_gamma_oracle(x: f64) -> (f64, f64) {
    use std::f64::consts::PI;
    if x < 0.5 {
        let s = (PI * x).sin();
        let (lg, sign) = ln_gamma_oracle(1.0 - x);
        return (PI.ln() - s.abs().ln() - lg, s.signum() * sign);
    }
    let mut y = x;
    let mut prod = 1.0;
    while y < 20.0 {
        prod *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    let stirling = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series;
    (stirling - prod.ln(), 1.0)
}

/// `Gamma(s + 1) / Gamma(s - alpha + 1)` from the oracle.
pub fn ratio_oracle(s: f64, alpha: f64) -> f64 {
    let (a, sa) = ln_gamma_oracle(s + 1.0);
    let (b, sb) = ln_gamma_oracle(s - alpha + 1.0);
    sa * sb * (a - b).exp()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// A random admissible interpolation kernel.
pub fn random_kernel(rng: &mut StdRng) -> (KernelSpec, MonomialSum) {
    loop {
        let family = Family::ALL[rng.gen_range(0..4)];
        let n = rng.gen_range(2.05..5.95);
        let mode = [
            FracMode::None,
            FracMode::ExponentShift,
            FracMode::PartialFractional,
            FracMode::FullFractional,
        ][rng.gen_range(0..4)];
        let (lo, hi) = mode.alpha_range();
        let alpha = if mode == FracMode::None {
            0.0
        } else {
            rng.gen_range(lo.max(-1.0)..hi.min(1.0))
        };
        let spec = KernelSpec::new(family, n, 1.0).with_alpha(mode, alpha);
        if let Ok(kernel) = build_kernel(&spec) {
            if cpd_order(&kernel).is_ok() {
                return (spec, kernel);
            }
        }
    }
}

pub fn random_points(rng: &mut StdRng, count: usize) -> Vec<Vec<f64>> {
    let skip = rng.gen_range(0..500);
    halton_points(count, 2, skip).unwrap()
}

fn fit(points: &[Vec<f64>], values: &[f64], kernel: &MonomialSum, tail: &TailSpec) -> Result<Interpolant, String> {
    Interpolant::fit(points, values, kernel, tail, None)
        .map(|(s, _)| s)
        .map_err(|e| e.to_string())
}

/// Interpolation conditions and `||P^T lambda||_inf <= 1e-8` on random data.
pub fn check_moments(rng: &mut StdRng) -> Result<(), String> {
    let (_, kernel) = random_kernel(rng);
    let m = cpd_order(&kernel).unwrap();
    let count = rng.gen_range(15..40);
    let points = random_points(rng, count);
    let values: Vec<f64> = points.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let s = fit(&points, &values, &kernel, &TailSpec::multivariate(m, 2))?;
    let moment = s.moment_residual();
    if moment > 1e-8 {
        return Err(format!("moment residual {moment:e} for {kernel}"));
    }
    for (x, u) in points.iter().zip(&values) {
        if (s.evaluate(x) - u).abs() > 1e-8 {
            return Err(format!(
                "interpolation condition off by {:e}",
                (s.evaluate(x) - u).abs()
            ));
        }
    }
    Ok(())
}

/// Data from the tail span gives `lambda = 0` and is reproduced everywhere.
pub fn check_reproduction(rng: &mut StdRng) -> Result<(), String> {
    let (_, kernel) = random_kernel(rng);
    let m = cpd_order(&kernel).unwrap().max(2);
    let count = rng.gen_range(15..40);
    let points = random_points(rng, count);
    let (c, a, b) = (
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    );
    let f = |x: &[f64]| c + a * x[0] + b * x[1];
    let values: Vec<f64> = points.iter().map(|x| f(x)).collect();
    let s = fit(&points, &values, &kernel, &TailSpec::multivariate(m, 2))?;
    let lmax = s.lambda.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    if lmax > 1e-7 {
        return Err(format!("lambda {lmax:e} for linear data"));
    }
    for _ in 0..100 {
        let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let err = (s.evaluate(&x) - f(&x)).abs();
        if err > 1e-8 {
            return Err(format!("reproduction error {err:e}"));
        }
    }
    Ok(())
}

/// Symmetric kernel block, and a node permutation permutes lambda and keeps evaluations.
pub fn check_permutation(rng: &mut StdRng) -> Result<(), String> {
    let (_, kernel) = random_kernel(rng);
    let m = cpd_order(&kernel).unwrap();
    let tail = TailSpec::multivariate(m, 2);
    let count = rng.gen_range(15..30);
    let points = random_points(rng, count);
    let values: Vec<f64> = points.iter().map(|x| (3.0 * x[0]).sin() * x[1]).collect();
    let system =
        frbf::interpolate::assemble_interpolation(&points, &kernel, &tail, &values).map_err(|e| e.to_string())?;
    if system.top != system.top.transpose() {
        return Err("kernel block is not symmetric".into());
    }
    let s = fit(&points, &values, &kernel, &tail)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(rng);
    let p2: Vec<Vec<f64>> = order.iter().map(|&i| points[i].clone()).collect();
    let v2: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let s2 = fit(&p2, &v2, &kernel, &tail)?;
    let scale = s.lambda.iter().fold(1.0f64, |acc, l| acc.max(l.abs()));
    for (k, &i) in order.iter().enumerate() {
        if (s2.lambda[k] - s.lambda[i]).abs() > 1e-7 * scale {
            return Err(format!("lambda not permuted: {} vs {}", s2.lambda[k], s.lambda[i]));
        }
    }
    for _ in 0..20 {
        let x = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let d = (s.evaluate(&x) - s2.evaluate(&x)).abs();
        if d > 1e-10 {
            return Err(format!("evaluation changed by {d:e}"));
        }
    }
    Ok(())
}

fn random_profile(rng: &mut StdRng, min_power: f64) -> MonomialSum {
    MonomialSum::new(
        (0..rng.gen_range(1..5))
            .map(|_| MonomialTerm::new(rng.gen_range(-3.0..3.0), min_power + rng.gen_range(0.01..4.0))),
    )
}

/// `L(a f + b g) = a L f + b L g` on random profiles.
pub fn check_linearity(rng: &mut StdRng) -> Result<(), String> {
    let beta = rng.gen_range(-2.9..0.9);
    let kind = if rng.gen_bool(0.5) {
        FracKind::Caputo
    } else {
        FracKind::RiemannLiouville
    };
    let op = RadialOperator::new(beta, kind);
    let min_power = (2.0 + beta).max(0.0) + 0.05;
    let (f, g) = (random_profile(rng, min_power), random_profile(rng, min_power));
    let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let lhs = apply_operator(&op, &f.scaled(a).add(&g.scaled(b))).map_err(|e| e.to_string())?;
    let lf = apply_operator(&op, &f).map_err(|e| e.to_string())?;
    let lg = apply_operator(&op, &g).map_err(|e| e.to_string())?;
    let rhs = lf.scaled(a).add(&lg.scaled(b));
    for r in [0.1f64, 0.37, 0.8, 1.3] {
        let scale: f64 = lf
            .terms()
            .iter()
            .chain(lg.terms())
            .map(|t| (t.coefficient * r.powf(t.power)).abs())
            .sum::<f64>()
            * a.abs().max(b.abs()).max(1.0);
        let d = (lhs.evaluate(r) - rhs.evaluate(r)).abs();
        if d > 1e-12 * scale.max(1e-300) {
            return Err(format!("linearity off by {d:e} at r = {r}"));
        }
    }
    Ok(())
}

/// Collocation boundary rows and moment conditions on a small random problem.
pub fn check_collocation(rng: &mut StdRng) -> Result<(), String> {
    let beta = [-0.5, 0.0, 0.15][rng.gen_range(0..3)];
    let op = RadialOperator::new(beta, FracKind::Caputo);
    let (q, o) = operator_orders(&op, BoundaryOperator::Identity);
    let n = q + rng.gen_range(1.1..1.9);
    let spec = KernelSpec::new(Family::FalseTps, n, 1.0);
    let kernel = build_kernel(&spec).map_err(|e| e.to_string())?;
    let m = cpd_order(&kernel).unwrap();
    let domain = Domain::cube(0.0, 1.0, 2).unwrap();
    let options = NodeOptions {
        skip: rng.gen_range(0..200),
        ..Default::default()
    };
    let nodes = make_node_set(
        &domain,
        rng.gen_range(20..50),
        6,
        Layout::HaltonInteriorCartesianBoundary,
        &options,
    )
    .unwrap();
    let problem = CollocationProblem::new(
        domain,
        nodes.clone(),
        op,
        Arc::new(|x: &[f64]| x[0] * x[1]),
        Arc::new(|x: &[f64]| (x[0] + x[1]).cos()),
    )
    .map_err(|e| e.to_string())?;
    let (sol, report) = solve_collocation(
        &problem,
        &kernel,
        &TailSpec::radial(m, 2, o),
        Some(&PrecondConfig::default()),
    )
    .map_err(|e| e.to_string())?;
    let moment = sol.interpolant.moment_residual();
    if moment > 1e-7 {
        return Err(format!("collocation moment residual {moment:e}"));
    }
    for x in &nodes.boundary {
        let d = (sol.evaluate(x) - (x[0] + x[1]).cos()).abs();
        if d > 1e-7 {
            return Err(format!("boundary condition off by {d:e}"));
        }
    }
    if report.precond.map(|p| p.cond_after > 10.0).unwrap_or(true) {
        return Err("preconditioner target missed".into());
    }
    Ok(())
}
