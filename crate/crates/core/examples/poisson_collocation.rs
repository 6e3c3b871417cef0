//! Kansa collocation of the Poisson problem with the sin8 solution, using the
//! operator in its classical limit.
//!
//! ```bash
//! cargo run --release --example poisson_collocation
//! ```

use std::sync::Arc;

use frbf::collocate::{operator_orders, solve_collocation, CollocationProblem, RadialOperator};
use frbf::interpolate::TailSpec;
use frbf::kernels::{build_kernel, cpd_order_over_alpha, validate_restrictions, Family, FracMode, KernelSpec};
use frbf::nodes::{make_node_set, Domain, Layout, NodeOptions};
use frbf::precond::PrecondConfig;
use frbf::problems::Problem;
use frbf::specfun::FracKind;

pub fn run_example() -> frbf::Result<()> {
    let domain = Domain::cube(0.0, 1.0, 2)?;
    let options = NodeOptions {
        boundary_ring: Some(NodeOptions::DEFAULT_RING_OFFSET),
        ..Default::default()
    };
    let nodes = make_node_set(&domain, 400, 21, Layout::HaltonInteriorCartesianBoundary, &options)?;
    let operator = RadialOperator::new(1e-6, FracKind::Caputo);
    let p = Problem::Sin8Colloc;
    let problem = CollocationProblem::new(domain, nodes, operator, Arc::new(p.source()), Arc::new(p.solution()))?;
    let (q, o) = operator_orders(&operator, problem.boundary);

    let spec = KernelSpec::new(Family::FalseTps, 4.255, 1.0)
        .with_alpha(FracMode::FullFractional, -1.5)
        .with_kind(FracKind::Caputo);
    validate_restrictions(&spec, q)?;
    let (lo, hi) = FracMode::FullFractional.alpha_range();
    let tail = TailSpec::radial(cpd_order_over_alpha(&spec, lo, hi), 2, o);
    let kernel = build_kernel(&spec)?;

    let (solution, report) = solve_collocation(&problem, &kernel, &tail, Some(&PrecondConfig::default()))?;
    println!("q = {q}, o = {o:.6}, m = {}", tail.m);
    println!("cond(G) = {:.3e}, {:?}", report.cond_before, report.precond);
    println!(
        "residual at nodes {:.2e}, held out {:.3e}",
        report.rmse_interior, report.rmse_heldout
    );
    let x = [0.4, 0.7];
    println!(
        "u(0.4, 0.7) = {:.6}, s = {:.6}",
        p.solution()(&x),
        solution.evaluate(&x)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("poisson collocation");
}
