//! Shifted-QR preconditioning of an interpolation system.
//!
//! ```bash
//! cargo run --release --example preconditioning
//! ```

use frbf::interpolate::{assemble_interpolation, solve_system, TailSpec};
use frbf::kernels::{make_kernel, Family, KernelSpec};
use frbf::nodes::{make_node_set, Domain, Layout, NodeOptions};
use frbf::precond::{precondition, PrecondConfig};
use frbf::problems::sin8;

pub fn run_example() -> frbf::Result<()> {
    let domain = Domain::cube(0.28, 1.48, 2)?;
    let nodes = make_node_set(
        &domain,
        100,
        11,
        Layout::HaltonInteriorCartesianBoundary,
        &NodeOptions::default(),
    )?;
    let points = nodes.points();
    let values: Vec<f64> = points.iter().map(|x| sin8(x)).collect();
    let kernel = make_kernel(&KernelSpec::new(Family::FourTerm, 2.55, 1.48))?;
    let system = assemble_interpolation(&points, &kernel, &TailSpec::multivariate(3, 2), &values)?;

    let config = PrecondConfig::default();
    let pre = precondition(&system.matrix(), &system.rhs, &config)?;
    println!("cond(G)   = {:.3e}", pre.cond_before);
    println!("cond(G_M) = {:.3} at n = {}", pre.cond_after, pre.n);

    let direct = solve_system(&system, None)?;
    let shifted = solve_system(&system, Some(&config))?;
    let diff = direct
        .lambda
        .iter()
        .zip(&shifted.lambda)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = direct.lambda.iter().map(|a| a * a).sum::<f64>().sqrt();
    println!("relative difference of the weights: {:.2e}", diff / scale);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("preconditioning");
}
