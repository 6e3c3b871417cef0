//! Runs every example's `run_example` so the examples stay working.

#[path = "../examples/fractional_collocation.rs"]
mod fractional_collocation;
#[path = "../examples/fractional_kernels.rs"]
mod fractional_kernels;
#[path = "../examples/halton_nodes.rs"]
mod halton_nodes;
#[path = "../examples/interpolation_sweep.rs"]
mod interpolation_sweep;
#[path = "../examples/kernel_catalog.rs"]
mod kernel_catalog;
#[path = "../examples/poisson_collocation.rs"]
mod poisson_collocation;
#[path = "../examples/preconditioning.rs"]
mod preconditioning;

fn quiet() {
    std::env::set_var("FRBF_EXAMPLE_QUIET", "1");
}

#[test]
fn kernel_catalog_runs() {
    quiet();
    kernel_catalog::run_example().unwrap();
}

#[test]
fn fractional_kernels_runs() {
    quiet();
    fractional_kernels::run_example().unwrap();
}

#[test]
fn halton_nodes_runs() {
    quiet();
    halton_nodes::run_example().unwrap();
}

#[test]
fn interpolation_sweep_runs() {
    quiet();
    interpolation_sweep::run_example().unwrap();
}

#[test]
fn preconditioning_runs() {
    quiet();
    preconditioning::run_example().unwrap();
}

#[test]
fn poisson_collocation_runs() {
    quiet();
    poisson_collocation::run_example().unwrap();
}

#[test]
fn fractional_collocation_runs() {
    quiet();
    fractional_collocation::run_example().unwrap();
}
