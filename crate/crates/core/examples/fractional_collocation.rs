//! Alpha sweep of the collocation problem with `beta = -0.5` and the rational target.
//! Values of alpha that break `N > q + alpha` or make `N - alpha` an integer are skipped.
//!
//! ```bash
//! cargo run --release --example fractional_collocation
//! ```

use frbf::experiment::{run_collocation_sweep, ExperimentConfig};
use frbf::kernels::{Family, FracMode};
use frbf::problems::Problem;

pub fn run_example() -> frbf::Result<()> {
    let config = ExperimentConfig {
        family: Family::FalseTps,
        n: 3.55,
        beta: -0.5,
        frac_mode: FracMode::FullFractional,
        alpha_start: Some(-1.9),
        alpha_stop: Some(1.9),
        alpha_step: Some(0.4),
        problem: Some(Problem::RationalCos),
        ni: 150,
        ..Default::default()
    };
    let table = run_collocation_sweep(&config)?;
    println!("m = {}", config.tail_order());
    for row in &table.rows {
        println!(
            "{:>5} {:>12.3e} {:>8.3} {}",
            row.alpha,
            row.rmse.unwrap_or(f64::NAN),
            row.cond.unwrap_or(f64::NAN),
            row.status
        );
    }
    for s in &table.skipped {
        println!("{:>5} skipped: {}", s.alpha, s.reason);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fractional collocation");
}
