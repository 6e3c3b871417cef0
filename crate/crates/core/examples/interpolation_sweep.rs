//! Alpha sweep of the exponent-shifted false TPS interpolating the sin8 target.
//!
//! ```bash
//! cargo run --release --example interpolation_sweep
//! ```

use frbf::experiment::{run_interpolation_sweep, ExperimentConfig};
use frbf::kernels::{Family, FracMode};

pub fn run_example() -> frbf::Result<()> {
    let config = ExperimentConfig {
        family: Family::FalseTps,
        n: 3.22,
        frac_mode: FracMode::ExponentShift,
        alpha_start: Some(0.0),
        alpha_stop: Some(0.9),
        alpha_step: Some(0.1),
        domain: [0.28, 1.48],
        ..Default::default()
    };
    let table = run_interpolation_sweep(&config)?;
    println!("m = {}, config {}", config.tail_order(), table.config_hash);
    println!("{:>5} {:>12} {:>12} {:>12}", "alpha", "rmse", "heldout", "cond");
    for row in &table.rows {
        match (row.rmse, row.rmse_heldout, row.cond) {
            (Some(r), Some(h), Some(c)) => println!("{:>5} {r:>12.3e} {h:>12.3e} {c:>12.3e}", row.alpha),
            _ => println!("{:>5} {}", row.alpha, row.status),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("interpolation sweep");
}
