//! Builds every kernel family at one exponent and compares it with the thin plate spline.
//!
//! ```bash
//! cargo run --example kernel_catalog
//! ```

use frbf::kernels::{boundary_conditions, cpd_order, make_kernel, solve_coefficients, tps, Family, KernelSpec};

pub fn run_example() -> frbf::Result<()> {
    let n = 3.22;
    println!("{:<16} {:>5} {:>3}  kernel", "family", "c0", "m");
    for family in Family::ALL {
        let spec = KernelSpec::new(family, n, 1.0);
        let kernel = make_kernel(&spec)?;
        println!(
            "{:<16} {:>5} {:>3}  {kernel}",
            family.name(),
            spec.c0,
            cpd_order(&kernel)?
        );

        // the closed form agrees with a direct solve of the boundary conditions
        let (orders, rhs) = boundary_conditions(family, n, spec.c0);
        let solved = solve_coefficients(&spec.base_powers(), &orders, &rhs, spec.b)?;
        for (a, b) in kernel.coefficients().iter().zip(&solved) {
            assert!((a - b).abs() <= 1e-10 * b.abs());
        }
    }

    let three = make_kernel(&KernelSpec::new(Family::ThreeTermTps, 2.01, 1.0))?;
    println!("\n{:>6} {:>14} {:>14}", "r", "r^N log r", "three_term");
    for r in [0.1, 0.25, 0.5, 0.75, 1.0] {
        println!("{r:>6} {:>14.6e} {:>14.6e}", tps(2.01, r), three.evaluate(r));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("kernel catalog");
}
