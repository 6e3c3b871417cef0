//! The three fractional variants of the false TPS kernel.
//!
//! ```bash
//! cargo run --example fractional_kernels
//! ```

use frbf::kernels::{build_kernel, cpd_order, cpd_order_over_alpha, Family, FracMode, KernelSpec};
use frbf::specfun::FracKind;

pub fn run_example() -> frbf::Result<()> {
    let base = KernelSpec::new(Family::FalseTps, 3.22, 1.0);
    for (mode, alpha) in [
        (FracMode::None, 0.0),
        (FracMode::ExponentShift, 0.4),
        (FracMode::PartialFractional, -0.6),
        (FracMode::FullFractional, 1.3),
    ] {
        let spec = base.with_alpha(mode, alpha);
        let kernel = build_kernel(&spec)?;
        let (lo, hi) = mode.alpha_range();
        println!(
            "{:<18} alpha = {alpha:>5}  m = {} (over range {})  {kernel}",
            mode.name(),
            cpd_order(&kernel)?,
            cpd_order_over_alpha(&spec, lo, hi),
        );
    }

    // Caputo and Riemann-Liouville agree on the kernel's powers
    let rl = build_kernel(&base.with_alpha(FracMode::FullFractional, 0.7))?;
    let caputo = build_kernel(
        &base
            .with_alpha(FracMode::FullFractional, 0.7)
            .with_kind(FracKind::Caputo),
    )?;
    assert_eq!(rl, caputo);

    // an integer N - alpha is rejected
    let err = build_kernel(&base.with_alpha(FracMode::FullFractional, 0.22)).unwrap_err();
    println!("N - alpha = 3: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("fractional kernels");
}
