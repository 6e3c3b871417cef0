//! Halton interior nodes plus Cartesian boundary nodes, written as CSV.
//!
//! ```bash
//! cargo run --example halton_nodes > nodes.csv
//! ```

use frbf::nodes::{make_node_set, Domain, Layout, NodeOptions, NodeSet};

pub fn run_example() -> frbf::Result<()> {
    let domain = Domain::cube(0.28, 1.48, 2)?;
    let options = NodeOptions {
        boundary_ring: Some(NodeOptions::DEFAULT_RING_OFFSET),
        ..Default::default()
    };
    let nodes = make_node_set(&domain, 100, 11, Layout::HaltonInteriorCartesianBoundary, &options)?;
    eprintln!(
        "{} interior (with ring), {} boundary",
        nodes.n_interior(),
        nodes.n_boundary()
    );

    let mut csv = Vec::new();
    nodes.write_csv(&mut csv)?;
    assert_eq!(NodeSet::read_csv(csv.as_slice())?, nodes);
    if std::env::var_os("FRBF_EXAMPLE_QUIET").is_none() {
        print!("{}", String::from_utf8_lossy(&csv));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("halton nodes");
}
