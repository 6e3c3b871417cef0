//! Node generation on hyper-rectangles: Halton points inside, a Cartesian grid on the faces.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

const PRIMES: [u64; MAX_DIM] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Two nodes closer than this are duplicates.
pub const MIN_NODE_SEPARATION: f64 = 1e-12;

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut factor = inv_base;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * factor;
        index /= base;
        factor *= inv_base;
    }
    result
}

/// Points `skip + 1 ..= skip + n` of the Halton sequence in `(0, 1)^d`, bases 2, 3, 5, ...
pub fn halton_points(n: usize, d: usize, skip: u64) -> Result<Vec<Vec<f64>>> {
    if d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    Ok((0..n as u64)
        .map(|i| {
            PRIMES[..d]
                .iter()
                .map(|&base| radical_inverse(skip + i + 1, base))
                .collect()
        })
        .collect())
}

/// Axis-aligned box `[a_1, b_1] x ... x [a_d, b_d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::LengthMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty() || lower.len() > MAX_DIM {
            return Err(Error::Dimension(lower.len()));
        }
        for (i, (a, b)) in lower.iter().zip(&upper).enumerate() {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::Domain(format!("axis {i}: need lower < upper, got [{a}, {b}]")));
            }
        }
        Ok(Domain { lower, upper })
    }

    /// `[a, b]^d`
    pub fn cube(a: f64, b: f64, d: usize) -> Result<Self> {
        Domain::new(vec![a; d], vec![b; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Kernel scale for this domain: the largest upper bound.
    pub fn scale(&self) -> f64 {
        self.upper.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (a, b))| a <= v && v <= b)
    }

    pub fn on_boundary(&self, x: &[f64]) -> bool {
        self.contains(x)
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .any(|(v, (a, b))| v == a || v == b)
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&vec![0.0; self.dim()])
    }

    /// Maps a point of the unit cube affinely into the box shrunk by `margin` on each side.
    fn map_unit(&self, u: &[f64], margin: f64) -> Vec<f64> {
        u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (a, b))| a + margin + (b - a - 2.0 * margin) * t)
            .collect()
    }

    /// Uniform `k^d` grid of cell centers, strictly inside the box.
    pub fn cell_centers(&self, k: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| (0..k).map(|i| a + (b - a) * (i as f64 + 0.5) / k as f64).collect())
            .collect();
        cartesian(&axes)
    }

    /// Uniform `k^d` grid including the faces.
    pub fn grid(&self, k: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| linspace(a, b, k))
            .collect();
        cartesian(&axes)
    }
}

fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..k)
            .map(|i| {
                if i == k - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (k - 1) as f64
                }
            })
            .collect(),
    }
}

/// Lexicographic product of per-axis values, last axis fastest.
fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, values| {
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect()
    })
}

/// Grid points on the faces of `[lower, upper]`, face by face (axis 0 low, axis 0 high,
/// axis 1 low, ...), each shared point emitted once.
fn face_points(lower: &[f64], upper: &[f64], per_side: usize) -> Vec<Vec<f64>> {
    let d = lower.len();
    if per_side == 0 {
        return Vec::new();
    }
    let axes: Vec<Vec<f64>> = lower
        .iter()
        .zip(upper)
        .map(|(&a, &b)| linspace(a, b, per_side))
        .collect();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for axis in 0..d {
        for face_value in [lower[axis], upper[axis]] {
            let mut face_axes = axes.clone();
            face_axes[axis] = vec![face_value];
            for p in cartesian(&face_axes) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    HaltonInteriorCartesianBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeOptions {
    /// Number of leading Halton points to discard.
    pub skip: u64,
    /// Distance kept between Halton points and the faces.
    pub inset_margin: f64,
    /// Adds a Cartesian ring inset by this fraction of each side length.
    pub boundary_ring: Option<f64>,
}

impl Default for NodeOptions {
    fn default() -> Self {
        NodeOptions {
            skip: 0,
            inset_margin: 0.0,
            boundary_ring: None,
        }
    }
}

impl NodeOptions {
    pub const DEFAULT_RING_OFFSET: f64 = 0.02;
}

/// Interior and boundary nodes in a fixed order: interior first, then boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    pub interior: Vec<Vec<f64>>,
    pub boundary: Vec<Vec<f64>>,
}

impl NodeSet {
    pub fn new(interior: Vec<Vec<f64>>, boundary: Vec<Vec<f64>>) -> Result<Self> {
        let set = NodeSet { interior, boundary };
        set.check_distinct()?;
        Ok(set)
    }

    pub fn n_interior(&self) -> usize {
        self.interior.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary.len()
    }

    pub fn len(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> Option<usize> {
        self.iter().next().map(|p| p.len())
    }

    /// All nodes, interior first.
    pub fn iter(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.interior.iter().chain(&self.boundary)
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.iter().cloned().collect()
    }

    pub fn check_distinct(&self) -> Result<()> {
        let all: Vec<&Vec<f64>> = self.iter().collect();
        for i in 0..all.len() {
            for j in 0..i {
                if distance(all[i], all[j]) <= MIN_NODE_SEPARATION {
                    return Err(Error::DuplicateNode(j, i));
                }
            }
        }
        Ok(())
    }

    /// CSV with columns `x1..xd,kind`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let d = self.dim().unwrap_or(0);
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
        header.push("kind".into());
        w.write_record(&header)?;
        for (kind, points) in [("interior", &self.interior), ("boundary", &self.boundary)] {
            for p in points {
                let mut row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
                row.push(kind.into());
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let d = r.headers()?.len().saturating_sub(1);
        let (mut interior, mut boundary) = (Vec::new(), Vec::new());
        for record in r.records() {
            let record = record?;
            let point = record
                .iter()
                .take(d)
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Io(format!("bad coordinate `{s}`: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            match record.get(d).map(str::trim) {
                Some("interior") => interior.push(point),
                Some("boundary") => boundary.push(point),
                other => return Err(Error::Io(format!("bad node kind {other:?}"))),
            }
        }
        NodeSet::new(interior, boundary)
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Halton interior nodes mapped into the domain and `boundary_per_side` equally spaced
/// nodes along each edge of every face, corners counted once.
pub fn make_node_set(
    domain: &Domain,
    n_interior: usize,
    boundary_per_side: usize,
    layout: Layout,
    options: &NodeOptions,
) -> Result<NodeSet> {
    let Layout::HaltonInteriorCartesianBoundary = layout;
    let d = domain.dim();
    let mut interior: Vec<Vec<f64>> = halton_points(n_interior, d, options.skip)?
        .iter()
        .map(|u| domain.map_unit(u, options.inset_margin))
        .collect();
    if let Some(fraction) = options.boundary_ring {
        let (lo, hi): (Vec<f64>, Vec<f64>) = domain
            .lower
            .iter()
            .zip(&domain.upper)
            .map(|(a, b)| {
                let offset = fraction * (b - a);
                (a + offset, b - offset)
            })
            .unzip();
        interior.extend(face_points(&lo, &hi, boundary_per_side));
    }
    let boundary = face_points(&domain.lower, &domain.upper, boundary_per_side);
    NodeSet::new(interior, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn halton_prefixes() {
        let pts = halton_points(3, 2, 0).unwrap();
        let first: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let second: Vec<f64> = pts.iter().map(|p| p[1]).collect();
        assert_eq!(first, vec![0.5, 0.25, 0.75]);
        assert_relative_eq!(second[0], 1.0 / 3.0);
        assert_relative_eq!(second[1], 2.0 / 3.0);
        assert_relative_eq!(second[2], 1.0 / 9.0);
        assert!(halton_points(0, 3, 0).unwrap().is_empty());
        assert_eq!(halton_points(2, 9, 0), Err(Error::Dimension(9)));
    }

    #[test]
    fn halton_skip_shifts_sequence() {
        let a = halton_points(5, 3, 0).unwrap();
        let b = halton_points(3, 3, 2).unwrap();
        assert_eq!(&a[2..], &b[..]);
    }

    fn star_discrepancy(mut xs: Vec<f64>) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, x)| ((i as f64 + 1.0) / n - x).max(x - i as f64 / n))
            .fold(0.0, f64::max)
    }

    #[test]
    fn base_two_discrepancy_bound() {
        for n in [16usize, 64, 256] {
            let xs: Vec<f64> = halton_points(n, 1, 0).unwrap().into_iter().map(|p| p[0]).collect();
            let bound = (2.0 * (n as f64).log2() + 2.0) / n as f64;
            assert!(star_discrepancy(xs) <= bound);
        }
    }

    #[test]
    fn corners_only() {
        let dom = Domain::cube(0.0, 1.0, 2).unwrap();
        let set = make_node_set(
            &dom,
            0,
            2,
            Layout::HaltonInteriorCartesianBoundary,
            &NodeOptions::default(),
        )
        .unwrap();
        assert_eq!(set.n_boundary(), 4);
    }

    #[test]
    fn corners_and_midpoints() {
        let dom = Domain::cube(0.0, 1.0, 2).unwrap();
        let set = make_node_set(
            &dom,
            0,
            3,
            Layout::HaltonInteriorCartesianBoundary,
            &NodeOptions::default(),
        )
        .unwrap();
        assert_eq!(set.n_boundary(), 8);
        let mut pts = set.boundary.clone();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected = vec![
            vec![0.0, 0.0],
            vec![0.0, 0.5],
            vec![0.0, 1.0],
            vec![0.5, 0.0],
            vec![0.5, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 0.5],
            vec![1.0, 1.0],
        ];
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pts, expected);
    }

    #[test]
    fn forty_boundary_nodes_from_eleven_per_side() {
        let dom = Domain::cube(0.28, 1.48, 2).unwrap();
        let set = make_node_set(
            &dom,
            100,
            11,
            Layout::HaltonInteriorCartesianBoundary,
            &NodeOptions::default(),
        )
        .unwrap();
        assert_eq!(set.n_boundary(), 40);
        assert_eq!(set.n_interior(), 100);
        assert_eq!(dom.scale(), 1.48);
    }

    #[test]
    fn first_interior_node() {
        let dom = Domain::cube(0.28, 1.48, 2).unwrap();
        let set = make_node_set(
            &dom,
            1,
            0,
            Layout::HaltonInteriorCartesianBoundary,
            &NodeOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(set.interior[0][0], 0.88, max_relative = 1e-15);
        assert_relative_eq!(set.interior[0][1], 0.68, max_relative = 1e-15);
    }

    #[test]
    fn three_dimensional_faces() {
        let dom = Domain::cube(-1.0, 1.0, 3).unwrap();
        let set = make_node_set(
            &dom,
            10,
            3,
            Layout::HaltonInteriorCartesianBoundary,
            &NodeOptions::default(),
        )
        .unwrap();
        // 27 grid points minus the center
        assert_eq!(set.n_boundary(), 26);
        assert!(set.boundary.iter().all(|p| dom.on_boundary(p)));
    }

    #[test]
    fn ring_lies_inside() {
        let dom = Domain::cube(0.0, 1.0, 2).unwrap();
        let opts = NodeOptions {
            boundary_ring: Some(NodeOptions::DEFAULT_RING_OFFSET),
            ..Default::default()
        };
        let set = make_node_set(&dom, 20, 5, Layout::HaltonInteriorCartesianBoundary, &opts).unwrap();
        assert_eq!(set.n_interior(), 20 + 16);
        assert!(set.interior.iter().all(|p| dom.contains(p) && !dom.on_boundary(p)));
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = NodeSet::new(vec![vec![0.5, 0.5]], vec![vec![0.5, 0.5]]).unwrap_err();
        assert_eq!(err, Error::DuplicateNode(0, 1));
    }

    #[test]
    fn csv_roundtrip() {
        let dom = Domain::cube(0.28, 1.48, 2).unwrap();
        let set = make_node_set(
            &dom,
            7,
            3,
            Layout::HaltonInteriorCartesianBoundary,
            &NodeOptions::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,kind\n"));
        assert_eq!(NodeSet::read_csv(buf.as_slice()).unwrap(), set);
    }

    proptest! {
        #[test]
        fn nodes_respect_domain(n in 0usize..60, k in 0usize..9, skip in 0u64..50,
                                a in -2.0f64..1.0, w in 0.1f64..3.0, d in 1usize..4) {
            let dom = Domain::cube(a, a + w, d).unwrap();
            let opts = NodeOptions { skip, ..Default::default() };
            let set = make_node_set(&dom, n, k, Layout::HaltonInteriorCartesianBoundary, &opts).unwrap();
            for p in &set.interior {
                prop_assert!(dom.contains(p) && !dom.on_boundary(p));
            }
            for p in &set.boundary {
                prop_assert!(dom.on_boundary(p));
            }
            for u in halton_points(n, d, skip).unwrap() {
                prop_assert!(u.iter().all(|&x| x > 0.0 && x < 1.0));
            }
        }
    }
}
