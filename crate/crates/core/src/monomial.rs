//! Radial profiles stored as finite sums of real powers of `r`.

use std::fmt;

use serde::{Deserialize, Serialize};

pub use crate::specfun::MonomialTerm;

/// Powers closer than this (relative to their magnitude) are merged.
const POWER_MERGE_TOL: f64 = 1e-12;

/// `sum_i c_i * r^(p_i)` with pairwise distinct powers, kept in descending power order.
///
/// Kernels, tail functions and operator images all use this representation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MonomialSum {
    terms: Vec<MonomialTerm>,
}

fn same_power(a: f64, b: f64) -> bool {
    (a - b).abs() <= POWER_MERGE_TOL * a.abs().max(b.abs()).max(1.0)
}

impl MonomialSum {
    /// Builds a sum from arbitrary terms, merging like powers and dropping zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = MonomialTerm>) -> Self {
        let mut terms: Vec<MonomialTerm> = terms.into_iter().collect();
        terms.sort_by(|a, b| b.power.total_cmp(&a.power));
        let mut merged: Vec<MonomialTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if same_power(last.power, t.power) => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coefficient != 0.0);
        MonomialSum { terms: merged }
    }

    pub fn monomial(coefficient: f64, power: f64) -> Self {
        Self::new([MonomialTerm::new(coefficient, power)])
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn powers(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.power).collect()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient).collect()
    }

    pub fn min_power(&self) -> Option<f64> {
        self.terms.last().map(|t| t.power)
    }

    pub fn max_power(&self) -> Option<f64> {
        self.terms.first().map(|t| t.power)
    }

    /// Value at `r >= 0`. Positive powers vanish at the origin and `r^0` is 1 there.
    pub fn evaluate(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.coefficient * r.powf(t.power)).sum()
    }

    /// Classical derivative of integer order.
    pub fn derivative(&self, order: u32) -> MonomialSum {
        let mut terms = self.terms.clone();
        for _ in 0..order {
            terms = terms
                .into_iter()
                .filter(|t| t.power != 0.0)
                .map(|t| MonomialTerm::new(t.coefficient * t.power, t.power - 1.0))
                .collect();
        }
        MonomialSum::new(terms)
    }

    pub fn scaled(&self, factor: f64) -> MonomialSum {
        MonomialSum::new(
            self.terms
                .iter()
                .map(|t| MonomialTerm::new(t.coefficient * factor, t.power)),
        )
    }

    pub fn add(&self, other: &MonomialSum) -> MonomialSum {
        MonomialSum::new(self.terms.iter().chain(other.terms.iter()).copied())
    }
}

impl FromIterator<MonomialTerm> for MonomialSum {
    fn from_iter<I: IntoIterator<Item = MonomialTerm>>(iter: I) -> Self {
        MonomialSum::new(iter)
    }
}

fn trimmed(v: f64) -> String {
    let s = format!("{v:.12}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

impl fmt::Display for MonomialSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coefficient < 0.0 { "-" } else { "+" };
            if i == 0 {
                if t.coefficient < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}*r^{}", trimmed(t.coefficient.abs()), trimmed(t.power))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_sorts() {
        let s = MonomialSum::new([
            MonomialTerm::new(1.0, 2.0),
            MonomialTerm::new(3.0, 4.5),
            MonomialTerm::new(-0.5, 2.0),
        ]);
        assert_eq!(s.powers(), vec![4.5, 2.0]);
        assert_eq!(s.coefficients(), vec![3.0, 0.5]);
    }

    #[test]
    fn cancellation_drops_term() {
        let s = MonomialSum::new([MonomialTerm::new(1.0, 2.0), MonomialTerm::new(-1.0, 2.0)]);
        assert!(s.is_empty());
        assert_eq!(s.evaluate(0.7), 0.0);
    }

    #[test]
    fn evaluate_at_origin() {
        let s = MonomialSum::new([MonomialTerm::new(2.0, 1.5), MonomialTerm::new(-1.0, 0.5)]);
        assert_eq!(s.evaluate(0.0), 0.0);
        let with_constant = s.add(&MonomialSum::monomial(3.0, 0.0));
        assert_eq!(with_constant.evaluate(0.0), 3.0);
    }

    #[test]
    fn display() {
        let s = MonomialSum::new([MonomialTerm::new(-2.0, 3.22 + 2.0), MonomialTerm::new(4.0, 3.22)]);
        assert_eq!(s.to_string(), "-2*r^5.22 + 4*r^3.22");
        assert_eq!(MonomialSum::default().to_string(), "0");
    }

    #[test]
    fn classical_derivative() {
        // d^2/dr^2 (r^3 + 5) = 6 r
        let s = MonomialSum::new([MonomialTerm::new(1.0, 3.0), MonomialTerm::new(5.0, 0.0)]);
        let d2 = s.derivative(2);
        assert_eq!(d2.terms(), &[MonomialTerm::new(6.0, 1.0)]);
    }
}
