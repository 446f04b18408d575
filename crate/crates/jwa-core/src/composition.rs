//! Simplex algebra for convex weight vectors.
//!
//! Linear weights, order weights, and the joint weights produced by
//! perturbing one with the other are all *compositions*: vectors of
//! non-negative parts constrained to sum to one. This module provides
//! construction, closure (normalization to unit sum), the uniform identity,
//! and perturbation (compositional addition: component-wise product followed
//! by closure).

use crate::error::{Error, Result};

/// Tolerated deviation of an input weight vector's sum from 1 before it is
/// rejected. Forgiving of hand-entered weights; construction renormalizes
/// whatever drift remains.
pub const INPUT_SUM_TOLERANCE: f64 = 1e-6;

/// Totals at or below this are treated as degenerate when normalizing.
pub const DEGENERATE_TOTAL: f64 = 1e-12;

/// A point on the standard simplex: non-negative parts summing to one.
///
/// Construction canonicalizes by dividing by the actual sum, so equivalent
/// inputs produce the same representation. Values are immutable after
/// construction and every operation is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    parts: Vec<f64>,
}

impl Composition {
    /// Build from parts that already sum to (approximately) one.
    ///
    /// The sum may drift from 1 by at most [`INPUT_SUM_TOLERANCE`]; the
    /// parts are then renormalized to sum exactly.
    pub fn new(parts: Vec<f64>) -> Result<Self> {
        Self::validate_parts(&parts)?;
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > INPUT_SUM_TOLERANCE {
            return Err(Error::SumOutOfTolerance {
                sum,
                tolerance: INPUT_SUM_TOLERANCE,
            });
        }
        Ok(Self::scaled(parts, sum))
    }

    /// Closure: normalize arbitrary non-negative magnitudes to unit sum.
    pub fn closure(raw: &[f64]) -> Result<Self> {
        Self::validate_parts(raw)?;
        let sum: f64 = raw.iter().sum();
        if sum <= DEGENERATE_TOTAL {
            return Err(Error::ZeroTotal(sum));
        }
        Ok(Self::scaled(raw.to_vec(), sum))
    }

    /// The uniform composition `(1/n, ..., 1/n)`, the perturbation identity.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewParts(n));
        }
        Ok(Self {
            parts: vec![1.0 / n as f64; n],
        })
    }

    /// Compositional addition: component-wise product followed by closure.
    ///
    /// Fails with [`Error::DegeneratePerturbation`] when the two
    /// compositions have disjoint support, i.e. every pairwise product
    /// vanishes and no joint weighting exists.
    pub fn perturb(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let products: Vec<f64> = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a * b)
            .collect();
        let total: f64 = products.iter().sum();
        if total <= DEGENERATE_TOTAL {
            return Err(Error::DegeneratePerturbation);
        }
        Ok(Self::scaled(products, total))
    }

    /// Convex blend `t*a + (1-t)*b`. `t` must lie in `[0, 1]`.
    pub fn blend(a: &Self, b: &Self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::AlphaOutOfRange(t));
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let parts: Vec<f64> = a
            .parts
            .iter()
            .zip(&b.parts)
            .map(|(x, y)| t * x + (1.0 - t) * y)
            .collect();
        let sum: f64 = parts.iter().sum();
        Ok(Self::scaled(parts, sum))
    }

    /// Parts rearranged so part `i` of the result is part `order[i]` of
    /// `self`. `order` must be a permutation of `0..len`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::DimensionMismatch {
                left: order.len(),
                right: self.len(),
            });
        }
        Ok(Self {
            parts: order.iter().map(|&i| self.parts[i]).collect(),
        })
    }

    pub fn parts(&self) -> &[f64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_part(&self) -> f64 {
        self.parts.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    fn validate_parts(parts: &[f64]) -> Result<()> {
        if parts.len() < 2 {
            return Err(Error::TooFewParts(parts.len()));
        }
        for (index, &value) in parts.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativePart { index, value });
            }
        }
        Ok(())
    }

    fn scaled(mut parts: Vec<f64>, total: f64) -> Self {
        for p in &mut parts {
            *p /= total;
        }
        Self { parts }
    }
}
