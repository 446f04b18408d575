//! The five aggregation operators and the descending-rank machinery.
//!
//! LWA attaches weights to sources by identity, OWA to rank positions of the
//! sorted evidence. OWAWA and SDOWA mix the two *outputs*; JWA instead merges
//! the two *weight vectors* by perturbing the rank-reordered linear weights
//! with the order weights, so the schemes interact rather than average.

use crate::composition::Composition;
use crate::error::{Error, Result};
use std::fmt;

/// Evidence contributed by the sources, one value per source.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    values: Vec<f64>,
}

impl Evidence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooFewParts(values.len()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The permutation that sorts evidence into descending order.
///
/// Ties are broken by ascending source index so the permutation is
/// deterministic. Tied sources are also reported explicitly: joint weights
/// genuinely depend on which tied source takes which rank, so callers can see
/// when that rule was exercised.
#[derive(Debug, Clone, PartialEq)]
pub struct RankPermutation {
    order: Vec<usize>,
    tie_groups: Vec<Vec<usize>>,
}

impl RankPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
            tie_groups: Vec::new(),
        }
    }

    /// Source indices in descending order of their evidence.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Groups of source indices (ascending within each group) that shared a
    /// value; empty when the evidence had no ties.
    pub fn tie_groups(&self) -> &[Vec<usize>] {
        &self.tie_groups
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &s)| i == s)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Values rearranged into rank order: entry `i` is `values[order[i]]`.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        self.order.iter().map(|&i| values[i]).collect()
    }
}

/// Which operator produced a result, carrying the blend parameter when the
/// operator has one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorTag {
    Lwa,
    Owa,
    Owawa { alpha: f64 },
    Sdowa { blend: f64 },
    Jwa,
}

impl OperatorTag {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorTag::Lwa => "LWA",
            OperatorTag::Owa => "OWA",
            OperatorTag::Owawa { .. } => "OWAWA",
            OperatorTag::Sdowa { .. } => "SDOWA",
            OperatorTag::Jwa => "JWA",
        }
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An aggregate value together with the weights and permutation that produced
/// it, for explanation.
///
/// `effective_weights` is aligned to `permutation`: weight `i` applies to the
/// evidence at rank `i` (for LWA the permutation is the identity, so the
/// weights align with sources directly).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregationResult {
    pub value: f64,
    pub effective_weights: Composition,
    pub permutation: RankPermutation,
    pub tag: OperatorTag,
}

/// Deterministic descending sort of the evidence: stable, ties broken by
/// ascending source index.
pub fn rank_permutation(x: &Evidence) -> RankPermutation {
    let values = x.values();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .expect("evidence values are finite")
            .then(a.cmp(&b))
    });

    let mut tie_groups = Vec::new();
    let mut start = 0;
    for end in 1..=order.len() {
        if end == order.len() || values[order[end]] != values[order[start]] {
            if end - start > 1 {
                tie_groups.push(order[start..end].to_vec());
            }
            start = end;
        }
    }
    RankPermutation { order, tie_groups }
}

fn check_dims(x: &Evidence, weights: &Composition) -> Result<()> {
    if x.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: weights.len(),
        });
    }
    Ok(())
}

fn dot(weights: &[f64], values: &[f64]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// Linear weighted average: weights attach to sources by identity.
pub fn lwa(x: &Evidence, w: &Composition) -> Result<AggregationResult> {
    check_dims(x, w)?;
    Ok(AggregationResult {
        value: dot(w.parts(), x.values()),
        effective_weights: w.clone(),
        permutation: RankPermutation::identity(x.len()),
        tag: OperatorTag::Lwa,
    })
}

/// Ordered weighted average: weight `i` attaches to the `i`-th largest value
/// (so `v.parts()[0]` applies to the maximum).
pub fn owa(x: &Evidence, v: &Composition) -> Result<AggregationResult> {
    check_dims(x, v)?;
    let permutation = rank_permutation(x);
    let value = dot(v.parts(), &permutation.apply(x.values()));
    Ok(AggregationResult {
        value,
        effective_weights: v.clone(),
        permutation,
        tag: OperatorTag::Owa,
    })
}

/// Convex mixture of LWA and OWA outputs: `alpha*LWA + (1-alpha)*OWA`.
pub fn owawa(
    x: &Evidence,
    w: &Composition,
    v: &Composition,
    alpha: f64,
) -> Result<AggregationResult> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let linear = lwa(x, w)?;
    let ordered = owa(x, v)?;
    let value = alpha * linear.value + (1.0 - alpha) * ordered.value;
    let w_pi = w.reordered(ordered.permutation.order())?;
    let effective_weights = Composition::blend(&w_pi, v, alpha)?;
    Ok(AggregationResult {
        value,
        effective_weights,
        permutation: ordered.permutation,
        tag: OperatorTag::Owawa { alpha },
    })
}

/// LWA/OWA mixture whose blend is the ratio of the weight vectors' standard
/// deviations: `G = sd(w) / (sd(w) + sd(v))`.
pub fn sdowa(x: &Evidence, w: &Composition, v: &Composition) -> Result<AggregationResult> {
    let sd_w = population_sd(w.parts())?;
    let sd_v = population_sd(v.parts())?;
    // Both uniform makes the ratio 0/0, but then LWA = OWA = mean and any
    // blend yields the same value; 0.5 keeps G total.
    let blend = if sd_w + sd_v == 0.0 {
        0.5
    } else {
        sd_w / (sd_w + sd_v)
    };
    let linear = lwa(x, w)?;
    let ordered = owa(x, v)?;
    let value = blend * linear.value + (1.0 - blend) * ordered.value;
    let w_pi = w.reordered(ordered.permutation.order())?;
    let effective_weights = Composition::blend(&w_pi, v, blend)?;
    Ok(AggregationResult {
        value,
        effective_weights,
        permutation: ordered.permutation,
        tag: OperatorTag::Sdowa { blend },
    })
}

/// The rank permutation plus the joint weights `w` (reordered by rank)
/// perturbed with `v`, exposed separately so callers can inspect how the
/// source and evidence weightings interact.
pub fn joint_weights(
    x: &Evidence,
    w: &Composition,
    v: &Composition,
) -> Result<(RankPermutation, Composition)> {
    check_dims(x, w)?;
    check_dims(x, v)?;
    let permutation = rank_permutation(x);
    let joint = w.reordered(permutation.order())?.perturb(v)?;
    Ok((permutation, joint))
}

/// Joint weighted average: the joint weights applied to the rank-ordered
/// evidence.
pub fn jwa(x: &Evidence, w: &Composition, v: &Composition) -> Result<AggregationResult> {
    let (permutation, joint) = joint_weights(x, w, v)?;
    let value = dot(joint.parts(), &permutation.apply(x.values()));
    Ok(AggregationResult {
        value,
        effective_weights: joint,
        permutation,
        tag: OperatorTag::Jwa,
    })
}

/// Standard deviation with divisor `n`.
pub fn population_sd(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewParts(values.len()));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok(variance.sqrt())
}
