//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use rand::Rng;

/// Independent JWA evaluation used as an oracle: explicit selection sort
/// (descending, ties by ascending index), pairwise products, normalization,
/// dot product. Deliberately avoids every type and function of the crate
/// under test.
pub fn brute_force_jwa(x: &[f64], w: &[f64], v: &[f64]) -> f64 {
    let n = x.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let mut best = 0;
        for candidate in 1..remaining.len() {
            if x[remaining[candidate]] > x[remaining[best]] {
                best = candidate;
            }
        }
        order.push(remaining.remove(best));
    }

    let products: Vec<f64> = order
        .iter()
        .zip(v)
        .map(|(&source, &order_weight)| w[source] * order_weight)
        .collect();
    let total: f64 = products.iter().sum();

    let mut aggregate = 0.0;
    for (product, &source) in products.iter().zip(&order) {
        aggregate += (product / total) * x[source];
    }
    aggregate
}

/// Strictly positive random weights normalized to unit sum.
pub fn random_positive_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / sum).collect()
}

/// Random evidence values in `lo..hi`.
pub fn random_values<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}
