//! Weight-specification files (TOML): `linear_weights`, `order_weights`, and
//! an optional `alpha` for OWAWA.
//!
//! Either weight vector may be a plain array or a keyed table. Linear weights
//! key by source name; order weights key by rank label (`max`,
//! `mid`/`mid1`..`midN`, `min`) and are converted once, at parse time, to the
//! descending convention where the first weight applies to the largest value.

use crate::error::CliError;
use jwa_core::Composition;
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpecFile {
    linear_weights: WeightEntry,
    order_weights: WeightEntry,
    alpha: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum WeightEntry {
    List(Vec<f64>),
    Named(BTreeMap<String, f64>),
}

#[derive(Debug)]
pub struct ResolvedWeights {
    /// Source weights, aligned with the evidence columns.
    pub linear: Composition,
    /// Order weights in descending convention.
    pub order: Composition,
    pub alpha: Option<f64>,
}

impl WeightSpecFile {
    pub fn parse(label: &str, text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("{label}: {e}")))
    }

    pub fn resolve(&self, source_names: &[String]) -> Result<ResolvedWeights, CliError> {
        let n = source_names.len();
        let linear = match &self.linear_weights {
            WeightEntry::List(list) => {
                expect_len("linear_weights", list.len(), n)?;
                list.clone()
            }
            WeightEntry::Named(map) => {
                for key in map.keys() {
                    if !source_names.contains(key) {
                        return Err(CliError::Validation(format!(
                            "linear_weights: unknown source '{key}'"
                        )));
                    }
                }
                source_names
                    .iter()
                    .map(|name| {
                        map.get(name).copied().ok_or_else(|| {
                            CliError::Validation(format!(
                                "linear_weights: missing entry for source '{name}'"
                            ))
                        })
                    })
                    .collect::<Result<Vec<f64>, CliError>>()?
            }
        };

        let order = match &self.order_weights {
            WeightEntry::List(list) => {
                expect_len("order_weights", list.len(), n)?;
                list.clone()
            }
            WeightEntry::Named(map) => {
                let labels = rank_labels(n).ok_or_else(|| {
                    CliError::Validation(format!(
                        "order_weights: keyed rank labels support up to 12 sources, \
                         got {n}; use the array form"
                    ))
                })?;
                for key in map.keys() {
                    if !labels.iter().any(|aliases| aliases.contains(&key.as_str())) {
                        return Err(CliError::Validation(format!(
                            "order_weights: unknown rank label '{key}' (expected {})",
                            labels
                                .iter()
                                .map(|aliases| aliases[0])
                                .collect::<Vec<_>>()
                                .join(", ")
                        )));
                    }
                }
                labels
                    .iter()
                    .map(|aliases| {
                        aliases
                            .iter()
                            .find_map(|alias| map.get(*alias).copied())
                            .ok_or_else(|| {
                                CliError::Validation(format!(
                                    "order_weights: missing entry for rank '{}'",
                                    aliases[0]
                                ))
                            })
                    })
                    .collect::<Result<Vec<f64>, CliError>>()?
            }
        };

        Ok(ResolvedWeights {
            linear: Composition::new(linear)
                .map_err(|e| CliError::Validation(format!("linear_weights: {e}")))?,
            order: Composition::new(order)
                .map_err(|e| CliError::Validation(format!("order_weights: {e}")))?,
            alpha: self.alpha,
        })
    }
}

fn expect_len(field: &str, got: usize, want: usize) -> Result<(), CliError> {
    if got != want {
        return Err(CliError::Validation(format!(
            "{field}: has {got} entries but the evidence has {want} sources"
        )));
    }
    Ok(())
}

/// Rank labels in descending order, with accepted aliases per rank. The
/// single middle rank of a 3-source file may be written `mid` or `mid1`.
fn rank_labels(n: usize) -> Vec<Vec<&'static str>> {
    // leak-free static names only cover the common small arities; larger
    // tables must use the list form
    const MIDS: [&str; 10] = [
        "mid1", "mid2", "mid3", "mid4", "mid5", "mid6", "mid7", "mid8", "mid9", "mid10",
    ];
    let mut labels: Vec<Vec<&'static str>> = vec![vec!["max"]];
    if n == 3 {
        labels.push(vec!["mid", "mid1"]);
    } else {
        for mid in MIDS.iter().take(n.saturating_sub(2)) {
            labels.push(vec![*mid]);
        }
    }
    labels.push(vec!["min"]);
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn resolves_plain_lists() {
        let spec = WeightSpecFile::parse(
            "t",
            "linear_weights = [0.6, 0.3, 0.1]\norder_weights = [0.45, 0.50, 0.05]\nalpha = 0.5\n",
        )
        .unwrap();
        let resolved = spec.resolve(&names(&["a", "b", "c"])).unwrap();
        assert_eq!(resolved.linear.len(), 3);
        assert_eq!(resolved.order.parts()[0], 0.45);
        assert_eq!(resolved.alpha, Some(0.5));
    }

    #[test]
    fn resolves_named_sources_and_rank_labels() {
        let spec = WeightSpecFile::parse(
            "t",
            "[linear_weights]\nb = 0.3\na = 0.6\nc = 0.1\n\n[order_weights]\nmin = 0.05\nmid = 0.50\nmax = 0.45\n",
        )
        .unwrap();
        let resolved = spec.resolve(&names(&["a", "b", "c"])).unwrap();
        assert_eq!(resolved.linear.parts()[0], 0.6000000000000001);
        // min/mid/max converted to descending
        assert_eq!(resolved.order.parts()[0], 0.45);
        assert_eq!(resolved.order.parts()[2], 0.05);
        assert_eq!(resolved.alpha, None);
    }

    #[test]
    fn rejects_unknown_and_missing_keys() {
        let spec = WeightSpecFile::parse(
            "t",
            "[linear_weights]\na = 0.6\nb = 0.4\n\norder_weights = [0.5, 0.5]\n",
        )
        .unwrap();
        assert!(spec.resolve(&names(&["a", "z"])).is_err());

        let spec = WeightSpecFile::parse(
            "t",
            "linear_weights = [0.5, 0.5]\n\n[order_weights]\nmax = 0.5\noops = 0.5\n",
        )
        .unwrap();
        let err = spec.resolve(&names(&["a", "b"])).unwrap_err().to_string();
        assert!(err.contains("oops"), "{err}");
    }

    #[test]
    fn surfaces_weight_validation_errors() {
        let spec = WeightSpecFile::parse(
            "t",
            "linear_weights = [0.9, -0.1, 0.2]\norder_weights = [0.4, 0.3, 0.3]\n",
        )
        .unwrap();
        let err = spec.resolve(&names(&["a", "b", "c"])).unwrap_err();
        assert!(err.to_string().contains("negative"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }
}
