//! Monte-Carlo evaluation of the operators on jointly normal sources.
//!
//! Each trial draws source evidence and a criterion from a joint normal
//! distribution whose source-criterion covariances ("validities") control how
//! informative each source is. A positive bias of size `delta` is injected
//! into a random pair of sources on a random half of the trials, degrading
//! the evidence without touching the criterion. Every operator predicts the
//! criterion from the evidence and is scored by MSE, averaged over
//! replications that each own a private, seed-derived RNG stream.

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::operators::{self, Evidence};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Built-in source-criterion covariance profiles, ids 1-7. Set 1 gives every
/// source the same validity; later sets concentrate validity on fewer
/// sources (the profile variance grows monotonically).
pub const BUILTIN_VALIDITY_SETS: [[f64; 10]; 7] = [
    [1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00],
    [0.91, 0.95, 0.97, 0.99, 1.01, 1.02, 1.03, 1.04, 1.04, 1.05],
    [0.68, 0.80, 0.89, 0.96, 1.01, 1.06, 1.10, 1.14, 1.17, 1.20],
    [0.03, 0.10, 0.23, 0.42, 0.65, 0.94, 1.27, 1.66, 2.10, 2.60],
    [0.00, 0.01, 0.03, 0.10, 0.25, 0.51, 0.95, 1.62, 2.59, 3.95],
    [0.00, 0.00, 0.00, 0.00, 0.02, 0.10, 0.34, 1.00, 2.57, 5.96],
    [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.03, 0.23, 1.52, 8.22],
];

/// A validity profile: the covariance of each source with the criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct ValiditySet {
    id: u32,
    validities: Vec<f64>,
}

impl ValiditySet {
    /// One of the built-in profiles (ids 1-7).
    pub fn builtin(id: u32) -> Result<Self> {
        let index = id
            .checked_sub(1)
            .filter(|&i| (i as usize) < BUILTIN_VALIDITY_SETS.len())
            .ok_or(Error::UnknownValiditySet(id))?;
        Ok(Self {
            id,
            validities: BUILTIN_VALIDITY_SETS[index as usize].to_vec(),
        })
    }

    /// All built-in profiles in id order.
    pub fn all_builtin() -> Vec<Self> {
        (1..=BUILTIN_VALIDITY_SETS.len() as u32)
            .map(|id| Self::builtin(id).expect("builtin ids are valid"))
            .collect()
    }

    /// A user-supplied profile. Validities must be finite and non-negative.
    pub fn custom(id: u32, validities: Vec<f64>) -> Result<Self> {
        if validities.len() < 2 {
            return Err(Error::TooFewParts(validities.len()));
        }
        for (index, &value) in validities.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativePart { index, value });
            }
        }
        Ok(Self { id, validities })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn validities(&self) -> &[f64] {
        &self.validities
    }
}

/// Full parameterization of one experiment cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Number of sources.
    pub k: usize,
    /// Common mean of every source and the criterion.
    pub mean: f64,
    /// Common variance of every source and the criterion.
    pub variance: f64,
    /// Covariance between any two sources.
    pub cov_xx: f64,
    pub validity_set: ValiditySet,
    /// Bias magnitude added to compromised sources.
    pub delta: f64,
    /// Probability that a trial is biased.
    pub bias_prob: f64,
    /// How many sources receive the bias on a biased trial.
    pub n_biased_sources: usize,
    /// Trials per replication.
    pub trials: usize,
    /// Replications per cell.
    pub replications: usize,
    /// OWAWA mixing parameter.
    pub alpha: f64,
    pub seed: u64,
    /// Score SDOWA alongside the four standard operators.
    pub include_sdowa: bool,
}

impl ExperimentConfig {
    /// Defaults: 10 sources, means and variances 10, source-source covariance
    /// 2, bias on 2 sources in half the trials, 1000 trials x 500
    /// replications, alpha 0.5, SDOWA off.
    pub fn new(validity_set: ValiditySet, delta: f64, seed: u64) -> Self {
        Self {
            k: 10,
            mean: 10.0,
            variance: 10.0,
            cov_xx: 2.0,
            validity_set,
            delta,
            bias_prob: 0.5,
            n_biased_sources: 2,
            trials: 1000,
            replications: 500,
            alpha: 0.5,
            seed,
            include_sdowa: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 3 {
            return Err(Error::InvalidConfig(format!(
                "need at least 3 sources, got {}",
                self.k
            )));
        }
        if self.validity_set.validities().len() != self.k {
            return Err(Error::InvalidConfig(format!(
                "validity set {} has {} entries but k = {}",
                self.validity_set.id(),
                self.validity_set.validities().len(),
                self.k
            )));
        }
        if !self.variance.is_finite() || self.variance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "variance must be positive, got {}",
                self.variance
            )));
        }
        if !self.mean.is_finite() || !self.cov_xx.is_finite() {
            return Err(Error::InvalidConfig(
                "mean and cov_xx must be finite".to_string(),
            ));
        }
        if !self.delta.is_finite() || self.delta < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        if !(0.0..=1.0).contains(&self.bias_prob) {
            return Err(Error::InvalidConfig(format!(
                "bias_prob must lie in [0, 1], got {}",
                self.bias_prob
            )));
        }
        if self.n_biased_sources >= self.k {
            return Err(Error::InvalidConfig(format!(
                "n_biased_sources ({}) must be smaller than k ({})",
                self.n_biased_sources, self.k
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".to_string()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidConfig(
                "replications must be at least 1".to_string(),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        Ok(())
    }
}

/// Evidence and criterion for one trial, with the sources that received bias.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub evidence: Evidence,
    pub criterion: f64,
    /// Ascending indices of the biased sources; empty on unbiased trials.
    pub biased_sources: Vec<usize>,
}

/// The (k+1) x (k+1) joint covariance of sources and criterion: `variance`
/// on the diagonal, `cov_xx` between sources, and the validities between each
/// source and the criterion (last row/column).
pub fn build_covariance(cfg: &ExperimentConfig) -> Result<DMatrix<f64>> {
    if cfg.validity_set.validities().len() != cfg.k {
        return Err(Error::DimensionMismatch {
            left: cfg.validity_set.validities().len(),
            right: cfg.k,
        });
    }
    let dim = cfg.k + 1;
    let mut cov = DMatrix::from_element(dim, dim, cfg.cov_xx);
    for i in 0..dim {
        cov[(i, i)] = cfg.variance;
    }
    for (i, &validity) in cfg.validity_set.validities().iter().enumerate() {
        cov[(i, cfg.k)] = validity;
        cov[(cfg.k, i)] = validity;
    }
    Ok(cov)
}

/// Lower-triangular `L` with `L * L^T = cov`. The input must be symmetric.
pub fn factorize(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    nalgebra::linalg::Cholesky::new(cov.clone())
        .map(|c| c.l())
        .ok_or(Error::NotPositiveSemiDefinite)
}

/// The private RNG stream of one replication: a pure function of
/// `(seed, replication)`, portable across platforms and thread schedules.
pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replication.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Draw one (x, y) pair as `mean + L * z` for standard-normal `z`, then apply
/// bias to the evidence.
pub fn sample_trial<R: Rng>(
    rng: &mut R,
    factor: &DMatrix<f64>,
    cfg: &ExperimentConfig,
) -> TrialRecord {
    let dim = cfg.k + 1;
    let z = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let shifted = factor * z;
    let x: Vec<f64> = (0..cfg.k).map(|i| cfg.mean + shifted[i]).collect();
    let criterion = cfg.mean + shifted[cfg.k];
    let evidence = Evidence::new(x).expect("sampled evidence is finite");
    let (evidence, biased_sources) = inject_bias(rng, evidence, cfg);
    TrialRecord {
        evidence,
        criterion,
        biased_sources,
    }
}

/// With probability `bias_prob`, add `delta` to `n_biased_sources` distinct
/// uniformly chosen sources; otherwise return the evidence unchanged with an
/// empty index set.
pub fn inject_bias<R: Rng>(
    rng: &mut R,
    x: Evidence,
    cfg: &ExperimentConfig,
) -> (Evidence, Vec<usize>) {
    if !rng.random_bool(cfg.bias_prob) {
        return (x, Vec::new());
    }
    let mut chosen = rand::seq::index::sample(rng, cfg.k, cfg.n_biased_sources).into_vec();
    chosen.sort_unstable();
    let mut values = x.values().to_vec();
    for &i in &chosen {
        values[i] += cfg.delta;
    }
    (
        Evidence::new(values).expect("biased evidence is finite"),
        chosen,
    )
}

/// LWA weights from a validity profile: the validities divided by their sum.
pub fn derive_lwa_weights(validity_set: &ValiditySet) -> Result<Composition> {
    Composition::closure(validity_set.validities())
}

/// Order weights that discard the two largest values and spread the rest
/// uniformly: `(0, 0, 1/(k-2), ..., 1/(k-2))` in descending positions.
pub fn derive_owa_weights(k: usize) -> Result<Composition> {
    if k < 3 {
        return Err(Error::TooFewParts(k));
    }
    let mut parts = vec![1.0 / (k - 2) as f64; k];
    parts[0] = 0.0;
    parts[1] = 0.0;
    Composition::new(parts)
}

/// Mean squared error between predictions and observations.
pub fn mse(predicted: &[f64], observed: &[f64]) -> Result<f64> {
    if predicted.len() != observed.len() {
        return Err(Error::DimensionMismatch {
            left: predicted.len(),
            right: observed.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = predicted.len() as f64;
    Ok(predicted
        .iter()
        .zip(observed)
        .map(|(p, o)| (p - o).powi(2))
        .sum::<f64>()
        / n)
}

/// Per-operator MSE for one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationMse {
    pub lwa: f64,
    pub owa: f64,
    pub jwa: f64,
    pub owawa: f64,
    pub sdowa: Option<f64>,
}

impl ReplicationMse {
    /// `(operator name, mse)` pairs in reporting order.
    pub fn by_operator(&self) -> Vec<(&'static str, f64)> {
        let mut rows = vec![
            ("LWA", self.lwa),
            ("OWA", self.owa),
            ("JWA", self.jwa),
            ("OWAWA", self.owawa),
        ];
        if let Some(sdowa) = self.sdowa {
            rows.push(("SDOWA", sdowa));
        }
        rows
    }
}

/// Run `cfg.trials` trials on the replication's private RNG stream and score
/// every operator in the roster against the criterion.
pub fn run_replication(cfg: &ExperimentConfig, replication: usize) -> Result<ReplicationMse> {
    cfg.validate()?;
    let factor = factorize(&build_covariance(cfg)?)?;
    let w = derive_lwa_weights(&cfg.validity_set)?;
    let v = derive_owa_weights(cfg.k)?;
    let mut rng = replication_rng(cfg.seed, replication as u64);

    let mut criteria = Vec::with_capacity(cfg.trials);
    let mut lwa_hat = Vec::with_capacity(cfg.trials);
    let mut owa_hat = Vec::with_capacity(cfg.trials);
    let mut jwa_hat = Vec::with_capacity(cfg.trials);
    let mut owawa_hat = Vec::with_capacity(cfg.trials);
    let mut sdowa_hat = Vec::with_capacity(if cfg.include_sdowa { cfg.trials } else { 0 });

    for _ in 0..cfg.trials {
        let trial = sample_trial(&mut rng, &factor, cfg);
        let x = &trial.evidence;
        lwa_hat.push(operators::lwa(x, &w)?.value);
        owa_hat.push(operators::owa(x, &v)?.value);
        jwa_hat.push(operators::jwa(x, &w, &v)?.value);
        owawa_hat.push(operators::owawa(x, &w, &v, cfg.alpha)?.value);
        if cfg.include_sdowa {
            sdowa_hat.push(operators::sdowa(x, &w, &v)?.value);
        }
        criteria.push(trial.criterion);
    }

    Ok(ReplicationMse {
        lwa: mse(&lwa_hat, &criteria)?,
        owa: mse(&owa_hat, &criteria)?,
        jwa: mse(&jwa_hat, &criteria)?,
        owawa: mse(&owawa_hat, &criteria)?,
        sdowa: if cfg.include_sdowa {
            Some(mse(&sdowa_hat, &criteria)?)
        } else {
            None
        },
    })
}

/// One (validity set, delta, operator) cell of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub set_id: u32,
    pub delta: f64,
    pub operator: &'static str,
    pub mean_mse: f64,
    pub sd_mse: f64,
    pub replications: usize,
}

/// Mean and dispersion of per-replication MSE for every cell of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentTable {
    rows: Vec<ExperimentRow>,
}

impl ExperimentTable {
    pub fn rows(&self) -> &[ExperimentRow] {
        &self.rows
    }

    pub fn find(&self, set_id: u32, delta: f64, operator: &str) -> Option<&ExperimentRow> {
        self.rows
            .iter()
            .find(|r| r.set_id == set_id && r.delta == delta && r.operator == operator)
    }

    /// CSV with header `set,delta,operator,mean_mse,sd_mse,replications`.
    /// Numbers use the shortest representation that re-parses to the exact
    /// same value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("set,delta,operator,mean_mse,sd_mse,replications\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.set_id, r.delta, r.operator, r.mean_mse, r.sd_mse, r.replications
            ));
        }
        out
    }
}

/// Run every (validity set, delta) cell of the grid.
///
/// Replications execute in parallel; each owns a private RNG stream and
/// results are merged by replication index, so the table is identical to
/// sequential execution.
pub fn run_experiment(
    base: &ExperimentConfig,
    sets: &[ValiditySet],
    deltas: &[f64],
) -> Result<ExperimentTable> {
    if sets.is_empty() || deltas.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rows = Vec::new();
    for set in sets {
        for &delta in deltas {
            let mut cfg = base.clone();
            cfg.validity_set = set.clone();
            cfg.delta = delta;
            cfg.validate()?;
            let per_rep = (0..cfg.replications)
                .into_par_iter()
                .map(|r| run_replication(&cfg, r))
                .collect::<Result<Vec<_>>>()?;
            for (operator, column) in operator_columns(&per_rep, cfg.include_sdowa) {
                let (mean_mse, sd_mse) = mean_and_sd(&column);
                rows.push(ExperimentRow {
                    set_id: set.id(),
                    delta,
                    operator,
                    mean_mse,
                    sd_mse,
                    replications: cfg.replications,
                });
            }
        }
    }
    Ok(ExperimentTable { rows })
}

fn operator_columns(
    per_rep: &[ReplicationMse],
    include_sdowa: bool,
) -> Vec<(&'static str, Vec<f64>)> {
    let mut columns = vec![
        ("LWA", per_rep.iter().map(|r| r.lwa).collect::<Vec<_>>()),
        ("OWA", per_rep.iter().map(|r| r.owa).collect()),
        ("JWA", per_rep.iter().map(|r| r.jwa).collect()),
        ("OWAWA", per_rep.iter().map(|r| r.owawa).collect()),
    ];
    if include_sdowa {
        columns.push((
            "SDOWA",
            per_rep
                .iter()
                .map(|r| r.sdowa.expect("roster includes SDOWA"))
                .collect(),
        ));
    }
    columns
}

/// Mean and sample standard deviation (divisor n-1; 0 when n == 1).
fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
