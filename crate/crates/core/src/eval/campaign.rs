use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{wilson_interval, Adjudicator};
use crate::channels::{
    majority_flip_probability, measure_with_votes, sample_depolarizing, trial_rng, ChannelParams,
};
use crate::codes::DsCheckMatrix;
use crate::decoder::{decode, init_priors, Priors, Schedule};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{DsError, Pauli, PauliString};
use crate::tanner::TannerGraph;

/// Whether the decoder models syndrome noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecoderMode {
    /// Syndrome bits are variable nodes with BSC priors.
    #[serde(rename = "ds-bp4")]
    DataSyndrome,
    /// Syndrome bits are trusted (prior flip probability zero).
    #[serde(rename = "bp4")]
    Plain,
}

impl fmt::Display for DecoderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderMode::DataSyndrome => "ds-bp4",
            DecoderMode::Plain => "bp4",
        })
    }
}

impl FromStr for DecoderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ds-bp4" | "ds" => Ok(DecoderMode::DataSyndrome),
            "bp4" | "plain" => Ok(DecoderMode::Plain),
            other => Err(Error::InvalidParameter(format!(
                "unknown decoder mode {other:?}"
            ))),
        }
    }
}

/// A campaign stops at whichever limit comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_trials: 10_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub schedule: Schedule,
    pub mode: DecoderMode,
    pub channel: ChannelParams,
    pub stop: StopRule,
    pub seed: u64,
    pub max_iter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub converged: bool,
    /// Non-convergence counts as a logical error.
    pub logical_error: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrialStats {
    pub trials: u64,
    pub converged: u64,
    pub logical_errors: u64,
    pub seed: u64,
    pub params: ChannelParams,
}

impl TrialStats {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.logical_errors as f64 / self.trials as f64
        }
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.logical_errors, self.trials)
    }
}

/// Priors the decoder uses for a channel. With several readout rounds the
/// syndrome prior is the residual flip probability of the majority vote.
pub fn decoder_priors(n: usize, m: usize, mode: DecoderMode, ch: &ChannelParams) -> Result<Priors> {
    let eps_s = match mode {
        DecoderMode::DataSyndrome => majority_flip_probability(ch.eps_s, ch.repeats),
        DecoderMode::Plain => 0.0,
    };
    init_priors(n, m, ch.eps_d, eps_s)
}

/// Everything shared by the trials of one campaign.
pub struct TrialRunner<'a> {
    code: &'a DsCheckMatrix,
    graph: TannerGraph,
    adjudicator: Adjudicator,
    priors: Priors,
    spec: CampaignSpec,
}

impl<'a> TrialRunner<'a> {
    pub fn new(code: &'a DsCheckMatrix, spec: &CampaignSpec) -> Result<Self> {
        spec.channel.validate()?;
        if spec.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(Self {
            code,
            graph: TannerGraph::build(code),
            adjudicator: Adjudicator::new(code.check()),
            priors: decoder_priors(code.n(), code.m(), spec.mode, &spec.channel)?,
            spec: *spec,
        })
    }

    /// Samples the error and noisy syndrome of trial `index`. The draws do not
    /// depend on the schedule or decoder mode.
    pub fn sample(&self, index: u64) -> Result<(PauliString, BitVec)> {
        let ch = &self.spec.channel;
        let mut rng = trial_rng(self.spec.seed, index);
        let e = sample_depolarizing(self.code.n(), ch.eps_d, &mut rng);
        let z = measure_with_votes(&e, self.code.check(), ch.eps_s, ch.repeats, &mut rng)?;
        Ok((e, z))
    }

    pub fn run(&self, index: u64) -> Result<TrialOutcome> {
        let (e, z) = self.sample(index)?;
        let res = decode(
            self.spec.schedule,
            &self.graph,
            self.code.check(),
            &z,
            &self.priors,
            self.spec.max_iter,
            None,
        )?;
        let logical_error =
            !res.converged || self.adjudicator.is_logical_error(&res.data_est, &e)?;
        Ok(TrialOutcome {
            converged: res.converged,
            logical_error,
        })
    }
}

pub fn run_trial(code: &DsCheckMatrix, spec: &CampaignSpec, index: u64) -> Result<TrialOutcome> {
    TrialRunner::new(code, spec)?.run(index)
}

const BATCH: u64 = 1024;

/// Monte Carlo estimate of the logical error rate. Trials are decoded in
/// parallel batches and merged in index order, so the result is the same as
/// a sequential run that stops at the first trial meeting the stop rule.
pub fn run_campaign(code: &DsCheckMatrix, spec: &CampaignSpec) -> Result<TrialStats> {
    let runner = TrialRunner::new(code, spec)?;
    let mut stats = TrialStats {
        trials: 0,
        converged: 0,
        logical_errors: 0,
        seed: spec.seed,
        params: spec.channel,
    };
    let done = |s: &TrialStats| {
        s.trials >= spec.stop.max_trials || s.logical_errors >= spec.stop.min_errors
    };
    while !done(&stats) {
        let start = stats.trials;
        let end = (start + BATCH).min(spec.stop.max_trials);
        let outcomes = (start..end)
            .into_par_iter()
            .map(|i| runner.run(i))
            .collect::<Result<Vec<_>>>()?;
        for o in outcomes {
            stats.trials += 1;
            stats.converged += o.converged as u64;
            stats.logical_errors += o.logical_error as u64;
            if done(&stats) {
                break;
            }
        }
    }
    Ok(stats)
}

/// All `3N + M` weight-one DS errors: each non-identity Pauli on each qubit,
/// then each single syndrome flip.
pub fn weight_one_errors(d: &DsCheckMatrix) -> Vec<DsError> {
    let (n, m) = (d.n(), d.m());
    let mut out = Vec::with_capacity(3 * n + m);
    for q in 0..n {
        for p in Pauli::NON_IDENTITY {
            out.push(DsError::new(PauliString::single(n, q, p), BitVec::zeros(m)));
        }
    }
    for j in 0..m {
        out.push(DsError::new(PauliString::identity(n), BitVec::unit(m, j)));
    }
    out
}
