//! Batches of seeded trials, parameter sweeps over φ, aggregation and
//! CSV/JSON persistence.
//!
//! Trial `i` of a configuration uses seed `derive_seed(base_seed, i)`.
//! Records are always produced in trial order, so serial and parallel runs
//! give identical output.

mod graph_spec;
mod records;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use graph_spec::GraphSpec;
pub use records::{
    aggregate, aggregates_to_csv, read_csv, records_to_csv, write_aggregates_csv, write_csv,
    write_json, Aggregate, ExperimentRecord, AGGREGATE_COLUMNS, RECORD_COLUMNS,
};

use crate::engine::{run_trial, Round, TrialOptions};
use crate::error::{Error, Result};
use crate::protocols::params::ceil_log2;
use crate::protocols::{Protocol, ProtocolName};
use crate::topology::{Graph, NodeId};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `base`:
/// `splitmix64(splitmix64(base) + index * 0x9e3779b97f4a7c15)` (wrapping).
///
/// For a fixed base this is a bijection of the index, since multiplying by an
/// odd constant, adding and the splitmix64 finalizer are all invertible on
/// 64-bit words.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base).wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub graph_seed: u64,
    /// Draw a fresh graph per trial from `derive_seed(graph_seed, trial)`.
    #[serde(default)]
    pub resample_graph: bool,
    pub protocol: ProtocolName,
    /// The network size the stations are told; defaults to the graph's.
    pub n: Option<u64>,
    pub phi: Option<f64>,
    pub eps: Option<f64>,
    pub origin: NodeId,
    pub trials: u64,
    pub base_seed: u64,
    /// Defaults to [`default_max_rounds`].
    pub max_rounds: Option<u64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSpec, protocol: ProtocolName) -> Self {
        Self {
            graph,
            graph_seed: 0,
            resample_graph: false,
            protocol,
            n: None,
            phi: None,
            eps: None,
            origin: 0,
            trials: 1,
            base_seed: 0,
            max_rounds: None,
            output: None,
        }
    }

    /// Hex SHA-256 (first 16 digits) of the JSON form, with the output path
    /// blanked so that where results go does not change what they are.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = None;
        let bytes = serde_json::to_vec(&canonical).expect("config serializes");
        hex::encode(&Sha256::digest(&bytes)[..8])
    }
}

/// `100 · (D + ⌈log n⌉²) · t_ph` where `t_ph` is the protocol's phase length.
pub fn default_max_rounds(diameter: usize, n: u64, protocol: &Protocol) -> u64 {
    let log = ceil_log2(n.max(2));
    100 * (diameter as u64 + log * log) * protocol.phase_length()
}

/// A configuration with its graph built and protocol parameters derived.
#[derive(Debug, Clone)]
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub config_hash: String,
    /// Graph of trial 0 (the only one unless resampling).
    pub graph: Graph,
    pub diameter: usize,
    pub n_param: u64,
    pub protocol: Protocol,
}

pub fn prepare(config: &ExperimentConfig) -> Result<PreparedExperiment> {
    let graph = build_graph(config, 0)?;
    let n_param = config.n.unwrap_or(graph.node_count() as u64);
    let protocol = config.protocol.resolve(n_param, config.phi, config.eps)?;
    if config.origin >= graph.node_count() {
        return Err(Error::invalid(format!(
            "origin {} outside a graph of {} nodes",
            config.origin,
            graph.node_count()
        )));
    }
    if config.max_rounds == Some(0) {
        return Err(Error::invalid("max_rounds must be at least 1"));
    }
    let diameter = graph.diameter()?;
    Ok(PreparedExperiment {
        config_hash: config.hash(),
        config: config.clone(),
        graph,
        diameter,
        n_param,
        protocol,
    })
}

fn build_graph(config: &ExperimentConfig, trial: u64) -> Result<Graph> {
    let seed = if config.resample_graph {
        derive_seed(config.graph_seed, trial)
    } else {
        config.graph_seed
    };
    config.graph.build(seed)
}

impl PreparedExperiment {
    pub fn max_rounds_for(&self, diameter: usize) -> u64 {
        self.config
            .max_rounds
            .unwrap_or_else(|| default_max_rounds(diameter, self.n_param, &self.protocol))
    }

    pub fn run_trial(&self, trial: u64) -> Result<ExperimentRecord> {
        let resampled;
        let (graph, diameter) = if self.config.resample_graph && trial > 0 {
            resampled = build_graph(&self.config, trial)?;
            let d = resampled.diameter()?;
            (&resampled, d)
        } else {
            (&self.graph, self.diameter)
        };
        let seed = derive_seed(self.config.base_seed, trial);
        let max_rounds = Round::try_from(self.max_rounds_for(diameter)).unwrap_or(Round::MAX);
        let result = run_trial(
            graph,
            &self.protocol,
            self.config.origin,
            seed,
            TrialOptions::new(max_rounds),
        )?;
        let (phi, eps) = match self.protocol {
            Protocol::Ggb(ref p) => (Some(p.phi), Some(p.eps)),
            _ => (None, None),
        };
        Ok(ExperimentRecord {
            config_hash: self.config_hash.clone(),
            trial,
            seed,
            n: graph.node_count(),
            diameter,
            protocol: self.protocol.name().to_string(),
            phi,
            eps,
            success: result.success,
            completion_round: result.completion_round.filter(|_| result.success),
            termination_round: result.termination_round,
            max_energy: result.max_energy(),
            mean_energy: result.mean_energy(),
        })
    }

    /// All trials on the current rayon pool, in trial order.
    pub fn run(&self) -> Result<Vec<ExperimentRecord>> {
        (0..self.config.trials)
            .into_par_iter()
            .map(|i| self.run_trial(i))
            .collect()
    }

    pub fn run_serial(&self) -> Result<Vec<ExperimentRecord>> {
        (0..self.config.trials).map(|i| self.run_trial(i)).collect()
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    if config.trials == 0 {
        return Ok(Vec::new());
    }
    prepare(config)?.run()
}

pub fn run_experiment_serial(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    if config.trials == 0 {
        return Ok(Vec::new());
    }
    prepare(config)?.run_serial()
}

/// One aggregate row per φ, in the given order. Every φ is validated before
/// anything runs.
pub fn sweep_phi(base: &ExperimentConfig, phis: &[f64]) -> Result<Vec<Aggregate>> {
    let configs: Vec<ExperimentConfig> = phis
        .iter()
        .map(|&phi| ExperimentConfig {
            phi: Some(phi),
            ..base.clone()
        })
        .collect();
    let prepared = configs.iter().map(prepare).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(prepared.len());
    for p in &prepared {
        let records = p.run()?;
        if let Some(row) = aggregate(&records) {
            rows.push(row);
        }
    }
    Ok(rows)
}
