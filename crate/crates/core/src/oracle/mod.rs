//! Ground truth for the probabilistic claims the protocols rely on: exact
//! big-integer/rational computations where feasible, seeded Monte Carlo with
//! 99% Wilson intervals otherwise.

pub mod collision;
pub mod green_decay;
pub mod lemma1;
pub mod lemma2;
pub mod occupancy;
pub mod patterns;
pub mod stats;

pub use collision::{
    check_collision_bound, collision_prob_exact, CollisionCheck, DiscreteDistribution, DEFAULT_TAIL,
};
pub use green_decay::{green_decay_success_exact, green_decay_success_mc};
pub use lemma1::{check_lemma1, check_lemma1_with, p_no_singleton_mc, Lemma1Method, Lemma1Report};
pub use lemma2::{lemma2_mc, lemma2_target, lemma2_threshold};
pub use occupancy::{
    no_singleton_counts, p_no_singleton_exact, p_no_singleton_table, ExactProbability,
};
pub use patterns::{pattern_count, PatternCount};
pub use stats::{wilson_interval, Estimate};

use serde::Serialize;

/// One exported oracle result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub operation: String,
    pub params: String,
    pub value: String,
    pub bound: String,
    pub pass: bool,
}

/// CSV with header `operation,params,value,bound,pass`.
pub fn oracle_rows_to_csv(rows: &[OracleRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("in-memory csv write");
    }
    if rows.is_empty() {
        writer
            .write_record(["operation", "params", "value", "bound", "pass"])
            .expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
}
