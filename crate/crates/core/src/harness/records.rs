use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::Round;
use crate::error::{Error, Result};

pub const RECORD_COLUMNS: [&str; 13] = [
    "config_hash",
    "trial",
    "seed",
    "n",
    "D",
    "protocol",
    "phi",
    "eps",
    "success",
    "completion_round",
    "termination_round",
    "max_energy",
    "mean_energy",
];

/// One trial of an experiment. `completion_round` is empty unless the trial
/// informed every node; `termination_round` is empty when the round horizon
/// cut schedules short.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config_hash: String,
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "D")]
    pub diameter: usize,
    pub protocol: String,
    pub phi: Option<f64>,
    pub eps: Option<f64>,
    pub success: bool,
    pub completion_round: Option<Round>,
    pub termination_round: Option<Round>,
    pub max_energy: u64,
    pub mean_energy: f64,
}

/// Per-configuration summary. Times are over successful trials only;
/// `p95_time` is the nearest-rank 95th percentile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub config_hash: String,
    pub n: usize,
    #[serde(rename = "D")]
    pub diameter: usize,
    pub protocol: String,
    pub phi: Option<f64>,
    pub eps: Option<f64>,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub median_time: Option<f64>,
    pub mean_time: Option<f64>,
    pub p95_time: Option<f64>,
    pub max_energy: u64,
}

#[derive(Serialize)]
struct JsonAggregate<'a> {
    config_hash: &'a str,
    n: usize,
    #[serde(rename = "D")]
    diameter: usize,
    protocol: &'a str,
    phi: Option<f64>,
    eps: Option<f64>,
    trials: u64,
    success_rate: f64,
    median_time: Option<f64>,
    p95_time: Option<f64>,
    max_energy: u64,
}

impl<'a> From<&'a Aggregate> for JsonAggregate<'a> {
    fn from(a: &'a Aggregate) -> Self {
        Self {
            config_hash: &a.config_hash,
            n: a.n,
            diameter: a.diameter,
            protocol: &a.protocol,
            phi: a.phi,
            eps: a.eps,
            trials: a.trials,
            success_rate: a.success_rate,
            median_time: a.median_time,
            p95_time: a.p95_time,
            max_energy: a.max_energy,
        }
    }
}

/// Summarizes records of one configuration. `None` for an empty slice.
pub fn aggregate(records: &[ExperimentRecord]) -> Option<Aggregate> {
    let first = records.first()?;
    let mut times: Vec<Round> = records.iter().filter_map(|r| r.completion_round).collect();
    times.sort_unstable();
    let successes = records.iter().filter(|r| r.success).count() as u64;
    let trials = records.len() as u64;
    let median_time = (!times.is_empty()).then(|| {
        let mid = times.len() / 2;
        if times.len() % 2 == 1 {
            times[mid] as f64
        } else {
            (times[mid - 1] + times[mid]) as f64 / 2.0
        }
    });
    let mean_time =
        (!times.is_empty()).then(|| times.iter().sum::<Round>() as f64 / times.len() as f64);
    let p95_time = (!times.is_empty()).then(|| {
        let rank = (times.len() * 95).div_ceil(100).max(1);
        times[rank - 1] as f64
    });
    Some(Aggregate {
        config_hash: first.config_hash.clone(),
        n: first.n,
        diameter: records.iter().map(|r| r.diameter).max().unwrap_or(0),
        protocol: first.protocol.clone(),
        phi: first.phi,
        eps: first.eps,
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        median_time,
        mean_time,
        p95_time,
        max_energy: records.iter().map(|r| r.max_energy).max().unwrap_or(0),
    })
}

fn to_csv_bytes<T: Serialize>(header: &[&str], rows: &[T]) -> Vec<u8> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory csv write");
    for row in rows {
        writer.serialize(row).expect("in-memory csv write");
    }
    writer.into_inner().expect("flush to memory")
}

/// Records as CSV: header row, then one row per record in slice order.
pub fn records_to_csv(records: &[ExperimentRecord]) -> Vec<u8> {
    to_csv_bytes(&RECORD_COLUMNS, records)
}

pub const AGGREGATE_COLUMNS: [&str; 13] = [
    "config_hash",
    "n",
    "D",
    "protocol",
    "phi",
    "eps",
    "trials",
    "successes",
    "success_rate",
    "median_time",
    "mean_time",
    "p95_time",
    "max_energy",
];

pub fn aggregates_to_csv(aggregates: &[Aggregate]) -> Vec<u8> {
    to_csv_bytes(&AGGREGATE_COLUMNS, aggregates)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn write_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    write_bytes(path, &records_to_csv(records))
}

pub fn write_aggregates_csv(aggregates: &[Aggregate], path: &Path) -> Result<()> {
    write_bytes(path, &aggregates_to_csv(aggregates))
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(RECORD_COLUMNS) {
        return Err(Error::Validation(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header
        )));
    }
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(csv_err)
}

/// Aggregates as a JSON array of
/// `{config_hash, n, D, protocol, phi, eps, trials, success_rate, median_time, p95_time, max_energy}`.
pub fn write_json(aggregates: &[Aggregate], path: &Path) -> Result<()> {
    let view: Vec<JsonAggregate> = aggregates.iter().map(JsonAggregate::from).collect();
    let mut text = serde_json::to_string_pretty(&view).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(trial: u64, completion: Option<Round>) -> ExperimentRecord {
        ExperimentRecord {
            config_hash: "abc".into(),
            trial,
            seed: 7 + trial,
            n: 16,
            diameter: 15,
            protocol: "ggb".into(),
            phi: Some(2.0),
            eps: Some(0.1),
            success: completion.is_some(),
            completion_round: completion,
            termination_round: Some(900),
            max_energy: 3,
            mean_energy: 2.6875,
        }
    }

    #[test]
    fn empty_records_give_header_only() {
        let text = String::from_utf8(records_to_csv(&[])).unwrap();
        assert_eq!(text, RECORD_COLUMNS.join(",") + "\n");
    }

    #[test]
    fn failed_trial_has_empty_completion() {
        let text = String::from_utf8(records_to_csv(&[record(0, None)])).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(row, "abc,0,7,16,15,ggb,2.0,0.1,false,,900,3,2.6875");
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let records = vec![record(0, Some(40)), record(1, None), record(2, Some(-1))];
        write_csv(&records, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), records);
        let empty = dir.path().join("e.csv");
        write_csv(&[], &empty).unwrap();
        assert!(read_csv(&empty).unwrap().is_empty());
    }

    #[test]
    fn aggregate_statistics() {
        let records: Vec<_> = [Some(10), Some(30), None, Some(20), Some(50)]
            .into_iter()
            .enumerate()
            .map(|(i, c)| record(i as u64, c))
            .collect();
        let agg = aggregate(&records).unwrap();
        assert_eq!(agg.trials, 5);
        assert_eq!(agg.successes, 4);
        assert_eq!(agg.success_rate, 0.8);
        assert_eq!(agg.median_time, Some(25.0));
        assert_eq!(agg.mean_time, Some(27.5));
        assert_eq!(agg.p95_time, Some(50.0));
        assert!(aggregate(&[]).is_none());
    }

    #[test]
    fn json_has_exact_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        let agg = aggregate(&[record(0, Some(3))]).unwrap();
        write_json(&[agg], &path).unwrap();
        let value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let keys: Vec<&str> = value[0]
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        let mut expected = vec![
            "config_hash",
            "n",
            "D",
            "protocol",
            "phi",
            "eps",
            "trials",
            "success_rate",
            "median_time",
            "p95_time",
            "max_energy",
        ];
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }
}
