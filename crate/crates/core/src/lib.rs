//! Energy-bounded randomized broadcast in synchronous multi-hop radio
//! networks without collision detection.
//!
//! * [`topology`]: graphs, generators and the edge-list format.
//! * [`engine`]: the round simulator and channel semantics.
//! * [`protocols`]: GGB, GB, Green-Decay, Balls-into-Bins and a Decay baseline.
//! * [`oracle`]: exact and Monte-Carlo ground truth for the probability claims.
//! * [`harness`]: seeded experiment batches, sweeps and CSV/JSON output.
//! * [`cli`]: the `radiocast` command line.

pub mod cli;
pub mod engine;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod protocols;
pub mod topology;

pub use error::{Error, Result};
