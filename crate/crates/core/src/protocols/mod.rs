//! Broadcast protocols as schedule builders.
//!
//! After reception every protocol here ignores channel feedback, so a
//! station's whole behavior is the [`StationSchedule`] it draws at reception.
//! Builders take a [`Tape`] and nothing else; they have no access to feedback.
//!
//! All logarithms are base 2.

mod decay;
mod gb;
mod ggb;
mod green_decay;
pub(crate) mod params;
mod tape;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use decay::{decay_baseline_schedule, DecayParams};
pub use gb::{gb_build_schedule, gb_params, GbParams};
pub use ggb::{ggb_build_schedule, ggb_params, GgbParams};
pub use green_decay::{green_decay_offsets, green_decay_schedule};
pub use tape::{balls_into_bins_offset, sample_geo, RngTape, ScriptedTape, Tape};

use crate::engine::{Round, RoundAction, StationProtocol, StationRng};
use crate::error::{Error, Result};

/// The rounds one station transmits in, fixed at its reception.
/// Equivalently, its broadcasting pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StationSchedule {
    activation_round: Round,
    transmit_rounds: Vec<Round>,
    finish_round: Round,
}

impl StationSchedule {
    /// # Panics
    ///
    /// If `transmit_rounds` is not strictly ascending, starts before
    /// `activation_round`, or extends past `finish_round`.
    pub fn new(activation_round: Round, transmit_rounds: Vec<Round>, finish_round: Round) -> Self {
        assert!(
            transmit_rounds.windows(2).all(|w| w[0] < w[1]),
            "transmit rounds must be strictly ascending"
        );
        if let (Some(&first), Some(&last)) = (transmit_rounds.first(), transmit_rounds.last()) {
            assert!(first >= activation_round, "transmission before activation");
            assert!(last <= finish_round, "transmission after finish");
        }
        Self {
            activation_round,
            transmit_rounds,
            finish_round,
        }
    }

    /// First round the station may act in.
    pub fn activation_round(&self) -> Round {
        self.activation_round
    }

    pub fn transmit_rounds(&self) -> &[Round] {
        &self.transmit_rounds
    }

    /// Last round the station is still running its protocol.
    pub fn finish_round(&self) -> Round {
        self.finish_round
    }

    pub fn energy(&self) -> u64 {
        self.transmit_rounds.len() as u64
    }

    pub fn action_at(&self, round: Round) -> RoundAction {
        if self.transmit_rounds.binary_search(&round).is_ok() {
            RoundAction::Transmit
        } else {
            RoundAction::Listen
        }
    }

    pub fn is_finished_after(&self, round: Round) -> bool {
        round >= self.finish_round
    }
}

/// First round strictly after `position` that is a multiple of `period`.
pub(crate) fn next_boundary_after(position: Round, period: u64) -> Round {
    let period = period as Round;
    (position.div_euclid(period) + 1) * period
}

/// Deterministic pattern relative to activation (`reception + 1`): the
/// station transmits at `activation + offset` for each offset. Used to
/// exhibit symmetric executions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPattern {
    offsets: Vec<u64>,
}

impl FixedPattern {
    pub fn new(mut offsets: Vec<u64>) -> Self {
        offsets.sort_unstable();
        offsets.dedup();
        Self { offsets }
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn schedule(&self, reception_round: Round) -> StationSchedule {
        let activation = reception_round + 1;
        let rounds: Vec<Round> = self
            .offsets
            .iter()
            .map(|&o| activation + o as Round)
            .collect();
        let finish = rounds.last().copied().unwrap_or(activation);
        StationSchedule::new(activation, rounds, finish)
    }
}

impl StationProtocol for FixedPattern {
    fn build_schedule(&self, reception_round: Round, _rng: &mut StationRng) -> StationSchedule {
        self.schedule(reception_round)
    }
}

/// A protocol selected by name: `ggb`, `gb`, `decay-baseline` or
/// `fixed:<offsets>` (comma separated, e.g. `fixed:0,5`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Protocol {
    Ggb(GgbParams),
    Gb(GbParams),
    DecayBaseline(DecayParams),
    Fixed(FixedPattern),
}

/// Protocol name before its parameters are resolved. Serializes as its
/// textual form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ProtocolName {
    Ggb,
    Gb,
    DecayBaseline,
    Fixed(Vec<u64>),
}

impl FromStr for ProtocolName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ggb" => Ok(Self::Ggb),
            "gb" => Ok(Self::Gb),
            "decay-baseline" => Ok(Self::DecayBaseline),
            _ => {
                let offsets = s.strip_prefix("fixed:").ok_or_else(|| {
                    Error::invalid(format!(
                        "unknown protocol `{s}` (expected ggb, gb, decay-baseline or fixed:<offsets>)"
                    ))
                })?;
                offsets
                    .split(',')
                    .map(|o| {
                        o.trim().parse::<u64>().map_err(|_| {
                            Error::invalid(format!("bad offset `{o}` in fixed pattern `{s}`"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Self::Fixed)
            }
        }
    }
}

impl fmt::Display for ProtocolName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ggb => f.write_str("ggb"),
            Self::Gb => f.write_str("gb"),
            Self::DecayBaseline => f.write_str("decay-baseline"),
            Self::Fixed(offsets) => {
                let list: Vec<String> = offsets.iter().map(u64::to_string).collect();
                write!(f, "fixed:{}", list.join(","))
            }
        }
    }
}

impl From<ProtocolName> for String {
    fn from(name: ProtocolName) -> String {
        name.to_string()
    }
}

impl TryFrom<String> for ProtocolName {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl ProtocolName {
    /// Resolves parameters. `phi` and `eps` are required for GGB only.
    pub fn resolve(&self, n: u64, phi: Option<f64>, eps: Option<f64>) -> Result<Protocol> {
        Ok(match self {
            Self::Ggb => {
                let phi = phi.ok_or_else(|| Error::invalid("ggb needs --phi"))?;
                let eps = eps.ok_or_else(|| Error::invalid("ggb needs --eps"))?;
                Protocol::Ggb(ggb_params(n, phi, eps)?)
            }
            Self::Gb => Protocol::Gb(gb_params(n)?),
            Self::DecayBaseline => Protocol::DecayBaseline(DecayParams::new(n)?),
            Self::Fixed(offsets) => Protocol::Fixed(FixedPattern::new(offsets.clone())),
        })
    }
}

impl Protocol {
    pub fn name(&self) -> ProtocolName {
        match self {
            Self::Ggb(_) => ProtocolName::Ggb,
            Self::Gb(_) => ProtocolName::Gb,
            Self::DecayBaseline(_) => ProtocolName::DecayBaseline,
            Self::Fixed(p) => ProtocolName::Fixed(p.offsets().to_vec()),
        }
    }

    /// Largest energy any station can ever spend, when the protocol caps it.
    pub fn energy_cap(&self) -> Option<u64> {
        match self {
            Self::Ggb(p) => Some(p.repeats),
            Self::Gb(p) => Some(p.energy_cap()),
            Self::DecayBaseline(_) => None,
            Self::Fixed(p) => Some(p.offsets().len() as u64),
        }
    }

    /// Length of one aligned phase window in rounds.
    pub fn phase_length(&self) -> u64 {
        match self {
            Self::Ggb(p) => p.t_ph,
            Self::Gb(p) => p.t_ph,
            Self::DecayBaseline(p) => p.window,
            Self::Fixed(p) => p.offsets().last().copied().unwrap_or(0) + 1,
        }
    }

    pub fn schedule_with<T: Tape + ?Sized>(
        &self,
        reception_round: Round,
        tape: &mut T,
    ) -> StationSchedule {
        match self {
            Self::Ggb(p) => ggb_build_schedule(p, reception_round, tape),
            Self::Gb(p) => gb_build_schedule(p, reception_round, tape),
            Self::DecayBaseline(p) => decay_baseline_schedule(p, reception_round, tape),
            Self::Fixed(p) => p.schedule(reception_round),
        }
    }
}

impl StationProtocol for Protocol {
    fn build_schedule(&self, reception_round: Round, rng: &mut StationRng) -> StationSchedule {
        self.schedule_with(reception_round, &mut RngTape(rng))
    }
}
