use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{
    make_pair_chain, make_path, make_random_connected, make_star_permutation, read_edge_list, Graph,
};

/// Graph family with its parameters, written `family:params`:
/// `path:16`, `gnp:1024,0.01`, `star-perm:63`, `pair-chain:8` or
/// `file:graph.el`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GraphSpec {
    Path { n: usize },
    Gnp { n: usize, p: f64 },
    StarPermutation { n: usize },
    PairChain { segments: usize },
    File { path: PathBuf },
}

impl GraphSpec {
    /// Whether the graph depends on the graph seed.
    pub fn is_random(&self) -> bool {
        matches!(self, Self::Gnp { .. } | Self::StarPermutation { .. })
    }

    pub fn build(&self, graph_seed: u64) -> Result<Graph> {
        let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
        match self {
            Self::Path { n } => make_path(*n),
            Self::Gnp { n, p } => make_random_connected(*n, *p, &mut rng),
            Self::StarPermutation { n } => make_star_permutation(*n, &mut rng),
            Self::PairChain { segments } => make_pair_chain(*segments),
            Self::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                read_edge_list(&text)
            }
        }
    }
}

fn parse_count(family: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::invalid(format!("{family}: expected a node count, got `{s}`")))
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = s.split_once(':').ok_or_else(|| {
            Error::invalid(format!("graph spec `{s}` is not of the form family:params"))
        })?;
        match family {
            "path" => Ok(Self::Path {
                n: parse_count(family, params)?,
            }),
            "gnp" => {
                let (n, p) = params.split_once(',').ok_or_else(|| {
                    Error::invalid(format!("gnp: expected `n,p`, got `{params}`"))
                })?;
                let p: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("gnp: bad edge probability `{p}`")))?;
                Ok(Self::Gnp {
                    n: parse_count(family, n)?,
                    p,
                })
            }
            "star-perm" => Ok(Self::StarPermutation {
                n: parse_count(family, params)?,
            }),
            "pair-chain" => Ok(Self::PairChain {
                segments: parse_count(family, params)?,
            }),
            "file" if !params.is_empty() => Ok(Self::File {
                path: PathBuf::from(params),
            }),
            _ => Err(Error::invalid(format!(
                "unknown graph spec `{s}` (expected path, gnp, star-perm, pair-chain or file)"
            ))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Path { n } => write!(f, "path:{n}"),
            Self::Gnp { n, p } => write!(f, "gnp:{n},{p}"),
            Self::StarPermutation { n } => write!(f, "star-perm:{n}"),
            Self::PairChain { segments } => write!(f, "pair-chain:{segments}"),
            Self::File { path } => write!(f, "file:{}", path.display()),
        }
    }
}

impl From<GraphSpec> for String {
    fn from(spec: GraphSpec) -> String {
        spec.to_string()
    }
}

impl TryFrom<String> for GraphSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
