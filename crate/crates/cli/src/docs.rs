//! File formats exchanged between subcommands. Every file is one JSON
//! object tagged by `kind`; scheme-specific documents carry a `scheme` tag.

use num_bigint::BigInt;
use pvss::dlog::DlogBoard;
use pvss::eroot::{ERootStatement, ERootTranscript};
use pvss::group::GroupElement;
use pvss::na_vss::{NaVssBoard, NaVssThresholdBoard};
use pvss::session::{Scheme, SchemeParams};
use pvss::{arith::RsaParams, serde_dec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Doc {
    Params {
        scheme: Scheme,
        params: SchemeParams,
    },
    Board(Board),
    Share(ShareDoc),
    DealerSecrets(DealerSecrets),
    ProverState(ProverState),
    Commitment(Commitment),
    Challenge(Commitment),
    Transcript(ERootTranscript),
}

/// Public output of `deal`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum Board {
    Dlog { board: DlogBoard },
    Eroot(ERootBoard),
    NaVss { board: NaVssBoard },
    NaVssThreshold { board: NaVssThresholdBoard },
}

impl Board {
    pub fn scheme(&self) -> Scheme {
        match self {
            Board::Dlog { .. } => Scheme::Dlog,
            Board::Eroot(_) => Scheme::Eroot,
            Board::NaVss { .. } => Scheme::NaVss,
            Board::NaVssThreshold { .. } => Scheme::NaVssThreshold,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ERootBoard {
    pub params: RsaParams,
    #[serde(with = "serde_dec")]
    pub share_modulus: BigInt,
    pub k: usize,
    #[serde(with = "serde_dec::vec")]
    pub x_coords: Vec<BigInt>,
    pub statements: Vec<ERootStatement>,
}

/// A participant's private document: the decryption key, or the share
/// itself for the group schemes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum ShareDoc {
    Dlog {
        index: usize,
        #[serde(with = "serde_dec")]
        z: BigInt,
    },
    Eroot {
        index: usize,
        #[serde(with = "serde_dec")]
        z: BigInt,
    },
    NaVss {
        index: usize,
        f: GroupElement,
    },
    NaVssThreshold {
        index: usize,
        f: GroupElement,
    },
}

impl ShareDoc {
    pub fn index(&self) -> usize {
        match self {
            ShareDoc::Dlog { index, .. }
            | ShareDoc::Eroot { index, .. }
            | ShareDoc::NaVss { index, .. }
            | ShareDoc::NaVssThreshold { index, .. } => *index,
        }
    }

    pub fn element(&self) -> Option<&GroupElement> {
        match self {
            ShareDoc::NaVss { f, .. } | ShareDoc::NaVssThreshold { f, .. } => Some(f),
            _ => None,
        }
    }

    pub fn key(&self) -> Option<&BigInt> {
        match self {
            ShareDoc::Dlog { z, .. } | ShareDoc::Eroot { z, .. } => Some(z),
            _ => None,
        }
    }
}

/// What the eroot dealer keeps to run the proofs later.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DealerSecrets {
    pub entries: Vec<DealerEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DealerEntry {
    pub index: usize,
    #[serde(with = "serde_dec")]
    pub m: BigInt,
    #[serde(with = "serde_dec")]
    pub alpha: BigInt,
}

/// The prover's nonce for the pending round; never published.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProverState {
    pub index: usize,
    #[serde(with = "serde_dec")]
    pub w: BigInt,
    #[serde(with = "serde_dec")]
    pub alpha: BigInt,
}

/// A pending round: the transcript so far plus the new commitment, and
/// the challenge once the verifier has drawn it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Commitment {
    pub index: usize,
    pub transcript: ERootTranscript,
    #[serde(with = "serde_dec")]
    pub t_g: BigInt,
    #[serde(with = "serde_dec")]
    pub t_y: BigInt,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "serde_dec::option"
    )]
    pub c: Option<BigInt>,
}
