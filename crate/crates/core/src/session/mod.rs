//! Deterministic multi-party sessions over a bulletin board.
//!
//! A session plays one scheme end to end with a dealer, `n` participants,
//! a share-less public verifier and, optionally, a cheating dealer. Every
//! public message goes through an append-only [`BulletinBoard`]; private
//! deliveries (shares, keys) stay in memory. The run is driven by one
//! seeded generator in a fixed schedule, so a `(config, seed)` pair yields
//! byte-identical board and report files.
//!
//! ```
//! use pvss::session::{run_session, Scheme, SessionConfig};
//!
//! let out = run_session(&SessionConfig::tiny(Scheme::Dlog, 7)).unwrap();
//! assert!(out.report.all_protocol_checks_pass());
//! assert!(out.report.recoveries.iter().all(|r| r.matches_secret));
//! ```

mod board;
mod config;
mod run;

pub use board::{
    board_post, board_read, labels_for, BoardError, BulletinBoard, Post, Role, Selector,
};
pub use config::{eroot_share_modulus, Adversary, Scheme, SchemeParams, SessionConfig};
pub use run::run_session;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("invalid session config: {0}")]
    Config(String),
    #[error(transparent)]
    Board(#[from] BoardError),
}

/// `protocol`: a check a role can run from its own view.
/// `finding`: a comparison against ground truth only the harness knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Protocol,
    Finding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub role: Role,
    pub check: String,
    /// Participants the check is about.
    pub subject: Vec<usize>,
    pub kind: CheckKind,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recovery {
    pub coalition: Vec<usize>,
    pub value: serde_json::Value,
    pub matches_secret: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub role: Role,
    pub context: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionReport {
    pub config: SessionConfig,
    /// The dealt secret, disclosed for auditing.
    pub secret: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub recoveries: Vec<Recovery>,
    pub errors: Vec<ErrorRecord>,
    /// False when a scheme error stopped the script early.
    pub completed: bool,
}

impl SessionReport {
    pub fn all_protocol_checks_pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Protocol)
            .all(|c| c.verdict)
    }

    pub fn failed_checks(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.verdict).collect()
    }

    /// Participants named by at least one failed protocol check.
    pub fn flagged(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .checks
            .iter()
            .filter(|c| c.kind == CheckKind::Protocol && !c.verdict)
            .flat_map(|c| c.subject.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Verdicts keyed by `(role, check, subject)`, for comparing runs.
    pub fn verdicts(&self) -> Vec<(String, bool)> {
        self.checks
            .iter()
            .map(|c| (format!("{}/{}/{:?}", c.role, c.check, c.subject), c.verdict))
            .chain(
                self.recoveries
                    .iter()
                    .map(|r| (format!("recovery/{:?}", r.coalition), r.matches_secret)),
            )
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionOutput {
    pub board: BulletinBoard,
    pub report: SessionReport,
}
