//! `pvss`: command-line driver for the workbench.
//!
//! Exit status: 0 on success or accept, 1 when a verification rejects,
//! 2 on usage or data errors (with a one-line diagnostic on stderr).

mod commands;
mod docs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pvss::session::{Adversary, Scheme};

#[derive(Debug, Parser)]
#[command(name = "pvss", version, about = "Verifiable secret sharing workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Scheme to operate on.
    #[arg(long, global = true, default_value = "dlog")]
    pub scheme: Scheme,
    /// Seed for every random draw.
    #[arg(long, global = true, env = "PVSS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Input document; repeat for several.
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Use the hand-checkable fixture parameters.
    #[arg(long, global = true)]
    pub tiny: bool,
    /// Generate parameters of this size instead (modulus bits).
    #[arg(long, global = true, conflicts_with = "tiny")]
    pub bits: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter documents.
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Deal a secret: writes the public board and one private file per
    /// participant.
    Deal(DealArgs),
    /// Check a board (with optional private shares) or an eroot transcript.
    Verify,
    /// Recover the secret from a board and participants' private files.
    Reconstruct,
    /// Eroot prover: commit to a fresh nonce for one participant.
    Prove(ProveArgs),
    /// Eroot verifier: draw a challenge for a pending commitment.
    Challenge,
    /// Eroot prover: answer a challenge and extend the transcript.
    Respond(RespondArgs),
    /// Multi-party sessions.
    Session {
        #[command(subcommand)]
        action: SessionAction,
    },
    /// Attack demonstrators.
    Attack {
        #[command(subcommand)]
        action: AttackAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ParamsAction {
    /// Print a parameter document.
    Gen,
}

#[derive(Debug, Args)]
pub struct DealArgs {
    /// Participants.
    #[arg(short = 'n', long)]
    pub n: Option<usize>,
    /// Threshold (k, or t for na-vss-threshold).
    #[arg(short = 'k', long)]
    pub k: Option<usize>,
    /// Secret for the integer schemes; random when absent.
    #[arg(long)]
    pub secret: Option<String>,
    /// Directory for the private per-participant files.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub private_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// 1-based participant whose share is proven.
    #[arg(long)]
    pub participant: usize,
    /// Challenge bits; defaults to the parameters' value.
    #[arg(short = 'l', long)]
    pub l: Option<u32>,
    /// Where to keep the prover's nonce.
    #[arg(long, value_name = "PATH")]
    pub state: PathBuf,
}

#[derive(Debug, Args)]
pub struct RespondArgs {
    /// The nonce file written by `prove`.
    #[arg(long, value_name = "PATH")]
    pub state: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum SessionAction {
    /// Run a full session; prints the report.
    Run(SessionArgs),
}

#[derive(Debug, Args)]
pub struct SessionArgs {
    #[arg(short = 'n', long)]
    pub n: Option<usize>,
    #[arg(short = 'k', long)]
    pub k: Option<usize>,
    #[arg(short = 'l', long)]
    pub l: Option<u32>,
    #[arg(long)]
    pub rounds: Option<usize>,
    /// none, tamper-share(i), tamper-ciphertext(i), tamper-proof(i) or
    /// wrong-subset.
    #[arg(long, default_value = "none")]
    pub adversary: Adversary,
    /// Also write the report here.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AttackAction {
    /// Exhaustive conjugacy search for one participant's share.
    ConjSearch(ConjSearchArgs),
}

#[derive(Debug, Args)]
pub struct ConjSearchArgs {
    #[arg(long)]
    pub participant: usize,
    /// Largest group order to enumerate.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

/// How a command ended, short of success.
#[derive(Debug)]
pub enum Failure {
    Reject(String),
    Data(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Reject(msg)) => {
            eprintln!("rejected: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
