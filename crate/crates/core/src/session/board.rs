use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::config::Scheme;

/// Who authored a post. Participants are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Role {
    Dealer,
    Participant(usize),
    Verifier,
    Adversary,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Dealer => f.write_str("dealer"),
            Role::Participant(i) => write!(f, "participant-{i}"),
            Role::Verifier => f.write_str("verifier"),
            Role::Adversary => f.write_str("adversary"),
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dealer" => Ok(Role::Dealer),
            "verifier" => Ok(Role::Verifier),
            "adversary" => Ok(Role::Adversary),
            _ => s
                .strip_prefix("participant-")
                .and_then(|i| i.parse().ok())
                .filter(|&i| i >= 1)
                .map(Role::Participant)
                .ok_or_else(|| format!("unknown role {s:?}")),
        }
    }
}

impl TryFrom<String> for Role {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Role> for String {
    fn from(r: Role) -> String {
        r.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("{author} may not post {label:?}")]
    Unauthorized { author: Role, label: String },
    #[error("label {label:?} is not used by the {scheme} scheme")]
    UnknownLabel { label: String, scheme: Scheme },
    #[error("post {seq} is out of sequence")]
    OutOfSequence { seq: usize },
    #[error("malformed payload under {label:?}: {reason}")]
    Payload { label: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub seq: usize,
    pub author: Role,
    pub label: String,
    pub payload: serde_json::Value,
}

/// Which roles may post a label.
fn may_post(label: &str, author: Role) -> bool {
    match label {
        "params" | "deal" | "vss-board" | "ciphertext" | "commitment" | "response" => {
            author == Role::Dealer
        }
        "public-key" | "share-reveal" | "recovery" => matches!(author, Role::Participant(_)),
        "challenge" => author == Role::Verifier,
        "verdict" => matches!(author, Role::Participant(_) | Role::Verifier),
        _ => false,
    }
}

/// The labels each scheme's script uses.
pub fn labels_for(scheme: Scheme) -> &'static [&'static str] {
    match scheme {
        Scheme::Dlog => &[
            "params",
            "public-key",
            "deal",
            "verdict",
            "share-reveal",
            "recovery",
        ],
        Scheme::Eroot => &[
            "params",
            "public-key",
            "ciphertext",
            "commitment",
            "challenge",
            "response",
            "verdict",
            "share-reveal",
            "recovery",
        ],
        Scheme::NaKex => &["params", "public-key", "ciphertext", "recovery"],
        Scheme::NaPvss => &[
            "params",
            "public-key",
            "vss-board",
            "deal",
            "challenge",
            "response",
            "verdict",
            "share-reveal",
            "recovery",
        ],
        Scheme::NaVss => &["params", "deal", "verdict", "share-reveal", "recovery"],
        Scheme::NaVssThreshold => &["params", "deal", "share-reveal", "recovery"],
    }
}

/// Append-only public channel. Persisted as the JSON array of its posts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulletinBoard {
    scheme: Scheme,
    posts: Vec<Post>,
}

/// Filter for [`board_read`]; `None` matches anything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Selector {
    pub label: Option<String>,
    pub author: Option<Role>,
}

impl Selector {
    pub fn label(label: &str) -> Self {
        Selector {
            label: Some(label.to_string()),
            author: None,
        }
    }
}

impl BulletinBoard {
    pub fn new(scheme: Scheme) -> Self {
        BulletinBoard {
            scheme,
            posts: Vec::new(),
        }
    }

    /// Rebuilds a board from a post list, re-checking sequence numbers and
    /// authorization.
    pub fn from_posts(scheme: Scheme, posts: Vec<Post>) -> Result<Self, BoardError> {
        let mut board = BulletinBoard::new(scheme);
        for post in posts {
            if post.seq != board.posts.len() {
                return Err(BoardError::OutOfSequence { seq: post.seq });
            }
            board_post(&mut board, post.author, &post.label, post.payload)?;
        }
        Ok(board)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn posts(&self) -> &[Post] {
        &self.posts
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.posts).expect("posts serialize")
    }
}

/// Appends a post and returns its sequence number.
pub fn board_post(
    board: &mut BulletinBoard,
    author: Role,
    label: &str,
    payload: serde_json::Value,
) -> Result<usize, BoardError> {
    if !labels_for(board.scheme).contains(&label) {
        return Err(BoardError::UnknownLabel {
            label: label.to_string(),
            scheme: board.scheme,
        });
    }
    if !may_post(label, author) {
        return Err(BoardError::Unauthorized {
            author,
            label: label.to_string(),
        });
    }
    let seq = board.posts.len();
    board.posts.push(Post {
        seq,
        author,
        label: label.to_string(),
        payload,
    });
    Ok(seq)
}

pub fn board_read<'a>(board: &'a BulletinBoard, selector: &Selector) -> Vec<&'a Post> {
    board
        .posts
        .iter()
        .filter(|p| selector.label.as_deref().is_none_or(|l| l == p.label))
        .filter(|p| selector.author.is_none_or(|a| a == p.author))
        .collect()
}
