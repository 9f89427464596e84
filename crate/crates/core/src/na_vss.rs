//! Verifiable secret sharing of a group element with a commuting family.
//!
//! Participant `i` privately receives `f_i` from a pairwise-commuting
//! family. The dealer publishes `S = s^{Π f_j}` and, for every `i`,
//! `h_i = s^{Π_{j≠i} f_j}`. Any `n − 1` participants missing `i` recover
//! `s = h_i^{(Π_{j≠i} f_j)⁻¹}`; participant `i` checks `h_i^{f_i} = S`.
//!
//! The threshold variant publishes `h_H = s^{Π_{j∈H} f_j}` for index sets
//! `H` of size `t`; a coalition containing some published `H` recovers `s`.
//!
//! Participants are numbered from 1. Products run in ascending index order;
//! commutation makes the order immaterial.
//!
//! ```
//! use pvss::group::{CommutingFamily, FamilyStrategy, GroupElement};
//! use pvss::na_vss::{na_vss_deal, na_vss_reconstruct, na_vss_self_verify};
//!
//! let s = GroupElement::cycles(5, &[&[1, 2, 3, 4, 5]]);
//! let f1 = GroupElement::cycles(5, &[&[1, 2]]);
//! let f2 = GroupElement::cycles(5, &[&[3, 4]]);
//! let family = CommutingFamily::new(vec![f1.clone(), f2.clone()], FamilyStrategy::DisjointSupport).unwrap();
//! let board = na_vss_deal(&s, &family).unwrap();
//! assert_eq!(board.big_s, GroupElement::cycles(5, &[&[2, 1, 4, 3, 5]]));
//! assert!(na_vss_self_verify(&board, 1, &f1).unwrap());
//! assert_eq!(na_vss_reconstruct(&board, 1, &[(2, f2)]).unwrap(), s);
//! ```

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{CommutingFamily, GroupDescriptor, GroupElement, GroupError};

/// Default cap on the number of subsets an all-subsets deal may publish.
pub const DEFAULT_SUBSET_CAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaVssError {
    #[error("the secret is the identity")]
    IdentitySecret,
    #[error("the secret commutes with every share, so S = s would reveal it")]
    DegenerateSecret,
    #[error("need at least {need} shares, family has {have}")]
    TooFewShares { need: usize, have: usize },
    #[error("participant index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("mutual verification needs two distinct participants, got {0} twice")]
    SameParticipant(usize),
    #[error("threshold {t} outside [1, {n}]")]
    BadThreshold { t: usize, n: usize },
    #[error("subset {0:?} is malformed")]
    BadSubset(Vec<usize>),
    #[error("{count} subsets exceed the cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("coalition {0:?} does not match the published data")]
    WrongCoalition(Vec<usize>),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `{descriptor, S, h}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaVssBoard {
    pub descriptor: GroupDescriptor,
    #[serde(rename = "S")]
    pub big_s: GroupElement,
    pub h: Vec<GroupElement>,
}

impl NaVssBoard {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// `h_i` for a 1-based index.
    pub fn h_of(&self, i: usize) -> Result<&GroupElement, NaVssError> {
        i.checked_sub(1)
            .and_then(|k| self.h.get(k))
            .ok_or(NaVssError::IndexOutOfRange(i))
    }
}

/// A share as delivered privately to participant `index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaVssShare {
    pub index: usize,
    pub f: GroupElement,
}

/// The shares of a family, numbered from 1.
pub fn shares_of(family: &CommutingFamily) -> Vec<NaVssShare> {
    family
        .elements()
        .iter()
        .enumerate()
        .map(|(k, f)| NaVssShare {
            index: k + 1,
            f: f.clone(),
        })
        .collect()
}

fn product<'a>(
    descriptor: GroupDescriptor,
    items: impl IntoIterator<Item = &'a GroupElement>,
) -> Result<GroupElement, NaVssError> {
    Ok(GroupElement::product(descriptor, items)?)
}

fn check_secret(s: &GroupElement, family: &CommutingFamily, need: usize) -> Result<(), NaVssError> {
    s.same_group(&family.elements()[0])?;
    if family.len() < need {
        return Err(NaVssError::TooFewShares {
            need,
            have: family.len(),
        });
    }
    if s.is_identity() {
        return Err(NaVssError::IdentitySecret);
    }
    for f in family.elements() {
        if !s.commutes_with(f)? {
            return Ok(());
        }
    }
    Err(NaVssError::DegenerateSecret)
}

pub fn na_vss_deal(s: &GroupElement, family: &CommutingFamily) -> Result<NaVssBoard, NaVssError> {
    check_secret(s, family, 2)?;
    let d = family.descriptor();
    let fs = family.elements();
    let big_s = s.conjugate_by(&product(d, fs)?)?;
    let h = (0..fs.len())
        .map(|i| {
            let others = product(
                d,
                fs.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, f)| f),
            )?;
            Ok(s.conjugate_by(&others)?)
        })
        .collect::<Result<_, NaVssError>>()?;
    Ok(NaVssBoard {
        descriptor: d,
        big_s,
        h,
    })
}

/// Recovers `s` from the shares of everyone except `missing`.
pub fn na_vss_reconstruct(
    board: &NaVssBoard,
    missing: usize,
    shares: &[(usize, GroupElement)],
) -> Result<GroupElement, NaVssError> {
    let h_i = board.h_of(missing)?;
    let given: BTreeSet<usize> = shares.iter().map(|(j, _)| *j).collect();
    let expected: BTreeSet<usize> = (1..=board.n()).filter(|&j| j != missing).collect();
    if given != expected || shares.len() != expected.len() {
        return Err(NaVssError::WrongCoalition(
            shares.iter().map(|(j, _)| *j).collect(),
        ));
    }
    let sorted = shares.iter().sorted_by_key(|(j, _)| *j).map(|(_, f)| f);
    let p = product(board.descriptor, sorted)?;
    Ok(h_i.conjugate_by(&p.inverse())?)
}

/// `h_i^{f_i} == S`.
pub fn na_vss_self_verify(
    board: &NaVssBoard,
    i: usize,
    f_i: &GroupElement,
) -> Result<bool, NaVssError> {
    Ok(board.h_of(i)?.conjugate_by(f_i)? == board.big_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutualVariant {
    /// `f_i⁻¹·h_j·f_i == f_j⁻¹·h_i·f_i`, as printed.
    Literal,
    /// `f_i⁻¹·h_j·f_i == f_j⁻¹·h_i·f_j`.
    Symmetric,
}

impl std::str::FromStr for MutualVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "literal" => Ok(MutualVariant::Literal),
            "symmetric" => Ok(MutualVariant::Symmetric),
            other => Err(format!("unknown mutual-verification variant {other:?}")),
        }
    }
}

pub fn na_vss_mutual_verify(
    board: &NaVssBoard,
    i: usize,
    f_i: &GroupElement,
    j: usize,
    f_j: &GroupElement,
    variant: MutualVariant,
) -> Result<bool, NaVssError> {
    if i == j {
        return Err(NaVssError::SameParticipant(i));
    }
    let (h_i, h_j) = (board.h_of(i)?, board.h_of(j)?);
    let lhs = h_j.conjugate_by(f_i)?;
    let rhs = match variant {
        MutualVariant::Literal => f_j.inverse().mul(h_i)?.mul(f_i)?,
        MutualVariant::Symmetric => h_i.conjugate_by(f_j)?,
    };
    Ok(lhs == rhs)
}

/// Which `t`-subsets a threshold deal publishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetPolicy {
    AllSubsets,
    Listed(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetEntry {
    #[serde(rename = "H")]
    pub subset: Vec<usize>,
    #[serde(rename = "h_H")]
    pub h_h: GroupElement,
}

/// `{descriptor, subsets: [{H, h_H}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaVssThresholdBoard {
    pub descriptor: GroupDescriptor,
    pub t: usize,
    pub subsets: Vec<SubsetEntry>,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

pub fn na_vss_deal_threshold(
    s: &GroupElement,
    family: &CommutingFamily,
    t: usize,
    policy: &SubsetPolicy,
    cap: u64,
) -> Result<NaVssThresholdBoard, NaVssError> {
    check_secret(s, family, 1)?;
    let n = family.len();
    if t == 0 || t > n {
        return Err(NaVssError::BadThreshold { t, n });
    }
    let subsets: Vec<Vec<usize>> = match policy {
        SubsetPolicy::AllSubsets => {
            let count = binomial(n, t);
            if count > cap as u128 {
                return Err(NaVssError::CapExceeded { count, cap });
            }
            (1..=n).combinations(t).collect()
        }
        SubsetPolicy::Listed(list) => {
            let mut seen = BTreeSet::new();
            for h in list {
                let distinct: BTreeSet<usize> = h.iter().copied().collect();
                let in_range = h.iter().all(|&j| (1..=n).contains(&j));
                if h.len() != t || distinct.len() != t || !in_range || !seen.insert(distinct) {
                    return Err(NaVssError::BadSubset(h.clone()));
                }
            }
            list.iter()
                .map(|h| h.iter().copied().sorted().collect())
                .collect()
        }
    };
    let d = family.descriptor();
    let fs = family.elements();
    let entries = subsets
        .into_iter()
        .map(|h| {
            let p = product(d, h.iter().map(|&j| &fs[j - 1]))?;
            Ok(SubsetEntry {
                h_h: s.conjugate_by(&p)?,
                subset: h,
            })
        })
        .collect::<Result<_, NaVssError>>()?;
    Ok(NaVssThresholdBoard {
        descriptor: d,
        t,
        subsets: entries,
    })
}

/// Recovers `s` using the first published subset contained in the
/// coalition.
pub fn na_vss_reconstruct_threshold(
    board: &NaVssThresholdBoard,
    shares: &[(usize, GroupElement)],
) -> Result<GroupElement, NaVssError> {
    let coalition: BTreeSet<usize> = shares.iter().map(|(j, _)| *j).collect();
    let entry = board
        .subsets
        .iter()
        .find(|e| e.subset.iter().all(|j| coalition.contains(j)))
        .ok_or_else(|| NaVssError::WrongCoalition(coalition.iter().copied().collect()))?;
    let share_of = |j: usize| {
        shares
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, f)| f)
            .expect("member of coalition")
    };
    let p = product(board.descriptor, entry.subset.iter().map(|&j| share_of(j)))?;
    Ok(entry.h_h.conjugate_by(&p.inverse())?)
}

/// Every `u` with `h_i^u = S`, by exhaustive enumeration of the group.
pub fn attack_bruteforce_conjugacy(
    big_s: &GroupElement,
    h_i: &GroupElement,
    descriptor: GroupDescriptor,
    budget: u64,
) -> Result<Vec<GroupElement>, NaVssError> {
    big_s.same_group(h_i)?;
    let mut out = Vec::new();
    for u in descriptor.enumerate(budget)? {
        if &h_i.conjugate_by(&u)? == big_s {
            out.push(u);
        }
    }
    Ok(out)
}
