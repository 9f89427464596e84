//! Non-abelian platform groups.
//!
//! Two backends ship: permutations of `{1, …, m}` and 3×3 upper
//! unitriangular matrices over a prime field (a nilpotent, hence polycyclic,
//! group). Every element is stored in its unique normal form, so structural
//! equality is group equality.
//!
//! Conjugation follows the exponent convention `x^g = g⁻¹·x·g`.

mod family;
mod perm;
mod unitri;

pub use family::{commuting_sets, sample_commuting_family, CommutingFamily, FamilyStrategy};
pub use perm::Permutation;
pub use unitri::Unitriangular;

use std::fmt;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Degree used for demo runs of the permutation backend.
pub const DEFAULT_DEGREE: usize = 16;
/// Modulus used for demo runs of the matrix backend, `2^61 - 1`.
pub const DEFAULT_MODULUS: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(GroupDescriptor, GroupDescriptor),
    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),
    #[error("enumeration budget of {0} elements exceeded")]
    BudgetExceeded(u64),
    #[error("family members {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("family member {0} is the identity")]
    IdentityMember(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DescriptorWire", into = "DescriptorWire")]
pub enum GroupDescriptor {
    Permutation {
        degree: usize,
    },
    /// 3×3 unitriangular matrices over `Z_modulus`.
    Unitriangular {
        modulus: u64,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
enum DescriptorWire {
    Permutation { degree: usize },
    Unitriangular { dimension: u32, modulus: String },
}

impl TryFrom<DescriptorWire> for GroupDescriptor {
    type Error = GroupError;

    fn try_from(w: DescriptorWire) -> Result<Self, GroupError> {
        match w {
            DescriptorWire::Permutation { degree } => GroupDescriptor::permutation(degree),
            DescriptorWire::Unitriangular { dimension, modulus } => {
                if dimension != 3 {
                    return Err(GroupError::InvalidDescriptor(format!(
                        "unsupported dimension {dimension}"
                    )));
                }
                let modulus = modulus.parse().map_err(|_| {
                    GroupError::InvalidDescriptor(format!("bad modulus {modulus:?}"))
                })?;
                GroupDescriptor::unitriangular(modulus)
            }
        }
    }
}

impl From<GroupDescriptor> for DescriptorWire {
    fn from(d: GroupDescriptor) -> Self {
        match d {
            GroupDescriptor::Permutation { degree } => DescriptorWire::Permutation { degree },
            GroupDescriptor::Unitriangular { modulus } => DescriptorWire::Unitriangular {
                dimension: 3,
                modulus: modulus.to_string(),
            },
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Permutation { degree } => write!(f, "Sym({degree})"),
            GroupDescriptor::Unitriangular { modulus } => write!(f, "UT(3, {modulus})"),
        }
    }
}

impl GroupDescriptor {
    /// Symmetric group of the given degree; degree at least 4 so the group
    /// is non-abelian with room for disjoint commuting elements.
    pub fn permutation(degree: usize) -> Result<Self, GroupError> {
        if !(4..=u32::MAX as usize).contains(&degree) {
            return Err(GroupError::InvalidDescriptor(format!(
                "permutation degree {degree} < 4"
            )));
        }
        Ok(GroupDescriptor::Permutation { degree })
    }

    pub fn unitriangular(modulus: u64) -> Result<Self, GroupError> {
        if !unitri::is_prime_u64(modulus) || modulus >= 1 << 63 {
            return Err(GroupError::InvalidDescriptor(format!(
                "matrix modulus {modulus} is not a prime < 2^63"
            )));
        }
        Ok(GroupDescriptor::Unitriangular { modulus })
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupDescriptor::Permutation { degree } => {
                GroupElement::Perm(Permutation::identity(degree))
            }
            GroupDescriptor::Unitriangular { modulus } => {
                GroupElement::Matrix(Unitriangular::identity(modulus))
            }
        }
    }

    /// Uniform sample: Fisher–Yates for permutations, uniform entries for
    /// matrices.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match *self {
            GroupDescriptor::Permutation { degree } => {
                GroupElement::Perm(Permutation::random(degree, rng))
            }
            GroupDescriptor::Unitriangular { modulus } => {
                GroupElement::Matrix(Unitriangular::random(modulus, rng))
            }
        }
    }

    /// Uniform sample of a non-identity element.
    pub fn random_non_identity<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_identity() {
                return x;
            }
        }
    }

    /// Number of elements, saturating at `u64::MAX`.
    pub fn order(&self) -> u64 {
        match *self {
            GroupDescriptor::Permutation { degree } => (1..=degree as u64)
                .try_fold(1u64, |acc, k| acc.checked_mul(k))
                .unwrap_or(u64::MAX),
            GroupDescriptor::Unitriangular { modulus } => {
                modulus.checked_pow(3).unwrap_or(u64::MAX)
            }
        }
    }

    /// Every element of the group, provided there are at most `budget`.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<GroupElement>, GroupError> {
        if self.order() > budget {
            return Err(GroupError::BudgetExceeded(budget));
        }
        Ok(match *self {
            GroupDescriptor::Permutation { degree } => (1..=degree as u32)
                .permutations(degree)
                .map(|images| {
                    GroupElement::Perm(Permutation::from_images(images).expect("bijection"))
                })
                .collect(),
            GroupDescriptor::Unitriangular { modulus } => (0..modulus)
                .flat_map(|a| (0..modulus).flat_map(move |b| (0..modulus).map(move |c| (a, b, c))))
                .map(|(a, b, c)| GroupElement::Matrix(Unitriangular::new(modulus, a, b, c)))
                .collect(),
        })
    }
}

/// An element of one of the platform groups, in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ElementWire", into = "ElementWire")]
pub enum GroupElement {
    Perm(Permutation),
    Matrix(Unitriangular),
}

#[derive(Serialize, Deserialize)]
struct ElementWire {
    descriptor: GroupDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    images: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<String>>,
}

impl TryFrom<ElementWire> for GroupElement {
    type Error = GroupError;

    fn try_from(w: ElementWire) -> Result<Self, GroupError> {
        match (w.descriptor, w.images, w.matrix) {
            (GroupDescriptor::Permutation { degree }, Some(images), None) => {
                if images.len() != degree {
                    return Err(GroupError::InvalidElement(format!(
                        "{} images for degree {degree}",
                        images.len()
                    )));
                }
                Permutation::from_images(images)
                    .map(GroupElement::Perm)
                    .map_err(GroupError::InvalidElement)
            }
            (GroupDescriptor::Unitriangular { modulus }, None, Some(entries)) => {
                let parsed: Vec<u64> = entries
                    .iter()
                    .map(|e| {
                        e.parse::<u64>()
                            .map_err(|_| GroupError::InvalidElement(format!("bad entry {e:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                let arr: [u64; 9] = parsed
                    .try_into()
                    .map_err(|_| GroupError::InvalidElement("matrix needs 9 entries".into()))?;
                Unitriangular::from_entries(modulus, arr)
                    .map(GroupElement::Matrix)
                    .map_err(GroupError::InvalidElement)
            }
            _ => Err(GroupError::InvalidElement(
                "payload does not match descriptor".into(),
            )),
        }
    }
}

impl From<GroupElement> for ElementWire {
    fn from(x: GroupElement) -> Self {
        let descriptor = x.descriptor();
        match x {
            GroupElement::Perm(p) => ElementWire {
                descriptor,
                images: Some(p.images().to_vec()),
                matrix: None,
            },
            GroupElement::Matrix(m) => ElementWire {
                descriptor,
                images: None,
                matrix: Some(m.entries().iter().map(u64::to_string).collect()),
            },
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Perm(p) => p.fmt(f),
            GroupElement::Matrix(m) => m.fmt(f),
        }
    }
}

impl GroupElement {
    /// Permutation given by disjoint cycles. Panics on malformed cycles;
    /// meant for fixtures and tests.
    pub fn cycles(degree: usize, cycles: &[&[u32]]) -> GroupElement {
        GroupElement::Perm(Permutation::from_cycles(degree, cycles).expect("valid cycles"))
    }

    /// The matrix with top row `(1, a, c)` and middle row `(0, 1, b)`.
    pub fn matrix(modulus: u64, a: u64, b: u64, c: u64) -> GroupElement {
        GroupElement::Matrix(Unitriangular::new(modulus, a, b, c))
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        match self {
            GroupElement::Perm(p) => GroupDescriptor::Permutation { degree: p.degree() },
            GroupElement::Matrix(m) => GroupDescriptor::Unitriangular { modulus: m.modulus },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Perm(p) => p.is_identity(),
            GroupElement::Matrix(m) => m.is_identity(),
        }
    }

    pub fn same_group(&self, other: &GroupElement) -> Result<(), GroupError> {
        let (l, r) = (self.descriptor(), other.descriptor());
        if l == r {
            Ok(())
        } else {
            Err(GroupError::BackendMismatch(l, r))
        }
    }

    /// The group product `self · rhs`.
    pub fn mul(&self, rhs: &GroupElement) -> Result<GroupElement, GroupError> {
        match (self, rhs) {
            (GroupElement::Perm(a), GroupElement::Perm(b)) if a.degree() == b.degree() => {
                Ok(GroupElement::Perm(a.compose(b)))
            }
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) if a.modulus == b.modulus => {
                Ok(GroupElement::Matrix(a.compose(b)))
            }
            _ => Err(GroupError::BackendMismatch(
                self.descriptor(),
                rhs.descriptor(),
            )),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Perm(p) => GroupElement::Perm(p.inverse()),
            GroupElement::Matrix(m) => GroupElement::Matrix(m.inverse()),
        }
    }

    /// `self^g = g⁻¹ · self · g`.
    pub fn conjugate_by(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        g.inverse().mul(self)?.mul(g)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> GroupElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut acc = self.descriptor().identity();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same group");
            }
            base = base.mul(&base).expect("same group");
            exp >>= 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &GroupElement) -> Result<bool, GroupError> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Product of a sequence, left to right; the identity for an empty one.
    pub fn product<'a, I>(descriptor: GroupDescriptor, items: I) -> Result<GroupElement, GroupError>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        items
            .into_iter()
            .try_fold(descriptor.identity(), |acc, x| acc.mul(x))
    }
}
