use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GroupDescriptor, GroupElement, GroupError, Permutation, Unitriangular};

const POWER_SAMPLING_TRIES: usize = 1000;

/// How a [`CommutingFamily`] is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyStrategy {
    /// Transpositions on disjoint, randomly chosen pairs of points.
    DisjointSupport,
    /// `a, a², …, aⁿ` for a random `a` of order greater than `n`.
    PowersOfOne,
    /// Random matrices from the abelian slice `b = 0` of the matrix backend.
    AbelianMatrixSlice,
}

impl std::str::FromStr for FamilyStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "disjoint-support" => Ok(FamilyStrategy::DisjointSupport),
            "powers-of-one" => Ok(FamilyStrategy::PowersOfOne),
            "abelian-matrix-slice" => Ok(FamilyStrategy::AbelianMatrixSlice),
            other => Err(format!("unknown family strategy {other:?}")),
        }
    }
}

impl FamilyStrategy {
    /// The natural strategy for a backend.
    pub fn default_for(descriptor: &GroupDescriptor) -> Self {
        match descriptor {
            GroupDescriptor::Permutation { .. } => FamilyStrategy::DisjointSupport,
            GroupDescriptor::Unitriangular { .. } => FamilyStrategy::AbelianMatrixSlice,
        }
    }
}

/// Pairwise-commuting, non-identity elements `f₁ … fₙ` of one group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyWire")]
pub struct CommutingFamily {
    strategy: FamilyStrategy,
    elements: Vec<GroupElement>,
}

#[derive(Deserialize)]
struct FamilyWire {
    strategy: FamilyStrategy,
    elements: Vec<GroupElement>,
}

impl TryFrom<FamilyWire> for CommutingFamily {
    type Error = GroupError;

    fn try_from(w: FamilyWire) -> Result<Self, GroupError> {
        CommutingFamily::new(w.elements, w.strategy)
    }
}

impl CommutingFamily {
    /// Validates the family invariants: non-empty, one group, no identity,
    /// pairwise commuting.
    pub fn new(elements: Vec<GroupElement>, strategy: FamilyStrategy) -> Result<Self, GroupError> {
        let Some(first) = elements.first() else {
            return Err(GroupError::CapacityExceeded(
                "a family needs at least one element".into(),
            ));
        };
        for (i, f) in elements.iter().enumerate() {
            first.same_group(f)?;
            if f.is_identity() {
                return Err(GroupError::IdentityMember(i));
            }
        }
        for i in 0..elements.len() {
            for j in i + 1..elements.len() {
                if !elements[i].commutes_with(&elements[j])? {
                    return Err(GroupError::NotCommuting(i, j));
                }
            }
        }
        Ok(CommutingFamily { strategy, elements })
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn strategy(&self) -> FamilyStrategy {
        self.strategy
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        self.elements[0].descriptor()
    }
}

/// Draws a commuting family of `n` elements with the given strategy.
pub fn sample_commuting_family<R: Rng + ?Sized>(
    descriptor: &GroupDescriptor,
    n: usize,
    strategy: FamilyStrategy,
    rng: &mut R,
) -> Result<CommutingFamily, GroupError> {
    if n == 0 {
        return Err(GroupError::CapacityExceeded(
            "a family needs at least one element".into(),
        ));
    }
    let elements = match (strategy, *descriptor) {
        (FamilyStrategy::DisjointSupport, GroupDescriptor::Permutation { degree }) => {
            if degree < 2 * n {
                return Err(GroupError::CapacityExceeded(format!(
                    "{n} disjoint transpositions need degree >= {}, have {degree}",
                    2 * n
                )));
            }
            let mut points: Vec<u32> = (1..=degree as u32).collect();
            points.shuffle(rng);
            points
                .chunks_exact(2)
                .take(n)
                .map(|pair| {
                    GroupElement::Perm(
                        Permutation::from_cycles(degree, &[pair]).expect("disjoint pair"),
                    )
                })
                .collect()
        }
        (FamilyStrategy::PowersOfOne, _) => {
            let base = (0..POWER_SAMPLING_TRIES)
                .map(|_| descriptor.random_non_identity(rng))
                .find(|a| (1..=n as i64).all(|k| !a.pow(k).is_identity()))
                .ok_or_else(|| {
                    GroupError::CapacityExceeded(format!(
                        "no element of order > {n} found in {descriptor}"
                    ))
                })?;
            (1..=n as i64).map(|k| base.pow(k)).collect()
        }
        (FamilyStrategy::AbelianMatrixSlice, GroupDescriptor::Unitriangular { modulus }) => {
            let capacity = (modulus as u128).pow(2) - 1;
            if n as u128 > capacity {
                return Err(GroupError::CapacityExceeded(format!(
                    "the b = 0 slice mod {modulus} has only {capacity} non-identity elements"
                )));
            }
            let mut out: Vec<GroupElement> = Vec::with_capacity(n);
            while out.len() < n {
                let m = Unitriangular::new(
                    modulus,
                    rng.gen_range(0..modulus),
                    0,
                    rng.gen_range(0..modulus),
                );
                let m = GroupElement::Matrix(m);
                if !m.is_identity() && !out.contains(&m) {
                    out.push(m);
                }
            }
            out
        }
        (strategy, descriptor) => {
            return Err(GroupError::CapacityExceeded(format!(
                "strategy {strategy:?} is not available for {descriptor}"
            )))
        }
    };
    CommutingFamily::new(elements, strategy)
}

/// True iff every element of `left` commutes with every element of `right`.
pub fn commuting_sets(left: &[GroupElement], right: &[GroupElement]) -> Result<bool, GroupError> {
    for a in left {
        for b in right {
            if !a.commutes_with(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn disjoint_support_family_in_degree_five() {
        let d5 = GroupDescriptor::permutation(5).unwrap();
        let fam =
            sample_commuting_family(&d5, 2, FamilyStrategy::DisjointSupport, &mut seeded_rng(1))
                .unwrap();
        assert_eq!(fam.len(), 2);
        for f in fam.elements() {
            let GroupElement::Perm(p) = f else { panic!() };
            assert_eq!(p.cycles().len(), 1);
            assert_eq!(p.cycles()[0].len(), 2);
            assert!(f.pow(2).is_identity());
        }
        let (a, b) = (&fam.elements()[0], &fam.elements()[1]);
        assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());

        // The canonical pair {(1 2), (3 4)} is accepted by the constructor.
        let fixed = CommutingFamily::new(
            vec![
                GroupElement::cycles(5, &[&[1, 2]]),
                GroupElement::cycles(5, &[&[3, 4]]),
            ],
            FamilyStrategy::DisjointSupport,
        )
        .unwrap();
        assert_eq!(fixed.len(), 2);
    }

    #[test]
    fn single_member_family() {
        for d in [
            GroupDescriptor::permutation(4).unwrap(),
            GroupDescriptor::unitriangular(5).unwrap(),
        ] {
            let fam =
                sample_commuting_family(&d, 1, FamilyStrategy::PowersOfOne, &mut seeded_rng(2))
                    .unwrap();
            assert_eq!(fam.len(), 1);
            assert!(!fam.elements()[0].is_identity());
        }
    }

    #[test]
    fn matrix_slice_family_commutes_pairwise() {
        let d = GroupDescriptor::unitriangular(5).unwrap();
        let fam = sample_commuting_family(
            &d,
            3,
            FamilyStrategy::AbelianMatrixSlice,
            &mut seeded_rng(3),
        )
        .unwrap();
        for x in fam.elements() {
            let GroupElement::Matrix(m) = x else { panic!() };
            assert_eq!(m.b, 0);
            for y in fam.elements() {
                assert_eq!(x.mul(y).unwrap(), y.mul(x).unwrap());
            }
        }
    }

    #[test]
    fn capacity_errors() {
        let d5 = GroupDescriptor::permutation(5).unwrap();
        let mut rng = seeded_rng(4);
        assert!(matches!(
            sample_commuting_family(&d5, 3, FamilyStrategy::DisjointSupport, &mut rng),
            Err(GroupError::CapacityExceeded(_))
        ));
        assert!(matches!(
            sample_commuting_family(&d5, 2, FamilyStrategy::AbelianMatrixSlice, &mut rng),
            Err(GroupError::CapacityExceeded(_))
        ));
        // Sym(4) has no element of order above 4.
        let d4 = GroupDescriptor::permutation(4).unwrap();
        assert!(matches!(
            sample_commuting_family(&d4, 5, FamilyStrategy::PowersOfOne, &mut rng),
            Err(GroupError::CapacityExceeded(_))
        ));
    }

    #[test]
    fn constructor_rejects_bad_families() {
        let a = GroupElement::cycles(5, &[&[1, 2]]);
        let b = GroupElement::cycles(5, &[&[2, 3]]);
        assert_eq!(
            CommutingFamily::new(vec![a.clone(), b], FamilyStrategy::DisjointSupport),
            Err(GroupError::NotCommuting(0, 1))
        );
        let id = a.descriptor().identity();
        assert_eq!(
            CommutingFamily::new(vec![a, id], FamilyStrategy::DisjointSupport),
            Err(GroupError::IdentityMember(1))
        );
    }

    #[test]
    fn commuting_sets_examples() {
        let d5 = GroupDescriptor::permutation(5).unwrap();
        let any = vec![GroupElement::cycles(5, &[&[1, 3, 5]])];
        assert!(commuting_sets(&[d5.identity()], &any).unwrap());

        let c = GroupElement::cycles(5, &[&[1, 2, 3]]);
        let powers: Vec<_> = (0..3).map(|k| c.pow(k)).collect();
        assert!(commuting_sets(&powers, &[GroupElement::cycles(5, &[&[4, 5]])]).unwrap());

        let left = [GroupElement::cycles(5, &[&[1, 2]])];
        let right = [GroupElement::cycles(5, &[&[2, 3]])];
        assert!(!commuting_sets(&left, &right).unwrap());
    }

    #[test]
    fn family_json_revalidates() {
        let d = GroupDescriptor::permutation(6).unwrap();
        let fam =
            sample_commuting_family(&d, 3, FamilyStrategy::DisjointSupport, &mut seeded_rng(5))
                .unwrap();
        let json = serde_json::to_string(&fam).unwrap();
        assert_eq!(serde_json::from_str::<CommutingFamily>(&json).unwrap(), fam);
        let clash = serde_json::json!({
            "strategy": "disjoint-support",
            "elements": [GroupElement::cycles(6, &[&[1, 2]]), GroupElement::cycles(6, &[&[2, 3]])],
        });
        assert!(serde_json::from_value::<CommutingFamily>(clash).is_err());
    }
}
