//! Polynomial secret sharing over `Z_p` with Lagrange reconstruction.
//!
//! Participant `i` holds `s_i = s + Σ_{j=1}^{k-1} f_j · x_i^j (mod p)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{mod_inv, random_below, reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShamirError {
    #[error("bad sharing policy: {0}")]
    BadPolicy(String),
    #[error("secret must lie in [0, p)")]
    SecretOutOfRange,
    #[error("duplicate x coordinate {0}")]
    DuplicateX(BigInt),
    #[error("difference of x coordinates {0} and {1} is not invertible")]
    NonInvertibleDifference(BigInt, BigInt),
    #[error("no points to interpolate")]
    NoPoints,
}

/// Who gets a share, how many are needed, and where shares are evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharingPolicy {
    pub n: usize,
    pub k: usize,
    #[serde(with = "crate::serde_dec")]
    pub p: BigInt,
    #[serde(with = "crate::serde_dec::vec")]
    pub x_coords: Vec<BigInt>,
}

impl SharingPolicy {
    pub fn new(n: usize, k: usize, p: BigInt, x_coords: Vec<BigInt>) -> Result<Self, ShamirError> {
        if k == 0 || k > n {
            return Err(ShamirError::BadPolicy(format!(
                "need 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        if x_coords.len() != n {
            return Err(ShamirError::BadPolicy(format!(
                "{} x coordinates for {n} participants",
                x_coords.len()
            )));
        }
        if p < BigInt::from(2) {
            return Err(ShamirError::BadPolicy("modulus below 2".into()));
        }
        for (i, x) in x_coords.iter().enumerate() {
            if x.is_zero() || x >= &p || x < &BigInt::zero() {
                return Err(ShamirError::BadPolicy(format!(
                    "x coordinate {x} not a nonzero element of Z_p"
                )));
            }
            if x_coords[..i].contains(x) {
                return Err(ShamirError::DuplicateX(x.clone()));
            }
        }
        Ok(SharingPolicy { n, k, p, x_coords })
    }

    /// Policy with `x_i = i` for `i = 1..=n`.
    pub fn with_default_coords(n: usize, k: usize, p: BigInt) -> Result<Self, ShamirError> {
        SharingPolicy::new(n, k, p, (1..=n).map(BigInt::from).collect())
    }
}

/// A dealt sharing. `secret` and `coefficients` are dealer-private.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareSet {
    #[serde(with = "crate::serde_dec")]
    pub secret: BigInt,
    /// `f_1 … f_{k-1}`.
    #[serde(with = "crate::serde_dec::vec")]
    pub coefficients: Vec<BigInt>,
    #[serde(with = "crate::serde_dec::vec")]
    pub x_coords: Vec<BigInt>,
    #[serde(with = "crate::serde_dec::vec")]
    pub shares: Vec<BigInt>,
}

impl ShareSet {
    /// `(x_i, s_i)` for every participant.
    pub fn points(&self) -> Vec<(BigInt, BigInt)> {
        self.x_coords
            .iter()
            .cloned()
            .zip(self.shares.iter().cloned())
            .collect()
    }
}

/// Horner evaluation of `coeffs[0] + coeffs[1]·x + … (mod p)`.
pub fn eval_poly(coeffs: &[BigInt], x: &BigInt, p: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| reduce(&(acc * x + c), p))
}

/// Splits `secret` with fresh uniform coefficients.
pub fn split<R: Rng + ?Sized>(
    secret: &BigInt,
    policy: &SharingPolicy,
    rng: &mut R,
) -> Result<ShareSet, ShamirError> {
    let coefficients: Vec<BigInt> = (1..policy.k)
        .map(|_| random_below(rng, &policy.p))
        .collect();
    split_with_coefficients(secret, coefficients, policy)
}

/// Splits `secret` with caller-chosen coefficients `f_1 … f_{k-1}`.
pub fn split_with_coefficients(
    secret: &BigInt,
    coefficients: Vec<BigInt>,
    policy: &SharingPolicy,
) -> Result<ShareSet, ShamirError> {
    if secret < &BigInt::zero() || secret >= &policy.p {
        return Err(ShamirError::SecretOutOfRange);
    }
    if coefficients.len() + 1 != policy.k {
        return Err(ShamirError::BadPolicy(format!(
            "{} coefficients for threshold {}",
            coefficients.len(),
            policy.k
        )));
    }
    let coefficients: Vec<BigInt> = coefficients.iter().map(|c| reduce(c, &policy.p)).collect();
    let mut poly = Vec::with_capacity(policy.k);
    poly.push(secret.clone());
    poly.extend(coefficients.iter().cloned());
    let shares = policy
        .x_coords
        .iter()
        .map(|x| eval_poly(&poly, x, &policy.p))
        .collect();
    Ok(ShareSet {
        secret: secret.clone(),
        coefficients,
        x_coords: policy.x_coords.clone(),
        shares,
    })
}

/// Lagrange interpolation at zero through `points`.
pub fn reconstruct(points: &[(BigInt, BigInt)], p: &BigInt) -> Result<BigInt, ShamirError> {
    if points.is_empty() {
        return Err(ShamirError::NoPoints);
    }
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i]
            .iter()
            .any(|(y, _)| reduce(y, p) == reduce(x, p))
        {
            return Err(ShamirError::DuplicateX(x.clone()));
        }
    }
    let mut acc = BigInt::zero();
    for (i, (xi, si)) in points.iter().enumerate() {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                num = (num * xj).mod_floor(p);
                den = (den * (xj - xi)).mod_floor(p);
            }
        }
        let den_inv = mod_inv(&den, p)
            .map_err(|_| ShamirError::NonInvertibleDifference(xi.clone(), den.clone()))?;
        acc = (acc + si * num * den_inv).mod_floor(p);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use itertools::Itertools;
    use proptest::{prop_assert_eq, proptest};

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn split_example() {
        let policy = SharingPolicy::new(2, 2, b(23), vec![b(2), b(3)]).unwrap();
        let set = split_with_coefficients(&b(5), vec![b(3)], &policy).unwrap();
        assert_eq!(set.shares, vec![b(11), b(14)]);
    }

    #[test]
    fn threshold_one_is_constant() {
        let policy = SharingPolicy::with_default_coords(4, 1, b(23)).unwrap();
        let set = split(&b(17), &policy, &mut seeded_rng(1)).unwrap();
        assert!(set.shares.iter().all(|s| *s == b(17)));
        assert_eq!(reconstruct(&set.points()[2..3], &policy.p).unwrap(), b(17));
    }

    #[test]
    fn full_threshold_round_trip() {
        let policy = SharingPolicy::with_default_coords(3, 3, b(23)).unwrap();
        let set = split(&b(9), &policy, &mut seeded_rng(2)).unwrap();
        assert_eq!(reconstruct(&set.points(), &policy.p).unwrap(), b(9));
    }

    #[test]
    fn reconstruct_example() {
        assert_eq!(
            reconstruct(&[(b(2), b(11)), (b(3), b(14))], &b(23)).unwrap(),
            b(5)
        );
    }

    #[test]
    fn reconstruct_errors() {
        assert_eq!(reconstruct(&[], &b(23)), Err(ShamirError::NoPoints));
        assert!(matches!(
            reconstruct(&[(b(2), b(1)), (b(25), b(4))], &b(23)),
            Err(ShamirError::DuplicateX(_))
        ));
        // Over a composite modulus x-differences can fail to be units.
        assert!(matches!(
            reconstruct(&[(b(1), b(1)), (b(4), b(4))], &b(9)),
            Err(ShamirError::NonInvertibleDifference(..))
        ));
    }

    #[test]
    fn policy_validation() {
        assert!(SharingPolicy::with_default_coords(3, 0, b(23)).is_err());
        assert!(SharingPolicy::with_default_coords(3, 4, b(23)).is_err());
        assert!(SharingPolicy::new(2, 1, b(23), vec![b(0), b(1)]).is_err());
        assert!(matches!(
            SharingPolicy::new(2, 1, b(23), vec![b(4), b(4)]),
            Err(ShamirError::DuplicateX(_))
        ));
        let policy = SharingPolicy::with_default_coords(2, 2, b(23)).unwrap();
        assert_eq!(
            split(&b(23), &policy, &mut seeded_rng(0)),
            Err(ShamirError::SecretOutOfRange)
        );
    }

    #[test]
    fn every_k_subset_reconstructs_up_to_six() {
        let mut rng = seeded_rng(3);
        let p = b(1_000_003);
        for n in 1..=6 {
            for k in 1..=n {
                let policy = SharingPolicy::with_default_coords(n, k, p.clone()).unwrap();
                let secret = random_below(&mut rng, &p);
                let set = split(&secret, &policy, &mut rng).unwrap();
                for subset in set.points().into_iter().combinations(k) {
                    assert_eq!(reconstruct(&subset, &p).unwrap(), secret, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn random_subsets_100_trials() {
        let mut rng = seeded_rng(4);
        let p = b(2_147_483_647);
        for _ in 0..100 {
            let n = rng.gen_range(1..=8);
            let k = rng.gen_range(1..=n);
            let policy = SharingPolicy::with_default_coords(n, k, p.clone()).unwrap();
            let secret = random_below(&mut rng, &p);
            let set = split(&secret, &policy, &mut rng).unwrap();
            let subset: Vec<_> = set.points().into_iter().combinations(k).next().unwrap();
            assert_eq!(reconstruct(&subset, &p).unwrap(), secret);
        }
    }

    /// Coefficients of the unique polynomial of degree < len(points) through
    /// `points`, built by expanding Lagrange basis polynomials.
    fn interpolate_coeffs(points: &[(BigInt, BigInt)], p: &BigInt) -> Vec<BigInt> {
        let m = points.len();
        let mut out = vec![BigInt::zero(); m];
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = vec![BigInt::one()];
            let mut den = BigInt::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![BigInt::zero(); basis.len() + 1];
                for (d, c) in basis.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * xj;
                }
                basis = next;
                den = (den * (xi - xj)).mod_floor(p);
            }
            let scale = yi * mod_inv(&den, p).unwrap();
            for (d, c) in basis.iter().enumerate() {
                out[d] = (&out[d] + c * &scale).mod_floor(p);
            }
        }
        out
    }

    #[test]
    fn k_minus_one_shares_fit_every_secret() {
        let p = b(29);
        let mut rng = seeded_rng(5);
        let policy = SharingPolicy::with_default_coords(4, 3, p.clone()).unwrap();
        let set = split(&b(7), &policy, &mut rng).unwrap();
        let known = &set.points()[..2];
        for _ in 0..50 {
            let candidate = random_below(&mut rng, &p);
            let mut pts = vec![(b(0), candidate.clone())];
            pts.extend_from_slice(known);
            let poly = interpolate_coeffs(&pts, &p);
            assert!(poly.len() <= policy.k);
            assert_eq!(poly[0], candidate);
            for (x, y) in known {
                assert_eq!(&eval_poly(&poly, x, &p), y);
            }
        }
    }

    #[test]
    fn eval_poly_examples() {
        assert_eq!(eval_poly(&[b(4)], &b(999), &b(23)), b(4));
        assert_eq!(eval_poly(&[b(5), b(3)], &b(2), &b(23)), b(11));
    }

    proptest! {
        #[test]
        fn horner_matches_termwise_sum(coeffs in proptest::collection::vec(0i64..1_000_000, 1..8), x in 0i64..1_000_000) {
            let p = b(1_000_003);
            let coeffs: Vec<BigInt> = coeffs.into_iter().map(b).collect();
            let x = b(x);
            let termwise = coeffs
                .iter()
                .enumerate()
                .fold(BigInt::zero(), |acc, (j, c)| acc + c * num_traits::pow(x.clone(), j))
                .mod_floor(&p);
            prop_assert_eq!(eval_poly(&coeffs, &x, &p), termwise);
        }
    }
}
