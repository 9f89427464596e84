use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::SessionError;
use crate::arith::{
    gen_rsa_params, gen_schnorr_like_params, is_probable_prime, RsaParams, SchnorrLikeParams,
    MR_ROUNDS,
};
use crate::group::{FamilyStrategy, GroupDescriptor, DEFAULT_DEGREE};
use crate::na_vss::DEFAULT_SUBSET_CAP;
use crate::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Dlog,
    Eroot,
    NaKex,
    NaPvss,
    NaVss,
    NaVssThreshold,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Dlog,
        Scheme::Eroot,
        Scheme::NaKex,
        Scheme::NaPvss,
        Scheme::NaVss,
        Scheme::NaVssThreshold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Dlog => "dlog",
            Scheme::Eroot => "eroot",
            Scheme::NaKex => "na-kex",
            Scheme::NaPvss => "na-pvss",
            Scheme::NaVss => "na-vss",
            Scheme::NaVssThreshold => "na-vss-threshold",
        }
    }

    pub fn is_group_scheme(self) -> bool {
        !matches!(self, Scheme::Dlog | Scheme::Eroot)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Adversary behaviour; the cheating party is the dealer. Indices are
/// 1-based participant numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Adversary {
    None,
    TamperShare(usize),
    TamperCiphertext(usize),
    TamperProof(usize),
    WrongSubset,
}

impl Adversary {
    pub fn target(self) -> Option<usize> {
        match self {
            Adversary::TamperShare(i)
            | Adversary::TamperCiphertext(i)
            | Adversary::TamperProof(i) => Some(i),
            Adversary::None | Adversary::WrongSubset => None,
        }
    }

    /// Whether the scheme's script knows how to play this adversary.
    pub fn supported_by(self, scheme: Scheme) -> bool {
        use Adversary::*;
        matches!(
            (scheme, self),
            (_, None)
                | (
                    Scheme::Dlog | Scheme::Eroot,
                    TamperShare(_) | TamperCiphertext(_) | TamperProof(_)
                )
                | (Scheme::NaKex, TamperCiphertext(_))
                | (Scheme::NaPvss, TamperShare(_) | TamperCiphertext(_))
                | (
                    Scheme::NaVss | Scheme::NaVssThreshold,
                    TamperShare(_) | WrongSubset
                )
        )
    }
}

impl fmt::Display for Adversary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Adversary::None => f.write_str("none"),
            Adversary::TamperShare(i) => write!(f, "tamper-share({i})"),
            Adversary::TamperCiphertext(i) => write!(f, "tamper-ciphertext({i})"),
            Adversary::TamperProof(i) => write!(f, "tamper-proof({i})"),
            Adversary::WrongSubset => f.write_str("wrong-subset"),
        }
    }
}

impl FromStr for Adversary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => return Ok(Adversary::None),
            "wrong-subset" => return Ok(Adversary::WrongSubset),
            _ => {}
        }
        let bad = || format!("unknown adversary {s:?}");
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let i: usize = rest
            .strip_suffix(')')
            .and_then(|i| i.parse().ok())
            .ok_or_else(bad)?;
        match name {
            "tamper-share" => Ok(Adversary::TamperShare(i)),
            "tamper-ciphertext" => Ok(Adversary::TamperCiphertext(i)),
            "tamper-proof" => Ok(Adversary::TamperProof(i)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Adversary {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Adversary> for String {
    fn from(a: Adversary) -> String {
        a.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SchemeParams {
    Dlog(SchnorrLikeParams),
    Eroot(RsaParams),
    Group {
        descriptor: GroupDescriptor,
        strategy: FamilyStrategy,
    },
}

/// Everything that determines a session. `(config, seed)` fixes the
/// output byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub scheme: Scheme,
    pub params: SchemeParams,
    pub n: usize,
    /// Threshold: `k` for the Shamir-based schemes, `t` for
    /// `na-vss-threshold`. Fixed to `n − 1` for `na-vss`; unused by
    /// `na-kex` and `na-pvss`.
    pub k: usize,
    pub seed: u64,
    /// Proof length: Fiat–Shamir bits for `dlog`, challenge bits for `eroot`.
    pub l: u32,
    /// Interactive rounds per participant for `eroot`.
    pub rounds: usize,
    pub adversary: Adversary,
}

impl SessionConfig {
    /// Hand-checkable parameters: `p = 23` for dlog, `n = 33` for eroot,
    /// permutations of degree 8 for the group schemes.
    pub fn tiny(scheme: Scheme, seed: u64) -> Self {
        let group = |degree| SchemeParams::Group {
            descriptor: GroupDescriptor::permutation(degree).expect("degree >= 4"),
            strategy: FamilyStrategy::DisjointSupport,
        };
        let (params, n, k, l) = match scheme {
            Scheme::Dlog => (SchemeParams::Dlog(SchnorrLikeParams::tiny()), 3, 2, 16),
            Scheme::Eroot => (SchemeParams::Eroot(RsaParams::tiny()), 3, 2, 4),
            Scheme::NaKex | Scheme::NaPvss => (group(8), 3, 3, 0),
            Scheme::NaVss => (group(8), 3, 2, 0),
            Scheme::NaVssThreshold => (group(8), 4, 2, 0),
        };
        SessionConfig {
            scheme,
            params,
            n,
            k,
            seed,
            l,
            rounds: if scheme == Scheme::Eroot { 10 } else { 0 },
            adversary: Adversary::None,
        }
    }

    /// Demo-sized parameters generated deterministically from `seed`:
    /// `bits` sizes `p` for dlog and `n` for eroot; group schemes use
    /// permutations of degree 16.
    pub fn generated(scheme: Scheme, bits: u64, seed: u64) -> Result<Self, SessionError> {
        let mut cfg = SessionConfig::tiny(scheme, seed);
        let mut rng = seeded_rng(seed);
        let config_err = |e: crate::arith::ArithError| SessionError::Config(e.to_string());
        match scheme {
            Scheme::Dlog => {
                cfg.params = SchemeParams::Dlog(
                    gen_schnorr_like_params(bits, &mut rng).map_err(config_err)?,
                );
            }
            Scheme::Eroot => {
                let params =
                    gen_rsa_params(bits, &BigInt::from(3), &mut rng).map_err(config_err)?;
                cfg.l = params.l;
                cfg.params = SchemeParams::Eroot(params);
            }
            _ => {
                cfg.params = SchemeParams::Group {
                    descriptor: GroupDescriptor::permutation(DEFAULT_DEGREE).expect("degree >= 4"),
                    strategy: FamilyStrategy::DisjointSupport,
                };
            }
        }
        Ok(cfg)
    }

    pub fn with_adversary(mut self, adversary: Adversary) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn validate(&self) -> Result<(), SessionError> {
        let err = |msg: String| Err(SessionError::Config(msg));
        let (n, k) = (self.n, self.k);
        if n == 0 {
            return err("n must be at least 1".into());
        }
        match (self.scheme, &self.params) {
            (Scheme::Dlog, SchemeParams::Dlog(p)) => {
                if self.l == 0 {
                    return err("dlog needs l >= 1".into());
                }
                if BigInt::from(n) >= p.p {
                    return err(format!("n = {n} needs p > n, have p = {}", p.p));
                }
            }
            (Scheme::Eroot, SchemeParams::Eroot(p)) => {
                p.validate()
                    .map_err(|e| SessionError::Config(e.to_string()))?;
                if self.l == 0 || self.rounds == 0 {
                    return err("eroot needs l >= 1 and rounds >= 1".into());
                }
                let share_p = eroot_share_modulus(&p.n)
                    .ok_or_else(|| SessionError::Config("modulus too small".into()))?;
                if BigInt::from(n) >= share_p {
                    return err(format!("n = {n} needs a share prime above n, largest below the modulus is {share_p}"));
                }
            }
            (
                s,
                SchemeParams::Group {
                    descriptor,
                    strategy,
                },
            ) if s.is_group_scheme() => {
                let fam_needed =
                    matches!(s, Scheme::NaPvss | Scheme::NaVss | Scheme::NaVssThreshold);
                if fam_needed {
                    if let (
                        FamilyStrategy::DisjointSupport,
                        GroupDescriptor::Permutation { degree },
                    ) = (strategy, descriptor)
                    {
                        if *degree < 2 * n {
                            return err(format!(
                                "{n} disjoint transpositions need degree >= {}",
                                2 * n
                            ));
                        }
                    }
                    if matches!(
                        (strategy, descriptor),
                        (
                            FamilyStrategy::DisjointSupport,
                            GroupDescriptor::Unitriangular { .. }
                        ) | (
                            FamilyStrategy::AbelianMatrixSlice,
                            GroupDescriptor::Permutation { .. }
                        )
                    ) {
                        return err(format!("strategy {strategy:?} does not fit {descriptor}"));
                    }
                }
                if matches!(s, Scheme::NaPvss | Scheme::NaVss) && n < 2 {
                    return err("na-vss needs n >= 2".into());
                }
                if s == Scheme::NaVssThreshold {
                    if k == 0 || k > n {
                        return err(format!("threshold {k} outside [1, {n}]"));
                    }
                    let count = binomial(n, k);
                    if count > DEFAULT_SUBSET_CAP as u128 {
                        return err(format!(
                            "{count} subsets exceed the cap of {DEFAULT_SUBSET_CAP}"
                        ));
                    }
                }
            }
            (s, _) => return err(format!("parameters do not match scheme {s}")),
        }
        if matches!(self.scheme, Scheme::Dlog | Scheme::Eroot) {
            if k == 0 || k > n {
                return err(format!("threshold {k} outside [1, {n}]"));
            }
            if binomial(n, k) > DEFAULT_SUBSET_CAP as u128 {
                return err(format!(
                    "C({n}, {k}) coalitions exceed the cap of {DEFAULT_SUBSET_CAP}"
                ));
            }
        }
        if !self.adversary.supported_by(self.scheme) {
            return err(format!(
                "adversary {} is not available for {}",
                self.adversary, self.scheme
            ));
        }
        if let Some(i) = self.adversary.target() {
            if i == 0 || i > n {
                return err(format!("adversary target {i} outside [1, {n}]"));
            }
        }
        if self.adversary == Adversary::WrongSubset
            && self.scheme == Scheme::NaVssThreshold
            && k == n
        {
            return err("wrong-subset needs t < n so another subset exists".into());
        }
        Ok(())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

/// The largest prime below `n`, over which eroot sessions share.
pub fn eroot_share_modulus(n: &BigInt) -> Option<BigInt> {
    let mut rng = seeded_rng(0);
    let mut c = n - 1u32;
    while c >= BigInt::from(2) {
        if is_probable_prime(&c, MR_ROUNDS, &mut rng) {
            return Some(c);
        }
        c -= 1u32;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        for a in [
            Adversary::None,
            Adversary::TamperShare(2),
            Adversary::TamperCiphertext(1),
            Adversary::TamperProof(3),
            Adversary::WrongSubset,
        ] {
            assert_eq!(a.to_string().parse::<Adversary>().unwrap(), a);
        }
        assert!("tamper-share".parse::<Adversary>().is_err());
        assert!("tamper-share(x)".parse::<Adversary>().is_err());
    }

    #[test]
    fn tiny_configs_validate() {
        for s in Scheme::ALL {
            SessionConfig::tiny(s, 1).validate().unwrap();
        }
    }

    #[test]
    fn invalid_combinations() {
        let dlog = SessionConfig::tiny(Scheme::Dlog, 1);
        for bad in [
            dlog.clone().with_adversary(Adversary::WrongSubset),
            dlog.clone().with_adversary(Adversary::TamperShare(4)),
            SessionConfig {
                k: 4,
                ..dlog.clone()
            },
            SessionConfig {
                n: 23,
                ..dlog.clone()
            },
            SessionConfig {
                l: 0,
                ..dlog.clone()
            },
            SessionConfig {
                params: SessionConfig::tiny(Scheme::Eroot, 1).params,
                ..dlog
            },
            SessionConfig::tiny(Scheme::NaKex, 1).with_adversary(Adversary::TamperProof(1)),
            SessionConfig {
                n: 5,
                ..SessionConfig::tiny(Scheme::NaVss, 1)
            },
            SessionConfig {
                n: 31,
                ..SessionConfig::tiny(Scheme::Eroot, 1)
            },
        ] {
            assert!(
                matches!(bad.validate(), Err(SessionError::Config(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn share_modulus() {
        assert_eq!(
            eroot_share_modulus(&BigInt::from(33)),
            Some(BigInt::from(31))
        );
        assert_eq!(eroot_share_modulus(&BigInt::from(2)), None);
    }

    #[test]
    fn config_json_round_trip() {
        for s in Scheme::ALL {
            let cfg = SessionConfig::tiny(s, 9).with_adversary(Adversary::None);
            let json = serde_json::to_string(&cfg).unwrap();
            assert_eq!(serde_json::from_str::<SessionConfig>(&json).unwrap(), cfg);
        }
    }
}
