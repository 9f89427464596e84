//! Verifiable and publicly verifiable secret sharing, over both abelian and
//! non-abelian groups.
//!
//! The crate is a protocol workbench. It implements:
//!
//! * Shamir sharing over `Z_p` with Feldman-style commitments and an El Gamal
//!   share encryption proven correct with a non-interactive (Fiat–Shamir)
//!   double-discrete-log proof ([`dlog`]).
//! * El Gamal over an RSA modulus with an interactive proof that a ciphertext
//!   encrypts an `e`-th root of a public value ([`eroot`]).
//! * A conjugacy-based El Gamal key exchange over non-abelian platform groups
//!   ([`kex`]), and the share distribution built on it ([`na_pvss`]).
//! * A conjugation-based verifiable secret sharing scheme whose shares are a
//!   pairwise-commuting family of group elements ([`na_vss`]), together with
//!   a brute-force conjugacy-search attack against it.
//! * A deterministic multi-party session harness driving all of the above
//!   over an append-only bulletin board ([`session`]).
//!
//! Every sampling operation takes an explicit random generator. Use
//! [`seeded_rng`] to obtain a reproducible one.
//!
//! ```
//! use pvss::{seeded_rng, shamir::{self, SharingPolicy}};
//! use num_bigint::BigInt;
//!
//! let mut rng = seeded_rng(7);
//! let policy = SharingPolicy::with_default_coords(3, 2, BigInt::from(23)).unwrap();
//! let shares = shamir::split(&BigInt::from(5), &policy, &mut rng).unwrap();
//! let secret = shamir::reconstruct(&shares.points()[1..], &policy.p).unwrap();
//! assert_eq!(secret, BigInt::from(5));
//! ```
//!
//! A longer narrative lives in the guide under `book/`; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod arith;
pub mod dlog;
pub mod eroot;
pub mod group;
pub mod kex;
pub mod na_pvss;
pub mod na_vss;
pub mod serde_dec;
pub mod session;
pub mod shamir;

pub use num_bigint::BigInt;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// The generator type used throughout the crate for reproducible runs.
pub type SeededRng = ChaCha20Rng;

/// Builds the crate's reproducible generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/shamir.md")]
    mod shamir {}
    #[doc = include_str!("../../../book/src/dlog_pvss.md")]
    mod dlog_pvss {}
    #[doc = include_str!("../../../book/src/eroot_pvss.md")]
    mod eroot_pvss {}
    #[doc = include_str!("../../../book/src/platform_groups.md")]
    mod platform_groups {}
    #[doc = include_str!("../../../book/src/conjugacy_kex.md")]
    mod conjugacy_kex {}
    #[doc = include_str!("../../../book/src/na_pvss.md")]
    mod na_pvss {}
    #[doc = include_str!("../../../book/src/na_vss.md")]
    mod na_vss {}
    #[doc = include_str!("../../../book/src/sessions.md")]
    mod sessions {}
}
