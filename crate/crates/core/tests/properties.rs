//! Cross-module invariants, driven by seeds so failures shrink to a seed.

use num_bigint::BigInt;
use proptest::prelude::*;
use pvss::group::{sample_commuting_family, FamilyStrategy, GroupDescriptor};
use pvss::kex::{kex_decrypt, kex_encrypt, kex_keygen, CommutingSets};
use pvss::na_vss::{na_vss_deal, na_vss_reconstruct, na_vss_self_verify};
use pvss::seeded_rng;
use pvss::session::{run_session, BulletinBoard, Post, Scheme, SessionConfig};
use pvss::shamir::{self, SharingPolicy};

fn descriptors() -> impl Strategy<Value = GroupDescriptor> {
    prop_oneof![
        (5usize..12).prop_map(|d| GroupDescriptor::permutation(d).unwrap()),
        prop::sample::select(vec![3u64, 5, 7, 11, 13])
            .prop_map(|q| GroupDescriptor::unitriangular(q).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_k_shares_reconstruct(secret in 0u64..1009, n in 1usize..8, k_off in 0usize..8, pick in any::<u64>()) {
        let k = 1 + k_off % n;
        let p = BigInt::from(1009);
        let policy = SharingPolicy::with_default_coords(n, k, p.clone()).unwrap();
        let mut rng = seeded_rng(pick);
        let points = shamir::split(&BigInt::from(secret), &policy, &mut rng).unwrap().points();
        let start = (pick as usize) % (n - k + 1);
        prop_assert_eq!(shamir::reconstruct(&points[start..start + k], &p).unwrap(), BigInt::from(secret));
    }

    #[test]
    fn kex_round_trips(d in descriptors(), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let sets = CommutingSets::sample(d, &mut rng);
        let keys = kex_keygen(&sets, &mut rng);
        let x = d.random_element(&mut rng);
        let ct = kex_encrypt(&x, &keys.public(), &sets, &mut rng).unwrap();
        prop_assert_eq!(kex_decrypt(&ct, &keys.s).unwrap(), x);
    }

    #[test]
    fn na_vss_shares_verify_and_reconstruct(degree in 6usize..12, n in 2usize..4, seed in any::<u64>()) {
        let d = GroupDescriptor::permutation(degree).unwrap();
        let mut rng = seeded_rng(seed);
        let Ok(fam) = sample_commuting_family(&d, n, FamilyStrategy::DisjointSupport, &mut rng) else {
            return Ok(());
        };
        let s = d.random_non_identity(&mut rng);
        let Ok(board) = na_vss_deal(&s, &fam) else {
            return Ok(());
        };
        let shares: Vec<_> = fam.elements().iter().cloned().enumerate().map(|(i, f)| (i + 1, f)).collect();
        for (i, f) in &shares {
            prop_assert!(na_vss_self_verify(&board, *i, f).unwrap());
        }
        for missing in 1..=n {
            let rest: Vec<_> = shares.iter().filter(|(i, _)| *i != missing).cloned().collect();
            prop_assert_eq!(na_vss_reconstruct(&board, missing, &rest).unwrap(), s.clone());
        }
    }
}

#[test]
fn session_boards_survive_json() {
    for scheme in [
        Scheme::Dlog,
        Scheme::Eroot,
        Scheme::NaKex,
        Scheme::NaPvss,
        Scheme::NaVss,
        Scheme::NaVssThreshold,
    ] {
        let out = run_session(&SessionConfig::tiny(scheme, 11)).unwrap();
        assert!(out.report.completed, "{scheme:?}");
        let posts: Vec<Post> = serde_json::from_str(&out.board.to_json()).unwrap();
        let rebuilt = BulletinBoard::from_posts(scheme, posts).unwrap();
        assert_eq!(rebuilt.to_json(), out.board.to_json(), "{scheme:?}");
    }
}
