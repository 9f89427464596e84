use std::fmt::Display;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::board::{board_post, board_read, BoardError, BulletinBoard, Role, Selector};
use super::config::{eroot_share_modulus, Adversary, Scheme, SchemeParams, SessionConfig};
use super::{
    CheckKind, CheckRecord, ErrorRecord, Recovery, SessionError, SessionOutput, SessionReport,
};
use crate::arith::{pow_mod, random_below, random_nonzero_below, RsaParams, SchnorrLikeParams};
use crate::dlog::{self, DlogBoard, ParticipantKey, VssMode};
use crate::eroot::{self, ERootInstance, ERootRound, ERootStatement};
use crate::group::{
    sample_commuting_family, CommutingFamily, FamilyStrategy, GroupDescriptor, GroupElement,
};
use crate::kex::{
    kex_decrypt, kex_encrypt, kex_keygen, CommutingSets, KexCiphertext, KexKeyPair, KexPublicKey,
};
use crate::na_pvss::{
    na_distribute, na_prove_commit, na_respond, na_retrieve, na_verify_literal,
    NaPvssChallengeResponse, NaPvssEntry,
};
use crate::na_vss::{
    na_vss_deal, na_vss_deal_threshold, na_vss_mutual_verify, na_vss_reconstruct,
    na_vss_reconstruct_threshold, na_vss_self_verify, MutualVariant, NaVssBoard, NaVssError,
    NaVssThresholdBoard, SubsetPolicy, DEFAULT_SUBSET_CAP,
};
use crate::serde_dec;
use crate::shamir::{self, SharingPolicy};
use crate::{seeded_rng, SeededRng};

const RESAMPLE_LIMIT: usize = 1000;

/// Why a script stopped early.
enum Abort {
    Session(SessionError),
    Scheme(ErrorRecord),
}

impl From<SessionError> for Abort {
    fn from(e: SessionError) -> Self {
        Abort::Session(e)
    }
}

impl From<BoardError> for Abort {
    fn from(e: BoardError) -> Self {
        Abort::Session(e.into())
    }
}

type Step<T> = Result<T, Abort>;

fn fail<E: Display>(role: Role, context: &str) -> impl FnOnce(E) -> Abort + '_ {
    move |e| {
        Abort::Scheme(ErrorRecord {
            role,
            context: context.to_string(),
            message: e.to_string(),
        })
    }
}

fn dec(x: &BigInt) -> serde_json::Value {
    serde_json::Value::String(x.to_string())
}

fn to_value<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("payloads serialize")
}

struct Ctx {
    board: BulletinBoard,
    report: SessionReport,
    rng: SeededRng,
}

impl Ctx {
    fn post<T: Serialize>(&mut self, author: Role, label: &str, payload: &T) -> Step<()> {
        board_post(&mut self.board, author, label, to_value(payload))?;
        Ok(())
    }

    fn read<T: DeserializeOwned>(&self, label: &str) -> Step<Vec<T>> {
        board_read(&self.board, &Selector::label(label))
            .into_iter()
            .map(|p| {
                serde_json::from_value(p.payload.clone()).map_err(|e| {
                    Abort::from(BoardError::Payload {
                        label: label.to_string(),
                        reason: e.to_string(),
                    })
                })
            })
            .collect()
    }

    fn read_last<T: DeserializeOwned>(&self, label: &str) -> Step<T> {
        self.read(label)?.pop().ok_or_else(|| {
            Abort::from(BoardError::Payload {
                label: label.to_string(),
                reason: "no post".into(),
            })
        })
    }

    /// The post under `label` whose `index` field is `i`.
    fn read_indexed<T: DeserializeOwned + Indexed>(&self, label: &str, i: usize) -> Step<T> {
        self.read::<T>(label)?
            .into_iter()
            .rfind(|p| p.index() == i)
            .ok_or_else(|| {
                Abort::from(BoardError::Payload {
                    label: label.to_string(),
                    reason: format!("nothing for participant {i}"),
                })
            })
    }

    fn check(
        &mut self,
        role: Role,
        check: &str,
        subject: Vec<usize>,
        kind: CheckKind,
        verdict: bool,
    ) {
        self.report.checks.push(CheckRecord {
            role,
            check: check.to_string(),
            subject,
            kind,
            verdict,
        });
    }

    fn error<E: Display>(&mut self, role: Role, context: &str, e: E) {
        self.report.errors.push(ErrorRecord {
            role,
            context: context.to_string(),
            message: e.to_string(),
        });
    }

    fn recovery(
        &mut self,
        coalition: Vec<usize>,
        value: serde_json::Value,
        matches_secret: bool,
    ) -> Step<()> {
        let author = Role::Participant(coalition.first().copied().unwrap_or(1));
        self.post(
            author,
            "recovery",
            &serde_json::json!({"coalition": coalition, "value": value}),
        )?;
        self.report.recoveries.push(Recovery {
            coalition,
            value,
            matches_secret,
        });
        Ok(())
    }
}

trait Indexed {
    fn index(&self) -> usize;
}

macro_rules! indexed {
    ($($t:ty),*) => {$(impl Indexed for $t { fn index(&self) -> usize { self.index } })*};
}

#[derive(Serialize, Deserialize)]
struct IntKeyPost {
    index: usize,
    #[serde(with = "serde_dec")]
    y: BigInt,
}

#[derive(Serialize, Deserialize)]
struct IntSharePost {
    index: usize,
    #[serde(with = "serde_dec")]
    x: BigInt,
    #[serde(with = "serde_dec")]
    share: BigInt,
}

#[derive(Serialize, Deserialize)]
struct GroupKeyPost {
    index: usize,
    key: KexPublicKey,
}

#[derive(Serialize, Deserialize)]
struct GroupSharePost {
    index: usize,
    f: GroupElement,
}

#[derive(Serialize, Deserialize)]
struct ERootCiphertextPost {
    index: usize,
    #[serde(rename = "A", with = "serde_dec")]
    a: BigInt,
    #[serde(rename = "B", with = "serde_dec")]
    b: BigInt,
    #[serde(rename = "M", with = "serde_dec")]
    big_m: BigInt,
}

#[derive(Serialize, Deserialize)]
struct ERootMessagePost {
    index: usize,
    round: usize,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::serde_dec::option"
    )]
    t_g: Option<BigInt>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::serde_dec::option"
    )]
    t_y: Option<BigInt>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::serde_dec::option"
    )]
    c: Option<BigInt>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::serde_dec::option"
    )]
    r: Option<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct KexCiphertextPost {
    index: usize,
    ciphertext: KexCiphertext,
}

#[derive(Serialize, Deserialize)]
struct ChallengeBitPost {
    index: usize,
    r: u8,
}

#[derive(Serialize, Deserialize)]
struct ResponsePost {
    index: usize,
    response: NaPvssChallengeResponse,
}

indexed!(
    IntKeyPost,
    IntSharePost,
    GroupKeyPost,
    GroupSharePost,
    ERootCiphertextPost,
    KexCiphertextPost,
    ChallengeBitPost,
    ResponsePost
);

/// Runs the session described by `config`.
///
/// Configuration and board errors are returned; scheme errors are recorded
/// in the report, which then carries `completed = false` when the script
/// could not continue.
pub fn run_session(config: &SessionConfig) -> Result<SessionOutput, SessionError> {
    config.validate()?;
    let mut cx = Ctx {
        board: BulletinBoard::new(config.scheme),
        report: SessionReport {
            config: config.clone(),
            secret: serde_json::Value::Null,
            checks: Vec::new(),
            recoveries: Vec::new(),
            errors: Vec::new(),
            completed: false,
        },
        rng: seeded_rng(config.seed),
    };
    let result = match (&config.scheme, &config.params) {
        (Scheme::Dlog, SchemeParams::Dlog(p)) => run_dlog(&mut cx, config, p),
        (Scheme::Eroot, SchemeParams::Eroot(p)) => run_eroot(&mut cx, config, p),
        (Scheme::NaKex, SchemeParams::Group { descriptor, .. }) => {
            run_na_kex(&mut cx, config, *descriptor)
        }
        (
            Scheme::NaPvss,
            SchemeParams::Group {
                descriptor,
                strategy,
            },
        ) => run_na_pvss(&mut cx, config, *descriptor, *strategy),
        (
            Scheme::NaVss,
            SchemeParams::Group {
                descriptor,
                strategy,
            },
        ) => run_na_vss(&mut cx, config, *descriptor, *strategy),
        (
            Scheme::NaVssThreshold,
            SchemeParams::Group {
                descriptor,
                strategy,
            },
        ) => run_na_vss_threshold(&mut cx, config, *descriptor, *strategy),
        _ => unreachable!("validated"),
    };
    match result {
        Ok(()) => cx.report.completed = true,
        Err(Abort::Scheme(record)) => cx.report.errors.push(record),
        Err(Abort::Session(e)) => return Err(e),
    }
    Ok(SessionOutput {
        board: cx.board,
        report: cx.report,
    })
}

/// Lagrange recovery for every `k`-coalition from the revealed shares.
fn shamir_recoveries(cx: &mut Ctx, n: usize, k: usize, p: &BigInt, secret: &BigInt) -> Step<()> {
    let reveals: Vec<IntSharePost> = cx.read("share-reveal")?;
    for coalition in (1..=n).combinations(k) {
        let points: Option<Vec<(BigInt, BigInt)>> = coalition
            .iter()
            .map(|&j| {
                reveals
                    .iter()
                    .find(|r| r.index == j)
                    .map(|r| (r.x.clone(), r.share.clone()))
            })
            .collect();
        let Some(points) = points else {
            cx.error(
                Role::Participant(coalition[0]),
                "reconstruct",
                format!("coalition {coalition:?} lacks a share"),
            );
            continue;
        };
        match shamir::reconstruct(&points, p) {
            Ok(v) => {
                let matches = &v == secret;
                cx.recovery(coalition, dec(&v), matches)?;
            }
            Err(e) => cx.error(Role::Participant(coalition[0]), "reconstruct", e),
        }
    }
    Ok(())
}

fn run_dlog(cx: &mut Ctx, cfg: &SessionConfig, params: &SchnorrLikeParams) -> Step<()> {
    let (n, k, l) = (cfg.n, cfg.k, cfg.l as usize);
    cx.post(
        Role::Dealer,
        "params",
        &serde_json::json!({"params": params, "n": n, "k": k, "l": l}),
    )?;

    let keys: Vec<ParticipantKey> = (0..n)
        .map(|_| dlog::participant_keygen(params, &mut cx.rng))
        .collect();
    for (i, key) in keys.iter().enumerate() {
        cx.post(
            Role::Participant(i + 1),
            "public-key",
            &IntKeyPost {
                index: i + 1,
                y: key.y.clone(),
            },
        )?;
    }

    let ys: Vec<BigInt> = (1..=n)
        .map(|i| cx.read_indexed::<IntKeyPost>("public-key", i).map(|p| p.y))
        .collect::<Step<_>>()?;
    // Shares are inverted when encrypted; with k = 1 the share is the secret.
    let secret = random_nonzero_below(&mut cx.rng, &params.p);
    cx.report.secret = dec(&secret);
    let policy = SharingPolicy::with_default_coords(n, k, params.p.clone())
        .map_err(fail(Role::Dealer, "policy"))?;
    let mut out = dlog::deal(&secret, &policy, &ys, params, l, &mut cx.rng)
        .map_err(fail(Role::Dealer, "deal"))?;
    if let Some(i) = cfg.adversary.target() {
        tamper_dlog(cx, cfg.adversary, &mut out, i - 1, &ys, params, l)?;
    }
    cx.post(Role::Dealer, "deal", &out.board)?;

    let board: DlogBoard = cx.read_last("deal")?;
    let mut public = Vec::with_capacity(n);
    for i in 0..n {
        let (vss, proof) = match dlog::verify_entry(&board, i) {
            Ok(v) => v,
            Err(e) => {
                cx.error(Role::Verifier, "verify", e);
                (false, false)
            }
        };
        cx.check(
            Role::Verifier,
            "vss-public",
            vec![i + 1],
            CheckKind::Protocol,
            vss,
        );
        cx.check(
            Role::Verifier,
            "proof",
            vec![i + 1],
            CheckKind::Protocol,
            proof,
        );
        public.push(serde_json::json!({"index": i + 1, "vss": vss, "proof": proof}));
    }
    cx.post(Role::Verifier, "verdict", &public)?;

    for (i, key) in keys.iter().enumerate() {
        let role = Role::Participant(i + 1);
        let entry = &board.entries[i];
        let proof = match dlog::verify(&entry.statement, &entry.proof, params) {
            Ok(v) => v,
            Err(e) => {
                cx.error(role, "verify", e);
                false
            }
        };
        let share = dlog::decrypt_share(&entry.statement.a, &entry.statement.b, key, params);
        let own = match &share {
            Ok(s) => dlog::vss_check(&board, i, &VssMode::Participant(s.clone()))
                .map(|c| c.valid)
                .unwrap_or(false),
            Err(e) => {
                cx.error(role, "decrypt", e);
                false
            }
        };
        cx.check(role, "vss-own", vec![i + 1], CheckKind::Protocol, own);
        cx.check(role, "proof", vec![i + 1], CheckKind::Protocol, proof);
        cx.post(
            role,
            "verdict",
            &serde_json::json!({"index": i + 1, "vss": own, "proof": proof}),
        )?;
        if let Ok(s) = share {
            cx.post(
                role,
                "share-reveal",
                &IntSharePost {
                    index: i + 1,
                    x: entry.x.clone(),
                    share: s,
                },
            )?;
        }
    }
    shamir_recoveries(cx, n, k, &params.p, &secret)
}

fn tamper_dlog(
    cx: &mut Ctx,
    adversary: Adversary,
    out: &mut dlog::DealOutput,
    i: usize,
    ys: &[BigInt],
    params: &SchnorrLikeParams,
    l: usize,
) -> Step<()> {
    let share = out.shares.shares[i].clone();
    let alpha = out.alphas[i].clone();
    let mut other = (&share + 1u32).mod_floor(&params.p);
    if other.is_zero() {
        other += 1u32;
    }
    let entry = &mut out.board.entries[i];
    match adversary {
        // A consistent entry for a share off the polynomial.
        Adversary::TamperShare(_) => {
            *entry = dlog::share_entry(params, &entry.x, &other, &ys[i], &alpha, l, &mut cx.rng)
                .map_err(fail(Role::Dealer, "tamper-share"))?;
        }
        // B encrypts another value; V and the proof stay.
        Adversary::TamperCiphertext(_) => {
            let (_, b) = dlog::encrypt_share(params, &other, &ys[i], &alpha)
                .map_err(fail(Role::Dealer, "tamper-ciphertext"))?;
            entry.statement.b = b;
        }
        Adversary::TamperProof(_) => {
            entry.proof.r[0] = (&entry.proof.r[0] + 1u32).mod_floor(&params.q);
        }
        Adversary::None | Adversary::WrongSubset => {}
    }
    Ok(())
}

fn random_unit(rng: &mut SeededRng, n: &BigInt) -> BigInt {
    loop {
        let u = random_nonzero_below(rng, n);
        if u.gcd(n).is_one() {
            return u;
        }
    }
}

fn run_eroot(cx: &mut Ctx, cfg: &SessionConfig, params: &RsaParams) -> Step<()> {
    let (n_parts, k, l, rounds) = (cfg.n, cfg.k, cfg.l, cfg.rounds);
    let params = params.clone().with_soundness(l);
    let modulus = params.n.clone();
    let share_p = eroot_share_modulus(&modulus).expect("validated");
    let w_bound = params.default_w_bound();
    cx.post(
        Role::Dealer,
        "params",
        &serde_json::json!({
            "params": params, "n": n_parts, "k": k, "rounds": rounds,
            "share_modulus": dec(&share_p), "w_bound": dec(&w_bound),
        }),
    )?;

    let zs: Vec<BigInt> = (0..n_parts)
        .map(|_| random_nonzero_below(&mut cx.rng, &modulus))
        .collect();
    for (i, z) in zs.iter().enumerate() {
        let y = pow_mod(&params.g, z, &modulus);
        cx.post(
            Role::Participant(i + 1),
            "public-key",
            &IntKeyPost { index: i + 1, y },
        )?;
    }

    // Shares must be units modulo n to be encrypted.
    let policy = SharingPolicy::with_default_coords(n_parts, k, share_p.clone())
        .map_err(fail(Role::Dealer, "policy"))?;
    let mut dealt = None;
    for _ in 0..RESAMPLE_LIMIT {
        let secret = random_below(&mut cx.rng, &share_p);
        let set =
            shamir::split(&secret, &policy, &mut cx.rng).map_err(fail(Role::Dealer, "split"))?;
        if set.shares.iter().all(|s| s.gcd(&modulus).is_one()) {
            dealt = Some(set);
            break;
        }
    }
    let set =
        dealt.ok_or_else(|| fail(Role::Dealer, "split")("no sharing with unit shares found"))?;
    cx.report.secret = dec(&set.secret);

    let mut instances = Vec::with_capacity(n_parts);
    for i in 1..=n_parts {
        let y = cx.read_indexed::<IntKeyPost>("public-key", i)?.y;
        let alpha = random_nonzero_below(&mut cx.rng, &modulus);
        let mut inst = ERootInstance::for_public_key(&params, &y, set.shares[i - 1].clone(), alpha)
            .map_err(fail(Role::Dealer, "encrypt"))?;
        match cfg.adversary {
            Adversary::TamperShare(t) if t == i => {
                let mut fake = (&inst.m + 1u32).mod_floor(&modulus);
                while !fake.gcd(&modulus).is_one() || fake == inst.m {
                    fake = (fake + 1u32).mod_floor(&modulus);
                }
                inst.big_m = pow_mod(&fake, &params.e, &modulus);
            }
            Adversary::TamperCiphertext(t) if t == i => {
                let mut u = random_unit(&mut cx.rng, &modulus);
                while u.is_one() {
                    u = random_unit(&mut cx.rng, &modulus);
                }
                inst.b = inst.b * u % &modulus;
            }
            _ => {}
        }
        cx.post(
            Role::Dealer,
            "ciphertext",
            &ERootCiphertextPost {
                index: i,
                a: inst.a.clone(),
                b: inst.b.clone(),
                big_m: inst.big_m.clone(),
            },
        )?;
        instances.push(inst);
    }

    let blank = |index, round| ERootMessagePost {
        index,
        round,
        t_g: None,
        t_y: None,
        c: None,
        r: None,
    };
    for (idx, inst) in instances.iter().enumerate() {
        let i = idx + 1;
        let posted = cx.read_indexed::<ERootCiphertextPost>("ciphertext", i)?;
        let statement = ERootStatement {
            n: modulus.clone(),
            e: params.e.clone(),
            g: params.g.clone(),
            y: cx.read_indexed::<IntKeyPost>("public-key", i)?.y,
            a: posted.a,
            b: posted.b,
            big_m: posted.big_m,
        };
        let mut accept = true;
        for round in 0..rounds {
            let com = eroot::prover_commit(&inst.statement(), &w_bound, &mut cx.rng);
            cx.post(
                Role::Dealer,
                "commitment",
                &ERootMessagePost {
                    t_g: Some(com.t_g.clone()),
                    t_y: Some(com.t_y.clone()),
                    ..blank(i, round)
                },
            )?;
            let c = eroot::verifier_challenge(l, &mut cx.rng)
                .map_err(fail(Role::Verifier, "challenge"))?;
            cx.post(
                Role::Verifier,
                "challenge",
                &ERootMessagePost {
                    c: Some(c.clone()),
                    ..blank(i, round)
                },
            )?;
            let mut r = eroot::prover_respond(&com.w, &c, &inst.alpha);
            if cfg.adversary == Adversary::TamperProof(i) {
                r += 1u32;
            }
            cx.post(
                Role::Dealer,
                "response",
                &ERootMessagePost {
                    r: Some(r.clone()),
                    ..blank(i, round)
                },
            )?;
            let record = ERootRound {
                t_g: com.t_g,
                t_y: com.t_y,
                c,
                r,
            };
            match eroot::verify_transcript(&statement, l, &record) {
                Ok(ok) => accept &= ok,
                Err(e) => {
                    cx.error(Role::Verifier, "verify", e);
                    accept = false;
                }
            }
        }
        cx.check(
            Role::Verifier,
            "proof",
            vec![i],
            CheckKind::Protocol,
            accept,
        );
        cx.post(
            Role::Verifier,
            "verdict",
            &serde_json::json!({"index": i, "proof": accept}),
        )?;
    }

    for (idx, z) in zs.iter().enumerate() {
        let i = idx + 1;
        let role = Role::Participant(i);
        let posted = cx.read_indexed::<ERootCiphertextPost>("ciphertext", i)?;
        match eroot::retrieve_share(&posted.a, &posted.b, z, &modulus) {
            Ok(m) => {
                let root = pow_mod(&m, &params.e, &modulus) == posted.big_m;
                cx.check(role, "root", vec![i], CheckKind::Protocol, root);
                cx.post(
                    role,
                    "verdict",
                    &serde_json::json!({"index": i, "root": root}),
                )?;
                cx.post(
                    role,
                    "share-reveal",
                    &IntSharePost {
                        index: i,
                        x: set.x_coords[idx].clone(),
                        share: m,
                    },
                )?;
            }
            Err(e) => {
                cx.error(role, "retrieve", e);
                cx.check(role, "root", vec![i], CheckKind::Protocol, false);
            }
        }
    }
    shamir_recoveries(cx, n_parts, k, &share_p, &set.secret)
}

fn run_na_kex(cx: &mut Ctx, cfg: &SessionConfig, descriptor: GroupDescriptor) -> Step<()> {
    let n = cfg.n;
    let sets = CommutingSets::sample(descriptor, &mut cx.rng);
    cx.post(
        Role::Dealer,
        "params",
        &serde_json::json!({"descriptor": descriptor, "sets": sets, "n": n}),
    )?;
    let keys: Vec<KexKeyPair> = (0..n).map(|_| kex_keygen(&sets, &mut cx.rng)).collect();
    for (i, key) in keys.iter().enumerate() {
        cx.post(
            Role::Participant(i + 1),
            "public-key",
            &GroupKeyPost {
                index: i + 1,
                key: key.public(),
            },
        )?;
    }
    let mut messages = Vec::with_capacity(n);
    for i in 1..=n {
        let pk = cx.read_indexed::<GroupKeyPost>("public-key", i)?.key;
        let x = descriptor.random_element(&mut cx.rng);
        let mut ct =
            kex_encrypt(&x, &pk, &sets, &mut cx.rng).map_err(fail(Role::Dealer, "encrypt"))?;
        if cfg.adversary == Adversary::TamperCiphertext(i) {
            let mut e = descriptor.random_element(&mut cx.rng);
            while e == ct.e {
                e = descriptor.random_element(&mut cx.rng);
            }
            ct.e = e;
        }
        cx.post(
            Role::Dealer,
            "ciphertext",
            &KexCiphertextPost {
                index: i,
                ciphertext: ct,
            },
        )?;
        messages.push(x);
    }
    cx.report.secret = to_value(&messages);
    for (idx, key) in keys.iter().enumerate() {
        let i = idx + 1;
        let ct = cx
            .read_indexed::<KexCiphertextPost>("ciphertext", i)?
            .ciphertext;
        match kex_decrypt(&ct, &key.s) {
            Ok(x) => {
                let matches = x == messages[idx];
                cx.recovery(vec![i], to_value(&x), matches)?;
            }
            Err(e) => cx.error(Role::Participant(i), "decrypt", e),
        }
    }
    Ok(())
}

/// A non-degenerate secret and the board it deals.
fn deal_vss(cx: &mut Ctx, family: &CommutingFamily) -> Step<(GroupElement, NaVssBoard)> {
    let d = family.descriptor();
    for _ in 0..RESAMPLE_LIMIT {
        let s = d.random_non_identity(&mut cx.rng);
        match na_vss_deal(&s, family) {
            Ok(board) => return Ok((s, board)),
            Err(NaVssError::DegenerateSecret) => continue,
            Err(e) => return Err(fail(Role::Dealer, "deal")(e)),
        }
    }
    Err(fail(Role::Dealer, "deal")(NaVssError::DegenerateSecret))
}

fn sample_family(
    cx: &mut Ctx,
    d: GroupDescriptor,
    n: usize,
    strategy: FamilyStrategy,
) -> Step<CommutingFamily> {
    sample_commuting_family(&d, n, strategy, &mut cx.rng).map_err(fail(Role::Dealer, "family"))
}

fn different_element(cx: &mut Ctx, d: GroupDescriptor, avoid: &GroupElement) -> GroupElement {
    loop {
        let x = d.random_element(&mut cx.rng);
        if &x != avoid {
            return x;
        }
    }
}

/// `n − 1` coalitions from revealed shares.
fn vss_recoveries(cx: &mut Ctx, board: &NaVssBoard, secret: &GroupElement) -> Step<()> {
    let n = board.n();
    let reveals: Vec<GroupSharePost> = cx.read("share-reveal")?;
    for missing in 1..=n {
        let shares: Vec<(usize, GroupElement)> = reveals
            .iter()
            .filter(|r| r.index != missing)
            .map(|r| (r.index, r.f.clone()))
            .collect();
        let coalition: Vec<usize> = (1..=n).filter(|&j| j != missing).collect();
        match na_vss_reconstruct(board, missing, &shares) {
            Ok(s) => {
                let matches = &s == secret;
                cx.recovery(coalition, to_value(&s), matches)?;
            }
            Err(e) => cx.error(Role::Participant(coalition[0]), "reconstruct", e),
        }
    }
    Ok(())
}

fn run_na_pvss(
    cx: &mut Ctx,
    cfg: &SessionConfig,
    d: GroupDescriptor,
    strategy: FamilyStrategy,
) -> Step<()> {
    let n = cfg.n;
    let sets = CommutingSets::sample(d, &mut cx.rng);
    let n0 = d.random_element(&mut cx.rng);
    cx.post(
        Role::Dealer,
        "params",
        &serde_json::json!({"descriptor": d, "strategy": strategy, "sets": sets, "n0": n0, "n": n}),
    )?;
    let keys: Vec<KexKeyPair> = (0..n).map(|_| kex_keygen(&sets, &mut cx.rng)).collect();
    for (i, key) in keys.iter().enumerate() {
        cx.post(
            Role::Participant(i + 1),
            "public-key",
            &GroupKeyPost {
                index: i + 1,
                key: key.public(),
            },
        )?;
    }

    let family = sample_family(cx, d, n, strategy)?;
    let (secret, vss_board) = deal_vss(cx, &family)?;
    cx.report.secret = to_value(&secret);
    cx.post(Role::Dealer, "vss-board", &vss_board)?;

    let mut entries = Vec::with_capacity(n);
    let mut private = Vec::with_capacity(n);
    for i in 1..=n {
        let pk = cx.read_indexed::<GroupKeyPost>("public-key", i)?.key;
        let t = sets.sample_t(&mut cx.rng);
        let f = &family.elements()[i - 1];
        let x = match cfg.adversary {
            Adversary::TamperShare(j) if j == i => different_element(cx, d, f),
            _ => f.clone(),
        };
        let mut ciphertext =
            na_distribute(&x, &pk, &t).map_err(fail(Role::Dealer, "distribute"))?;
        if cfg.adversary == Adversary::TamperCiphertext(i) {
            ciphertext.b = different_element(cx, d, &ciphertext.b);
        }
        let (proof, secrets) =
            na_prove_commit(&x, &n0, &pk.b, &mut cx.rng).map_err(fail(Role::Dealer, "commit"))?;
        entries.push(NaPvssEntry {
            key: pk,
            ciphertext,
            proof,
        });
        private.push((t, secrets.w));
    }
    cx.post(Role::Dealer, "deal", &entries)?;

    let bits: Vec<u8> = (0..n).map(|_| cx.rng.gen_range(0..2u8)).collect();
    for (idx, &r) in bits.iter().enumerate() {
        cx.post(
            Role::Verifier,
            "challenge",
            &ChallengeBitPost { index: idx + 1, r },
        )?;
    }
    for (idx, (t, w)) in private.iter().enumerate() {
        let r = cx.read_indexed::<ChallengeBitPost>("challenge", idx + 1)?.r;
        let response = na_respond(r, w, t).map_err(fail(Role::Dealer, "respond"))?;
        cx.post(
            Role::Dealer,
            "response",
            &ResponsePost {
                index: idx + 1,
                response,
            },
        )?;
    }

    let board_entries: Vec<NaPvssEntry> = cx.read_last("deal")?;
    for (idx, entry) in board_entries.iter().enumerate() {
        let i = idx + 1;
        let response = cx.read_indexed::<ResponsePost>("response", i)?.response;
        let literal =
            na_verify_literal(&entry.ciphertext.a, &entry.proof.t_h, &response).unwrap_or(false);
        // The printed check accepts iff the conjugators line up; record both.
        let (t, w) = &private[idx];
        let b = &entry.key.b;
        let predicted = if response.r == 1 {
            t.commutes_with(b).unwrap_or(false)
        } else {
            let twtw = t
                .mul(w)
                .and_then(|x| x.mul(t))
                .and_then(|x| x.mul(&w.inverse()));
            twtw.and_then(|x| x.commutes_with(b)).unwrap_or(false)
        };
        cx.check(
            Role::Verifier,
            "proof-literal",
            vec![i],
            CheckKind::Finding,
            literal,
        );
        cx.check(
            Role::Verifier,
            "proof-literal-characterized",
            vec![i],
            CheckKind::Finding,
            literal == predicted,
        );
        cx.post(
            Role::Verifier,
            "verdict",
            &serde_json::json!({"index": i, "proof_literal": literal}),
        )?;
    }

    let vss: NaVssBoard = cx.read_last("vss-board")?;
    for (idx, key) in keys.iter().enumerate() {
        let i = idx + 1;
        let role = Role::Participant(i);
        let entry = &board_entries[idx];
        match na_retrieve(&entry.ciphertext.a, &entry.ciphertext.b, &key.s) {
            Ok(f) => {
                let ok = na_vss_self_verify(&vss, i, &f).unwrap_or(false);
                cx.check(role, "vss-self", vec![i], CheckKind::Protocol, ok);
                cx.post(
                    role,
                    "verdict",
                    &serde_json::json!({"index": i, "vss_self": ok}),
                )?;
                cx.post(role, "share-reveal", &GroupSharePost { index: i, f })?;
            }
            Err(e) => cx.error(role, "retrieve", e),
        }
    }
    vss_recoveries(cx, &vss, &secret)
}

fn run_na_vss(
    cx: &mut Ctx,
    cfg: &SessionConfig,
    d: GroupDescriptor,
    strategy: FamilyStrategy,
) -> Step<()> {
    let n = cfg.n;
    cx.post(
        Role::Dealer,
        "params",
        &serde_json::json!({"descriptor": d, "strategy": strategy, "n": n}),
    )?;
    let family = sample_family(cx, d, n, strategy)?;
    let (secret, mut board) = deal_vss(cx, &family)?;
    cx.report.secret = to_value(&secret);
    let mut delivered: Vec<GroupElement> = family.elements().to_vec();
    match cfg.adversary {
        Adversary::TamperShare(i) => {
            delivered[i - 1] = different_element(cx, d, &family.elements()[i - 1])
        }
        // h₁ published for the index set that omits 2 instead of 1.
        Adversary::WrongSubset => board.h[0] = board.h[1].clone(),
        _ => {}
    }
    cx.post(Role::Dealer, "deal", &board)?;

    let board: NaVssBoard = cx.read_last("deal")?;
    for (idx, f) in delivered.iter().enumerate() {
        let i = idx + 1;
        let ok = na_vss_self_verify(&board, i, f).unwrap_or(false);
        cx.check(
            Role::Participant(i),
            "vss-self",
            vec![i],
            CheckKind::Protocol,
            ok,
        );
        cx.post(
            Role::Participant(i),
            "verdict",
            &serde_json::json!({"index": i, "vss_self": ok}),
        )?;
    }
    // The symmetric mutual check is not an identity of the scheme.
    for (i, j) in (1..=n).tuple_combinations() {
        let ok = na_vss_mutual_verify(
            &board,
            i,
            &delivered[i - 1],
            j,
            &delivered[j - 1],
            MutualVariant::Symmetric,
        )
        .unwrap_or(false);
        cx.check(
            Role::Participant(i),
            "mutual-symmetric",
            vec![i, j],
            CheckKind::Finding,
            ok,
        );
    }
    for (idx, f) in delivered.iter().enumerate() {
        cx.post(
            Role::Participant(idx + 1),
            "share-reveal",
            &GroupSharePost {
                index: idx + 1,
                f: f.clone(),
            },
        )?;
    }
    vss_recoveries(cx, &board, &secret)
}

fn run_na_vss_threshold(
    cx: &mut Ctx,
    cfg: &SessionConfig,
    d: GroupDescriptor,
    strategy: FamilyStrategy,
) -> Step<()> {
    let (n, t) = (cfg.n, cfg.k);
    cx.post(
        Role::Dealer,
        "params",
        &serde_json::json!({"descriptor": d, "strategy": strategy, "n": n, "t": t}),
    )?;
    let family = sample_family(cx, d, n, strategy)?;
    let mut dealt = None;
    for _ in 0..RESAMPLE_LIMIT {
        let s = d.random_non_identity(&mut cx.rng);
        match na_vss_deal_threshold(
            &s,
            &family,
            t,
            &SubsetPolicy::AllSubsets,
            DEFAULT_SUBSET_CAP,
        ) {
            Ok(board) => {
                dealt = Some((s, board));
                break;
            }
            Err(NaVssError::DegenerateSecret) => continue,
            Err(e) => return Err(fail(Role::Dealer, "deal")(e)),
        }
    }
    let (secret, mut board): (GroupElement, NaVssThresholdBoard) =
        dealt.ok_or_else(|| fail(Role::Dealer, "deal")(NaVssError::DegenerateSecret))?;
    cx.report.secret = to_value(&secret);
    let mut delivered: Vec<GroupElement> = family.elements().to_vec();
    match cfg.adversary {
        Adversary::TamperShare(i) => {
            delivered[i - 1] = different_element(cx, d, &family.elements()[i - 1])
        }
        Adversary::WrongSubset => {
            // The first entry keeps its label but uses another index set.
            let entry = &mut board.subsets[0];
            let outsider = (1..=n).find(|j| !entry.subset.contains(j)).expect("t < n");
            let mut wrong = entry.subset.clone();
            *wrong.last_mut().expect("t >= 1") = outsider;
            let p = GroupElement::product(d, wrong.iter().map(|&j| &family.elements()[j - 1]))
                .map_err(fail(Role::Dealer, "wrong-subset"))?;
            entry.h_h = secret
                .conjugate_by(&p)
                .map_err(fail(Role::Dealer, "wrong-subset"))?;
        }
        _ => {}
    }
    cx.post(Role::Dealer, "deal", &board)?;

    let board: NaVssThresholdBoard = cx.read_last("deal")?;
    for (idx, f) in delivered.iter().enumerate() {
        cx.post(
            Role::Participant(idx + 1),
            "share-reveal",
            &GroupSharePost {
                index: idx + 1,
                f: f.clone(),
            },
        )?;
    }
    let reveals: Vec<GroupSharePost> = cx.read("share-reveal")?;
    for coalition in (1..=n).combinations(t) {
        let shares: Vec<(usize, GroupElement)> = reveals
            .iter()
            .filter(|r| coalition.contains(&r.index))
            .map(|r| (r.index, r.f.clone()))
            .collect();
        match na_vss_reconstruct_threshold(&board, &shares) {
            Ok(s) => {
                let matches = s == secret;
                cx.recovery(coalition, to_value(&s), matches)?;
            }
            Err(e) => cx.error(Role::Participant(coalition[0]), "reconstruct", e),
        }
    }
    Ok(())
}
