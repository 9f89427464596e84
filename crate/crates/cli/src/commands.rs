use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use pvss::arith::{mod_exp, random_below, random_nonzero_below};
use pvss::dlog::{self, VssMode};
use pvss::eroot::{self, ERootInstance, ERootRound, ERootTranscript};
use pvss::group::{sample_commuting_family, CommutingFamily, GroupElement};
use pvss::na_vss::{self, NaVssError, SubsetPolicy, DEFAULT_SUBSET_CAP};
use pvss::session::{eroot_share_modulus, run_session, Scheme, SchemeParams, SessionConfig};
use pvss::shamir::{self, SharingPolicy};
use pvss::{seeded_rng, serde_dec, SeededRng};
use serde::Serialize;
use serde_json::json;

use crate::docs::{
    Board, Commitment, DealerEntry, DealerSecrets, Doc, ERootBoard, ProverState, ShareDoc,
};
use crate::{
    AttackAction, Cli, Command, ConjSearchArgs, DealArgs, Failure, Global, ParamsAction, ProveArgs,
    RespondArgs, SessionAction, SessionArgs,
};

const RESAMPLE_LIMIT: usize = 1000;

type Outcome = Result<(), Failure>;

fn data(msg: impl Into<String>) -> Failure {
    Failure::Data(msg.into())
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let docs = load_all(&g.inputs)?;
    match &cli.command {
        Command::Params {
            action: ParamsAction::Gen,
        } => params_gen(g, &docs),
        Command::Deal(a) => deal(g, &docs, a),
        Command::Verify => verify(g, &docs),
        Command::Reconstruct => reconstruct(g, &docs),
        Command::Prove(a) => prove(g, &docs, a),
        Command::Challenge => challenge(g, &docs),
        Command::Respond(a) => respond(g, &docs, a),
        Command::Session {
            action: SessionAction::Run(a),
        } => session_run(g, &docs, a),
        Command::Attack {
            action: AttackAction::ConjSearch(a),
        } => conj_search(g, &docs, a),
    }
}

fn load(path: &Path) -> Result<Doc, Failure> {
    let text = fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Doc>, Failure> {
    paths.iter().map(|p| load(p)).collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Outcome {
    let text = pretty(value);
    match out {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn board(docs: &[Doc]) -> Result<&Board, Failure> {
    let mut boards = docs.iter().filter_map(|d| match d {
        Doc::Board(b) => Some(b),
        _ => None,
    });
    let b = boards
        .next()
        .ok_or_else(|| data("no board document among the inputs"))?;
    if boards.next().is_some() {
        return Err(data("more than one board document"));
    }
    Ok(b)
}

/// Private share documents, checked against the board's scheme and size.
fn shares(docs: &[Doc], scheme: Scheme, n: usize) -> Result<Vec<&ShareDoc>, Failure> {
    let mut out: Vec<&ShareDoc> = Vec::new();
    for d in docs {
        if let Doc::Share(s) = d {
            let kind = match s {
                ShareDoc::Dlog { .. } => Scheme::Dlog,
                ShareDoc::Eroot { .. } => Scheme::Eroot,
                ShareDoc::NaVss { .. } => Scheme::NaVss,
                ShareDoc::NaVssThreshold { .. } => Scheme::NaVssThreshold,
            };
            if kind != scheme {
                return Err(data(format!(
                    "share for {kind} given with a {scheme} board"
                )));
            }
            if !(1..=n).contains(&s.index()) {
                return Err(data(format!("share index {} outside 1..={n}", s.index())));
            }
            if out.iter().any(|o| o.index() == s.index()) {
                return Err(data(format!("two shares for participant {}", s.index())));
            }
            out.push(s);
        }
    }
    out.sort_by_key(|s| s.index());
    Ok(out)
}

/// Starting configuration: a params document wins, then `--bits`, then the
/// fixture.
fn config(g: &Global, docs: &[Doc], require_choice: bool) -> Result<SessionConfig, Failure> {
    let given = docs.iter().find_map(|d| match d {
        Doc::Params { scheme, params } => Some((*scheme, params.clone())),
        _ => None,
    });
    let scheme = given.as_ref().map_or(g.scheme, |(s, _)| *s);
    let mut cfg = match g.bits {
        Some(bits) if given.is_none() => SessionConfig::generated(scheme, bits, g.seed)?,
        _ if require_choice && !g.tiny && given.is_none() => {
            return Err(data(
                "no parameters: pass --tiny, --bits or a params document",
            ));
        }
        _ => SessionConfig::tiny(scheme, g.seed),
    };
    if let Some((_, params)) = given {
        if let SchemeParams::Eroot(p) = &params {
            cfg.l = p.l;
        }
        cfg.params = params;
    }
    Ok(cfg)
}

fn params_gen(g: &Global, docs: &[Doc]) -> Outcome {
    let cfg = config(g, docs, true)?;
    emit(
        g.out.as_deref(),
        &Doc::Params {
            scheme: cfg.scheme,
            params: cfg.params,
        },
    )
}

fn deal(g: &Global, docs: &[Doc], a: &DealArgs) -> Outcome {
    let mut cfg = config(g, docs, true)?;
    if let Some(n) = a.n {
        cfg.n = n;
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if cfg.scheme == Scheme::NaVss {
        cfg.k = cfg.n.saturating_sub(1).max(1);
    }
    cfg.validate()?;
    if a.secret.is_some() && cfg.scheme.is_group_scheme() {
        return Err(data("--secret applies to dlog and eroot only"));
    }
    let secret = a.secret.as_deref().map(serde_dec::parse).transpose()?;
    let mut rng = seeded_rng(cfg.seed);
    fs::create_dir_all(&a.private_dir)
        .map_err(|e| data(format!("{}: {e}", a.private_dir.display())))?;
    let private = |i: usize| a.private_dir.join(format!("participant-{i}.json"));

    let board = match (&cfg.scheme, &cfg.params) {
        (Scheme::Dlog, SchemeParams::Dlog(params)) => {
            let keys: Vec<_> = (0..cfg.n)
                .map(|_| dlog::participant_keygen(params, &mut rng))
                .collect();
            let ys: Vec<BigInt> = keys.iter().map(|k| k.y.clone()).collect();
            let s = match secret {
                Some(s) if s >= BigInt::ZERO && s < params.p => s,
                Some(_) => return Err(data("secret outside [0, p)")),
                None => random_below(&mut rng, &params.p),
            };
            let policy = SharingPolicy::with_default_coords(cfg.n, cfg.k, params.p.clone())?;
            let out = dlog::deal(&s, &policy, &ys, params, cfg.l as usize, &mut rng)?;
            for (i, key) in keys.iter().enumerate() {
                write(
                    &private(i + 1),
                    &pretty(&Doc::Share(ShareDoc::Dlog {
                        index: i + 1,
                        z: key.z.clone(),
                    })),
                )?;
            }
            Board::Dlog { board: out.board }
        }
        (Scheme::Eroot, SchemeParams::Eroot(params)) => {
            deal_eroot(&cfg, params, secret, &mut rng, &a.private_dir)?
        }
        (
            Scheme::NaVss,
            SchemeParams::Group {
                descriptor,
                strategy,
            },
        ) => {
            let family = sample_commuting_family(descriptor, cfg.n, *strategy, &mut rng)?;
            let (_, board) = nondegenerate(&family, &mut rng, |s| na_vss::na_vss_deal(s, &family))?;
            for (i, f) in family.elements().iter().enumerate() {
                write(
                    &private(i + 1),
                    &pretty(&Doc::Share(ShareDoc::NaVss {
                        index: i + 1,
                        f: f.clone(),
                    })),
                )?;
            }
            Board::NaVss { board }
        }
        (
            Scheme::NaVssThreshold,
            SchemeParams::Group {
                descriptor,
                strategy,
            },
        ) => {
            let family = sample_commuting_family(descriptor, cfg.n, *strategy, &mut rng)?;
            let (_, board) = nondegenerate(&family, &mut rng, |s| {
                na_vss::na_vss_deal_threshold(
                    s,
                    &family,
                    cfg.k,
                    &SubsetPolicy::AllSubsets,
                    DEFAULT_SUBSET_CAP,
                )
            })?;
            for (i, f) in family.elements().iter().enumerate() {
                let doc = Doc::Share(ShareDoc::NaVssThreshold {
                    index: i + 1,
                    f: f.clone(),
                });
                write(&private(i + 1), &pretty(&doc))?;
            }
            Board::NaVssThreshold { board }
        }
        (scheme, _) => {
            return Err(data(format!(
                "deal is not defined for {scheme}; use `session run`"
            )))
        }
    };
    emit(g.out.as_deref(), &Doc::Board(board))
}

fn nondegenerate<B>(
    family: &CommutingFamily,
    rng: &mut SeededRng,
    mut deal: impl FnMut(&GroupElement) -> Result<B, NaVssError>,
) -> Result<(GroupElement, B), Failure> {
    for _ in 0..RESAMPLE_LIMIT {
        let s = family.descriptor().random_non_identity(rng);
        match deal(&s) {
            Ok(b) => return Ok((s, b)),
            Err(NaVssError::DegenerateSecret) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(NaVssError::DegenerateSecret.into())
}

fn deal_eroot(
    cfg: &SessionConfig,
    params: &pvss::arith::RsaParams,
    secret: Option<BigInt>,
    rng: &mut SeededRng,
    dir: &Path,
) -> Result<Board, Failure> {
    let modulus = &params.n;
    let share_p = eroot_share_modulus(modulus).ok_or_else(|| data("modulus too small"))?;
    if let Some(s) = &secret {
        if *s < BigInt::ZERO || *s >= share_p {
            return Err(data(format!("secret outside [0, {share_p})")));
        }
    }
    let policy = SharingPolicy::with_default_coords(cfg.n, cfg.k, share_p.clone())?;
    let mut set = None;
    for _ in 0..RESAMPLE_LIMIT {
        let s = secret
            .clone()
            .unwrap_or_else(|| random_below(rng, &share_p));
        let candidate = shamir::split(&s, &policy, rng)?;
        if candidate.shares.iter().all(|m| m.gcd(modulus).is_one()) {
            set = Some(candidate);
            break;
        }
    }
    let set = set.ok_or_else(|| data("no sharing with shares invertible modulo n"))?;
    let mut statements = Vec::with_capacity(cfg.n);
    let mut entries = Vec::with_capacity(cfg.n);
    for (idx, m) in set.shares.iter().enumerate() {
        let z = random_nonzero_below(rng, modulus);
        let alpha = random_nonzero_below(rng, modulus);
        let inst = ERootInstance::from_parts(params, m.clone(), z.clone(), alpha.clone())?;
        statements.push(inst.statement());
        entries.push(DealerEntry {
            index: idx + 1,
            m: m.clone(),
            alpha,
        });
        let doc = Doc::Share(ShareDoc::Eroot { index: idx + 1, z });
        write(
            &dir.join(format!("participant-{}.json", idx + 1)),
            &pretty(&doc),
        )?;
    }
    write(
        &dir.join("dealer.json"),
        &pretty(&Doc::DealerSecrets(DealerSecrets { entries })),
    )?;
    Ok(Board::Eroot(ERootBoard {
        params: params.clone(),
        share_modulus: share_p,
        k: cfg.k,
        x_coords: set.x_coords,
        statements,
    }))
}

#[derive(Serialize)]
struct Verdict {
    subject: Vec<usize>,
    check: &'static str,
    verdict: bool,
}

fn finish(out: Option<&Path>, checks: Vec<Verdict>) -> Outcome {
    let accept = checks.iter().all(|c| c.verdict);
    emit(out, &json!({"accept": accept, "checks": checks}))?;
    if accept {
        Ok(())
    } else {
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.verdict)
            .map(|c| format!("{} {:?}", c.check, c.subject))
            .collect();
        Err(Failure::Reject(failed.join(", ")))
    }
}

fn verify(g: &Global, docs: &[Doc]) -> Outcome {
    let transcripts: Vec<&ERootTranscript> = docs
        .iter()
        .filter_map(|d| match d {
            Doc::Transcript(t) => Some(t),
            _ => None,
        })
        .collect();
    if !transcripts.is_empty() {
        let checks = transcripts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Ok(Verdict {
                    subject: vec![i + 1],
                    check: "transcript",
                    verdict: t.verify_all()?,
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        return finish(g.out.as_deref(), checks);
    }
    let b = board(docs)?;
    let mut checks = Vec::new();
    match b {
        Board::Dlog { board } => {
            let n = board.entries.len();
            for i in 0..n {
                let (vss, proof) = dlog::verify_entry(board, i)?;
                checks.push(Verdict {
                    subject: vec![i + 1],
                    check: "vss-public",
                    verdict: vss,
                });
                checks.push(Verdict {
                    subject: vec![i + 1],
                    check: "proof",
                    verdict: proof,
                });
            }
            for s in shares(docs, Scheme::Dlog, n)? {
                let i = s.index();
                let entry = &board.entries[i - 1];
                let key = dlog::ParticipantKey::from_secret(
                    &board.params,
                    s.key().expect("dlog share").clone(),
                );
                let share = dlog::decrypt_share(
                    &entry.statement.a,
                    &entry.statement.b,
                    &key,
                    &board.params,
                )?;
                let own = dlog::vss_check(board, i - 1, &VssMode::Participant(share))?.valid;
                checks.push(Verdict {
                    subject: vec![i],
                    check: "vss-own",
                    verdict: own,
                });
            }
        }
        Board::Eroot(eb) => {
            let found = shares(docs, Scheme::Eroot, eb.statements.len())?;
            if found.is_empty() {
                return Err(data(
                    "an eroot board is verified through transcripts or participants' keys",
                ));
            }
            for s in found {
                let st = &eb.statements[s.index() - 1];
                let m = eroot::retrieve_share(&st.a, &st.b, s.key().expect("eroot share"), &st.n)?;
                let root = mod_exp(&m, &st.e, &st.n)? == st.big_m;
                checks.push(Verdict {
                    subject: vec![s.index()],
                    check: "root",
                    verdict: root,
                });
            }
        }
        Board::NaVss { board } => {
            let found = shares(docs, Scheme::NaVss, board.n())?;
            if found.is_empty() {
                return Err(data("na-vss verification needs participants' share files"));
            }
            for s in found {
                let ok = na_vss::na_vss_self_verify(
                    board,
                    s.index(),
                    s.element().expect("group share"),
                )?;
                checks.push(Verdict {
                    subject: vec![s.index()],
                    check: "vss-self",
                    verdict: ok,
                });
            }
        }
        Board::NaVssThreshold { board } => {
            let n = board
                .subsets
                .iter()
                .flat_map(|e| e.subset.iter().copied())
                .max()
                .unwrap_or(0);
            let given: Vec<(usize, GroupElement)> = shares(docs, Scheme::NaVssThreshold, n)?
                .into_iter()
                .map(|s| (s.index(), s.element().expect("group share").clone()))
                .collect();
            // Every published subset covered by the given shares must open
            // to the same secret.
            let mut opened: Vec<(Vec<usize>, GroupElement)> = Vec::new();
            for entry in &board.subsets {
                if entry
                    .subset
                    .iter()
                    .all(|j| given.iter().any(|(i, _)| i == j))
                {
                    let subset: Vec<(usize, GroupElement)> = given
                        .iter()
                        .filter(|(i, _)| entry.subset.contains(i))
                        .cloned()
                        .collect();
                    opened.push((
                        entry.subset.clone(),
                        na_vss::na_vss_reconstruct_threshold(board, &subset)?,
                    ));
                }
            }
            let Some((_, first)) = opened.first().cloned() else {
                return Err(data("the given shares cover no published subset"));
            };
            for (subset, s) in opened {
                checks.push(Verdict {
                    subject: subset,
                    check: "subset-consistent",
                    verdict: s == first,
                });
            }
        }
    }
    finish(g.out.as_deref(), checks)
}

fn reconstruct(g: &Global, docs: &[Doc]) -> Outcome {
    let b = board(docs)?;
    let value = match b {
        Board::Dlog { board } => {
            let found = shares(docs, Scheme::Dlog, board.entries.len())?;
            let mut points = Vec::new();
            for s in found {
                let entry = &board.entries[s.index() - 1];
                let key = dlog::ParticipantKey::from_secret(
                    &board.params,
                    s.key().expect("dlog share").clone(),
                );
                points.push((
                    entry.x.clone(),
                    dlog::decrypt_share(
                        &entry.statement.a,
                        &entry.statement.b,
                        &key,
                        &board.params,
                    )?,
                ));
            }
            if points.len() < board.k {
                return Err(data(format!(
                    "need {} shares, have {}",
                    board.k,
                    points.len()
                )));
            }
            json!(shamir::reconstruct(&points, &board.params.p)?.to_string())
        }
        Board::Eroot(eb) => {
            let found = shares(docs, Scheme::Eroot, eb.statements.len())?;
            let mut points = Vec::new();
            for s in found {
                let st = &eb.statements[s.index() - 1];
                let m = eroot::retrieve_share(&st.a, &st.b, s.key().expect("eroot share"), &st.n)?;
                points.push((eb.x_coords[s.index() - 1].clone(), m));
            }
            if points.len() < eb.k {
                return Err(data(format!("need {} shares, have {}", eb.k, points.len())));
            }
            json!(shamir::reconstruct(&points, &eb.share_modulus)?.to_string())
        }
        Board::NaVss { board } => {
            let n = board.n();
            let given: Vec<(usize, GroupElement)> = shares(docs, Scheme::NaVss, n)?
                .into_iter()
                .map(|s| (s.index(), s.element().expect("group share").clone()))
                .collect();
            let missing = (1..=n)
                .find(|i| given.iter().all(|(j, _)| j != i))
                .unwrap_or(n);
            let coalition: Vec<(usize, GroupElement)> =
                given.into_iter().filter(|(i, _)| *i != missing).collect();
            serde_json::to_value(na_vss::na_vss_reconstruct(board, missing, &coalition)?)?
        }
        Board::NaVssThreshold { board } => {
            let n = board
                .subsets
                .iter()
                .flat_map(|e| e.subset.iter().copied())
                .max()
                .unwrap_or(0);
            let given: Vec<(usize, GroupElement)> = shares(docs, Scheme::NaVssThreshold, n)?
                .into_iter()
                .map(|s| (s.index(), s.element().expect("group share").clone()))
                .collect();
            serde_json::to_value(na_vss::na_vss_reconstruct_threshold(board, &given)?)?
        }
    };
    emit(
        g.out.as_deref(),
        &json!({"scheme": b.scheme(), "secret": value}),
    )
}

fn prove(g: &Global, docs: &[Doc], a: &ProveArgs) -> Outcome {
    let Board::Eroot(eb) = board(docs)? else {
        return Err(data(
            "prove drives the interactive eroot proof; give an eroot board",
        ));
    };
    let i = a.participant;
    let statement = eb.statements.get(i.wrapping_sub(1)).ok_or_else(|| {
        data(format!(
            "participant {i} outside 1..={}",
            eb.statements.len()
        ))
    })?;
    let secrets = docs
        .iter()
        .find_map(|d| match d {
            Doc::DealerSecrets(s) => Some(s),
            _ => None,
        })
        .ok_or_else(|| data("prove needs the dealer's secrets document"))?;
    let entry = secrets
        .entries
        .iter()
        .find(|e| e.index == i)
        .ok_or_else(|| data(format!("no dealer secret for participant {i}")))?;
    let inst = ERootInstance::for_public_key(
        &eb.params,
        &statement.y,
        entry.m.clone(),
        entry.alpha.clone(),
    )?;
    if &inst.statement() != statement {
        return Err(data("dealer secrets do not match the board"));
    }
    let prior = docs.iter().find_map(|d| match d {
        Doc::Transcript(t) => Some(t.clone()),
        _ => None,
    });
    let transcript = match prior {
        Some(t) if &t.statement == statement => t,
        Some(_) => return Err(data("transcript belongs to another statement")),
        None => {
            let l = a.l.unwrap_or(eb.params.l);
            ERootTranscript {
                statement: statement.clone(),
                l,
                w_bound: eb.params.clone().with_soundness(l).default_w_bound(),
                rounds: Vec::new(),
            }
        }
    };
    let mut rng = seeded_rng(g.seed);
    let com = eroot::prover_commit(statement, &transcript.w_bound, &mut rng);
    let state = Doc::ProverState(ProverState {
        index: i,
        w: com.w,
        alpha: entry.alpha.clone(),
    });
    write(&a.state, &pretty(&state))?;
    emit(
        g.out.as_deref(),
        &Doc::Commitment(Commitment {
            index: i,
            transcript,
            t_g: com.t_g,
            t_y: com.t_y,
            c: None,
        }),
    )
}

fn challenge(g: &Global, docs: &[Doc]) -> Outcome {
    let com = docs
        .iter()
        .find_map(|d| match d {
            Doc::Commitment(c) => Some(c),
            _ => None,
        })
        .ok_or_else(|| data("challenge needs a commitment document"))?;
    let mut rng = seeded_rng(g.seed);
    let c = eroot::verifier_challenge(com.transcript.l, &mut rng)?;
    emit(
        g.out.as_deref(),
        &Doc::Challenge(Commitment {
            c: Some(c),
            ..com.clone()
        }),
    )
}

fn respond(g: &Global, docs: &[Doc], a: &RespondArgs) -> Outcome {
    let ch = docs
        .iter()
        .find_map(|d| match d {
            Doc::Challenge(c) => Some(c),
            _ => None,
        })
        .ok_or_else(|| data("respond needs a challenge document"))?;
    let Doc::ProverState(state) = load(&a.state)? else {
        return Err(data(format!("{} is not a prover state", a.state.display())));
    };
    if state.index != ch.index {
        return Err(data("prover state belongs to another participant"));
    }
    let c =
        ch.c.clone()
            .ok_or_else(|| data("challenge document carries no challenge"))?;
    let r = eroot::prover_respond(&state.w, &c, &state.alpha);
    let mut transcript = ch.transcript.clone();
    transcript.rounds.push(ERootRound {
        t_g: ch.t_g.clone(),
        t_y: ch.t_y.clone(),
        c,
        r,
    });
    emit(g.out.as_deref(), &Doc::Transcript(transcript))
}

fn session_run(g: &Global, docs: &[Doc], a: &SessionArgs) -> Outcome {
    let mut cfg = config(g, docs, false)?;
    if let Some(n) = a.n {
        cfg.n = n;
        if cfg.scheme == Scheme::NaVss {
            cfg.k = n.saturating_sub(1).max(1);
        }
    }
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if let Some(l) = a.l {
        cfg.l = l;
    }
    if let Some(rounds) = a.rounds {
        cfg.rounds = rounds;
    }
    cfg.adversary = a.adversary;
    let out = run_session(&cfg)?;
    let report = out.report.to_json();
    if let Some(path) = &g.out {
        write(path, &format!("{}\n", out.board.to_json()))?;
    }
    if let Some(path) = &a.report {
        write(path, &format!("{report}\n"))?;
    }
    println!("{report}");
    if !out.report.completed {
        let first = out
            .report
            .errors
            .first()
            .map(|e| e.message.clone())
            .unwrap_or_default();
        return Err(Failure::Reject(format!(
            "session did not complete: {first}"
        )));
    }
    if !out.report.all_protocol_checks_pass() {
        return Err(Failure::Reject(format!(
            "participants flagged: {:?}",
            out.report.flagged()
        )));
    }
    Ok(())
}

fn conj_search(g: &Global, docs: &[Doc], a: &ConjSearchArgs) -> Outcome {
    let Board::NaVss { board } = board(docs)? else {
        return Err(data("conj-search attacks an na-vss board"));
    };
    let i = a.participant;
    let h_i = board.h_of(i)?;
    let candidates =
        na_vss::attack_bruteforce_conjugacy(&board.big_s, h_i, board.descriptor, a.budget)?;
    let known = shares(docs, Scheme::NaVss, board.n())?
        .into_iter()
        .find(|s| s.index() == i)
        .map(|s| candidates.contains(s.element().expect("group share")));
    let mut report = json!({"participant": i, "count": candidates.len(), "candidates": candidates});
    if let Some(hit) = known {
        report["contains_share"] = json!(hit);
    }
    emit(g.out.as_deref(), &report)
}
