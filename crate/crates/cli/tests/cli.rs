use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pvss(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvss"))
        .args(args)
        .current_dir(dir)
        .env_remove("PVSS_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tiny_dlog_session_exits_zero_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = pvss(
        &[
            "session", "run", "--scheme", "dlog", "--tiny", "--seed", "7",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 7);
    assert_eq!(report["completed"], true);
    assert_eq!(report["recoveries"].as_array().unwrap().len(), 3);
}

#[test]
fn adversarial_session_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = pvss(
        &[
            "session",
            "run",
            "--scheme",
            "dlog",
            "--tiny",
            "--adversary",
            "tamper-ciphertext(2)",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("[2]"));
}

#[test]
fn unknown_flag_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&pvss(&["--no-such-flag"], dir.path())), 2);
    assert_eq!(
        code(&pvss(
            &["session", "run", "--adversary", "tamper-everything"],
            dir.path()
        )),
        2
    );
}

#[test]
fn malformed_input_exits_two_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.json"), "{\"kind\": \"board\"").unwrap();
    let out = pvss(&["verify", "--in", "junk.json"], dir.path());
    assert_eq!(code(&out), 2);
    assert_eq!(
        String::from_utf8_lossy(&out.stderr)
            .trim_end()
            .lines()
            .count(),
        1
    );
}

#[test]
fn tampered_dlog_board_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = pvss(
        &[
            "deal",
            "--tiny",
            "--seed",
            "3",
            "--secret",
            "11",
            "--out",
            "board.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        code(&pvss(
            &["verify", "--in", "board.json", "--in", "participant-2.json"],
            d
        )),
        0
    );

    let mut board = json(&d.join("board.json"));
    let b = &mut board["board"]["entries"][1]["B"];
    let bumped = (b.as_str().unwrap().parse::<u64>().unwrap() * 2 % 47).to_string();
    *b = Value::String(bumped);
    std::fs::write(d.join("bad.json"), board.to_string()).unwrap();
    let out = pvss(&["verify", "--in", "bad.json"], d);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("proof [2]"));
}

#[test]
fn dlog_deal_then_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    pvss(
        &[
            "deal",
            "--tiny",
            "--seed",
            "5",
            "--secret",
            "19",
            "--out",
            "board.json",
            "--private-dir",
            "keys",
        ],
        d,
    );
    let out = pvss(
        &[
            "reconstruct",
            "--in",
            "board.json",
            "--in",
            "keys/participant-1.json",
            "--in",
            "keys/participant-3.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["secret"], "19");
    let one = pvss(
        &[
            "reconstruct",
            "--in",
            "board.json",
            "--in",
            "keys/participant-1.json",
        ],
        d,
    );
    assert_eq!(code(&one), 2);
}

#[test]
fn eroot_interactive_proof_over_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run = |args: &[&str]| {
        let out = pvss(args, d);
        assert_eq!(
            code(&out),
            0,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out
    };
    run(&[
        "--scheme",
        "eroot",
        "deal",
        "--tiny",
        "--seed",
        "3",
        "--secret",
        "5",
        "--out",
        "board.json",
    ]);
    for round in 0..3u32 {
        let mut prove = vec![
            "prove",
            "--in",
            "board.json",
            "--in",
            "dealer.json",
            "--participant",
            "2",
            "--state",
            "st.json",
            "--out",
            "com.json",
        ];
        if round > 0 {
            prove.extend(["--in", "tr.json"]);
        }
        let seed = (10 + round).to_string();
        prove.extend(["--seed", seed.as_str()]);
        run(&prove);
        let seed = (20 + round).to_string();
        run(&[
            "challenge",
            "--in",
            "com.json",
            "--seed",
            seed.as_str(),
            "--out",
            "ch.json",
        ]);
        run(&[
            "respond", "--in", "ch.json", "--state", "st.json", "--out", "tr.json",
        ]);
    }
    assert_eq!(
        json(&d.join("tr.json"))["rounds"].as_array().unwrap().len(),
        3
    );
    run(&["verify", "--in", "tr.json"]);

    let mut bad = json(&d.join("tr.json"));
    bad["M"] = Value::String("10".into());
    std::fs::write(d.join("bad.json"), bad.to_string()).unwrap();
    assert_eq!(code(&pvss(&["verify", "--in", "bad.json"], d)), 1);

    let rec = run(&[
        "reconstruct",
        "--in",
        "board.json",
        "--in",
        "participant-1.json",
        "--in",
        "participant-2.json",
    ]);
    let v: Value = serde_json::from_slice(&rec.stdout).unwrap();
    assert_eq!(v["secret"], "5");
}

#[test]
fn na_vss_deal_verify_reconstruct_attack() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = pvss(
        &[
            "--scheme",
            "na-vss",
            "deal",
            "--tiny",
            "-n",
            "2",
            "--seed",
            "8",
            "--out",
            "board.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let both = [
        "--in",
        "board.json",
        "--in",
        "participant-1.json",
        "--in",
        "participant-2.json",
    ];
    assert_eq!(code(&pvss(&[&["verify"][..], &both].concat(), d)), 0);

    let rec = pvss(
        &[
            "reconstruct",
            "--in",
            "board.json",
            "--in",
            "participant-1.json",
        ],
        d,
    );
    assert_eq!(code(&rec), 0);

    let attack = pvss(
        &[
            "attack",
            "conj-search",
            "--in",
            "board.json",
            "--in",
            "participant-1.json",
            "--participant",
            "1",
        ],
        d,
    );
    assert_eq!(code(&attack), 0);
    let v: Value = serde_json::from_slice(&attack.stdout).unwrap();
    assert_eq!(v["contains_share"], true);
    assert!(v["count"].as_u64().unwrap() >= 1);

    let mut wrong = json(&d.join("participant-2.json"));
    wrong["f"] = json(&d.join("participant-1.json"))["f"].clone();
    std::fs::write(d.join("wrong.json"), wrong.to_string()).unwrap();
    assert_eq!(
        code(&pvss(
            &["verify", "--in", "board.json", "--in", "wrong.json"],
            d
        )),
        1
    );
}

#[test]
fn threshold_deal_and_reconstruct() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = pvss(
        &[
            "--scheme",
            "na-vss-threshold",
            "deal",
            "--tiny",
            "--seed",
            "2",
            "--out",
            "board.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let a = pvss(
        &[
            "reconstruct",
            "--in",
            "board.json",
            "--in",
            "participant-1.json",
            "--in",
            "participant-3.json",
        ],
        d,
    );
    let b = pvss(
        &[
            "reconstruct",
            "--in",
            "board.json",
            "--in",
            "participant-2.json",
            "--in",
            "participant-4.json",
        ],
        d,
    );
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let all: Vec<&str> = [
        "board.json",
        "participant-1.json",
        "participant-2.json",
        "participant-3.json",
        "participant-4.json",
    ]
    .iter()
    .flat_map(|f| ["--in", *f])
    .collect();
    assert_eq!(code(&pvss(&[&["verify"][..], &all].concat(), d)), 0);
}

#[test]
fn session_files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for scheme in [
        "dlog",
        "eroot",
        "na-kex",
        "na-pvss",
        "na-vss",
        "na-vss-threshold",
    ] {
        for run in ["a", "b"] {
            let board = format!("{scheme}-{run}-board.json");
            let report = format!("{scheme}-{run}-report.json");
            let out = pvss(
                &[
                    "session", "run", "--scheme", scheme, "--tiny", "--seed", "42", "--out",
                    &board, "--report", &report,
                ],
                d,
            );
            assert_eq!(
                code(&out),
                0,
                "{scheme}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        for kind in ["board", "report"] {
            let a = std::fs::read(d.join(format!("{scheme}-a-{kind}.json"))).unwrap();
            let b = std::fs::read(d.join(format!("{scheme}-b-{kind}.json"))).unwrap();
            assert_eq!(a, b, "{scheme} {kind}");
        }
    }
}

#[test]
fn seed_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_pvss"));
        cmd.args(["session", "run", "--scheme", "na-vss", "--tiny"])
            .current_dir(dir.path())
            .env_remove("PVSS_SEED");
        if let Some(e) = env {
            cmd.env("PVSS_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("5"), None), run(None, Some("5")));
    assert_eq!(run(Some("6"), Some("5")), run(None, Some("5")));
    assert_ne!(run(Some("6"), None), run(None, Some("5")));
}

#[test]
fn params_gen_round_trips_into_deal() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = pvss(
        &[
            "params",
            "gen",
            "--scheme",
            "dlog",
            "--bits",
            "40",
            "--seed",
            "1",
            "--out",
            "params.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = pvss(
        &[
            "deal",
            "--in",
            "params.json",
            "--secret",
            "12345",
            "--out",
            "board.json",
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&pvss(&["verify", "--in", "board.json"], d)), 0);
    let rec = pvss(
        &[
            "reconstruct",
            "--in",
            "board.json",
            "--in",
            "participant-2.json",
            "--in",
            "participant-3.json",
        ],
        d,
    );
    let v: Value = serde_json::from_slice(&rec.stdout).unwrap();
    assert_eq!(v["secret"], "12345");
    assert_eq!(code(&pvss(&["params", "gen"], d)), 2);
}
