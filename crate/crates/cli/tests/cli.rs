use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

/// Lines that are neither empty nor `#` comments.
fn body(out: &Output) -> Vec<String> {
    stdout(out)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(str::to_string)
        .collect()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(contents.as_bytes()).expect("write temp file");
    f
}

#[test]
fn growth_tsv_for_s8() {
    let s8 = data("s8.grp");
    let out = run(&["growth", "--group", &s8, "--max-n", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with(&format!("# orbitlab {}\n", orbitlab::VERSION)));
    assert!(text.contains("\"max_n\":4"));
    assert_eq!(
        body(&out),
        [
            "n\tf\tF\tF_star",
            "1\t1\t1\t1",
            "2\t1\t1\t2",
            "3\t1\t1\t5",
            "4\t1\t1\t15"
        ]
    );
}

#[test]
fn growth_json_embeds_config_and_version() {
    let s8 = data("s8.grp");
    let out = run(&["growth", "--group", &s8, "--max-n", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["version"], orbitlab::VERSION);
    assert_eq!(v["config"]["group"], s8.as_str());
    assert_eq!(v["config"]["subcommand"]["name"], "growth");
    assert_eq!(
        v["result"]["profile"]["F_star"],
        serde_json::json!([1, 2, 5])
    );
}

#[test]
fn identical_configs_give_identical_bytes() {
    let s4 = data("s4.grp");
    for args in [
        vec!["growth", "--group", s4.as_str(), "--max-n", "4"],
        vec![
            "dense",
            "--group",
            s4.as_str(),
            "--n",
            "2",
            "--seed",
            "11",
            "--cap",
            "5",
        ],
        vec!["homset", "--kind", "si", "--m", "3", "--n", "5"],
        vec!["sap", "--kind", "pair", "--cap", "2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn homset_lists_twelve_cyclic_morphisms() {
    let out = run(&["homset", "--kind", "CI", "--m", "3", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["count"], 12);
    assert_eq!(v["result"]["closed_form"], "12");
    let listed = v["result"]["morphisms"].as_array().unwrap();
    assert_eq!(listed.len(), 12);
    assert!(listed.contains(&Value::from("CI 3->4 : [2,3,1]")));
}

#[test]
fn factorize_single_and_all() {
    let out = run(&["factorize", "CI 3->4 : [2,3,1]"]);
    assert_eq!(code(&out), 0);
    let row = &json(&out)["result"]["factorizations"][0];
    assert_eq!(row["increasing"], "CI 3->4 : [1,2,3]");
    assert_eq!(row["automorphism"], "CI 3->3 : [2,3,1]");

    let out = run(&["factorize", "--kind", "bi", "--m", "3", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["pairs"], 20);
    assert_eq!(v["result"]["bijective"], true);
}

#[test]
fn same_orbits_and_density() {
    let (d4, c4, s4, a4) = (
        data("d4.grp"),
        data("c4.grp"),
        data("s4.grp"),
        data("a4.grp"),
    );
    let out = run(&["same-orbits", "--group", &d4, "--subgroup", &c4, "--n", "2"]);
    assert_eq!(code(&out), 0);
    let lemma = &json(&out)["result"][0]["lemma"];
    assert_eq!(
        lemma["conditions"],
        serde_json::json!([false, false, false, false])
    );
    assert_eq!(lemma["consistent"], true);

    for (t, expected) in [("2", true), ("4", false)] {
        let out = run(&["dense", "--group", &s4, "--subgroup", &a4, "--n", t]);
        assert_eq!(code(&out), 0);
        let row = &json(&out)["result"][0];
        assert_eq!(row["t_dense"], expected, "t = {t}");
        assert_eq!(row["agree"], true);
    }
}

#[test]
fn seeded_sweep_depends_on_seed_only() {
    let s4 = data("s4.grp");
    let sweep = |seed: &str| {
        let out = run(&[
            "dense", "--group", &s4, "--n", "2", "--cap", "8", "--seed", seed,
        ]);
        assert_eq!(code(&out), 0);
        json(&out)["result"].clone()
    };
    let first = sweep("3");
    assert_eq!(first.as_array().unwrap().len(), 8);
    assert_eq!(first, sweep("3"));
}

#[test]
fn fullness_witness_cases() {
    let (s3, h, k) = (data("s3.grp"), data("s3_h.grp"), data("s3_k.grp"));
    let out = run(&[
        "fullness-witness",
        "--group",
        &s3,
        "--subgroup",
        &h,
        "--k-group",
        &k,
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["full"], false);
    assert_eq!(v["result"]["witness"]["rank"], 3);

    let (s4, a4) = (data("s4.grp"), data("a4.grp"));
    let transposition = temp_file("N=4\n(1 2)\n");
    let k = transposition.path().to_str().unwrap();
    let out = run(&[
        "fullness-witness",
        "--group",
        &s4,
        "--subgroup",
        &a4,
        "--k-group",
        k,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["full"], true);
}

#[test]
fn amalgamate_linear_orders() {
    let (l, r) = (data("span_left.emb"), data("span_right.emb"));
    let out = run(&["amalgamate", &l, &r, "--kind", "oi"]);
    assert_eq!(code(&out), 0);
    let lines = body(&out);
    assert_eq!(lines[0], "universe = c a b");
    assert_eq!(lines[1], "le/2: (c,c) (c,a) (c,b) (a,a) (a,b) (b,b)");
}

#[test]
fn sap_verdicts_and_certificate_round_trip() {
    let out = run(&["sap", "--kind", "linear", "--cap", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(body(&out), ["true"]);

    let out = run(&["sap", "--kind", "pair", "--cap", "2"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert_eq!(body(&out), ["false"]);

    // The commented certificate is two embedding files; feeding them back
    // to `amalgamate` reproduces the failure.
    let mut files = Vec::new();
    for name in ["f1", "f2"] {
        let marker = format!("# counterexample {name}:\n");
        let start = text.find(&marker).unwrap() + marker.len();
        let block: String = text[start..]
            .lines()
            .take_while(|l| l.starts_with("#   "))
            .map(|l| format!("{}\n", &l[4..]))
            .collect();
        files.push(temp_file(&block));
    }
    let paths: Vec<&str> = files.iter().map(|f| f.path().to_str().unwrap()).collect();
    let out = run(&["amalgamate", paths[0], paths[1], "--kind", "pair"]);
    assert_eq!(code(&out), 1);
    assert_eq!(body(&out), ["NONE"]);
    let out = run(&["amalgamate", paths[0], paths[1], "--kind", "pair", "--weak"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn orbitcat_reports() {
    let out = run(&["orbitcat", "--group", &data("s3.grp"), "--cap", "2"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    assert_eq!(r["is_isomorphism"], false);
    assert_eq!(r["failures_explained"], true);
    assert_eq!(r["witness"], serde_json::json!([1, 2]));
}

#[test]
fn noeth_chain_from_file_and_examples() {
    let out = run(&[
        "noeth-chain",
        "--input",
        &data("oi_chain.txt"),
        "--width",
        "3",
        "--degree",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    assert_eq!(r["all_stabilized"], true);
    assert_eq!(r["uniform_index"], 3);

    for field in ["q", "fp:7"] {
        let out = run(&[
            "noeth-chain",
            "--example",
            "fi",
            "--width",
            "3",
            "--degree",
            "4",
            "--field",
            field,
        ]);
        assert_eq!(code(&out), 0, "{field}");
        assert_eq!(json(&out)["result"]["field"], field);
    }

    // A chain that still grows at its last step has not stabilized.
    let growing = temp_file("OI 1 1 : [1] : x1^2\n---\nOI 1 1 : [1] : x1\n");
    let path = growing.path().to_str().unwrap();
    let out = run(&[
        "noeth-chain",
        "--input",
        path,
        "--width",
        "2",
        "--degree",
        "3",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["status"], "violation");
}

#[test]
fn restrict_check_holds() {
    let out = run(&["restrict-check", "--kind", "ci", "--n", "3", "--width", "5"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    assert_eq!(r["holds"], true);
    assert_eq!(r["classes"].as_array().unwrap().len(), 3);
}

#[test]
fn malformed_inputs_exit_two() {
    let s4 = data("s4.grp");
    let bad_group = temp_file("N=3\n(1 5)\n");
    let bad_chain = temp_file("OI 1 1 : [2] : x1\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["homset", "--kind", "xx", "--m", "1", "--n", "2"],
        vec!["homset", "--kind", "oi", "--m", "1"],
        vec![
            "growth",
            "--group",
            "/nonexistent/group.grp",
            "--max-n",
            "2",
        ],
        vec![
            "growth",
            "--group",
            bad_group.path().to_str().unwrap(),
            "--max-n",
            "2",
        ],
        vec!["growth", "--group", &s4, "--max-n", "9"],
        vec!["sap", "--kind", "oi", "--cap", "2", "--format", "tsv"],
        vec![
            "noeth-chain",
            "--input",
            bad_chain.path().to_str().unwrap(),
            "--width",
            "2",
            "--degree",
            "2",
        ],
        vec!["noeth-chain", "--example", "oi", "--width", "2"],
        vec![
            "noeth-chain",
            "--example",
            "oi",
            "--width",
            "2",
            "--degree",
            "2",
            "--field",
            "fp:9",
        ],
        vec!["no-such-subcommand"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn caps_exit_three() {
    let out = run(&["homset", "--kind", "fi", "--m", "12", "--n", "12"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
