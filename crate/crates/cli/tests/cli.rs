use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn qperiod(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qperiod"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn expand_the_p1_operator() {
    let out = qperiod(&["expand", &path("smooth_fano_1.txt"), "--terms", "8"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "period: [1,0,2,0,6,0,20,0,70]\n");
    let op = "pf_coefficients: [4,-1,4]\npf_exponents: [[1,2],[1,0],[0,2]]\n";
    let out = qperiod(&["expand", "--terms", "1"], Some(op));
    assert_eq!(stdout(&out), "period: [1,0]\n");
}

#[test]
fn expand_a_laurent_mirror() {
    let out = qperiod(&["expand", "--terms", "6"], Some("x + y + x^-1 y^-1\n"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "period: [1,0,0,6,0,0,90]\n");
    let out = qperiod(&["expand", "--terms", "4"], Some("x1 + x2^-1 +\n"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn expand_output_pipes_into_fit() {
    let expanded = stdout(&qperiod(&["expand", &path("smooth_fano_1.txt"), "--terms", "8"], None));
    // nine terms leave four excess equations for the (1, 2) ansatz
    let out = qperiod(&["fit", "--min-excess", "4"], Some(&expanded));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "pf_coefficients: [4,-1,4]\npf_exponents: [[1,2],[1,0],[0,2]]\n");
    let refused = qperiod(&["fit"], Some(&expanded));
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("no operator found"));

    let longer = stdout(&qperiod(&["expand", &path("smooth_fano_1.txt"), "--terms", "40"], None));
    let out = qperiod(&["fit", "-"], Some(&longer));
    assert_eq!(stdout(&out), "pf_coefficients: [4,-1,4]\npf_exponents: [[1,2],[1,0],[0,2]]\n");
    let round = qperiod(&["expand", "--terms", "40"], Some(&stdout(&out)));
    assert_eq!(stdout(&round), longer);
}

#[test]
fn fit_is_deterministic_per_seed() {
    let p2 = "period: [1,0,0,6,0,0,90,0,0,1680,0,0,34650,0,0,756756,0,0,17153136,0,0,399072960,0,0,9465511770,0,0,227873431500,0,0,5550996791340]\n";
    let runs: Vec<String> = ["11", "11", "12"]
        .iter()
        .map(|seed| stdout(&qperiod(&["fit", "--seed", seed, "--max-order", "2", "--max-degree", "3", "--min-excess", "5"], Some(p2))))
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    assert_eq!(runs[0], "pf_coefficients: [27,-1,81,54]\npf_exponents: [[2,3],[2,0],[1,3],[0,3]]\n");
}

#[test]
fn fit_accepts_a_bare_list_and_truncates() {
    let seq = stdout(&qperiod(&["expand", &path("smooth_fano_1.txt"), "--terms", "60"], None));
    let bare = seq.trim_start_matches("period: ");
    let out = qperiod(&["fit", "--terms", "29"], Some(bare));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("25 excess equations"));
}

#[test]
fn product_of_p1_with_itself() {
    let p1 = path("smooth_fano_1.txt");
    let out = qperiod(&["product", &p1, &p1, "--terms", "6"], None);
    assert_eq!(stdout(&out), "period: [1,0,4,0,36,0,400]\n");
    let out = qperiod(&["product", &p1, &p1], None);
    assert!(stdout(&out).starts_with("period: [1,0,4,0,36,0,400,0,4900,"));
    let out = qperiod(&["product", &p1, &p1, "--terms", "99"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_fixtures() {
    let out = qperiod(&["validate", &path("smooth_fano_1.txt"), "--fuchsian", "--ramification"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1 records, 1 passed, 0 failed"));
    assert!(text.contains("defect 0, extremal"));

    let out = qperiod(&["validate", &path("corrupted/smooth_fano_1.txt")], None);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("record 1 [P1]: FAIL"));
    assert!(text.contains("residuals e = 4: -4, e = 6: 20"));

    let out = qperiod(&["validate", &path("smooth_fano_4.txt")], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("operator checks skipped for 2"));
}

#[test]
fn validate_writes_a_json_report() {
    let report = std::env::temp_dir().join(format!("qperiod-cli-{}.json", std::process::id()));
    let out = qperiod(
        &["validate", &path("smooth_fano_2.txt"), "--ramification", "--report", report.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    std::fs::remove_file(&report).unwrap();
    assert_eq!(json["records"], 5);
    let defects: Vec<i64> = json["results"].as_array().unwrap().iter().map(|r| r["defect"].as_i64().unwrap()).collect();
    assert_eq!(defects, vec![0, 0, 1, 1, 0]);
}

#[test]
fn validate_with_explicit_dimension() {
    let tmp = std::env::temp_dir().join(format!("qperiod-dim-{}.txt", std::process::id()));
    std::fs::copy(fixture("smooth_fano_1.txt"), &tmp).unwrap();
    let out = qperiod(&["validate", tmp.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(64));
    let out = qperiod(&["validate", tmp.to_str().unwrap(), "1"], None);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(&tmp).unwrap();
}

#[test]
fn parse_failures_exit_one() {
    let tmp = std::env::temp_dir().join(format!("qperiod-bad-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let bad = tmp.join("smooth_fano_2.txt");
    std::fs::write(&bad, "id: 1\nperiod: [1,0\nnames: [P2]\n").unwrap();
    let out = qperiod(&["validate", bad.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2 (record 1)"));
    std::fs::remove_dir_all(&tmp).unwrap();
    let out = qperiod(&["analyze"], Some("period: [1,0]\n"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_64() {
    for args in [&["frobnicate"][..], &["fit", "--seed", "x"], &["validate"], &["query", "c4=72"], &["expand", "--bogus"]] {
        assert_eq!(qperiod(args, None).status.code(), Some(64), "{args:?}");
    }
    let out = qperiod(&["query", "c9=1", "--data", &path("smooth_fano_4.txt")], None);
    assert_eq!(out.status.code(), Some(64));
    assert_eq!(qperiod(&["--help"], None).status.code(), Some(0));
}

#[test]
fn query_prints_records() {
    let out = qperiod(&["query", "c4=72", "c5=360", "--data", &path("smooth_fano_4.txt")], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "id: 32\nperiod: [1,0,0,18,72,360,2430]\nnames: [CKP(31), Obro(4,31)]\n"
    );
    let out = qperiod(&["query", "name=dP", "--data", &path("smooth_fano_2.txt"), &path("smooth_fano_3.txt")], None);
    let text = stdout(&out);
    assert_eq!(text.matches("id: ").count(), 4);
    let out = qperiod(&["query", "id=9", "--data", &path("smooth_fano_1.txt")], None);
    assert_eq!(stdout(&out), "");
}

#[test]
fn analyze_reports_ramification() {
    let op = "pf_coefficients: [4,-1,4]\npf_exponents: [[1,2],[1,0],[0,2]]\n";
    let out = qperiod(&["analyze", "-"], Some(op));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("singular points: t = -1/2; t = 0; t = 1/2; t = infinity"));
    assert!(text.contains("fuchsian: true"));
    assert!(text.contains("rf: 2\ndefect: 0\n"));
    let irregular = "pf_coefficients: [1,1]\npf_exponents: [[1,0],[0,3]]\n";
    let text = stdout(&qperiod(&["analyze"], Some(irregular)));
    assert!(text.contains("fuchsian: false"));
    assert!(!text.contains("defect"));
}
