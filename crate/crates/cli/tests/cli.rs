use std::io::Write;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nc-torus-lab")
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(body.as_bytes()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_passes_on_cat_map() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "v.json",
        r#"{"matrix": [[1,1],[1,2]], "theta": {"kind": "zero"}, "t_max": 20}"#,
    );
    let out = run(&["verify-number-theory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# nc-torus-lab v1"));
    assert!(text.contains("all checks passed"));
}

#[test]
fn verify_rejects_parabolic_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "v.json", r#"{"matrix": [[1,1],[0,1]]}"#);
    let out = run(&["verify-number-theory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));
}

#[test]
fn bad_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "v.json", "{not json");
    let out = run(&["verify-number-theory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

// alternating word in two copies whose generic value is 1, not the product of
// the vanishing single-copy means — the standard non-freeness witness
const COUNTEREXAMPLE: &str = r#"
  [{"copy":1,"terms":[{"vector":[1,0],"re":1.0,"im":0.0}]},
   {"copy":2,"terms":[{"vector":[1,0],"re":1.0,"im":0.0}]},
   {"copy":1,"terms":[{"vector":[-2,0],"re":1.0,"im":0.0}]},
   {"copy":2,"terms":[{"vector":[1,0],"re":1.0,"im":0.0}]},
   {"copy":1,"terms":[{"vector":[1,0],"re":1.0,"im":0.0}]},
   {"copy":2,"terms":[{"vector":[-2,0],"re":1.0,"im":0.0}]}]
"#;

#[test]
fn correlate_agrees_across_evaluators() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        &format!(
            r#"{{"matrix": [[1,1],[1,2]], "theta": {{"kind": "real", "value": 0.37}},
                "evaluators": ["generic", "numeric"], "t_max": 4000,
                "words": [{COUNTEREXAMPLE}]}}"#
        ),
    );
    let out = run(&["correlate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    let generic: Vec<&str> = text
        .lines()
        .find(|l| l.contains(",generic,"))
        .unwrap()
        .split(',')
        .collect();
    let re: f64 = generic[2].parse().unwrap();
    assert!((re - 1.0).abs() < 1e-12, "generic value {re}");
    let numeric: Vec<&str> = text
        .lines()
        .find(|l| l.contains(",numeric,"))
        .unwrap()
        .split(',')
        .collect();
    let cross: f64 = numeric[5].parse().unwrap();
    assert!(cross < 0.05, "cross-evaluator gap {cross}");
}

#[test]
fn correlate_reports_budget_overrun_per_word() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        &format!(
            r#"{{"matrix": [[1,1],[1,2]], "theta": {{"kind": "real", "value": 0.37}},
                "evaluators": ["numeric"], "t_max": 4000,
                "words": [{COUNTEREXAMPLE}]}}"#
        ),
    );
    let out = Command::new(bin())
        .args(["correlate", "--config", cfg.to_str().unwrap()])
        .env("NC_TORUS_BUDGET", "10")
        .output()
        .unwrap();
    // overruns land in the status column; the run itself still succeeds
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).to_lowercase().contains("budget"));
}

#[test]
fn unmatched_group_vanishes_under_every_evaluator() {
    let dir = tempfile::tempdir().unwrap();
    let word = r#"[{"copy":1,"terms":[{"vector":[1,0],"re":1.0,"im":0.0}]}]"#;
    for (theta, evals) in [
        (r#"{"kind": "generic"}"#, r#"["generic"]"#),
        (r#"{"kind": "special", "l": 0, "r": 1}"#, r#"["special"]"#),
        (r#"{"kind": "real", "value": 0.37}"#, r#"["numeric"]"#),
    ] {
        let matrix = if evals.contains("special") {
            "[[3,1],[2,1]]"
        } else {
            "[[1,1],[1,2]]"
        };
        let cfg = write_config(
            &dir,
            "u.json",
            &format!(
                r#"{{"matrix": {matrix}, "theta": {theta}, "evaluators": {evals},
                    "t_max": 2000, "words": [{word}]}}"#
            ),
        );
        let out = run(&["correlate", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        let row = stdout(&out).lines().nth(2).unwrap().to_string();
        let re: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        let im: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(re.abs() < 2e-2 && im.abs() < 2e-2, "{row}");
    }
}

#[test]
fn moment_tables_match_the_reference_laws() {
    let dir = tempfile::tempdir().unwrap();
    let obs = r#"[{"vector":[1,0],"re":1.0,"im":0.0},{"vector":[-1,0],"re":1.0,"im":0.0}]"#;
    let generic = write_config(
        &dir,
        "g.json",
        &format!(
            r#"{{"matrix": [[1,1],[1,2]], "theta": {{"kind": "generic"}},
                "observable": {obs}, "orders": [4], "n_values": [4]}}"#
        ),
    );
    let out = run(&["moments", "--config", generic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("limit,4,,8.000000000000e0"), "{text}");
    assert!(text.contains("Semicircle"));

    // special θ with r = 0 commutes in the limit: classical CLT, M₄ = 3V² = 12
    let special = write_config(
        &dir,
        "s.json",
        &format!(
            r#"{{"matrix": [[1,1],[1,2]], "theta": {{"kind": "special", "l": 1, "r": 0}},
                "observable": {obs}, "orders": [4], "n_values": [2, 4, 8]}}"#
        ),
    );
    let out = run(&["moments", "--config", special.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("limit,4,,1.200000000000e1"), "{text}");
    assert!(text.contains("Gaussian"));
}

#[test]
fn finite_n_fourth_moments_interpolate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "m.json",
        r#"{"matrix": [[1,1],[1,2]], "theta": {"kind": "generic"},
            "observable": [{"vector":[1,0],"re":1.0,"im":0.0},{"vector":[-1,0],"re":1.0,"im":0.0}],
            "orders": [4], "n_values": [2, 4, 8]}"#,
    );
    let out = run(&["moments", "--config", cfg.to_str().unwrap()]);
    let text = stdout(&out);
    for (n, v) in [(2, "7.0"), (4, "7.5"), (8, "7.75")] {
        let row = text
            .lines()
            .find(|l| l.starts_with(&format!("finite,4,{n},")))
            .unwrap();
        let got: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(got, v.parse::<f64>().unwrap(), "{row}");
    }
}

#[test]
fn clt_gap_shrinks_with_n() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        r#"{"matrix": [[1,1],[1,2]], "theta": {"kind": "generic"},
            "observable": [{"vector":[1,0],"re":1.0,"im":0.0},{"vector":[-1,0],"re":1.0,"im":0.0}],
            "order": 4, "n_values": [2, 8, 32]}"#,
    );
    let out = run(&["clt", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let gaps: Vec<f64> = stdout(&out)
        .lines()
        .filter(|l| l.starts_with("4,"))
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 3);
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
}

#[test]
fn strong_scan_verdicts_by_theta() {
    let dir = tempfile::tempdir().unwrap();
    let run_scan = |theta: &str| {
        let cfg = write_config(
            &dir,
            "s.json",
            &format!(
                r#"{{"matrix": [[1,1],[1,2]], "theta": {theta},
                    "scan": "strong", "m": [1,0], "n": [0,1], "t_range": [1, 40]}}"#
            ),
        );
        let out = run(&["cluster", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        stdout(&out)
    };
    // (√5−1)/2 is the cat map's special value at ℓ=1, r=0; the certified form is
    // needed because the scan's integer phases outgrow f64 resolution by t≈35
    let golden = run_scan(r#"{"kind": "special", "l": 1, "r": 0}"#);
    assert!(golden.contains("strong: converged-to-target"), "{golden}");
    let third = run_scan(r#"{"kind": "rational", "value": "1/3"}"#);
    assert!(third.contains("strong: not-converged"), "{third}");
    let zero = run_scan(r#"{"kind": "zero"}"#);
    assert!(zero.contains("strong: converged-to-target"), "{zero}");
    for line in zero.lines().filter(|l| l.starts_with("strong,")) {
        let abs: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(abs, 0.0, "{line}");
    }
}

#[test]
fn json_report_embeds_config_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "m.json",
        r#"{"matrix": [[1,1],[1,2]], "theta": {"kind": "generic"},
            "observable": [{"vector":[1,0],"re":1.0,"im":0.0},{"vector":[-1,0],"re":1.0,"im":0.0}],
            "orders": [2, 4], "n_values": [2]}"#,
    );
    let first = run(&["moments", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(first.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["schema"], "nc-torus-lab v1");
    let embedded = write_config(&dir, "m2.json", &report["config"].to_string());
    let second = run(&["moments", "--config", embedded.to_str().unwrap(), "--format", "json"]);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn custom_separator_applies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "v.json",
        r#"{"matrix": [[1,1],[1,2]], "t_max": 5, "separator": ";"}"#,
    );
    let out = run(&["verify-number-theory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("beta_recursion;0;"));
}
