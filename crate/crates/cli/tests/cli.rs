use std::process::{Command, Output};

use census_core::verify::VerificationReport;
use census_core::GroupCount;

fn census(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_census"))
        .args(args)
        .env_remove("CENSUS_HEAVY_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn count_prints_the_number() {
    let o = census(&["count", "60"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("N(60) = 13 "));
    let o = census(&["count", "1"]);
    assert!(stdout(&o).starts_with("N(1) = 1 "));
}

#[test]
fn unsupported_order_exits_two() {
    let o = census(&["count", "360"]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("unsupported: 6 prime factors"),
        "{}",
        stderr(&o)
    );
    assert!(stderr(&o).contains("[3, 2, 1]"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(code(&census(&["count", "zero"])), 2);
    assert_eq!(code(&census(&["count", "0"])), 2);
    assert_eq!(code(&census(&["range", "2", "1"])), 2);
    assert_eq!(code(&census(&["verify", "nothing"])), 2);
}

#[test]
fn count_json_round_trips() {
    let o = census(&["count", "84", "--json"]);
    let g: GroupCount = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((g.n, g.count, g.shape.tag()), (84, 15, "p^2qr"));
    assert_eq!(
        serde_json::to_value(&g).unwrap(),
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["terms"][0]["value"].as_str().unwrap().contains('/'));
}

#[test]
fn explain_lists_terms_that_sum_to_the_count() {
    let o = census(&["count", "56", "--explain"]);
    let text = stdout(&o);
    assert!(text.contains("N(56) = 13"));
    assert!(text.trim_end().ends_with("sum = 13"), "{text}");
}

#[test]
fn term_sums_over_the_first_two_thousand_orders() {
    let o = census(&["range", "1", "2000", "--json", "--skip-unsupported"]);
    assert_eq!(code(&o), 0);
    assert!(o.stderr.is_empty());
    let rows: Vec<GroupCount> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rows.windows(2).all(|w| w[0].n < w[1].n));
    assert!(rows.len() > 1500);
    for g in &rows {
        let s = g.term_sum();
        assert!(s.is_integer(), "n={}", g.n);
        assert_eq!(s.to_integer() as u128, g.count, "n={}", g.n);
    }
}

#[test]
fn range_rows_and_unsupported_listing() {
    let o = census(&["range", "1", "16", "--format", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,shape,count,special_case");
    assert!(lines.contains(&"12,p^2q,5,false"));
    assert!(lines.contains(&"16,p^4,14,true"));
    assert_eq!(lines.len(), 17);

    let o = census(&["range", "5", "5", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,shape,count,special_case\n5,p,1,false\n");

    let o = census(&["range", "60", "64"]);
    assert!(stderr(&o).contains("unsupported: 64"));
    let o = census(&["range", "60", "64", "--skip-unsupported"]);
    assert!(o.stderr.is_empty());
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn table_is_csv_range() {
    assert_eq!(
        census(&["table", "1", "40"]).stdout,
        census(&["range", "1", "40", "--format", "csv"]).stdout
    );
}

#[test]
fn verify_stated_values_json() {
    let o = census(&["verify", "paper-values", "--json"]);
    assert_eq!(code(&o), 0);
    let r: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.passed());
    assert_eq!(r.summary.total, r.cases.len());
    let c = r.cases.iter().find(|c| c.input == "N(56)").unwrap();
    assert_eq!((c.expected, c.actual, c.pass), (13, 13, true));
    let again = serde_json::to_vec(&r).unwrap();
    assert_eq!(
        serde_json::from_slice::<VerificationReport>(&again).unwrap(),
        r
    );
}

#[test]
fn verify_identity_and_grid_pass() {
    for suite in ["identity", "gl-grid", "squarefree"] {
        let o = census(&["verify", suite]);
        assert_eq!(code(&o), 0, "{suite}: {}", stdout(&o));
        assert!(stdout(&o).starts_with(&format!("{suite}: ")));
    }
}

#[test]
fn verify_all_emits_one_report_per_suite() {
    let o = census(&["verify", "all", "--json"]);
    assert_eq!(code(&o), 0);
    let reports: Vec<VerificationReport> = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = reports.iter().map(|r| r.suite.as_str()).collect();
    assert_eq!(
        names,
        [
            "paper-values",
            "gl-grid",
            "cayley",
            "identity",
            "integrality",
            "squarefree"
        ]
    );
}

#[test]
fn oracles() {
    assert_eq!(
        stdout(&census(&["oracle", "gl", "-d", "2", "-p", "7", "-r", "3"])),
        "3\n"
    );
    assert_eq!(stdout(&census(&["oracle", "cayley", "-n", "8"])), "5\n");
    assert_eq!(
        stdout(&census(&["oracle", "gl", "-d", "3", "-p", "3", "-r", "2"])),
        "3\n"
    );
    assert_eq!(
        stdout(&census(&["oracle", "gl", "-d", "3", "-p", "2", "-r", "2"])),
        "1\n"
    );

    let o = census(&[
        "oracle",
        "gl",
        "-d",
        "2",
        "-p",
        "5",
        "-r",
        "4",
        "--witnesses",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["classes"], 5);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 5);

    let o = census(&["oracle", "cayley", "-n", "6", "--witnesses"]);
    assert_eq!(stdout(&o).matches("group ").count(), 2);
}

#[test]
fn oracle_caps_exit_three() {
    let o = census(&["oracle", "gl", "-d", "3", "-p", "5", "-r", "2"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("resource cap"));
    assert_eq!(code(&census(&["oracle", "cayley", "-n", "16"])), 3);
}

#[test]
fn heavy_limit_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_census"))
        .args([
            "--allow-heavy",
            "oracle",
            "gl",
            "-d",
            "2",
            "-p",
            "11",
            "-r",
            "5",
        ])
        .env("CENSUS_HEAVY_LIMIT", "100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = census(&["--allow-heavy", "oracle", "cayley", "-n", "16"]);
    assert_eq!(stdout(&o), "14\n");
}
