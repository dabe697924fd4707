use std::path::PathBuf;
use std::process::{Command, Output};

use smaatri::io::{self, WeightModel};
use smaatri::smaa::run_smaa;
use smaatri::{fixtures, AcceptabilityReport, SimosWeights};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn smaatri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smaatri"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dm1_run_puts_company_a_in_c4_under_the_optimistic_rule() {
    let case = fixture("case_study.json");
    let o = smaatri(&[
        "run",
        case.to_str().unwrap(),
        "--dm",
        "DM1",
        "--draws",
        "10000",
        "--seed",
        "42",
        "--rule",
        "optimistic",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: Vec<AcceptabilityReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports[0].row("A").unwrap().modal, 4);
}

#[test]
fn reversed_lambda_exits_with_config_code() {
    let case = fixture("case_study.json");
    let o = smaatri(&["run", case.to_str().unwrap(), "--lambda", "0.9:0.8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));
}

#[test]
fn invalid_project_exits_with_data_code_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = fixtures::case_study();
    p.model.criteria[0].q = 2.0;
    p.model.criteria[0].p = 1.0;
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&p).unwrap()).unwrap();
    let o = smaatri(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("g1_1"));
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let case = fixture("case_study_intervals.json");
    let mut files = Vec::new();
    for (i, workers) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.csv"));
        let o = smaatri(&[
            "run",
            case.to_str().unwrap(),
            "--group",
            "--draws",
            "3000",
            "--seed",
            "9",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        files.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn intervals_off_with_interval_data_is_config_fault() {
    let case = fixture("case_study_intervals.json");
    let o = smaatri(&["run", case.to_str().unwrap(), "--group", "--intervals", "off"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn weights_prints_total() {
    let deck = fixture("dm1_deck.json");
    let o = smaatri(&["weights", deck.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let total: f64 = text
        .split("K' = ")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((total - 40.63).abs() <= 0.01, "{text}");
}

#[test]
fn z_of_one_is_config_fault() {
    let deck = fixture("dm1_deck.json");
    assert_eq!(
        smaatri(&["weights", deck.to_str().unwrap(), "--z", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn single_rank_deck_gives_equal_weights() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deck.json");
    std::fs::write(&path, r#"{"ranks": [["a", "b", "c", "d"]], "white_cards": [], "z": 3}"#).unwrap();
    let o = smaatri(&["weights", path.to_str().unwrap(), "--format", "json"]);
    let w: SimosWeights = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(w.weights.0.values().all(|&x| x == 0.25));
}

#[test]
fn deck_output_as_fixed_weights_reproduces_the_deck_run() {
    let deck_path = fixture("dm1_deck.json");
    let o = smaatri(&["weights", deck_path.to_str().unwrap(), "--format", "json"]);
    let printed: SimosWeights = serde_json::from_str(&stdout(&o)).unwrap();

    let base = fixtures::case_study();
    let mut via_deck = base.clone();
    via_deck.decision_makers[0].weights = WeightModel::Deck(fixtures::dm1_deck());
    let mut via_fixed = base.clone();
    via_fixed.decision_makers[0].weights = WeightModel::Fixed(printed.weights);

    let config = smaatri::RunConfig {
        draws: 2_000,
        ..base.run_config()
    };
    let a = run_smaa(&via_deck.model, &via_deck.sampler_for("DM1").unwrap(), &config).unwrap();
    let b = run_smaa(&via_fixed.model, &via_fixed.sampler_for("DM1").unwrap(), &config).unwrap();
    assert_eq!(a, b);
    assert!(io::parse_project(&serde_json::to_string(&via_fixed).unwrap()).is_ok());
}

#[test]
fn npv_echoes_reference_column() {
    let flows = fixture("cash_flows.json");
    let o = smaatri(&[
        "npv",
        flows.to_str().unwrap(),
        "--rate",
        "0.0793",
        "--scenarios",
        "0.2,0.4",
        "--series",
        "A",
    ]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(text.lines().count(), 4, "{text}");
    assert!(text.contains("75092.75"));
    assert!(text.contains("140275.51"), "reference echo missing:\n{text}");
}

#[test]
fn npv_at_zero_rate_is_the_sum() {
    let flows = fixture("cash_flows.json");
    let o = smaatri(&[
        "npv",
        flows.to_str().unwrap(),
        "--rate",
        "0",
        "--scenarios",
        "0",
        "--series",
        "A",
    ]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains("153732.50")), "{text}");
}

#[test]
fn npv_rejects_rate_at_minus_one() {
    let flows = fixture("cash_flows.json");
    assert_eq!(
        smaatri(&["npv", flows.to_str().unwrap(), "--rate", "-1"]).status.code(),
        Some(2)
    );
}
