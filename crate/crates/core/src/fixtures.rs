//! Bundled case-study data: four start-ups, five decision makers, twelve criteria.
//!
//! Everything here is parsed from the JSON files under `fixtures/`, which are
//! also valid inputs for the command-line tool.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::io::{self, CashFlowFile, ProjectFile, SectorRatios, WeightModel};
use crate::model::Model;
use crate::simos::CardDeck;
use crate::smaa::WeightBounds;
use crate::weights::WeightVector;

pub const CASE_STUDY_JSON: &str = include_str!("../fixtures/case_study.json");
pub const CASE_STUDY_INTERVALS_JSON: &str = include_str!("../fixtures/case_study_intervals.json");
pub const DM1_DECK_JSON: &str = include_str!("../fixtures/dm1_deck.json");
pub const CASH_FLOWS_JSON: &str = include_str!("../fixtures/cash_flows.json");
pub const SECTOR_RATIOS_JSON: &str = include_str!("../fixtures/sector_ratios.json");
pub const REFERENCE_TABLES_JSON: &str = include_str!("../fixtures/reference_tables.json");

pub const DM_IDS: [&str; 5] = ["DM1", "DM2", "DM3", "DM4", "DM5"];
pub const COMPANIES: [&str; 4] = ["A", "B", "C", "D"];

/// Published acceptabilities (fractions) used as a comparison baseline.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTables {
    /// dm → alternative → π per category.
    pub per_dm: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
    /// Group run with interval weights and point evaluations.
    pub group: BTreeMap<String, Vec<f64>>,
    /// Group run with interval weights and interval evaluations.
    pub group_intervals: BTreeMap<String, Vec<f64>>,
    pub interval_weights: WeightBounds,
}

pub fn case_study() -> ProjectFile {
    io::parse_project(CASE_STUDY_JSON).expect("bundled case study is valid")
}

pub fn case_study_intervals() -> ProjectFile {
    io::parse_project(CASE_STUDY_INTERVALS_JSON).expect("bundled interval case study is valid")
}

pub fn case_study_model() -> Model {
    case_study().model
}

pub fn case_study_intervals_model() -> Model {
    case_study_intervals().model
}

pub fn dm1_deck() -> CardDeck {
    serde_json::from_str(DM1_DECK_JSON).expect("bundled deck parses")
}

pub fn cash_flows() -> CashFlowFile {
    serde_json::from_str(CASH_FLOWS_JSON).expect("bundled cash flows parse")
}

pub fn sector_ratios() -> SectorRatios {
    serde_json::from_str(SECTOR_RATIOS_JSON).expect("bundled ratios parse")
}

pub fn reference_tables() -> ReferenceTables {
    serde_json::from_str(REFERENCE_TABLES_JSON).expect("bundled reference tables parse")
}

/// Fixed weights of one decision maker in the bundled project.
pub fn published_weights(dm: &str) -> WeightVector {
    let project = case_study();
    match &project
        .decision_maker(dm)
        .unwrap_or_else(|| panic!("no decision maker {dm}"))
        .weights
    {
        WeightModel::Fixed(w) => w.clone(),
        other => panic!("{dm} has non-fixed weights {other:?}"),
    }
}

/// Same weights aligned with the model's criterion order.
pub fn published_row(dm: &str) -> Vec<f64> {
    published_weights(dm)
        .aligned(&case_study_model().criteria)
        .expect("weights cover every criterion")
}

/// Point evaluations per alternative in criterion order. Panics on interval values.
pub fn point_rows(model: &Model) -> Vec<Vec<f64>> {
    model
        .performance_table()
        .expect("complete table")
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| {
                    assert!(e.is_point(), "interval evaluation in point_rows");
                    e.lo
                })
                .collect()
        })
        .collect()
}
