//! Project files, auxiliary data files and report serialization.
//!
//! Projects are JSON documents (schema version 1, see `docs/project-schema.md`).
//! Unknown fields are rejected so typos surface as parse errors with a location.
//! Reports are written as CSV or JSON; acceptabilities are fractions, never percent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::electre::AssignmentRule;
use crate::error::{Error, Result};
use crate::finance::{self, CashFlowSeries, SectorRatioSample};
use crate::model::{check_weights, CriterionSpec, Direction, LambdaSpec, Model, ValidationReport, ViolationKind};
use crate::simos::{self, CardDeck};
use crate::smaa::{self, AcceptabilityReport, Bound, RunConfig, WeightBounds, WeightSampler};
use crate::weights::WeightVector;

pub const SCHEMA_VERSION: u32 = 1;

/// How a decision maker's weights are given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightModel {
    Fixed(WeightVector),
    Deck(CardDeck),
    Interval(WeightBounds),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionMaker {
    pub id: String,
    pub weights: WeightModel,
}

impl DecisionMaker {
    /// The sampler for this decision maker; decks are resolved into fixed weights.
    pub fn sampler(&self) -> Result<WeightSampler> {
        Ok(match &self.weights {
            WeightModel::Fixed(w) => WeightSampler::Fixed { weights: w.clone() },
            WeightModel::Deck(deck) => WeightSampler::Fixed {
                weights: simos::simos_resolve(deck)?.weights,
            },
            WeightModel::Interval(bounds) => WeightSampler::Interval { bounds: bounds.clone() },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    #[serde(default = "default_draws")]
    pub draws: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rule: AssignmentRule,
    #[serde(default)]
    pub evaluation_sampling: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_cutoff: Option<usize>,
}

fn default_draws() -> u64 {
    smaa::DEFAULT_DRAWS
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            draws: smaa::DEFAULT_DRAWS,
            seed: 0,
            rule: AssignmentRule::default(),
            evaluation_sampling: false,
            risk_cutoff: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSeries {
    pub id: String,
    pub flows: CashFlowSeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectFile {
    pub schema_version: u32,
    pub name: String,
    pub model: Model,
    pub decision_makers: Vec<DecisionMaker>,
    #[serde(default)]
    pub lambda: LambdaSpec,
    #[serde(default)]
    pub run: RunSettings,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cash_flows: Vec<NamedSeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_samples: Option<SectorRatios>,
}

impl ProjectFile {
    pub fn decision_maker(&self, id: &str) -> Option<&DecisionMaker> {
        self.decision_makers.iter().find(|d| d.id == id)
    }

    /// Full semantic validation: model invariants plus decision makers, λ and run settings.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.model.validate();
        if self.schema_version != SCHEMA_VERSION {
            report.push(
                ViolationKind::Schema,
                "schema_version",
                format!(
                    "unsupported schema version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            );
        }
        if let Err(e) = self.lambda.check() {
            report.push(ViolationKind::Lambda, "lambda", e.to_string());
        }
        if self.run.draws == 0 {
            report.push(ViolationKind::Run, "run.draws", "draws must be at least 1");
        }
        if let Some(c) = self.run.risk_cutoff {
            if c == 0 || c >= self.model.category_count() {
                report.push(
                    ViolationKind::Run,
                    "run.risk_cutoff",
                    format!("cutoff {c} out of range"),
                );
            }
        }
        let mut ids = BTreeSet::new();
        for dm in &self.decision_makers {
            let loc = format!("decision maker {}", dm.id);
            if !ids.insert(dm.id.as_str()) {
                report.push(
                    ViolationKind::Duplicate,
                    &loc,
                    "decision maker id appears more than once",
                );
            }
            match &dm.weights {
                WeightModel::Fixed(w) => report.extend(check_weights(&self.model.criteria, &w.0, &loc)),
                WeightModel::Deck(deck) => {
                    let mut deck_report = deck.validate(Some(&self.model.criteria));
                    if deck.z.is_nan() || deck.z <= 1.0 {
                        deck_report.push(ViolationKind::Deck, "deck", format!("z = {} must exceed 1", deck.z));
                    }
                    for mut v in deck_report.violations {
                        v.location = format!("{loc} / {}", v.location);
                        report.violations.push(v);
                    }
                }
                WeightModel::Interval(bounds) => check_bounds(&mut report, &self.model.criteria, bounds, &loc),
            }
        }
        report
    }

    pub fn sampler_for(&self, dm: &str) -> Result<WeightSampler> {
        self.decision_maker(dm)
            .ok_or_else(|| Error::config(format!("unknown decision maker `{dm}`")))?
            .sampler()
    }

    /// Interval weights spanning every decision maker's weights.
    pub fn group_bounds(&self) -> Result<WeightBounds> {
        let mut vectors = Vec::new();
        let mut boxes = Vec::new();
        for dm in &self.decision_makers {
            match dm.sampler()? {
                WeightSampler::Fixed { weights } => vectors.push(weights),
                WeightSampler::Interval { bounds } => {
                    vectors.push(bounds.iter().map(|(k, b)| (k.clone(), b.lo)).collect());
                    boxes.push(bounds);
                }
                WeightSampler::SimplexUniform => {}
            }
        }
        let mut bounds = smaa::interval_weights_from_dms(&vectors)?;
        for b in boxes {
            for (k, inner) in b {
                if let Some(outer) = bounds.get_mut(&k) {
                    outer.hi = outer.hi.max(inner.hi);
                }
            }
        }
        Ok(bounds)
    }

    pub fn group_sampler(&self) -> Result<WeightSampler> {
        Ok(WeightSampler::Interval {
            bounds: self.group_bounds()?,
        })
    }

    /// Run configuration from the file's settings.
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            draws: self.run.draws,
            seed: self.run.seed,
            lambda: self.lambda,
            rule: self.run.rule,
            evaluation_sampling: self.run.evaluation_sampling,
            risk_cutoff: self.run.risk_cutoff,
            ..RunConfig::default()
        }
    }
}

fn check_bounds(report: &mut ValidationReport, criteria: &[CriterionSpec], bounds: &WeightBounds, loc: &str) {
    for c in criteria {
        match bounds.get(&c.id) {
            None => report.push(ViolationKind::Weights, loc, format!("no weight bounds for {}", c.id)),
            Some(Bound { lo, hi }) if !(0.0 <= *lo && lo <= hi && *hi <= 1.0) => report.push(
                ViolationKind::Weights,
                loc,
                format!("bounds [{lo}, {hi}] on {} must satisfy 0 <= lo <= hi <= 1", c.id),
            ),
            _ => {}
        }
    }
    let lo: f64 = bounds.values().map(|b| b.lo).sum();
    let hi: f64 = bounds.values().map(|b| b.hi).sum();
    if lo > 1.0 + 1e-9 || hi < 1.0 - 1e-9 {
        report.push(
            ViolationKind::Weights,
            loc,
            format!("empty weight region: lower bounds sum to {lo}, upper bounds to {hi}"),
        );
    }
}

/// Parses and validates a project document.
pub fn parse_project(text: &str) -> Result<ProjectFile> {
    let project: ProjectFile = serde_json::from_str(text)?;
    project.validate().into_result()?;
    Ok(project)
}

pub fn load_project(path: impl AsRef<Path>) -> Result<ProjectFile> {
    parse_project(&std::fs::read_to_string(path)?)
}

pub fn save_project(project: &ProjectFile, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(project).expect("project serializes");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_deck(path: impl AsRef<Path>) -> Result<CardDeck> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Per-sector samples of financial ratios plus DM-supplied columns.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorRatios {
    /// Profile columns given directly by the decision makers, shared by all sectors.
    #[serde(default)]
    pub fixed_columns: BTreeMap<String, Vec<f64>>,
    /// sector → ratio (criterion id) → observations.
    pub sectors: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
}

impl SectorRatios {
    pub fn sample(&self, sector: &str, ratio: &str) -> Option<SectorRatioSample> {
        self.sectors.get(sector)?.get(ratio).map(|obs| SectorRatioSample {
            ratio: ratio.to_string(),
            observations: obs.clone(),
        })
    }

    /// Sector override columns derived from quartiles; b_4 is the best across sectors.
    pub fn derive_overrides(&self, criteria: &[CriterionSpec]) -> Result<BTreeMap<String, BTreeMap<String, Vec<f64>>>> {
        let direction = |id: &str| -> Result<Direction> {
            criteria
                .iter()
                .find(|c| c.id == id)
                .map(|c| c.direction)
                .ok_or_else(|| Error::config(format!("ratio `{id}` is not a declared criterion")))
        };
        let ratios: BTreeSet<&String> = self.sectors.values().flat_map(|m| m.keys()).collect();
        let mut best = BTreeMap::new();
        for ratio in &ratios {
            let samples: Vec<SectorRatioSample> = self.sectors.keys().filter_map(|s| self.sample(s, ratio)).collect();
            let refs: Vec<&SectorRatioSample> = samples.iter().collect();
            best.insert(ratio.to_string(), finance::cross_sector_best(&refs, direction(ratio)?)?);
        }
        let mut out = BTreeMap::new();
        for (sector, cols) in &self.sectors {
            let mut columns = BTreeMap::new();
            for ratio in cols.keys() {
                let sample = self.sample(sector, ratio).expect("present");
                let col = finance::profile_column(&sample, direction(ratio)?, best[ratio])?;
                columns.insert(ratio.clone(), col.to_vec());
            }
            for (id, col) in &self.fixed_columns {
                columns.insert(id.clone(), col.clone());
            }
            out.insert(sector.clone(), columns);
        }
        Ok(out)
    }
}

/// Cash-flow file: series per company, optionally with printed reference rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CashFlowFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    pub series: Vec<CashFlowEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CashFlowEntry {
    pub id: String,
    pub base: CashFlowSeries,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reference: Vec<ReferenceScenario>,
}

/// A scenario row as printed in an external source, kept for comparison only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceScenario {
    pub severity: f64,
    pub flows: Vec<f64>,
    pub npv: f64,
}

impl CashFlowEntry {
    pub fn reference_for(&self, severity: f64) -> Option<&ReferenceScenario> {
        self.reference.iter().find(|r| (r.severity - severity).abs() < 1e-12)
    }
}

pub fn load_cash_flows(path: impl AsRef<Path>) -> Result<CashFlowFile> {
    let file: CashFlowFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    for s in &file.series {
        if s.base.flows.is_empty() {
            return Err(Error::config(format!("series `{}` has no cash flows", s.id)));
        }
    }
    Ok(file)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::config(format!("unknown report format `{other}`"))),
        }
    }
}

const NOT_APPLICABLE: &str = "NA";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NOT_APPLICABLE.to_string(), |v| v.to_string())
}

/// CSV with columns `alternative, dm, pi_1..pi_p, modal, type_i, type_ii, se_1..se_p`.
///
/// Floats use the shortest representation that reads back to the same value.
pub fn render_csv(reports: &[AcceptabilityReport]) -> Result<String> {
    let categories = reports.first().map_or(0, |r| r.categories.len());
    if reports.iter().any(|r| r.categories.len() != categories) {
        return Err(Error::config(
            "reports with different category counts cannot share one CSV",
        ));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["alternative".to_string(), "dm".to_string()];
    header.extend((1..=categories).map(|k| format!("pi_{k}")));
    header.extend(["modal", "type_i", "type_ii"].map(String::from));
    header.extend((1..=categories).map(|k| format!("se_{k}")));
    w.write_record(&header)?;
    for report in reports {
        for row in &report.rows {
            let mut rec = vec![row.alternative.clone(), report.label.clone()];
            rec.extend(row.pi.iter().map(f64::to_string));
            rec.push(row.modal.to_string());
            rec.push(opt(row.type_i));
            rec.push(opt(row.type_ii));
            rec.extend(row.std_err.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_json(reports: &[AcceptabilityReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render_report(reports: &[AcceptabilityReport], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => render_csv(reports),
        ReportFormat::Json => Ok(render_json(reports)),
    }
}

pub fn write_report(reports: &[AcceptabilityReport], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_report(reports, format)?)?;
    Ok(())
}

pub fn read_report_json(path: impl AsRef<Path>) -> Result<Vec<AcceptabilityReport>> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Plain-text acceptability table in whole percent, one line per alternative.
pub fn format_percent_table(report: &AcceptabilityReport) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<12}", "alternative");
    for c in &report.categories {
        let _ = write!(out, "{c:>7}");
    }
    let _ = writeln!(out, "{:>8}", "modal");
    for row in &report.rows {
        let _ = write!(out, "{:<12}", row.alternative);
        for p in &row.pi {
            let _ = write!(out, "{:>6.0}%", p * 100.0);
        }
        let _ = writeln!(
            out,
            "{:>8}",
            report.categories.get(row.modal - 1).map_or("?", String::as_str)
        );
    }
    out
}
