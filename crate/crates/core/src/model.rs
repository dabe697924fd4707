//! Shared vocabulary: criteria, alternatives, limit profiles and cutting levels.
//!
//! Everything here is plain data. [`validate_project`] checks the mechanical
//! invariants the solvers rely on and reports violations as data rather than
//! failing on the first one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Gain,
    Cost,
}

impl Direction {
    /// Maps a raw value onto the gain axis. Applying it twice is the identity.
    #[inline]
    pub fn orient(self, value: f64) -> f64 {
        match self {
            Direction::Gain => value,
            Direction::Cost => -value,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Gain => Direction::Cost,
            Direction::Cost => Direction::Gain,
        }
    }

    /// `true` when `a` is at least as good as `b`.
    pub fn at_least_as_good(self, a: f64, b: f64) -> bool {
        self.orient(a) >= self.orient(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Scale {
    /// Integer grades `min..=max`.
    Ordinal { min: i64, max: i64 },
    /// Real-valued ratio (financial indicators).
    Ratio,
}

impl Scale {
    pub fn is_ordinal(&self) -> bool {
        matches!(self, Scale::Ordinal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionSpec {
    pub id: String,
    /// Risk-area node of the criterion hierarchy.
    pub group: String,
    pub direction: Direction,
    pub scale: Scale,
    /// Indifference threshold.
    #[serde(default)]
    pub q: f64,
    /// Preference threshold.
    #[serde(default)]
    pub p: f64,
    /// Veto threshold; absent means the criterion never vetoes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub veto: Option<f64>,
}

impl CriterionSpec {
    pub fn new(id: impl Into<String>, group: impl Into<String>, direction: Direction, scale: Scale) -> Self {
        Self {
            id: id.into(),
            group: group.into(),
            direction,
            scale,
            q: 0.0,
            p: 0.0,
            veto: None,
        }
    }

    pub fn with_thresholds(mut self, q: f64, p: f64, veto: Option<f64>) -> Self {
        self.q = q;
        self.p = p;
        self.veto = veto;
        self
    }
}

/// A point or interval evaluation. Serialized as a bare number or a `[lo, hi]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "EvaluationRepr", into = "EvaluationRepr")]
pub struct Evaluation {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EvaluationRepr {
    Point(f64),
    Interval([f64; 2]),
}

impl From<EvaluationRepr> for Evaluation {
    fn from(repr: EvaluationRepr) -> Self {
        match repr {
            EvaluationRepr::Point(x) => Evaluation::point(x),
            EvaluationRepr::Interval([lo, hi]) => Evaluation::interval(lo, hi),
        }
    }
}

impl From<Evaluation> for EvaluationRepr {
    fn from(e: Evaluation) -> Self {
        if e.is_point() {
            EvaluationRepr::Point(e.lo)
        } else {
            EvaluationRepr::Interval([e.lo, e.hi])
        }
    }
}

impl Evaluation {
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn flipped(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alternative {
    pub id: String,
    /// Selects the financial profile overrides of the alternative's sector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<String>,
    pub evaluations: BTreeMap<String, Evaluation>,
}

/// Ordered categories C_1 (worst) .. C_p (best) and the p−1 limit profiles between them.
///
/// Profiles are stored column-wise: `base[criterion][k]` is b_{k+1} on that
/// criterion. A sector override replaces whole columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileScheme {
    pub categories: Vec<String>,
    pub base: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<String, BTreeMap<String, Vec<f64>>>,
}

impl ProfileScheme {
    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    pub fn profile_count(&self) -> usize {
        self.categories.len().saturating_sub(1)
    }

    /// Profile column for a criterion, honouring the sector override if any.
    pub fn column(&self, criterion: &str, sector: Option<&str>) -> Option<&[f64]> {
        sector
            .and_then(|s| self.overrides.get(s))
            .and_then(|cols| cols.get(criterion))
            .or_else(|| self.base.get(criterion))
            .map(Vec::as_slice)
    }

    /// Row-major `(p−1) × n` profile matrix in criterion order.
    pub fn matrix(&self, criteria: &[CriterionSpec], sector: Option<&str>) -> Result<Vec<Vec<f64>>> {
        let rows = self.profile_count();
        let mut out = vec![Vec::with_capacity(criteria.len()); rows];
        for c in criteria {
            let col = self
                .column(&c.id, sector)
                .ok_or_else(|| Error::config(format!("no profile column for criterion `{}`", c.id)))?;
            if col.len() != rows {
                return Err(Error::config(format!(
                    "profile column `{}` has {} values, expected {rows}",
                    c.id,
                    col.len()
                )));
            }
            for (row, &v) in out.iter_mut().zip(col) {
                row.push(v);
            }
        }
        Ok(out)
    }
}

/// Range of the cutting level λ. `lo == hi` fixes λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    pub lo: f64,
    pub hi: f64,
}

impl LambdaSpec {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let spec = Self { lo, hi };
        spec.check()?;
        Ok(spec)
    }

    pub fn fixed(lambda: f64) -> Result<Self> {
        Self::new(lambda, lambda)
    }

    pub fn check(&self) -> Result<()> {
        if !(0.5 <= self.lo && self.lo <= self.hi && self.hi <= 1.0) {
            return Err(Error::config(format!(
                "lambda range [{}, {}] must satisfy 0.5 <= lo <= hi <= 1",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn is_fixed(&self) -> bool {
        self.lo == self.hi
    }
}

impl Default for LambdaSpec {
    fn default() -> Self {
        Self { lo: 0.65, hi: 0.85 }
    }
}

/// Criteria, alternatives and profiles: the data the sorting kernel consumes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    pub criteria: Vec<CriterionSpec>,
    pub alternatives: Vec<Alternative>,
    pub profiles: ProfileScheme,
}

impl Model {
    pub fn criterion_index(&self, id: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c.id == id)
    }

    pub fn alternative_index(&self, id: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a.id == id)
    }

    pub fn category_count(&self) -> usize {
        self.profiles.category_count()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_project(&self.criteria, &self.alternatives, &self.profiles)
    }

    /// `true` when every evaluation is a point.
    pub fn is_point_valued(&self) -> bool {
        self.alternatives
            .iter()
            .all(|a| a.evaluations.values().all(Evaluation::is_point))
    }

    /// Evaluations aligned to criterion order, one row per alternative.
    pub fn performance_table(&self) -> Result<Vec<Vec<Evaluation>>> {
        self.alternatives
            .iter()
            .map(|a| {
                self.criteria
                    .iter()
                    .map(|c| {
                        a.evaluations.get(&c.id).copied().ok_or_else(|| {
                            Error::config(format!("alternative `{}` has no evaluation on `{}`", a.id, c.id))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Swaps the direction of one criterion and negates every value recorded on it.
    ///
    /// Applying this twice to the same criterion returns the original model.
    pub fn flip_criterion(&mut self, id: &str) {
        let Some(c) = self.criteria.iter_mut().find(|c| c.id == id) else {
            return;
        };
        c.direction = c.direction.flipped();
        if let Scale::Ordinal { min, max } = c.scale {
            c.scale = Scale::Ordinal { min: -max, max: -min };
        }
        for alt in &mut self.alternatives {
            if let Some(e) = alt.evaluations.get_mut(id) {
                *e = e.flipped();
            }
        }
        let negate = |col: &mut Vec<f64>| col.iter_mut().for_each(|v| *v = -*v);
        if let Some(col) = self.profiles.base.get_mut(id) {
            negate(col);
        }
        for cols in self.profiles.overrides.values_mut() {
            if let Some(col) = cols.get_mut(id) {
                negate(col);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Threshold,
    Scale,
    Duplicate,
    MissingEvaluation,
    UnknownCriterion,
    IntervalOrder,
    OutOfScale,
    NonInteger,
    Categories,
    ProfileShape,
    Dominance,
    Override,
    Lambda,
    Weights,
    Deck,
    Schema,
    Run,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Where the violation sits, e.g. `alternative A / criterion g2_3`.
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: ViolationKind, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            location: location.into(),
            message: message.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  [{:?}] {}: {}", v.kind, v.location, v.message)?;
        }
        Ok(())
    }
}

fn is_integer(x: f64) -> bool {
    x.is_finite() && x.fract() == 0.0
}

/// Checks every mechanical invariant of criteria, alternatives and profiles.
///
/// Returns an empty report iff the data is consistent. Whether the criteria
/// form a sensible family is left to the analyst.
pub fn validate_project(
    criteria: &[CriterionSpec],
    alternatives: &[Alternative],
    scheme: &ProfileScheme,
) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut seen = BTreeSet::new();
    for c in criteria {
        let loc = format!("criterion {}", c.id);
        if !seen.insert(c.id.as_str()) {
            report.push(ViolationKind::Duplicate, &loc, "criterion id appears more than once");
        }
        if !(c.q.is_finite() && c.p.is_finite() && 0.0 <= c.q && c.q <= c.p) {
            report.push(
                ViolationKind::Threshold,
                &loc,
                format!("thresholds must satisfy 0 <= q <= p (q = {}, p = {})", c.q, c.p),
            );
        }
        if let Some(v) = c.veto {
            if !(v.is_finite() && v >= c.p) {
                report.push(
                    ViolationKind::Threshold,
                    &loc,
                    format!("veto threshold {v} must be >= p = {}", c.p),
                );
            }
        }
        if let Scale::Ordinal { min, max } = c.scale {
            if min >= max {
                report.push(
                    ViolationKind::Scale,
                    &loc,
                    format!("ordinal scale bounds {min}..{max} need min < max"),
                );
            }
        }
    }
    let by_id: BTreeMap<&str, &CriterionSpec> = criteria.iter().map(|c| (c.id.as_str(), c)).collect();

    let mut alt_ids = BTreeSet::new();
    for alt in alternatives {
        let loc = format!("alternative {}", alt.id);
        if !alt_ids.insert(alt.id.as_str()) {
            report.push(ViolationKind::Duplicate, &loc, "alternative id appears more than once");
        }
        for c in criteria {
            if !alt.evaluations.contains_key(&c.id) {
                report.push(
                    ViolationKind::MissingEvaluation,
                    format!("{loc} / criterion {}", c.id),
                    "no evaluation",
                );
            }
        }
        for (cid, e) in &alt.evaluations {
            let cloc = format!("{loc} / criterion {cid}");
            let Some(c) = by_id.get(cid.as_str()) else {
                report.push(
                    ViolationKind::UnknownCriterion,
                    cloc,
                    "evaluation on an undeclared criterion",
                );
                continue;
            };
            if !(e.lo.is_finite() && e.hi.is_finite() && e.lo <= e.hi) {
                report.push(
                    ViolationKind::IntervalOrder,
                    &cloc,
                    format!("evaluation [{}, {}] needs finite lo <= hi", e.lo, e.hi),
                );
                continue;
            }
            if let Scale::Ordinal { min, max } = c.scale {
                if !is_integer(e.lo) || !is_integer(e.hi) {
                    report.push(ViolationKind::NonInteger, &cloc, "ordinal evaluation must be integer");
                }
                if e.lo < min as f64 || e.hi > max as f64 {
                    report.push(
                        ViolationKind::OutOfScale,
                        &cloc,
                        format!("evaluation [{}, {}] outside scale {min}..{max}", e.lo, e.hi),
                    );
                }
            }
        }
    }

    let profiles = scheme.profile_count();
    if scheme.categories.len() < 2 {
        report.push(
            ViolationKind::Categories,
            "profiles",
            "at least two categories are required",
        );
    }
    for c in criteria {
        match scheme.base.get(&c.id) {
            None => report.push(
                ViolationKind::ProfileShape,
                format!("profiles / criterion {}", c.id),
                "no base profile column",
            ),
            Some(col) => check_column(&mut report, c, col, profiles, &format!("profiles / criterion {}", c.id)),
        }
    }
    for cid in scheme.base.keys() {
        if !by_id.contains_key(cid.as_str()) {
            report.push(
                ViolationKind::UnknownCriterion,
                format!("profiles / criterion {cid}"),
                "profile column for an undeclared criterion",
            );
        }
    }
    for (sector, cols) in &scheme.overrides {
        for (cid, col) in cols {
            let loc = format!("profiles / sector {sector} / criterion {cid}");
            match by_id.get(cid.as_str()) {
                None => report.push(
                    ViolationKind::UnknownCriterion,
                    loc,
                    "override for an undeclared criterion",
                ),
                Some(c) if c.scale.is_ordinal() => report.push(
                    ViolationKind::Override,
                    loc,
                    "qualitative (ordinal) profile columns cannot be overridden per sector",
                ),
                Some(c) => check_column(&mut report, c, col, profiles, &loc),
            }
        }
    }
    report
}

fn check_column(report: &mut ValidationReport, c: &CriterionSpec, col: &[f64], profiles: usize, loc: &str) {
    if col.len() != profiles {
        report.push(
            ViolationKind::ProfileShape,
            loc,
            format!("{} profile values, expected {profiles}", col.len()),
        );
        return;
    }
    if col.iter().any(|v| !v.is_finite()) {
        report.push(ViolationKind::ProfileShape, loc, "non-finite profile value");
        return;
    }
    for k in 1..col.len() {
        if !c.direction.at_least_as_good(col[k], col[k - 1]) {
            report.push(
                ViolationKind::Dominance,
                loc,
                format!(
                    "b{} = {} is worse than b{} = {} under {:?} direction",
                    k + 1,
                    col[k],
                    k,
                    col[k - 1],
                    c.direction
                ),
            );
        }
    }
}

/// Validates a stand-alone weight vector against the criteria list.
pub fn check_weights(criteria: &[CriterionSpec], weights: &BTreeMap<String, f64>, loc: &str) -> ValidationReport {
    let mut report = ValidationReport::default();
    for c in criteria {
        if !weights.contains_key(&c.id) {
            report.push(ViolationKind::Weights, loc, format!("no weight for criterion {}", c.id));
        }
    }
    for (id, &w) in weights {
        if !criteria.iter().any(|c| &c.id == id) {
            report.push(
                ViolationKind::Weights,
                loc,
                format!("weight for undeclared criterion {id}"),
            );
        }
        if !(w.is_finite() && w >= 0.0) {
            report.push(
                ViolationKind::Weights,
                loc,
                format!("weight {w} on {id} must be finite and >= 0"),
            );
        }
    }
    let sum: f64 = weights.values().sum();
    if (sum - 1.0).abs() > crate::WEIGHT_SUM_TOLERANCE {
        report.push(ViolationKind::Weights, loc, format!("weights sum to {sum}, expected 1"));
    }
    report
}
