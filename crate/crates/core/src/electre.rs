//! ELECTRE-TRI kernel: partial indices, credibility, λ-cut and the assignment rules.
//!
//! All formulas are stated for gain criteria. Cost criteria are mapped onto
//! the gain axis by negating both the alternative and the profile value
//! before any threshold is applied.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CriterionSpec, Direction};

/// Partial concordance c_j(a, b) of "a is at least as good as b" on one criterion.
///
/// With `q == p` the interpolation branch is empty and the index is a step at `b − q`.
pub fn partial_concordance(a: f64, b: f64, q: f64, p: f64, direction: Direction) -> f64 {
    let a = direction.orient(a);
    let b = direction.orient(b);
    if a >= b - q {
        1.0
    } else if a <= b - p {
        0.0
    } else {
        (a - b + p) / (p - q)
    }
}

/// Partial discordance d_j(a, b). Always 0 when the criterion has no veto threshold.
pub fn partial_discordance(a: f64, b: f64, p: f64, veto: Option<f64>, direction: Direction) -> f64 {
    let Some(v) = veto else {
        return 0.0;
    };
    let a = direction.orient(a);
    let b = direction.orient(b);
    if a >= b - p {
        0.0
    } else if a <= b - v {
        1.0
    } else {
        (b - a - p) / (v - p)
    }
}

/// Weighted concordance C(a, b) = Σ w_j c_j(a_j, b_j).
///
/// Fails when the weights are negative or do not sum to one.
pub fn concordance(a: &[f64], b: &[f64], criteria: &[CriterionSpec], weights: &[f64]) -> Result<f64> {
    check_shapes(a, b, criteria, weights)?;
    check_weight_vector(weights)?;
    Ok(concordance_unchecked(a, b, criteria, weights))
}

// Divided by Σw so that unanimous concordance is exactly 1 even when the
// weights sum to 1 only up to rounding; otherwise λ = 1 would split off a sliver.
pub(crate) fn concordance_unchecked(a: &[f64], b: &[f64], criteria: &[CriterionSpec], weights: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((c, (&x, &y)), &w) in criteria.iter().zip(a.iter().zip(b)).zip(weights) {
        num += w * partial_concordance(x, y, c.q, c.p, c.direction);
        den += w;
    }
    (num / den).min(1.0)
}

/// σ = C · Π_{j: d_j > C} (1 − d_j) / (1 − C).
pub fn credibility(concordance: f64, discordances: &[f64]) -> f64 {
    let mut sigma = concordance;
    for &d in discordances {
        // d <= 1, so C == 1 never enters this branch
        if d > concordance {
            sigma *= (1.0 - d) / (1.0 - concordance);
        }
    }
    sigma
}

/// Credibility σ(a, b) of the outranking "a S b" for two performance rows.
pub fn outranking_credibility(a: &[f64], b: &[f64], criteria: &[CriterionSpec], weights: &[f64]) -> f64 {
    let c = concordance_unchecked(a, b, criteria, weights);
    let mut sigma = c;
    for (crit, (&x, &y)) in criteria.iter().zip(a.iter().zip(b)) {
        let d = partial_discordance(x, y, crit.p, crit.veto, crit.direction);
        if d > c {
            sigma *= (1.0 - d) / (1.0 - c);
        }
    }
    sigma
}

fn check_shapes(a: &[f64], b: &[f64], criteria: &[CriterionSpec], weights: &[f64]) -> Result<()> {
    let n = criteria.len();
    if a.len() != n || b.len() != n || weights.len() != n {
        return Err(Error::config(format!(
            "row lengths {}/{}/{} do not match {n} criteria",
            a.len(),
            b.len(),
            weights.len()
        )));
    }
    Ok(())
}

pub(crate) fn check_weight_vector(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::config("weights must be finite and nonnegative"));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > crate::WEIGHT_SUM_TOLERANCE {
        return Err(Error::config(format!("weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Credibilities of an alternative against the p−1 limit profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutrankingScores {
    /// σ(a, b_k), k = 1..p−1.
    pub sigma_up: Vec<f64>,
    /// σ(b_k, a), k = 1..p−1.
    pub sigma_down: Vec<f64>,
}

impl OutrankingScores {
    pub fn new(sigma_up: Vec<f64>, sigma_down: Vec<f64>) -> Self {
        debug_assert_eq!(sigma_up.len(), sigma_down.len());
        Self { sigma_up, sigma_down }
    }

    /// Computes both credibility vectors for one alternative row.
    pub fn compute(alternative: &[f64], profiles: &[Vec<f64>], criteria: &[CriterionSpec], weights: &[f64]) -> Self {
        let sigma_up = profiles
            .iter()
            .map(|b| outranking_credibility(alternative, b, criteria, weights))
            .collect();
        let sigma_down = profiles
            .iter()
            .map(|b| outranking_credibility(b, alternative, criteria, weights))
            .collect();
        Self { sigma_up, sigma_down }
    }

    pub fn category_count(&self) -> usize {
        self.sigma_up.len() + 1
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssignmentRule {
    /// Top-down scan; first profile with σ(a, b_k) ≥ λ wins.
    PessimisticStandard,
    /// Top-down scan requiring σ(a, b_k) ≥ λ and σ(b_k, a) < λ.
    #[default]
    PessimisticPaper,
    /// Bottom-up scan; first profile with σ(b_k, a) ≥ λ and σ(a, b_k) < λ gives C_k.
    Optimistic,
}

impl AssignmentRule {
    pub const ALL: [AssignmentRule; 3] = [
        AssignmentRule::PessimisticStandard,
        AssignmentRule::PessimisticPaper,
        AssignmentRule::Optimistic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PessimisticStandard => "pessimistic-standard",
            Self::PessimisticPaper => "pessimistic-paper",
            Self::Optimistic => "optimistic",
        }
    }
}

impl std::fmt::Display for AssignmentRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AssignmentRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pessimistic-standard" | "standard" => Ok(Self::PessimisticStandard),
            "pessimistic-paper" | "pessimistic" => Ok(Self::PessimisticPaper),
            "optimistic" => Ok(Self::Optimistic),
            other => Err(Error::config(format!("unknown assignment rule `{other}`"))),
        }
    }
}

/// Assigns an alternative to a category index in `1..=p`.
pub fn assign(scores: &OutrankingScores, lambda: f64, rule: AssignmentRule) -> Result<usize> {
    if !(0.5..=1.0).contains(&lambda) {
        return Err(Error::config(format!("cutting level {lambda} outside [0.5, 1]")));
    }
    Ok(assign_unchecked(&scores.sigma_up, &scores.sigma_down, lambda, rule))
}

pub(crate) fn assign_unchecked(up: &[f64], down: &[f64], lambda: f64, rule: AssignmentRule) -> usize {
    let profiles = up.len();
    match rule {
        AssignmentRule::PessimisticStandard => (0..profiles).rev().find(|&k| up[k] >= lambda).map_or(1, |k| k + 2),
        AssignmentRule::PessimisticPaper => (0..profiles)
            .rev()
            .find(|&k| up[k] >= lambda && down[k] < lambda)
            .map_or(1, |k| k + 2),
        AssignmentRule::Optimistic => (0..profiles)
            .find(|&k| down[k] >= lambda && up[k] < lambda)
            .map_or(profiles + 1, |k| k + 1),
    }
}

/// A maximal λ range of constant assignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub category: usize,
}

impl LambdaInterval {
    pub fn contains(&self, lambda: f64) -> bool {
        (lambda > self.lo || (self.lo_closed && lambda == self.lo))
            && (lambda < self.hi || (self.hi_closed && lambda == self.hi))
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Length of the overlap with `[lo, hi]`.
    pub fn overlap(&self, lo: f64, hi: f64) -> f64 {
        (self.hi.min(hi) - self.lo.max(lo)).max(0.0)
    }
}

/// Partitions [0.5, 1] into maximal intervals of constant assignment.
///
/// The assignment only changes where λ crosses one of the 2(p−1) credibility
/// values, so evaluating each breakpoint and one interior point of every gap
/// between consecutive breakpoints determines the whole step function.
pub fn lambda_breakpoints(scores: &OutrankingScores, rule: AssignmentRule) -> Vec<LambdaInterval> {
    let mut cuts: Vec<f64> = scores
        .sigma_up
        .iter()
        .chain(&scores.sigma_down)
        .copied()
        .filter(|&s| s > 0.5 && s < 1.0)
        .collect();
    cuts.push(0.5);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let at = |lambda: f64| assign_unchecked(&scores.sigma_up, &scores.sigma_down, lambda, rule);
    let mut out: Vec<LambdaInterval> = Vec::new();
    let mut push = |seg: LambdaInterval| match out.last_mut() {
        Some(last) if last.category == seg.category => {
            last.hi = seg.hi;
            last.hi_closed = seg.hi_closed;
        }
        _ => out.push(seg),
    };
    for (i, &x) in cuts.iter().enumerate() {
        push(LambdaInterval {
            lo: x,
            hi: x,
            lo_closed: true,
            hi_closed: true,
            category: at(x),
        });
        if let Some(&y) = cuts.get(i + 1) {
            push(LambdaInterval {
                lo: x,
                hi: y,
                lo_closed: false,
                hi_closed: false,
                category: at(0.5 * (x + y)),
            });
        }
    }
    out
}

/// Shape of the assignment as λ grows, ignoring single-point intervals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragility {
    /// The category sequence changes direction (goes up and down).
    pub non_monotone: bool,
    /// Two adjacent intervals differ by more than one class.
    pub non_consecutive: bool,
}

impl Fragility {
    pub fn is_fragile(&self) -> bool {
        self.non_monotone || self.non_consecutive
    }
}

pub fn fragility(intervals: &[LambdaInterval]) -> Fragility {
    let mut seq: Vec<usize> = intervals
        .iter()
        .filter(|i| i.length() > 0.0)
        .map(|i| i.category)
        .collect();
    seq.dedup();
    let steps: Vec<i64> = seq.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
    Fragility {
        non_monotone: steps.iter().any(|&s| s > 0) && steps.iter().any(|&s| s < 0),
        non_consecutive: steps.iter().any(|s| s.abs() > 1),
    }
}
