//! SMAA-TRI: Monte Carlo acceptability analysis around the ELECTRE-TRI kernel.
//!
//! Each draw samples criterion weights, a cutting level λ and (optionally)
//! interval evaluations, assigns every alternative, and counts the category it
//! lands in. The acceptability π_i^k is the share of draws that put
//! alternative i in category k.
//!
//! Draw `d` uses its own ChaCha8 stream `d` under the run seed, so the
//! result does not depend on how draws are split across worker threads.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::electre::{self, AssignmentRule, LambdaInterval, OutrankingScores};
use crate::error::{Error, Result};
use crate::model::{CriterionSpec, Evaluation, LambdaSpec, Model, Scale};
use crate::weights::WeightVector;

pub const DEFAULT_DRAWS: u64 = 10_000;
pub const DEFAULT_REJECTION_BUDGET: u32 = 10_000;

/// Per-criterion `[lo, hi]` weight bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Bound {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for Bound {
    fn from([lo, hi]: [f64; 2]) -> Self {
        Self { lo, hi }
    }
}

impl From<Bound> for [f64; 2] {
    fn from(b: Bound) -> Self {
        [b.lo, b.hi]
    }
}

pub type WeightBounds = BTreeMap<String, Bound>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightSampler {
    Fixed { weights: WeightVector },
    SimplexUniform,
    Interval { bounds: WeightBounds },
}

/// A sampler bound to a criterion order.
#[derive(Debug, Clone)]
pub struct PreparedSampler {
    kind: PreparedKind,
    budget: u32,
}

#[derive(Debug, Clone)]
enum PreparedKind {
    Fixed(Vec<f64>),
    Simplex(usize),
    Interval {
        lo: Vec<f64>,
        hi: Vec<f64>,
        slack: f64,
        names: Vec<String>,
    },
}

const BOUND_TOLERANCE: f64 = 1e-9;

impl WeightSampler {
    pub fn prepare(&self, criteria: &[CriterionSpec], budget: u32) -> Result<PreparedSampler> {
        let kind = match self {
            WeightSampler::Fixed { weights } => {
                let w = weights.aligned(criteria)?;
                electre::check_weight_vector(&w)?;
                PreparedKind::Fixed(w)
            }
            WeightSampler::SimplexUniform => {
                if criteria.is_empty() {
                    return Err(Error::config("cannot sample weights for zero criteria"));
                }
                PreparedKind::Simplex(criteria.len())
            }
            WeightSampler::Interval { bounds } => {
                let mut lo = Vec::with_capacity(criteria.len());
                let mut hi = Vec::with_capacity(criteria.len());
                for c in criteria {
                    let b = bounds
                        .get(&c.id)
                        .ok_or_else(|| Error::config(format!("no weight bounds for criterion `{}`", c.id)))?;
                    if !(0.0 <= b.lo && b.lo <= b.hi && b.hi <= 1.0) {
                        return Err(Error::config(format!(
                            "weight bounds [{}, {}] on `{}` must satisfy 0 <= lo <= hi <= 1",
                            b.lo, b.hi, c.id
                        )));
                    }
                    lo.push(b.lo);
                    hi.push(b.hi);
                }
                let sum_lo: f64 = lo.iter().sum();
                let sum_hi: f64 = hi.iter().sum();
                if sum_lo > 1.0 + BOUND_TOLERANCE || sum_hi < 1.0 - BOUND_TOLERANCE {
                    return Err(Error::config(format!(
                        "empty weight region: lower bounds sum to {sum_lo}, upper bounds sum to {sum_hi}"
                    )));
                }
                PreparedKind::Interval {
                    slack: (1.0 - sum_lo).max(0.0),
                    lo,
                    hi,
                    names: criteria.iter().map(|c| c.id.clone()).collect(),
                }
            }
        };
        Ok(PreparedSampler { kind, budget })
    }
}

impl PreparedSampler {
    pub fn is_fixed(&self) -> bool {
        matches!(self.kind, PreparedKind::Fixed(_))
    }

    /// Draws one weight vector in criterion order into `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) -> Result<()> {
        out.clear();
        match &self.kind {
            PreparedKind::Fixed(w) => out.extend_from_slice(w),
            PreparedKind::Simplex(n) => simplex_uniform(rng, *n, out),
            PreparedKind::Interval { lo, hi, slack, names } => {
                if *slack <= 1e-12 {
                    out.extend_from_slice(lo);
                    return Ok(());
                }
                // Uniform on {w >= lo, Σw = 1} is lo + slack · (uniform simplex point);
                // rejecting points above `hi` leaves the uniform law on the box ∩ simplex.
                for _ in 0..self.budget {
                    simplex_uniform(rng, lo.len(), out);
                    let mut inside = true;
                    for ((w, &l), &h) in out.iter_mut().zip(lo).zip(hi) {
                        *w = l + slack * *w;
                        inside &= *w <= h;
                    }
                    if inside {
                        debug_assert!(out.iter().zip(lo).zip(hi).all(|((w, l), h)| l <= w && w <= h));
                        debug_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                        return Ok(());
                    }
                }
                let desc = names
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .map(|(n, (l, h))| format!("{n}: [{l}, {h}]"))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::config(format!(
                    "weight region appears empty: {} rejection attempts exhausted for bounds {desc}",
                    self.budget
                )));
            }
        }
        Ok(())
    }
}

fn simplex_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let mut total = 0.0;
    for _ in 0..n {
        let x: f64 = Exp1.sample(rng);
        total += x;
        out.push(x);
    }
    out.iter_mut().for_each(|x| *x /= total);
}

/// Draws one weight vector from `sampler`.
pub fn sample_weights<R: Rng + ?Sized>(
    sampler: &WeightSampler,
    criteria: &[CriterionSpec],
    rng: &mut R,
) -> Result<WeightVector> {
    let prepared = sampler.prepare(criteria, DEFAULT_REJECTION_BUDGET)?;
    let mut out = Vec::with_capacity(criteria.len());
    prepared.sample_into(rng, &mut out)?;
    Ok(WeightVector::from_aligned(criteria, &out))
}

/// Draws a concrete value from an evaluation: integers uniformly on ordinal
/// intervals, reals uniformly on ratio intervals, points verbatim.
pub fn sample_evaluation<R: Rng + ?Sized>(eval: &Evaluation, scale: &Scale, rng: &mut R) -> f64 {
    if eval.is_point() {
        return eval.lo;
    }
    match scale {
        Scale::Ordinal { .. } => rng.random_range(eval.lo as i64..=eval.hi as i64) as f64,
        Scale::Ratio => rng.random_range(eval.lo..=eval.hi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub draws: u64,
    pub seed: u64,
    pub lambda: LambdaSpec,
    pub rule: AssignmentRule,
    pub evaluation_sampling: bool,
    /// Highest category still counted as high risk, for type I/II error figures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_cutoff: Option<usize>,
    #[serde(default = "default_budget")]
    pub rejection_budget: u32,
    /// Worker threads; `None` uses the available parallelism. Never changes results.
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
}

fn default_budget() -> u32 {
    DEFAULT_REJECTION_BUDGET
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            draws: DEFAULT_DRAWS,
            seed: 0,
            lambda: LambdaSpec::default(),
            rule: AssignmentRule::default(),
            evaluation_sampling: false,
            risk_cutoff: None,
            rejection_budget: DEFAULT_REJECTION_BUDGET,
            workers: None,
        }
    }
}

impl RunConfig {
    pub fn check(&self, categories: usize) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::config("draws must be at least 1"));
        }
        self.lambda.check()?;
        if let Some(cutoff) = self.risk_cutoff {
            check_cutoff(cutoff, categories)?;
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers must be at least 1"));
        }
        Ok(())
    }

    fn worker_count(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get))
            .max(1)
    }
}

fn check_cutoff(cutoff: usize, categories: usize) -> Result<()> {
    if cutoff == 0 || cutoff >= categories {
        return Err(Error::config(format!(
            "risk cutoff {cutoff} must lie in 1..={}",
            categories.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Acceptability of one alternative across the categories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeAcceptability {
    pub alternative: String,
    pub counts: Vec<u64>,
    /// π^1..π^p as fractions.
    pub pi: Vec<f64>,
    /// √(π(1−π)/draws) per cell.
    pub std_err: Vec<f64>,
    /// 1-based modal category; ties go to the riskier category.
    pub modal: usize,
    pub type_i: Option<f64>,
    pub type_ii: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityReport {
    /// Decision maker id, `group`, or a caller-chosen tag.
    pub label: String,
    pub categories: Vec<String>,
    pub config: RunConfig,
    pub rows: Vec<AlternativeAcceptability>,
}

impl AcceptabilityReport {
    pub fn row(&self, alternative: &str) -> Option<&AlternativeAcceptability> {
        self.rows.iter().find(|r| r.alternative == alternative)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Probability mass on the wrong side of the risk cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRates {
    pub modal: usize,
    /// Low-risk alternative classified as high risk; `None` when the modal class is high risk.
    pub type_i: Option<f64>,
    /// High-risk alternative classified as low risk; `None` when the modal class is low risk.
    pub type_ii: Option<f64>,
}

fn modal_category(pi: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in pi.iter().enumerate() {
        if v > pi[best] {
            best = k;
        }
    }
    best + 1
}

/// Type I/II error figures for one report row. Categories `1..=cutoff` are high risk.
pub fn error_rates(pi: &[f64], cutoff: usize) -> Result<ErrorRates> {
    check_cutoff(cutoff, pi.len())?;
    let modal = modal_category(pi);
    let high: f64 = pi[..cutoff].iter().sum();
    let low: f64 = pi[cutoff..].iter().sum();
    Ok(if modal > cutoff {
        ErrorRates {
            modal,
            type_i: Some(high),
            type_ii: None,
        }
    } else {
        ErrorRates {
            modal,
            type_i: None,
            type_ii: Some(low),
        }
    })
}

/// Componentwise min/max of several decision makers' weights.
pub fn interval_weights_from_dms(dms: &[WeightVector]) -> Result<WeightBounds> {
    let (first, rest) = dms
        .split_first()
        .ok_or_else(|| Error::config("at least one weight vector is required"))?;
    let mut bounds: WeightBounds = first
        .0
        .iter()
        .map(|(k, &w)| (k.clone(), Bound { lo: w, hi: w }))
        .collect();
    for dm in rest {
        if dm.0.len() != bounds.len() || dm.0.keys().any(|k| !bounds.contains_key(k)) {
            return Err(Error::config("weight vectors cover different criteria"));
        }
        for (k, &w) in &dm.0 {
            let b = bounds.get_mut(k).expect("checked above");
            b.lo = b.lo.min(w);
            b.hi = b.hi.max(w);
        }
    }
    Ok(bounds)
}

/// Model data laid out for the per-draw loop.
struct Prepared<'a> {
    criteria: &'a [CriterionSpec],
    table: Vec<Vec<Evaluation>>,
    profiles: Vec<Vec<Vec<f64>>>,
    needs_sampling: bool,
}

impl<'a> Prepared<'a> {
    fn new(model: &'a Model) -> Result<Self> {
        let table = model.performance_table()?;
        let profiles = model
            .alternatives
            .iter()
            .map(|a| model.profiles.matrix(&model.criteria, a.sector.as_deref()))
            .collect::<Result<Vec<_>>>()?;
        let needs_sampling = table.iter().flatten().any(|e| !e.is_point());
        Ok(Self {
            criteria: &model.criteria,
            table,
            profiles,
            needs_sampling,
        })
    }

    fn point_rows(&self) -> Vec<Vec<f64>> {
        self.table
            .iter()
            .map(|row| row.iter().map(|e| e.lo).collect())
            .collect()
    }
}

/// Runs the simulation and returns per-alternative category acceptabilities.
///
/// Identical `(model, sampler, config)` give bit-identical reports for any worker count.
pub fn run_smaa(model: &Model, sampler: &WeightSampler, config: &RunConfig) -> Result<AcceptabilityReport> {
    let categories = model.category_count();
    config.check(categories)?;
    let prepared = Prepared::new(model)?;
    if prepared.needs_sampling && !config.evaluation_sampling {
        return Err(Error::config(
            "the model has interval evaluations; enable evaluation sampling to run it",
        ));
    }
    let weights = sampler.prepare(&model.criteria, config.rejection_budget)?;
    let alternatives = model.alternatives.len();

    let workers = (config.worker_count() as u64).min(config.draws).max(1);
    let chunk = config.draws.div_ceil(workers);
    let base = ChaCha8Rng::seed_from_u64(config.seed);

    let partials: Vec<Result<Vec<u64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let start = w * chunk;
                let end = ((w + 1) * chunk).min(config.draws);
                let prepared = &prepared;
                let weights = &weights;
                let base = &base;
                scope.spawn(move || simulate(prepared, weights, config, base, start..end, categories))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .collect()
    });

    let mut counts = vec![0u64; alternatives * categories];
    for partial in partials {
        for (total, c) in counts.iter_mut().zip(partial?) {
            *total += c;
        }
    }

    let rows = model
        .alternatives
        .iter()
        .enumerate()
        .map(|(i, alt)| {
            let row = counts[i * categories..(i + 1) * categories].to_vec();
            build_row(&alt.id, row, config.draws, config.risk_cutoff)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AcceptabilityReport {
        label: String::new(),
        categories: model.profiles.categories.clone(),
        config: RunConfig {
            workers: None,
            ..*config
        },
        rows,
    })
}

fn build_row(id: &str, counts: Vec<u64>, draws: u64, cutoff: Option<usize>) -> Result<AlternativeAcceptability> {
    let n = draws as f64;
    let pi: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let std_err = pi.iter().map(|&p| (p * (1.0 - p) / n).sqrt()).collect();
    let modal = modal_category(&pi);
    let (type_i, type_ii) = match cutoff {
        Some(c) => {
            let e = error_rates(&pi, c)?;
            (e.type_i, e.type_ii)
        }
        None => (None, None),
    };
    Ok(AlternativeAcceptability {
        alternative: id.to_string(),
        counts,
        pi,
        std_err,
        modal,
        type_i,
        type_ii,
    })
}

fn simulate(
    prepared: &Prepared<'_>,
    sampler: &PreparedSampler,
    config: &RunConfig,
    base: &ChaCha8Rng,
    draws: std::ops::Range<u64>,
    categories: usize,
) -> Result<Vec<u64>> {
    let criteria = prepared.criteria;
    let mut counts = vec![0u64; prepared.table.len() * categories];
    let mut w = Vec::with_capacity(criteria.len());
    let mut rows = prepared.point_rows();
    let profiles_n = categories - 1;
    let mut up = vec![0.0; profiles_n];
    let mut down = vec![0.0; profiles_n];

    for draw in draws {
        let mut rng = base.clone();
        rng.set_stream(draw);
        rng.set_word_pos(0);

        sampler.sample_into(&mut rng, &mut w)?;
        let lambda = if config.lambda.is_fixed() {
            config.lambda.lo
        } else {
            rng.random_range(config.lambda.lo..config.lambda.hi)
        };
        if prepared.needs_sampling {
            for (row, evals) in rows.iter_mut().zip(&prepared.table) {
                for ((x, e), c) in row.iter_mut().zip(evals).zip(criteria) {
                    *x = sample_evaluation(e, &c.scale, &mut rng);
                }
            }
        }
        for (i, (row, profiles)) in rows.iter().zip(&prepared.profiles).enumerate() {
            for (k, b) in profiles.iter().enumerate() {
                up[k] = electre::outranking_credibility(row, b, criteria, &w);
                down[k] = electre::outranking_credibility(b, row, criteria, &w);
            }
            let cat = electre::assign_unchecked(&up, &down, lambda, config.rule);
            counts[i * categories + cat - 1] += 1;
        }
    }
    Ok(counts)
}

/// Credibility scores of every alternative under fixed weights and point evaluations.
pub fn outranking_table(model: &Model, weights: &WeightVector) -> Result<Vec<OutrankingScores>> {
    let prepared = Prepared::new(model)?;
    if prepared.needs_sampling {
        return Err(Error::Unsupported(
            "credibility scores need point evaluations; the model has intervals".into(),
        ));
    }
    let w = weights.aligned(&model.criteria)?;
    electre::check_weight_vector(&w)?;
    Ok(prepared
        .point_rows()
        .iter()
        .zip(&prepared.profiles)
        .map(|(row, profiles)| OutrankingScores::compute(row, profiles, &model.criteria, &w))
        .collect())
}

/// λ step function of every alternative under fixed weights.
pub fn breakpoint_table(
    model: &Model,
    weights: &WeightVector,
    rule: AssignmentRule,
) -> Result<Vec<Vec<LambdaInterval>>> {
    Ok(outranking_table(model, weights)?
        .iter()
        .map(|s| electre::lambda_breakpoints(s, rule))
        .collect())
}

/// Exact acceptabilities for fixed weights and point evaluations.
///
/// The assignment is a step function of λ, so π^k is the share of
/// `[lambda.lo, lambda.hi]` covered by the intervals assigned to category k.
pub fn exact_acceptability(
    model: &Model,
    weights: &WeightVector,
    lambda: LambdaSpec,
    rule: AssignmentRule,
) -> Result<Vec<Vec<f64>>> {
    lambda.check()?;
    let categories = model.category_count();
    let scores = outranking_table(model, weights)?;
    Ok(scores.iter().map(|s| exact_row(s, lambda, rule, categories)).collect())
}

pub(crate) fn exact_row(
    scores: &OutrankingScores,
    lambda: LambdaSpec,
    rule: AssignmentRule,
    categories: usize,
) -> Vec<f64> {
    let mut pi = vec![0.0; categories];
    if lambda.is_fixed() {
        let cat = electre::assign_unchecked(&scores.sigma_up, &scores.sigma_down, lambda.lo, rule);
        pi[cat - 1] = 1.0;
        return pi;
    }
    let width = lambda.hi - lambda.lo;
    for iv in electre::lambda_breakpoints(scores, rule) {
        pi[iv.category - 1] += iv.overlap(lambda.lo, lambda.hi) / width;
    }
    pi
}
