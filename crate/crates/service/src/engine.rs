//! Run requests shared by the command line and the HTTP service, so both
//! paths produce identical reports for identical inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use smaatri::electre::{fragility, Fragility, LambdaInterval};
use smaatri::io::{ProjectFile, WeightModel};
use smaatri::model::Evaluation;
use smaatri::smaa::{self, run_smaa, RunConfig, WeightSampler};
use smaatri::{AcceptabilityReport, AssignmentRule, Error, LambdaSpec, Result, WeightVector};

/// Whose weights to run with.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    Dm(String),
    Dms(Vec<String>),
    /// Interval weights spanning every decision maker.
    Group,
    #[default]
    AllDms,
}

/// Optional replacements for the project's run settings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<AssignmentRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation_sampling: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub risk_cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunOverrides {
    pub fn apply(&self, project: &ProjectFile) -> RunConfig {
        let base = project.run_config();
        RunConfig {
            draws: self.draws.unwrap_or(base.draws),
            seed: self.seed.unwrap_or(base.seed),
            lambda: self.lambda.unwrap_or(base.lambda),
            rule: self.rule.unwrap_or(base.rule),
            evaluation_sampling: self.evaluation_sampling.unwrap_or(base.evaluation_sampling),
            risk_cutoff: self.risk_cutoff.or(base.risk_cutoff),
            workers: self.workers,
            ..base
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRequest {
    #[serde(default)]
    pub selection: Selection,
    #[serde(default)]
    pub config: RunOverrides,
}

/// A validated request, ready to execute.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    pub runs: Vec<(String, WeightSampler)>,
    pub config: RunConfig,
}

pub fn prepare(project: &ProjectFile, request: &RunRequest) -> Result<PreparedRun> {
    let config = request.config.apply(project);
    config.check(project.model.category_count())?;
    let dm = |id: &str| Ok((id.to_string(), project.sampler_for(id)?));
    let runs = match &request.selection {
        Selection::Dm(id) => vec![dm(id)?],
        Selection::Dms(ids) => ids.iter().map(|id| dm(id)).collect::<Result<_>>()?,
        Selection::Group => vec![("group".to_string(), project.group_sampler()?)],
        Selection::AllDms => project
            .decision_makers
            .iter()
            .map(|d| dm(&d.id))
            .collect::<Result<_>>()?,
    };
    if runs.is_empty() {
        return Err(Error::Config("the project has no decision makers".into()));
    }
    Ok(PreparedRun { runs, config })
}

pub fn run_prepared(project: &ProjectFile, prepared: &PreparedRun) -> Result<Vec<AcceptabilityReport>> {
    prepared
        .runs
        .iter()
        .map(|(label, sampler)| Ok(run_smaa(&project.model, sampler, &prepared.config)?.with_label(label)))
        .collect()
}

pub fn execute(project: &ProjectFile, request: &RunRequest) -> Result<Vec<AcceptabilityReport>> {
    run_prepared(project, &prepare(project, request)?)
}

pub const WHATIF_DRAW_CAP: u64 = 2_000;

/// Temporary edits applied to a copy of a project.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfPatch {
    /// criterion → veto threshold; `null` removes the veto.
    #[serde(default)]
    pub veto: BTreeMap<String, Option<f64>>,
    /// alternative → criterion → replacement evaluation (number or `[lo, hi]`).
    #[serde(default)]
    pub evaluations: BTreeMap<String, BTreeMap<String, Evaluation>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<AssignmentRule>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    #[serde(default)]
    pub selection: Selection,
    #[serde(default)]
    pub config: RunOverrides,
    #[serde(default)]
    pub patch: WhatIfPatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeBreakpoints {
    pub alternative: String,
    pub intervals: Vec<LambdaInterval>,
    pub fragility: Fragility,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakpointTable {
    pub label: String,
    pub rule: AssignmentRule,
    pub alternatives: Vec<AlternativeBreakpoints>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfResponse {
    pub reports: Vec<AcceptabilityReport>,
    /// Exact λ step functions; only for fixed weights and point evaluations.
    pub breakpoints: Vec<BreakpointTable>,
}

/// Applies the patch to a copy of the project and validates the result.
pub fn patched(project: &ProjectFile, patch: &WhatIfPatch) -> Result<ProjectFile> {
    let mut p = project.clone();
    for (id, veto) in &patch.veto {
        let c = p
            .model
            .criteria
            .iter_mut()
            .find(|c| &c.id == id)
            .ok_or_else(|| Error::Config(format!("unknown criterion `{id}` in veto patch")))?;
        c.veto = *veto;
    }
    for (alt, evals) in &patch.evaluations {
        let a = p
            .model
            .alternatives
            .iter_mut()
            .find(|a| &a.id == alt)
            .ok_or_else(|| Error::Config(format!("unknown alternative `{alt}` in evaluation patch")))?;
        for (crit, e) in evals {
            a.evaluations.insert(crit.clone(), *e);
        }
        if evals.values().any(|e| !e.is_point()) {
            p.run.evaluation_sampling = true;
        }
    }
    if let Some(l) = patch.lambda {
        p.lambda = l;
    }
    if let Some(r) = patch.rule {
        p.run.rule = r;
    }
    p.validate().into_result()?;
    Ok(p)
}

pub fn whatif(project: &ProjectFile, request: &WhatIfRequest) -> Result<WhatIfResponse> {
    let p = patched(project, &request.patch)?;
    let mut config = request.config;
    config.draws = Some(config.draws.unwrap_or(WHATIF_DRAW_CAP).min(WHATIF_DRAW_CAP));
    let run = RunRequest {
        selection: request.selection.clone(),
        config,
    };
    let prepared = prepare(&p, &run)?;
    let reports = run_prepared(&p, &prepared)?;

    let mut breakpoints = Vec::new();
    if p.model.is_point_valued() {
        for (label, sampler) in &prepared.runs {
            if let WeightSampler::Fixed { weights } = sampler {
                breakpoints.push(breakpoint_table(&p, label, weights, prepared.config.rule)?);
            }
        }
    }
    Ok(WhatIfResponse { reports, breakpoints })
}

fn breakpoint_table(
    p: &ProjectFile,
    label: &str,
    weights: &WeightVector,
    rule: AssignmentRule,
) -> Result<BreakpointTable> {
    let table = smaa::breakpoint_table(&p.model, weights, rule)?;
    Ok(BreakpointTable {
        label: label.to_string(),
        rule,
        alternatives: p
            .model
            .alternatives
            .iter()
            .zip(table)
            .map(|(a, intervals)| AlternativeBreakpoints {
                alternative: a.id.clone(),
                fragility: fragility(&intervals),
                intervals,
            })
            .collect(),
    })
}

/// Fixed weight vectors of every decision maker that has them.
pub fn fixed_weights(project: &ProjectFile) -> Vec<(String, WeightVector)> {
    project
        .decision_makers
        .iter()
        .filter_map(|d| match &d.weights {
            WeightModel::Fixed(w) => Some((d.id.clone(), w.clone())),
            _ => None,
        })
        .collect()
}
