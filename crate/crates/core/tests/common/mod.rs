//! Shared generators and an exact-arithmetic reference evaluator for the sorting kernel.

#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

use rand::Rng;
use smaatri::model::{Alternative, CriterionSpec, Direction, Evaluation, LambdaSpec, Model, ProfileScheme, Scale};
use smaatri::WeightVector;

/// A small random sorting problem on an integer grid.
#[derive(Debug, Clone)]
pub struct GridInstance {
    pub gain: Vec<bool>,
    pub q: Vec<i64>,
    pub p: Vec<i64>,
    pub v: Vec<Option<i64>>,
    /// Integer weights; normalized by their sum.
    pub w: Vec<i64>,
    /// profiles[h][j], ordered worst to best.
    pub profiles: Vec<Vec<i64>>,
    pub alternative: Vec<i64>,
}

impl GridInstance {
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let n = rng.random_range(1..=5);
        let categories = rng.random_range(2..=4);
        let mut gain = Vec::new();
        let mut q = Vec::new();
        let mut p = Vec::new();
        let mut v = Vec::new();
        let mut w = Vec::new();
        for _ in 0..n {
            gain.push(rng.random_bool(0.7));
            let qj = rng.random_range(0..=2);
            let pj = qj + rng.random_range(0..=3);
            q.push(qj);
            p.push(pj);
            v.push(rng.random_bool(0.5).then(|| pj + rng.random_range(1..=4)));
            w.push(rng.random_range(1..=9));
        }
        let mut columns: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                let mut col: Vec<i64> = (0..categories - 1).map(|_| rng.random_range(0..=10)).collect();
                col.sort_unstable();
                col
            })
            .collect();
        for (col, &g) in columns.iter_mut().zip(&gain) {
            if !g {
                col.reverse();
            }
        }
        let profiles = (0..categories - 1)
            .map(|h| columns.iter().map(|c| c[h]).collect())
            .collect();
        let alternative = (0..n).map(|_| rng.random_range(-2..=12)).collect();
        Self {
            gain,
            q,
            p,
            v,
            w,
            profiles,
            alternative,
        }
    }

    pub fn criteria(&self) -> Vec<CriterionSpec> {
        (0..self.gain.len())
            .map(|j| {
                let dir = if self.gain[j] { Direction::Gain } else { Direction::Cost };
                CriterionSpec::new(format!("g{j}"), "grid", dir, Scale::Ratio).with_thresholds(
                    self.q[j] as f64,
                    self.p[j] as f64,
                    self.v[j].map(|x| x as f64),
                )
            })
            .collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let total: i64 = self.w.iter().sum();
        self.w.iter().map(|&x| x as f64 / total as f64).collect()
    }

    pub fn float_profiles(&self) -> Vec<Vec<f64>> {
        self.profiles
            .iter()
            .map(|row| row.iter().map(|&x| x as f64).collect())
            .collect()
    }

    pub fn float_alternative(&self) -> Vec<f64> {
        self.alternative.iter().map(|&x| x as f64).collect()
    }
}

/// Random fixed-weight, point-valued project with 2..=5 criteria and 3..=5 categories.
pub fn random_project<R: Rng>(rng: &mut R) -> (Model, WeightVector, LambdaSpec) {
    let n = rng.random_range(2..=5);
    let categories = rng.random_range(3..=5);
    let mut criteria = Vec::new();
    let mut base = BTreeMap::new();
    for j in 0..n {
        let gain = rng.random_bool(0.7);
        let q = rng.random_range(0..=2) as f64 * 0.5;
        let p = q + rng.random_range(0..=4) as f64 * 0.5;
        let veto = rng.random_bool(0.4).then(|| p + rng.random_range(1..=6) as f64);
        let id = format!("g{j}");
        let dir = if gain { Direction::Gain } else { Direction::Cost };
        criteria.push(CriterionSpec::new(&id, "random", dir, Scale::Ratio).with_thresholds(q, p, veto));
        let mut col: Vec<f64> = (0..categories - 1)
            .map(|_| rng.random_range(0..=20) as f64 * 0.5)
            .collect();
        col.sort_by(f64::total_cmp);
        if !gain {
            col.reverse();
        }
        base.insert(id, col);
    }
    let alternatives = (0..rng.random_range(3..=6))
        .map(|i| Alternative {
            id: format!("a{i}"),
            sector: None,
            evaluations: criteria
                .iter()
                .map(|c| (c.id.clone(), Evaluation::point(rng.random_range(-2..=24) as f64 * 0.5)))
                .collect(),
        })
        .collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(1..=20) as f64).collect();
    let total: f64 = raw.iter().sum();
    let weights = WeightVector::from_aligned(&criteria, &raw.iter().map(|x| x / total).collect::<Vec<_>>());
    let lo = 0.5 + rng.random_range(0..=8) as f64 * 0.05;
    let hi = (lo + rng.random_range(0..=6) as f64 * 0.05).min(1.0);
    let model = Model {
        criteria,
        alternatives,
        profiles: ProfileScheme {
            categories: (1..=categories).map(|k| format!("C{k}")).collect(),
            base,
            overrides: BTreeMap::new(),
        },
    };
    (model, weights, LambdaSpec { lo, hi })
}

/// Draws a cutting level k/997 in [0.5, 1] that equals none of the instance's σ values.
pub fn untied_lambda<R: Rng>(rng: &mut R, inst: &GridInstance) -> oracle::Q {
    let sigmas = oracle::all_sigmas(inst);
    loop {
        let lambda = oracle::Q::new(rng.random_range(499..=997), 997);
        if !sigmas.contains(&lambda) {
            return lambda;
        }
    }
}

fn to_f64(x: oracle::Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub const RULE_PAIRS: [(smaatri::AssignmentRule, oracle::Rule); 3] = [
    (
        smaatri::AssignmentRule::PessimisticStandard,
        oracle::Rule::PessimisticStandard,
    ),
    (
        smaatri::AssignmentRule::PessimisticPaper,
        oracle::Rule::PessimisticPaper,
    ),
    (smaatri::AssignmentRule::Optimistic, oracle::Rule::Optimistic),
];

/// Compares `assign` with the exact evaluator on `count` random instances.
///
/// Returns per-rule agreement counts and the first disagreement, if any.
pub fn oracle_agreement(seed: u64, count: usize) -> ([usize; 3], Option<String>) {
    use rand::SeedableRng;
    use smaatri::electre::{assign, OutrankingScores};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut agree = [0; 3];
    let mut first_failure = None;
    for i in 0..count {
        let inst = GridInstance::random(&mut rng);
        let lambda = untied_lambda(&mut rng, &inst);
        let scores = OutrankingScores::compute(
            &inst.float_alternative(),
            &inst.float_profiles(),
            &inst.criteria(),
            &inst.weights(),
        );
        for (r, (lib_rule, oracle_rule)) in RULE_PAIRS.iter().enumerate() {
            let got = assign(&scores, to_f64(lambda), *lib_rule).expect("valid λ");
            let want = oracle::classify(&inst, lambda, *oracle_rule);
            if got == want {
                agree[r] += 1;
            } else if first_failure.is_none() {
                first_failure = Some(format!(
                    "instance {i}, {lib_rule}, λ = {lambda}: got C{got}, expected C{want}\n{inst:?}"
                ));
            }
        }
    }
    (agree, first_failure)
}

/// Fraction of cells where a 10,000-draw run lies within 3σ of the exact value, over `projects` random projects.
pub fn mc_vs_exact(seed: u64, projects: usize, draws: u64) -> (usize, usize, Vec<String>) {
    use rand::SeedableRng;
    use smaatri::smaa::{exact_acceptability, run_smaa, RunConfig, WeightSampler};
    use smaatri::AssignmentRule;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mut inside, mut total) = (0, 0);
    let mut misses = Vec::new();
    for i in 0..projects {
        let (model, weights, lambda) = random_project(&mut rng);
        let rule = AssignmentRule::ALL[i % 3];
        let exact = exact_acceptability(&model, &weights, lambda, rule).expect("exact");
        let config = RunConfig {
            draws,
            seed: seed ^ i as u64,
            lambda,
            rule,
            ..RunConfig::default()
        };
        let report = run_smaa(&model, &WeightSampler::Fixed { weights }, &config).expect("run");
        for (row, want) in report.rows.iter().zip(&exact) {
            for (k, (&got, &pi)) in row.pi.iter().zip(want).enumerate() {
                total += 1;
                let tol = 3.0 * (pi * (1.0 - pi) / draws as f64).sqrt();
                if (got - pi).abs() <= tol + 1e-12 {
                    inside += 1;
                } else {
                    misses.push(format!("project {i} {} C{}: {got} vs {pi}", row.alternative, k + 1));
                }
            }
        }
    }
    (inside, total, misses)
}

/// Runs the same configuration with one and eight workers `trials` times and compares report bytes.
pub fn determinism_trials(trials: u64) -> Result<(), String> {
    use smaatri::{fixtures, io, smaa};

    let project = fixtures::case_study_intervals();
    let sampler = project.group_sampler().map_err(|e| e.to_string())?;
    for t in 0..trials {
        let mut bytes = Vec::new();
        for workers in [1, 8] {
            let config = smaa::RunConfig {
                draws: 1_000,
                seed: 1_000 + t,
                workers: Some(workers),
                risk_cutoff: Some(3),
                ..project.run_config()
            };
            let report = smaa::run_smaa(&project.model, &sampler, &config).map_err(|e| e.to_string())?;
            let reports = [report];
            let mut out = io::render_json(&reports).into_bytes();
            out.extend(io::render_csv(&reports).map_err(|e| e.to_string())?.into_bytes());
            bytes.push(out);
        }
        if bytes[0] != bytes[1] {
            return Err(format!("trial {t}: reports differ between 1 and 8 workers"));
        }
    }
    Ok(())
}
