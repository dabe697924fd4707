//! Business-plan preprocessing: pessimistic cash-flow scenarios, NPV, and
//! financial limit profiles from sector quartiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Direction;

/// Yearly cash flows; entry `i` falls at the end of year `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CashFlowSeries {
    pub flows: Vec<f64>,
}

impl CashFlowSeries {
    pub fn new(flows: Vec<f64>) -> Result<Self> {
        if flows.is_empty() {
            return Err(Error::config("a cash-flow series needs at least one year"));
        }
        Ok(Self { flows })
    }

    pub fn years(&self) -> usize {
        self.flows.len()
    }

    pub fn sum(&self) -> f64 {
        self.flows.iter().sum()
    }
}

/// Downside severity s in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScenarioSpec(f64);

impl ScenarioSpec {
    pub fn new(severity: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&severity) {
            return Err(Error::config(format!(
                "scenario severity {severity} must lie in [0, 1)"
            )));
        }
        Ok(Self(severity))
    }

    pub fn severity(self) -> f64 {
        self.0
    }
}

/// Lowers a series: inflows shrink by `s`, outflows grow by `s`.
pub fn apply_scenario(series: &CashFlowSeries, spec: ScenarioSpec) -> CashFlowSeries {
    let s = spec.severity();
    let flows = series
        .flows
        .iter()
        .map(|&x| {
            if x > 0.0 {
                x * (1.0 - s)
            } else if x < 0.0 {
                x * (1.0 + s)
            } else {
                x
            }
        })
        .collect();
    CashFlowSeries { flows }
}

/// End-of-year NPV: Σ_t flow_t / (1 + r)^t with t = 1..T, summed in ascending t.
pub fn npv(series: &CashFlowSeries, rate: f64) -> Result<f64> {
    if !(rate.is_finite() && rate > -1.0) {
        return Err(Error::config(format!("discount rate {rate} must be greater than -1")));
    }
    let mut factor = 1.0;
    let mut total = 0.0;
    for &x in &series.flows {
        factor *= 1.0 + rate;
        total += x / factor;
    }
    Ok(total)
}

/// Firm-year observations of one financial ratio within a sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorRatioSample {
    pub ratio: String,
    pub observations: Vec<f64>,
}

/// Quantile by linear interpolation between order statistics at position `prob · (n − 1)`.
pub fn quantile(sorted: &[f64], prob: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = prob * (sorted.len() - 1) as f64;
    let lower = pos.floor() as usize;
    let upper = pos.ceil() as usize;
    let frac = pos - lower as f64;
    sorted[lower] + (sorted[upper] - sorted[lower]) * frac
}

/// Q25, Q50, Q75 of a sample.
pub fn quartiles(observations: &[f64]) -> Result<[f64; 3]> {
    if observations.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "{} observations, at least 4 are needed for quartiles",
            observations.len()
        )));
    }
    if observations.iter().any(|x| !x.is_finite()) {
        return Err(Error::config("ratio sample contains a non-finite observation"));
    }
    let mut sorted = observations.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok([quantile(&sorted, 0.25), quantile(&sorted, 0.5), quantile(&sorted, 0.75)])
}

/// Four limit profiles b_1..b_4 for one financial ratio.
///
/// b_1..b_3 are the sector quartiles ordered from riskiest to safest under
/// `direction`; b_4 is the best value across all sectors.
pub fn profile_column(sample: &SectorRatioSample, direction: Direction, cross_sector_best: f64) -> Result<[f64; 4]> {
    let [q25, q50, q75] = quartiles(&sample.observations)?;
    Ok(match direction {
        Direction::Gain => [q25, q50, q75, cross_sector_best],
        Direction::Cost => [q75, q50, q25, cross_sector_best],
    })
}

/// Safest quartile across several sectors' samples of the same ratio.
pub fn cross_sector_best(samples: &[&SectorRatioSample], direction: Direction) -> Result<f64> {
    let mut best: Option<f64> = None;
    for s in samples {
        let [q25, _, q75] = quartiles(&s.observations)?;
        let safest = match direction {
            Direction::Gain => q75,
            Direction::Cost => q25,
        };
        best = Some(match best {
            None => safest,
            Some(b) if direction.at_least_as_good(safest, b) => safest,
            Some(b) => b,
        });
    }
    best.ok_or_else(|| Error::InsufficientData("no sector samples".into()))
}

/// Profile columns for every ratio of one sector, in the order given.
pub fn profiles_from_quartiles(
    samples: &[SectorRatioSample],
    directions: &[Direction],
    cross_sector_best: &[f64],
) -> Result<Vec<[f64; 4]>> {
    if samples.len() != directions.len() || samples.len() != cross_sector_best.len() {
        return Err(Error::config("samples, directions and cross-sector values must align"));
    }
    let columns = samples
        .iter()
        .zip(directions)
        .zip(cross_sector_best)
        .map(|((s, &d), &best)| profile_column(s, d, best))
        .collect::<Result<Vec<_>>>()?;
    for (col, (s, &d)) in columns.iter().zip(samples.iter().zip(directions)) {
        if col.windows(2).any(|w| !d.at_least_as_good(w[1], w[0])) {
            return Err(Error::config(format!(
                "cross-sector best {} for `{}` is worse than the sector's safest quartile",
                col[3], s.ratio
            )));
        }
    }
    Ok(columns)
}
