use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CriterionSpec;

/// Criterion weights keyed by criterion id. Nonnegative, summing to one.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(pub BTreeMap<String, f64>);

impl WeightVector {
    pub fn new(weights: BTreeMap<String, f64>) -> Self {
        Self(weights)
    }

    pub fn from_aligned(criteria: &[CriterionSpec], values: &[f64]) -> Self {
        Self(
            criteria
                .iter()
                .map(|c| c.id.clone())
                .zip(values.iter().copied())
                .collect(),
        )
    }

    pub fn equal(criteria: &[CriterionSpec]) -> Self {
        let w = 1.0 / criteria.len() as f64;
        Self(criteria.iter().map(|c| (c.id.clone(), w)).collect())
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.0.get(id).copied()
    }

    pub fn sum(&self) -> f64 {
        self.0.values().sum()
    }

    /// Values in criterion order. Fails on a missing criterion.
    pub fn aligned(&self, criteria: &[CriterionSpec]) -> Result<Vec<f64>> {
        criteria
            .iter()
            .map(|c| {
                self.get(&c.id)
                    .ok_or_else(|| Error::config(format!("no weight for criterion `{}`", c.id)))
            })
            .collect()
    }
}

impl FromIterator<(String, f64)> for WeightVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}
