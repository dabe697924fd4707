//! Revised Simos ("cards") weight elicitation.
//!
//! The decision maker ranks criterion cards from least to most important,
//! may slip blank cards between consecutive ranks to widen the gap, and states
//! the ratio `z` between the most and the least important rank. Each blank
//! card counts as one extra unit step between ranks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CriterionSpec, ValidationReport, ViolationKind};
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CardDeck {
    /// Ranks from least to most important; criteria in one rank are tied.
    pub ranks: Vec<Vec<String>>,
    /// Blank cards between rank r and r+1, one entry per gap.
    #[serde(default)]
    pub white_cards: Vec<u32>,
    /// How many times the last rank is more important than the first.
    pub z: f64,
}

impl CardDeck {
    /// Structural checks; with `criteria` also checks that every criterion is placed once.
    pub fn validate(&self, criteria: Option<&[CriterionSpec]>) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.ranks.is_empty() {
            report.push(ViolationKind::Deck, "deck", "no ranks");
        }
        let mut seen = BTreeSet::new();
        for (r, rank) in self.ranks.iter().enumerate() {
            if rank.is_empty() {
                report.push(ViolationKind::Deck, format!("deck / rank {}", r + 1), "empty rank");
            }
            for id in rank {
                if !seen.insert(id.as_str()) {
                    report.push(
                        ViolationKind::Duplicate,
                        format!("deck / rank {}", r + 1),
                        format!("criterion {id} placed more than once"),
                    );
                }
            }
        }
        let gaps = self.ranks.len().saturating_sub(1);
        if self.white_cards.len() != gaps {
            report.push(
                ViolationKind::Deck,
                "deck / white_cards",
                format!("{} white-card entries for {gaps} gaps", self.white_cards.len()),
            );
        }
        if let Some(criteria) = criteria {
            for c in criteria {
                if !seen.contains(c.id.as_str()) {
                    report.push(ViolationKind::Deck, "deck", format!("criterion {} not placed", c.id));
                }
            }
            for id in &seen {
                if !criteria.iter().any(|c| c.id == *id) {
                    report.push(
                        ViolationKind::UnknownCriterion,
                        "deck",
                        format!("unknown criterion {id}"),
                    );
                }
            }
        }
        report
    }

    pub fn criterion_count(&self) -> usize {
        self.ranks.iter().map(Vec::len).sum()
    }
}

/// Output of the card procedure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimosWeights {
    /// Non-normalized weight k(r) of each rank, least important first.
    pub rank_weights: Vec<f64>,
    /// e_r = blank cards + 1 for each gap.
    pub gaps: Vec<u32>,
    /// Unit step u = (z − 1) / e.
    pub unit: f64,
    /// K' = sum of the non-normalized weights over all criteria.
    pub total: f64,
    pub weights: WeightVector,
}

/// Resolves a card deck into non-normalized rank weights and normalized criterion weights.
pub fn simos_resolve(deck: &CardDeck) -> Result<SimosWeights> {
    if !(deck.z.is_finite() && deck.z > 1.0) {
        return Err(Error::config(format!("z = {} must be greater than 1", deck.z)));
    }
    deck.validate(None).into_result()?;

    let gaps: Vec<u32> = deck.white_cards.iter().map(|w| w + 1).collect();
    let e: u32 = gaps.iter().sum();
    let last = deck.ranks.len() - 1;
    let unit = if e == 0 { 0.0 } else { (deck.z - 1.0) / e as f64 };

    let mut rank_weights = Vec::with_capacity(deck.ranks.len());
    let mut cumulative = 0u32;
    for r in 0..deck.ranks.len() {
        let k = if r == 0 {
            1.0
        } else if r == last {
            deck.z
        } else {
            1.0 + (deck.z - 1.0) * cumulative as f64 / e as f64
        };
        rank_weights.push(k);
        if let Some(g) = gaps.get(r) {
            cumulative += g;
        }
    }

    let total: f64 = deck
        .ranks
        .iter()
        .zip(&rank_weights)
        .map(|(rank, k)| rank.len() as f64 * k)
        .sum();
    let weights = deck
        .ranks
        .iter()
        .zip(&rank_weights)
        .flat_map(|(rank, &k)| rank.iter().map(move |id| (id.clone(), k / total)))
        .collect();

    Ok(SimosWeights {
        rank_weights,
        gaps,
        unit,
        total,
        weights,
    })
}

/// Total preorder over criteria induced by a deck: tied within a rank, strictly ordered across.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    levels: Vec<Vec<String>>,
}

impl Preorder {
    fn level_of(&self, id: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.iter().any(|c| c == id))
    }

    /// `Less` means `a` is less important than `b`.
    pub fn compare(&self, a: &str, b: &str) -> Option<std::cmp::Ordering> {
        Some(self.level_of(a)?.cmp(&self.level_of(b)?))
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    /// `true` when `a ≺ b ⇒ w(a) < w(b)` and `a ∼ b ⇒ w(a) = w(b)` for every pair.
    pub fn is_consistent_with(&self, weights: &WeightVector) -> bool {
        let ids: Vec<&String> = self.levels.iter().flatten().collect();
        ids.iter().all(|a| {
            ids.iter().all(|b| {
                let (Some(wa), Some(wb)) = (weights.get(a), weights.get(b)) else {
                    return false;
                };
                match self.compare(a, b) {
                    Some(std::cmp::Ordering::Less) => wa < wb,
                    Some(std::cmp::Ordering::Equal) => wa == wb,
                    Some(std::cmp::Ordering::Greater) => wa > wb,
                    None => false,
                }
            })
        })
    }
}

impl fmt::Display for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self
            .levels
            .iter()
            .map(|l| l.join(" ∼ "))
            .collect::<Vec<_>>()
            .join(" ≺ ");
        f.write_str(&text)
    }
}

pub fn preorder_check(deck: &CardDeck) -> Preorder {
    Preorder {
        levels: deck.ranks.clone(),
    }
}
