//! Sorting start-ups into ordered risk classes with ELECTRE-TRI and
//! Stochastic Multicriteria Acceptability Analysis.
//!
//! The building blocks, bottom-up:
//!
//! * [`model`]: criteria, alternatives, limit profiles and their invariants.
//! * [`electre`]: concordance, discordance, credibility, the assignment rules
//!   and exact λ breakpoints.
//! * [`simos`]: card-based weight elicitation.
//! * [`smaa`]: seeded, parallel Monte Carlo over weights, λ and interval
//!   evaluations, producing category acceptabilities.
//! * [`finance`]: downside cash-flow scenarios, NPV, quartile-based profiles.
//! * [`io`]: project files and CSV/JSON reports.
//!
//! The `examples/` directory walks through each capability on the bundled
//! four-company case study ([`fixtures`]).

pub mod electre;
pub mod error;
pub mod finance;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod reference;
pub mod simos;
pub mod smaa;
pub mod weights;

pub use electre::{AssignmentRule, Fragility, LambdaInterval, OutrankingScores};
pub use error::{Error, Result};
pub use io::{DecisionMaker, ProjectFile, ReportFormat, WeightModel};
pub use model::{Alternative, CriterionSpec, Direction, Evaluation, LambdaSpec, Model, ProfileScheme, Scale};
pub use simos::{CardDeck, SimosWeights};
pub use smaa::{AcceptabilityReport, Bound, RunConfig, WeightBounds, WeightSampler};
pub use weights::WeightVector;

/// Tolerance on |Σw − 1| for a weight vector to count as normalized.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
