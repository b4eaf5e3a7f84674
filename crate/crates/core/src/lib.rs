//! Multi-objective influence diagrams solved by variable elimination over
//! sets of utility vectors, with exact Pareto, ε-covering and tradeoff-cone
//! pruning.

pub mod cli;
pub mod dominance;
pub mod fixtures;
pub mod generator;
pub mod lp;
pub mod model;
pub mod solver;
pub mod utility;

pub use dominance::{CoveringParams, TradeoffSet};
pub use model::{InfluenceDiagram, Objective, Policy, Sense};
pub use utility::{DominanceRelation, UtilitySet, UtilityVector};
