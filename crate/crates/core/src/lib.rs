//! Attribute-oriented induction of characteristic rules.
//!
//! Given a relation, one concept hierarchy per attribute, and a target class,
//! the pipeline generalizes the class's tuples up their hierarchies until
//! they fit the thresholds, ranks the attributes by how much of each tree
//! the data covered, and reads off a weighted disjunctive rule.
//!
//! The crate is `no_std` and only needs `alloc`; file IO lives in the `aoi`
//! crate.

#![no_std]

extern crate alloc;

pub mod datagen;
pub mod engine;
pub mod error;
pub mod hierarchy;
pub mod interest;
pub mod relation;
pub mod rules;

pub use engine::{mine, mine_with_ranking, GeneralizationTrace, LevelProfile, MiningResult, Warning};
pub use error::{Error, Result};
pub use hierarchy::{tree_stats, ConceptTree, Hierarchies, TreeStats, ANY};
pub use interest::{eq1_score, nonzero_product, rank_attributes, AttributeScore, Role, Score, ScoreReport};
pub use relation::{
    merge_identical, GeneralizedRelation, GeneralizedTuple, LearningTask, Relation, ValueSet,
};
pub use rules::{build_rule, render_rule, Notation, Rule};
