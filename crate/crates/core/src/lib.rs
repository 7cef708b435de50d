//! Fuzzy-logic lifestyle analysis.
//!
//! A day of tagged visits (or a raw GPS trace, via [`ingest`]) is reduced to
//! per-category hours and weighted scores ([`aggregate`]), fuzzified against
//! quartile-calibrated trapezoids ([`membership`]) and matched against a rule
//! base of recommendations ([`inference`]).
//!
//! Data-parallel loops go through [`Execution`]; the `parallel` feature
//! (default) backs them with rayon.

pub mod aggregate;
pub mod error;
mod exec;
pub mod inference;
pub mod ingest;
pub mod membership;
pub mod model;

pub use aggregate::{breakdown, breakdown_batch, category_score, category_time};
pub use error::{Error, Result};
pub use exec::Execution;
pub use inference::{
    analyze_batch, analyze_day, attribute_membership, recommend, recommend_with, rule_score,
    Attribute, DayAnalysis, Recommendation, RecommendationReport, RuleBase, RuleOutcome,
};
pub use membership::{
    calibrate, mf_eval, mf_from_samples, score_sample, variable_eval, weights_from_votes,
    LinguisticVariable, MembershipConfig, TrapezoidMF,
};
pub use model::{
    categories_of, validate_catalog, CategoryBreakdown, CategoryId, CategoryTotals, DayLog,
    HomeProfile, PerCategory, Quantity, Tag, TagCatalog, Violation, Visit,
};
