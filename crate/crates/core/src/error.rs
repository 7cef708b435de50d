use thiserror::Error;

use crate::model::{CategoryId, Quantity};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tag names must be non-empty")]
    EmptyTag,

    #[error("the `home` tag is handled by the home profile, not the tag catalog")]
    HomeTag,

    #[error("invalid visit: {0}")]
    InvalidVisit(String),

    #[error("invalid home profile: {0}")]
    InvalidHomeProfile(String),

    #[error(
        "invalid trapezoid ({a}, {b}, {c}, {d}): parameters must be finite with a <= b <= c <= d"
    )]
    InvalidTrapezoid { a: f64, b: f64, c: f64, d: f64 },

    #[error("sample list is empty")]
    EmptySamples,

    #[error("sample list contains a non-finite value")]
    NonFiniteSample,

    #[error("no samples")]
    NoSamples,

    #[error("missing calibration samples for {category}/{quantity}/{term}")]
    MissingCalibration {
        category: CategoryId,
        quantity: Quantity,
        term: String,
    },

    #[error("missing membership variable {category}/{quantity}")]
    MissingVariable {
        category: CategoryId,
        quantity: Quantity,
    },

    #[error("unknown linguistic term {category}/{quantity}/{term}")]
    UnknownTerm {
        category: CategoryId,
        quantity: Quantity,
        term: String,
    },

    #[error("{0}")]
    InvalidSamples(String),

    #[error("survey vote for `{tag}` has percent {percent} outside [0, 100]")]
    InvalidVote { tag: String, percent: f64 },

    #[error("rule base is empty")]
    EmptyRuleBase,

    #[error("rule `{0}` has no attributes")]
    EmptyRule(String),

    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),

    #[error("cannot score an empty degree list")]
    EmptyDegrees,

    #[error("invalid coordinate ({lat}, {lon})")]
    InvalidCoordinate { lat: f64, lon: f64 },

    #[error("trace timestamps must be strictly increasing (point {index})")]
    UnorderedTrace { index: usize },

    #[error("trace does not fit in a single analysis day starting at {day_start}")]
    TraceSpansDays { day_start: i64 },

    #[error("POI database has no registered {0} location")]
    MissingRegistration(&'static str),

    #[error("invalid stay-point parameters: {0}")]
    InvalidParams(String),

    #[error("invalid home allocation: {0}")]
    InvalidAllocation(String),

    #[error("unknown category `{0}`")]
    UnknownCategory(String),

    #[error("nearby-search request failed: {0}")]
    Nearby(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
