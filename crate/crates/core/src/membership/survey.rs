//! Tag weights from single-choice survey vote shares.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Tag;

/// Whether the survey asked for the most beneficial or most harmful option.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyVote {
    pub option: Tag,
    pub percent: f64,
}

impl SurveyVote {
    pub fn new(option: Tag, percent: f64) -> Result<Self> {
        if !percent.is_finite() || !(0.0..=100.0).contains(&percent) {
            return Err(Error::InvalidVote {
                tag: option.to_string(),
                percent,
            });
        }
        Ok(SurveyVote { option, percent })
    }
}

/// One line of a vote file: `{ "tag": ..., "percent": ..., "polarity": ... }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoteRecord {
    pub tag: Tag,
    pub percent: f64,
    pub polarity: Polarity,
}

impl VoteRecord {
    pub fn vote(&self) -> Result<SurveyVote> {
        SurveyVote::new(self.tag.clone(), self.percent)
    }
}

/// Weight is the vote share itself, negated for the negative survey.
/// A repeated option keeps its last share.
pub fn weights_from_votes(votes: &[SurveyVote], polarity: Polarity) -> BTreeMap<Tag, f64> {
    let sign = match polarity {
        Polarity::Positive => 1.0,
        Polarity::Negative => -1.0,
    };
    votes
        .iter()
        .map(|v| (v.option.clone(), sign * v.percent))
        .collect()
}

/// Single-choice surveys cannot exceed 100% in total; larger totals point to
/// a multi-select survey and are flagged, not rejected.
pub fn vote_share_warnings(records: &[VoteRecord]) -> Vec<String> {
    let mut totals: BTreeMap<Polarity, f64> = BTreeMap::new();
    for r in records {
        *totals.entry(r.polarity).or_default() += r.percent;
    }
    totals
        .into_iter()
        .filter(|(_, total)| *total > 100.0 + 1e-9)
        .map(|(p, total)| {
            format!("{p:?} vote shares sum to {total}%, more than a single-choice survey allows")
        })
        .collect()
}
