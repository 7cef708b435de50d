//! Survey calibration: quartile-range trapezoids from respondent samples.
//!
//! Quantiles use rank `r = (n + 1) p` with linear interpolation between the
//! neighbouring order statistics, clamped to the sample range. For eleven
//! samples the quartile ranks are exactly 3, 6 and 9.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CategoryId, Quantity};

use super::{canonical_term, term_names, LinguisticVariable, MembershipConfig, TrapezoidMF};

/// Quantile `p` of an ascending, non-empty slice.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = (n as f64 + 1.0) * p;
    if rank <= 1.0 {
        return sorted[0];
    }
    if rank >= n as f64 {
        return sorted[n - 1];
    }
    let lower = rank.floor();
    let frac = rank - lower;
    let i = lower as usize - 1;
    if frac == 0.0 {
        sorted[i]
    } else {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    }
}

/// Five-number summary of a sample list.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuartileSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

fn sorted_samples(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFiniteSample);
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn quartiles(samples: &[f64]) -> Result<QuartileSummary> {
    let v = sorted_samples(samples)?;
    Ok(QuartileSummary {
        min: v[0],
        q1: quantile(&v, 0.25),
        median: quantile(&v, 0.5),
        q3: quantile(&v, 0.75),
        max: v[v.len() - 1],
    })
}

impl QuartileSummary {
    pub fn trapezoid(&self) -> TrapezoidMF {
        TrapezoidMF::new(self.min, self.q1, self.q3, self.max)
            .expect("order statistics are monotone in rank")
    }
}

/// Trapezoid `(min, Q1, Q3, max)` of the samples.
pub fn mf_from_samples(samples: &[f64]) -> Result<TrapezoidMF> {
    Ok(quartiles(samples)?.trapezoid())
}

/// One respondent's score: the sum of `time * weight` over their rows.
pub fn score_sample(rows: &[(f64, f64)]) -> f64 {
    rows.iter().map(|(t, w)| t * w).sum()
}

/// Samples for one linguistic term: plain values, or per-respondent
/// `(time, weight)` rows that reduce to scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleSet {
    Values(Vec<f64>),
    Respondents { respondents: Vec<Vec<(f64, f64)>> },
}

impl SampleSet {
    fn values(&self) -> Vec<f64> {
        match self {
            SampleSet::Values(v) => v.clone(),
            SampleSet::Respondents { respondents } => {
                respondents.iter().map(|rows| score_sample(rows)).collect()
            }
        }
    }
}

/// Calibration input: `{ "<category>": { "time"|"score": { "<term>": samples } } }`.
pub type CalibrationSamples = BTreeMap<CategoryId, BTreeMap<Quantity, BTreeMap<String, SampleSet>>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermDiagnostic {
    pub category: CategoryId,
    pub quantity: Quantity,
    pub term: &'static str,
    pub sample_count: usize,
    pub quartiles: QuartileSummary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub config: MembershipConfig,
    /// One entry per term in category, quantity, term order. The median is
    /// reported here only; it does not shape the trapezoid.
    pub diagnostics: Vec<TermDiagnostic>,
}

/// Fit every term of every variable from its samples.
pub fn calibrate(samples: &CalibrationSamples) -> Result<Calibration> {
    if samples
        .values()
        .flat_map(|k| k.values())
        .all(|t| t.is_empty())
    {
        return Err(Error::NoSamples);
    }
    let mut canonical: BTreeMap<(CategoryId, Quantity), BTreeMap<&str, &SampleSet>> =
        BTreeMap::new();
    for (cat, kinds) in samples {
        for (quantity, terms) in kinds {
            for (name, set) in terms {
                let name = canonical_term(name);
                let Some(known) = term_names(*cat, *quantity).iter().find(|t| **t == name) else {
                    return Err(Error::UnknownTerm {
                        category: *cat,
                        quantity: *quantity,
                        term: name.to_string(),
                    });
                };
                if *quantity == Quantity::Time && matches!(set, SampleSet::Respondents { .. }) {
                    return Err(Error::InvalidSamples(format!(
                        "{cat}/time/{name}: respondent rows are only meaningful for score terms"
                    )));
                }
                canonical
                    .entry((*cat, *quantity))
                    .or_default()
                    .insert(known, set);
            }
        }
    }

    let mut variables = Vec::new();
    let mut diagnostics = Vec::new();
    for cat in CategoryId::ALL {
        for quantity in Quantity::ALL {
            let mut terms = Vec::new();
            for &term in term_names(cat, quantity) {
                let missing = || Error::MissingCalibration {
                    category: cat,
                    quantity,
                    term: term.to_string(),
                };
                let set = canonical
                    .get(&(cat, quantity))
                    .and_then(|m| m.get(term))
                    .ok_or_else(missing)?;
                let values = set.values();
                let q = quartiles(&values).map_err(|e| match e {
                    Error::EmptySamples => missing(),
                    other => other,
                })?;
                diagnostics.push(TermDiagnostic {
                    category: cat,
                    quantity,
                    term,
                    sample_count: values.len(),
                    quartiles: q,
                });
                terms.push((term, q.trapezoid()));
            }
            variables.push(LinguisticVariable::new(cat, quantity, terms)?);
        }
    }
    Ok(Calibration {
        config: MembershipConfig::new(variables)?,
        diagnostics,
    })
}
