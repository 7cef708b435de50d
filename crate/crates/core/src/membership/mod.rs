//! Trapezoidal membership functions and the linguistic variables built from
//! them, one per (category, quantity) pair.

mod calibrate;
mod survey;

pub use calibrate::{
    calibrate, mf_from_samples, quantile, quartiles, score_sample, Calibration, CalibrationSamples,
    QuartileSummary, SampleSet, TermDiagnostic,
};
pub use survey::{vote_share_warnings, weights_from_votes, Polarity, SurveyVote, VoteRecord};

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::model::{CategoryId, PerCategory, Quantity};

/// Trapezoid `(a, b, c, d)`: zero outside `[a, d]`, one on `[b, c]`, linear
/// in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct TrapezoidMF {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TrapezoidMF {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let finite = [a, b, c, d].iter().all(|v| v.is_finite());
        if !finite || !(a <= b && b <= c && c <= d) {
            return Err(Error::InvalidTrapezoid { a, b, c, d });
        }
        Ok(TrapezoidMF { a, b, c, d })
    }

    /// Crisp singleton: one at `x`, zero elsewhere.
    pub fn singleton(x: f64) -> Result<Self> {
        Self::new(x, x, x, x)
    }

    pub fn params(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.d)
    }

    pub fn core(&self) -> (f64, f64) {
        (self.b, self.c)
    }

    /// Degree of membership of `x`. Vertical edges (`a == b`, `c == d`) take
    /// the plateau value at the shared point. NaN maps to 0.
    pub fn eval(&self, x: f64) -> f64 {
        if !(x >= self.a && x <= self.d) {
            0.0
        } else if x >= self.b && x <= self.c {
            1.0
        } else if x < self.b {
            // here a <= x < b, so b > a
            (x - self.a) / (self.b - self.a)
        } else {
            // here c < x <= d, so d > c
            (self.d - x) / (self.d - self.c)
        }
    }
}

impl TryFrom<[f64; 4]> for TrapezoidMF {
    type Error = Error;

    fn try_from(p: [f64; 4]) -> Result<Self> {
        TrapezoidMF::new(p[0], p[1], p[2], p[3])
    }
}

impl From<TrapezoidMF> for [f64; 4] {
    fn from(mf: TrapezoidMF) -> Self {
        mf.params()
    }
}

impl fmt::Display for TrapezoidMF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

pub fn mf_eval(mf: &TrapezoidMF, x: f64) -> f64 {
    mf.eval(x)
}

pub const SCORE_TERMS: [&str; 3] = ["low_score", "ideal_score", "high_score"];

/// Linguistic terms of a variable, in display order.
pub fn term_names(category: CategoryId, quantity: Quantity) -> &'static [&'static str] {
    match (quantity, category) {
        (Quantity::Score, _) => &SCORE_TERMS,
        (Quantity::Time, CategoryId::Health) => &["unfit", "fit", "proactive"],
        (Quantity::Time, CategoryId::Leisure) => &["hectic", "ideal", "lazy"],
        (Quantity::Time, CategoryId::Social) => &["reserved", "sociable", "over_social"],
        (Quantity::Time, CategoryId::Work) => &["lethargic", "hard_working", "industrious"],
        (Quantity::Time, CategoryId::Other) => &["non_productive", "productive"],
    }
}

/// Canonical spelling of a term name. `less_score` is accepted for `low_score`.
pub fn canonical_term(name: &str) -> &str {
    match name {
        "less_score" => "low_score",
        other => other,
    }
}

/// All terms of one (category, quantity) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct LinguisticVariable {
    category: CategoryId,
    quantity: Quantity,
    terms: Vec<(&'static str, TrapezoidMF)>,
}

impl LinguisticVariable {
    /// Build a variable from named terms; the term set must match
    /// [`term_names`] exactly (after `less_score` canonicalization).
    pub fn new<S: AsRef<str>>(
        category: CategoryId,
        quantity: Quantity,
        terms: impl IntoIterator<Item = (S, TrapezoidMF)>,
    ) -> Result<Self> {
        let mut given: BTreeMap<String, TrapezoidMF> = BTreeMap::new();
        for (name, mf) in terms {
            let name = canonical_term(name.as_ref()).to_string();
            if !term_names(category, quantity).contains(&name.as_str()) {
                return Err(Error::UnknownTerm {
                    category,
                    quantity,
                    term: name,
                });
            }
            given.insert(name, mf);
        }
        let terms = term_names(category, quantity)
            .iter()
            .map(|&name| {
                given
                    .get(name)
                    .map(|mf| (name, *mf))
                    .ok_or_else(|| Error::MissingCalibration {
                        category,
                        quantity,
                        term: name.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinguisticVariable {
            category,
            quantity,
            terms,
        })
    }

    pub fn category(&self) -> CategoryId {
        self.category
    }

    pub fn quantity(&self) -> Quantity {
        self.quantity
    }

    pub fn terms(&self) -> &[(&'static str, TrapezoidMF)] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Result<&TrapezoidMF> {
        let name = canonical_term(name);
        self.terms
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, mf)| mf)
            .ok_or_else(|| Error::UnknownTerm {
                category: self.category,
                quantity: self.quantity,
                term: name.to_string(),
            })
    }

    /// Smallest interval containing every term's support.
    pub fn universe(&self) -> (f64, f64) {
        self.terms
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, mf)| {
                let (a, d) = mf.support();
                (lo.min(a), hi.max(d))
            })
    }

    /// Degree of every term at `x`; degrees are not normalized across terms.
    pub fn eval(&self, x: f64) -> Vec<(&'static str, f64)> {
        self.terms.iter().map(|(n, mf)| (*n, mf.eval(x))).collect()
    }

    /// Sample every term at `resolution` evenly spaced points spanning
    /// [`Self::universe`]. Each row is `x` followed by one degree per term.
    pub fn sample_curves(&self, resolution: usize, exec: Execution) -> Vec<Vec<f64>> {
        let (lo, hi) = self.universe();
        map_range(resolution, exec, |i| {
            let x = match resolution {
                1 => lo,
                n if i + 1 == n => hi,
                n => lo + (hi - lo) * i as f64 / (n - 1) as f64,
            };
            std::iter::once(x)
                .chain(self.terms.iter().map(|(_, mf)| mf.eval(x)))
                .collect()
        })
    }
}

pub fn variable_eval(var: &LinguisticVariable, x: f64) -> Vec<(&'static str, f64)> {
    var.eval(x)
}

type RawConfig = BTreeMap<CategoryId, BTreeMap<Quantity, BTreeMap<String, TrapezoidMF>>>;

/// Every linguistic variable: five categories times {time, score}.
///
/// JSON form: `{ "<category>": { "time": { "<term>": [a,b,c,d], ... }, "score": {...} } }`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct MembershipConfig {
    time: PerCategory<Option<LinguisticVariable>>,
    score: PerCategory<Option<LinguisticVariable>>,
}

impl MembershipConfig {
    /// Assemble a config; every (category, quantity) pair must appear exactly once.
    pub fn new(variables: impl IntoIterator<Item = LinguisticVariable>) -> Result<Self> {
        let mut time: PerCategory<Option<LinguisticVariable>> = PerCategory::default();
        let mut score: PerCategory<Option<LinguisticVariable>> = PerCategory::default();
        for var in variables {
            let slot = match var.quantity {
                Quantity::Time => &mut time[var.category],
                Quantity::Score => &mut score[var.category],
            };
            if slot.is_some() {
                return Err(Error::InvalidSamples(format!(
                    "duplicate membership variable {}/{}",
                    var.category, var.quantity
                )));
            }
            *slot = Some(var);
        }
        for cat in CategoryId::ALL {
            for (quantity, slots) in [(Quantity::Time, &time), (Quantity::Score, &score)] {
                if slots[cat].is_none() {
                    return Err(Error::MissingVariable {
                        category: cat,
                        quantity,
                    });
                }
            }
        }
        Ok(MembershipConfig { time, score })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn variable(&self, category: CategoryId, quantity: Quantity) -> &LinguisticVariable {
        let slot = match quantity {
            Quantity::Time => &self.time[category],
            Quantity::Score => &self.score[category],
        };
        slot.as_ref().expect("complete by construction")
    }

    pub fn term(
        &self,
        category: CategoryId,
        quantity: Quantity,
        term: &str,
    ) -> Result<&TrapezoidMF> {
        self.variable(category, quantity).term(term)
    }

    pub fn variables(&self) -> impl Iterator<Item = &LinguisticVariable> {
        CategoryId::ALL
            .into_iter()
            .flat_map(move |c| Quantity::ALL.into_iter().map(move |q| self.variable(c, q)))
    }
}

impl TryFrom<RawConfig> for MembershipConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let mut vars = Vec::new();
        for (cat, kinds) in raw {
            for (quantity, terms) in kinds {
                vars.push(LinguisticVariable::new(cat, quantity, terms)?);
            }
        }
        MembershipConfig::new(vars)
    }
}

impl Serialize for MembershipConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a LinguisticVariable);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.terms.len()))?;
                for (name, mf) in &self.0.terms {
                    map.serialize_entry(name, mf)?;
                }
                map.end()
            }
        }
        struct Kinds<'a>(&'a MembershipConfig, CategoryId);
        impl Serialize for Kinds<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(2))?;
                for q in Quantity::ALL {
                    map.serialize_entry(q.as_str(), &Terms(self.0.variable(self.1, q)))?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(5))?;
        for cat in CategoryId::ALL {
            map.serialize_entry(cat.as_str(), &Kinds(self, cat))?;
        }
        map.end()
    }
}
