//! Recommendation rules and most-probable selection.
//!
//! Each rule lists attributes (category, quantity, term). A rule's score is
//! the plain mean of its attributes' membership degrees; the rule with the
//! highest score wins, ties going to the earliest rule.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::aggregate::breakdown;
use crate::error::{Error, Result};
use crate::exec::{map_items, Execution};
use crate::membership::{canonical_term, MembershipConfig};
use crate::model::{CategoryBreakdown, CategoryId, DayLog, Quantity, TagCatalog};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub category: CategoryId,
    #[serde(rename = "kind")]
    pub quantity: Quantity,
    #[serde(deserialize_with = "de_term")]
    pub term: String,
}

fn de_term<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<String, D::Error> {
    let raw = String::deserialize(d)?;
    Ok(canonical_term(&raw).to_string())
}

impl Attribute {
    pub fn new(category: CategoryId, quantity: Quantity, term: &str) -> Self {
        Attribute {
            category,
            quantity,
            term: canonical_term(term).to_string(),
        }
    }
}

impl std::fmt::Display for Attribute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}={}", self.category, self.quantity, self.term)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub id: String,
    pub text: String,
    pub attributes: Vec<Attribute>,
}

/// Ordered, non-empty list of rules with unique ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRuleBase")]
pub struct RuleBase {
    rules: Vec<Recommendation>,
}

#[derive(Deserialize)]
struct RawRuleBase {
    rules: Vec<Recommendation>,
}

impl TryFrom<RawRuleBase> for RuleBase {
    type Error = Error;

    fn try_from(raw: RawRuleBase) -> Result<Self> {
        RuleBase::new(raw.rules)
    }
}

impl RuleBase {
    pub fn new(rules: Vec<Recommendation>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::EmptyRuleBase);
        }
        let mut ids = BTreeSet::new();
        for r in &rules {
            if r.attributes.is_empty() {
                return Err(Error::EmptyRule(r.id.clone()));
            }
            if !ids.insert(r.id.as_str()) {
                return Err(Error::DuplicateRuleId(r.id.clone()));
            }
        }
        Ok(RuleBase { rules })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn rules(&self) -> &[Recommendation] {
        &self.rules
    }

    /// Every attribute names a term that exists in `cfg`.
    pub fn check_against(&self, cfg: &MembershipConfig) -> Result<()> {
        for attr in self.rules.iter().flat_map(|r| &r.attributes) {
            cfg.term(attr.category, attr.quantity, &attr.term)?;
        }
        Ok(())
    }
}

/// Degree of one attribute: the category's hours or score evaluated against
/// the named term.
pub fn attribute_membership(
    bd: &CategoryBreakdown,
    cfg: &MembershipConfig,
    attr: &Attribute,
) -> Result<f64> {
    let mf = cfg.term(attr.category, attr.quantity, &attr.term)?;
    Ok(mf.eval(bd.crisp(attr.category, attr.quantity)))
}

/// Equal-weight mean of the attribute degrees.
pub fn rule_score(degrees: &[f64]) -> Result<f64> {
    if degrees.is_empty() {
        return Err(Error::EmptyDegrees);
    }
    Ok(degrees.iter().sum::<f64>() / degrees.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub id: String,
    pub text: String,
    /// Position in the rule base.
    pub position: usize,
    pub degrees: Vec<f64>,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecommendationReport {
    /// All rules, by score descending; equal scores keep rule-base order.
    pub rules: Vec<RuleOutcome>,
    pub chosen: String,
    pub chosen_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl RecommendationReport {
    pub fn chosen_outcome(&self) -> &RuleOutcome {
        &self.rules[0]
    }

    pub fn outcome(&self, id: &str) -> Option<&RuleOutcome> {
        self.rules.iter().find(|r| r.id == id)
    }
}

fn evaluate_rule(
    position: usize,
    rule: &Recommendation,
    bd: &CategoryBreakdown,
    cfg: &MembershipConfig,
) -> Result<RuleOutcome> {
    let degrees = rule
        .attributes
        .iter()
        .map(|a| attribute_membership(bd, cfg, a))
        .collect::<Result<Vec<_>>>()?;
    let score = rule_score(&degrees)?;
    Ok(RuleOutcome {
        id: rule.id.clone(),
        text: rule.text.clone(),
        position,
        degrees,
        score,
    })
}

pub fn recommend(
    bd: &CategoryBreakdown,
    cfg: &MembershipConfig,
    rules: &RuleBase,
) -> Result<RecommendationReport> {
    recommend_with(bd, cfg, rules, Execution::Auto)
}

pub fn recommend_with(
    bd: &CategoryBreakdown,
    cfg: &MembershipConfig,
    rules: &RuleBase,
    exec: Execution,
) -> Result<RecommendationReport> {
    let indexed: Vec<(usize, &Recommendation)> = rules.rules.iter().enumerate().collect();
    let mut outcomes = map_items(&indexed, exec, |(i, r)| evaluate_rule(*i, r, bd, cfg))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    // stable: ties keep rule-base order, so the first row is the earliest maximum
    outcomes.sort_by(|x, y| y.score.total_cmp(&x.score));
    let best = outcomes.first().ok_or(Error::EmptyRuleBase)?;
    let warning = (best.score == 0.0)
        .then(|| "every rule scored 0; the first rule is reported by default".to_string());
    Ok(RecommendationReport {
        chosen: best.id.clone(),
        chosen_text: best.text.clone(),
        warning,
        rules: outcomes,
    })
}

/// Breakdown and report of one day.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DayAnalysis {
    pub breakdown: CategoryBreakdown,
    pub report: RecommendationReport,
}

pub fn analyze_day(
    log: &DayLog,
    catalog: &TagCatalog,
    cfg: &MembershipConfig,
    rules: &RuleBase,
) -> Result<DayAnalysis> {
    let bd = breakdown(log, catalog);
    let report = recommend_with(&bd, cfg, rules, Execution::Sequential)?;
    Ok(DayAnalysis {
        breakdown: bd,
        report,
    })
}

/// Analyze many days; the batch is spread over the pool, each day runs
/// sequentially.
pub fn analyze_batch(
    logs: &[DayLog],
    catalog: &TagCatalog,
    cfg: &MembershipConfig,
    rules: &RuleBase,
    exec: Execution,
) -> Vec<Result<DayAnalysis>> {
    map_items(logs, exec, |log| analyze_day(log, catalog, cfg, rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::{term_names, LinguisticVariable, TrapezoidMF};

    /// Every term is the same wide trapezoid unless overridden.
    fn config_with(overrides: &[(CategoryId, Quantity, &str, [f64; 4])]) -> MembershipConfig {
        let mut vars = Vec::new();
        for c in CategoryId::ALL {
            for q in Quantity::ALL {
                let terms = term_names(c, q).iter().map(|t| {
                    let p = overrides
                        .iter()
                        .find(|o| o.0 == c && o.1 == q && o.2 == *t)
                        .map(|o| o.3)
                        .unwrap_or([0.0, 10.0, 20.0, 30.0]);
                    (*t, TrapezoidMF::try_from(p).unwrap())
                });
                vars.push(LinguisticVariable::new(c, q, terms).unwrap());
            }
        }
        MembershipConfig::new(vars).unwrap()
    }

    fn rule(id: &str, attrs: Vec<Attribute>) -> Recommendation {
        Recommendation {
            id: id.into(),
            text: format!("text {id}"),
            attributes: attrs,
        }
    }

    #[test]
    fn rule_scores() {
        assert_eq!(rule_score(&[1.0, 0.8, 1.0, 1.0]).unwrap(), 0.95);
        assert_eq!(rule_score(&[0.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(rule_score(&[0.7]).unwrap(), 0.7);
        assert!(matches!(rule_score(&[]), Err(Error::EmptyDegrees)));
    }

    #[test]
    fn attribute_membership_core_and_outside() {
        let cfg = config_with(&[]);
        let mut bd = CategoryBreakdown::default();
        bd.totals[CategoryId::Work].time = 15.0;
        bd.totals[CategoryId::Work].score = 99.0;
        let t = Attribute::new(CategoryId::Work, Quantity::Time, "industrious");
        let s = Attribute::new(CategoryId::Work, Quantity::Score, "high_score");
        assert_eq!(attribute_membership(&bd, &cfg, &t).unwrap(), 1.0);
        assert_eq!(attribute_membership(&bd, &cfg, &s).unwrap(), 0.0);
    }

    #[test]
    fn ideal_score_reading() {
        let cfg = config_with(&[(
            CategoryId::Health,
            Quantity::Score,
            "ideal_score",
            [11.25, 29.75, 42.0, 50.0],
        )]);
        let mut bd = CategoryBreakdown::default();
        bd.totals[CategoryId::Health].score = 17.0;
        let a = Attribute::new(CategoryId::Health, Quantity::Score, "ideal_score");
        let mu = attribute_membership(&bd, &cfg, &a).unwrap();
        assert!((mu - 0.310).abs() < 0.001);
    }

    #[test]
    fn unknown_term_names_the_slot() {
        let cfg = config_with(&[]);
        let a = Attribute::new(CategoryId::Leisure, Quantity::Time, "sleepy");
        let err = attribute_membership(&CategoryBreakdown::default(), &cfg, &a).unwrap_err();
        assert_eq!(
            err.to_string(),
            "unknown linguistic term leisure/time/sleepy"
        );
    }

    #[test]
    fn ties_go_to_the_first_rule() {
        let cfg = config_with(&[]);
        let attrs = vec![Attribute::new(
            CategoryId::Social,
            Quantity::Time,
            "reserved",
        )];
        let rules = RuleBase::new(vec![rule("A", attrs.clone()), rule("B", attrs)]).unwrap();
        let mut bd = CategoryBreakdown::default();
        bd.totals[CategoryId::Social].time = 5.0;
        let report = recommend(&bd, &cfg, &rules).unwrap();
        assert_eq!(report.rules[0].score, report.rules[1].score);
        assert_eq!(report.chosen, "A");
        assert!(report.warning.is_none());
    }

    #[test]
    fn zero_singleton_still_chosen_with_warning() {
        let cfg = config_with(&[]);
        let rules = RuleBase::new(vec![rule(
            "only",
            vec![Attribute::new(
                CategoryId::Other,
                Quantity::Score,
                "low_score",
            )],
        )])
        .unwrap();
        let report = recommend(&CategoryBreakdown::default(), &cfg, &rules).unwrap();
        assert_eq!(report.chosen, "only");
        assert_eq!(report.rules[0].score, 0.0);
        assert!(report.warning.is_some());
    }

    #[test]
    fn rule_base_validation() {
        assert!(matches!(RuleBase::new(vec![]), Err(Error::EmptyRuleBase)));
        assert!(matches!(
            RuleBase::new(vec![rule("x", vec![])]),
            Err(Error::EmptyRule(_))
        ));
        let a = vec![Attribute::new(
            CategoryId::Social,
            Quantity::Time,
            "reserved",
        )];
        assert!(matches!(
            RuleBase::new(vec![rule("x", a.clone()), rule("x", a)]),
            Err(Error::DuplicateRuleId(_))
        ));
        assert!(RuleBase::from_json_str(r#"{"rules": []}"#).is_err());
    }

    #[test]
    fn rule_json_canonicalizes_less_score() {
        let rb = RuleBase::from_json_str(
            r#"{"rules": [{"id": "R3", "text": "Family matters.", "attributes": [
                {"category": "social", "kind": "score", "term": "less_score"}]}]}"#,
        )
        .unwrap();
        assert_eq!(rb.rules()[0].attributes[0].term, "low_score");
    }

    #[test]
    fn check_against_catches_bad_terms() {
        let cfg = config_with(&[]);
        let rb = RuleBase::new(vec![rule(
            "x",
            vec![Attribute::new(CategoryId::Health, Quantity::Time, "hectic")],
        )])
        .unwrap();
        assert!(rb.check_against(&cfg).is_err());
        assert!(recommend(&CategoryBreakdown::default(), &cfg, &rb).is_err());
    }
}
