//! Domain model: categories, tags, the tag catalog, visits, the home profile
//! and the per-category breakdown of crisp inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Intensity weights (tag and home) are bounded to this magnitude.
pub const WEIGHT_LIMIT: f64 = 100.0;

/// Weight applied to tags missing from the catalog, which fall into `other`.
pub const DEFAULT_OTHER_WEIGHT: f64 = 10.0;

/// Slack allowed when comparing accumulated hour sums.
pub(crate) const HOURS_EPS: f64 = 1e-9;

/// The five lifestyle domains. `Other` is the complement of the first four.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CategoryId {
    Social,
    Leisure,
    Health,
    Work,
    Other,
}

impl CategoryId {
    pub const ALL: [CategoryId; 5] = [
        CategoryId::Social,
        CategoryId::Leisure,
        CategoryId::Health,
        CategoryId::Work,
        CategoryId::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryId::Social => "social",
            CategoryId::Leisure => "leisure",
            CategoryId::Health => "health",
            CategoryId::Work => "work",
            CategoryId::Other => "other",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CategoryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CategoryId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCategory(s.to_string()))
    }
}

/// Which crisp quantity of a category is being fuzzified: hours or weighted score.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Time,
    Score,
}

impl Quantity {
    pub const ALL: [Quantity; 2] = [Quantity::Time, Quantity::Score];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Time => "time",
            Quantity::Score => "score",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(Quantity::Time),
            "score" => Ok(Quantity::Score),
            other => Err(Error::InvalidSamples(format!(
                "unknown quantity `{other}` (expected `time` or `score`)"
            ))),
        }
    }
}

/// One value per category, addressed by [`CategoryId`].
///
/// Serializes as a JSON object keyed by category name. Missing keys
/// deserialize to `T::default()`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PerCategory<T>([T; 5]);

impl<T> PerCategory<T> {
    pub fn from_fn(mut f: impl FnMut(CategoryId) -> T) -> Self {
        PerCategory(CategoryId::ALL.map(&mut f))
    }

    pub fn iter(&self) -> impl Iterator<Item = (CategoryId, &T)> {
        CategoryId::ALL.into_iter().zip(self.0.iter())
    }

    pub fn map<U>(&self, mut f: impl FnMut(CategoryId, &T) -> U) -> PerCategory<U> {
        PerCategory::from_fn(|c| f(c, &self[c]))
    }
}

impl<T> Index<CategoryId> for PerCategory<T> {
    type Output = T;

    fn index(&self, c: CategoryId) -> &T {
        &self.0[c.index()]
    }
}

impl<T> IndexMut<CategoryId> for PerCategory<T> {
    fn index_mut(&mut self, c: CategoryId) -> &mut T {
        &mut self.0[c.index()]
    }
}

impl<T: Serialize> Serialize for PerCategory<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        for (c, v) in self.iter() {
            map.serialize_entry(c.as_str(), v)?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de> + Default> Deserialize<'de> for PerCategory<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PerCategoryVisitor<T>(std::marker::PhantomData<T>);

        impl<'de, T: Deserialize<'de> + Default> Visitor<'de> for PerCategoryVisitor<T> {
            type Value = PerCategory<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object keyed by category name")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = PerCategory::<T>::default();
                let mut seen = BTreeSet::new();
                while let Some(key) = access.next_key::<CategoryId>()? {
                    if !seen.insert(key) {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate category `{key}`"
                        )));
                    }
                    out[key] = access.next_value()?;
                }
                Ok(out)
            }
        }

        deserializer.deserialize_map(PerCategoryVisitor(std::marker::PhantomData))
    }
}

/// A location tag such as `gym` or `cafe`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tag(String);

impl Tag {
    pub const HOME: &'static str = "home";
    pub const WORK: &'static str = "work";
    /// Stay points with no point of interest in range.
    pub const UNKNOWN: &'static str = "unknown";
    /// Gaps between stay points.
    pub const TRAVEL: &'static str = "travel";

    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::EmptyTag);
        }
        Ok(Tag(name))
    }

    pub fn home() -> Self {
        Tag(Self::HOME.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_home(&self) -> bool {
        self.0 == Self::HOME
    }
}

impl TryFrom<String> for Tag {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Tag::new(s)
    }
}

impl From<Tag> for String {
    fn from(t: Tag) -> String {
        t.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Per-category intensity weights of every known tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TagCatalog {
    #[serde(rename = "tags", default)]
    pub entries: BTreeMap<Tag, BTreeMap<CategoryId, f64>>,
    #[serde(default = "default_other_weight")]
    pub default_other_weight: f64,
}

fn default_other_weight() -> f64 {
    DEFAULT_OTHER_WEIGHT
}

impl Default for TagCatalog {
    fn default() -> Self {
        TagCatalog {
            entries: BTreeMap::new(),
            default_other_weight: DEFAULT_OTHER_WEIGHT,
        }
    }
}

impl TagCatalog {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn insert(&mut self, tag: Tag, weights: impl IntoIterator<Item = (CategoryId, f64)>) {
        self.entries.insert(tag, weights.into_iter().collect());
    }

    pub fn with(mut self, tag: &str, weights: &[(CategoryId, f64)]) -> Self {
        self.insert(
            Tag::new(tag).expect("non-empty tag"),
            weights.iter().copied(),
        );
        self
    }

    /// Merge `other` into this catalog; per-category weights in `other` win.
    pub fn merge(&mut self, other: &TagCatalog) {
        for (tag, weights) in &other.entries {
            let slot = self.entries.entry(tag.clone()).or_default();
            slot.extend(weights.iter().map(|(c, w)| (*c, *w)));
        }
    }

    /// Catalog entry for a tag; an empty entry counts as absent.
    fn entry(&self, tag: &Tag) -> Option<&BTreeMap<CategoryId, f64>> {
        self.entries.get(tag).filter(|m| !m.is_empty())
    }

    /// Intensity of `tag` with respect to `cat`, or `None` when the tag does
    /// not belong to the category. Uncatalogued tags belong to `other` at
    /// the default weight.
    pub fn weight(&self, tag: &Tag, cat: CategoryId) -> Option<f64> {
        match self.entry(tag) {
            Some(weights) => weights.get(&cat).copied(),
            None if cat == CategoryId::Other => Some(self.default_other_weight),
            None => None,
        }
    }
}

/// Which catalog rule a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    WeightOutOfRange,
    AllZeroMultiCategory,
    HomeInCatalog,
    DefaultWeightOutOfRange,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub tag: Option<String>,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            Some(tag) => write!(f, "{tag}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn in_weight_range(w: f64) -> bool {
    w.is_finite() && (-WEIGHT_LIMIT..=WEIGHT_LIMIT).contains(&w)
}

/// Check every catalog invariant and report each breach. An empty result
/// means the catalog is valid.
pub fn validate_catalog(catalog: &TagCatalog) -> Vec<Violation> {
    let mut out = Vec::new();
    if !in_weight_range(catalog.default_other_weight) {
        out.push(Violation {
            tag: None,
            kind: ViolationKind::DefaultWeightOutOfRange,
            message: format!(
                "default_other_weight {} is outside [-100, 100]",
                catalog.default_other_weight
            ),
        });
    }
    for (tag, weights) in &catalog.entries {
        if tag.is_home() {
            out.push(Violation {
                tag: Some(tag.to_string()),
                kind: ViolationKind::HomeInCatalog,
                message: "home is configured through the home profile, not the catalog".into(),
            });
        }
        for (cat, w) in weights {
            if !in_weight_range(*w) {
                out.push(Violation {
                    tag: Some(tag.to_string()),
                    kind: ViolationKind::WeightOutOfRange,
                    message: format!("{cat} weight {w} is outside [-100, 100]"),
                });
            }
        }
        if weights.len() >= 2 && weights.values().all(|w| *w == 0.0) {
            out.push(Violation {
                tag: Some(tag.to_string()),
                kind: ViolationKind::AllZeroMultiCategory,
                message: format!(
                    "belongs to {} categories but every weight is 0",
                    weights.len()
                ),
            });
        }
    }
    out
}

/// Categories a tag belongs to. Tags without a catalog entry belong to `other`.
pub fn categories_of(catalog: &TagCatalog, tag: &Tag) -> Result<BTreeSet<CategoryId>> {
    if tag.is_home() {
        return Err(Error::HomeTag);
    }
    Ok(match catalog.entry(tag) {
        Some(weights) => weights.keys().copied().collect(),
        None => BTreeSet::from([CategoryId::Other]),
    })
}

/// Time spent at one tagged location.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVisit")]
pub struct Visit {
    pub tag: Tag,
    pub hours: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<i64>,
}

#[derive(Deserialize)]
struct RawVisit {
    tag: Tag,
    hours: f64,
    #[serde(default)]
    start: Option<i64>,
}

impl TryFrom<RawVisit> for Visit {
    type Error = Error;

    fn try_from(raw: RawVisit) -> Result<Self> {
        let mut v = Visit::new(raw.tag, raw.hours)?;
        v.start = raw.start;
        Ok(v)
    }
}

impl Visit {
    pub fn new(tag: Tag, hours: f64) -> Result<Self> {
        if !hours.is_finite() || hours < 0.0 {
            return Err(Error::InvalidVisit(format!(
                "duration {hours} at `{tag}` must be a non-negative number of hours"
            )));
        }
        Ok(Visit {
            tag,
            hours,
            start: None,
        })
    }
}

/// Time spent at the registered home and how it splits across categories.
///
/// Allocations are normalized on construction: any unallocated home time is
/// added to leisure, and over-allocation is rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHomeProfile")]
pub struct HomeProfile {
    total_hours: f64,
    allocations: PerCategory<f64>,
    weights: PerCategory<f64>,
}

#[derive(Deserialize)]
struct RawHomeProfile {
    #[serde(default)]
    total_hours: Option<f64>,
    #[serde(default)]
    allocations: PerCategory<f64>,
    #[serde(default)]
    weights: PerCategory<f64>,
}

impl TryFrom<RawHomeProfile> for HomeProfile {
    type Error = Error;

    fn try_from(raw: RawHomeProfile) -> Result<Self> {
        let total = raw
            .total_hours
            .unwrap_or_else(|| raw.allocations.iter().map(|(_, h)| *h).sum());
        HomeProfile::new(total, raw.allocations, raw.weights)
    }
}

impl Default for HomeProfile {
    fn default() -> Self {
        HomeProfile {
            total_hours: 0.0,
            allocations: PerCategory::default(),
            weights: PerCategory::default(),
        }
    }
}

impl HomeProfile {
    pub fn new(
        total_hours: f64,
        mut allocations: PerCategory<f64>,
        weights: PerCategory<f64>,
    ) -> Result<Self> {
        if !total_hours.is_finite() || total_hours < 0.0 {
            return Err(Error::InvalidHomeProfile(format!(
                "total home time {total_hours} must be non-negative"
            )));
        }
        for (cat, h) in allocations.iter() {
            if !h.is_finite() || *h < 0.0 {
                return Err(Error::InvalidHomeProfile(format!(
                    "{cat} allocation {h} must be non-negative"
                )));
            }
        }
        for (cat, w) in weights.iter() {
            if !in_weight_range(*w) {
                return Err(Error::InvalidHomeProfile(format!(
                    "{cat} home weight {w} is outside [-100, 100]"
                )));
            }
        }
        let allocated: f64 = allocations.iter().map(|(_, h)| *h).sum();
        let slack = HOURS_EPS * total_hours.max(1.0);
        if allocated > total_hours + slack {
            return Err(Error::InvalidHomeProfile(format!(
                "allocations sum to {allocated} h, more than the {total_hours} h spent at home"
            )));
        }
        let remainder = total_hours - allocated;
        if remainder > slack {
            allocations[CategoryId::Leisure] += remainder;
        }
        Ok(HomeProfile {
            total_hours,
            allocations,
            weights,
        })
    }

    pub fn total_hours(&self) -> f64 {
        self.total_hours
    }

    pub fn allocation(&self, cat: CategoryId) -> f64 {
        self.allocations[cat]
    }

    pub fn weight(&self, cat: CategoryId) -> f64 {
        self.weights[cat]
    }

    pub fn allocations(&self) -> &PerCategory<f64> {
        &self.allocations
    }

    pub fn weights(&self) -> &PerCategory<f64> {
        &self.weights
    }
}

/// One analysis day: tagged visits away from home plus the home profile.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDayLog")]
pub struct DayLog {
    visits: Vec<Visit>,
    home: HomeProfile,
}

#[derive(Deserialize)]
struct RawDayLog {
    #[serde(default)]
    visits: Vec<Visit>,
    #[serde(default)]
    home: HomeProfile,
}

impl TryFrom<RawDayLog> for DayLog {
    type Error = Error;

    fn try_from(raw: RawDayLog) -> Result<Self> {
        DayLog::new(raw.visits, raw.home)
    }
}

impl DayLog {
    pub fn new(visits: Vec<Visit>, home: HomeProfile) -> Result<Self> {
        if visits.iter().any(|v| v.tag.is_home()) {
            return Err(Error::InvalidVisit(
                "home time belongs in the home profile, not the visit list".into(),
            ));
        }
        Ok(DayLog { visits, home })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn visits(&self) -> &[Visit] {
        &self.visits
    }

    pub fn home(&self) -> &HomeProfile {
        &self.home
    }
}

/// Total hours and weighted score of one category.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryTotals {
    pub time: f64,
    pub score: f64,
}

/// The crisp inputs of fuzzification: hours and score for every category.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CategoryBreakdown {
    pub totals: PerCategory<CategoryTotals>,
}

impl CategoryBreakdown {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn time(&self, cat: CategoryId) -> f64 {
        self.totals[cat].time
    }

    pub fn score(&self, cat: CategoryId) -> f64 {
        self.totals[cat].score
    }

    pub fn crisp(&self, cat: CategoryId, quantity: Quantity) -> f64 {
        match quantity {
            Quantity::Time => self.time(cat),
            Quantity::Score => self.score(cat),
        }
    }
}
