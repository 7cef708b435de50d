//! Per-category crisp inputs: total hours `K` and weighted score `M`.
//!
//! A visit contributes its full duration to every category its tag belongs
//! to, so the category hours of a day may add up to more than 24.

use crate::exec::{map_items, Execution};
use crate::model::{CategoryBreakdown, CategoryId, DayLog, TagCatalog, Visit};

fn visit_weight(catalog: &TagCatalog, visit: &Visit, cat: CategoryId) -> Option<f64> {
    // DayLog guarantees no home visits
    catalog.weight(&visit.tag, cat)
}

/// Hours spent in `cat`: visits whose tag belongs to it plus the home allocation.
pub fn category_time(log: &DayLog, catalog: &TagCatalog, cat: CategoryId) -> f64 {
    let away: f64 = log
        .visits()
        .iter()
        .filter(|v| visit_weight(catalog, v, cat).is_some())
        .map(|v| v.hours)
        .sum();
    away + log.home().allocation(cat)
}

/// Weighted score of `cat`: hours times intensity, summed over visits, plus
/// the home allocation times the home weight.
pub fn category_score(log: &DayLog, catalog: &TagCatalog, cat: CategoryId) -> f64 {
    let away: f64 = log
        .visits()
        .iter()
        .filter_map(|v| visit_weight(catalog, v, cat).map(|w| v.hours * w))
        .sum();
    away + log.home().allocation(cat) * log.home().weight(cat)
}

pub fn breakdown(log: &DayLog, catalog: &TagCatalog) -> CategoryBreakdown {
    let mut out = CategoryBreakdown::default();
    for cat in CategoryId::ALL {
        out.totals[cat].time = category_time(log, catalog, cat);
        out.totals[cat].score = category_score(log, catalog, cat);
    }
    out
}

/// Breakdown of many day logs against one catalog.
pub fn breakdown_batch(
    logs: &[DayLog],
    catalog: &TagCatalog,
    exec: Execution,
) -> Vec<CategoryBreakdown> {
    map_items(logs, exec, |log| breakdown(log, catalog))
}
