use proptest::prelude::*;

use lifestyle_core::ingest::{
    detect_stay_points, haversine, resolve_poi, GpsPoint, LatLon, PoiDatabase, PoiEntry,
    StayPointParams,
};
use lifestyle_core::membership::{quartiles, term_names};
use lifestyle_core::{
    breakdown, mf_from_samples, recommend_with, rule_score, Attribute, CategoryBreakdown,
    CategoryId, DayLog, Execution, HomeProfile, LinguisticVariable, MembershipConfig, PerCategory,
    Quantity, Recommendation, RuleBase, Tag, TagCatalog, TrapezoidMF, Visit,
};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn catalog() -> TagCatalog {
    TagCatalog::default()
        .with("university", &[(CategoryId::Work, 50.0)])
        .with("hospital", &[(CategoryId::Health, -20.0)])
        .with(
            "amusement_park",
            &[(CategoryId::Social, 30.0), (CategoryId::Leisure, 40.0)],
        )
        .with("cafe", &[(CategoryId::Social, 20.0)])
        .with(
            "bank",
            &[(CategoryId::Work, 100.0), (CategoryId::Other, -100.0)],
        )
}

const TAGS: [&str; 6] = [
    "university",
    "hospital",
    "amusement_park",
    "cafe",
    "bank",
    "uncatalogued",
];

fn arb_visits() -> impl Strategy<Value = Vec<Visit>> {
    prop::collection::vec((0..TAGS.len(), 0.0..8.0f64), 0..10).prop_map(|vs| {
        vs.into_iter()
            .map(|(i, h)| Visit::new(Tag::new(TAGS[i]).unwrap(), h).unwrap())
            .collect()
    })
}

fn arb_per_category(range: std::ops::Range<f64>) -> impl Strategy<Value = PerCategory<f64>> {
    prop::array::uniform5(range).prop_map(|a| PerCategory::from_fn(|c| a[c as usize]))
}

fn arb_home() -> impl Strategy<Value = (PerCategory<f64>, f64)> {
    (arb_per_category(0.0..3.0), 0.0..4.0f64)
}

fn home(alloc: PerCategory<f64>, extra: f64, weights: PerCategory<f64>) -> HomeProfile {
    let total = alloc.iter().map(|(_, h)| *h).sum::<f64>() + extra;
    HomeProfile::new(total, alloc, weights).unwrap()
}

proptest! {
    #[test]
    fn aggregation_is_additive(
        v1 in arb_visits(), v2 in arb_visits(),
        (a1, e1) in arb_home(), (a2, e2) in arb_home(),
        weights in arb_per_category(-100.0..100.0),
    ) {
        let cat = catalog();
        let h1 = home(a1, e1, weights);
        let h2 = home(a2, e2, weights);
        let joined_alloc = PerCategory::from_fn(|c| h1.allocation(c) + h2.allocation(c));
        let joined_home = HomeProfile::new(h1.total_hours() + h2.total_hours(), joined_alloc, weights).unwrap();
        let joined = DayLog::new(v1.iter().chain(&v2).cloned().collect(), joined_home).unwrap();
        let b1 = breakdown(&DayLog::new(v1, h1).unwrap(), &cat);
        let b2 = breakdown(&DayLog::new(v2, h2).unwrap(), &cat);
        let bj = breakdown(&joined, &cat);
        for c in CategoryId::ALL {
            prop_assert!(close(bj.time(c), b1.time(c) + b2.time(c)));
            prop_assert!(close(bj.score(c), b1.score(c) + b2.score(c)));
        }
    }

    #[test]
    fn score_is_bounded_by_hours(
        visits in arb_visits(), (alloc, extra) in arb_home(),
        weights in arb_per_category(-100.0..100.0),
    ) {
        let bd = breakdown(&DayLog::new(visits, home(alloc, extra, weights)).unwrap(), &catalog());
        for c in CategoryId::ALL {
            prop_assert!(bd.time(c) >= 0.0);
            prop_assert!(bd.score(c).abs() <= 100.0 * bd.time(c) + 1e-9);
        }
    }

    #[test]
    fn aggregation_scales_linearly(
        visits in arb_visits(), (alloc, extra) in arb_home(),
        weights in arb_per_category(-100.0..100.0), lambda in 0.0..5.0f64,
    ) {
        let cat = catalog();
        let h = home(alloc, extra, weights);
        let scaled_visits: Vec<Visit> = visits
            .iter()
            .map(|v| Visit::new(v.tag.clone(), v.hours * lambda).unwrap())
            .collect();
        let scaled_home = HomeProfile::new(
            h.total_hours() * lambda,
            h.allocations().map(|_, a| a * lambda),
            weights,
        ).unwrap();
        let base = breakdown(&DayLog::new(visits, h).unwrap(), &cat);
        let scaled = breakdown(&DayLog::new(scaled_visits, scaled_home).unwrap(), &cat);
        for c in CategoryId::ALL {
            prop_assert!(close(scaled.time(c), lambda * base.time(c)));
            prop_assert!(close(scaled.score(c), lambda * base.score(c)));
        }
    }

    #[test]
    fn visit_order_is_irrelevant(visits in arb_visits(), seed in any::<u64>()) {
        let cat = catalog();
        let mut shuffled = visits.clone();
        // deterministic Fisher-Yates driven by the seed
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = breakdown(&DayLog::new(visits, HomeProfile::default()).unwrap(), &cat);
        let b = breakdown(&DayLog::new(shuffled, HomeProfile::default()).unwrap(), &cat);
        for c in CategoryId::ALL {
            prop_assert!(close(a.time(c), b.time(c)));
            prop_assert!(close(a.score(c), b.score(c)));
        }
    }

    #[test]
    fn day_log_json_round_trip(
        visits in arb_visits(), (alloc, extra) in arb_home(),
        weights in arb_per_category(-100.0..100.0),
    ) {
        let log = DayLog::new(visits, home(alloc, extra, weights)).unwrap();
        let back = DayLog::from_json_str(&serde_json::to_string(&log).unwrap()).unwrap();
        prop_assert_eq!(breakdown(&back, &catalog()), breakdown(&log, &catalog()));
    }
}

fn arb_trapezoid() -> impl Strategy<Value = TrapezoidMF> {
    prop::array::uniform4(-500.0..500.0f64).prop_map(|mut p| {
        p.sort_by(f64::total_cmp);
        TrapezoidMF::try_from(p).unwrap()
    })
}

proptest! {
    #[test]
    fn trapezoid_range_and_shape(mf in arb_trapezoid(), xs in prop::collection::vec(-600.0..600.0f64, 2..20)) {
        let [a, b, c, d] = mf.params();
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        for w in xs.windows(2) {
            let (x, y) = (w[0], w[1]);
            let (fx, fy) = (mf.eval(x), mf.eval(y));
            prop_assert!((0.0..=1.0).contains(&fx));
            if y <= b { prop_assert!(fx <= fy); }
            if x >= c { prop_assert!(fx >= fy); }
        }
        for &x in &xs {
            if x >= b && x <= c { prop_assert_eq!(mf.eval(x), 1.0); }
            if x < a || x > d { prop_assert_eq!(mf.eval(x), 0.0); }
        }
    }

    #[test]
    fn calibration_is_ordered_and_contains_samples(samples in prop::collection::vec(-200.0..200.0f64, 1..60)) {
        let mf = mf_from_samples(&samples).unwrap();
        let [a, b, c, d] = mf.params();
        prop_assert!(a <= b && b <= c && c <= d);
        for &s in &samples {
            if s != a && s != d {
                prop_assert!(mf.eval(s) > 0.0);
            }
        }
    }

    #[test]
    fn quartile_ranks_hit_order_statistics(k in 1usize..12, raw in prop::collection::vec(-50.0..50.0f64, 48)) {
        // n = 4k - 1 makes (n + 1) / 4 integral
        let n = 4 * k - 1;
        let mut sorted = raw[..n].to_vec();
        sorted.sort_by(f64::total_cmp);
        let q = quartiles(&raw[..n]).unwrap();
        prop_assert_eq!(q.q1, sorted[k - 1]);
        prop_assert_eq!(q.median, sorted[2 * k - 1]);
        prop_assert_eq!(q.q3, sorted[3 * k - 1]);
    }
}

fn config() -> MembershipConfig {
    let vars = CategoryId::ALL.into_iter().flat_map(|c| {
        Quantity::ALL.into_iter().map(move |q| {
            let terms = term_names(c, q).iter().enumerate().map(|(i, t)| {
                let lo = i as f64 * 5.0 - 5.0;
                (
                    *t,
                    TrapezoidMF::new(lo, lo + 3.0, lo + 6.0, lo + 9.0).unwrap(),
                )
            });
            LinguisticVariable::new(c, q, terms).unwrap()
        })
    });
    MembershipConfig::new(vars).unwrap()
}

fn arb_attribute() -> impl Strategy<Value = Attribute> {
    (0..5usize, 0..2usize, 0..3usize).prop_map(|(c, q, t)| {
        let (c, q) = (CategoryId::ALL[c], Quantity::ALL[q]);
        let names = term_names(c, q);
        Attribute::new(c, q, names[t % names.len()])
    })
}

fn arb_rule_base() -> impl Strategy<Value = RuleBase> {
    prop::collection::vec(prop::collection::vec(arb_attribute(), 1..=6), 1..=5).prop_map(|rules| {
        RuleBase::new(
            rules
                .into_iter()
                .enumerate()
                .map(|(i, attributes)| Recommendation {
                    id: format!("R{}", i + 1),
                    text: format!("rule {}", i + 1),
                    attributes,
                })
                .collect(),
        )
        .unwrap()
    })
}

fn arb_breakdown() -> impl Strategy<Value = CategoryBreakdown> {
    prop::collection::vec(-10.0..20.0f64, 10).prop_map(|v| {
        let mut bd = CategoryBreakdown::default();
        for (i, c) in CategoryId::ALL.into_iter().enumerate() {
            bd.totals[c].time = v[2 * i].abs();
            bd.totals[c].score = v[2 * i + 1];
        }
        bd
    })
}

proptest! {
    #[test]
    fn rule_score_bounds(degrees in prop::collection::vec(0.0..=1.0f64, 1..10)) {
        let rho = rule_score(&degrees).unwrap();
        prop_assert!((0.0..=1.0).contains(&rho));
        prop_assert_eq!(rho == 0.0, degrees.iter().all(|d| *d == 0.0));
        let ones = vec![1.0; degrees.len()];
        prop_assert_eq!(rule_score(&ones).unwrap(), 1.0);
        let mut rev = degrees.clone();
        rev.reverse();
        prop_assert!(close(rule_score(&rev).unwrap(), rho));
    }

    #[test]
    fn rule_score_is_monotone(degrees in prop::collection::vec(0.0..=1.0f64, 1..10), idx in any::<prop::sample::Index>(), bump in 0.0..=1.0f64) {
        let i = idx.index(degrees.len());
        let mut raised = degrees.clone();
        raised[i] = raised[i].max(bump);
        prop_assert!(rule_score(&raised).unwrap() >= rule_score(&degrees).unwrap());
    }

    #[test]
    fn recommend_matches_brute_force(rules in arb_rule_base(), bd in arb_breakdown()) {
        let cfg = config();
        let report = recommend_with(&bd, &cfg, &rules, Execution::Auto).unwrap();
        let seq = recommend_with(&bd, &cfg, &rules, Execution::Sequential).unwrap();
        prop_assert_eq!(&report, &seq);
        // independent evaluation: mean of trapezoid degrees, first maximum wins
        let mut best: Option<(usize, f64)> = None;
        for (i, r) in rules.rules().iter().enumerate() {
            let mut total = 0.0;
            for a in &r.attributes {
                let [p, q, s, t] = cfg.term(a.category, a.quantity, &a.term).unwrap().params();
                let x = bd.crisp(a.category, a.quantity);
                total += if x < p || x > t { 0.0 }
                    else if x >= q && x <= s { 1.0 }
                    else if x < q { (x - p) / (q - p) }
                    else { (t - x) / (t - s) };
            }
            let mean = total / r.attributes.len() as f64;
            prop_assert!(close(report.outcome(&r.id).unwrap().score, mean));
            if best.is_none_or(|(_, b)| mean > b) {
                best = Some((i, mean));
            }
        }
        prop_assert_eq!(&report.chosen, &rules.rules()[best.unwrap().0].id);
        prop_assert!(report.rules.windows(2).all(|w| w[0].score >= w[1].score));
    }

    #[test]
    fn argmax_survives_rule_permutation(rules in arb_rule_base(), bd in arb_breakdown(), rot in 0usize..5) {
        let cfg = config();
        let report = recommend_with(&bd, &cfg, &rules, Execution::Auto).unwrap();
        let mut permuted = rules.rules().to_vec();
        let n = permuted.len();
        permuted.rotate_left(rot % n);
        permuted.reverse();
        let other = recommend_with(&bd, &cfg, &RuleBase::new(permuted).unwrap(), Execution::Auto).unwrap();
        let best = report.rules[0].score;
        let tied = report.rules.iter().filter(|r| r.score == best).count();
        if tied == 1 {
            prop_assert_eq!(&report.chosen, &other.chosen);
        } else {
            prop_assert_eq!(other.rules[0].score, best);
        }
    }
}

const T0: i64 = 1_700_035_200;

/// Random walk of dwells and jumps: each segment either stays put or moves
/// ~1.1 km per fix.
fn arb_trace() -> impl Strategy<Value = Vec<GpsPoint>> {
    prop::collection::vec((any::<bool>(), 1usize..60, 1i64..4), 1..8).prop_map(|segments| {
        let mut out = Vec::new();
        let (mut t, mut lat) = (T0, 10.0);
        for (still, len, step_min) in segments {
            for _ in 0..len {
                out.push(GpsPoint::new(t, lat, 20.0).unwrap());
                t += step_min * 60;
                if !still {
                    lat += 0.01;
                }
            }
            lat += 0.01;
        }
        out
    })
}

proptest! {
    #[test]
    fn stays_are_ordered_disjoint_and_within_span(trace in arb_trace()) {
        let stays = detect_stay_points(&trace, &StayPointParams::default()).unwrap();
        for w in stays.windows(2) {
            prop_assert!(w[0].departure < w[1].arrival);
        }
        for s in &stays {
            prop_assert!(s.departure > s.arrival);
            prop_assert!(s.duration_hours() * 60.0 >= 20.0);
        }
        let covered: i64 = stays.iter().map(|s| s.departure - s.arrival).sum();
        prop_assert!(covered <= trace.last().unwrap().timestamp - trace[0].timestamp);
    }

    #[test]
    fn shorter_dwell_keeps_longer_dwell_stays(trace in arb_trace(), long in 10.0..60.0f64, short_frac in 0.1..1.0f64) {
        let long_params = StayPointParams { min_dwell_min: long, ..Default::default() };
        let short_params = StayPointParams { min_dwell_min: long * short_frac, ..Default::default() };
        let long_stays = detect_stay_points(&trace, &long_params).unwrap();
        let short_stays = detect_stay_points(&trace, &short_params).unwrap();
        for s in &long_stays {
            prop_assert!(
                short_stays.iter().any(|x| x.arrival <= s.arrival && s.arrival <= x.departure),
                "stay arriving at {} lost", s.arrival
            );
        }
    }

    #[test]
    fn haversine_is_symmetric(a in -90.0..90.0f64, b in -180.0..180.0f64, c in -90.0..90.0f64, d in -180.0..180.0f64) {
        let p = LatLon::new(a, b).unwrap();
        let q = LatLon::new(c, d).unwrap();
        prop_assert_eq!(haversine(p, q), haversine(q, p));
        prop_assert!(haversine(p, q) >= 0.0);
    }

    #[test]
    fn resolve_is_deterministic(lat in 9.99..10.01f64, lon in 19.99..20.01f64) {
        let spot = LatLon::new(10.0, 20.0).unwrap();
        let db = PoiDatabase {
            home: Some(LatLon::new(0.0, 0.0).unwrap()),
            work: Some(LatLon::new(1.0, 1.0).unwrap()),
            pois: vec![
                PoiEntry::new("a", spot, Tag::new("gym").unwrap()),
                PoiEntry::new("b", spot, Tag::new("pool").unwrap()),
                PoiEntry::new("c", LatLon::new(10.0005, 20.0).unwrap(), Tag::new("cafe").unwrap()),
            ],
        };
        let p = LatLon::new(lat, lon).unwrap();
        let params = StayPointParams::default();
        let first = resolve_poi(&db, p, &params).unwrap();
        prop_assert_eq!(&first, &resolve_poi(&db, p, &params).unwrap());
        prop_assert_ne!(first.as_str(), "pool");
    }
}
