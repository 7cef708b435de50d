use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use lifestyle_core::ingest::{
    read_trace_csv, trace_to_daylog_with, LatLon, NearbyClient, PoiDatabase, PoiResolver,
};
use lifestyle_core::membership::{
    calibrate as fit, vote_share_warnings, weights_from_votes, CalibrationSamples, Polarity,
    VoteRecord,
};
use lifestyle_core::{
    analyze_day, recommend as score_rules, validate_catalog, CategoryBreakdown, CategoryId,
    DayAnalysis, DayLog, Execution, Quantity, Tag,
};
use serde::Serialize;

use crate::config::{load_json, read};
use crate::error::{CliError, Result};
use crate::render;
use crate::{ConfigArgs, Format};

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn calibrate(cfg: &ConfigArgs, samples: &Path, out: &Path) -> Result<()> {
    let text = read(samples)?;
    let parsed: CalibrationSamples = if text.trim().is_empty() {
        CalibrationSamples::new()
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::parse(samples, e))?
    };
    let cal = fit(&parsed)?;
    write_file(out, &to_json(&cal.config)?)?;

    let params = |d: &lifestyle_core::membership::TermDiagnostic| {
        cal.config
            .term(d.category, d.quantity, d.term)
            .map(|mf| mf.params())
            .unwrap_or([f64::NAN; 4])
    };
    let body = match cfg.format.unwrap_or(Format::Table) {
        Format::Json => to_json(&cal.diagnostics)?,
        Format::Table => render::diagnostics_table(&cal.diagnostics, params),
        Format::Csv => render::diagnostics_csv(&cal.diagnostics, params)?,
    };
    emit(&body)
}

/// Catalog fragment: parses as a catalog and merges into one.
#[derive(Serialize)]
struct Fragment {
    tags: BTreeMap<Tag, BTreeMap<CategoryId, f64>>,
}

pub fn weights(
    _cfg: &ConfigArgs,
    votes: &Path,
    category: CategoryId,
    out: Option<&Path>,
) -> Result<()> {
    let text = read(votes)?;
    let records: Vec<VoteRecord> = if text.trim().is_empty() {
        Vec::new()
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::parse(votes, e))?
    };
    let mut by_polarity: BTreeMap<Polarity, Vec<_>> = BTreeMap::new();
    for r in &records {
        by_polarity.entry(r.polarity).or_default().push(r.vote()?);
    }
    for w in vote_share_warnings(&records) {
        eprintln!("warning: {w}");
    }
    let mut tags = BTreeMap::new();
    for (polarity, votes) in &by_polarity {
        for (tag, w) in weights_from_votes(votes, *polarity) {
            tags.insert(tag, BTreeMap::from([(category, w)]));
        }
    }
    let body = to_json(&Fragment { tags })?;
    match out {
        Some(path) => write_file(path, &body),
        None => emit(&body),
    }
}

pub fn validate(cfg: &ConfigArgs) -> Result<()> {
    let mut lines = Vec::new();
    let mut problems = Vec::new();
    let mut any = false;

    if cfg.catalog.is_some() {
        any = true;
        match cfg.catalog() {
            Ok(catalog) => {
                let violations = validate_catalog(&catalog);
                if violations.is_empty() {
                    lines.push(format!("catalog: ok ({} tags)", catalog.entries.len()));
                }
                problems.extend(violations.iter().map(|v| format!("catalog: {v}")));
            }
            Err(e) => problems.push(format!("catalog: {e}")),
        }
    }
    let membership = cfg.membership.is_some().then(|| cfg.membership());
    if let Some(m) = &membership {
        any = true;
        match m {
            Ok(_) => lines.push("membership: ok".to_string()),
            Err(e) => problems.push(format!("membership: {e}")),
        }
    }
    if cfg.rules.is_some() {
        any = true;
        match cfg.rules() {
            Ok(rules) => match &membership {
                Some(Ok(m)) => match rules.check_against(m) {
                    Ok(()) => lines.push(format!("rules: ok ({} rules)", rules.rules().len())),
                    Err(e) => problems.push(format!("rules: {e}")),
                },
                _ => lines.push(format!("rules: ok ({} rules)", rules.rules().len())),
            },
            Err(e) => problems.push(format!("rules: {e}")),
        }
    }
    if cfg.poi_db.is_some() {
        any = true;
        match cfg
            .poi_db()
            .and_then(|db| Ok((db.registration()?, db.pois.len())))
        {
            Ok((_, n)) => lines.push(format!("poi-db: ok ({n} points of interest)")),
            Err(e) => problems.push(format!("poi-db: {e}")),
        }
    }
    if cfg.allocation.is_some() {
        any = true;
        match cfg.allocation() {
            Ok(_) => lines.push("allocation: ok".to_string()),
            Err(e) => problems.push(format!("allocation: {e}")),
        }
    }
    if cfg.home_weights.is_some() {
        any = true;
        match cfg.home_weights().and_then(|w| {
            match w.iter().find(|(_, v)| !(v.is_finite() && v.abs() <= 100.0)) {
                Some((c, v)) => Err(CliError::Usage(format!(
                    "{c} weight {v} is outside [-100, 100]"
                ))),
                None => Ok(()),
            }
        }) {
            Ok(()) => lines.push("home-weights: ok".to_string()),
            Err(e) => problems.push(format!("home-weights: {e}")),
        }
    }
    if let Err(e) = cfg.stay_params() {
        problems.push(format!("stay-point parameters: {e}"));
    }

    if !any {
        return Err(CliError::Usage(
            "nothing to validate; pass at least one configuration file".into(),
        ));
    }
    if !problems.is_empty() {
        return Err(CliError::Violations(problems));
    }
    match cfg.format.unwrap_or(Format::Table) {
        Format::Json => emit(&to_json(&lines)?),
        _ => emit(&(lines.join("\n") + "\n")),
    }
}

/// Offline database first, then the nearby-search service.
struct Chained<'a> {
    db: &'a PoiDatabase,
    remote: NearbyClient,
}

impl PoiResolver for Chained<'_> {
    fn nearest_tag(&self, point: LatLon, radius_m: f64) -> lifestyle_core::Result<Option<Tag>> {
        match self.db.nearest_tag(point, radius_m)? {
            Some(tag) => Ok(Some(tag)),
            None => self.remote.nearest_tag(point, radius_m),
        }
    }
}

fn is_trace(input: &Path) -> bool {
    input
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_day(cfg: &ConfigArgs, input: &Path) -> Result<DayLog> {
    if !is_trace(input) {
        return load_json(input);
    }
    let db = cfg.poi_db()?;
    let fractions = cfg.allocation()?;
    let home_weights = cfg.home_weights()?;
    let params = cfg.stay_params()?;
    let registration = db.registration()?;
    let file = fs::File::open(input).map_err(|source| CliError::Read {
        path: input.to_path_buf(),
        source,
    })?;
    let trace = read_trace_csv(file).map_err(|e| CliError::parse(input, e))?;
    let log = match &cfg.nearby_url {
        Some(url) => {
            let chained = Chained {
                db: &db,
                remote: NearbyClient::new(url.as_str())?,
            };
            trace_to_daylog_with(
                &trace,
                &registration,
                &chained,
                &params,
                &fractions,
                &home_weights,
            )?
        }
        None => trace_to_daylog_with(
            &trace,
            &registration,
            &db,
            &params,
            &fractions,
            &home_weights,
        )?,
    };
    Ok(log)
}

pub fn analyze(cfg: &ConfigArgs, input: &Path) -> Result<()> {
    let catalog = cfg.catalog()?;
    let membership = cfg.membership()?;
    let rules = cfg.rules()?;
    let violations = validate_catalog(&catalog);
    if !violations.is_empty() {
        return Err(CliError::Violations(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    rules.check_against(&membership)?;
    let log = load_day(cfg, input)?;
    if log.visits().is_empty() && log.home().total_hours() == 0.0 {
        eprintln!("warning: the day log is empty; every category total is 0");
    }
    let analysis = analyze_day(&log, &catalog, &membership, &rules)?;
    if let Some(w) = &analysis.report.warning {
        eprintln!("warning: {w}");
    }
    emit(&render_analysis(cfg.format, &analysis)?)
}

fn render_analysis(format: Option<Format>, a: &DayAnalysis) -> Result<String> {
    Ok(match format.unwrap_or(Format::Table) {
        Format::Json => to_json(a)?,
        Format::Table => format!(
            "{}\n{}",
            render::breakdown_table(&a.breakdown),
            render::report_table(&a.report)
        ),
        Format::Csv => format!(
            "{}\n{}",
            render::breakdown_csv(&a.breakdown)?,
            render::report_csv(&a.report)?
        ),
    })
}

pub fn recommend(cfg: &ConfigArgs, breakdown: &Path) -> Result<()> {
    let membership = cfg.membership()?;
    let rules = cfg.rules()?;
    rules.check_against(&membership)?;
    let bd: CategoryBreakdown = load_json(breakdown)?;
    let report = score_rules(&bd, &membership, &rules)?;
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    let body = match cfg.format.unwrap_or(Format::Table) {
        Format::Json => to_json(&report)?,
        Format::Table => render::report_table(&report),
        Format::Csv => render::report_csv(&report)?,
    };
    emit(&body)
}

pub fn plot_mf(
    cfg: &ConfigArgs,
    category: CategoryId,
    kind: Quantity,
    resolution: usize,
) -> Result<()> {
    if resolution == 0 {
        return Err(CliError::Usage("resolution must be at least 1".into()));
    }
    let membership = cfg.membership()?;
    let var = membership.variable(category, kind);
    let rows = var.sample_curves(resolution, Execution::Auto);
    let header: Vec<&str> = std::iter::once("x")
        .chain(var.terms().iter().map(|(name, _)| *name))
        .collect();
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => render::curves_csv(&header, &rows)?,
        Format::Table => render::curves_table(&header, &rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Curves<'a> {
                category: CategoryId,
                kind: Quantity,
                columns: &'a [&'a str],
                rows: &'a [Vec<f64>],
            }
            to_json(&Curves {
                category,
                kind,
                columns: &header,
                rows: &rows,
            })?
        }
    };
    emit(&body)
}
