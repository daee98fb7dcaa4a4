//! Flat-file formats: series CSV, compliance CSV, cost CSV, catalog TSV,
//! scenario JSON and the precomputed two-mode indicator table.
//!
//! Every number uses `.` as the decimal separator and is written in the
//! shortest representation that parses back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::competency::{Competency, CompetencyCatalog, ComplianceMatrix};
use crate::error::{Error, Result};
use crate::model::{ProcessSeries, TimeAxis};
use crate::scenario::Scenario;

/// Published per-period indicator values for the two management modes,
/// 57 periods at two decimals.
pub const TABLE1_FIXTURE: &str = include_str!("../../../data/table1_fixture.csv");

/// Default competency catalog text (`id<TAB>description`).
pub const UNIVERSAL_COMPETENCIES_32: &str =
    include_str!("../../../data/universal_competencies_32.tsv");

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn records<R: Read>(input: R) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut out = Vec::new();
    for rec in csv_reader(input).records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        out.push((line, rec));
    }
    Ok(out)
}

fn parse_f64(token: &str, line: u64, what: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::parse(line, format!("{what}: {token:?} is not a number")))
}

fn parse_period(token: &str, line: u64) -> Result<u64> {
    token
        .parse::<u64>()
        .map_err(|_| Error::parse(line, format!("period {token:?} is not a positive integer")))
}

/// Checks that the `t` column runs 1, 2, 3, ...
fn check_period(t: u64, previous: u64, line: u64) -> Result<()> {
    if t <= previous {
        return Err(Error::NonMonotonicTime {
            line,
            previous,
            found: t,
        });
    }
    if t != previous + 1 {
        return Err(Error::parse(
            line,
            format!("period {t} follows {previous}; periods must be consecutive from 1"),
        ));
    }
    Ok(())
}

/// Parses `t,<var1>,...,<varn>` with one row per period.
pub fn parse_series_csv<R: Read>(input: R) -> Result<(ProcessSeries, TimeAxis)> {
    let recs = records(input)?;
    let Some(((header_line, header), rows)) = recs.split_first() else {
        return Err(Error::parse(1, "missing header row"));
    };
    if header.len() < 2 || &header[0] != "t" {
        return Err(Error::parse(
            *header_line,
            "header must be `t,<var1>,...,<varn>`",
        ));
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let width = header.len();
    let mut observations = Vec::with_capacity(rows.len());
    let mut previous = 0;
    for (line, rec) in rows {
        if rec.len() != width {
            return Err(Error::RaggedRow {
                line: *line,
                expected: width,
                found: rec.len(),
            });
        }
        let t = parse_period(&rec[0], *line)?;
        check_period(t, previous, *line)?;
        previous = t;
        let row = rec
            .iter()
            .skip(1)
            .enumerate()
            .map(|(i, tok)| parse_f64(tok, *line, &labels[i]))
            .collect::<Result<Vec<_>>>()?;
        observations.push(row);
    }
    if observations.is_empty() {
        return Err(Error::parse(*header_line, "no data rows"));
    }
    let axis = TimeAxis::new(observations.len())?;
    let series = ProcessSeries::from_period_rows(&observations, labels)?;
    Ok((series, axis))
}

pub fn read_series_csv(path: &Path) -> Result<(ProcessSeries, TimeAxis)> {
    parse_series_csv(read_to_string(path)?.as_bytes())
}

pub fn series_to_csv(series: &ProcessSeries) -> String {
    let mut out = String::from("t");
    for label in series.variable_labels() {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for t in 1..=series.periods() {
        write!(out, "{t}").unwrap();
        for v in series.observation(t) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_series_csv(series: &ProcessSeries, path: &Path) -> Result<()> {
    write_atomic(path, series_to_csv(series).as_bytes())
}

/// Parses `competency_id,p1,...,pn` followed by rows of literal `0` / `1`.
pub fn parse_compliance_csv<R: Read>(input: R) -> Result<ComplianceMatrix> {
    let recs = records(input)?;
    let Some(((header_line, header), rows)) = recs.split_first() else {
        return Err(Error::parse(1, "missing header row"));
    };
    if header.len() < 2 || &header[0] != "competency_id" {
        return Err(Error::parse(
            *header_line,
            "header must be `competency_id,<p1>,...,<pn>`",
        ));
    }
    let width = header.len();
    let n = width - 1;
    let mut entries = Array2::zeros((rows.len(), n));
    for (row_idx, (line, rec)) in rows.iter().enumerate() {
        if rec.len() != width {
            return Err(Error::RaggedRow {
                line: *line,
                expected: width,
                found: rec.len(),
            });
        }
        rec[0].parse::<u32>().map_err(|_| {
            Error::parse(
                *line,
                format!("competency id {:?} is not an integer", &rec[0]),
            )
        })?;
        for (j, tok) in rec.iter().skip(1).enumerate() {
            entries[[row_idx, j]] = match tok {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::NonBinaryEntry {
                        line: *line,
                        column: j + 2,
                        token: other.to_owned(),
                    })
                }
            };
        }
    }
    if rows.is_empty() {
        return Err(Error::parse(*header_line, "no competency rows"));
    }
    ComplianceMatrix::new(entries)
}

pub fn read_compliance_csv(path: &Path) -> Result<ComplianceMatrix> {
    parse_compliance_csv(read_to_string(path)?.as_bytes())
}

pub fn compliance_to_csv(matrix: &ComplianceMatrix) -> String {
    let mut out = String::from("competency_id");
    for j in 1..=matrix.n() {
        write!(out, ",p{j}").unwrap();
    }
    out.push('\n');
    for (i, row) in matrix.entries().rows().into_iter().enumerate() {
        write!(out, "{}", i + 1).unwrap();
        for v in row {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Parses `competency_id,cost`; ids must be 1..=m in order.
pub fn parse_costs_csv<R: Read>(input: R) -> Result<Vec<f64>> {
    let recs = records(input)?;
    let Some(((header_line, header), rows)) = recs.split_first() else {
        return Err(Error::parse(1, "missing header row"));
    };
    if header.len() != 2 || &header[0] != "competency_id" {
        return Err(Error::parse(
            *header_line,
            "header must be `competency_id,cost`",
        ));
    }
    let mut costs = Vec::with_capacity(rows.len());
    for (line, rec) in rows {
        if rec.len() != 2 {
            return Err(Error::RaggedRow {
                line: *line,
                expected: 2,
                found: rec.len(),
            });
        }
        let id: u32 = rec[0].parse().map_err(|_| {
            Error::parse(
                *line,
                format!("competency id {:?} is not an integer", &rec[0]),
            )
        })?;
        let expected = costs.len() as u32 + 1;
        if id != expected {
            return Err(Error::GapInIds {
                expected,
                found: id,
            });
        }
        costs.push(parse_f64(&rec[1], *line, "cost")?);
    }
    Ok(costs)
}

pub fn read_costs_csv(path: &Path) -> Result<Vec<f64>> {
    parse_costs_csv(read_to_string(path)?.as_bytes())
}

/// Parses an `id<TAB>description` catalog. Blank lines and `#` comments are skipped.
pub fn load_catalog(text: &str) -> Result<CompetencyCatalog> {
    let mut competencies = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let (id, description) = raw
            .split_once('\t')
            .ok_or_else(|| Error::parse(line, "expected `id<TAB>description`"))?;
        let id: u32 = id
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("id {id:?} is not a positive integer")))?;
        let description = description.trim();
        if description.is_empty() {
            return Err(Error::parse(line, "empty description"));
        }
        competencies.push(Competency {
            id,
            description: description.to_owned(),
        });
    }
    CompetencyCatalog::new(competencies)
}

pub fn read_catalog(path: &Path) -> Result<CompetencyCatalog> {
    load_catalog(&read_to_string(path)?)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line() as u64, e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn read_scenario(path: &Path) -> Result<Scenario> {
    parse_scenario(&read_to_string(path)?)
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(scenario).expect("scenario serializes");
    out.push('\n');
    out
}

/// Per-period scalars for both modes, as read from a `t,basic,competency[,delta]` table.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecomputedTable {
    pub basic: Vec<f64>,
    pub competency: Vec<f64>,
    /// The printed difference column, when the table carries one.
    pub printed_delta: Option<Vec<f64>>,
}

pub fn parse_precomputed_csv<R: Read>(input: R) -> Result<PrecomputedTable> {
    let recs = records(input)?;
    let Some(((header_line, header), rows)) = recs.split_first() else {
        return Err(Error::parse(1, "missing header row"));
    };
    let has_delta = match header.iter().collect::<Vec<_>>().as_slice() {
        ["t", "basic", "competency"] => false,
        ["t", "basic", "competency", "delta"] => true,
        _ => {
            return Err(Error::parse(
                *header_line,
                "header must be `t,basic,competency[,delta]`",
            ))
        }
    };
    let width = header.len();
    let mut table = PrecomputedTable {
        basic: Vec::with_capacity(rows.len()),
        competency: Vec::with_capacity(rows.len()),
        printed_delta: has_delta.then(Vec::new),
    };
    let mut previous = 0;
    for (line, rec) in rows {
        if rec.len() != width {
            return Err(Error::RaggedRow {
                line: *line,
                expected: width,
                found: rec.len(),
            });
        }
        let t = parse_period(&rec[0], *line)?;
        check_period(t, previous, *line)?;
        previous = t;
        table.basic.push(parse_f64(&rec[1], *line, "basic")?);
        table
            .competency
            .push(parse_f64(&rec[2], *line, "competency")?);
        if let Some(delta) = table.printed_delta.as_mut() {
            delta.push(parse_f64(&rec[3], *line, "delta")?);
        }
    }
    Ok(table)
}

pub fn read_precomputed_csv(path: &Path) -> Result<PrecomputedTable> {
    parse_precomputed_csv(read_to_string(path)?.as_bytes())
}

/// The shipped fixture, parsed.
pub fn table1_fixture() -> PrecomputedTable {
    parse_precomputed_csv(TABLE1_FIXTURE.as_bytes()).expect("shipped fixture is valid")
}
