//! Two-mode comparison reports and plot-data files.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::competency::DerivationRule;
use crate::error::{Error, Result};
use crate::indicator::{scalar_per_period, IndicatorSeries, ModeComparison, UNIT_LABEL};
use crate::io::write_atomic;
use crate::sum::NeumaierSum;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "table" | "text-table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!(
                "unknown report format {other:?} (expected table or csv)"
            )),
        }
    }
}

/// Provenance attached to a report beyond what the comparison itself knows.
#[derive(Clone, Debug, Default)]
pub struct ReportContext {
    pub derivation: Option<DerivationRule>,
    /// Extra `key: value` metadata, emitted in order after the standard keys.
    pub extra: Vec<(String, String)>,
    /// Generation time; omitted unless requested so reports stay byte-stable.
    pub stamp: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportRow {
    pub t: usize,
    pub basic: f64,
    pub competency: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
    /// `(V_basic, V_uc, dV)` totals over all rows.
    pub footer: (f64, f64, f64),
    pub metadata: Vec<(String, String)>,
}

impl ReportTable {
    pub fn new(comparison: &ModeComparison, context: &ReportContext) -> Self {
        let rows = comparison
            .periods()
            .zip(comparison.basic_scalars())
            .zip(comparison.competency_scalars())
            .zip(comparison.delta_per_period())
            .map(|(((t, &basic), &competency), &delta)| ReportRow {
                t,
                basic,
                competency,
                delta,
            })
            .collect();
        let footer = (
            comparison.basic().total(),
            comparison.competency().total(),
            comparison.delta_total(),
        );

        let mut metadata: Vec<(String, String)> = Vec::new();
        let mut meta = |k: &str, v: String| metadata.push((k.to_owned(), v));
        match comparison.basic().config() {
            Some(config) => {
                meta("window_k", config.k().to_string());
                meta("standardize", config.standardize.to_string());
                meta("warmup", config.warmup.to_string());
            }
            None => {
                meta("window_k", "n/a (precomputed)".into());
                meta("standardize", "n/a (precomputed)".into());
                meta("warmup", "n/a (precomputed)".into());
            }
        }
        meta(
            "derivation",
            context.derivation.map_or_else(
                || "none (both series supplied)".to_owned(),
                |d| d.to_string(),
            ),
        );
        meta("unit", UNIT_LABEL.into());
        meta("scalar_reduction", "sum over variables".into());
        meta("basic_mode", comparison.basic().mode_label().into());
        meta(
            "competency_mode",
            comparison.competency().mode_label().into(),
        );
        let warmup = comparison.basic().warmup_periods();
        meta(
            "warmup_excluded_periods",
            if warmup.is_empty() {
                "none".into()
            } else {
                format!("{}..{}", warmup.start, warmup.end - 1)
            },
        );
        meta("tool_version", crate::VERSION.into());
        metadata.extend(context.extra.iter().cloned());
        if let Some(stamp) = &context.stamp {
            metadata.push(("generated_at".into(), stamp.clone()));
        }

        Self {
            rows,
            footer,
            metadata,
        }
    }
}

/// Two-decimal rendering without a negative zero.
pub fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn write_metadata(out: &mut String, metadata: &[(String, String)]) {
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}").unwrap();
    }
}

pub fn render_report(table: &ReportTable, format: ReportFormat) -> String {
    let mut out = String::new();
    let (fb, fc, fd) = table.footer;
    match format {
        ReportFormat::Table => {
            writeln!(
                out,
                "{:>6} {:>12} {:>12} {:>12}",
                "t", "V_basic", "V_uc", "dV"
            )
            .unwrap();
            for r in &table.rows {
                writeln!(
                    out,
                    "{:>6} {:>12} {:>12} {:>12}",
                    r.t,
                    fmt2(r.basic),
                    fmt2(r.competency),
                    fmt2(r.delta)
                )
                .unwrap();
            }
            writeln!(
                out,
                "{:>6} {:>12} {:>12} {:>12}",
                "Total",
                fmt2(fb),
                fmt2(fc),
                fmt2(fd)
            )
            .unwrap();
        }
        ReportFormat::Csv => {
            out.push_str("t,v_basic,v_uc,delta_v,v_basic_full,v_uc_full,delta_v_full\n");
            for r in &table.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.t,
                    fmt2(r.basic),
                    fmt2(r.competency),
                    fmt2(r.delta),
                    r.basic,
                    r.competency,
                    r.delta
                )
                .unwrap();
            }
            writeln!(
                out,
                "Total,{},{},{},{fb},{fc},{fd}",
                fmt2(fb),
                fmt2(fc),
                fmt2(fd)
            )
            .unwrap();
        }
    }
    write_metadata(&mut out, &table.metadata);
    out
}

/// Table of `(t, V_basic, V_uc, dV)` rows, a Total row and a `#` metadata block.
pub fn emit_report(
    comparison: &ModeComparison,
    format: ReportFormat,
    context: &ReportContext,
) -> String {
    render_report(&ReportTable::new(comparison, context), format)
}

/// Per-period `V_i(t)` columns plus their sum, a Total row and metadata.
pub fn render_indicator(
    series: &IndicatorSeries,
    variable_labels: &[String],
    format: ReportFormat,
    context: &ReportContext,
) -> String {
    let mut out = String::new();
    let scalars = scalar_per_period(series);
    let mut column_totals = vec![NeumaierSum::new(); series.n()];
    for v in series.per_period() {
        for (acc, &x) in column_totals.iter_mut().zip(v) {
            acc.add(x);
        }
    }
    match format {
        ReportFormat::Table => {
            write!(out, "{:>6}", "t").unwrap();
            for label in variable_labels {
                write!(out, " {label:>12}").unwrap();
            }
            writeln!(out, " {:>12}", "sum").unwrap();
            for (t, (v, s)) in series
                .periods()
                .zip(series.per_period().iter().zip(&scalars))
            {
                write!(out, "{t:>6}").unwrap();
                for x in v {
                    write!(out, " {:>12}", fmt2(*x)).unwrap();
                }
                writeln!(out, " {:>12}", fmt2(*s)).unwrap();
            }
            write!(out, "{:>6}", "Total").unwrap();
            for acc in &column_totals {
                write!(out, " {:>12}", fmt2(acc.value())).unwrap();
            }
            writeln!(out, " {:>12}", fmt2(series.total())).unwrap();
        }
        ReportFormat::Csv => {
            out.push('t');
            for label in variable_labels {
                write!(out, ",{label}").unwrap();
            }
            out.push_str(",sum\n");
            for (t, (v, s)) in series
                .periods()
                .zip(series.per_period().iter().zip(&scalars))
            {
                write!(out, "{t}").unwrap();
                for x in v {
                    write!(out, ",{x}").unwrap();
                }
                writeln!(out, ",{s}").unwrap();
            }
            out.push_str("Total");
            for acc in &column_totals {
                write!(out, ",{}", acc.value()).unwrap();
            }
            writeln!(out, ",{}", series.total()).unwrap();
        }
    }
    let mut metadata = Vec::new();
    if let Some(config) = series.config() {
        metadata.push(("window_k".to_owned(), config.k().to_string()));
        metadata.push(("standardize".to_owned(), config.standardize.to_string()));
        metadata.push(("warmup".to_owned(), config.warmup.to_string()));
    }
    metadata.push(("unit".to_owned(), UNIT_LABEL.to_owned()));
    metadata.push(("mode".to_owned(), series.mode_label().to_owned()));
    let warmup = series.warmup_periods();
    metadata.push((
        "warmup_excluded_periods".to_owned(),
        if warmup.is_empty() {
            "none".to_owned()
        } else {
            format!("{}..{}", warmup.start, warmup.end - 1)
        },
    ));
    metadata.push(("tool_version".to_owned(), crate::VERSION.to_owned()));
    metadata.extend(context.extra.iter().cloned());
    if let Some(stamp) = &context.stamp {
        metadata.push(("generated_at".to_owned(), stamp.clone()));
    }
    write_metadata(&mut out, &metadata);
    out
}

/// Full-precision `t,basic,competency` CSV of the per-period scalars.
pub fn plot_data_csv(comparison: &ModeComparison) -> Result<String> {
    if comparison.basic_scalars().is_empty() {
        return Err(Error::SeriesTooShort("no defined periods to plot".into()));
    }
    let mut out = String::from("t,basic,competency\n");
    for ((t, b), c) in comparison
        .periods()
        .zip(comparison.basic_scalars())
        .zip(comparison.competency_scalars())
    {
        writeln!(out, "{t},{b},{c}").unwrap();
    }
    Ok(out)
}

pub fn emit_plot_data(comparison: &ModeComparison, path: &Path) -> Result<()> {
    write_atomic(path, plot_data_csv(comparison)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicator::{compare_modes, ingest_precomputed};
    use crate::io::table1_fixture;

    fn fixture_comparison() -> ModeComparison {
        let table = table1_fixture();
        compare_modes(
            &ingest_precomputed(&table.basic, "basic").unwrap(),
            &ingest_precomputed(&table.competency, "universal-competencies").unwrap(),
        )
        .unwrap()
    }

    fn total_fields(report: &str) -> Vec<f64> {
        let line = report.lines().find(|l| l.starts_with("Total")).unwrap();
        line.split(',')
            .skip(1)
            .take(3)
            .map(|v| v.parse().unwrap())
            .collect()
    }

    #[test]
    fn fixture_report_totals() {
        let report = emit_report(
            &fixture_comparison(),
            ReportFormat::Csv,
            &ReportContext::default(),
        );
        let totals = total_fields(&report);
        assert!((totals[0] - 5069.93).abs() <= 0.02);
        assert!((totals[1] - 5491.17).abs() <= 0.02);
        assert!((totals[2] - 421.24).abs() <= 0.02);
        assert_eq!(
            report
                .lines()
                .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
                .count(),
            57
        );
        assert!(report.contains("\n1,87.34,110.67,23.33,"));
        assert!(report.contains("# window_k: n/a (precomputed)\n"));
    }

    #[test]
    fn identical_modes_print_zero_deltas() {
        let a = ingest_precomputed(&[1.0, 2.5, 3.333], "a").unwrap();
        let cmp = compare_modes(&a, &a).unwrap();
        let report = emit_report(&cmp, ReportFormat::Table, &ReportContext::default());
        for line in report.lines().filter(|l| !l.starts_with('#')).skip(1) {
            assert!(line.ends_with(" 0.00"), "{line}");
        }
    }

    #[test]
    fn single_period_report() {
        let b = ingest_precomputed(&[4.0], "b").unwrap();
        let c = ingest_precomputed(&[6.5], "c").unwrap();
        let report = emit_report(
            &compare_modes(&b, &c).unwrap(),
            ReportFormat::Csv,
            &ReportContext::default(),
        );
        let data: Vec<&str> = report.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 3);
        assert_eq!(data[1], "1,4.00,6.50,2.50,4,6.5,2.5");
        assert_eq!(data[2], "Total,4.00,6.50,2.50,4,6.5,2.5");
    }

    #[test]
    fn metadata_and_stamp() {
        let context = ReportContext {
            derivation: Some(DerivationRule::CoverageWeight),
            extra: vec![("seed".into(), "7".into())],
            stamp: Some("now".into()),
        };
        let report = emit_report(&fixture_comparison(), ReportFormat::Table, &context);
        let meta: Vec<&str> = report.lines().filter(|l| l.starts_with('#')).collect();
        assert!(meta.contains(&"# derivation: coverage-weight"));
        assert!(meta.contains(&"# unit: input-unit^2"));
        assert_eq!(meta[meta.len() - 2], "# seed: 7");
        assert_eq!(meta[meta.len() - 1], "# generated_at: now");
        let plain = emit_report(
            &fixture_comparison(),
            ReportFormat::Table,
            &ReportContext::default(),
        );
        assert!(!plain.contains("generated_at"));
    }

    #[test]
    fn negative_zero_is_printed_as_zero() {
        assert_eq!(fmt2(-0.001), "0.00");
        assert_eq!(fmt2(-0.005001), "-0.01");
    }

    #[test]
    fn indicator_rendering() {
        use crate::indicator::{indicator_series, WindowConfig};
        use crate::model::ProcessSeries;

        let series = ProcessSeries::with_default_labels(ndarray::Array2::ones((3, 7))).unwrap();
        let ind = indicator_series(&series, &WindowConfig::new(5).unwrap(), "basic").unwrap();
        let csv = render_indicator(
            &ind,
            series.variable_labels(),
            ReportFormat::Csv,
            &ReportContext::default(),
        );
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,v1,v2,v3,sum");
        assert_eq!(lines[1], "6,3.75,3.75,3.75,11.25");
        assert_eq!(lines[3], "Total,7.5,7.5,7.5,22.5");
        assert!(csv.contains("# warmup_excluded_periods: 1..5\n"));
        let table = render_indicator(
            &ind,
            series.variable_labels(),
            ReportFormat::Table,
            &ReportContext::default(),
        );
        assert!(table.lines().nth(1).unwrap().ends_with("11.25"));
    }

    #[test]
    fn plot_data_rows() {
        let csv = plot_data_csv(&fixture_comparison()).unwrap();
        assert_eq!(csv.lines().count(), 58);
        assert_eq!(csv.lines().nth(1).unwrap(), "1,87.34,110.67");
        let dir = tempfile::tempdir().unwrap();
        let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        emit_plot_data(&fixture_comparison(), &p1).unwrap();
        emit_plot_data(&fixture_comparison(), &p2).unwrap();
        assert_eq!(std::fs::read(p1).unwrap(), std::fs::read(p2).unwrap());
    }
}
