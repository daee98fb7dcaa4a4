use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use indicator_core::io::{self, write_atomic};
use indicator_core::report::{emit_plot_data, render_indicator, ReportContext};
use indicator_core::scenario::{Scenario, NOISE_ALGORITHM};
use indicator_core::{
    check_budget, compare_modes, derive_mode_series, emit_report, fixture, generate_series,
    indicator_series, staffing_demo_scenario, Error, ResourceBudget, Result,
};

use crate::{Command, OutputArgs};

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Indicator {
            series,
            window,
            output,
        } => {
            let (series, _) = io::read_series_csv(&series)?;
            let ind = indicator_series(&series, &window.config()?, "input")?;
            let doc = render_indicator(
                &ind,
                series.variable_labels(),
                output.format,
                &context(&output, None, vec![]),
            );
            emit(&doc, &output)?;
        }
        Command::Compare {
            basic,
            competency,
            compliance,
            derive,
            plot_data,
            window,
            output,
        } => {
            let config = window.config()?;
            let (basic, _) = io::read_series_csv(&basic)?;
            let (competency, derivation) = match (competency, compliance) {
                (Some(path), _) => (io::read_series_csv(&path)?.0, None),
                (None, Some(path)) => {
                    let matrix = io::read_compliance_csv(&path)?;
                    (derive_mode_series(&basic, &matrix, derive)?, Some(derive))
                }
                (None, None) => {
                    return Err(Error::ConfigMismatch(
                        "compare needs a competency series or --compliance".into(),
                    ))
                }
            };
            let b = indicator_series(&basic, &config, "basic")?;
            let c = indicator_series(&competency, &config, "universal-competencies")?;
            let cmp = compare_modes(&b, &c)?;
            if let Some(path) = plot_data {
                emit_plot_data(&cmp, &path)?;
            }
            emit(
                &emit_report(&cmp, output.format, &context(&output, derivation, vec![])),
                &output,
            )?;
        }
        Command::Simulate {
            scenario,
            seed,
            out,
        } => {
            let scenario = load_scenario(scenario.as_deref(), seed)?;
            let (basic, competency) = generate_series(&scenario)?;
            fs::create_dir_all(&out).map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            io::write_series_csv(&basic, &out.join("basic.csv"))?;
            io::write_series_csv(&competency, &out.join("competency.csv"))?;
            write_atomic(
                &out.join("scenario.json"),
                io::scenario_to_json(&scenario).as_bytes(),
            )?;
            let mut meta = String::new();
            for (k, v) in scenario_metadata(&scenario) {
                meta.push_str(&format!("{k}: {v}\n"));
            }
            write_atomic(&out.join("metadata.txt"), meta.as_bytes())?;
            eprintln!(
                "wrote basic.csv, competency.csv, scenario.json, metadata.txt to {}",
                out.display()
            );
        }
        Command::Report {
            scenario,
            seed,
            plot_data,
            window,
            output,
        } => {
            let scenario = load_scenario(scenario.as_deref(), seed)?;
            let config = window.config()?;
            let (basic, competency) = generate_series(&scenario)?;
            let b = indicator_series(&basic, &config, "basic")?;
            let c = indicator_series(&competency, &config, "universal-competencies")?;
            let cmp = compare_modes(&b, &c)?;
            if let Some(path) = plot_data {
                emit_plot_data(&cmp, &path)?;
            }
            let ctx = context(&output, None, scenario_metadata(&scenario));
            emit(&emit_report(&cmp, output.format, &ctx), &output)?;
        }
        Command::CheckBudget {
            compliance,
            budget,
            costs,
            cost_each,
        } => {
            let matrix = io::read_compliance_csv(&compliance)?;
            let budget = match (costs, cost_each) {
                (Some(path), _) => ResourceBudget::new(budget, io::read_costs_csv(&path)?)?,
                (None, Some(each)) => ResourceBudget::uniform(budget, each, matrix.m())?,
                (None, None) => unreachable!("clap requires --costs or --cost-each"),
            };
            let check = check_budget(&matrix, &budget)?;
            let verdict = if check.accepted { "accept" } else { "reject" };
            println!("{verdict} cost={} limit={}", check.cost, check.limit);
            if !check.accepted {
                eprintln!(
                    "error: budget constraint C(V) <= C violated: {} > {}",
                    check.cost, check.limit
                );
                return Ok(ExitCode::from(1));
            }
        }
        Command::FixtureVerify { fixture: path } => {
            let table = match path {
                Some(p) => io::read_precomputed_csv(&p)?,
                None => io::table1_fixture(),
            };
            let check = fixture::verify_table(&table)?;
            println!("basic_total {:.2}", check.basic_total);
            println!("competency_total {:.2}", check.competency_total);
            println!("delta_total {:.2}", check.delta_total);
            if !check.passed() {
                if !check.totals_match() {
                    eprintln!(
                        "error: totals differ from published {:.2} / {:.2} / {:.2} by more than {}",
                        fixture::PUBLISHED_BASIC_TOTAL,
                        fixture::PUBLISHED_COMPETENCY_TOTAL,
                        fixture::PUBLISHED_DELTA_TOTAL,
                        fixture::PRINT_TOLERANCE
                    );
                }
                if !check.delta_outliers.is_empty() {
                    eprintln!(
                        "error: printed delta disagrees with column difference at periods {:?}",
                        check.delta_outliers
                    );
                }
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_scenario(path: Option<&Path>, seed: Option<u64>) -> Result<Scenario> {
    let mut scenario = match path {
        Some(p) => io::read_scenario(p)?,
        None => staffing_demo_scenario(),
    };
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    Ok(scenario)
}

fn scenario_metadata(scenario: &Scenario) -> Vec<(String, String)> {
    let mut meta = vec![
        ("noise_algorithm".to_owned(), NOISE_ALGORITHM.to_owned()),
        ("seed".to_owned(), scenario.seed.to_string()),
        ("t_max".to_owned(), scenario.t_max.to_string()),
        ("n".to_owned(), scenario.n.to_string()),
        ("event_effect".to_owned(), scenario.event_effect.to_string()),
    ];
    for e in &scenario.events {
        meta.push((
            "event".to_owned(),
            format!("period {} {} {} x{}", e.period, e.kind, e.role, e.count),
        ));
    }
    for (role, vars) in &scenario.role_variables {
        let vars: Vec<String> = vars.iter().map(|v| format!("v{v}")).collect();
        meta.push((format!("role_{role}"), vars.join(" ")));
    }
    meta
}

fn context(
    output: &OutputArgs,
    derivation: Option<indicator_core::DerivationRule>,
    extra: Vec<(String, String)>,
) -> ReportContext {
    let stamp = output.stamp.then(|| {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        format!("unix:{secs}")
    });
    ReportContext {
        derivation,
        extra,
        stamp,
    }
}

fn emit(doc: &str, output: &OutputArgs) -> Result<()> {
    match &output.out {
        Some(path) => write_atomic(path, doc.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(doc.as_bytes()).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
    }
}
