//! Universal competencies overlaid on the process model.
//!
//! A [`ComplianceMatrix`] marks which competency applies to which process
//! (`1` yes, `0` no). Activating competencies costs resources, and the total
//! cost must stay within the available budget. The matrix also drives the
//! derivation of a competency-mode series from a basic process series.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::model::ProcessSeries;
use crate::sum::compensated_sum;

const DEFAULT_CATALOG: &str = include_str!("../../../data/universal_competencies_32.tsv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Competency {
    pub id: u32,
    pub description: String,
}

/// Ordered competency list whose ids are exactly `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompetencyCatalog {
    competencies: Vec<Competency>,
}

impl CompetencyCatalog {
    pub fn new(competencies: Vec<Competency>) -> Result<Self> {
        if competencies.is_empty() {
            return Err(Error::parse(0, "catalog has no entries"));
        }
        if let Some(c) = competencies
            .iter()
            .find(|c| c.description.trim().is_empty())
        {
            return Err(Error::parse(
                0,
                format!("competency {} has an empty description", c.id),
            ));
        }
        let mut ids: Vec<u32> = competencies.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        for (pos, &id) in ids.iter().enumerate() {
            if pos > 0 && ids[pos - 1] == id {
                return Err(Error::DuplicateId(id));
            }
            let expected = pos as u32 + 1;
            if id != expected {
                return Err(Error::GapInIds {
                    expected,
                    found: id,
                });
            }
        }
        Ok(Self { competencies })
    }

    /// The 32 universal competencies shipped in `data/universal_competencies_32.tsv`.
    pub fn universal_32() -> Self {
        crate::io::load_catalog(DEFAULT_CATALOG).expect("shipped catalog is valid")
    }

    pub fn len(&self) -> usize {
        self.competencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.competencies.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&Competency> {
        self.competencies.iter().find(|c| c.id == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Competency> {
        self.competencies.iter()
    }
}

/// Binary `m x n` mapping of competencies (rows) to processes (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplianceMatrix {
    entries: Array2<u8>,
}

impl ComplianceMatrix {
    pub fn new(entries: Array2<u8>) -> Result<Self> {
        if let Some(((i, j), &v)) = entries.indexed_iter().find(|(_, &v)| v > 1) {
            return Err(Error::NonBinaryEntry {
                line: i as u64 + 1,
                column: j + 1,
                token: v.to_string(),
            });
        }
        Ok(Self { entries })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            entries: Array2::zeros((m, n)),
        }
    }

    pub fn ones(m: usize, n: usize) -> Self {
        Self {
            entries: Array2::ones((m, n)),
        }
    }

    /// Square identity mapping: competency `i` covers process `i` only.
    pub fn identity(n: usize) -> Self {
        Self {
            entries: Array2::from_shape_fn((n, n), |(i, j)| u8::from(i == j)),
        }
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<u8> {
        &self.entries
    }

    pub fn get(&self, competency: usize, process: usize) -> bool {
        self.entries[[competency, process]] == 1
    }

    pub fn set(&mut self, competency: usize, process: usize, value: bool) {
        self.entries[[competency, process]] = u8::from(value);
    }

    /// True when row `i` has at least one mapped process.
    pub fn is_active(&self, competency: usize) -> bool {
        self.entries.row(competency).iter().any(|&v| v == 1)
    }

    /// Number of competencies mapped to each process.
    pub fn column_coverage(&self) -> Vec<usize> {
        self.entries
            .columns()
            .into_iter()
            .map(|c| c.iter().filter(|&&v| v == 1).count())
            .collect()
    }
}

/// Budget limit `C` and per-competency activation costs, in thousand rubles.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceBudget {
    limit_c: f64,
    cost_per_competency: Vec<f64>,
}

impl ResourceBudget {
    pub fn new(limit_c: f64, cost_per_competency: Vec<f64>) -> Result<Self> {
        if !limit_c.is_finite() || limit_c < 0.0 {
            return Err(Error::InvalidBudget(format!(
                "limit must be finite and nonnegative, got {limit_c}"
            )));
        }
        if let Some((i, c)) = cost_per_competency
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(Error::InvalidBudget(format!(
                "cost of competency {} must be finite and nonnegative, got {c}",
                i + 1
            )));
        }
        Ok(Self {
            limit_c,
            cost_per_competency,
        })
    }

    pub fn uniform(limit_c: f64, cost_each: f64, m: usize) -> Result<Self> {
        Self::new(limit_c, vec![cost_each; m])
    }

    pub fn limit(&self) -> f64 {
        self.limit_c
    }

    pub fn costs(&self) -> &[f64] {
        &self.cost_per_competency
    }
}

/// Cost `C(V)`: the activation costs of every competency mapped to at least
/// one process.
pub fn mapping_cost(matrix: &ComplianceMatrix, budget: &ResourceBudget) -> Result<f64> {
    if budget.cost_per_competency.len() != matrix.m() {
        return Err(Error::DimensionMismatch {
            what: "cost vector vs competency count",
            expected: matrix.m(),
            actual: budget.cost_per_competency.len(),
        });
    }
    Ok(compensated_sum(
        budget
            .cost_per_competency
            .iter()
            .enumerate()
            .filter(|(i, _)| matrix.is_active(*i))
            .map(|(_, &c)| c),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetCheck {
    pub cost: f64,
    pub limit: f64,
    pub accepted: bool,
}

/// Accepts iff `C(V) <= C`.
pub fn check_budget(matrix: &ComplianceMatrix, budget: &ResourceBudget) -> Result<BudgetCheck> {
    let cost = mapping_cost(matrix, budget)?;
    Ok(BudgetCheck {
        cost,
        limit: budget.limit_c,
        accepted: cost <= budget.limit_c,
    })
}

/// How the compliance matrix turns a basic series into a competency-mode one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DerivationRule {
    /// Keep process `j` if any competency covers it, zero it otherwise.
    #[default]
    CoverageMask,
    /// Scale process `j` by the number of competencies covering it.
    CoverageWeight,
}

impl DerivationRule {
    pub fn name(self) -> &'static str {
        match self {
            DerivationRule::CoverageMask => "coverage-mask",
            DerivationRule::CoverageWeight => "coverage-weight",
        }
    }
}

impl fmt::Display for DerivationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DerivationRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "mask" | "coverage-mask" => Ok(DerivationRule::CoverageMask),
            "weight" | "coverage-weight" => Ok(DerivationRule::CoverageWeight),
            other => Err(format!(
                "unknown derivation rule {other:?} (expected mask or weight)"
            )),
        }
    }
}

pub fn derive_mode_series(
    series: &ProcessSeries,
    matrix: &ComplianceMatrix,
    rule: DerivationRule,
) -> Result<ProcessSeries> {
    if matrix.n() != series.n() {
        return Err(Error::DimensionMismatch {
            what: "compliance processes vs series variables",
            expected: series.n(),
            actual: matrix.n(),
        });
    }
    let factors: Vec<f64> = matrix
        .column_coverage()
        .into_iter()
        .map(|count| match rule {
            DerivationRule::CoverageMask => f64::from(u8::from(count > 0)),
            DerivationRule::CoverageWeight => count as f64,
        })
        .collect();
    let mut values = series.values().clone();
    for (mut row, factor) in values.rows_mut().into_iter().zip(factors) {
        if factor != 1.0 {
            row.mapv_inplace(|v| v * factor);
        }
    }
    series.map_values(values)
}
