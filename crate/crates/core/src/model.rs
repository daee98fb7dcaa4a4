//! Enterprise process model: a set of periods and an `n`-variable indicator
//! series (expenses and incomes, thousand rubles) over those periods.

use std::collections::HashSet;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// The periods `1..=t_max`, optionally labelled.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeAxis {
    t_max: usize,
    period_labels: Option<Vec<String>>,
}

impl TimeAxis {
    pub fn new(t_max: usize) -> Result<Self> {
        if t_max == 0 {
            return Err(Error::InvalidAxis("t_max must be at least 1".into()));
        }
        Ok(Self {
            t_max,
            period_labels: None,
        })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut axis = Self::new(labels.len())?;
        axis.period_labels = Some(labels);
        Ok(axis)
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn period_labels(&self) -> Option<&[String]> {
        self.period_labels.as_deref()
    }
}

/// Dense `n x t_max` matrix of finite values, one row per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSeries {
    values: Array2<f64>,
    variable_labels: Vec<String>,
}

impl ProcessSeries {
    /// `values[[i, t - 1]]` is variable `i` at period `t`.
    pub fn new(values: Array2<f64>, variable_labels: Vec<String>) -> Result<Self> {
        let (n, periods) = values.dim();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                what: "variable count",
                expected: 1,
                actual: 0,
            });
        }
        if periods == 0 {
            return Err(Error::DimensionMismatch {
                what: "period count",
                expected: 1,
                actual: 0,
            });
        }
        if variable_labels.len() != n {
            return Err(Error::DimensionMismatch {
                what: "variable labels",
                expected: n,
                actual: variable_labels.len(),
            });
        }
        let mut seen = HashSet::with_capacity(n);
        for label in &variable_labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidLabels(format!(
                    "variable label {label:?} is not unique"
                )));
            }
        }
        if let Some(((variable, col), &value)) = values.indexed_iter().find(|(_, v)| !v.is_finite())
        {
            return Err(Error::NonFiniteValue {
                variable: variable + 1,
                period: col + 1,
                value,
            });
        }
        Ok(Self {
            values,
            variable_labels,
        })
    }

    /// Labels `v1..vn`.
    pub fn with_default_labels(values: Array2<f64>) -> Result<Self> {
        let labels = (1..=values.nrows()).map(|i| format!("v{i}")).collect();
        Self::new(values, labels)
    }

    /// Builds a series from per-period observation vectors (`rows[t-1][i]`).
    pub fn from_period_rows(rows: &[Vec<f64>], variable_labels: Vec<String>) -> Result<Self> {
        let n = variable_labels.len();
        let mut values = Array2::zeros((n, rows.len()));
        for (col, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "observation vector length",
                    expected: n,
                    actual: row.len(),
                });
            }
            for (i, &v) in row.iter().enumerate() {
                values[[i, col]] = v;
            }
        }
        Self::new(values, variable_labels)
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn periods(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn variable_labels(&self) -> &[String] {
        &self.variable_labels
    }

    /// Observation vector `x(t)` for 1-based period `t`.
    pub fn observation(&self, t: usize) -> ArrayView1<'_, f64> {
        self.values.column(t - 1)
    }

    /// Same labels, new values. Used by the mode derivation rules.
    pub(crate) fn map_values(&self, values: Array2<f64>) -> Result<Self> {
        Self::new(values, self.variable_labels.clone())
    }
}

/// The enterprise model: periods plus the process series over them.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessSystem {
    axis: TimeAxis,
    series: ProcessSeries,
    total_resource: Option<f64>,
}

impl ProcessSystem {
    pub fn axis(&self) -> &TimeAxis {
        &self.axis
    }

    pub fn series(&self) -> &ProcessSeries {
        &self.series
    }

    pub fn t_max(&self) -> usize {
        self.axis.t_max()
    }

    pub fn n(&self) -> usize {
        self.series.n()
    }

    pub fn total_resource(&self) -> Option<f64> {
        self.total_resource
    }

    pub fn with_total_resource(mut self, total: f64) -> Result<Self> {
        if !total.is_finite() || total < 0.0 {
            return Err(Error::InvalidBudget(format!(
                "total resource must be finite and nonnegative, got {total}"
            )));
        }
        self.total_resource = Some(total);
        Ok(self)
    }
}

pub fn build_process_system(axis: TimeAxis, series: ProcessSeries) -> Result<ProcessSystem> {
    if series.periods() != axis.t_max() {
        return Err(Error::DimensionMismatch {
            what: "series columns vs t_max",
            expected: axis.t_max(),
            actual: series.periods(),
        });
    }
    Ok(ProcessSystem {
        axis,
        series,
        total_resource: None,
    })
}

/// Lag window before period `t`: row `l` (1-based) is `x(t - l)^T`, so the
/// result is `k x n` with the most recent observation first.
///
/// Valid for `1 <= k < t <= t_max + 1`.
pub fn slice_window(system: &ProcessSystem, t: usize, k: usize) -> Result<Array2<f64>> {
    window_of(&system.series, t, k)
}

pub(crate) fn window_of(series: &ProcessSeries, t: usize, k: usize) -> Result<Array2<f64>> {
    let t_max = series.periods();
    if k == 0 {
        return Err(Error::BadWindow("window length must be at least 1".into()));
    }
    if t <= k || t > t_max + 1 {
        return Err(Error::WindowOutOfRange { t, k, t_max });
    }
    let n = series.n();
    let mut window = Array2::zeros((k, n));
    for l in 1..=k {
        window.row_mut(l - 1).assign(&series.observation(t - l));
    }
    Ok(window)
}
