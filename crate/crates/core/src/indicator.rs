//! Lag-window Gram matrices and the integral indicator.
//!
//! For period `t` and window length `k` the lag window `W` is the `k x n`
//! matrix of observations `x(t-1) .. x(t-k)` (see [`crate::slice_window`]).
//! Its scaled Gram matrix is
//!
//! ```text
//! r_ij(t) = 1/(k-1) * sum_{l=1..k} x_i(t-l) * x_j(t-l)
//! ```
//!
//! which is an uncentered cross-moment, not a Pearson correlation, unless
//! [`WindowConfig::standardize`] is set. The per-variable indicator is the
//! absolute row sum `V_i(t) = sum_j |r_ij(t)|` and the integral indicator is
//! `V = sum_t sum_i V_i(t)` over every period with a defined window.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::model::{window_of, ProcessSeries};
use crate::sum::{compensated_sum, NeumaierSum};

/// Default lag window: twelve monthly periods.
pub const DEFAULT_WINDOW: usize = 12;

/// Unit label for indicator values: the Gram form squares the input unit.
pub const UNIT_LABEL: &str = "input-unit^2";

/// Policy for early periods that lack `k` observations of history.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Warmup {
    /// Leave `V_i(t)` undefined until a full window exists (`t > k`).
    #[default]
    Skip,
    /// Use every available lag, `k_eff = min(k, t - 1)`, from `t = 3` on.
    Shrink,
}

impl Warmup {
    pub fn name(self) -> &'static str {
        match self {
            Warmup::Skip => "skip",
            Warmup::Shrink => "shrink",
        }
    }
}

impl fmt::Display for Warmup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Warmup {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "skip" => Ok(Warmup::Skip),
            "shrink" => Ok(Warmup::Shrink),
            other => Err(format!(
                "unknown warmup policy {other:?} (expected skip or shrink)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WindowConfig {
    k: usize,
    pub standardize: bool,
    pub warmup: Warmup,
}

impl WindowConfig {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::BadWindow(format!(
                "window length must be at least 2, got {k}"
            )));
        }
        Ok(Self {
            k,
            standardize: false,
            warmup: Warmup::Skip,
        })
    }

    pub fn standardized(mut self, standardize: bool) -> Self {
        self.standardize = standardize;
        self
    }

    pub fn with_warmup(mut self, warmup: Warmup) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Periods with a defined indicator for a series of `t_max` periods.
    pub fn defined_periods(&self, t_max: usize) -> Result<RangeInclusive<usize>> {
        let first = match self.warmup {
            Warmup::Skip => self.k + 1,
            Warmup::Shrink => 3,
        };
        if t_max < first {
            return Err(Error::SeriesTooShort(format!(
                "{t_max} periods leave no period with a {} window of length {} (first defined period would be {first})",
                self.warmup, self.k
            )));
        }
        Ok(first..=t_max)
    }

    /// Window length actually used at period `t`.
    pub fn effective_k(&self, t: usize) -> usize {
        match self.warmup {
            Warmup::Skip => self.k,
            Warmup::Shrink => self.k.min(t.saturating_sub(1)),
        }
    }
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self::new(DEFAULT_WINDOW).expect("default window is valid")
    }
}

/// `R_k(t)`: the symmetric `n x n` Gram matrix of one lag window.
#[derive(Clone, Debug, PartialEq)]
pub struct GramCorrelationMatrix {
    t: usize,
    k: usize,
    entries: Array2<f64>,
}

impl GramCorrelationMatrix {
    pub fn new(t: usize, k: usize, entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                what: "Gram matrix columns",
                expected: rows,
                actual: cols,
            });
        }
        Ok(Self { t, k, entries })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }
}

fn check_window(window: &ArrayView2<'_, f64>, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::BadWindow(format!(
            "window length must be at least 2, got {k}"
        )));
    }
    if window.nrows() != k {
        return Err(Error::BadWindow(format!(
            "window has {} rows, expected k = {k}",
            window.nrows()
        )));
    }
    if window.iter().any(|v| !v.is_finite()) {
        return Err(Error::BadWindow(
            "window contains a non-finite value".into(),
        ));
    }
    Ok(())
}

/// Scaled Gram matrix `(1/(k-1)) W^T W` of a `k x n` lag window.
///
/// Only the upper triangle is evaluated; the lower one is mirrored, so the
/// result is symmetric bit for bit.
pub fn gram_matrix(window: ArrayView2<'_, f64>, k: usize) -> Result<Array2<f64>> {
    check_window(&window, k)?;
    let n = window.ncols();
    let scale = (k - 1) as f64;
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        let ci = window.column(i);
        for j in i..n {
            let cj = window.column(j);
            let dot: f64 = ci.iter().zip(cj.iter()).map(|(a, b)| a * b).sum();
            let r = dot / scale;
            out[[i, j]] = r;
            out[[j, i]] = r;
        }
    }
    Ok(out)
}

/// Reference evaluation of the same cross-moment by an explicit loop over
/// `(i, j, l)`, every entry computed independently. Kept as a test oracle
/// for [`gram_matrix`].
pub fn gram_matrix_bruteforce(window: ArrayView2<'_, f64>, k: usize) -> Result<Array2<f64>> {
    check_window(&window, k)?;
    let n = window.ncols();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for l in 0..k {
                acc += window[[l, i]] * window[[l, j]];
            }
            out[[i, j]] = acc / (k - 1) as f64;
        }
    }
    Ok(out)
}

/// Rescales every window column to zero mean and unit sample variance.
/// Constant columns become all zeros.
pub fn standardize_columns(window: ArrayView2<'_, f64>) -> Array2<f64> {
    let k = window.nrows();
    let mut out = window.to_owned();
    if k < 2 {
        out.fill(0.0);
        return out;
    }
    for mut col in out.columns_mut() {
        let (lo, hi) = col
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        if lo == hi {
            col.fill(0.0);
            continue;
        }
        let mean = compensated_sum(col.iter().copied()) / k as f64;
        let var = compensated_sum(col.iter().map(|v| (v - mean).powi(2))) / (k - 1) as f64;
        let sd = var.sqrt();
        if sd == 0.0 || !sd.is_finite() {
            col.fill(0.0);
            continue;
        }
        col.mapv_inplace(|v| (v - mean) / sd);
    }
    out
}

/// `V_i(t) = sum_j |r_ij(t)|` for every row `i`, diagonal included.
pub fn row_indicator(matrix: &GramCorrelationMatrix) -> Vec<f64> {
    matrix
        .entries
        .rows()
        .into_iter()
        .map(|row| compensated_sum(row.iter().map(|r| r.abs())))
        .collect()
}

/// Gram matrix for period `t` under `config` (window slicing, optional
/// standardization, warmup shrink).
pub fn period_gram(
    series: &ProcessSeries,
    t: usize,
    config: &WindowConfig,
) -> Result<GramCorrelationMatrix> {
    let k = config.effective_k(t);
    if k < 2 {
        return Err(Error::WindowOutOfRange {
            t,
            k,
            t_max: series.periods(),
        });
    }
    let window = window_of(series, t, k)?;
    let entries = if config.standardize {
        gram_matrix(standardize_columns(window.view()).view(), k)?
    } else {
        gram_matrix(window.view(), k)?
    };
    GramCorrelationMatrix::new(t, k, entries)
}

/// Per-period, per-variable indicators `V_i(t)` and their integral `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorSeries {
    first_period: usize,
    t_max: usize,
    n: usize,
    per_period: Vec<Vec<f64>>,
    total: f64,
    config: Option<WindowConfig>,
    mode_label: String,
}

impl IndicatorSeries {
    fn from_parts(
        first_period: usize,
        t_max: usize,
        n: usize,
        per_period: Vec<Vec<f64>>,
        config: Option<WindowConfig>,
        mode_label: String,
    ) -> Self {
        // ascending t, then ascending i
        let total = per_period
            .iter()
            .flat_map(|v| v.iter().copied())
            .sum::<NeumaierSum>()
            .value();
        Self {
            first_period,
            t_max,
            n,
            per_period,
            total,
            config,
            mode_label,
        }
    }

    pub fn first_period(&self) -> usize {
        self.first_period
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Defined periods, ascending.
    pub fn periods(&self) -> RangeInclusive<usize> {
        self.first_period..=self.t_max
    }

    /// Periods `1..first_period` excluded by the warmup policy.
    pub fn warmup_periods(&self) -> std::ops::Range<usize> {
        1..self.first_period
    }

    /// `per_period()[t - first_period()][i]` is `V_i(t)`.
    pub fn per_period(&self) -> &[Vec<f64>] {
        &self.per_period
    }

    pub fn at(&self, t: usize) -> Option<&[f64]> {
        t.checked_sub(self.first_period)
            .and_then(|idx| self.per_period.get(idx))
            .map(Vec::as_slice)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// `None` for series ingested from precomputed values.
    pub fn config(&self) -> Option<&WindowConfig> {
        self.config.as_ref()
    }

    pub fn mode_label(&self) -> &str {
        &self.mode_label
    }
}

pub fn indicator_series(
    series: &ProcessSeries,
    config: &WindowConfig,
    mode_label: &str,
) -> Result<IndicatorSeries> {
    let periods = config.defined_periods(series.periods())?;
    let first = *periods.start();
    let per_period = periods
        .map(|t| period_gram(series, t, config).map(|g| row_indicator(&g)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndicatorSeries::from_parts(
        first,
        series.periods(),
        series.n(),
        per_period,
        Some(*config),
        mode_label.to_owned(),
    ))
}

/// One scalar per defined period: `sum_i V_i(t)`.
pub fn scalar_per_period(series: &IndicatorSeries) -> Vec<f64> {
    series
        .per_period
        .iter()
        .map(|v| compensated_sum(v.iter().copied()))
        .collect()
}

/// Wraps already-reduced per-period scalars (periods `1..=len`) as a
/// single-variable indicator series.
pub fn ingest_precomputed(scalars: &[f64], mode_label: &str) -> Result<IndicatorSeries> {
    if scalars.is_empty() {
        return Err(Error::SeriesTooShort("no precomputed periods".into()));
    }
    for (idx, &v) in scalars.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                variable: 1,
                period: idx + 1,
                value: v,
            });
        }
        if v < 0.0 {
            return Err(Error::NegativeIndicator {
                index: idx + 1,
                value: v,
            });
        }
    }
    Ok(IndicatorSeries::from_parts(
        1,
        scalars.len(),
        1,
        scalars.iter().map(|&v| vec![v]).collect(),
        None,
        mode_label.to_owned(),
    ))
}

/// Basic versus competency mode, period by period.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeComparison {
    basic: IndicatorSeries,
    competency: IndicatorSeries,
    basic_scalars: Vec<f64>,
    competency_scalars: Vec<f64>,
    delta_per_period: Vec<f64>,
    delta_total: f64,
}

impl ModeComparison {
    pub fn basic(&self) -> &IndicatorSeries {
        &self.basic
    }

    pub fn competency(&self) -> &IndicatorSeries {
        &self.competency
    }

    pub fn periods(&self) -> RangeInclusive<usize> {
        self.basic.periods()
    }

    pub fn basic_scalars(&self) -> &[f64] {
        &self.basic_scalars
    }

    pub fn competency_scalars(&self) -> &[f64] {
        &self.competency_scalars
    }

    /// `dV(t) = V_uc(t) - V_basic(t)` over the defined periods.
    pub fn delta_per_period(&self) -> &[f64] {
        &self.delta_per_period
    }

    pub fn delta_at(&self, t: usize) -> Option<f64> {
        t.checked_sub(self.basic.first_period)
            .and_then(|idx| self.delta_per_period.get(idx))
            .copied()
    }

    /// `V_uc - V_basic`.
    pub fn delta_total(&self) -> f64 {
        self.delta_total
    }
}

pub fn compare_modes(
    basic: &IndicatorSeries,
    competency: &IndicatorSeries,
) -> Result<ModeComparison> {
    if basic.t_max != competency.t_max {
        return Err(Error::ConfigMismatch(format!(
            "t_max differs: basic {} vs competency {}",
            basic.t_max, competency.t_max
        )));
    }
    if basic.n != competency.n {
        return Err(Error::ConfigMismatch(format!(
            "variable count differs: basic {} vs competency {}",
            basic.n, competency.n
        )));
    }
    if basic.config != competency.config || basic.first_period != competency.first_period {
        return Err(Error::ConfigMismatch(
            "window configuration differs between the two modes".into(),
        ));
    }
    let basic_scalars = scalar_per_period(basic);
    let competency_scalars = scalar_per_period(competency);
    let delta_per_period = competency_scalars
        .iter()
        .zip(&basic_scalars)
        .map(|(uc, b)| uc - b)
        .collect();
    Ok(ModeComparison {
        delta_total: competency.total - basic.total,
        basic: basic.clone(),
        competency: competency.clone(),
        basic_scalars,
        competency_scalars,
        delta_per_period,
    })
}
