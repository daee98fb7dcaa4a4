//! Integral correlation indicators over multivariate enterprise process series.
//!
//! An enterprise is modelled as an `n`-variable series of monetary indicators
//! over `t_max` periods ([`ProcessSystem`]). For every period `t` the `k` most
//! recent observations form a lag window whose scaled Gram matrix
//! `(1/(k-1)) * W^T W` is reduced to per-variable row sums of absolute values.
//! Summing those over variables and periods yields the integral indicator.
//! Two regimes (a basic mode and a competency mode) are compared period by
//! period with [`compare_modes`].
//!
//! The competency overlay ([`competency`]) supplies the binary
//! competency-to-process compliance matrix, the resource budget check and the
//! rules deriving a competency-mode series from a process series.
//! [`scenario`] generates seeded synthetic regime-change data, and [`io`] /
//! [`report`] own every file format.

pub mod competency;
pub mod error;
pub mod fixture;
pub mod indicator;
pub mod io;
pub mod model;
pub mod report;
pub mod scenario;
pub mod sum;

pub use competency::{
    check_budget, derive_mode_series, mapping_cost, BudgetCheck, Competency, CompetencyCatalog,
    ComplianceMatrix, DerivationRule, ResourceBudget,
};
pub use error::{Error, Result};
pub use indicator::{
    compare_modes, gram_matrix, gram_matrix_bruteforce, indicator_series, ingest_precomputed,
    row_indicator, scalar_per_period, GramCorrelationMatrix, IndicatorSeries, ModeComparison,
    Warmup, WindowConfig,
};
pub use model::{build_process_system, slice_window, ProcessSeries, ProcessSystem, TimeAxis};
pub use report::{emit_plot_data, emit_report, ReportContext, ReportFormat, ReportTable};
pub use scenario::{generate_series, staffing_demo_scenario, EventKind, Scenario, ScenarioEvent};

/// Tool version echoed into report metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
