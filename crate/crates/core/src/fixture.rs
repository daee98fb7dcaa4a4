//! Verification of a precomputed two-mode table against its published totals.

use crate::error::Result;
use crate::indicator::{compare_modes, ingest_precomputed, ModeComparison};
use crate::io::PrecomputedTable;

pub const PUBLISHED_BASIC_TOTAL: f64 = 5069.93;
pub const PUBLISHED_COMPETENCY_TOTAL: f64 = 5491.17;
pub const PUBLISHED_DELTA_TOTAL: f64 = 421.24;

/// Band for values printed at two decimals whose hidden precision was rounded.
pub const PRINT_TOLERANCE: f64 = 0.02;

#[derive(Clone, Debug)]
pub struct FixtureCheck {
    pub comparison: ModeComparison,
    pub basic_total: f64,
    pub competency_total: f64,
    pub delta_total: f64,
    /// Periods whose printed delta differs from the column difference by more
    /// than [`PRINT_TOLERANCE`].
    pub delta_outliers: Vec<usize>,
}

impl FixtureCheck {
    pub fn totals_match(&self) -> bool {
        within(self.basic_total, PUBLISHED_BASIC_TOTAL)
            && within(self.competency_total, PUBLISHED_COMPETENCY_TOTAL)
            && within(self.delta_total, PUBLISHED_DELTA_TOTAL)
    }

    pub fn passed(&self) -> bool {
        self.totals_match() && self.delta_outliers.is_empty()
    }
}

pub fn within(value: f64, published: f64) -> bool {
    (value - published).abs() <= PRINT_TOLERANCE + 1e-9
}

/// Runs both columns through [`ingest_precomputed`] and [`compare_modes`].
pub fn verify_table(table: &PrecomputedTable) -> Result<FixtureCheck> {
    let basic = ingest_precomputed(&table.basic, "basic")?;
    let competency = ingest_precomputed(&table.competency, "universal-competencies")?;
    let comparison = compare_modes(&basic, &competency)?;
    let delta_outliers = match &table.printed_delta {
        Some(printed) => comparison
            .periods()
            .zip(comparison.delta_per_period().iter().zip(printed))
            .filter(|(_, (computed, printed))| !within(**computed, **printed))
            .map(|(t, _)| t)
            .collect(),
        None => Vec::new(),
    };
    Ok(FixtureCheck {
        basic_total: basic.total(),
        competency_total: competency.total(),
        delta_total: comparison.delta_total(),
        comparison,
        delta_outliers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::table1_fixture;

    #[test]
    fn shipped_fixture_passes() {
        let check = verify_table(&table1_fixture()).unwrap();
        assert!(check.passed(), "{check:?}");
        assert!((check.basic_total - 5069.94).abs() < 1e-9);
        assert!((check.competency_total - 5491.17).abs() < 1e-9);
    }

    #[test]
    fn tampered_table_fails() {
        let mut table = table1_fixture();
        table.basic[10] += 1.0;
        let check = verify_table(&table).unwrap();
        assert!(!check.totals_match());
        assert!(check.delta_outliers.contains(&11));
    }
}
