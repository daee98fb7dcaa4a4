//! Criterion benchmarks for indicator-core; see `benches/`.
