//! Criterion benchmarks for quperf-core; see `benches/`.
