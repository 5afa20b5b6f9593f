//! Criterion benchmarks for depusage-core; see `benches/`.
