//! Criterion benchmarks for the census crates; see `benches/`.
