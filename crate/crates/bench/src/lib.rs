//! Criterion benchmarks for factorkit; see `benches/`.
