//! Criterion benchmarks for `finclass-core`; see `benches/`.
