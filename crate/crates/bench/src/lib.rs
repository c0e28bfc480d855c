//! Criterion benchmarks for `klab-core`; see `benches/`.
