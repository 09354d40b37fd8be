//! Criterion benchmarks for the sixpow pipeline live in `benches/`.
