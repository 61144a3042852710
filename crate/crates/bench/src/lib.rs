//! Benchmarks for the workbench live in `benches/`.
