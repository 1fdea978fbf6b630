//! Criterion benchmarks for the limiting phase and the classical baselines.
//! The benchmarks themselves live under `benches/`; run them with
//! `cargo bench -p simax-bench`.
