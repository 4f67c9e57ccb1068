//! Criterion benchmarks for `pad-core`; see `benches/`.
//!
//! Run with `cargo bench -p pad-bench`.
