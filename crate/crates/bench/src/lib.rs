//! Criterion benchmarks for `droplet-core`; see `benches/kernels.rs`.
