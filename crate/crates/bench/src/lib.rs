//! Criterion benchmarks for `orbitlab`; see `benches/orbitlab.rs`.
