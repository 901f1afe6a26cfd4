//! Shared nothing; the benchmarks live in `benches/engine.rs`.
