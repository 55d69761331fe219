//! Criterion benchmarks for field evaluation; see `benches/fields.rs`.
