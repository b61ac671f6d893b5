//! Criterion benchmarks for `eqbundle-core`; see `benches/`.
