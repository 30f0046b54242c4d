//! Criterion benchmarks for the enumeration and polynomial kernels live in `benches/`.
