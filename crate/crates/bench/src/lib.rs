//! Criterion benchmarks for `bicubic-core`; run with `cargo bench -p bicubic-bench`.
