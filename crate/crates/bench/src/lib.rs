//! Criterion benchmarks for `qwalk-core`; run with `cargo bench -p qwalk-bench`.
