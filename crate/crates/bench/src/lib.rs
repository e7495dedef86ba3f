//! Benchmarks live in `benches/`; see `cargo bench -p fairdiv-bench`.
