//! Benchmark-only crate; see benches/witnesses.rs.
