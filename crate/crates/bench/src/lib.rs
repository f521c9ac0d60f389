//! Benchmark-only crate; see benches/pdo.rs.
