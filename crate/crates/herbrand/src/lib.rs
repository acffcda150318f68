//! File formats, reports and the bundled corpus around `herbrand-core`.

pub mod corpus;
pub mod report;
pub mod script;
pub mod sexp;
pub mod structure;
pub mod suites;
pub mod text;

pub use herbrand_core as core;
