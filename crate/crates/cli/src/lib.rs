//! Ring specification files, suite execution and reports for the
//! `ringstab` command-line tool.

pub mod report;
pub mod spec;
pub mod suites;

pub use report::{CheckResult, Format, Report, RingReport, Summary};
pub use spec::{parse_ring_spec, parse_ring_spec_file, DeclaredRing, RingSpecFile, SpecError};
pub use suites::{run_suite, SuiteError, SuiteOptions, SUITES};
