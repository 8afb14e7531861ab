//! Fixtures, enumeration, serialization and the verification suites.

pub mod enumerate;
pub mod fixtures;
pub mod format;
pub mod suites;

pub use enumerate::{enumerate_maps, Enumeration, MapFilter, ENUMERATION_BUDGET};
pub use fixtures::{catalog, catalog_documents, counterexamples, reduce_with, reduce_with_budget, CaseExpectation, Expectations, FixtureDocument, MapFixture};
pub use format::{map_from_json, map_to_json, matrix_from_rows, matrix_to_rows, read_jsonl, write_jsonl, MapDocument};
pub use suites::{suite_names, verify_suite, Failure, SuiteOptions, SuiteReport, DEFAULT_SEED, SUITES};
