//! Named theorem checkers and the acceptance suite.

pub mod checks;
pub mod report;
pub mod suite;

pub use checks::{
    check_almost_kahler, check_catalog_tables, check_contact, check_decomposition, check_killing, check_normality,
    check_rank1_classification, CheckOptions, SpaceContext, Tolerances,
};
pub use report::{Expectation, Relation, Residual, VerificationReport, Verdict, REPORT_SCHEMA};
pub use suite::{full_suite, rectified_standard, run_spec, run_suite, CheckSpec, SuiteReport};
