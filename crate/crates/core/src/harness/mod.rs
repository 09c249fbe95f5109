//! Set documents, seeded generators, verification suites and reports.

pub mod document;
pub mod generate;
pub mod report;
pub mod verify;

pub use document::{cellset_document, expect_cellset, parse_set, print_set, SetDocument};
pub use generate::{gen_random_convex, gen_with_rng, random_box, random_convex_shape, GenConfig, GenMode};
pub use report::{Outcome, Record, Report, Summary, Z_TOLERANCE};
pub use verify::{instance_rng, random_instance, verify, Suite, VerifyConfig};
