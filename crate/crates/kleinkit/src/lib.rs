//! Script language, runner and reports for checking Klein-transformed ladder
//! algebras. The algebra itself lives in `kleinkit-core`.

pub mod dsl;
pub mod report;
pub mod run;

pub use report::RunReport;
pub use run::{check_source, Options};
