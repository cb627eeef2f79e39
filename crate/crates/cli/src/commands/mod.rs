//! One module per subcommand. Each turns a parsed config into an [`Output`].

pub mod curve;
pub mod offsets;
pub mod palloc;
pub mod precode;
pub mod stcode;

/// Standard-error multiple used for the consistency checks in reports.
pub const REPORT_SIGMAS: f64 = 3.0;
