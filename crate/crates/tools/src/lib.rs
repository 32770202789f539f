//! File formats, run reports and the `lckspace` command line on top of
//! `lckspace-core`.
//!
//! Every command produces a [`RunReport`]: checks with pass, fail or
//! partial outcomes, witnesses for failures, results, and input digests.
//! The machine JSON channel never contains wall-clock times, so identical
//! inputs give byte-identical output.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub mod cli;
pub mod format;
pub mod report;
pub mod scalar_text;

mod cech;
mod lck;
mod psh;

pub use cli::{run, run_args, Cli};
pub use format::InputError;
pub use report::{Check, Outcome, RunReport};
pub use scalar_text::{Numeric, TextScalar};

/// Reads and parses a JSON input, recording its digest.
pub(crate) fn load_doc(report: &mut RunReport, path: &Path) -> Result<(String, Value), InputError> {
    let name = cli::path_str(path);
    let text = report.read_input(&name)?;
    let value = format::parse_value(&name, &text)?;
    Ok((name, value))
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<(), InputError> {
    let name = cli::path_str(path);
    let text = serde_json::to_string_pretty(value).expect("plain data");
    std::fs::write(path, text + "\n").map_err(|e| InputError::new(&name, "file", e))
}

/// Runs `$body` with `$S` bound to the scalar type of `$mode`.
macro_rules! with_scalar {
    ($mode:expr, $S:ident => $body:expr) => {
        match $mode {
            $crate::Numeric::Rational => {
                type $S = lckspace_core::Rational;
                $body
            }
            $crate::Numeric::Log => {
                type $S = lckspace_core::LogSum;
                $body
            }
            $crate::Numeric::Float => {
                type $S = f64;
                $body
            }
        }
    };
}
pub(crate) use with_scalar;
