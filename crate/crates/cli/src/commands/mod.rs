pub mod attack;
pub mod design;
pub mod report;
pub mod simulate;
pub mod tables;

use std::path::Path;

use crate::CliError;

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}
