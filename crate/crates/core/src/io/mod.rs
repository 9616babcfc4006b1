//! File formats: configuration, binary snapshots and CSV tables.
//!
//! Every file is written atomically: the bytes go to a sibling temporary
//! file that is renamed over the target once complete.

mod config;
mod snapshot;
mod trace;

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

pub use config::parse_config;
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
pub use trace::{read_trace, trace_csv, write_spectrum, write_trace};

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let mut file = fs::File::create(&tmp)?;
    file.write_all(bytes)?;
    file.sync_all()?;
    drop(file);
    fs::rename(&tmp, path)?;
    Ok(())
}
