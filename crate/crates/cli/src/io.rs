use std::io::{Read, Write};
use std::path::Path;

use crate::error::CliError;

/// Reads the whole file, or stdin when `path` is `None`.
pub fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) => {
            std::fs::read(p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))
        }
        None => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CliError::io("reading stdin", e))?;
            Ok(buf)
        }
    }
}

/// Writes `bytes` in one go: to a temporary file renamed over `path`, or
/// to stdout.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let ctx = || format!("writing {}", p.display());
            let mut tmp =
                tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(ctx(), e))?;
            tmp.write_all(bytes).map_err(|e| CliError::io(ctx(), e))?;
            tmp.persist(p).map_err(|e| CliError::io(ctx(), e.error))?;
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|()| out.flush())
                .map_err(|e| CliError::io("writing stdout", e))
        }
    }
}

/// Prints a report as one JSON line on stderr.
pub fn json_line(value: &serde_json::Value) {
    eprintln!("{value}");
}
