use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::{CliError, Result};

/// 17 significant digits: round-trips every `f64`.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `header` and one line per row.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = String>,
{
    let file = File::create(path).map_err(CliError::io(path))?;
    let mut w = BufWriter::new(file);
    let mut put = |s: &str| -> std::io::Result<()> {
        w.write_all(s.as_bytes())?;
        w.write_all(b"\n")
    };
    put(header).map_err(CliError::io(path))?;
    for row in rows {
        put(&row).map_err(CliError::io(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(CliError::io(path))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

/// `t` as it appears in file names: shortest round-trip form.
pub fn t_label(t: f64) -> String {
    format!("{t}")
}
