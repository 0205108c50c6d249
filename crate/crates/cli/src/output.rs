//! Atomic writing of reports and CSV tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;
use zeroclass::report::Table;
use zeroclass::{AnalysisReport, Error, Result};

/// Shortest round-trip decimal, switching to exponent form for very small
/// or large magnitudes. NaN marks a missing value and is written empty.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn table_csv(table: &Table) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_number(*v)))
            .map_err(io)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Writes one CSV per table, any extra files, then `report.json`.
pub fn write_outputs(
    dir: &Path,
    report: &AnalysisReport,
    extra: &[(String, String)],
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, table) in &report.profiles {
        let path = dir.join(format!("{name}.csv"));
        write_atomic(&path, &table_csv(table)?)?;
        written.push(path);
    }
    for (name, contents) in extra {
        let path = dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        written.push(path);
    }
    let path = dir.join("report.json");
    let mut json = report.to_json()?;
    json.push('\n');
    write_atomic(&path, json.as_bytes())?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 0.8, 1.0 / 3.0, 1e-10, 2.5e20, -7.25, 1e-4] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_number(0.8), "0.8");
        assert_eq!(format_number(1e-10), "1e-10");
        assert_eq!(format_number(f64::NAN), "");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new(["r", "h"]);
        t.push(vec![2.5, 0.8]).unwrap();
        t.push(vec![10.5, f64::NAN]).unwrap();
        let text = String::from_utf8(table_csv(&t).unwrap()).unwrap();
        assert_eq!(text, "r,h\n2.5,0.8\n10.5,\n");
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
