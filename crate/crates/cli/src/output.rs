//! CSV / JSON-lines rows and the JSON report.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Format;
use crate::error::CliError;
use crate::run::{Report, Row};

pub fn write_rows<W: Write>(rows: &[Row], format: Format, out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(Row::HEADER)?;
            for r in rows {
                w.write_record(r.record())?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            let mut out = std::io::BufWriter::new(out);
            for r in rows {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// rows.{csv,jsonl} and report.json inside `dir`; returns the rows path.
pub fn write_dir(dir: &Path, rows: &[Row], report: &Report, format: Format) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(match format {
        Format::Csv => "rows.csv",
        Format::Jsonl => "rows.jsonl",
    });
    write_rows(rows, format, std::fs::File::create(&path)?)?;
    let mut f = std::fs::File::create(dir.join("report.json"))?;
    serde_json::to_writer_pretty(&mut f, report)?;
    f.write_all(b"\n")?;
    Ok(path)
}
