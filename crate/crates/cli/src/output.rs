//! CSV and JSON emission. Floats carry 17 significant digits in '.'-decimal
//! scientific notation, so tables round-trip exactly.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A header plus string-formatted rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, out: impl Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Where a command's artifacts go.
pub struct Sink {
    dir: Option<PathBuf>,
    tag: String,
    command: &'static str,
}

impl Sink {
    pub fn new(config: &RunConfig) -> Result<Self, CliError> {
        if let Some(dir) = &config.output {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
        }
        Ok(Self {
            dir: config.output.clone(),
            tag: config.tag(),
            command: config.command.name(),
        })
    }

    fn path(&self, dir: &Path, suffix: &str, ext: &str) -> PathBuf {
        let stem = if suffix.is_empty() {
            format!("{}-{}", self.command, self.tag)
        } else {
            format!("{}-{}-{suffix}", self.command, self.tag)
        };
        dir.join(format!("{stem}.{ext}"))
    }

    /// Writes the table to `<dir>/<command>-<tag>[-suffix].csv`, or to stdout when
    /// `primary` is set and there is no output directory.
    pub fn table(&self, suffix: &str, table: &Table, primary: bool) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => {
                let path = self.path(dir, suffix, "csv");
                table.write_to(fs::File::create(&path)?)?;
                log::info!("wrote {}", path.display());
                Ok(())
            }
            None if primary => table.write_to(io::stdout().lock()),
            None => Ok(()),
        }
    }

    /// Writes the report to `<dir>/<command>-<tag>.json`, or to stdout when `primary`
    /// is set and there is no output directory.
    pub fn report<T: Serialize>(&self, report: &T, primary: bool) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(report)?;
        match &self.dir {
            Some(dir) => {
                let path = self.path(dir, "", "json");
                fs::write(&path, text + "\n")?;
                log::info!("wrote {}", path.display());
                Ok(())
            }
            None if primary => {
                let mut out = io::stdout().lock();
                writeln!(out, "{text}")?;
                Ok(())
            }
            None => Ok(()),
        }
    }
}

/// Every JSON report: the config that produced it, then the results.
#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub config: &'a RunConfig,
    #[serde(flatten)]
    pub result: T,
}
