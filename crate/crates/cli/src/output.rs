//! CSV assembly: a `#` manifest block, a header row, then data rows.
//!
//! Numbers are written with 17 significant digits in Rust's own float
//! formatting, which never consults the locale. Everything below the
//! manifest is a pure function of the echoed inputs, so re-running with
//! them reproduces the payload byte for byte.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use vdl_core::constants;

use crate::error::{CliError, CliResult};

/// Format a value with 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Shortest text that parses back to the same value, for echoed inputs.
pub trait Echo {
    fn echo(&self) -> String;
}

impl Echo for f64 {
    fn echo(&self) -> String {
        // Debug switches to exponent form for very large or small magnitudes
        format!("{self:?}")
    }
}

macro_rules! echo_display {
    ($($t:ty),*) => {
        $(impl Echo for $t {
            fn echo(&self) -> String {
                self.to_string()
            }
        })*
    };
}

echo_display!(u64, usize, str, String);

impl<T: Echo + ?Sized> Echo for &T {
    fn echo(&self) -> String {
        (**self).echo()
    }
}

/// Everything needed to reproduce one output file.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    /// A command line that regenerates the payload.
    pub reproduce: String,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Vec::new(),
            reproduce: String::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Echo) -> &mut Self {
        self.inputs.push((key.to_string(), value.echo()));
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str("# manifest\n");
        let _ = writeln!(s, "# command = {}", self.command);
        let _ = writeln!(s, "# version = vdl {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# timestamp_utc = {}", Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true));
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "# input.{k} = {v}");
        }
        for (k, v) in constants::listing() {
            let _ = writeln!(s, "# constant.{k} = {}", num(v));
        }
        if !self.reproduce.is_empty() {
            let _ = writeln!(s, "# reproduce = {}", self.reproduce);
        }
        s
    }
}

/// A manifest followed by a CSV table.
pub struct Table {
    pub manifest: Manifest,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self) -> String {
        let mut s = self.manifest.render();
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Write to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("stdout", e))
        }
    }
}
