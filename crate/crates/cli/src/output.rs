// SPDX-License-Identifier: MIT OR Apache-2.0

//! Output files and their provenance sidecars.
//!
//! Data files are deterministic: CSV numbers use 17 significant digits and
//! JSON uses the shortest round-trip form, and neither holds a timestamp.
//! Each file `X` gets a sidecar `X.manifest.json` carrying the run manifest,
//! which is the only place the wall clock appears.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use agehopf::ModelParams64;

/// Format with 17 significant digits, exact for binary64.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // NaN and infinities have no decimal form; spell them as csv readers
        // commonly accept.
        format!("{x}")
    }
}

/// Write a CSV with `\n` line endings.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Write JSON to `path`, or to stdout when `path` is `None`.
pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = to_json(value)?;
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Provenance of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub params: ModelParams64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Resolved options after merging flags and config.
    pub options: Value,
    pub outputs: Vec<String>,
    pub tool_version: &'static str,
    /// Seconds since the Unix epoch when the manifest was written.
    pub wall_clock_unix: f64,
}

impl RunManifest {
    pub fn new(command: &'static str, params: ModelParams64, options: Value) -> Self {
        Self {
            command,
            params,
            tau: None,
            options,
            outputs: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            wall_clock_unix: 0.0,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn record(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Write `X.manifest.json` next to every recorded output.
    pub fn write_sidecars(mut self) -> Result<()> {
        self.wall_clock_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0);
        let text = to_json(&self)?;
        for out in &self.outputs {
            let path = sidecar(Path::new(out));
            std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    }
}

pub fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// `traj.csv` -> `traj.<suffix>`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// Plot script for a `t,S,P,J,b` file.
pub fn gnuplot_trajectory(csv: &Path, time_label: &str) -> String {
    let name = csv.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set multiplot layout 2,1\n\
         set xlabel '{time_label}'\n\
         plot '{name}' using 1:2 with lines title 'S'\n\
         plot '{name}' using 1:3 with lines title 'P'\n\
         unset multiplot\n\
         pause -1\n"
    )
}
