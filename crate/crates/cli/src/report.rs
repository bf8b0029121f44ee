//! Deterministic experiment reports: aligned table on stdout, JSON or CSV
//! on request. Floats are rounded to 12 significant digits before they are
//! serialized, so identical inputs produce byte-identical files (the runtime
//! field is the one documented exception).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

/// One long-format data row: series, x, y.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub series: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    /// Resolved inputs, stable key order.
    pub inputs: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    pub verdicts: Vec<VerdictLine>,
    /// Wall-clock milliseconds; excluded from golden comparisons.
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: BTreeMap::new(),
            rows: Vec::new(),
            verdicts: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn row(&mut self, series: impl Into<String>, x: f64, y: f64) {
        self.rows.push(Row {
            series: series.into(),
            x: sig12(x),
            y: sig12(y),
        });
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(VerdictLine {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Human-readable table for stdout.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} (v{})", self.command, self.version);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "#   {k} = {v}");
        }
        if !self.rows.is_empty() {
            let w = self
                .rows
                .iter()
                .map(|r| r.series.len())
                .max()
                .unwrap_or(6)
                .max(6);
            let _ = writeln!(out, "{:<w$}  {:>18}  {:>18}", "series", "x", "y");
            for r in &self.rows {
                let _ = writeln!(
                    out,
                    "{:<w$}  {:>18}  {:>18}",
                    r.series,
                    format_g(r.x),
                    format_g(r.y)
                );
            }
        }
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "[{}] {} — {}",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                v.detail
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.series, format_g(r.x), format_g(r.y));
        }
        out
    }

    /// Writes JSON or CSV depending on the path extension.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let payload = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => self.to_json(),
            Some("csv") => self.to_csv(),
            other => {
                return Err(std::io::Error::new(
                    std::io::ErrorKind::InvalidInput,
                    format!("unsupported output extension {other:?} (expected .json or .csv)"),
                ))
            }
        };
        fs::write(path, payload)
    }
}

/// Rounds to 12 significant digits; the value then round-trips through JSON
/// with a stable shortest representation.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// %.12g-style rendering: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros stripped.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    } else {
        let mut s = format!("{x:.11e}");
        if let Some(epos) = s.find('e') {
            let (mant, exp_part) = s.split_at(epos);
            let mut mant = mant.to_string();
            if mant.contains('.') {
                while mant.ends_with('0') {
                    mant.pop();
                }
                if mant.ends_with('.') {
                    mant.pop();
                }
            }
            s = format!("{mant}{exp_part}");
        }
        s
    }
}
