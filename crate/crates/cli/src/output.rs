//! Output plumbing: format selection and deterministic writers.

use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Write the rendered report to --out or stdout.
pub fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
                .and_then(|_| {
                    if !content.ends_with('\n') {
                        lock.write_all(b"\n")
                    } else {
                        Ok(())
                    }
                })
                .map_err(|e| e.to_string())
        }
    }
}

/// Render rows as CSV with a header, floats in shortest round-trip form.
pub fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Two-column text table with aligned keys.
pub fn kv_table(pairs: &[(String, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in pairs {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}
