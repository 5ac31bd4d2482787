//! File writers with embedded provenance: every output records the tool
//! version, the exact invocation, and the configuration that produced it.

use std::fs;
use std::io::Write;
use std::path::Path;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Floating-point values are printed with 12 significant digits so
/// downstream comparisons at 1e−9 are never limited by formatting.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// The exact command line, reconstructed for provenance headers.
pub fn invocation() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

pub fn provenance_comments(config: &str) -> Vec<String> {
    vec![
        format!("tool: qloss {TOOL_VERSION}"),
        format!("invocation: {}", invocation()),
        format!("config: {config}"),
        format!("rng: {}", qloss_core::numerics::RNG_ALGORITHM),
    ]
}

/// CSV with `# `-prefixed header comments followed by a column-name row.
pub fn write_csv(
    path: &Path,
    comments: &[String],
    columns: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    atomic_write(path, text.as_bytes())
}

fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(bytes)
}
