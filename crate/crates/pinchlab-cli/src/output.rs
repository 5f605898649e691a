//! Artifact serialization: CSV with full-precision floats plus the summary
//! and violations JSON files.

use crate::config::RunContext;
use anyhow::Context;
use serde_json::{json, Value};
use std::io::Write;

/// One run's outputs before hitting the filesystem.
pub struct Artifacts {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
    pub violations: Vec<Value>,
}

/// Scientific notation with 17 significant digits so external oracles can
/// diff exactly.
pub fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

pub fn write_artifacts(ctx: &RunContext, artifacts: Artifacts) -> anyhow::Result<()> {
    if let Some(parent) = ctx.out_prefix.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    let csv_path = ctx.out_prefix.with_extension("csv");
    let mut csv = std::fs::File::create(&csv_path)
        .with_context(|| format!("creating {}", csv_path.display()))?;
    if !ctx.reproducible {
        writeln!(csv, "# pinchlab {} generated_at={}", ctx.command_name, unix_now())?;
    }
    writeln!(csv, "{}", artifacts.header.join(","))?;
    for row in &artifacts.rows {
        writeln!(csv, "{}", row.join(","))?;
    }

    let mut summary = artifacts.summary;
    if let Value::Object(map) = &mut summary {
        map.insert("command".into(), json!(ctx.command_name));
        map.insert("seed".into(), json!(ctx.seed));
        map.insert("violations".into(), json!(artifacts.violations.len()));
        if !ctx.reproducible {
            map.insert("generated_at".into(), json!(unix_now()));
        }
    }
    let summary_path = ctx.out_prefix.with_extension("summary.json");
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)
        .with_context(|| format!("writing {}", summary_path.display()))?;

    let violations_path = ctx.out_prefix.with_extension("violations.json");
    std::fs::write(
        &violations_path,
        serde_json::to_string_pretty(&Value::Array(artifacts.violations))?,
    )
    .with_context(|| format!("writing {}", violations_path.display()))?;
    Ok(())
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
