use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cache::CacheStats;
use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Serialize)]
pub struct Provenance {
    pub precision: Option<u32>,
    /// Digits actually certified, when the command has a notion of it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_achieved: Option<i64>,
    pub depth: Option<u32>,
    pub cache: CacheStats,
    pub parallel: bool,
}

pub fn envelope(
    config: &RunConfig,
    result: Value,
    conventions: Option<Value>,
    provenance: Provenance,
    meta: bool,
) -> Value {
    let mut out = Map::new();
    out.insert("command".into(), json!(config.command));
    out.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    out.insert("result".into(), result);
    if let Some(c) = conventions {
        out.insert("conventions".into(), c);
    }
    out.insert("provenance".into(), serde_json::to_value(provenance).expect("provenance serializes"));
    if meta {
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        out.insert("meta".into(), json!({ "version": env!("CARGO_PKG_VERSION"), "timestamp_unix": ts }));
    }
    Value::Object(out)
}

pub fn error_report(command: &str, err: &CliError) -> Value {
    json!({
        "command": command,
        "error": { "kind": err.kind(), "message": err.to_string(), "exit_code": err.exit_code() },
    })
}

/// One `path<TAB>value` line per scalar leaf.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), items.join(" ")));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON values serialize"),
        Format::Table => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, x)| format!("{k:<width$}  {x}")).collect::<Vec<_>>().join("\n")
        }
    }
}
