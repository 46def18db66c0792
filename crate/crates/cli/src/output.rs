//! Envelope rendering, table layout and the run manifest.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::args::Format;

/// `{"command", "params", "result"}` plus optional self-checks. Maps are
/// `BTreeMap`-backed, so the JSON text is canonical with sorted keys.
pub fn envelope(command: &str, params: &Map<String, Value>, result: Value, checks: Option<Value>) -> Value {
    let mut v = json!({
        "command": command,
        "params": params,
        "result": result,
    });
    if let Some(c) = checks {
        v["checks"] = c;
    }
    v
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
            s.push('\n');
            s
        }
        Format::Table => table(v),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) if !m.is_empty() => m.iter().for_each(|(k, x)| flatten(&join(k), x, rows)),
        Value::Array(a) if !a.is_empty() => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Two aligned columns: flattened path and scalar value.
fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect()
}

pub fn manifest(argv: &[String], params: &Map<String, Value>, output: &str) -> Value {
    json!({
        "command_line": std::iter::once("cpw").chain(argv.iter().skip(1).map(String::as_str)).collect::<Vec<_>>().join(" "),
        "params": params,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "output_digest": hex::encode(Sha256::digest(output.as_bytes())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_flattens_nested_values() {
        let v = json!({"b": {"x": "1/2", "y": [1, 2]}, "a": true});
        assert_eq!(table(&v), "a      true\nb.x    1/2\nb.y.0  1\nb.y.1  2\n");
    }

    #[test]
    fn digest_depends_only_on_output() {
        let p = Map::new();
        let a = manifest(&["cpw".into()], &p, "x");
        let b = manifest(&["cpw".into(), "other".into()], &p, "x");
        assert_eq!(a["output_digest"], b["output_digest"]);
        assert_eq!(a["output_digest"].as_str().unwrap().len(), 64);
    }
}
