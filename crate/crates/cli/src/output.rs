use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Compact JSON with sorted object keys.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn envelope(command: &str, inputs: &Value, result: Value, conjectural: bool, elapsed_us: u128, cached: bool) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "result": result,
        "conjectural": conjectural,
        "version": VERSION,
        "timing": { "elapsed_us": elapsed_us as u64, "cached": cached },
    })
}

fn cache_key(command: &str, inputs: &Value) -> String {
    format!("{command}|{}|{VERSION}", canonical(inputs))
}

fn load(path: &Path) -> Result<Map<String, Value>, String> {
    match fs::read_to_string(path) {
        Ok(text) if text.trim().is_empty() => Ok(Map::new()),
        Ok(text) => match serde_json::from_str::<Value>(&text) {
            Ok(Value::Object(map)) => Ok(map),
            _ => Err(format!("cache file {} is not a JSON object", path.display())),
        },
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Map::new()),
        Err(e) => Err(format!("cannot read cache {}: {e}", path.display())),
    }
}

fn store(path: &Path, map: Map<String, Value>) -> Result<(), String> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, canonical(&Value::Object(map))).map_err(|e| format!("cannot write cache: {e}"))?;
    fs::rename(&tmp, path).map_err(|e| format!("cannot write cache: {e}"))
}

/// Runs `compute` unless the cache already holds a result for these inputs.
/// Returns the result, whether it came from the cache, and the elapsed time.
pub fn cached<E>(
    cache: Option<&Path>,
    command: &str,
    inputs: &Value,
    compute: impl FnOnce() -> Result<Value, E>,
) -> Result<Result<(Value, bool, u128), E>, String> {
    let start = Instant::now();
    let Some(path) = cache else {
        return Ok(compute().map(|v| (v, false, start.elapsed().as_micros())));
    };
    let key = cache_key(command, inputs);
    let mut map = load(path)?;
    if let Some(v) = map.get(&key) {
        return Ok(Ok((v.clone(), true, start.elapsed().as_micros())));
    }
    match compute() {
        Ok(v) => {
            map.insert(key, v.clone());
            store(path, map)?;
            Ok(Ok((v, false, start.elapsed().as_micros())))
        }
        Err(e) => Ok(Err(e)),
    }
}

/// CSV text from a header and rows of already formatted cells.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory writes succeed");
    for row in rows {
        w.write_record(row).expect("in-memory writes succeed");
    }
    String::from_utf8(w.into_inner().expect("in-memory writes succeed")).expect("cells are UTF-8")
}
