//! JSON run reports.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA: u64 = 1;

/// Adds the schema version to a report object.
pub fn finish(body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    if let Value::Object(o) = body {
        m.extend(o);
    } else {
        m.insert("result".into(), body);
    }
    Value::Object(m)
}

pub fn write(path: &Path, body: Value) -> Result<()> {
    let text = serde_json::to_string_pretty(&finish(body))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_comes_first() {
        let v = finish(serde_json::json!({"a": 1}));
        assert_eq!(v["schema"], 1);
        assert_eq!(v["a"], 1);
    }
}
