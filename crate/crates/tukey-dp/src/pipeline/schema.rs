//! Bundled report schema and a validator for the JSON-Schema subset it
//! uses (`type`, `properties`, `required`, `items`, `enum`,
//! `additionalProperties`).

use serde_json::Value;

pub const REPORT_SCHEMA: &str = include_str!("../../../../schema/report.schema.json");

pub fn report_schema() -> Value {
    serde_json::from_str(REPORT_SCHEMA).expect("bundled schema parses")
}

/// Validates `value` against the schema subset; returns the path and reason
/// of the first violation.
pub fn validate(value: &Value, schema: &Value) -> Result<(), String> {
    validate_at(value, schema, "$")
}

fn validate_at(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    let obj = match schema.as_object() {
        Some(o) => o,
        None => return Ok(()),
    };
    if let Some(types) = obj.get("type") {
        let allowed: Vec<&str> = match types {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => vec![],
        };
        let actual = type_name(value);
        let ok = allowed.iter().any(|t| {
            *t == actual || (*t == "number" && actual == "integer")
        });
        if !ok {
            return Err(format!("{path}: expected {allowed:?}, got {actual}"));
        }
    }
    if let Some(en) = obj.get("enum").and_then(|e| e.as_array()) {
        if !en.contains(value) {
            return Err(format!("{path}: not in enum"));
        }
    }
    if let Some(props) = obj.get("properties").and_then(|p| p.as_object()) {
        if let Some(map) = value.as_object() {
            if let Some(req) = obj.get("required").and_then(|r| r.as_array()) {
                for r in req.iter().filter_map(|r| r.as_str()) {
                    if !map.contains_key(r) {
                        return Err(format!("{path}: missing required `{r}`"));
                    }
                }
            }
            let additional = obj
                .get("additionalProperties")
                .and_then(|a| a.as_bool())
                .unwrap_or(true);
            for (k, v) in map {
                match props.get(k) {
                    Some(sub) => validate_at(v, sub, &format!("{path}.{k}"))?,
                    None if !additional => {
                        return Err(format!("{path}: unexpected property `{k}`"))
                    }
                    None => {}
                }
            }
        }
    }
    if let Some(items) = obj.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_at(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                "integer"
            } else {
                "number"
            }
        }
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn bundled_schema_parses() {
        let s = report_schema();
        assert_eq!(s["properties"]["schema_version"]["type"], "string");
    }

    #[test]
    fn subset_validator_catches_mistakes() {
        let schema = json!({
            "type": "object",
            "required": ["a"],
            "properties": {
                "a": {"type": "number"},
                "b": {"type": "array", "items": {"type": "string"}}
            }
        });
        assert!(validate(&json!({"a": 1.5, "b": ["x"]}), &schema).is_ok());
        assert!(validate(&json!({"b": []}), &schema).is_err());
        assert!(validate(&json!({"a": "nope"}), &schema).is_err());
        assert!(validate(&json!({"a": 1, "b": [2]}), &schema).is_err());
    }
}
