//! Validates the binary's JSON reports against the schema files shipped in
//! `schema/`, with a validator covering the subset those schemas use:
//! type (scalar or list), properties, required, additionalProperties: false,
//! items, minItems/maxItems, enum.

use std::process::Command;

use serde_json::Value;

fn type_matches(name: &str, value: &Value) -> bool {
    match name {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        "integer" => value.as_i64().is_some() || value.as_u64().is_some(),
        "number" => value.is_number(),
        other => panic!("schema names unknown type {other}"),
    }
}

fn validate(schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(value) {
            errors.push(format!("{path}: {value} not in enum"));
        }
    }
    if let Some(ty) = schema.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(list) => list.iter().filter_map(Value::as_str).collect(),
            _ => panic!("malformed type at {path}"),
        };
        if !names.iter().any(|n| type_matches(n, value)) {
            errors.push(format!("{path}: expected {names:?}"));
        }
    }
    if let Some(obj) = value.as_object() {
        let props = schema.get("properties").and_then(Value::as_object);
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing required key {key}"));
                }
            }
        }
        let sealed = schema.get("additionalProperties") == Some(&Value::Bool(false));
        for (key, item) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(sub) => validate(sub, item, &format!("{path}.{key}"), errors),
                None if sealed => errors.push(format!("{path}: unexpected key {key}")),
                None => {}
            }
        }
    }
    if let Some(list) = value.as_array() {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (list.len() as u64) < min {
                errors.push(format!("{path}: fewer than {min} items"));
            }
        }
        if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
            if (list.len() as u64) > max {
                errors.push(format!("{path}: more than {max} items"));
            }
        }
        if let Some(items) = schema.get("items") {
            for (i, item) in list.iter().enumerate() {
                validate(items, item, &format!("{path}[{i}]"), errors);
            }
        }
    }
}

fn schema_errors(schema: &Value, value: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    validate(schema, value, "$", &mut errors);
    errors
}

fn load_schema(name: &str) -> Value {
    let path = format!("{}/schema/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file"))
        .expect("schema parses")
}

fn run_json(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_dkv"))
        .args(args)
        .output()
        .expect("binary runs");
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn spectrum_json_matches_its_schema() {
    let schema = load_schema("spectrum");
    for args in [
        vec!["spectrum", "--A", "10.25", "--B", "12.5", "--format", "json"],
        vec!["spectrum", "--A", "135", "--B", "200", "--format", "json", "--stamp"],
        vec!["spectrum", "--A", "1", "--B", "12.5", "--format", "json"],
    ] {
        let v = run_json(&args);
        assert_eq!(schema_errors(&schema, &v), Vec::<String>::new(), "args: {args:?}");
    }
}

#[test]
fn wavefunction_json_matches_its_schema() {
    let schema = load_schema("wavefunction");
    let v = run_json(&[
        "wavefunction", "--A", "10.25", "--B", "12.5", "--n", "0", "--x-min", "-5", "--x-max",
        "5", "--h", "0.05", "--format", "json",
    ]);
    assert_eq!(schema_errors(&schema, &v), Vec::<String>::new());
}

#[test]
fn verify_json_matches_its_schema() {
    let schema = load_schema("verify");
    for select in ["middle", "leftmost"] {
        let v = run_json(&[
            "verify", "--A", "10.25", "--B", "12.5", "--x-min", "-15", "--x-max", "40", "--h",
            "0.01", "--select", select, "--format", "json",
        ]);
        assert_eq!(schema_errors(&schema, &v), Vec::<String>::new(), "select: {select}");
    }
}

#[test]
fn natanzon_json_matches_its_schema() {
    let schema = load_schema("natanzon");
    let v = run_json(&[
        "natanzon", "--f", "48", "--h0", "8", "--h1", "8", "--a", "1", "--c0", "1", "--c1",
        "1", "--format", "json", "--stamp",
    ]);
    assert_eq!(schema_errors(&schema, &v), Vec::<String>::new());
}

#[test]
fn validator_rejects_shape_violations() {
    let schema = load_schema("spectrum");
    let good = run_json(&["spectrum", "--A", "10.25", "--B", "12.5", "--format", "json"]);

    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("half_b");
    assert!(!schema_errors(&schema, &missing).is_empty(), "missing key slips through");

    let mut extra = good.clone();
    extra.as_object_mut().unwrap().insert("comment".into(), Value::from("x"));
    assert!(!schema_errors(&schema, &extra).is_empty(), "unknown key slips through");

    let mut wrong_type = good.clone();
    wrong_type["n_max"] = Value::from(16.5);
    assert!(!schema_errors(&schema, &wrong_type).is_empty(), "float n_max slips through");

    let mut short_roots = good;
    short_roots["levels"][0]["roots"].as_array_mut().unwrap().pop();
    assert!(!schema_errors(&schema, &short_roots).is_empty(), "two roots slip through");
}
