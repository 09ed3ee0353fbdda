//! Reports checked against the schemas published in the book.

use std::collections::HashMap;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn schemas() -> HashMap<String, Value> {
    let page = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src/schemas.md");
    let text = std::fs::read_to_string(page).unwrap();
    let mut out = HashMap::new();
    let mut rest = text.as_str();
    while let Some(start) = rest.find("```json\n") {
        let body = &rest[start + 8..];
        let end = body.find("```").unwrap();
        let schema: Value = serde_json::from_str(&body[..end]).expect("schema block is valid JSON");
        out.insert(schema["title"].as_str().unwrap().to_string(), schema);
        rest = &body[end + 3..];
    }
    out
}

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => panic!("unknown type {t}"),
    }
}

/// The subset of JSON Schema used on the page.
fn conforms(s: &Value, v: &Value, path: &str) -> Result<(), String> {
    let fail = |what: &str| Err(format!("{path}: {what} in {v}"));
    match &s["type"] {
        Value::String(t) if !type_ok(t, v) => return fail(&format!("expected {t}")),
        Value::Array(ts) if !ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)) => return fail("wrong type"),
        _ => {}
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return fail(&format!("expected {c}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            return fail("not in enum");
        }
    }
    if let Some(Value::Array(options)) = s.get("oneOf") {
        if !options.iter().any(|o| conforms(o, v, path).is_ok()) {
            return fail("matches no alternative");
        }
    }
    if let Value::Object(obj) = v {
        if let Some(Value::Array(req)) = s.get("required") {
            for k in req {
                if !obj.contains_key(k.as_str().unwrap()) {
                    return fail(&format!("missing {k}"));
                }
            }
        }
        if let Some(Value::Object(props)) = s.get("properties") {
            for (k, sub) in props {
                if let Some(x) = obj.get(k) {
                    conforms(sub, x, &format!("{path}.{k}"))?;
                }
            }
        }
        if let Some(extra) = s.get("additionalProperties") {
            for (k, x) in obj {
                conforms(extra, x, &format!("{path}.{k}"))?;
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (v, s.get("items")) {
        for (i, x) in items.iter().enumerate() {
            conforms(sub, x, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn report(args: &[&str]) -> Value {
    let o = Command::new(env!("CARGO_BIN_EXE_jkpencil"))
        .arg("--json")
        .args(args)
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn fixtures_match_pencil_schema() {
    let s = schemas();
    for f in ["zero1x1.json", "mixed5.json", "rotation4.json"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(f);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        conforms(&s["pencil"], &v, f).unwrap();
    }
}

#[test]
fn reports_match_schemas() {
    let s = schemas();
    let cases: &[(&str, &[&str])] = &[
        ("decompose", &["decompose", "fixtures/rotation4.json", "--real"]),
        ("decompose", &["decompose", "fixtures/mixed5.json"]),
        ("subspaces", &["subspaces", "--heights", "3,1"]),
        ("subspaces", &["subspaces", "--heights", "2,1", "--count"]),
        ("subspaces", &["subspaces", "--heights", "2", "--verify", "--trials", "5"]),
        ("subspaces-check", &["subspaces", "--heights", "2,1", "--check", "0,1", "--trials", "5"]),
        ("subspaces-check", &["subspaces", "--heights", "2,1", "--check", "1,1", "--trials", "5"]),
        ("turiel", &["turiel", "--signature", "2,1"]),
        ("distribution", &["distribution", "--signature", "2,1"]),
        ("product", &["product", "turiel:1", "flat:0:1,2:1"]),
        ("selftest", &["selftest", "--only", "9"]),
    ];
    for (title, args) in cases {
        conforms(&s[*title], &report(args), title).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn checker_rejects_bad_reports() {
    let s = schemas();
    let mut v = report(&["distribution", "--signature", "1"]);
    v["rows"][0]["computed"] = "maybe".into();
    assert!(conforms(&s["distribution"], &v, "").is_err());
    let mut v = report(&["decompose", "fixtures/zero1x1.json"]);
    v.as_object_mut().unwrap().remove("realizable");
    assert!(conforms(&s["decompose"], &v, "").is_err());
}
