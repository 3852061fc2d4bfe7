use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn isosieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isosieve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

// A validator for the subset of JSON Schema the bundled schemas use.
fn validate(schema: &Value, root: &Value, v: &Value, at: &str) -> Result<(), String> {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local ref");
        return validate(&root["$defs"][name], root, v, at);
    }
    if let Some(c) = schema.get("const") {
        if c != v {
            return Err(format!("{at}: expected {c}, got {v}"));
        }
    }
    if let Some(e) = schema.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{at}: {v} not in {e:?}"));
        }
    }
    if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
        let ok = options
            .iter()
            .filter(|s| validate(s, root, v, at).is_ok())
            .count();
        if ok != 1 {
            return Err(format!("{at}: {ok} oneOf branches match {v}"));
        }
    }
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => panic!("bad type keyword"),
        };
        let matches = |t: &str| match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_i64() || v.is_u64(),
            "number" => v.is_number(),
            "boolean" => v.is_boolean(),
            "null" => v.is_null(),
            other => panic!("unknown type {other}"),
        };
        if !types.iter().any(|t| matches(t)) {
            return Err(format!("{at}: {v} is not {types:?}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{at}: {x} < {min}"));
        }
    }
    if let Value::Object(map) = v {
        for key in schema
            .get("required")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
        {
            if !map.contains_key(key.as_str().unwrap()) {
                return Err(format!("{at}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, x) in map {
            match props.and_then(|p| p.get(k)) {
                Some(s) => validate(s, root, x, &format!("{at}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let Value::Array(items) = v {
        let n = items.len() as u64;
        if schema
            .get("minItems")
            .and_then(Value::as_u64)
            .is_some_and(|m| n < m)
            || schema
                .get("maxItems")
                .and_then(Value::as_u64)
                .is_some_and(|m| n > m)
        {
            return Err(format!("{at}: wrong length {n}"));
        }
        if let Some(s) = schema.get("items") {
            for (i, x) in items.iter().enumerate() {
                validate(s, root, x, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schema")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check_schema(name: &str, doc: &str) {
    let s = schema(name);
    let v: Value = serde_json::from_str(doc).unwrap();
    validate(&s, &s, &v, "$").unwrap();
}

#[test]
fn report_documents_match_the_schema() {
    for args in [
        vec!["field", "--d", "-5", "--json"],
        vec!["field", "--d", "6", "--json", "--timing"],
        vec!["family", "--exponent", "2", "--inert", "2,3", "--json"],
    ] {
        let out = isosieve(&args);
        assert!(out.status.success(), "{args:?}");
        check_schema("report.schema.json", &stdout(&out));
    }
}

#[test]
fn rq_documents_match_the_schema() {
    let out = isosieve(&[
        "rq",
        "--d",
        "6",
        "--q",
        "5",
        "--signature",
        "12,0",
        "--json",
        "--factored",
    ]);
    assert!(out.status.success());
    check_schema("rq.schema.json", &stdout(&out));
    let out = isosieve(&[
        "rq",
        "--d",
        "-5",
        "--q",
        "3",
        "--signature",
        "0,0",
        "--json",
    ]);
    check_schema("rq.schema.json", &stdout(&out));
}

#[test]
fn the_validator_rejects_bad_documents() {
    let s = schema("rq.schema.json");
    let out = isosieve(&[
        "rq",
        "--d",
        "6",
        "--q",
        "5",
        "--signature",
        "12,0",
        "--json",
    ]);
    let good: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mut extra = good.clone();
    extra["rq"]["surprise"] = Value::Bool(true);
    assert!(validate(&s, &s, &extra, "$").is_err());
    let mut sig = good.clone();
    sig["rq"]["signature"] = serde_json::json!([6, 6]);
    assert!(validate(&s, &s, &sig, "$").is_err());
    let mut missing = good;
    missing["rq"].as_object_mut().unwrap().remove("m_q");
    assert!(validate(&s, &s, &missing, "$").is_err());
}

#[test]
fn big_integers_are_decimal_strings() {
    let out = isosieve(&[
        "rq",
        "--d",
        "6",
        "--q",
        "5",
        "--signature",
        "12,0",
        "--json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        v["rq"]["r_q"],
        "3232694846828511145262937296531250000000000"
    );
    assert_eq!(v["rq"]["m_q"], "71077601353781250000000000");
}

#[test]
fn bad_input_exits_2() {
    for args in [
        &["field", "--d", "12"][..],
        &["field", "--d", "0"],
        &["field", "--d", "1"],
        &["field", "--d", "-1"],
        &["family", "--exponent", "0"],
        &["rq", "--d", "6", "--q", "5", "--signature", "13,0"],
        &["rq", "--d", "6", "--q", "9", "--signature", "0,0"],
        &["field", "--d", "6", "--aux-max", "2"],
        &["frobnicate"],
    ] {
        let out = isosieve(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = isosieve(&["field", "--d", "6"]);
    let b = isosieve(&["field", "--d", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let a = isosieve(&["field", "--d", "6", "--json"]);
    let b = isosieve(&["field", "--d", "6", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let many = isosieve(&["field", "--d", "-5", "--json"]);
    let one = Command::new(env!("CARGO_BIN_EXE_isosieve"))
        .args(["field", "--d", "-5", "--json"])
        .env("ISOSIEVE_THREADS", "1")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(many.stdout, one.stdout);
}

#[test]
fn out_writes_the_file_and_nothing_on_error() {
    let dir = std::env::temp_dir().join(format!("isosieve-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("d6.json");
    let out = isosieve(&[
        "field",
        "--d",
        "6",
        "--json",
        "--out",
        good.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let direct = isosieve(&["field", "--d", "6", "--json"]);
    // identical apart from the recorded invocation
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    let printed: Value = serde_json::from_str(&stdout(&direct)).unwrap();
    assert_eq!(written["report"], printed["report"]);

    let bad = dir.join("d12.json");
    let out = isosieve(&[
        "field",
        "--d",
        "12",
        "--json",
        "--out",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!bad.exists());

    let unwritable = dir.join("missing-dir").join("x.json");
    let out = isosieve(&["field", "--d", "6", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let leftovers: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(leftovers.len(), 1, "temporary files left behind");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_report_lists_each_prime_once() {
    let out = isosieve(&["field", "--d", "-5"]);
    let text = stdout(&out);
    assert!(text.contains("Survives"));
    let lines_with_43: Vec<&str> = text
        .lines()
        .filter(|l| l.split_whitespace().next() == Some("43"))
        .collect();
    assert_eq!(lines_with_43.len(), 1, "{text}");
    assert!(lines_with_43[0].contains("curated_table"), "{text}");
}

#[test]
fn rq_text_output() {
    let out = isosieve(&[
        "rq",
        "--d",
        "-5",
        "--q",
        "3",
        "--signature",
        "0,0",
        "--factored",
    ]);
    let text = stdout(&out);
    assert!(
        text.starts_with("Q(sqrt(-5)), q = 3 (split, n_q = 3, r = 2"),
        "{text}"
    );
}
