use isosieve_web::{family_report_json, field_report_json, rq_json};
use serde_json::Value;

#[test]
fn field_report_for_minus_five() {
    let v: Value = serde_json::from_str(&field_report_json(-5, 19).unwrap()).unwrap();
    let survivors: Vec<u64> = v["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| o["status"] == "survives")
        .map(|o| o["p"].as_u64().unwrap())
        .collect();
    assert_eq!(survivors, [2, 3, 5, 7, 13, 37, 43]);
}

#[test]
fn rq_for_six_at_five() {
    let v: Value = serde_json::from_str(&rq_json(6, 5, "12,0").unwrap()).unwrap();
    assert_eq!(v["alpha"], "1 + sqrt(6)");
    assert_eq!(v["r_q"], "3232694846828511145262937296531250000000000");
    assert_eq!(v["signature"], serde_json::json!([12, 0]));
}

#[test]
fn family_report_parses_inert_list() {
    let v: Value = serde_json::from_str(&family_report_json(1, " 2, 3 ", 19).unwrap()).unwrap();
    assert_eq!(v["mode"]["inert"], serde_json::json!([2, 3]));
    assert!(family_report_json(1, "2,x", 19).is_err());
}

#[test]
fn bad_input_is_an_error_not_a_panic() {
    assert!(field_report_json(12, 19).is_err());
    assert!(field_report_json(6, 2).is_err());
    assert!(rq_json(6, 5, "6,6").is_err());
    assert!(rq_json(6, 9, "0,0").is_err());
    assert!(family_report_json(0, "", 19).is_err());
}
