use blowup_web::api;
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn every_listed_model_has_source() {
    let names = api::catalog_names();
    assert!(names.contains(&"pn_point(6)".to_string()));
    for n in names {
        api::catalog_source(&n).unwrap();
    }
}

#[test]
fn chern_class_of_blown_up_three_space() {
    let text = api::catalog_source("p3_point").unwrap();
    let doc = parse(&api::chern_class(&text, "calibrated").unwrap());
    assert_eq!(doc["chern_numbers"]["c1^3"], 56);
    assert_eq!(doc["chern_numbers"]["c3"], 6);
}

#[test]
fn verify_reports_each_check() {
    let text = api::catalog_source("p3_point").unwrap();
    let ok = parse(&api::verify(&text, "calibrated").unwrap());
    assert_eq!(ok["passed"], true);
    assert_eq!(ok["checks"].as_array().unwrap().len(), 4);
    let literal = parse(&api::verify(&text, "literal").unwrap());
    assert_eq!(literal["passed"], false);
    assert_eq!(literal["checks"][0]["status"], "fail");
}

#[test]
fn ring_summary_of_blown_up_line() {
    let text = api::catalog_source("p4_line").unwrap();
    let doc = parse(&api::ring_summary(&text, "calibrated").unwrap());
    let ranks: Vec<u64> = doc["weights"].as_array().unwrap().iter().map(|w| w["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 2, 3, 2, 1]);
}

#[test]
fn errors_are_messages() {
    let err = api::chern_class("manifold M {", "calibrated").unwrap_err();
    assert!(err.contains("line 1"), "{err}");
    assert!(api::verify("", "sideways").is_err());
}
