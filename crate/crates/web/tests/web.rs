use chromatic_tda_web::{diagram_impl, sublevel_impl, triangulate_impl};
use serde_json::Value;

const QUAD: &str = r#"{"points": [[1, 0], [0, 1], [-1, 0], [0.05, -1]], "colours": [0, 0, 0, 0]}"#;
const TRAPEZIUM: &str = r#"{"points": [[0, 0], [0, 1], [1, 0], [1, 2]], "colours": [0, 0, 1, 1]}"#;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn triangulate_trapezium() {
    let v = parse(triangulate_impl(TRAPEZIUM));
    assert_eq!(v["top_dimension"], 2);
    assert!(!v["triangles"].as_array().unwrap().is_empty());
}

#[test]
fn quadrilateral_loop_in_diagram() {
    let v = parse(diagram_impl(QUAD, "del-cech", 1));
    let bars = v["bars"].as_array().unwrap();
    let one: Vec<&Value> = bars.iter().filter(|b| b["degree"] == 1).collect();
    assert_eq!(one.len(), 1);
    let (birth, death) = (one[0]["birth"].as_f64().unwrap(), one[0]["death"].as_f64().unwrap());
    assert!(0.7 < birth && birth < death && death < 1.1, "{birth} {death}");
    assert_eq!(bars.iter().filter(|b| b["death"].is_null()).count(), 1);
    assert_eq!(v["max_value"].as_f64().unwrap(), death);
}

#[test]
fn sublevel_grows() {
    let small = parse(sublevel_impl(QUAD, "alpha", 0.1));
    assert!(small["edges"].as_array().unwrap().is_empty());
    let mid = parse(sublevel_impl(QUAD, "alpha", 0.8));
    assert_eq!(mid["edges"].as_array().unwrap().len(), 4, "{mid}");
    assert!(mid["triangles"].as_array().unwrap().is_empty());
    let all = parse(sublevel_impl(QUAD, "alpha", 2.0));
    assert_eq!(all["triangles"].as_array().unwrap().len(), 2);
}

#[test]
fn errors_are_messages() {
    assert!(triangulate_impl("not json").unwrap_err().contains("bad input"));
    assert!(diagram_impl(QUAD, "cech", 1).is_err());
    let dup = r#"{"points": [[0, 0], [0, 0]], "colours": [0, 1]}"#;
    assert!(triangulate_impl(dup).is_err());
}
