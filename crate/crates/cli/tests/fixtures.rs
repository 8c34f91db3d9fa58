use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use bodybar::document::{bar_joint_document, canonical, digest, parse_graph, write_document};
use bodybar::report::{check_graph, rank_graph, CheckOptions};
use bodybar::trace::{from_document, parse_trace, to_document, write_trace};
use bodybar_core::constructions::reduce_to_seed;
use bodybar_core::rigidity::RankConfig;
use serde_json::Value;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(dir().join(name)).unwrap()
}

fn graphs() -> Vec<(String, String)> {
    let mut names: Vec<String> = std::fs::read_dir(dir())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    assert!(names.len() >= 8);
    names.into_iter().map(|n| (n.clone(), read(&n))).collect()
}

#[test]
fn fixtures_round_trip_byte_identical() {
    for (name, text) in graphs() {
        let g = parse_graph(&text).unwrap_or_else(|d| panic!("{name}: {d}"));
        assert_eq!(canonical(&g), text, "{name}");
    }
}

#[test]
fn example_structure() {
    let g = parse_graph(&read("example1.json")).unwrap();
    assert_eq!((g.body_count(), g.edge_count()), (2, 9));
}

#[test]
fn golden_outputs() {
    let opts = CheckOptions::default();
    for name in ["example1", "nine_parallel"] {
        let text = read(&format!("{name}.json"));
        let report = check_graph(&parse_graph(&text).unwrap(), digest(text.as_bytes()), &opts).unwrap();
        assert_eq!(report.to_json(), read(&format!("golden/{name}.check.json")), "{name}");
    }

    let text = read("loops_rank1.json");
    let report = rank_graph(&parse_graph(&text).unwrap(), digest(text.as_bytes()), &RankConfig::default()).unwrap();
    assert_eq!(report.to_json(), read("golden/loops_rank1.rank.json"));

    let g = parse_graph(&read("loops_rank3.json")).unwrap();
    assert_eq!(write_document(&bar_joint_document(&g)), read("golden/loops_rank3.induce.json"));

    let text = read("generated_3.json");
    let g = parse_graph(&text).unwrap();
    let trace = reduce_to_seed(&g, &RankConfig::default()).unwrap();
    let written = write_trace(&to_document(&g, &trace, digest(text.as_bytes()), 1));
    let golden = read("golden/generated_3.trace.json");
    assert_eq!(written, golden);
    let replayed = from_document(&parse_trace(&golden).unwrap()).unwrap().replay().unwrap();
    assert_eq!(canonical(&replayed), text);
}

/// Property names of every object schema in `schema`, keyed by a path.
fn schema_objects(schema: &Value, path: &str, out: &mut Vec<(String, BTreeSet<String>, BTreeSet<String>)>) {
    if let Some(obj) = schema.as_object() {
        if let Some(props) = obj.get("properties").and_then(Value::as_object) {
            assert_eq!(obj.get("additionalProperties"), Some(&Value::Bool(false)), "{path} must be closed");
            let required = obj
                .get("required")
                .and_then(Value::as_array)
                .map(|r| r.iter().map(|x| x.as_str().unwrap().to_string()).collect())
                .unwrap_or_default();
            out.push((path.to_string(), props.keys().cloned().collect(), required));
        }
        for (k, v) in obj {
            schema_objects(v, &format!("{path}/{k}"), out);
        }
    }
    if let Some(arr) = schema.as_array() {
        for v in arr {
            schema_objects(v, path, out);
        }
    }
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn graph_schema_matches_the_document_type() {
    let mut objects = Vec::new();
    schema_objects(&schema("graph.schema.json"), "", &mut objects);
    let doc: Value = serde_json::from_str(&read("example1.json")).unwrap();
    let top = objects.iter().find(|o| o.0.is_empty()).unwrap();
    assert_eq!(top.1, keys(&doc));
    assert_eq!(top.2, keys(&doc));
    let edge = objects.iter().find(|o| o.0.ends_with("/edge")).unwrap();
    assert_eq!(edge.1, keys(&doc["edges"][0]));
    assert_eq!(edge.2, ["gain", "u", "v"].map(String::from).into());
}

#[test]
fn trace_schema_matches_the_trace_type() {
    let mut objects = Vec::new();
    schema_objects(&schema("trace.schema.json"), "", &mut objects);
    let trace: Value = serde_json::from_str(&read("golden/generated_3.trace.json")).unwrap();
    let find = |suffix: &str| objects.iter().find(|o| o.0.ends_with(suffix)).unwrap_or_else(|| panic!("{suffix}"));
    let top = objects.iter().find(|o| o.0.is_empty()).unwrap();
    assert_eq!(top.1, keys(&trace));
    let step = find("/step");
    assert_eq!(step.1, keys(&trace["steps"][0]));
    assert_eq!(step.1, step.2);

    // The golden trace may not exercise every record kind; build one of each.
    let sample: Value = serde_json::json!({
        "pinched": serde_json::to_value(bodybar::trace::PinchedRecord {
            edge: 0, tail: "a".into(), first_gain: [0; 3], first_id: 1, second_id: 2
        }).unwrap(),
        "loops": serde_json::to_value(bodybar::trace::LoopRecord { id: 0, gain: [0; 3] }).unwrap(),
        "new_edges": serde_json::to_value(bodybar::trace::BarRecord { id: 0, target: "a".into(), gain: [0; 3] }).unwrap(),
    });
    for kind in ["pinched", "loops", "new_edges"] {
        let obj = find(&format!("/{kind}/items"));
        assert_eq!(obj.1, keys(&sample[kind]), "{kind}");
        assert_eq!(obj.1, obj.2, "{kind}");
    }
}
