mod common;

use common::{c, jimbo, sos};
use ribbonlab::catalog::{ClassicalType, Metadata};
use ribbonlab::io::{GlfJson, ModelFile};
use ribbonlab::Error;

#[test]
fn catalog_models_round_trip() {
    for m in [jimbo(ClassicalType::C, 2, c(1.2)), sos(2, 3)] {
        let file = m.to_file();
        let text = file.to_json();
        let back = ModelFile::parse(&text).unwrap();
        assert_eq!(back, file);
        let model = back.to_model().unwrap();
        assert_eq!(model.weights(), m.model.weights());
        let meta: &Metadata = back.metadata.as_ref().unwrap();
        assert_eq!(meta, &m.metadata);
    }
}

#[test]
fn glf_json_round_trip() {
    let m = sos(2, 2);
    let g = m.model.graph();
    let det = m.metadata.det.as_ref().unwrap().to_vector(g).unwrap();
    let back = GlfJson::from_vector(g, &det).unwrap().to_vector(g).unwrap();
    assert_eq!(back, det);
}

const TINY: &str = r#"{
  "vertices": ["v"],
  "edges": [{"id": "e", "src": "v", "dst": "v"}],
  "faces": [{"r": "e", "p": "e", "q": "e", "s": "e", "w": {"re": 2.0, "im": 0.0}}]
}"#;

#[test]
fn tiny_model_parses() {
    let m = ModelFile::parse(TINY).unwrap().to_model().unwrap();
    assert_eq!(m.graph().edge_count(), 1);
}

#[test]
fn unknown_keys_are_rejected_with_a_position() {
    let text = TINY.replace("\"faces\"", "\"extra\": 1, \"faces\"");
    match ModelFile::parse(&text) {
        Err(Error::Parse(msg)) => assert!(msg.contains("extra") && msg.contains("line"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_faces_are_rejected() {
    let face = r#"{"r": "e", "p": "e", "q": "e", "s": "e", "w": {"re": 2.0, "im": 0.0}}"#;
    let text = TINY.replace(face, &format!("{face}, {face}"));
    assert!(matches!(ModelFile::parse(&text).unwrap().to_model(), Err(Error::InvalidModel(_))));
}

#[test]
fn unknown_edges_are_rejected() {
    let text = TINY.replace("\"s\": \"e\"", "\"s\": \"f\"");
    assert!(matches!(ModelFile::parse(&text).unwrap().to_model(), Err(Error::InvalidModel(_))));
}

#[test]
fn malformed_json_is_a_parse_error() {
    assert!(matches!(ModelFile::parse("{\"vertices\": [}"), Err(Error::Parse(_))));
}
