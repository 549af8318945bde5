//! Replays the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use q2color::io::{
    parse_coloring, parse_edge_list, parse_matching, write_coloring, write_edge_list,
    write_matching,
};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.display().to_string(),
                String::from_utf8_lossy(&fs::read(&p).unwrap()).into_owned(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn edge_list_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_edge_list") {
        if let Ok(g) = parse_edge_list(&text) {
            let out = write_edge_list(&g);
            assert_eq!(parse_edge_list(&out).unwrap(), g, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn coloring_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_coloring") {
        let (graph, coloring) = text.split_once("\n%\n").unwrap();
        let g = parse_edge_list(graph).unwrap();
        if let Ok(c) = parse_coloring(coloring, &g) {
            let out = write_coloring(&g, &c);
            assert_eq!(parse_coloring(&out, &g).unwrap(), c, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn matching_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_matching") {
        let (graph, matching) = text.split_once("\n%\n").unwrap();
        let g = parse_edge_list(graph).unwrap();
        if let Ok(m) = parse_matching(matching, &g) {
            let out = write_matching(&m);
            assert_eq!(parse_matching(&out, &g).unwrap(), m, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 2);
}
