#![no_main]

//! Input: an edge list, a line `%`, then a coloring of that graph.

use libfuzzer_sys::fuzz_target;
use q2color::io::{parse_coloring, parse_edge_list, write_coloring};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((graph, coloring)) = text.split_once("\n%\n") else {
        return;
    };
    let Ok(g) = parse_edge_list(graph) else {
        return;
    };
    if let Ok(c) = parse_coloring(coloring, &g) {
        let out = write_coloring(&g, &c);
        let back = parse_coloring(&out, &g).expect("written coloring parses");
        assert_eq!(back, c);
        assert_eq!(write_coloring(&g, &back), out);
    }
});
