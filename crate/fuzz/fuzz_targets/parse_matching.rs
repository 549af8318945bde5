#![no_main]

//! Input: an edge list, a line `%`, then a matching in that graph.

use libfuzzer_sys::fuzz_target;
use q2color::io::{parse_edge_list, parse_matching, write_matching};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((graph, matching)) = text.split_once("\n%\n") else {
        return;
    };
    let Ok(g) = parse_edge_list(graph) else {
        return;
    };
    if let Ok(m) = parse_matching(matching, &g) {
        let out = write_matching(&m);
        let back = parse_matching(&out, &g).expect("written matching parses");
        assert_eq!(back, m);
        assert_eq!(write_matching(&back), out);
    }
});
