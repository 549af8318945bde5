#![no_main]

use libfuzzer_sys::fuzz_target;
use q2color::io::{parse_edge_list, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_edge_list(text) {
        let out = write_edge_list(&g);
        let back = parse_edge_list(&out).expect("written edge list parses");
        assert_eq!(back, g);
        assert_eq!(write_edge_list(&back), out);
    }
});
