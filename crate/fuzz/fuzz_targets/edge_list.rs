#![no_main]

use bdindex::io::load_edge_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(loaded) = load_edge_list(data) {
        let g = &loaded.graph;
        assert_eq!(g.edge_pairs().len(), g.edge_count());
    }
});
