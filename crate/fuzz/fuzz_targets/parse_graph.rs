#![no_main]

use libfuzzer_sys::fuzz_target;
use perturbed::Graph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = Graph::parse(text) {
        let again = Graph::parse(&g.to_text()).expect("serialized graph parses");
        assert_eq!(again, g);
    }
});
