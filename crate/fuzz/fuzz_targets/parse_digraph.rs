#![no_main]

use libfuzzer_sys::fuzz_target;
use perturbed::Digraph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = Digraph::parse(text) {
        let again = Digraph::parse(&d.to_text()).expect("serialized digraph parses");
        assert_eq!(again, d);
    }
});
