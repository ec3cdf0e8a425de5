#![no_main]

use libfuzzer_sys::fuzz_target;
use perturbed::parse_pairs;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pairs) = parse_pairs(text) {
        let joined: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        assert_eq!(parse_pairs(&joined.join(",")).unwrap(), pairs);
    }
});
