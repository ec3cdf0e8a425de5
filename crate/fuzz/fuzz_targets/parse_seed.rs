#![no_main]

use libfuzzer_sys::fuzz_target;
use perturbed::{EdgeProbability, Seed};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = text.parse::<Seed>() {
        assert_eq!(s.0.to_string().parse::<Seed>().unwrap(), s);
    }
    if let Ok(p) = text.parse::<EdgeProbability>() {
        assert!((0.0..=1.0).contains(&p.value()));
    }
});
