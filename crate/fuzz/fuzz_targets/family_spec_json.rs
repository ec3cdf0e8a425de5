#![no_main]

use libfuzzer_sys::fuzz_target;
use perturbed::{build_family, FamilySpec};

// Keeps layouts and generated graphs within the fuzzer's memory limit.
const MAX_N: usize = 4096;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<FamilySpec>(data) else {
        return;
    };
    if spec.n() > MAX_N {
        return;
    }
    if let Ok(layout) = spec.layout() {
        let n: usize = layout.blocks().iter().map(|b| b.len()).sum();
        let g = build_family(&spec).expect("valid layout builds");
        assert_eq!(g.n(), n);
    }
});
