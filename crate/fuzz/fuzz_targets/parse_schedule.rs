#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(levels) = onecircle::parse::parse_schedule(text) {
        assert!(!levels.is_empty());
        assert!(levels.iter().all(|&s| s > 0.0 && s < 1.0));
    }
});
