#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(slopes) = onecircle::parse::parse_slopes(text) {
        assert!(slopes
            .iter()
            .all(|t| t.finite().map_or(true, f64::is_finite)));
    }
});
