#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((n, m)) = onecircle::parse::parse_grid(text) {
        assert!(n >= 1 && m >= 1);
        assert!(n <= onecircle::parse::MAX_GRID && m <= onecircle::parse::MAX_GRID);
    }
});
