#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = onecircle::parse::parse_window(text) {
        assert!(w.m.start() <= w.m.end() && w.n.start() <= w.n.end());
    }
});
