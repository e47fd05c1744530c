#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(map) = onecircle::parse::parse_config(text) {
        assert!(map
            .keys()
            .all(|k| !k.is_empty() && !k.contains(char::is_whitespace)));
    }
});
