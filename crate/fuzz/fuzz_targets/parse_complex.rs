#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(z) = onecircle::parse::parse_complex(text) {
        assert!(z.re.is_finite() && z.im.is_finite());
        let back = onecircle::parse::parse_complex(&onecircle::parse::format_complex(z)).unwrap();
        assert_eq!(back, z);
    }
});
