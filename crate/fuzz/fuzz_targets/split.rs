#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(terms) = namelens::split(text) {
        for t in &terms {
            assert_eq!(&text[t.offset..t.offset + t.surface.len()], t.surface);
        }
    }
});
