#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = namelens::abbrev::parse_gold(text, "fuzz");
});
