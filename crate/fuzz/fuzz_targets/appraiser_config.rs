#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = namelens::appraise::parse_config(text, "fuzz");
});
