#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = namelens::miner::parse_refactorings(text, "fuzz");
});
