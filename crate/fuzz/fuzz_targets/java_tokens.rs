#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let _ = namelens::miner::tokenize(text);
    if let Some((a, b)) = text.split_once('\n') {
        let _ = namelens::miner::line_rename(a, b);
    }
});
