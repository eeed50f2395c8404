#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    let files = namelens::miner::parse_unified_diff(text);
    let _ = namelens::miner::detect_renames(&[namelens::miner::CommitRecord {
        commit_id: "0000".into(),
        commit_index: 0,
        timestamp: 0,
        message: String::new(),
        diffs: files,
    }]);
});
