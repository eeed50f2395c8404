#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(lex) = namelens::Lexicon::parse(text, "fuzz") {
        for (a, b) in lex.synonym_edges() {
            assert!(lex.synonyms(b).any(|w| w == a));
        }
    }
});
