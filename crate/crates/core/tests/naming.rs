use std::fs;

use namelens::abbrev::{self, ContextBag, Technique};
use namelens::classify::{classify_with, ClassifyOptions};
use namelens::{classify, normalized_equal, split, Category, Error, Lexicon, SubKind};
use tempfile::TempDir;

#[test]
fn split_is_lossless_on_mixed_styles() {
    for raw in ["mPendingDeletedMessages", "HTTPServer_v2", "$__x", "kebab-case-name", "MAX_LEN"] {
        let terms = split(raw).unwrap();
        let mut rebuilt = String::new();
        let mut at = 0;
        for t in &terms {
            rebuilt.push_str(&raw[at..t.offset]);
            rebuilt.push_str(&t.surface);
            at = t.offset + t.surface.len();
        }
        rebuilt.push_str(&raw[at..]);
        assert_eq!(rebuilt, raw);
    }
    assert!(normalized_equal("user_count", "userCount").unwrap());
    assert!(matches!(split("__"), Err(_)));
}

#[test]
fn lexicon_file_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("lex.tsv");
    fs::write(
        &path,
        "# test\nfile\tnoun\thypernym\tresource\nbig\tadjective\tantonym\tsmall\nimage\tnoun\tsynonym\tpicture\n",
    )
    .unwrap();
    let lex = Lexicon::load(&path).unwrap();
    assert!(lex.contains("Resource"));
    assert!(lex.contains("files"));
    assert_eq!(classify("fileName", "resourceName", &lex, false, None).unwrap().dominant, Category::Broaden);
    assert_eq!(classify("bigBox", "smallBox", &lex, false, None).unwrap().dominant, Category::Opposite);
    let c = classify("imageView", "pictureView", &lex, false, None).unwrap();
    assert_eq!(c.dominant, Category::Preserve);
    assert!(c.subkinds.contains(&SubKind::SynonymReplace));
}

#[test]
fn lexicon_errors_carry_line_numbers() {
    let err = Lexicon::parse("a\tnoun\tnone\t-\nb\tnoun\n", "t").unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
    let err = Lexicon::parse("a\tnoun\tsynonym\tb\na\tnoun\tantonym\tb\n", "t").unwrap_err();
    assert!(matches!(err, Error::SynonymAntonymConflict(..)));
}

#[test]
fn cascade_order() {
    let lex = Lexicon::bundled();
    let gold = abbrev::bundled_gold();
    let empty = ContextBag::new();
    let e = abbrev::expand_detailed("msg", &empty, &gold, &lex).unwrap();
    assert_eq!((e.text.as_str(), e.technique), ("message", Technique::Gold));

    let ctx = ContextBag::harvest("Frobnicator f = new Frobnicator();");
    let e = abbrev::expand_detailed("frobn", &ctx, &[], &lex).unwrap();
    assert_eq!((e.text.as_str(), e.technique), ("frobnicator", Technique::Context));
    assert_eq!(abbrev::expand("qqq", &ctx, &gold, &lex), None);
}

#[test]
fn expansion_before_classification() {
    let lex = Lexicon::bundled();
    let gold = abbrev::bundled_gold();
    let opts = ClassifyOptions {
        expand: true,
        context: None,
        gold: &gold,
    };
    let c = classify_with("msgCount", "messageCount", &lex, &opts).unwrap();
    assert_eq!(c.dominant, Category::Preserve);
    let plain = classify("msgCount", "messageCount", &lex, false, None).unwrap();
    assert_ne!(plain.subkinds, c.subkinds);
}
