//! Identifier splitting.
//!
//! Names are cut at separator characters, lower-to-upper transitions,
//! letter/digit transitions, and at the end of an acronym that runs into a
//! capitalised word (`HTMLParser` splits as `HTML` + `Parser`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kind of program element an identifier names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Class,
    Method,
    Variable,
    Attribute,
    Parameter,
    #[default]
    Unknown,
}

impl ElementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Class => "class",
            ElementKind::Method => "method",
            ElementKind::Variable => "variable",
            ElementKind::Attribute => "attribute",
            ElementKind::Parameter => "parameter",
            ElementKind::Unknown => "unknown",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Part of speech attached to a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Preposition,
    Digit,
    #[default]
    Unknown,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Preposition => "preposition",
            Pos::Digit => "digit",
            Pos::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One word part of an identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    /// Case-folded form.
    pub text: String,
    /// Spelling as it appears in the raw name.
    pub surface: String,
    /// Byte offset of `surface` within the raw name.
    pub offset: usize,
    pub pos: Pos,
    pub is_abbreviation: bool,
    pub expansion: Option<String>,
}

impl Term {
    fn new(surface: &str, offset: usize) -> Self {
        let text = fold(surface);
        let pos = if is_all_digits(&text) {
            Pos::Digit
        } else {
            Pos::Unknown
        };
        Term {
            text,
            surface: surface.to_string(),
            offset,
            pos,
            is_abbreviation: false,
            expansion: None,
        }
    }

    /// The expansion if one was found, otherwise the term text.
    pub fn effective_text(&self) -> &str {
        self.expansion.as_deref().unwrap_or(&self.text)
    }
}

/// A raw name together with its split terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identifier {
    pub raw: String,
    pub kind: ElementKind,
    pub terms: Vec<Term>,
}

impl Identifier {
    pub fn parse(raw: &str) -> Result<Self> {
        Self::with_kind(raw, ElementKind::Unknown)
    }

    pub fn with_kind(raw: &str, kind: ElementKind) -> Result<Self> {
        Ok(Identifier {
            raw: raw.to_string(),
            kind,
            terms: split(raw)?,
        })
    }

    pub fn texts(&self) -> Vec<&str> {
        self.terms.iter().map(|t| t.text.as_str()).collect()
    }

    /// The last term, which names the concept the others modify.
    pub fn head(&self) -> Option<&Term> {
        self.terms.last()
    }
}

/// ASCII lowercase; other characters are left as they are.
pub fn fold(s: &str) -> String {
    s.to_ascii_lowercase()
}

pub fn is_all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Separators are every character that is neither a letter nor a digit;
/// in practice `_` and `$`.
pub fn is_separator(c: char) -> bool {
    !c.is_alphanumeric()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Sep,
    Upper,
    Lower,
    Digit,
}

fn class_of(c: char) -> Class {
    if c.is_ascii_uppercase() {
        Class::Upper
    } else if c.is_ascii_digit() {
        Class::Digit
    } else if c.is_alphanumeric() {
        Class::Lower
    } else {
        Class::Sep
    }
}

/// Split a raw name into terms. POS is left unknown except for digit runs.
pub fn split(raw: &str) -> Result<Vec<Term>> {
    if raw.is_empty() {
        return Err(Error::EmptyIdentifier);
    }
    let spans = term_spans(raw);
    if spans.is_empty() {
        return Err(Error::NoSplittableContent(raw.to_string()));
    }
    Ok(spans
        .into_iter()
        .map(|(start, end)| Term::new(&raw[start..end], start))
        .collect())
}

fn term_spans(raw: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    // (byte index, class) of the chars in the term being built
    let mut current: Vec<(usize, Class)> = Vec::new();
    let close = |current: &mut Vec<(usize, Class)>, end: usize, spans: &mut Vec<(usize, usize)>| {
        if let Some(&(start, _)) = current.first() {
            spans.push((start, end));
        }
        current.clear();
    };

    for (i, c) in raw.char_indices() {
        let class = class_of(c);
        if class == Class::Sep {
            close(&mut current, i, &mut spans);
            continue;
        }
        if let Some(&(prev_i, prev)) = current.last() {
            let letter = |k: Class| matches!(k, Class::Upper | Class::Lower);
            let boundary = (prev == Class::Lower && class == Class::Upper)
                || (prev == Class::Digit && letter(class))
                || (letter(prev) && class == Class::Digit);
            if boundary {
                close(&mut current, i, &mut spans);
            } else if prev == Class::Upper && class == Class::Lower && current.len() >= 2 {
                let before = current[current.len() - 2].1;
                if before == Class::Upper {
                    // acronym followed by a word: the last capital starts the word
                    current.pop();
                    close(&mut current, prev_i, &mut spans);
                    current.push((prev_i, prev));
                }
            }
        }
        current.push((i, class));
    }
    close(&mut current, raw.len(), &mut spans);
    spans
}

/// True when two names differ only in separators and case boundaries.
pub fn normalized_equal(a: &str, b: &str) -> Result<bool> {
    let a = split(a)?;
    let b = split(b)?;
    Ok(a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.text == y.text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(raw: &str) -> Vec<String> {
        split(raw).unwrap().into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn camel_and_underscore() {
        assert_eq!(texts("pictureLock"), ["picture", "lock"]);
        assert_eq!(texts("author_name"), ["author", "name"]);
    }

    #[test]
    fn hungarian_prefix_is_kept() {
        assert_eq!(texts("mPendingDeletedMessages"), ["m", "pending", "deleted", "messages"]);
    }

    #[test]
    fn acronym_then_word() {
        assert_eq!(texts("HTMLParser"), ["html", "parser"]);
        assert_eq!(texts("parseHTML"), ["parse", "html"]);
        assert_eq!(texts("XMLHttpRequest"), ["xml", "http", "request"]);
        assert_eq!(texts("ID"), ["id"]);
    }

    #[test]
    fn digits_are_their_own_terms() {
        assert_eq!(texts("utf8String"), ["utf", "8", "string"]);
        assert_eq!(texts("x2y"), ["x", "2", "y"]);
        let terms = split("base64").unwrap();
        assert_eq!(terms[1].pos, Pos::Digit);
        assert_eq!(terms[0].pos, Pos::Unknown);
    }

    #[test]
    fn dollar_is_a_separator() {
        assert_eq!(texts("Outer$Inner"), ["outer", "inner"]);
        assert_eq!(texts("__init__"), ["init"]);
    }

    #[test]
    fn offsets_point_at_surface() {
        let raw = "get_HTMLParser2";
        for t in split(raw).unwrap() {
            assert_eq!(&raw[t.offset..t.offset + t.surface.len()], t.surface);
        }
    }

    #[test]
    fn run_together_words_stay_whole() {
        assert_eq!(texts("userid"), ["userid"]);
    }

    #[test]
    fn non_ascii_passes_through() {
        assert_eq!(texts("größeWert"), ["größe", "wert"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(split(""), Err(Error::EmptyIdentifier)));
        assert!(matches!(split("_$_"), Err(Error::NoSplittableContent(_))));
        assert_eq!(split("").unwrap_err().to_string(), "empty identifier");
    }

    #[test]
    fn normalized_equality() {
        assert!(normalized_equal("fooBar", "foo_bar").unwrap());
        assert!(normalized_equal("fooBar", "fooBar").unwrap());
        assert!(!normalized_equal("fooBar", "barFoo").unwrap());
        assert!(normalized_equal("FOO_BAR", "fooBar").unwrap());
        assert!(normalized_equal("", "x").is_err());
    }

    fn ident_strategy() -> impl Strategy<Value = String> {
        "[A-Za-z0-9_$]{1,24}"
    }

    proptest! {
        #[test]
        fn split_is_lossless(raw in ident_strategy()) {
            let stripped: String = raw.chars().filter(|c| !is_separator(*c)).collect();
            match split(&raw) {
                Ok(terms) => {
                    prop_assert!(!terms.is_empty());
                    let joined: String = terms.iter().map(|t| t.surface.as_str()).collect();
                    prop_assert_eq!(fold(&joined), fold(&stripped));
                    for t in &terms {
                        prop_assert_eq!(&t.text, &fold(&t.surface));
                        prop_assert_eq!(t.pos == Pos::Digit, is_all_digits(&t.text));
                    }
                }
                Err(_) => prop_assert!(stripped.is_empty()),
            }
        }

        #[test]
        fn split_is_idempotent(raw in ident_strategy()) {
            if let Ok(terms) = split(&raw) {
                let rejoined = terms.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join("_");
                let again: Vec<String> = split(&rejoined).unwrap().into_iter().map(|t| t.text).collect();
                let first: Vec<String> = terms.into_iter().map(|t| t.text).collect();
                prop_assert_eq!(first, again);
            }
        }

        #[test]
        fn normalized_equal_is_an_equivalence(
            a in "[a-cA-C_]{1,6}",
            b in "[a-cA-C_]{1,6}",
            c in "[a-cA-C_]{1,6}",
        ) {
            if let (Ok(ab), Ok(ba), Ok(bc), Ok(ac), Ok(aa)) = (
                normalized_equal(&a, &b),
                normalized_equal(&b, &a),
                normalized_equal(&b, &c),
                normalized_equal(&a, &c),
                normalized_equal(&a, &a),
            ) {
                prop_assert!(aa);
                prop_assert_eq!(ab, ba);
                if ab && bc {
                    prop_assert!(ac);
                }
            }
        }
    }
}
