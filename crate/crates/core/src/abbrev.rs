//! Abbreviation detection and expansion.
//!
//! Expansion tries, in order: the gold table (then any `expansion_of`
//! records in the lexicon), words and identifiers harvested from the
//! surrounding code, and finally the lexicon's dictionary. Within a
//! technique the shortest candidate wins, then the lexicographically
//! smallest.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{read_file, Error, Result};
use crate::ident::{fold, is_all_digits, split, Identifier};
use crate::lexicon::Lexicon;

/// Shortest prefix the dictionary technique will try to complete.
pub const MIN_DICTIONARY_PREFIX: usize = 3;

const BUNDLED_GOLD: &str = include_str!("../data/gold.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldPair {
    pub abbreviation: String,
    pub expansion: String,
    pub source: String,
}

impl GoldPair {
    pub fn new(abbreviation: &str, expansion: &str, source: &str) -> std::result::Result<Self, String> {
        let abbreviation = fold(abbreviation.trim());
        let expansion = fold(expansion.trim());
        if abbreviation.is_empty() || expansion.is_empty() {
            return Err("abbreviation and expansion must be non-empty".to_string());
        }
        if abbreviation.chars().count() >= expansion.chars().count() {
            return Err(format!(
                "abbreviation {abbreviation:?} is not shorter than {expansion:?}"
            ));
        }
        Ok(GoldPair {
            abbreviation,
            expansion,
            source: source.trim().to_string(),
        })
    }
}

/// Gold pairs shipped with the crate.
pub fn bundled_gold() -> Vec<GoldPair> {
    parse_gold(BUNDLED_GOLD, "bundled gold table").expect("bundled gold table is well formed")
}

pub fn load_gold(path: impl AsRef<Path>) -> Result<Vec<GoldPair>> {
    let path = path.as_ref();
    parse_gold(&read_file(path)?, &path.display().to_string())
}

/// Parse `abbreviation<TAB>expansion<TAB>source` lines. The source column
/// may be omitted.
pub fn parse_gold(text: &str, origin: &str) -> Result<Vec<GoldPair>> {
    let mut pairs: Vec<GoldPair> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let (abbr, exp, source) = match fields[..] {
            [a, e] => (a, e, ""),
            [a, e, s] => (a, e, s),
            _ => {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ))
            }
        };
        let pair = GoldPair::new(abbr, exp, source).map_err(|m| Error::parse(origin, line_no, m))?;
        if let Some(existing) = pairs.iter().find(|p| p.abbreviation == pair.abbreviation) {
            if existing.expansion != pair.expansion {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!(
                        "{:?} already expands to {:?}",
                        pair.abbreviation, existing.expansion
                    ),
                ));
            }
            continue;
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Words harvested from a region of source code.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextBag {
    /// Case-folded words with their occurrence counts.
    pub words: BTreeMap<String, usize>,
    /// Term sequences of multi-word identifiers, used for acronyms.
    pub phrases: BTreeSet<Vec<String>>,
}

impl ContextBag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bag = Self::new();
        for w in words {
            bag.add_identifier(w.as_ref());
        }
        bag
    }

    /// Harvest identifiers and comment words from source text.
    pub fn harvest(text: &str) -> Self {
        let mut bag = Self::new();
        for token in text.split(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$')) {
            bag.add_identifier(token);
        }
        bag
    }

    /// Split an identifier and add its terms; digit-only terms are skipped.
    pub fn add_identifier(&mut self, raw: &str) {
        let Ok(terms) = split(raw) else { return };
        let texts: Vec<String> = terms
            .into_iter()
            .map(|t| t.text)
            .filter(|t| !is_all_digits(t))
            .collect();
        for t in &texts {
            *self.words.entry(t.clone()).or_insert(0) += 1;
        }
        if texts.len() >= 2 {
            self.phrases.insert(texts);
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains_key(word)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Which technique produced an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    Gold,
    Lexicon,
    Context,
    Dictionary,
}

/// How the abbreviation matched its expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    Exact,
    Prefix,
    Skeleton,
    Acronym,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub text: String,
    pub technique: Technique,
    pub pattern: Pattern,
}

/// Single letters are always abbreviations; digit runs never are; anything
/// else is one when the lexicon does not know it.
pub fn is_abbreviation(term: &str, lex: &Lexicon) -> bool {
    let term = fold(term);
    if term.is_empty() || is_all_digits(&term) {
        return false;
    }
    if term.chars().count() == 1 {
        return true;
    }
    !lex.contains(&term)
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// First letter followed by the remaining consonants, with repeated letters
/// collapsed: `message` becomes `msg`, `count` becomes `cnt`.
pub fn skeleton(word: &str) -> String {
    let mut chars = word.chars();
    let Some(first) = chars.next() else {
        return String::new();
    };
    let mut out = String::from(first);
    for c in chars {
        if !is_vowel(c) && out.chars().last() != Some(c) {
            out.push(c);
        }
    }
    out
}

pub fn initials(terms: &[String]) -> String {
    terms.iter().filter_map(|t| t.chars().next()).collect()
}

fn is_strict_prefix(term: &str, word: &str) -> bool {
    word.len() > term.len() && word.starts_with(term)
}

fn best(candidates: impl Iterator<Item = (String, Pattern)>) -> Option<(String, Pattern)> {
    candidates.min_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

fn context_match(term: &str, context: &ContextBag) -> Option<(String, Pattern)> {
    let words = context.words.keys().filter_map(|w| {
        if w == term {
            None
        } else if is_strict_prefix(term, w) {
            Some((w.clone(), Pattern::Prefix))
        } else if skeleton(w) == term {
            Some((w.clone(), Pattern::Skeleton))
        } else {
            None
        }
    });
    let acronyms = context.phrases.iter().filter_map(|p| {
        (term.chars().count() >= 2 && initials(p) == term).then(|| (p.join(" "), Pattern::Acronym))
    });
    best(words.chain(acronyms))
}

fn dictionary_match(term: &str, lex: &Lexicon) -> Option<(String, Pattern)> {
    if term.chars().count() < MIN_DICTIONARY_PREFIX {
        return None;
    }
    best(
        lex.dictionary()
            .filter(|w| is_strict_prefix(term, w))
            .map(|w| (w.to_string(), Pattern::Prefix)),
    )
}

/// Expand `term`, reporting which technique and pattern matched.
pub fn expand_detailed(
    term: &str,
    context: &ContextBag,
    gold: &[GoldPair],
    lex: &Lexicon,
) -> Option<Expansion> {
    let term = fold(term);
    if term.is_empty() {
        return None;
    }
    let found = |text: String, technique, pattern| Expansion {
        text,
        technique,
        pattern,
    };
    if let Some(pair) = gold
        .iter()
        .find(|p| p.abbreviation == term && p.expansion != term)
    {
        return Some(found(pair.expansion.clone(), Technique::Gold, Pattern::Exact));
    }
    if let Some(e) = lex.expansions_of(&term).iter().find(|e| **e != term) {
        return Some(found(e.clone(), Technique::Lexicon, Pattern::Exact));
    }
    if let Some((text, pattern)) = context_match(&term, context) {
        return Some(found(text, Technique::Context, pattern));
    }
    dictionary_match(&term, lex).map(|(text, pattern)| found(text, Technique::Dictionary, pattern))
}

pub fn expand(term: &str, context: &ContextBag, gold: &[GoldPair], lex: &Lexicon) -> Option<String> {
    expand_detailed(term, context, gold, lex).map(|e| e.text)
}

/// Flag abbreviated terms and fill in the expansions that can be found.
pub fn expand_identifier(
    id: &Identifier,
    context: &ContextBag,
    gold: &[GoldPair],
    lex: &Lexicon,
) -> Identifier {
    let mut out = id.clone();
    for term in &mut out.terms {
        term.is_abbreviation = is_abbreviation(&term.text, lex);
        term.expansion = if term.is_abbreviation {
            expand(&term.text, context, gold, lex)
        } else {
            None
        };
    }
    out
}
