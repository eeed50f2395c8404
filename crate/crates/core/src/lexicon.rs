//! Lexical database: parts of speech, word relations and inflection.
//!
//! The on-disk format is one record per line, four tab-separated fields:
//!
//! ```text
//! word<TAB>pos<TAB>relation<TAB>target
//! ```
//!
//! `relation` is one of `synonym`, `antonym`, `hypernym`, `hyponym`,
//! `plural_of`, `expansion_of` or `none` (with target `-`). Lines starting
//! with `#` are comments. `a hypernym b` reads "b is a hypernym of a";
//! `a expansion_of b` reads "a is the expansion of the abbreviation b".
//!
//! Synonym and antonym relations are closed symmetrically at load time and
//! hypernym/hyponym records are closed under inversion, so queries never
//! depend on which side of a pair the file happened to list.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{read_file, Error, Result};
use crate::ident::{fold, is_all_digits, Pos};

pub use crate::stem::stem;

/// Relation keyword as it appears in a lexicon file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Synonym,
    Antonym,
    Hypernym,
    Hyponym,
    PluralOf,
    ExpansionOf,
    None,
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "synonym" => Relation::Synonym,
            "antonym" => Relation::Antonym,
            "hypernym" => Relation::Hypernym,
            "hyponym" => Relation::Hyponym,
            "plural_of" => Relation::PluralOf,
            "expansion_of" => Relation::ExpansionOf,
            "none" => Relation::None,
            other => return Err(format!("unknown relation {other:?}")),
        })
    }
}

fn parse_pos(s: &str) -> std::result::Result<Pos, String> {
    Ok(match s {
        "noun" => Pos::Noun,
        "verb" => Pos::Verb,
        "adjective" => Pos::Adjective,
        "adverb" => Pos::Adverb,
        "preposition" => Pos::Preposition,
        other => return Err(format!("unknown part of speech {other:?}")),
    })
}

/// How two words relate, seen from the first word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Identical,
    Synonym,
    Antonym,
    /// The second word is more general than the first.
    Hypernym,
    /// The second word is more specific than the first.
    Hyponym,
    Inflection,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Identical => "identical",
            RelationKind::Synonym => "synonym",
            RelationKind::Antonym => "antonym",
            RelationKind::Hypernym => "hypernym",
            RelationKind::Hyponym => "hyponym",
            RelationKind::Inflection => "inflection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub pos: Pos,
    pub relation: Relation,
    pub target: Option<String>,
}

type Links = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Record>>,
    dictionary: BTreeSet<String>,
    // POS inherited by words that only ever appear as relation targets
    target_pos: BTreeMap<String, Pos>,
    synonyms: Links,
    antonyms: Links,
    hypernyms: Links,
    hyponyms: Links,
    // irregular plural <-> singular, both directions
    plurals: Links,
    singular_of: BTreeMap<String, String>,
    // abbreviation -> expansions, file order
    expansions: BTreeMap<String, Vec<String>>,
    // a -> b -> relation bits, for fast pair queries
    index: HashMap<String, HashMap<String, u8>>,
}

const SYN: u8 = 1;
const ANT: u8 = 2;
const HYPER: u8 = 4;
const HYPO: u8 = 8;
const PLURAL: u8 = 16;

const BUNDLED: &str = include_str!("../data/lexicon.tsv");

fn link(map: &mut Links, a: &str, b: &str) {
    map.entry(a.to_string()).or_default().insert(b.to_string());
}

fn neighbours<'a>(map: &'a Links, word: &str) -> impl Iterator<Item = &'a str> {
    map.get(&fold(word))
        .into_iter()
        .flat_map(|s| s.iter().map(String::as_str))
}

impl Lexicon {
    /// Porter stem of a lowercase word.
    pub fn stem(&self, word: &str) -> String {
        stem(word)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED, "bundled lexicon").expect("bundled lexicon is well formed")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = read_file(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parse lexicon text. `origin` labels error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut lex = Lexicon::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [word, pos, relation, target] = fields[..] else {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected 4 tab-separated fields, found {}", fields.len()),
                ));
            };
            let bad = |msg: String| Error::parse(origin, line_no, msg);
            let word = check_word(word).map_err(bad)?;
            let pos = parse_pos(pos).map_err(bad)?;
            let relation: Relation = relation.parse().map_err(bad)?;
            let target = match (relation, target) {
                (Relation::None, "-") => None,
                (Relation::None, t) => {
                    return Err(bad(format!("relation none needs target \"-\", found {t:?}")))
                }
                (_, "-") => return Err(bad("relation needs a target word".to_string())),
                (_, t) => Some(check_word(t).map_err(bad)?),
            };
            if target.as_deref() == Some(word.as_str()) {
                if relation == Relation::Antonym {
                    return Err(Error::SynonymAntonymConflict(word.clone(), word));
                }
                return Err(bad(format!("{word:?} is related to itself")));
            }
            lex.add(word, pos, relation, target);
        }
        lex.check_conflicts()?;
        lex.build_index();
        Ok(lex)
    }

    fn add(&mut self, word: String, pos: Pos, relation: Relation, target: Option<String>) {
        self.dictionary.insert(word.clone());
        if let Some(t) = &target {
            if relation != Relation::ExpansionOf {
                self.dictionary.insert(t.clone());
                self.target_pos.entry(t.clone()).or_insert(pos);
            }
            match relation {
                Relation::Synonym => {
                    link(&mut self.synonyms, &word, t);
                    link(&mut self.synonyms, t, &word);
                }
                Relation::Antonym => {
                    link(&mut self.antonyms, &word, t);
                    link(&mut self.antonyms, t, &word);
                }
                Relation::Hypernym => {
                    link(&mut self.hypernyms, &word, t);
                    link(&mut self.hyponyms, t, &word);
                }
                Relation::Hyponym => {
                    link(&mut self.hyponyms, &word, t);
                    link(&mut self.hypernyms, t, &word);
                }
                Relation::PluralOf => {
                    self.singular_of.entry(word.clone()).or_insert_with(|| t.clone());
                    link(&mut self.plurals, &word, t);
                    link(&mut self.plurals, t, &word);
                }
                Relation::ExpansionOf => {
                    let list = self.expansions.entry(t.clone()).or_default();
                    if !list.contains(&word) {
                        list.push(word.clone());
                    }
                }
                Relation::None => {}
            }
        }
        self.entries.entry(word).or_default().push(Record {
            pos,
            relation,
            target,
        });
    }

    fn build_index(&mut self) {
        let maps = [
            (&self.synonyms, SYN),
            (&self.antonyms, ANT),
            (&self.hypernyms, HYPER),
            (&self.hyponyms, HYPO),
            (&self.plurals, PLURAL),
        ];
        let mut index: HashMap<String, HashMap<String, u8>> = HashMap::new();
        for (map, bit) in maps {
            for (a, bs) in map {
                let row = index.entry(a.clone()).or_default();
                for b in bs {
                    *row.entry(b.clone()).or_default() |= bit;
                }
            }
        }
        self.index = index;
    }

    fn bits(&self, a: &str, b: &str) -> u8 {
        self.index
            .get(a)
            .and_then(|row| row.get(b))
            .copied()
            .unwrap_or(0)
    }

    fn check_conflicts(&self) -> Result<()> {
        for (word, syns) in &self.synonyms {
            if let Some(ants) = self.antonyms.get(word) {
                if let Some(both) = syns.intersection(ants).next() {
                    return Err(Error::SynonymAntonymConflict(word.clone(), both.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Known words in lexicographic order.
    pub fn dictionary(&self) -> impl Iterator<Item = &str> {
        self.dictionary.iter().map(String::as_str)
    }

    /// Records for `word` in file order.
    pub fn records(&self, word: &str) -> &[Record] {
        self.entries.get(&fold(word)).map_or(&[], Vec::as_slice)
    }

    /// Whether `word`, or the singular it inflects, is a known word.
    pub fn contains(&self, word: &str) -> bool {
        let word = fold(word);
        self.dictionary.contains(&word) || self.lemma(&word).is_some()
    }

    /// The known singular of a plural form not itself in the dictionary.
    fn lemma(&self, word: &str) -> Option<String> {
        if let Some(s) = self.singular_of.get(word) {
            return Some(s.clone());
        }
        singular_candidates(word)
            .into_iter()
            .find(|c| self.dictionary.contains(c) && regular_plural(c) == word)
    }

    /// Primary part of speech: the first record in file order wins.
    pub fn pos_of(&self, word: &str) -> Pos {
        let word = fold(word);
        if is_all_digits(&word) {
            return Pos::Digit;
        }
        if let Some(first) = self.entries.get(&word).and_then(|r| r.first()) {
            return first.pos;
        }
        if let Some(pos) = self.target_pos.get(&word) {
            return *pos;
        }
        match self.lemma(&word) {
            Some(lemma) if lemma != word => self.pos_of(&lemma),
            _ => Pos::Unknown,
        }
    }

    pub fn synonyms(&self, word: &str) -> impl Iterator<Item = &str> {
        neighbours(&self.synonyms, word)
    }

    pub fn antonyms(&self, word: &str) -> impl Iterator<Item = &str> {
        neighbours(&self.antonyms, word)
    }

    /// Direct hypernyms (more general words) of `word`.
    pub fn hypernyms(&self, word: &str) -> impl Iterator<Item = &str> {
        neighbours(&self.hypernyms, word)
    }

    /// Direct hyponyms (more specific words) of `word`.
    pub fn hyponyms(&self, word: &str) -> impl Iterator<Item = &str> {
        neighbours(&self.hyponyms, word)
    }

    /// Expansions recorded for an abbreviation, in file order.
    pub fn expansions_of(&self, abbreviation: &str) -> &[String] {
        self.expansions
            .get(&fold(abbreviation))
            .map_or(&[], Vec::as_slice)
    }

    /// Every (specific, general) hypernym edge after closure.
    pub fn hypernym_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.hypernyms
            .iter()
            .flat_map(|(a, bs)| bs.iter().map(move |b| (a.as_str(), b.as_str())))
    }

    /// Every synonym pair after closure, both orientations.
    pub fn synonym_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.synonyms
            .iter()
            .flat_map(|(a, bs)| bs.iter().map(move |b| (a.as_str(), b.as_str())))
    }

    pub fn is_inflection(&self, a: &str, b: &str) -> bool {
        is_inflection(a, b, self)
    }

    /// Relations from `a`'s point of view.
    pub fn related(&self, a: &str, b: &str) -> BTreeSet<RelationKind> {
        let a = fold_cow(a);
        let b = fold_cow(b);
        let mut out = BTreeSet::new();
        if a == b {
            out.insert(RelationKind::Identical);
            return out;
        }
        let bits = self.bits(&a, &b);
        for (bit, kind) in [
            (SYN, RelationKind::Synonym),
            (ANT, RelationKind::Antonym),
            (HYPER, RelationKind::Hypernym),
            (HYPO, RelationKind::Hyponym),
        ] {
            if bits & bit != 0 {
                out.insert(kind);
            }
        }
        if inflection_folded(&a, &b, self) {
            out.insert(RelationKind::Inflection);
        }
        out
    }
}

fn check_word(w: &str) -> std::result::Result<String, String> {
    if w.is_empty() {
        return Err("empty word".to_string());
    }
    if w.chars().any(char::is_whitespace) {
        return Err(format!("word {w:?} contains whitespace"));
    }
    Ok(fold(w))
}

/// Regular English plural: `s`, `es` after sibilants, `ies` after a
/// consonant + `y`.
pub fn regular_plural(word: &str) -> String {
    let bytes = word.as_bytes();
    let n = bytes.len();
    let sibilant = ["s", "x", "z", "ch", "sh"].iter().any(|s| word.ends_with(s));
    if sibilant {
        format!("{word}es")
    } else if n >= 2 && bytes[n - 1] == b'y' && !b"aeiou".contains(&bytes[n - 2]) {
        format!("{}ies", &word[..n - 1])
    } else {
        format!("{word}s")
    }
}

fn singular_candidates(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(stem) = word.strip_suffix("ies") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = word.strip_suffix("es") {
        out.push(stem.to_string());
    }
    if let Some(stem) = word.strip_suffix('s') {
        out.push(stem.to_string());
    }
    out.retain(|s| !s.is_empty());
    out
}

/// True if one word is the singular/plural of the other, by the regular
/// rules or by an irregular `plural_of` record.
pub fn is_inflection(a: &str, b: &str, lex: &Lexicon) -> bool {
    inflection_folded(&fold(a), &fold(b), lex)
}

fn inflection_folded(a: &str, b: &str, lex: &Lexicon) -> bool {
    if a == b || a.is_empty() || b.is_empty() {
        return false;
    }
    is_regular_plural(a, b) || is_regular_plural(b, a) || lex.bits(a, b) & PLURAL != 0
}

/// `plural == regular_plural(singular)`, without building the plural.
fn is_regular_plural(singular: &str, plural: &str) -> bool {
    let Some(stem) = plural.strip_suffix('s') else {
        return false;
    };
    let bytes = singular.as_bytes();
    let n = bytes.len();
    if ["s", "x", "z", "ch", "sh"].iter().any(|s| singular.ends_with(s)) {
        stem.strip_suffix('e') == Some(singular)
    } else if n >= 2 && bytes[n - 1] == b'y' && !b"aeiou".contains(&bytes[n - 2]) {
        stem.strip_suffix("ie") == Some(&singular[..n - 1])
    } else {
        stem == singular
    }
}

fn fold_cow(s: &str) -> Cow<'_, str> {
    if s.bytes().any(|b| b.is_ascii_uppercase()) {
        Cow::Owned(fold(s))
    } else {
        Cow::Borrowed(s)
    }
}
