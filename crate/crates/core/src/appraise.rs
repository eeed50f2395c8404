//! Rule-based appraisal of single identifier names.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abbrev::{expand, is_abbreviation, ContextBag, GoldPair};
use crate::classify::{classify_with, ClassifyOptions, SemanticChange};
use crate::error::{read_file, Error, Result};
use crate::ident::{fold, is_all_digits, split, Term};
use crate::lexicon::Lexicon;

static BUNDLED_CONFIG: &str = include_str!("../data/appraiser.conf");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppraiserConfig {
    /// Points deducted per distinct flag, 1..=100.
    pub penalty: u32,
    pub max_terms: usize,
    pub min_chars: usize,
    pub generic_heads: BTreeSet<String>,
}

impl Default for AppraiserConfig {
    fn default() -> Self {
        parse_config(BUNDLED_CONFIG, "bundled appraiser config").expect("bundled config parses")
    }
}

/// `key = value` lines; `#` comments. Missing keys keep their defaults.
pub fn parse_config(text: &str, origin: &str) -> Result<AppraiserConfig> {
    let mut cfg = AppraiserConfig {
        penalty: 15,
        max_terms: 5,
        min_chars: 4,
        generic_heads: ["data", "info", "object", "item", "value", "temp", "result", "contact"]
            .into_iter()
            .map(String::from)
            .collect(),
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(origin, line_no, "expected key = value"));
        };
        let (key, value) = (key.trim(), value.trim());
        let number = |lo: usize, hi: usize| -> Result<usize> {
            value
                .parse::<usize>()
                .ok()
                .filter(|n| (lo..=hi).contains(n))
                .ok_or_else(|| Error::parse(origin, line_no, format!("{key} must be an integer in {lo}..={hi}")))
        };
        match key {
            "penalty" => cfg.penalty = number(1, 100)? as u32,
            "max_terms" => cfg.max_terms = number(1, usize::MAX)?,
            "min_chars" => cfg.min_chars = number(0, usize::MAX)?,
            "generic_heads" => {
                cfg.generic_heads = value
                    .split(',')
                    .map(|w| fold(w.trim()))
                    .filter(|w| !w.is_empty())
                    .collect()
            }
            other => return Err(Error::parse(origin, line_no, format!("unknown key {other:?}"))),
        }
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<AppraiserConfig> {
    parse_config(&read_file(path)?, &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flag {
    AbbreviationPresent,
    SingleLetter,
    TooShort,
    TooLong,
    NonDictionaryTerm,
    GenericHead,
    MixedConvention,
    DigitOnlyTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    pub candidate: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Appraisal {
    pub name: String,
    pub flags: BTreeSet<Flag>,
    pub score: u32,
    pub suggestions: Vec<Suggestion>,
}

/// Everything an appraisal depends on besides the name.
#[derive(Debug, Clone, Copy)]
pub struct Appraiser<'a> {
    pub lex: &'a Lexicon,
    pub context: &'a ContextBag,
    pub gold: &'a [GoldPair],
    pub config: &'a AppraiserConfig,
}

fn has_camel_boundary(name: &str) -> bool {
    let chars: Vec<char> = name.chars().collect();
    chars.windows(2).any(|w| w[0].is_lowercase() && w[1].is_uppercase())
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

impl<'a> Appraiser<'a> {
    fn expansion(&self, term: &Term) -> Option<String> {
        if !is_abbreviation(&term.text, self.lex) {
            return None;
        }
        expand(&term.text, self.context, self.gold, self.lex)
            .filter(|e| e.split(' ').all(|w| self.lex.contains(w)))
    }

    pub fn flags(&self, name: &str) -> Result<BTreeSet<Flag>> {
        let terms = split(name)?;
        let cfg = self.config;
        let mut flags = BTreeSet::new();
        if terms.len() == 1 && terms[0].text.chars().count() == 1 && !is_all_digits(&terms[0].text) {
            flags.insert(Flag::SingleLetter);
        }
        for t in &terms {
            if is_all_digits(&t.text) {
                flags.insert(Flag::DigitOnlyTerm);
                continue;
            }
            if is_abbreviation(&t.text, self.lex) {
                flags.insert(Flag::AbbreviationPresent);
            }
            if !self.lex.contains(&t.text)
                && expand(&t.text, self.context, self.gold, self.lex).is_none()
            {
                flags.insert(Flag::NonDictionaryTerm);
            }
        }
        if terms.len() < 2 && name.chars().count() < cfg.min_chars {
            flags.insert(Flag::TooShort);
        }
        if terms.len() > cfg.max_terms {
            flags.insert(Flag::TooLong);
        }
        if terms.last().is_some_and(|h| cfg.generic_heads.contains(&h.text)) {
            flags.insert(Flag::GenericHead);
        }
        if name.contains('_') && has_camel_boundary(name) {
            flags.insert(Flag::MixedConvention);
        }
        Ok(flags)
    }

    /// Spell `expansion` the way `term` was written in `name`.
    fn render(name: &str, term: &Term, expansion: &str) -> String {
        let words: Vec<&str> = expansion.split(' ').collect();
        let surface = term.surface.as_str();
        let upper = surface.chars().count() > 1 && surface.chars().all(|c| !c.is_lowercase());
        let joiner = ['_', '-'].into_iter().find(|c| name.contains(*c));
        match joiner {
            Some(j) => {
                let first_upper = surface.chars().next().is_some_and(char::is_uppercase);
                words
                    .iter()
                    .map(|w| {
                        if upper {
                            w.to_uppercase()
                        } else if first_upper {
                            capitalize(w)
                        } else {
                            w.to_string()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(&j.to_string())
            }
            None => words
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    if i == 0 && !surface.chars().next().is_some_and(char::is_uppercase) {
                        w.to_string()
                    } else {
                        capitalize(w)
                    }
                })
                .collect(),
        }
    }

    fn replace(name: &str, edits: &[(&Term, &str)]) -> String {
        let mut out = name.to_string();
        let mut edits = edits.to_vec();
        edits.sort_by_key(|(t, _)| std::cmp::Reverse(t.offset));
        for (term, expansion) in edits {
            let end = term.offset + term.surface.len();
            out.replace_range(term.offset..end, &Self::render(name, term, expansion));
        }
        out
    }

    pub fn appraise(&self, name: &str) -> Result<Appraisal> {
        let flags = self.flags(name)?;
        let score = 100u32.saturating_sub(self.config.penalty.saturating_mul(flags.len() as u32));
        let mut suggestions = Vec::new();
        if flags.contains(&Flag::AbbreviationPresent) {
            let terms = split(name)?;
            let found: Vec<(&Term, String)> = terms
                .iter()
                .filter_map(|t| self.expansion(t).map(|e| (t, e)))
                .collect();
            let mut candidates: Vec<(String, String)> = Vec::new();
            if found.len() > 1 {
                let edits: Vec<(&Term, &str)> = found.iter().map(|(t, e)| (*t, e.as_str())).collect();
                candidates.push((Self::replace(name, &edits), "expand all abbreviations".into()));
            }
            for (t, e) in &found {
                candidates.push((
                    Self::replace(name, &[(t, e.as_str())]),
                    format!("expand {} to {}", t.text, e),
                ));
            }
            let mut seen = BTreeSet::new();
            for (candidate, reason) in candidates {
                if candidate == name || !seen.insert(candidate.clone()) {
                    continue;
                }
                // keep only candidates that actually clear the flag
                match self.flags(&candidate) {
                    Ok(f) if !f.contains(&Flag::AbbreviationPresent) => {
                        suggestions.push(Suggestion { candidate, reason })
                    }
                    _ => {}
                }
            }
        }
        Ok(Appraisal { name: name.to_string(), flags, score, suggestions })
    }

    pub fn appraise_rename(&self, old: &str, new: &str) -> Result<RenameAppraisal> {
        let opts = ClassifyOptions { expand: true, context: Some(self.context), gold: self.gold };
        let change = classify_with(old, new, self.lex, &opts)?;
        let old_score = self.appraise(old)?.score;
        let new_score = self.appraise(new)?.score;
        Ok(RenameAppraisal {
            change,
            old_score,
            new_score,
            delta: i64::from(new_score) - i64::from(old_score),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenameAppraisal {
    pub change: SemanticChange,
    pub old_score: u32,
    pub new_score: u32,
    pub delta: i64,
}

pub fn appraise(
    name: &str,
    context: &ContextBag,
    lex: &Lexicon,
    gold: &[GoldPair],
    config: &AppraiserConfig,
) -> Result<Appraisal> {
    Appraiser { lex, context, gold, config }.appraise(name)
}

pub fn appraise_rename(
    old: &str,
    new: &str,
    lex: &Lexicon,
    context: &ContextBag,
    gold: &[GoldPair],
    config: &AppraiserConfig,
) -> Result<RenameAppraisal> {
    Appraiser { lex, context, gold, config }.appraise_rename(old, new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abbrev::bundled_gold;
    use crate::classify::Category;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn lex() -> &'static Lexicon {
        static LEX: OnceLock<Lexicon> = OnceLock::new();
        LEX.get_or_init(Lexicon::bundled)
    }

    fn run(name: &str, context: &[&str]) -> Appraisal {
        let ctx = ContextBag::from_words(context);
        appraise(name, &ctx, lex(), &[], &AppraiserConfig::default()).unwrap()
    }

    #[test]
    fn abbreviations_expanded_from_context() {
        let a = run("usrCnt", &["user", "count"]);
        assert_eq!(a.flags, BTreeSet::from([Flag::AbbreviationPresent]));
        assert_eq!(a.score, 85);
        let candidates: Vec<&str> = a.suggestions.iter().map(|s| s.candidate.as_str()).collect();
        assert_eq!(candidates, vec!["userCount"]);
    }

    #[test]
    fn clean_name() {
        let a = run("userCount", &[]);
        assert!(a.flags.is_empty());
        assert_eq!(a.score, 100);
        assert!(a.suggestions.is_empty());
    }

    #[test]
    fn single_letter() {
        let a = run("x", &[]);
        assert!(a.flags.contains(&Flag::SingleLetter));
        assert!(a.score <= 85);
    }

    #[test]
    fn other_flags() {
        assert!(run("user_firstName", &[]).flags.contains(&Flag::MixedConvention));
        assert!(!run("user_count", &[]).flags.contains(&Flag::MixedConvention));
        assert!(run("userData", &[]).flags.contains(&Flag::GenericHead));
        assert!(run("user2", &[]).flags.contains(&Flag::DigitOnlyTerm));
        assert!(run("bar", &[]).flags.contains(&Flag::TooShort));
        assert!(run("userNameListCountIndexValue", &[]).flags.contains(&Flag::TooLong));
        assert!(run("qzx", &[]).flags.contains(&Flag::NonDictionaryTerm));
    }

    #[test]
    fn case_style_preserved() {
        let gold = bundled_gold();
        let cfg = AppraiserConfig::default();
        let ctx = ContextBag::new();
        let ap = Appraiser { lex: lex(), context: &ctx, gold: &gold, config: &cfg };
        let got = |n: &str| -> Vec<String> {
            ap.appraise(n).unwrap().suggestions.into_iter().map(|s| s.candidate).collect()
        };
        assert_eq!(got("MAX_LEN"), vec!["MAXIMUM_LENGTH"]);
        assert_eq!(got("user_idx"), vec!["user_index"]);
        assert_eq!(got("MsgQueue"), vec!["MessageQueue"]);
        assert_eq!(got("getImgBuf"), vec!["getImageBuffer"]);
    }

    #[test]
    fn config_parsing() {
        let cfg = parse_config("penalty = 20\n# c\ngeneric_heads = Foo, bar\n", "t").unwrap();
        assert_eq!(cfg.penalty, 20);
        assert_eq!(cfg.max_terms, 5);
        assert_eq!(cfg.generic_heads, BTreeSet::from(["foo".to_string(), "bar".to_string()]));
        assert_eq!(AppraiserConfig::default().penalty, 15);
        assert!(matches!(parse_config("penalty = 0", "t"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_config("\ncolour = red", "t").is_err());
        assert!(parse_config("penalty", "t").is_err());
    }

    #[test]
    fn rename_deltas() {
        let ctx = ContextBag::from_words(["user", "count"]);
        let cfg = AppraiserConfig::default();
        let r = appraise_rename("usrCnt", "userCount", lex(), &ctx, &[], &cfg).unwrap();
        assert!(r.delta > 0);
        let r = appraise_rename("a", "a", lex(), &ctx, &[], &cfg).unwrap();
        assert_eq!((r.change.dominant, r.delta), (Category::Preserve, 0));
        let r = appraise_rename("pictureLock", "photoLock", lex(), &ctx, &[], &cfg).unwrap();
        assert_eq!((r.change.dominant, r.delta), (Category::Preserve, 0));
    }

    proptest! {
        #[test]
        fn appraisal_invariants(
            parts in prop::collection::vec(
                prop::sample::select(vec!["usr", "cnt", "user", "count", "x", "msg", "data", "2", "idx", "tmp", "queue"]),
                1..7,
            ),
            sep in prop::sample::select(vec!["", "_"]),
        ) {
            let name = parts
                .iter()
                .enumerate()
                .map(|(i, p)| if i > 0 && sep.is_empty() { capitalize(p) } else { p.to_string() })
                .collect::<Vec<_>>()
                .join(sep);
            let gold = bundled_gold();
            let ctx = ContextBag::from_words(["user", "count"]);
            let cfg = AppraiserConfig::default();
            let ap = Appraiser { lex: lex(), context: &ctx, gold: &gold, config: &cfg };
            let a = ap.appraise(&name).unwrap();
            prop_assert!(a.score <= 100);
            prop_assert_eq!(a.score == 100, a.flags.is_empty());
            prop_assert_eq!(a.score, 100u32.saturating_sub(15 * a.flags.len() as u32));
            for s in &a.suggestions {
                prop_assert_ne!(&s.candidate, &name);
                let again = ap.flags(&s.candidate).unwrap();
                prop_assert!(!again.contains(&Flag::AbbreviationPresent));
            }
            prop_assert_eq!(ap.appraise(&name).unwrap(), a);
        }
    }
}
