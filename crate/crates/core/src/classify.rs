//! Rename classification.
//!
//! Old and new term sequences are aligned on a longest common subsequence.
//! Leftover terms between consecutive matches are paired positionally into
//! replacements; whatever is left over after pairing is an addition or a
//! removal. Each replacement, addition and removal yields a sub-kind, and the
//! dominant category is the highest-precedence one any sub-kind implies:
//! Opposite, Broaden, Narrow, AddMeaning, RemoveMeaning, Unclassified,
//! Preserve.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abbrev::{expand_identifier, ContextBag, GoldPair};
use crate::error::{Error, Result};
use crate::ident::{Identifier, Pos, Term};
use crate::lexicon::{Lexicon, RelationKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Preserve,
    Narrow,
    Broaden,
    AddMeaning,
    RemoveMeaning,
    Opposite,
    Unclassified,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Preserve,
        Category::Narrow,
        Category::Broaden,
        Category::AddMeaning,
        Category::RemoveMeaning,
        Category::Opposite,
        Category::Unclassified,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Preserve => "Preserve",
            Category::Narrow => "Narrow",
            Category::Broaden => "Broaden",
            Category::AddMeaning => "AddMeaning",
            Category::RemoveMeaning => "RemoveMeaning",
            Category::Opposite => "Opposite",
            Category::Unclassified => "Unclassified",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubKind {
    FormatOnly,
    Reorder,
    SynonymReplace,
    InflectionReplace,
    HyponymReplace,
    ModifierAdd,
    HypernymReplace,
    HeadRemove,
    TermAdd,
    TermRemove,
    AntonymReplace,
    UnrelatedReplace,
}

impl SubKind {
    /// The category this sub-kind pushes the rename towards.
    pub fn category(self) -> Category {
        match self {
            SubKind::FormatOnly | SubKind::Reorder | SubKind::SynonymReplace | SubKind::InflectionReplace => {
                Category::Preserve
            }
            SubKind::HyponymReplace | SubKind::ModifierAdd => Category::Narrow,
            SubKind::HypernymReplace | SubKind::HeadRemove => Category::Broaden,
            SubKind::TermAdd => Category::AddMeaning,
            SubKind::TermRemove => Category::RemoveMeaning,
            SubKind::AntonymReplace => Category::Opposite,
            SubKind::UnrelatedReplace => Category::Unclassified,
        }
    }
}

/// Precedence used to pick the dominant category, highest first.
pub const PRECEDENCE: [Category; 7] = [
    Category::Opposite,
    Category::Broaden,
    Category::Narrow,
    Category::AddMeaning,
    Category::RemoveMeaning,
    Category::Unclassified,
    Category::Preserve,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replacement<'a> {
    pub old_index: usize,
    pub new_index: usize,
    pub old: &'a Term,
    pub new: &'a Term,
    pub relations: BTreeSet<RelationKind>,
}

/// A term with its position in the sequence it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Placed<'a> {
    pub index: usize,
    pub term: &'a Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Alignment<'a> {
    /// (old index, new index), strictly increasing in both.
    pub matched: Vec<(usize, usize)>,
    pub replacements: Vec<Replacement<'a>>,
    pub additions: Vec<Placed<'a>>,
    pub removals: Vec<Placed<'a>>,
    pub reorder_only: bool,
    pub format_only: bool,
}

/// Longest common subsequence of two sequences as index pairs.
///
/// Equal heads are always matched; on a tie between skipping an old or a new
/// element the old one is skipped.
pub fn lcs_pairs<T: PartialEq>(old: &[T], new: &[T]) -> Vec<(usize, usize)> {
    lcs_by(old.len(), new.len(), |i, j| old[i] == new[j])
}

fn lcs_by(n: usize, m: usize, eq: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let w = m + 1;
    let size = (n + 1) * w;
    // identifiers are short, so the table usually fits on the stack
    let mut stack = [0u32; 64];
    let mut heap;
    let len: &mut [u32] = if size <= stack.len() {
        &mut stack[..size]
    } else {
        heap = vec![0u32; size];
        &mut heap
    };
    // suffix table: len[i * w + j] = LCS of old[i..], new[j..]
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            len[i * w + j] = if eq(i, j) {
                len[(i + 1) * w + j + 1] + 1
            } else {
                len[(i + 1) * w + j].max(len[i * w + j + 1])
            };
        }
    }
    let mut pairs = Vec::with_capacity(len[0] as usize);
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if eq(i, j) {
            pairs.push((i, j));
            i += 1;
            j += 1;
        } else if len[(i + 1) * w + j] >= len[i * w + j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    pairs
}

fn multiset(terms: &[Term]) -> Vec<&str> {
    let mut v: Vec<&str> = terms.iter().map(|t| t.text.as_str()).collect();
    v.sort_unstable();
    v
}

pub fn align<'a>(old: &'a [Term], new: &'a [Term], lex: &Lexicon) -> Result<Alignment<'a>> {
    if old.is_empty() || new.is_empty() {
        return Err(Error::EmptyTermSequence);
    }
    let matched = lcs_by(old.len(), new.len(), |i, j| old[i].text == new[j].text);

    let mut replacements = Vec::new();
    let mut additions = Vec::new();
    let mut removals = Vec::new();
    // sentinel closes the final gap
    let bounds = matched.iter().copied().chain(std::iter::once((old.len(), new.len())));
    let (mut oi, mut nj) = (0, 0);
    for (mi, mj) in bounds {
        let old_gap = oi..mi;
        let new_gap = nj..mj;
        let paired = old_gap.len().min(new_gap.len());
        for k in 0..paired {
            let (a, b) = (oi + k, nj + k);
            replacements.push(Replacement {
                old_index: a,
                new_index: b,
                old: &old[a],
                new: &new[b],
                relations: lex.related(&old[a].text, &new[b].text),
            });
        }
        removals.extend(old_gap.skip(paired).map(|index| Placed {
            index,
            term: &old[index],
        }));
        additions.extend(new_gap.skip(paired).map(|index| Placed {
            index,
            term: &new[index],
        }));
        oi = mi + 1;
        nj = mj + 1;
    }

    let format_only = matched.len() == old.len() && old.len() == new.len();
    let reorder_only = !format_only && old.len() == new.len() && multiset(old) == multiset(new);
    Ok(Alignment {
        matched,
        replacements,
        additions,
        removals,
        reorder_only,
        format_only,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticChange {
    pub dominant: Category,
    pub subkinds: BTreeSet<SubKind>,
    pub evidence: Vec<String>,
}

impl SemanticChange {
    fn from_subkinds(subkinds: BTreeSet<SubKind>, evidence: Vec<String>) -> Self {
        let implied: BTreeSet<Category> = subkinds.iter().map(|s| s.category()).collect();
        let dominant = PRECEDENCE
            .into_iter()
            .find(|c| *c != Category::Preserve && implied.contains(c))
            .unwrap_or(Category::Preserve);
        SemanticChange {
            dominant,
            subkinds,
            evidence,
        }
    }

    pub fn has(&self, kind: SubKind) -> bool {
        self.subkinds.contains(&kind)
    }
}

/// Optional expansion step run before alignment.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassifyOptions<'a> {
    pub expand: bool,
    pub context: Option<&'a ContextBag>,
    pub gold: &'a [GoldPair],
}

/// Apply the rules to an alignment. `old_len` locates the head term.
pub fn rules(alignment: &Alignment<'_>, old_len: usize, lex: &Lexicon) -> SemanticChange {
    let mut subkinds = BTreeSet::new();
    let mut evidence = Vec::new();
    if alignment.format_only {
        subkinds.insert(SubKind::FormatOnly);
        evidence.push("term sequence unchanged; only separators or case differ".to_string());
        return SemanticChange::from_subkinds(subkinds, evidence);
    }
    if alignment.reorder_only {
        subkinds.insert(SubKind::Reorder);
        evidence.push("same terms in a different order".to_string());
        return SemanticChange::from_subkinds(subkinds, evidence);
    }

    for r in &alignment.replacements {
        let rel = &r.relations;
        let (kind, label) = if rel.contains(&RelationKind::Identical) {
            continue;
        } else if rel.contains(&RelationKind::Synonym) {
            (SubKind::SynonymReplace, "synonym")
        } else if rel.contains(&RelationKind::Inflection) {
            (SubKind::InflectionReplace, "inflection")
        } else if rel.contains(&RelationKind::Antonym) {
            (SubKind::AntonymReplace, "antonym")
        } else if rel.contains(&RelationKind::Hyponym) {
            (SubKind::HyponymReplace, "hyponym")
        } else if rel.contains(&RelationKind::Hypernym) {
            (SubKind::HypernymReplace, "hypernym")
        } else {
            (SubKind::UnrelatedReplace, "unrelated")
        };
        subkinds.insert(kind);
        evidence.push(format!("replaced '{}' with {label} '{}'", r.old.text, r.new.text));
    }

    for a in &alignment.additions {
        let pos = lex.pos_of(&a.term.text);
        let kind = if matches!(pos, Pos::Noun | Pos::Adjective) {
            SubKind::ModifierAdd
        } else {
            SubKind::TermAdd
        };
        subkinds.insert(kind);
        evidence.push(format!("added '{}' ({pos})", a.term.text));
    }

    for r in &alignment.removals {
        if old_len > 0 && r.index == old_len - 1 {
            subkinds.insert(SubKind::HeadRemove);
            evidence.push(format!("removed head term '{}'", r.term.text));
        } else {
            subkinds.insert(SubKind::TermRemove);
            evidence.push(format!("removed '{}'", r.term.text));
        }
    }

    if subkinds.is_empty() {
        evidence.push("no term changed meaning".to_string());
    }
    SemanticChange::from_subkinds(subkinds, evidence)
}

fn expanded_terms(raw: &str, lex: &Lexicon, opts: &ClassifyOptions<'_>) -> Result<Vec<Term>> {
    let id = Identifier::parse(raw)?;
    if !opts.expand {
        return Ok(id.terms);
    }
    let empty = ContextBag::new();
    let id = expand_identifier(&id, opts.context.unwrap_or(&empty), opts.gold, lex);
    let mut out = Vec::with_capacity(id.terms.len());
    for term in id.terms {
        match &term.expansion {
            Some(e) => out.extend(e.split(' ').filter(|w| !w.is_empty()).map(|w| Term {
                text: w.to_string(),
                ..term.clone()
            })),
            None => out.push(term),
        }
    }
    Ok(out)
}

/// Classify a rename with explicit expansion options.
pub fn classify_with(
    old_raw: &str,
    new_raw: &str,
    lex: &Lexicon,
    opts: &ClassifyOptions<'_>,
) -> Result<SemanticChange> {
    let old = expanded_terms(old_raw, lex, opts)?;
    let new = expanded_terms(new_raw, lex, opts)?;
    let alignment = align(&old, &new, lex)?;
    Ok(rules(&alignment, old.len(), lex))
}

pub fn classify(
    old_raw: &str,
    new_raw: &str,
    lex: &Lexicon,
    expand_first: bool,
    context: Option<&ContextBag>,
) -> Result<SemanticChange> {
    classify_with(
        old_raw,
        new_raw,
        lex,
        &ClassifyOptions {
            expand: expand_first,
            context,
            gold: &[],
        },
    )
}

/// Align two raw names without expansion.
