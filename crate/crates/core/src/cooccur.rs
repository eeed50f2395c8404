//! Refactorings on the same element shortly before or after a rename.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miner::{RefactoringEvent, RenameEvent};

pub const DEFAULT_WINDOW: u64 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nearby {
    pub event: RefactoringEvent,
    pub gap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CooccurrenceRecord {
    pub rename: RenameEvent,
    /// Gap 0 (same commit) up to `window`.
    pub preceding: Vec<Nearby>,
    /// Gap 1 up to `window`.
    pub following: Vec<Nearby>,
    pub window: u64,
}

impl CooccurrenceRecord {
    pub fn has_any(&self) -> bool {
        !self.preceding.is_empty() || !self.following.is_empty()
    }
}

fn sort_nearby(list: &mut [Nearby]) {
    list.sort_by(|a, b| {
        (a.gap, &a.event.refactoring_type, &a.event.commit_id)
            .cmp(&(b.gap, &b.event.refactoring_type, &b.event.commit_id))
    });
}

/// One record per rename, in input order.
pub fn correlate(
    renames: &[RenameEvent],
    refs: &[RefactoringEvent],
    window: u64,
) -> Result<Vec<CooccurrenceRecord>> {
    if window < 1 {
        return Err(Error::InvalidParameter(format!("window must be at least 1, got {window}")));
    }
    let mut by_element: HashMap<&str, Vec<&RefactoringEvent>> = HashMap::new();
    for r in refs {
        by_element.entry(r.element_id.as_str()).or_default().push(r);
    }
    let records = renames
        .iter()
        .map(|rename| {
            let at = rename.commit_index;
            let mut preceding = Vec::new();
            let mut following = Vec::new();
            for r in by_element.get(rename.element_id.as_str()).into_iter().flatten() {
                if r.commit_index <= at && at - r.commit_index <= window {
                    preceding.push(Nearby { event: (*r).clone(), gap: at - r.commit_index });
                } else if r.commit_index > at && r.commit_index - at <= window {
                    following.push(Nearby { event: (*r).clone(), gap: r.commit_index - at });
                }
            }
            sort_nearby(&mut preceding);
            sort_nearby(&mut following);
            CooccurrenceRecord { rename: rename.clone(), preceding, following, window }
        })
        .collect();
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Preceding,
    Following,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Preceding => "preceding",
            Direction::Following => "following",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCount {
    pub refactoring_type: String,
    pub direction: Direction,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub renames: usize,
    pub renames_with_cooccurrence: usize,
    pub renames_with_preceding: usize,
    pub renames_with_following: usize,
    /// `renames_with_cooccurrence / renames`, 0 for no renames.
    pub cooccurrence_fraction: f64,
    /// Sorted by type name, preceding before following; zero rows omitted.
    pub by_type: Vec<TypeCount>,
    pub preceding_gaps: BTreeMap<u64, usize>,
    pub following_gaps: BTreeMap<u64, usize>,
}

pub fn summarize(records: &[CooccurrenceRecord]) -> Summary {
    let mut s = Summary { renames: records.len(), ..Summary::default() };
    let mut counts: BTreeMap<(&str, Direction), usize> = BTreeMap::new();
    for r in records {
        s.renames_with_cooccurrence += usize::from(r.has_any());
        s.renames_with_preceding += usize::from(!r.preceding.is_empty());
        s.renames_with_following += usize::from(!r.following.is_empty());
        for (dir, list, gaps) in [
            (Direction::Preceding, &r.preceding, &mut s.preceding_gaps),
            (Direction::Following, &r.following, &mut s.following_gaps),
        ] {
            for n in list {
                *counts.entry((n.event.refactoring_type.as_str(), dir)).or_default() += 1;
                *gaps.entry(n.gap).or_default() += 1;
            }
        }
    }
    if s.renames > 0 {
        s.cooccurrence_fraction = s.renames_with_cooccurrence as f64 / s.renames as f64;
    }
    s.by_type = counts
        .into_iter()
        .map(|((t, direction), count)| TypeCount { refactoring_type: t.to_string(), direction, count })
        .collect();
    s
}

/// Render rows as left-aligned columns separated by two spaces.
pub fn aligned_columns(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

impl Summary {
    pub fn to_table(&self) -> String {
        let mut rows = vec![
            vec!["renames".to_string(), self.renames.to_string()],
            vec!["with co-occurrence".to_string(), self.renames_with_cooccurrence.to_string()],
            vec!["with preceding".to_string(), self.renames_with_preceding.to_string()],
            vec!["with following".to_string(), self.renames_with_following.to_string()],
            vec!["fraction".to_string(), format!("{:.4}", self.cooccurrence_fraction)],
        ];
        let mut out = aligned_columns(&rows);
        rows = vec![vec!["refactoring_type".into(), "direction".into(), "count".into()]];
        rows.extend(self.by_type.iter().map(|t| {
            vec![t.refactoring_type.clone(), t.direction.as_str().into(), t.count.to_string()]
        }));
        out.push('\n');
        out.push_str(&aligned_columns(&rows));
        rows = vec![vec!["direction".into(), "gap".into(), "count".into()]];
        for (dir, gaps) in [(Direction::Preceding, &self.preceding_gaps), (Direction::Following, &self.following_gaps)] {
            rows.extend(gaps.iter().map(|(g, c)| vec![dir.as_str().into(), g.to_string(), c.to_string()]));
        }
        out.push('\n');
        out.push_str(&aligned_columns(&rows));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ElementKind;
    use proptest::prelude::*;

    fn rename(element: &str, at: u64) -> RenameEvent {
        RenameEvent {
            element_id: element.into(),
            element_kind: ElementKind::Class,
            old_name: "JsonViewResult".into(),
            new_name: "JsonView".into(),
            commit_id: format!("r{at}"),
            commit_index: at,
            message: String::new(),
        }
    }

    fn refactoring(element: &str, kind: &str, at: u64) -> RefactoringEvent {
        RefactoringEvent {
            element_id: element.into(),
            refactoring_type: kind.into(),
            commit_id: format!("c{at}"),
            commit_index: at,
        }
    }

    #[test]
    fn move_then_rename() {
        let recs = correlate(&[rename("E", 10)], &[refactoring("E", "MoveClass", 9)], 5).unwrap();
        assert_eq!(recs[0].preceding.len(), 1);
        assert_eq!(recs[0].preceding[0].event.refactoring_type, "MoveClass");
        assert_eq!(recs[0].preceding[0].gap, 1);
        assert!(recs[0].following.is_empty());
    }

    #[test]
    fn outside_window_or_other_element() {
        let recs = correlate(&[rename("E", 10)], &[refactoring("E", "X", 3)], 5).unwrap();
        assert!(!recs[0].has_any());
        let recs = correlate(&[rename("E", 10)], &[refactoring("F", "X", 12)], 5).unwrap();
        assert!(!recs[0].has_any());
    }

    #[test]
    fn same_commit_is_preceding_gap_zero() {
        let recs = correlate(&[rename("E", 4)], &[refactoring("E", "MoveClass", 4)], 1).unwrap();
        assert_eq!(recs[0].preceding[0].gap, 0);
    }

    #[test]
    fn window_must_be_positive() {
        assert!(matches!(correlate(&[], &[], 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn summaries() {
        let empty = summarize(&[]);
        assert_eq!(empty.renames, 0);
        assert_eq!(empty.cooccurrence_fraction, 0.0);
        assert!(empty.by_type.is_empty());

        let recs = correlate(&[rename("E", 10)], &[refactoring("E", "MoveClass", 9)], 5).unwrap();
        let s = summarize(&recs);
        assert_eq!(
            s.by_type,
            vec![TypeCount { refactoring_type: "MoveClass".into(), direction: Direction::Preceding, count: 1 }]
        );
        assert_eq!(s.cooccurrence_fraction, 1.0);
        let table = s.to_table();
        assert!(table.contains("MoveClass         preceding  1"), "{table}");
    }

    fn arb_stream() -> impl Strategy<Value = (Vec<RenameEvent>, Vec<RefactoringEvent>)> {
        let elements = prop::sample::select(vec!["A", "B", "C"]);
        let kinds = prop::sample::select(vec!["MoveClass", "ExtractMethod", "RenameClass"]);
        (
            prop::collection::vec((elements.clone(), 0u64..30), 0..8),
            prop::collection::vec((elements, kinds, 0u64..30), 0..20),
        )
            .prop_map(|(rs, fs)| {
                (
                    rs.into_iter().map(|(e, i)| rename(e, i)).collect(),
                    fs.into_iter().map(|(e, k, i)| refactoring(e, k, i)).collect(),
                )
            })
    }

    proptest! {
        #[test]
        fn window_monotone((renames, refs) in arb_stream(), w in 1u64..10) {
            let small = correlate(&renames, &refs, w).unwrap();
            let large = correlate(&renames, &refs, w + 1).unwrap();
            for (s, l) in small.iter().zip(&large) {
                for n in &s.preceding {
                    prop_assert!(l.preceding.contains(n));
                }
                for n in &s.following {
                    prop_assert!(l.following.contains(n));
                }
            }
        }

        #[test]
        fn lists_match_the_predicate((renames, refs) in arb_stream(), w in 1u64..10) {
            for rec in correlate(&renames, &refs, w).unwrap() {
                let at = rec.rename.commit_index;
                let expect_pre = refs.iter().filter(|r| {
                    r.element_id == rec.rename.element_id && r.commit_index <= at && at - r.commit_index <= w
                }).count();
                let expect_fol = refs.iter().filter(|r| {
                    r.element_id == rec.rename.element_id && r.commit_index > at && r.commit_index - at <= w
                }).count();
                prop_assert_eq!(rec.preceding.len(), expect_pre);
                prop_assert_eq!(rec.following.len(), expect_fol);
                for n in &rec.preceding {
                    prop_assert!(n.gap <= w && n.event.commit_index + n.gap == at);
                }
                for n in &rec.following {
                    prop_assert!(n.gap >= 1 && n.gap <= w && at + n.gap == n.event.commit_index);
                }
                prop_assert!(rec.preceding.windows(2).all(|p| p[0].gap <= p[1].gap));
                prop_assert!(rec.following.windows(2).all(|p| p[0].gap <= p[1].gap));
            }
        }

        #[test]
        fn summary_conserves_counts((renames, refs) in arb_stream(), w in 1u64..10) {
            let recs = correlate(&renames, &refs, w).unwrap();
            let s = summarize(&recs);
            let listed: usize = recs.iter().map(|r| r.preceding.len() + r.following.len()).sum();
            prop_assert_eq!(s.by_type.iter().map(|t| t.count).sum::<usize>(), listed);
            let hist: usize = s.preceding_gaps.values().chain(s.following_gaps.values()).sum();
            prop_assert_eq!(hist, listed);
            prop_assert_eq!(s.renames, renames.len());
        }
    }
}
