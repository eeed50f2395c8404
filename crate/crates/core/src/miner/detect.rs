use std::collections::BTreeSet;

use super::diff::{CommitRecord, LineKind};
use super::events::RenameEvent;
use crate::ident::{split, ElementKind};

const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
    "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while", "true", "false", "null", "var", "record", "yield",
];

pub fn is_keyword(token: &str) -> bool {
    JAVA_KEYWORDS.contains(&token)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$'
}

/// Split a source line into identifier, number, string-literal and
/// single-character punctuation tokens. Whitespace is dropped.
pub fn tokenize(line: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        let mut end = start + c.len_utf8();
        if is_ident_start(c) || c.is_ascii_digit() {
            while let Some(&(i, d)) = chars.peek() {
                if !is_ident_char(d) {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
        } else if c == '"' || c == '\'' {
            let mut escaped = false;
            for (i, d) in chars.by_ref() {
                end = i + d.len_utf8();
                if escaped {
                    escaped = false;
                } else if d == '\\' {
                    escaped = true;
                } else if d == c {
                    break;
                }
            }
        }
        tokens.push(&line[start..end]);
    }
    tokens
}

fn is_identifier(token: &str) -> bool {
    token.chars().next().is_some_and(is_ident_start)
        && token.chars().all(is_ident_char)
        && !is_keyword(token)
        && split(token).is_ok()
}

/// A single-token rename between two lines, if there is one.
pub fn line_rename(old: &str, new: &str) -> Option<(ElementKind, String, String)> {
    let a = tokenize(old);
    let b = tokenize(new);
    if a.len() != b.len() {
        return None;
    }
    let mut diffs = (0..a.len()).filter(|&i| a[i] != b[i]);
    let i = diffs.next()?;
    if diffs.next().is_some() || !is_identifier(a[i]) || !is_identifier(b[i]) {
        return None;
    }
    let kind = if old.contains("class ") {
        ElementKind::Class
    } else if a.get(i + 1) == Some(&"(") {
        ElementKind::Method
    } else {
        ElementKind::Variable
    };
    Some((kind, a[i].to_string(), b[i].to_string()))
}

/// Heuristic rename candidates: positionally paired removed/added lines in
/// each change block that differ in exactly one identifier token.
pub fn detect_renames(commits: &[CommitRecord]) -> Vec<RenameEvent> {
    let mut found: Vec<(u64, String, usize, RenameEvent)> = Vec::new();
    for commit in commits {
        let index = commit.commit_index as u64;
        for file in &commit.diffs {
            let path = file.path();
            for hunk in &file.hunks {
                let mut removed = Vec::new();
                let mut added = Vec::new();
                let mut lines = hunk.lines.iter().peekable();
                while lines.peek().is_some() {
                    removed.clear();
                    added.clear();
                    while let Some(l) = lines.next_if(|l| l.kind != LineKind::Context) {
                        match l.kind {
                            LineKind::Removed => removed.push(l),
                            _ => added.push(l),
                        }
                    }
                    for (r, a) in removed.iter().zip(&added) {
                        if let Some((kind, old, new)) = line_rename(&r.text, &a.text) {
                            found.push((
                                index,
                                path.to_string(),
                                r.old_line.unwrap_or(0),
                                RenameEvent {
                                    element_id: format!("{path}:{old}"),
                                    element_kind: kind,
                                    old_name: old,
                                    new_name: new,
                                    commit_id: commit.commit_id.clone(),
                                    commit_index: index,
                                    message: commit.message.clone(),
                                },
                            ));
                        }
                    }
                    lines.next_if(|l| l.kind == LineKind::Context);
                }
            }
        }
    }
    found.sort_by(|x, y| (x.0, &x.1, x.2, &x.3).cmp(&(y.0, &y.1, y.2, &y.3)));
    let mut seen = BTreeSet::new();
    found
        .into_iter()
        .filter(|(i, path, _, e)| seen.insert((*i, path.clone(), e.old_name.clone(), e.new_name.clone())))
        .map(|(_, _, _, e)| e)
        .collect()
}
