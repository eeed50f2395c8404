use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{read_file, Error, Result};
use crate::ident::{split, ElementKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RenameEvent {
    /// File path and old name, `path:old`.
    pub element_id: String,
    #[serde(default)]
    pub element_kind: ElementKind,
    pub old_name: String,
    pub new_name: String,
    pub commit_id: String,
    pub commit_index: u64,
    #[serde(default)]
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefactoringEvent {
    pub element_id: String,
    pub refactoring_type: String,
    pub commit_id: String,
    pub commit_index: u64,
}

const RENAME_REQUIRED: [&str; 5] = ["element_id", "old_name", "new_name", "commit_id", "commit_index"];
const REFACTORING_REQUIRED: [&str; 4] = ["element_id", "refactoring_type", "commit_id", "commit_index"];

fn parse_jsonl<T: serde::de::DeserializeOwned>(
    text: &str,
    origin: &str,
    required: &[&str],
    mut check: impl FnMut(&T) -> std::result::Result<(), String>,
) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line)
            .map_err(|e| Error::parse(origin, line_no, format!("invalid JSON: {e}")))?;
        let Value::Object(map) = &value else {
            return Err(Error::parse(origin, line_no, "expected a JSON object"));
        };
        if let Some(field) = required.iter().find(|f| !map.contains_key(**f)) {
            return Err(Error::MissingField {
                origin: origin.to_string(),
                line: line_no,
                field: field.to_string(),
            });
        }
        let event: T = serde_json::from_value(value)
            .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
        check(&event).map_err(|m| Error::parse(origin, line_no, m))?;
        out.push(event);
    }
    Ok(out)
}

/// Parse refactoring events from JSON lines, sorted by commit index.
pub fn parse_refactorings(text: &str, origin: &str) -> Result<Vec<RefactoringEvent>> {
    let mut events = parse_jsonl(text, origin, &REFACTORING_REQUIRED, |e: &RefactoringEvent| {
        if e.refactoring_type.trim().is_empty() {
            Err("empty refactoring_type".to_string())
        } else {
            Ok(())
        }
    })?;
    events.sort_by_key(|e| e.commit_index);
    Ok(events)
}

pub fn load_refactorings(path: &Path) -> Result<Vec<RefactoringEvent>> {
    parse_refactorings(&read_file(path)?, &path.display().to_string())
}

/// Parse rename events from JSON lines, keeping file order.
pub fn parse_renames(text: &str, origin: &str) -> Result<Vec<RenameEvent>> {
    parse_jsonl(text, origin, &RENAME_REQUIRED, |e: &RenameEvent| {
        if e.old_name == e.new_name {
            return Err("old_name equals new_name".to_string());
        }
        for name in [&e.old_name, &e.new_name] {
            split(name).map_err(|err| format!("{name:?}: {err}"))?;
        }
        Ok(())
    })
}

pub fn load_renames(path: &Path) -> Result<Vec<RenameEvent>> {
    parse_renames(&read_file(path)?, &path.display().to_string())
}

/// One JSON object per line, keys sorted.
pub fn write_jsonl<T: Serialize, W: Write>(events: &[T], mut out: W) -> std::io::Result<()> {
    for e in events {
        let v = serde_json::to_value(e).map_err(std::io::Error::other)?;
        writeln!(out, "{}", serde_json::to_string(&v).map_err(std::io::Error::other)?)?;
    }
    Ok(())
}
