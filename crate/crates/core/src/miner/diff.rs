//! Parsing of `git log --patch` output and the unified diffs inside it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIT_SEP: char = '\x1f';
const RECORD_SEP: char = '\x1e';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineKind {
    Context,
    Added,
    Removed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffLine {
    pub kind: LineKind,
    pub text: String,
    /// Line number in the old file (removed and context lines).
    pub old_line: Option<usize>,
    /// Line number in the new file (added and context lines).
    pub new_line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hunk {
    pub old_start: usize,
    pub old_len: usize,
    pub new_start: usize,
    pub new_len: usize,
    pub lines: Vec<DiffLine>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDiff {
    /// `None` for added files.
    pub old_path: Option<String>,
    /// `None` for deleted files.
    pub new_path: Option<String>,
    pub hunks: Vec<Hunk>,
}

impl FileDiff {
    /// The path used to identify elements: the old path when there is one.
    pub fn path(&self) -> &str {
        self.old_path
            .as_deref()
            .or(self.new_path.as_deref())
            .unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub commit_id: String,
    /// Position in first-parent order, oldest commit = 0.
    pub commit_index: usize,
    pub timestamp: i64,
    pub message: String,
    pub diffs: Vec<FileDiff>,
}

fn is_commit_id(s: &str) -> bool {
    (4..=64).contains(&s.len()) && s.bytes().all(|b| b.is_ascii_hexdigit())
}

/// Parse the framed output of
/// `git log --pretty=format:%H%x1f%ct%x1f%B%x1e --patch`.
///
/// Each header is `hash US timestamp US body RS`; the patch for that commit
/// follows the record separator and runs until the next header.
pub fn parse_git_log(output: &str) -> Result<Vec<CommitRecord>> {
    let origin = "git log";
    let mut commits = Vec::new();
    let mut chunks = output.split(RECORD_SEP);
    let Some(first) = chunks.next() else {
        return Ok(commits);
    };
    let mut header = first;
    let mut record_no = 1;
    loop {
        if header.trim().is_empty() && commits.is_empty() {
            // no commits at all
            if chunks.clone().next().is_none() {
                return Ok(commits);
            }
        }
        let mut fields = header.trim_start_matches(['\n', '\r']).splitn(3, UNIT_SEP);
        let (Some(id), Some(ts), Some(body)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(origin, record_no, "malformed commit header"));
        };
        let id = id.trim();
        if !is_commit_id(id) {
            return Err(Error::parse(origin, record_no, format!("bad commit id {id:?}")));
        }
        let timestamp: i64 = ts
            .trim()
            .parse()
            .map_err(|_| Error::parse(origin, record_no, format!("bad timestamp {ts:?}")))?;

        let Some(rest) = chunks.next() else {
            return Err(Error::parse(origin, record_no, "unterminated commit header"));
        };
        // the next header starts on the line holding the next unit separator
        let (patch, next_header) = match rest.find(UNIT_SEP) {
            Some(p) => {
                let start = rest[..p].rfind('\n').map_or(0, |n| n + 1);
                (&rest[..start], Some(&rest[start..]))
            }
            None => (rest, None),
        };
        commits.push(CommitRecord {
            commit_id: id.to_string(),
            commit_index: commits.len(),
            timestamp,
            message: body.trim_end().to_string(),
            diffs: parse_unified_diff(patch),
        });
        match next_header {
            Some(h) => {
                header = h;
                record_no += 1;
            }
            None => {
                if chunks.next().is_some() {
                    return Err(Error::parse(origin, record_no + 1, "record without header"));
                }
                return Ok(commits);
            }
        }
    }
}

fn strip_prefix_path(p: &str) -> Option<String> {
    let p = p.trim_end_matches('\r');
    let p = p.split('\t').next().unwrap_or(p);
    let p = p.trim_matches('"');
    if p == "/dev/null" {
        return None;
    }
    let p = p
        .strip_prefix("a/")
        .or_else(|| p.strip_prefix("b/"))
        .unwrap_or(p);
    Some(p.to_string())
}

fn parse_range(s: &str) -> Option<(usize, usize)> {
    let (start, len) = match s.split_once(',') {
        Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
        None => (s.parse().ok()?, 1),
    };
    Some((start, len))
}

/// `@@ -a,b +c,d @@ section`
fn parse_hunk_header(line: &str) -> Option<Hunk> {
    let rest = line.strip_prefix("@@ -")?;
    let (ranges, _) = rest.split_once(" @@")?;
    let (old, new) = ranges.split_once(" +")?;
    let (old_start, old_len) = parse_range(old)?;
    let (new_start, new_len) = parse_range(new)?;
    Some(Hunk {
        old_start,
        old_len,
        new_start,
        new_len,
        lines: Vec::new(),
    })
}

/// Parse the unified diffs of one commit. Unrecognised lines are skipped.
pub fn parse_unified_diff(text: &str) -> Vec<FileDiff> {
    let mut files: Vec<FileDiff> = Vec::new();
    let mut hunk: Option<Hunk> = None;
    // lines still expected in the current hunk (old, new)
    let mut remaining = (0usize, 0usize);
    let mut next_old = 0usize;
    let mut next_new = 0usize;

    fn flush(files: &mut [FileDiff], hunk: &mut Option<Hunk>) {
        if let (Some(h), Some(f)) = (hunk.take(), files.last_mut()) {
            f.hunks.push(h);
        }
    }

    for raw in text.split('\n') {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if hunk.is_some() && (remaining.0 > 0 || remaining.1 > 0) {
            let h = hunk.as_mut().expect("checked");
            let (kind, body) = match line.chars().next() {
                Some('+') => (LineKind::Added, &line[1..]),
                Some('-') => (LineKind::Removed, &line[1..]),
                Some(' ') => (LineKind::Context, &line[1..]),
                Some('\\') => continue,
                // an empty line inside a hunk is an empty context line
                None => (LineKind::Context, ""),
                _ => {
                    flush(&mut files, &mut hunk);
                    remaining = (0, 0);
                    continue;
                }
            };
            let mut dl = DiffLine {
                kind,
                text: body.to_string(),
                old_line: None,
                new_line: None,
            };
            if kind != LineKind::Added {
                dl.old_line = Some(next_old);
                next_old += 1;
                remaining.0 = remaining.0.saturating_sub(1);
            }
            if kind != LineKind::Removed {
                dl.new_line = Some(next_new);
                next_new += 1;
                remaining.1 = remaining.1.saturating_sub(1);
            }
            h.lines.push(dl);
            continue;
        }
        if line.starts_with('\\') {
            continue;
        }
        flush(&mut files, &mut hunk);

        if let Some(rest) = line.strip_prefix("diff --git ") {
            let mut f = FileDiff::default();
            if let Some((a, b)) = rest.split_once(" b/") {
                f.old_path = strip_prefix_path(a);
                f.new_path = strip_prefix_path(&format!("b/{b}"));
            }
            files.push(f);
        } else if let Some(rest) = line.strip_prefix("--- ") {
            if files.is_empty() {
                files.push(FileDiff::default());
            }
            files.last_mut().expect("non-empty").old_path = strip_prefix_path(rest);
        } else if let Some(rest) = line.strip_prefix("+++ ") {
            if files.is_empty() {
                files.push(FileDiff::default());
            }
            files.last_mut().expect("non-empty").new_path = strip_prefix_path(rest);
        } else if let Some(rest) = line.strip_prefix("rename from ") {
            if let Some(f) = files.last_mut() {
                f.old_path = Some(rest.to_string());
            }
        } else if let Some(rest) = line.strip_prefix("rename to ") {
            if let Some(f) = files.last_mut() {
                f.new_path = Some(rest.to_string());
            }
        } else if line.starts_with("@@ ") {
            if let Some(h) = parse_hunk_header(line) {
                if files.is_empty() {
                    files.push(FileDiff::default());
                }
                remaining = (h.old_len, h.new_len);
                next_old = h.old_start;
                next_new = h.new_start;
                hunk = Some(h);
            }
        }
    }
    flush(&mut files, &mut hunk);
    files
}
