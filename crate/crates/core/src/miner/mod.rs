//! Git history ingestion, rename detection and refactoring event files.

mod detect;
mod diff;
mod events;
mod git;

pub use detect::{detect_renames, is_keyword, line_rename, tokenize};
pub use diff::{parse_git_log, parse_unified_diff, CommitRecord, DiffLine, FileDiff, Hunk, LineKind};
pub use events::{
    load_refactorings, load_renames, parse_refactorings, parse_renames, write_jsonl,
    RefactoringEvent, RenameEvent,
};
pub use git::ingest_history;
