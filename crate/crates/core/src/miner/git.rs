use std::collections::HashSet;
use std::path::Path;
use std::process::{Command, Output};

use super::diff::{parse_git_log, CommitRecord};
use crate::error::{Error, Result};

fn git(repo: &Path, args: &[&str]) -> Result<Output> {
    Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(args)
        .output()
        .map_err(|e| Error::Git(format!("failed to run git: {e}")))
}

fn checked(out: Output, what: &str) -> Result<String> {
    if !out.status.success() {
        let diag = String::from_utf8_lossy(&out.stderr);
        return Err(Error::Git(format!("{what} failed: {}", diag.trim())));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Read first-parent history, oldest first, keeping at most `max_commits`
/// of the oldest commits. Merge commits carry no diffs.
pub fn ingest_history(repo: &Path, max_commits: usize) -> Result<Vec<CommitRecord>> {
    if !repo.is_dir() {
        return Err(Error::NotARepository(repo.to_path_buf()));
    }
    let probe = git(repo, &["rev-parse", "--git-dir"])?;
    if !probe.status.success() {
        return Err(Error::NotARepository(repo.to_path_buf()));
    }
    if !git(repo, &["rev-parse", "--verify", "--quiet", "HEAD"])?.status.success() {
        return Ok(Vec::new());
    }
    let log = checked(
        git(
            repo,
            &[
                "log",
                "--first-parent",
                "--reverse",
                "--unified=0",
                "--pretty=format:%H%x1f%ct%x1f%B%x1e",
                "--patch",
                "--no-color",
            ],
        )?,
        "git log",
    )?;
    let merges: HashSet<String> = checked(
        git(repo, &["rev-list", "--first-parent", "--merges", "HEAD"])?,
        "git rev-list",
    )?
    .lines()
    .map(str::to_string)
    .collect();

    let mut commits = parse_git_log(&log)?;
    commits.truncate(max_commits);
    for c in &mut commits {
        if merges.contains(&c.commit_id) {
            c.diffs.clear();
        }
    }
    Ok(commits)
}
