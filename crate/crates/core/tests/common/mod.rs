#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

pub fn git(dir: &Path, args: &[&str]) {
    let out = Command::new("git")
        .arg("-C")
        .arg(dir)
        .args(["-c", "commit.gpgsign=false", "-c", "init.defaultBranch=main"])
        .args(args)
        .env("GIT_CONFIG_GLOBAL", "/dev/null")
        .env("GIT_CONFIG_NOSYSTEM", "1")
        .env("GIT_AUTHOR_NAME", "Fixture")
        .env("GIT_AUTHOR_EMAIL", "fixture@example.com")
        .env("GIT_COMMITTER_NAME", "Fixture")
        .env("GIT_COMMITTER_EMAIL", "fixture@example.com")
        .env("GIT_AUTHOR_DATE", "2020-01-01T00:00:00Z")
        .env("GIT_COMMITTER_DATE", "2020-01-01T00:00:00Z")
        .output()
        .expect("git runs");
    assert!(
        out.status.success(),
        "git {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

pub fn init_repo() -> TempDir {
    let dir = TempDir::new().unwrap();
    git(dir.path(), &["init", "-q"]);
    dir
}

pub fn commit_file(dir: &Path, name: &str, content: &str, message: &str) {
    fs::write(dir.join(name), content).unwrap();
    git(dir, &["add", name]);
    git(dir, &["commit", "-q", "-m", message]);
}

/// Apply successive edits to one file, committing after each.
pub fn commit_versions(dir: &Path, name: &str, versions: &[(&str, String)]) {
    for (message, content) in versions {
        commit_file(dir, name, content, message);
    }
}

const BASE: &str = "public class JsonViewResult {
    private int userCnt;
    private String msgText;
    private int idx;
    void scanPorts() {
        int a = b;
        log(count, total);
    }
    int hdrLen;
}
";

/// (old, new) of every single-token rename planted by `planted_repo`.
pub const PLANTED: [(&str, &str); 5] = [
    ("JsonViewResult", "JsonView"),
    ("userCnt", "userCount"),
    ("scanPorts", "scanWellKnownPorts"),
    ("msgText", "messageText"),
    ("idx", "index"),
];

/// A repository with five single-token renames and three multi-token edits.
pub fn planted_repo() -> TempDir {
    let dir = init_repo();
    let mut text = BASE.to_string();
    let mut versions = vec![("Initial import".to_string(), text.clone())];
    let steps: [(&str, &[(&str, &str)]); 7] = [
        ("Rename class", &[("class JsonViewResult", "class JsonView")]),
        ("Spell out count", &[("int userCnt", "int userCount")]),
        ("Tweak locals", &[("int a = b;", "int c = d;")]),
        (
            "Clarify scan",
            &[("scanPorts()", "scanWellKnownPorts()"), ("log(count, total)", "log(sum, all)")],
        ),
        ("Expand msg", &[("msgText", "messageText")]),
        ("Widen header", &[("int hdrLen;", "long headerLength;")]),
        ("Index rename", &[("int idx;", "int index;")]),
    ];
    for (message, edits) in steps {
        for (from, to) in edits {
            assert!(text.contains(from), "{from}");
            text = text.replacen(from, to, 1);
        }
        versions.push((message.to_string(), text.clone()));
    }
    let refs: Vec<(&str, String)> = versions.iter().map(|(m, t)| (m.as_str(), t.clone())).collect();
    commit_versions(dir.path(), "Repo.java", &refs);
    dir
}

/// Word `w` of generating topic `t`.
pub fn topic_word(t: usize, w: usize) -> String {
    const STEMS: [&str; 3] = ["net", "disk", "view"];
    format!("{}{}", STEMS[t], (b'a' + w as u8) as char)
}

/// 300 documents of 20 tokens, document `d` drawn from topic `d % 3`'s
/// ten-word vocabulary.
pub fn synthetic_corpus(seed: u64) -> namelens::topics::Corpus {
    use rand_core::{RngCore, SeedableRng};
    let mut rng = rand_xoshiro::Xoshiro256StarStar::seed_from_u64(seed);
    let docs = (0..300)
        .map(|d| (0..20).map(|_| topic_word(d % 3, (rng.next_u64() % 10) as usize)).collect())
        .collect();
    namelens::topics::Corpus::from_documents(docs)
}

/// Fraction of the listed top words that come from the majority generating
/// topic of their fitted topic, and whether the majorities are distinct.
pub fn purity(tops: &[namelens::topics::TopicTerms], n: usize) -> (f64, bool) {
    let mut hits = 0;
    let mut majorities = std::collections::BTreeSet::new();
    for t in tops {
        let mut counts = [0usize; 3];
        for w in t.terms.iter().take(n) {
            if let Some(g) = (0..3).find(|&g| (0..10).any(|i| topic_word(g, i) == w.term)) {
                counts[g] += 1;
            }
        }
        let (g, best) = counts.iter().enumerate().max_by_key(|(_, c)| **c).unwrap();
        hits += best;
        majorities.insert(g);
    }
    (hits as f64 / (tops.len() * n) as f64, majorities.len() == tops.len())
}
