use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use namelens::abbrev::{bundled_gold, expand_detailed, load_gold};
use namelens::appraise::{load_config, Appraiser};
use namelens::classify::{classify_with, ClassifyOptions};
use namelens::cooccur::{aligned_columns, correlate, summarize, DEFAULT_WINDOW};
use namelens::miner::{detect_renames, ingest_history, load_refactorings, load_renames};
use namelens::topics::{bundled_stopwords, load_stopwords, topics_by_category, CategoryTopics, TopicParams};
use namelens::{AppraiserConfig, ContextBag, Error, GoldPair, Lexicon};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "namelens", version, about = "Classify identifier renames and appraise names")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Lexicon TSV replacing the bundled one
    #[arg(long, global = true, env = "NAMELENS_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Extra stopwords, added to the bundled list
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,
    /// Abbreviation gold table replacing the bundled one
    #[arg(long, global = true)]
    gold: Option<PathBuf>,
    #[arg(long, global = true)]
    appraiser_config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a rename, or every rename in a JSON-lines file
    Classify {
        #[arg(long, required_unless_present = "batch", requires = "new", conflicts_with = "batch")]
        old: Option<String>,
        #[arg(long, requires = "old")]
        new: Option<String>,
        /// Expand abbreviations before aligning
        #[arg(long)]
        expand: bool,
        /// Source file whose words help expansion
        #[arg(long)]
        context: Option<PathBuf>,
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// Detect single-token renames in a git repository's history
    Mine {
        #[arg(long)]
        repo: PathBuf,
        #[arg(long, default_value_t = usize::MAX, hide_default_value = true)]
        max_commits: usize,
    },
    /// Relate renames to refactorings on the same element
    Cooccur {
        #[arg(long)]
        renames: PathBuf,
        #[arg(long)]
        refactorings: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = clap::value_parser!(u64).range(1..))]
        window: u64,
    },
    /// Fit topic models over rename commit messages per category
    Topics {
        #[arg(long)]
        renames: PathBuf,
        #[arg(long, default_value_t = namelens::topics::DEFAULT_K, value_parser = positive)]
        k: usize,
        #[arg(long, default_value_t = namelens::topics::DEFAULT_ITERATIONS, value_parser = positive)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Document-topic prior; 50/k when omitted
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = namelens::topics::DEFAULT_BETA)]
        beta: f64,
        /// Terms listed per topic
        #[arg(long, default_value_t = namelens::topics::DEFAULT_TOP_N, value_parser = positive)]
        top: usize,
    },
    /// Expand an abbreviation
    Expand {
        #[arg(long)]
        term: String,
        #[arg(long)]
        context: Option<PathBuf>,
    },
    /// Appraise an identifier name
    Appraise {
        #[arg(long)]
        name: String,
        #[arg(long)]
        context: Option<PathBuf>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Git(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn to_value<T: Serialize>(v: &T) -> Outcome<Value> {
    serde_json::to_value(v).map_err(|e| Failure::Internal(e.to_string()))
}

fn pretty(v: &Value) -> String {
    // serde_json maps are ordered by key, so output is stable
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn jsonl(values: &[Value]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

struct Env<'a> {
    config: &'a RunConfig,
}

impl Env<'_> {
    fn lexicon(&self) -> Outcome<Lexicon> {
        Ok(match &self.config.lexicon {
            Some(p) => Lexicon::load(p)?,
            None => Lexicon::bundled(),
        })
    }

    fn gold(&self) -> Outcome<Vec<GoldPair>> {
        Ok(match &self.config.gold {
            Some(p) => load_gold(p)?,
            None => bundled_gold(),
        })
    }

    fn stopwords(&self) -> Outcome<BTreeSet<String>> {
        let mut words = bundled_stopwords();
        if let Some(p) = &self.config.stopwords {
            words.extend(load_stopwords(p)?);
        }
        Ok(words)
    }

    fn appraiser_config(&self) -> Outcome<AppraiserConfig> {
        Ok(match &self.config.appraiser_config {
            Some(p) => load_config(p)?,
            None => AppraiserConfig::default(),
        })
    }
}

fn context_bag(path: Option<&Path>) -> Outcome<ContextBag> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map(|t| ContextBag::harvest(&t))
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => Ok(ContextBag::new()),
    }
}

fn run(cli: &Cli) -> Outcome<String> {
    let env = Env { config: &cli.config };
    let table = cli.config.format == Format::Table;
    match &cli.command {
        Command::Classify { old, new, expand, context, batch } => {
            let lex = env.lexicon()?;
            let gold = env.gold()?;
            let ctx = context_bag(context.as_deref())?;
            let opts = ClassifyOptions { expand: *expand, context: Some(&ctx), gold: &gold };
            let pairs: Vec<(String, String, Option<Value>)> = match (batch, old, new) {
                (Some(path), _, _) => load_renames(path)?
                    .into_iter()
                    .map(|r| Ok((r.old_name.clone(), r.new_name.clone(), Some(to_value(&r)?))))
                    .collect::<Outcome<_>>()?,
                (None, Some(o), Some(n)) => vec![(o.clone(), n.clone(), None)],
                _ => return Err(Failure::Input("classify needs --old and --new, or --batch".into())),
            };
            let mut rows = vec![vec!["old".into(), "new".into(), "dominant".into(), "subkinds".into()]];
            let mut values = Vec::new();
            for (o, n, rename) in &pairs {
                let change = classify_with(o, n, &lex, &opts)?;
                rows.push(vec![
                    o.clone(),
                    n.clone(),
                    change.dominant.to_string(),
                    change.subkinds.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(","),
                ]);
                values.push(match rename {
                    Some(r) => json!({ "rename": r, "change": to_value(&change)? }),
                    None => to_value(&change)?,
                });
            }
            Ok(if table {
                aligned_columns(&rows)
            } else if batch.is_some() {
                jsonl(&values)
            } else {
                pretty(&values[0])
            })
        }
        Command::Mine { repo, max_commits } => {
            let commits = ingest_history(repo, *max_commits)?;
            let events = detect_renames(&commits);
            if table {
                let mut rows = vec![vec![
                    "commit_index".into(),
                    "kind".into(),
                    "old_name".into(),
                    "new_name".into(),
                    "element_id".into(),
                ]];
                rows.extend(events.iter().map(|e| {
                    vec![
                        e.commit_index.to_string(),
                        e.element_kind.to_string(),
                        e.old_name.clone(),
                        e.new_name.clone(),
                        e.element_id.clone(),
                    ]
                }));
                Ok(aligned_columns(&rows))
            } else {
                Ok(jsonl(&events.iter().map(to_value).collect::<Outcome<Vec<_>>>()?))
            }
        }
        Command::Cooccur { renames, refactorings, window } => {
            let renames = load_renames(renames)?;
            let refs = load_refactorings(refactorings)?;
            let records = correlate(&renames, &refs, *window)?;
            let summary = summarize(&records);
            Ok(if table {
                summary.to_table()
            } else {
                pretty(&json!({ "records": to_value(&records)?, "summary": to_value(&summary)? }))
            })
        }
        Command::Topics { renames, k, iters, seed, alpha, beta, top } => {
            if alpha.is_some_and(|a| !(a > 0.0)) || !(*beta > 0.0) {
                return Err(Failure::Input("alpha and beta must be positive".into()));
            }
            let lex = env.lexicon()?;
            let gold = env.gold()?;
            let stop = env.stopwords()?;
            let renames = load_renames(renames)?;
            let opts = ClassifyOptions { expand: false, context: None, gold: &gold };
            let changes = renames
                .iter()
                .map(|r| classify_with(&r.old_name, &r.new_name, &lex, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            let params = TopicParams { k: *k, alpha: *alpha, beta: *beta, iterations: *iters, seed: *seed, top_n: *top };
            let report = topics_by_category(&renames, &changes, &stop, &lex, &params)?;
            if table {
                let mut rows = vec![vec!["category".into(), "topic".into(), "terms".into()]];
                for (cat, topics) in &report {
                    match topics {
                        CategoryTopics::Fitted(ts) => rows.extend(ts.iter().map(|t| {
                            let terms = t.terms.iter().map(|w| format!("{}({:.3})", w.term, w.weight));
                            vec![cat.to_string(), t.topic.to_string(), terms.collect::<Vec<_>>().join(" ")]
                        })),
                        CategoryTopics::InsufficientData { documents, .. } => rows.push(vec![
                            cat.to_string(),
                            "-".into(),
                            format!("insufficient data ({documents} documents)"),
                        ]),
                    }
                }
                Ok(aligned_columns(&rows))
            } else {
                Ok(pretty(&to_value(&report)?))
            }
        }
        Command::Expand { term, context } => {
            let lex = env.lexicon()?;
            let gold = env.gold()?;
            let ctx = context_bag(context.as_deref())?;
            let found = expand_detailed(term, &ctx, &gold, &lex);
            Ok(if table {
                let mut rows = vec![vec!["term".into(), "expansion".into(), "technique".into(), "pattern".into()]];
                rows.push(match &found {
                    Some(e) => vec![
                        term.clone(),
                        e.text.clone(),
                        to_value(&e.technique)?.as_str().unwrap_or("").into(),
                        to_value(&e.pattern)?.as_str().unwrap_or("").into(),
                    ],
                    None => vec![term.clone(), "-".into(), "-".into(), "-".into()],
                });
                aligned_columns(&rows)
            } else {
                pretty(&json!({ "term": term, "expansion": to_value(&found)? }))
            })
        }
        Command::Appraise { name, context } => {
            let lex = env.lexicon()?;
            let gold = env.gold()?;
            let config = env.appraiser_config()?;
            let ctx = context_bag(context.as_deref())?;
            let a = Appraiser { lex: &lex, context: &ctx, gold: &gold, config: &config }.appraise(name)?;
            Ok(if table {
                let flags = a.flags.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join(",");
                let mut rows = vec![
                    vec!["name".into(), a.name.clone()],
                    vec!["score".into(), a.score.to_string()],
                    vec!["flags".into(), flags],
                ];
                rows.extend(a.suggestions.iter().map(|s| vec!["suggestion".into(), format!("{} ({})", s.candidate, s.reason)]));
                aligned_columns(&rows)
            } else {
                pretty(&to_value(&a)?)
            })
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> io::Result<()> {
    match output {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            eprint!("{text}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(text) => match emit(&text, cli.config.output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("namelens: cannot write output: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Input(m)) => {
            eprintln!("namelens: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("namelens: internal error: {m}");
            ExitCode::from(2)
        }
    }
}
