//! Commit-message topic models: preprocessing and collapsed Gibbs LDA.
//!
//! Sampling uses xoshiro256** seeded through splitmix64, with uniforms built
//! from the top 53 bits of each output, so a seed gives the same model on
//! every platform.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::classify::{Category, SemanticChange};
use crate::error::{read_file, Error, Result};
use crate::lexicon::Lexicon;
use crate::miner::RenameEvent;

pub const DEFAULT_K: usize = 5;
pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_BETA: f64 = 0.01;
pub const DEFAULT_TOP_N: usize = 10;
/// Categories with fewer messages than this are not fitted.
pub const MIN_DOCUMENTS: usize = 5;

pub fn default_alpha(k: usize) -> f64 {
    50.0 / k as f64
}

static BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// One word per line; `#` starts a comment. Words are lowercased.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn bundled_stopwords() -> BTreeSet<String> {
    parse_stopwords(BUNDLED_STOPWORDS)
}

pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    Ok(parse_stopwords(&read_file(path)?))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Vec<String>>,
    /// Sorted, unique.
    pub vocabulary: Vec<String>,
    pub category_of: Option<Vec<Category>>,
}

impl Corpus {
    pub fn from_documents(documents: Vec<Vec<String>>) -> Self {
        let vocabulary: BTreeSet<&String> = documents.iter().flatten().collect();
        let vocabulary = vocabulary.into_iter().cloned().collect();
        Corpus { documents, vocabulary, category_of: None }
    }

    pub fn token_count(&self) -> usize {
        self.documents.iter().map(Vec::len).sum()
    }
}

fn clean_tokens<'a>(
    message: &'a str,
    stopwords: &'a BTreeSet<String>,
    lex: &'a Lexicon,
) -> impl Iterator<Item = String> + 'a {
    message
        .split(|c: char| !c.is_alphanumeric())
        .map(str::to_lowercase)
        .filter(|t| t.chars().count() >= 2 && !stopwords.contains(t))
        .map(|t| lex.stem(&t))
        .filter(|t| t.chars().count() >= 2 && !stopwords.contains(t))
}

/// Lowercase, split on non-alphanumerics, drop short tokens and stopwords,
/// stem. Empty messages stay as empty documents.
pub fn preprocess(messages: &[&str], stopwords: &BTreeSet<String>, lex: &Lexicon) -> Corpus {
    Corpus::from_documents(
        messages
            .iter()
            .map(|m| clean_tokens(m, stopwords, lex).collect())
            .collect(),
    )
}

struct Sampler(Xoshiro256StarStar);

impl Sampler {
    fn new(seed: u64) -> Self {
        Sampler(Xoshiro256StarStar::seed_from_u64(seed))
    }

    /// Uniform in [0, 1).
    fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, n).
    fn below(&mut self, n: usize) -> usize {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub vocabulary: Vec<String>,
    /// Word ids per document.
    pub documents: Vec<Vec<usize>>,
    pub assignments: Vec<Vec<usize>>,
    pub topic_word_counts: Vec<Vec<usize>>,
    pub doc_topic_counts: Vec<Vec<usize>>,
    pub topic_totals: Vec<usize>,
    /// Joint log-likelihood after the first sweep, if any sweep ran.
    pub first_sweep_log_likelihood: Option<f64>,
}

pub fn fit_lda(
    corpus: &Corpus,
    k: usize,
    alpha: f64,
    beta: f64,
    iterations: usize,
    seed: u64,
) -> Result<TopicModel> {
    if k < 1 {
        return Err(Error::InvalidParameter("topic count must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "priors must be positive and finite (alpha {alpha}, beta {beta})"
        )));
    }
    if corpus.token_count() == 0 {
        return Err(Error::InvalidParameter("corpus has no tokens".into()));
    }
    let index: BTreeMap<&str, usize> = corpus
        .vocabulary
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let documents: Vec<Vec<usize>> = corpus
        .documents
        .iter()
        .map(|d| d.iter().map(|w| index[w.as_str()]).collect())
        .collect();
    let v = corpus.vocabulary.len();
    let mut rng = Sampler::new(seed);
    let mut model = TopicModel {
        k,
        alpha,
        beta,
        seed,
        iterations,
        vocabulary: corpus.vocabulary.clone(),
        assignments: documents
            .iter()
            .map(|d| d.iter().map(|_| rng.below(k)).collect())
            .collect(),
        documents,
        topic_word_counts: vec![vec![0; v]; k],
        doc_topic_counts: Vec::new(),
        topic_totals: vec![0; k],
        first_sweep_log_likelihood: None,
    };
    let (tw, dt, tt) = model.recount();
    model.topic_word_counts = tw;
    model.doc_topic_counts = dt;
    model.topic_totals = tt;

    let v_beta = v as f64 * beta;
    let mut weights = vec![0.0; k];
    for sweep in 0..iterations {
        for d in 0..model.documents.len() {
            for i in 0..model.documents[d].len() {
                let w = model.documents[d][i];
                let old = model.assignments[d][i];
                model.doc_topic_counts[d][old] -= 1;
                model.topic_word_counts[old][w] -= 1;
                model.topic_totals[old] -= 1;

                let mut total = 0.0;
                for (t, weight) in weights.iter_mut().enumerate() {
                    total += (model.doc_topic_counts[d][t] as f64 + alpha)
                        * (model.topic_word_counts[t][w] as f64 + beta)
                        / (model.topic_totals[t] as f64 + v_beta);
                    *weight = total;
                }
                let u = rng.uniform() * total;
                let new = weights.iter().position(|&c| u < c).unwrap_or(k - 1);

                model.assignments[d][i] = new;
                model.doc_topic_counts[d][new] += 1;
                model.topic_word_counts[new][w] += 1;
                model.topic_totals[new] += 1;
            }
        }
        if sweep == 0 {
            model.first_sweep_log_likelihood = Some(model.log_likelihood());
        }
    }
    Ok(model)
}

impl TopicModel {
    /// Count matrices rebuilt from the assignments.
    pub fn recount(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<usize>) {
        let mut tw = vec![vec![0; self.vocabulary.len()]; self.k];
        let mut dt = vec![vec![0; self.k]; self.documents.len()];
        let mut tt = vec![0; self.k];
        for (d, (words, topics)) in self.documents.iter().zip(&self.assignments).enumerate() {
            for (&w, &t) in words.iter().zip(topics) {
                tw[t][w] += 1;
                dt[d][t] += 1;
                tt[t] += 1;
            }
        }
        (tw, dt, tt)
    }

    pub fn counts_consistent(&self) -> bool {
        let (tw, dt, tt) = self.recount();
        tw == self.topic_word_counts && dt == self.doc_topic_counts && tt == self.topic_totals
    }

    pub fn topic_word_distribution(&self, topic: usize) -> Vec<f64> {
        let denom = self.topic_totals[topic] as f64 + self.vocabulary.len() as f64 * self.beta;
        self.topic_word_counts[topic]
            .iter()
            .map(|&c| (c as f64 + self.beta) / denom)
            .collect()
    }

    pub fn doc_topic_distribution(&self, doc: usize) -> Vec<f64> {
        let len = self.documents[doc].len() as f64;
        let denom = len + self.k as f64 * self.alpha;
        self.doc_topic_counts[doc]
            .iter()
            .map(|&c| (c as f64 + self.alpha) / denom)
            .collect()
    }

    /// log p(w, z) with the topic-word and document-topic distributions
    /// integrated out.
    pub fn log_likelihood(&self) -> f64 {
        let v = self.vocabulary.len() as f64;
        let k = self.k as f64;
        let (a, b) = (self.alpha, self.beta);
        let mut ll = k * (ln_gamma(v * b) - v * ln_gamma(b));
        for t in 0..self.k {
            ll += self.topic_word_counts[t]
                .iter()
                .map(|&c| ln_gamma(c as f64 + b))
                .sum::<f64>();
            ll -= ln_gamma(self.topic_totals[t] as f64 + v * b);
        }
        for (d, row) in self.doc_topic_counts.iter().enumerate() {
            ll += ln_gamma(k * a) - k * ln_gamma(a);
            ll += row.iter().map(|&c| ln_gamma(c as f64 + a)).sum::<f64>();
            ll -= ln_gamma(self.documents[d].len() as f64 + k * a);
        }
        ll
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermWeight {
    pub term: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTerms {
    pub topic: usize,
    pub terms: Vec<TermWeight>,
}

/// The `n` most probable terms of every topic, ties broken by term.
pub fn top_terms(model: &TopicModel, n: usize) -> Result<Vec<TopicTerms>> {
    let v = model.vocabulary.len();
    if n < 1 || n > v {
        return Err(Error::InvalidParameter(format!("n must be in 1..={v}, got {n}")));
    }
    Ok((0..model.k)
        .map(|t| {
            let dist = model.topic_word_distribution(t);
            let counts = &model.topic_word_counts[t];
            let mut ids: Vec<usize> = (0..v).collect();
            // equal counts give equal weights, so rank on the integers
            ids.sort_by(|&x, &y| counts[y].cmp(&counts[x]).then(x.cmp(&y)));
            TopicTerms {
                topic: t,
                terms: ids[..n]
                    .iter()
                    .map(|&w| TermWeight { term: model.vocabulary[w].clone(), weight: dist[w] })
                    .collect(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicParams {
    pub k: usize,
    /// Defaults to 50 / k.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub top_n: usize,
}

impl Default for TopicParams {
    fn default() -> Self {
        TopicParams {
            k: DEFAULT_K,
            alpha: None,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            seed: 0,
            top_n: DEFAULT_TOP_N,
        }
    }
}

/// A fitted category serializes as its topic array; an unfitted one as
/// `{"insufficient_data": true, "documents": n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryTopics {
    Fitted(Vec<TopicTerms>),
    InsufficientData { insufficient_data: bool, documents: usize },
}

/// Fit one model per dominant category over the rename commit messages.
pub fn topics_by_category(
    renames: &[RenameEvent],
    changes: &[SemanticChange],
    stopwords: &BTreeSet<String>,
    lex: &Lexicon,
    params: &TopicParams,
) -> Result<BTreeMap<Category, CategoryTopics>> {
    if renames.len() != changes.len() {
        return Err(Error::InvalidParameter(format!(
            "{} renames but {} classifications",
            renames.len(),
            changes.len()
        )));
    }
    let mut groups: BTreeMap<Category, Vec<&str>> = BTreeMap::new();
    for (r, c) in renames.iter().zip(changes) {
        groups.entry(c.dominant).or_default().push(r.message.as_str());
    }
    let alpha = params.alpha.unwrap_or_else(|| default_alpha(params.k.max(1)));
    let mut out = BTreeMap::new();
    for (category, messages) in groups {
        let mut corpus = preprocess(&messages, stopwords, lex);
        let report = if messages.len() < MIN_DOCUMENTS || corpus.token_count() == 0 {
            CategoryTopics::InsufficientData { insufficient_data: true, documents: messages.len() }
        } else {
            corpus.category_of = Some(vec![category; messages.len()]);
            let model = fit_lda(&corpus, params.k, alpha, params.beta, params.iterations, params.seed)?;
            let n = params.top_n.clamp(1, corpus.vocabulary.len());
            CategoryTopics::Fitted(top_terms(&model, n)?)
        };
        out.insert(category, report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(ws: &[&str]) -> BTreeSet<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn preprocess_examples() {
        let lex = Lexicon::empty();
        let c = preprocess(&["Cleaned up some file names"], &words(&["up", "some"]), &lex);
        assert_eq!(c.documents, vec![vec!["clean", "file", "name"]]);
        assert_eq!(c.vocabulary, vec!["clean", "file", "name"]);
        let c = preprocess(&["", "the the the"], &words(&["the"]), &lex);
        assert_eq!(c.documents, vec![Vec::<String>::new(), vec![]]);
    }

    #[test]
    fn stemmed_stopwords_are_dropped() {
        let c = preprocess(&["doing x-ray fixes"], &words(&["do"]), &Lexicon::empty());
        assert_eq!(c.documents[0], vec!["rai", "fix"]);
    }

    #[test]
    fn stopword_file() {
        let s = parse_stopwords("# header\nThe\n  and # trailing\n\n");
        assert_eq!(s, words(&["the", "and"]));
        let bundled = bundled_stopwords();
        assert!(bundled.len() > 140 && bundled.contains("the"));
    }

    fn corpus(docs: &[&str]) -> Corpus {
        Corpus::from_documents(
            docs.iter()
                .map(|d| d.split_whitespace().map(String::from).collect())
                .collect(),
        )
    }

    #[test]
    fn single_topic() {
        let c = corpus(&["a a b", "b c", ""]);
        for seed in [0, 1, 99] {
            let m = fit_lda(&c, 1, 0.5, 0.01, 5, seed).unwrap();
            assert!(m.assignments.iter().flatten().all(|&t| t == 0));
        }
        let m = fit_lda(&corpus(&["a a b"]), 1, 0.5, 0.01, 10, 3).unwrap();
        let top = top_terms(&m, 2).unwrap();
        assert_eq!(top[0].terms[0].term, "a");
        assert!(top[0].terms[0].weight > top[0].terms[1].weight);
    }

    #[test]
    fn parameter_errors() {
        let c = corpus(&["a b"]);
        assert!(fit_lda(&c, 0, 1.0, 0.1, 1, 0).is_err());
        assert!(fit_lda(&c, 2, 0.0, 0.1, 1, 0).is_err());
        assert!(fit_lda(&c, 2, 1.0, -1.0, 1, 0).is_err());
        assert!(fit_lda(&corpus(&["", ""]), 2, 1.0, 0.1, 1, 0).is_err());
        let m = fit_lda(&c, 2, 1.0, 0.1, 1, 0).unwrap();
        assert!(top_terms(&m, 0).is_err());
        assert!(top_terms(&m, 3).is_err());
    }

    #[test]
    fn empty_category_map() {
        let out = topics_by_category(&[], &[], &BTreeSet::new(), &Lexicon::empty(), &TopicParams::default());
        assert!(out.unwrap().is_empty());
    }

    fn arb_corpus() -> impl Strategy<Value = Corpus> {
        let word = prop::sample::select(vec!["a", "b", "c", "d", "e", "f"]);
        prop::collection::vec(prop::collection::vec(word, 0..8), 1..8).prop_filter_map(
            "needs a token",
            |docs| {
                let c = Corpus::from_documents(
                    docs.into_iter().map(|d| d.into_iter().map(String::from).collect()).collect(),
                );
                (c.token_count() > 0).then_some(c)
            },
        )
    }

    proptest! {
        #[test]
        fn model_invariants(c in arb_corpus(), k in 1usize..5, iters in 0usize..6, seed in any::<u64>()) {
            let m = fit_lda(&c, k, 0.5, 0.1, iters, seed).unwrap();
            prop_assert!(m.counts_consistent());
            prop_assert!(m.assignments.iter().flatten().all(|&t| t < k));
            for (d, row) in m.doc_topic_counts.iter().enumerate() {
                prop_assert_eq!(row.iter().sum::<usize>(), c.documents[d].len());
                let s: f64 = m.doc_topic_distribution(d).iter().sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
            for t in 0..k {
                let s: f64 = m.topic_word_distribution(t).iter().sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
            let again = fit_lda(&c, k, 0.5, 0.1, iters, seed).unwrap();
            prop_assert_eq!(&again.assignments, &m.assignments);
            for t in top_terms(&m, c.vocabulary.len()).unwrap() {
                let s: f64 = t.terms.iter().map(|w| w.weight).sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
        }
    }
}
