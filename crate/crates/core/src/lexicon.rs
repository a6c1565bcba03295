//! Tokenization and the word classes used for word complexity: stop words,
//! common English words, and domain terms mined from a corpus.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, RoleMode};
use crate::error::{Error, Result};

/// File names used for the bundled lists and for `DC_WORDLIST_DIR` overrides.
pub const STOP_WORDS_FILE: &str = "stopwords_en.txt";
pub const COMMON_WORDS_FILE: &str = "common_en.txt";

const BUNDLED_STOP_WORDS: &str = include_str!("../data/stopwords_en.txt");
const BUNDLED_COMMON_WORDS: &str = include_str!("../data/common_en.txt");

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}'..='\u{201F}' | '\u{2026}' | '\u{2013}' | '\u{2014}' | '«' | '»' | '¿' | '¡' | '·'
                | '‹' | '›' | '、' | '。' | '，' | '！' | '？'
        )
}

/// Lazily tokenizes `text`: whitespace split, edge punctuation stripped,
/// lowercased. Intra-token punctuation (`don't`, `apt-get`) is kept.
pub fn tokens(text: &str) -> impl Iterator<Item = Cow<'_, str>> {
    text.split_whitespace().filter_map(|w| {
        let t = w.trim_matches(is_punct);
        if t.is_empty() {
            None
        } else if t.chars().any(char::is_uppercase) {
            Some(Cow::Owned(t.to_lowercase()))
        } else {
            Some(Cow::Borrowed(t))
        }
    })
}

pub fn tokenize(text: &str) -> Vec<String> {
    tokens(text).map(Cow::into_owned).collect()
}

pub fn token_count(text: &str) -> usize {
    tokens(text).count()
}

/// Canonical form of a wordlist entry.
pub fn normalize(token: &str) -> String {
    token.trim().to_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WordClass {
    DomainSpecific,
    CommonEnglish,
    StopWord,
    Noise,
}

impl WordClass {
    pub const ALL: [WordClass; 4] = [
        WordClass::DomainSpecific,
        WordClass::CommonEnglish,
        WordClass::StopWord,
        WordClass::Noise,
    ];
}

/// Word classes for one service domain. The three sets may overlap; lookup
/// applies domain terms first, then common words, then stop words.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub domain: String,
    pub delta: f64,
    stop_words: HashSet<String>,
    common_words: HashSet<String>,
    domain_terms: HashSet<String>,
    /// Largest turn count seen in the corpus the lexicon was built from.
    pub max_turns: Option<usize>,
    /// Role mode of that corpus; used to segment dialogs scored later.
    pub role_mode: Option<RoleMode>,
}

impl Lexicon {
    pub fn new<I, J, K>(domain: impl Into<String>, delta: f64, stop_words: I, common_words: J, domain_terms: K) -> Result<Lexicon>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
        J: IntoIterator,
        J::Item: AsRef<str>,
        K: IntoIterator,
        K::Item: AsRef<str>,
    {
        validate_delta(delta)?;
        Ok(Lexicon {
            domain: domain.into(),
            delta,
            stop_words: normalized_set(stop_words),
            common_words: normalized_set(common_words),
            domain_terms: normalized_set(domain_terms),
            max_turns: None,
            role_mode: None,
        })
    }

    pub fn classify(&self, token: &str) -> WordClass {
        if self.domain_terms.contains(token) {
            WordClass::DomainSpecific
        } else if self.common_words.contains(token) {
            WordClass::CommonEnglish
        } else if self.stop_words.contains(token) {
            WordClass::StopWord
        } else {
            WordClass::Noise
        }
    }

    pub fn stop_words(&self) -> &HashSet<String> {
        &self.stop_words
    }

    pub fn common_words(&self) -> &HashSet<String> {
        &self.common_words
    }

    pub fn domain_terms(&self) -> &HashSet<String> {
        &self.domain_terms
    }

    pub fn from_json(text: &str) -> Result<Lexicon> {
        let file: LexiconFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&LexiconFile::from(self))?)
    }

    pub fn load(path: &Path) -> Result<Lexicon> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lexicon::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }
}

fn normalized_set<I>(items: I) -> HashSet<String>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    items
        .into_iter()
        .map(|s| normalize(s.as_ref()))
        .filter(|s| !s.is_empty())
        .collect()
}

fn validate_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 100.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("delta must be in (0, 100], got {delta}")))
    }
}

/// On-disk lexicon. Word sets are written sorted so files are reproducible.
#[derive(Debug, Serialize, Deserialize)]
struct LexiconFile {
    domain: String,
    delta: f64,
    stop_words: Vec<String>,
    common_words: Vec<String>,
    domain_terms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_turns: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    role_mode: Option<RoleMode>,
}

impl From<&Lexicon> for LexiconFile {
    fn from(lex: &Lexicon) -> Self {
        let sorted = |s: &HashSet<String>| s.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        LexiconFile {
            domain: lex.domain.clone(),
            delta: lex.delta,
            stop_words: sorted(&lex.stop_words),
            common_words: sorted(&lex.common_words),
            domain_terms: sorted(&lex.domain_terms),
            max_turns: lex.max_turns,
            role_mode: lex.role_mode,
        }
    }
}

impl TryFrom<LexiconFile> for Lexicon {
    type Error = Error;

    fn try_from(f: LexiconFile) -> Result<Lexicon> {
        let mut lex = Lexicon::new(f.domain, f.delta, f.stop_words, f.common_words, f.domain_terms)?;
        lex.max_turns = f.max_turns;
        lex.role_mode = f.role_mode;
        Ok(lex)
    }
}

/// Classifies a normalized token. Precedence: domain term, common word, stop word.
pub fn classify_word(token: &str, lexicon: &Lexicon) -> WordClass {
    lexicon.classify(token)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermMethod {
    Tf,
    TfIdf,
}

impl FromStr for TermMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tf" => Ok(TermMethod::Tf),
            "tfidf" | "tf-idf" => Ok(TermMethod::TfIdf),
            other => Err(format!("unknown term method {other:?}")),
        }
    }
}

impl fmt::Display for TermMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermMethod::Tf => "tf",
            TermMethod::TfIdf => "tfidf",
        })
    }
}

/// Terms sorted by descending score, ties broken lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRanking {
    terms: Vec<(String, f64)>,
}

impl TermRanking {
    pub fn from_scores(scores: impl IntoIterator<Item = (String, f64)>) -> TermRanking {
        let mut terms: Vec<(String, f64)> = scores.into_iter().collect();
        terms.sort_by(|a, b| match b.1.total_cmp(&a.1) {
            Ordering::Equal => a.0.cmp(&b.0),
            o => o,
        });
        TermRanking { terms }
    }

    pub fn terms(&self) -> &[(String, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Keeps the top `ceil(delta% * len)` terms.
    pub fn truncate_percent(mut self, delta: f64) -> Result<TermRanking> {
        validate_delta(delta)?;
        let n = self.terms.len();
        // the epsilon absorbs representation error such as 30% of 10 = 3.0000000000000004
        let keep = ((delta * n as f64) / 100.0 - 1e-9).ceil().clamp(0.0, n as f64) as usize;
        self.terms.truncate(keep);
        Ok(self)
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> + '_ {
        self.terms.iter().map(|(t, _)| t.as_str())
    }
}

#[derive(Default)]
struct Counts {
    tf: HashMap<String, u64>,
    df: HashMap<String, u64>,
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        for (k, v) in other.tf {
            *self.tf.entry(k).or_default() += v;
        }
        for (k, v) in other.df {
            *self.df.entry(k).or_default() += v;
        }
        self
    }
}

/// Ranks candidate domain terms over the whole corpus and keeps the top
/// `delta` percent of distinct non-stop tokens.
///
/// TF is the corpus-wide token count. TF-IDF treats each dialog as a document
/// and scores `tf * ln(n_dialogs / (1 + df))`, floored at zero.
pub fn extract_domain_terms(
    corpus: &Corpus,
    method: TermMethod,
    delta: f64,
    stop_words: &HashSet<String>,
) -> Result<TermRanking> {
    validate_delta(delta)?;
    let counts = corpus
        .dialogs()
        .par_iter()
        .map(|d| {
            let mut c = Counts::default();
            for u in d.utterances() {
                for tok in tokens(&u.text) {
                    if stop_words.contains(tok.as_ref()) {
                        continue;
                    }
                    *c.tf.entry(tok.into_owned()).or_default() += 1;
                }
            }
            c.df = c.tf.keys().map(|k| (k.clone(), 1)).collect();
            c
        })
        .reduce(Counts::default, Counts::merge);

    if counts.tf.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let n_docs = corpus.len() as f64;
    let ranking = match method {
        TermMethod::Tf => TermRanking::from_scores(counts.tf.into_iter().map(|(t, f)| (t, f as f64))),
        TermMethod::TfIdf => {
            let df = counts.df;
            TermRanking::from_scores(counts.tf.into_iter().map(|(t, f)| {
                let idf = (n_docs / (1.0 + df[&t] as f64)).ln();
                let score = (f as f64 * idf).max(0.0);
                (t, score)
            }))
        }
    };
    ranking.truncate_percent(delta)
}

/// Extracts domain terms and packages them with the given wordlists. The
/// corpus turn maximum and role mode are recorded for later scoring.
pub fn build_lexicon(
    corpus: &Corpus,
    method: TermMethod,
    delta: f64,
    stop_words: HashSet<String>,
    common_words: HashSet<String>,
) -> Result<Lexicon> {
    let ranking = extract_domain_terms(corpus, method, delta, &stop_words)?;
    let mut lex = Lexicon::new(corpus.domain(), delta, stop_words, common_words, ranking.tokens())?;
    lex.max_turns = Some(corpus.max_turns());
    lex.role_mode = Some(corpus.role_mode());
    Ok(lex)
}

/// Fraction of domain terms that are also common English words. Lower values
/// mean a more specialized domain.
pub fn domain_specialization(lexicon: &Lexicon) -> Result<f64> {
    let ds = lexicon.domain_terms();
    if ds.is_empty() {
        return Err(Error::EmptyDomainTerms);
    }
    let overlap = ds.iter().filter(|t| lexicon.common_words().contains(*t)).count();
    Ok(overlap as f64 / ds.len() as f64)
}

/// Parses a wordlist: one token per line, `#` starts a comment line.
pub fn parse_wordlist(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(normalize)
        .collect()
}

pub fn read_wordlist(path: &Path) -> Result<HashSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_wordlist(&text))
}

/// Reads the stop-word and common-word lists.
pub fn load_wordlists(stop_path: &Path, common_path: &Path) -> Result<(HashSet<String>, HashSet<String>)> {
    Ok((read_wordlist(stop_path)?, read_wordlist(common_path)?))
}

pub fn default_stop_words() -> HashSet<String> {
    parse_wordlist(BUNDLED_STOP_WORDS)
}

pub fn default_common_words() -> HashSet<String> {
    parse_wordlist(BUNDLED_COMMON_WORDS)
}

/// Loads both lists from `dir` if given, otherwise the bundled defaults.
pub fn wordlists_from_dir(dir: Option<&Path>) -> Result<(HashSet<String>, HashSet<String>)> {
    match dir {
        Some(d) => load_wordlists(&d.join(STOP_WORDS_FILE), &d.join(COMMON_WORDS_FILE)),
        None => Ok((default_stop_words(), default_common_words())),
    }
}
