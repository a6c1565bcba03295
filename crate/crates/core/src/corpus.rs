//! Dialog data model, JSONL ingestion and turn segmentation.
//!
//! Corpora are read from JSON Lines, one dialog object per line:
//!
//! ```text
//! {"id": "d1", "domain": "restaurant", "utterances": [
//!     {"speaker": "u1", "role": "customer", "text": "cheap chinese food", "dialog_act": "inform"},
//!     {"speaker": "sys", "role": "agent", "text": "the lucky star serves chinese food"}]}
//! ```
//!
//! Turn boundaries are never stored in the file. They are derived by
//! [`segment_turns`] according to the corpus [`RoleMode`].

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::token_count;

/// Speaker role of an utterance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Customer,
    Agent,
    PortalUser,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Customer => "customer",
            Role::Agent => "agent",
            Role::PortalUser => "portal_user",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "customer" => Ok(Role::Customer),
            "agent" => Ok(Role::Agent),
            "portal_user" => Ok(Role::PortalUser),
            other => Err(other.to_string()),
        }
    }
}

/// How utterances are grouped into turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleMode {
    /// Customer/agent dialogs: a turn closes once both roles have spoken.
    TwoRole,
    /// Multi-party or single-role dialogs: every utterance is its own turn.
    SingleRole,
}

impl RoleMode {
    /// Picks single-role mode when any dialog has a portal user or more than
    /// two distinct roles, two-role mode otherwise.
    pub fn infer(records: &[DialogRecord]) -> RoleMode {
        let multi_party = records.iter().any(|r| {
            let roles: BTreeSet<&str> = r.utterances.iter().map(|u| u.role.as_str()).collect();
            roles.len() > 2 || roles.contains(Role::PortalUser.as_str())
        });
        if multi_party {
            RoleMode::SingleRole
        } else {
            RoleMode::TwoRole
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker_id: String,
    pub role: Role,
    pub text: String,
    pub dialog_act: Option<String>,
    /// 0-based position within the dialog.
    pub index: usize,
}

impl Utterance {
    pub fn new(speaker_id: impl Into<String>, role: Role, text: impl Into<String>) -> Self {
        Utterance {
            speaker_id: speaker_id.into(),
            role,
            text: text.into(),
            dialog_act: None,
            index: 0,
        }
    }

    pub fn with_dialog_act(mut self, tag: impl Into<String>) -> Self {
        self.dialog_act = Some(tag.into());
        self
    }

    /// True when the source record carried no text.
    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }
}

/// A non-empty run of utterances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Turn {
    utterances: Vec<Utterance>,
}

impl Turn {
    /// Returns `None` for an empty utterance list.
    pub fn new(utterances: Vec<Utterance>) -> Option<Turn> {
        if utterances.is_empty() {
            None
        } else {
            Some(Turn { utterances })
        }
    }

    pub fn utterances(&self) -> &[Utterance] {
        &self.utterances
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn into_utterances(self) -> Vec<Utterance> {
        self.utterances
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dialog {
    pub id: String,
    pub domain: String,
    turns: Vec<Turn>,
}

impl Dialog {
    /// Assigns utterance indices and segments the utterances into turns.
    pub fn from_utterances(
        id: impl Into<String>,
        domain: impl Into<String>,
        mut utterances: Vec<Utterance>,
        mode: RoleMode,
    ) -> Result<Dialog> {
        let id = id.into();
        if utterances.is_empty() {
            return Err(Error::EmptyDialog(id));
        }
        for (i, u) in utterances.iter_mut().enumerate() {
            u.index = i;
        }
        Ok(Dialog {
            id,
            domain: domain.into(),
            turns: segment_turns(utterances, mode),
        })
    }

    /// Builds a dialog from a wire record. Role strings are validated.
    pub fn from_record(record: DialogRecord, mode: RoleMode) -> Result<Dialog> {
        let mut utterances = Vec::with_capacity(record.utterances.len());
        for u in record.utterances {
            let role = u
                .role
                .parse::<Role>()
                .map_err(|role| Error::UnknownRole { line: 0, role })?;
            utterances.push(Utterance {
                speaker_id: u.speaker,
                role,
                text: u.text,
                dialog_act: u.dialog_act,
                index: 0,
            });
        }
        if mode == RoleMode::TwoRole {
            let roles: BTreeSet<Role> = utterances.iter().map(|u| u.role).collect();
            if roles.len() > 2 {
                return Err(Error::RoleModeMismatch {
                    dialog: record.id,
                    roles: roles.len(),
                });
            }
        }
        Dialog::from_utterances(record.id, record.domain, utterances, mode)
    }

    pub fn to_record(&self) -> DialogRecord {
        DialogRecord {
            id: self.id.clone(),
            domain: self.domain.clone(),
            utterances: self
                .utterances()
                .map(|u| UtteranceRecord {
                    speaker: u.speaker_id.clone(),
                    role: u.role.as_str().to_string(),
                    text: u.text.clone(),
                    dialog_act: u.dialog_act.clone(),
                })
                .collect(),
        }
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    /// Number of turns in the dialog (always at least 1).
    pub fn turn_count(&self) -> usize {
        self.turns.len()
    }

    pub fn utterances(&self) -> impl Iterator<Item = &Utterance> + '_ {
        self.turns.iter().flat_map(|t| t.utterances.iter())
    }

    pub fn utterance_count(&self) -> usize {
        self.turns.iter().map(Turn::len).sum()
    }

    /// Total token count over all utterances.
    pub fn word_count(&self) -> usize {
        self.utterances().map(|u| token_count(&u.text)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corpus {
    domain: String,
    dialogs: Vec<Dialog>,
    role_mode: RoleMode,
}

impl Corpus {
    /// Fails on an empty dialog list or on dialogs from a different domain.
    pub fn new(domain: impl Into<String>, dialogs: Vec<Dialog>, role_mode: RoleMode) -> Result<Corpus> {
        let domain = domain.into();
        if dialogs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if let Some(d) = dialogs.iter().find(|d| d.domain != domain) {
            return Err(Error::DomainMismatch {
                dialog: d.id.clone(),
                expected: domain,
                found: d.domain.clone(),
            });
        }
        Ok(Corpus {
            domain,
            dialogs,
            role_mode,
        })
    }

    pub fn domain(&self) -> &str {
        &self.domain
    }

    pub fn dialogs(&self) -> &[Dialog] {
        &self.dialogs
    }

    pub fn role_mode(&self) -> RoleMode {
        self.role_mode
    }

    pub fn len(&self) -> usize {
        self.dialogs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dialogs.is_empty()
    }

    /// Largest turn count of any dialog in the corpus.
    pub fn max_turns(&self) -> usize {
        self.dialogs.iter().map(Dialog::turn_count).max().unwrap_or(0)
    }

    pub fn utterance_count(&self) -> usize {
        self.dialogs.iter().map(Dialog::utterance_count).sum()
    }

    /// Keeps the dialogs matching `keep`; an empty result is an error.
    pub fn filter(&self, keep: impl Fn(&Dialog) -> bool) -> Result<Corpus> {
        let dialogs: Vec<Dialog> = self.dialogs.iter().filter(|d| keep(d)).cloned().collect();
        Corpus::new(self.domain.clone(), dialogs, self.role_mode)
    }

    /// Subset of dialogs by position, in the given order.
    pub fn select(&self, positions: &[usize]) -> Result<Corpus> {
        let dialogs = positions.iter().map(|&i| self.dialogs[i].clone()).collect();
        Corpus::new(self.domain.clone(), dialogs, self.role_mode)
    }
}

/// Wire form of one utterance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceRecord {
    pub speaker: String,
    pub role: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dialog_act: Option<String>,
}

/// Wire form of one dialog (one JSONL line).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialogRecord {
    pub id: String,
    pub domain: String,
    pub utterances: Vec<UtteranceRecord>,
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// `None` infers the mode from the records (see [`RoleMode::infer`]).
    pub role_mode: Option<RoleMode>,
    /// Abort on the first bad record instead of skipping it.
    pub fail_fast: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedLine {
    pub line: usize,
    pub message: String,
}

/// Warnings collected while reading a corpus.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ParseSummary {
    pub skipped: Vec<SkippedLine>,
    /// Ids of dialogs dropped for having no utterances.
    pub dropped_empty: Vec<String>,
    /// Utterances whose text was empty in the source.
    pub empty_utterances: usize,
}

impl ParseSummary {
    pub fn warning_count(&self) -> usize {
        self.skipped.len() + self.dropped_empty.len()
    }
}

/// Reads a JSONL corpus in skip mode with an explicit role mode.
pub fn parse_corpus<R: BufRead>(input: R, role_mode: RoleMode) -> Result<(Corpus, ParseSummary)> {
    parse_corpus_with(
        input,
        &ParseOptions {
            role_mode: Some(role_mode),
            fail_fast: false,
        },
    )
}

pub fn parse_corpus_with<R: BufRead>(input: R, opts: &ParseOptions) -> Result<(Corpus, ParseSummary)> {
    let mut summary = ParseSummary::default();
    let mut records: Vec<(usize, DialogRecord)> = Vec::new();

    let reject = |summary: &mut ParseSummary, err: Error| -> Result<()> {
        if opts.fail_fast {
            return Err(err);
        }
        let line = match &err {
            Error::Record { line, .. } | Error::UnknownRole { line, .. } => *line,
            _ => 0,
        };
        tracing::warn!("skipping record: {err}");
        summary.skipped.push(SkippedLine {
            line,
            message: err.to_string(),
        });
        Ok(())
    };

    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Record {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<DialogRecord>(&line) {
            Ok(rec) => {
                if let Some(bad) = rec.utterances.iter().find(|u| u.role.parse::<Role>().is_err()) {
                    let err = Error::UnknownRole {
                        line: line_no,
                        role: bad.role.clone(),
                    };
                    reject(&mut summary, err)?;
                    continue;
                }
                records.push((line_no, rec));
            }
            Err(e) => reject(
                &mut summary,
                Error::Record {
                    line: line_no,
                    message: e.to_string(),
                },
            )?,
        }
    }

    let mode = opts.role_mode.unwrap_or_else(|| {
        let recs: Vec<DialogRecord> = records.iter().map(|(_, r)| r.clone()).collect();
        RoleMode::infer(&recs)
    });

    let mut domain: Option<String> = None;
    let mut dialogs = Vec::with_capacity(records.len());
    for (line_no, rec) in records {
        if rec.utterances.is_empty() {
            summary.dropped_empty.push(rec.id);
            continue;
        }
        let expected = domain.get_or_insert_with(|| rec.domain.clone());
        if &rec.domain != expected {
            let err = Error::Record {
                line: line_no,
                message: format!("domain {:?} differs from corpus domain {:?}", rec.domain, expected),
            };
            reject(&mut summary, err)?;
            continue;
        }
        let empties = rec.utterances.iter().filter(|u| u.text.is_empty()).count();
        match Dialog::from_record(rec, mode) {
            Ok(d) => {
                summary.empty_utterances += empties;
                dialogs.push(d);
            }
            Err(e) => reject(
                &mut summary,
                Error::Record {
                    line: line_no,
                    message: e.to_string(),
                },
            )?,
        }
    }
    if !summary.dropped_empty.is_empty() {
        tracing::warn!("dropped {} dialogs without utterances", summary.dropped_empty.len());
    }

    let domain = domain.ok_or(Error::EmptyCorpus)?;
    Ok((Corpus::new(domain, dialogs, mode)?, summary))
}

/// Writes the corpus back as JSONL. Turn structure is not stored.
pub fn write_corpus<W: Write>(corpus: &Corpus, mut out: W) -> Result<()> {
    for d in corpus.dialogs() {
        serde_json::to_writer(&mut out, &d.to_record())?;
        out.write_all(b"\n").map_err(|e| Error::io("<output>", e))?;
    }
    Ok(())
}

/// Groups an ordered utterance sequence into turns.
///
/// Single-role mode yields one turn per utterance. In two-role mode the open
/// turn accepts utterances until two distinct roles have spoken in it; the
/// next utterance then opens a new turn. Same-role bursts stay together and a
/// trailing one-role turn is kept.
pub fn segment_turns(utterances: Vec<Utterance>, mode: RoleMode) -> Vec<Turn> {
    match mode {
        RoleMode::SingleRole => utterances
            .into_iter()
            .map(|u| Turn { utterances: vec![u] })
            .collect(),
        RoleMode::TwoRole => {
            let mut turns = Vec::new();
            let mut current: Vec<Utterance> = Vec::new();
            let mut first_role: Option<Role> = None;
            let mut complete = false;
            for u in utterances {
                if complete {
                    turns.push(Turn {
                        utterances: std::mem::take(&mut current),
                    });
                    first_role = None;
                    complete = false;
                }
                match first_role {
                    None => first_role = Some(u.role),
                    Some(r) if r != u.role => complete = true,
                    Some(_) => {}
                }
                current.push(u);
            }
            if !current.is_empty() {
                turns.push(Turn { utterances: current });
            }
            turns
        }
    }
}

/// Flattens turns back into their utterance sequence.
pub fn flatten_turns(turns: Vec<Turn>) -> Vec<Utterance> {
    turns.into_iter().flat_map(Turn::into_utterances).collect()
}

/// Corpus-level size statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_dialogs: usize,
    pub mean_turns_per_dialog: f64,
    pub mean_utterances_per_turn: f64,
    pub mean_words_per_utterance: f64,
}

pub fn descriptive_stats(corpus: &Corpus) -> CorpusStats {
    let n_dialogs = corpus.len();
    let turns: usize = corpus.dialogs().iter().map(Dialog::turn_count).sum();
    let utterances = corpus.utterance_count();
    let words: usize = corpus.dialogs().iter().map(Dialog::word_count).sum();
    CorpusStats {
        n_dialogs,
        mean_turns_per_dialog: turns as f64 / n_dialogs as f64,
        mean_utterances_per_turn: utterances as f64 / turns as f64,
        mean_words_per_utterance: words as f64 / utterances as f64,
    }
}
