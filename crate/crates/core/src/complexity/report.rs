use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{score_dialog, ComplexityConfig, DialogScores, ScoredDialog};
use crate::corpus::{Corpus, Role};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

pub const HISTOGRAM_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Utterance,
    Turn,
    WeightedTurn,
    Dialog,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Utterance, Level::Turn, Level::WeightedTurn, Level::Dialog];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Utterance => "utterance",
            Level::Turn => "turn",
            Level::WeightedTurn => "weighted_turn",
            Level::Dialog => "dialog",
        }
    }

    /// Parses a comma-separated list such as `utterance,dialog`.
    pub fn parse_set(s: &str) -> Result<Vec<Level>> {
        let mut out: Vec<Level> = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<Level>().map_err(Error::invalid))
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::invalid("empty level set"));
        }
        Ok(out)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "utterance" => Ok(Level::Utterance),
            "turn" => Ok(Level::Turn),
            "weighted_turn" | "weighted-turn" => Ok(Level::WeightedTurn),
            "dialog" => Ok(Level::Dialog),
            other => Err(format!("unknown level {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredUtterance {
    pub dialog_id: String,
    pub index: usize,
    pub role: Role,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredTurn {
    pub dialog_id: String,
    pub index: usize,
    pub score: f64,
}

/// Fixed-width bins over [0, 1]; a value of exactly 1 falls in the last bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn unit(values: impl IntoIterator<Item = f64>, bins: usize) -> Histogram {
        let mut counts = vec![0u64; bins];
        for v in values {
            let b = ((v * bins as f64).floor() as isize).clamp(0, bins as isize - 1) as usize;
            counts[b] += 1;
        }
        Histogram { lo: 0.0, hi: 1.0, counts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub count: usize,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub histogram: Histogram,
}

impl LevelSummary {
    pub fn of(values: &[f64]) -> LevelSummary {
        let n = values.len();
        let (mean, variance, min, max) = if n == 0 {
            (0.0, 0.0, 0.0, 0.0)
        } else {
            let mean = values.iter().sum::<f64>() / n as f64;
            let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (mean, variance, min, max)
        };
        LevelSummary {
            count: n,
            mean,
            variance,
            min,
            max,
            histogram: Histogram::unit(values.iter().copied(), HISTOGRAM_BINS),
        }
    }
}

/// Scores of one corpus at the requested levels plus per-level summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub domain: String,
    /// Turn maximum used for the structure component.
    pub max_turns: usize,
    pub levels: Vec<Level>,
    #[serde(default)]
    pub utterances: Vec<ScoredUtterance>,
    #[serde(default)]
    pub turns: Vec<ScoredTurn>,
    #[serde(default)]
    pub weighted_turns: Vec<ScoredTurn>,
    #[serde(default)]
    pub dialogs: Vec<ScoredDialog>,
    pub summary: BTreeMap<Level, LevelSummary>,
}

impl ComplexityReport {
    /// Raw scores at `level`, in corpus order.
    pub fn scores(&self, level: Level) -> Vec<f64> {
        match level {
            Level::Utterance => self.utterances.iter().map(|u| u.score).collect(),
            Level::Turn => self.turns.iter().map(|t| t.score).collect(),
            Level::WeightedTurn => self.weighted_turns.iter().map(|t| t.score).collect(),
            Level::Dialog => self.dialogs.iter().map(|d| d.score).collect(),
        }
    }

    pub fn mean(&self, level: Level) -> Option<f64> {
        self.summary.get(&level).map(|s| s.mean)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// CSV rows `unit_id,level,score,content,structure`; content and structure
    /// are filled only for dialog rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["unit_id", "level", "score", "content", "structure"])?;
        for u in &self.utterances {
            w.write_record([format!("{}#u{}", u.dialog_id, u.index), "utterance".into(), u.score.to_string(), String::new(), String::new()])?;
        }
        for (level, list) in [(Level::Turn, &self.turns), (Level::WeightedTurn, &self.weighted_turns)] {
            for t in list {
                w.write_record([format!("{}#t{}", t.dialog_id, t.index), level.to_string(), t.score.to_string(), String::new(), String::new()])?;
            }
        }
        for d in &self.dialogs {
            w.write_record([d.dialog_id.clone(), "dialog".into(), d.score.to_string(), d.content.to_string(), d.structure.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn assemble(corpus: &Corpus, per_dialog: Vec<DialogScores>, levels: &[Level], max_turns: usize) -> ComplexityReport {
    let mut levels = levels.to_vec();
    levels.sort();
    levels.dedup();
    let want = |l: Level| levels.contains(&l);

    let mut report = ComplexityReport {
        domain: corpus.domain().to_string(),
        max_turns,
        levels: levels.clone(),
        utterances: Vec::new(),
        turns: Vec::new(),
        weighted_turns: Vec::new(),
        dialogs: Vec::new(),
        summary: BTreeMap::new(),
    };
    for (d, s) in corpus.dialogs().iter().zip(per_dialog) {
        if want(Level::Utterance) {
            report.utterances.extend(d.utterances().zip(&s.utterances).map(|(u, &score)| ScoredUtterance {
                dialog_id: d.id.clone(),
                index: u.index,
                role: u.role,
                score,
            }));
        }
        let turn_rows = |scores: &[f64]| {
            scores
                .iter()
                .enumerate()
                .map(|(i, &score)| ScoredTurn {
                    dialog_id: d.id.clone(),
                    index: i,
                    score,
                })
                .collect::<Vec<_>>()
        };
        if want(Level::Turn) {
            report.turns.extend(turn_rows(&s.turns));
        }
        if want(Level::WeightedTurn) {
            report.weighted_turns.extend(turn_rows(&s.weighted_turns));
        }
        if want(Level::Dialog) {
            report.dialogs.push(s.dialog);
        }
    }
    for &l in &levels {
        report.summary.insert(l, LevelSummary::of(&report.scores(l)));
    }
    report
}

/// Scores every dialog of the corpus in parallel. The turn maximum is taken
/// from this corpus; results are merged in corpus order, so the report is
/// identical to [`score_corpus_serial`].
pub fn score_corpus(corpus: &Corpus, lexicon: &Lexicon, config: &ComplexityConfig, levels: &[Level]) -> Result<ComplexityReport> {
    score_corpus_against(corpus, lexicon, config, levels, corpus.max_turns())
}

/// Like [`score_corpus`] with an external turn maximum, e.g. the one stored
/// in a lexicon built from historical data. Longer dialogs are clamped.
pub fn score_corpus_against(
    corpus: &Corpus,
    lexicon: &Lexicon,
    config: &ComplexityConfig,
    levels: &[Level],
    max_turns: usize,
) -> Result<ComplexityReport> {
    config.validate()?;
    let per_dialog = corpus
        .dialogs()
        .par_iter()
        .map(|d| score_dialog(d, lexicon, config, max_turns))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(corpus, per_dialog, levels, max_turns))
}

pub fn score_corpus_serial(corpus: &Corpus, lexicon: &Lexicon, config: &ComplexityConfig, levels: &[Level]) -> Result<ComplexityReport> {
    config.validate()?;
    let max_turns = corpus.max_turns();
    let per_dialog = corpus
        .dialogs()
        .iter()
        .map(|d| score_dialog(d, lexicon, config, max_turns))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(corpus, per_dialog, levels, max_turns))
}
