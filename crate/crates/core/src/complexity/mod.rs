//! Word, utterance, turn and dialog complexity.
//!
//! Word scores come from the word class (domain term 1, common word 0.5,
//! stop word 0, noise configurable). An utterance averages its word scores
//! over all tokens, a turn averages its utterances (optionally weighted by
//! dialog act), and a dialog mixes mean turn complexity (content) with its
//! length relative to the corpus maximum (structure).

mod report;

pub use report::{
    score_corpus, score_corpus_against, score_corpus_serial, ComplexityReport, Histogram, Level, LevelSummary, ScoredTurn,
    ScoredUtterance, HISTOGRAM_BINS,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dialog, Turn, Utterance};
use crate::error::{Error, Result};
use crate::lexicon::{tokens, Lexicon, WordClass};

/// Dialog-act tags treated as purely social in restaurant-booking data.
pub const SOCIAL_DIALOG_ACTS: [&str; 4] = ["welcome-msg", "bye", "hello", "thankyou"];

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComplexityConfig {
    /// Weight of the content component of dialog complexity.
    pub w1: f64,
    /// Weight of the structure component; `w1 + w2` must be 1.
    pub w2: f64,
    pub noise_score: f64,
    pub da_weights: BTreeMap<String, f64>,
    pub da_default_weight: f64,
    pub empty_utterance_score: f64,
}

impl Default for ComplexityConfig {
    fn default() -> Self {
        ComplexityConfig {
            w1: 0.5,
            w2: 0.5,
            noise_score: 0.0,
            da_weights: BTreeMap::new(),
            da_default_weight: 1.0,
            empty_utterance_score: 0.0,
        }
    }
}

impl ComplexityConfig {
    pub fn with_weights(w1: f64, w2: f64) -> Result<Self> {
        let cfg = ComplexityConfig {
            w1,
            w2,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Zero weight for the social dialog acts, 1 for everything else.
    pub fn with_social_acts_ignored(mut self) -> Self {
        for tag in SOCIAL_DIALOG_ACTS {
            self.da_weights.insert(tag.to_string(), 0.0);
        }
        self.da_default_weight = 1.0;
        self
    }

    pub fn with_da_table(mut self, table: DaWeightTable) -> Self {
        self.da_weights = table.weights;
        self.da_default_weight = table.default;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be in [0, 1], got {v}")))
            }
        };
        unit("w1", self.w1)?;
        unit("w2", self.w2)?;
        unit("noise_score", self.noise_score)?;
        unit("da_default_weight", self.da_default_weight)?;
        unit("empty_utterance_score", self.empty_utterance_score)?;
        for (tag, w) in &self.da_weights {
            unit(&format!("dialog-act weight {tag:?}"), *w)?;
        }
        if (self.w1 + self.w2 - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::invalid(format!(
                "w1 + w2 must equal 1, got {} + {}",
                self.w1, self.w2
            )));
        }
        Ok(())
    }

    /// Weight for an utterance's dialog act; untagged or unknown tags get the default.
    pub fn da_weight(&self, tag: Option<&str>) -> f64 {
        tag.and_then(|t| self.da_weights.get(t).copied())
            .unwrap_or(self.da_default_weight)
    }
}

/// Dialog-act weight file: `{"tag": weight, ..., "_default": weight}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DaWeightTable {
    pub weights: BTreeMap<String, f64>,
    pub default: f64,
}

impl DaWeightTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut weights: BTreeMap<String, f64> = serde_json::from_str(text)?;
        let default = weights.remove("_default").unwrap_or(1.0);
        for (tag, w) in weights.iter().chain(std::iter::once((&"_default".to_string(), &default))) {
            if !(0.0..=1.0).contains(w) {
                return Err(Error::invalid(format!("dialog-act weight {tag:?} must be in [0, 1], got {w}")));
            }
        }
        Ok(DaWeightTable { weights, default })
    }
}

pub fn word_complexity(class: WordClass, config: &ComplexityConfig) -> f64 {
    match class {
        WordClass::DomainSpecific => 1.0,
        WordClass::CommonEnglish => 0.5,
        WordClass::StopWord => 0.0,
        WordClass::Noise => config.noise_score,
    }
}

/// Mean word complexity over every token of `text`, stop and noise words included.
pub fn text_complexity(text: &str, lexicon: &Lexicon, config: &ComplexityConfig) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for tok in tokens(text) {
        sum += word_complexity(lexicon.classify(&tok), config);
        n += 1;
    }
    if n == 0 {
        config.empty_utterance_score
    } else {
        sum / n as f64
    }
}

pub fn utterance_complexity(u: &Utterance, lexicon: &Lexicon, config: &ComplexityConfig) -> f64 {
    text_complexity(&u.text, lexicon, config)
}

pub fn turn_complexity(t: &Turn, lexicon: &Lexicon, config: &ComplexityConfig) -> f64 {
    let scores: Vec<f64> = t.utterances().iter().map(|u| utterance_complexity(u, lexicon, config)).collect();
    mean_of(&scores)
}

/// Turn complexity with each utterance scaled by its dialog-act weight.
pub fn weighted_turn_complexity(t: &Turn, lexicon: &Lexicon, config: &ComplexityConfig) -> f64 {
    let scores: Vec<f64> = t.utterances().iter().map(|u| utterance_complexity(u, lexicon, config)).collect();
    weighted_mean_of(t, &scores, config)
}

fn mean_of(scores: &[f64]) -> f64 {
    scores.iter().sum::<f64>() / scores.len() as f64
}

fn weighted_mean_of(t: &Turn, scores: &[f64], config: &ComplexityConfig) -> f64 {
    let sum: f64 = t
        .utterances()
        .iter()
        .zip(scores)
        .map(|(u, s)| s * config.da_weight(u.dialog_act.as_deref()))
        .sum();
    sum / scores.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDialog {
    pub dialog_id: String,
    pub score: f64,
    /// Mean turn complexity.
    pub content: f64,
    /// Turn count relative to the reference maximum, capped at 1.
    pub structure: f64,
    pub turns: usize,
    /// True when the dialog was longer than the reference maximum.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub clamped: bool,
}

/// Every score computed for one dialog.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DialogScores {
    pub utterances: Vec<f64>,
    pub turns: Vec<f64>,
    pub weighted_turns: Vec<f64>,
    pub dialog: ScoredDialog,
}

/// Scores a dialog against a reference turn maximum.
///
/// Dialogs longer than `max_turns` get a structure component of 1 and are
/// flagged as clamped.
pub fn score_dialog(d: &Dialog, lexicon: &Lexicon, config: &ComplexityConfig, max_turns: usize) -> Result<DialogScores> {
    if max_turns == 0 {
        return Err(Error::invalid("max_turns must be at least 1"));
    }
    let mut utterances = Vec::with_capacity(d.utterance_count());
    let mut turns = Vec::with_capacity(d.turn_count());
    let mut weighted_turns = Vec::with_capacity(d.turn_count());
    for t in d.turns() {
        let start = utterances.len();
        utterances.extend(t.utterances().iter().map(|u| utterance_complexity(u, lexicon, config)));
        let scores = &utterances[start..];
        turns.push(mean_of(scores));
        weighted_turns.push(weighted_mean_of(t, scores, config));
    }

    let n = d.turn_count();
    let content = mean_of(&turns);
    let clamped = n > max_turns;
    if clamped {
        tracing::warn!(dialog = %d.id, turns = n, max_turns, "dialog exceeds reference turn maximum; structure clamped to 1");
    }
    let structure = if clamped { 1.0 } else { n as f64 / max_turns as f64 };
    let score = config.w1 * content + config.w2 * structure;
    Ok(DialogScores {
        utterances,
        turns,
        weighted_turns,
        dialog: ScoredDialog {
            dialog_id: d.id.clone(),
            score,
            content,
            structure,
            turns: n,
            clamped,
        },
    })
}

pub fn dialog_complexity(d: &Dialog, lexicon: &Lexicon, config: &ComplexityConfig, max_turns: usize) -> Result<ScoredDialog> {
    score_dialog(d, lexicon, config, max_turns).map(|s| s.dialog)
}
