//! Multi-level complexity measures for service dialogs.
//!
//! Words are classified against a per-domain [`Lexicon`] (stop words, common
//! English, domain terms). Complexity is then aggregated to utterances,
//! turns and dialogs, and used to compare domains, find procedural patterns,
//! compare speaker roles and evaluate agents.

pub mod analysis;
pub mod cli;
pub mod complexity;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod lexicon;
pub mod service;
pub mod synth;

pub use complexity::{score_corpus, ComplexityConfig, ComplexityReport, Level};
pub use corpus::{parse_corpus, Corpus, Dialog, Role, RoleMode, Turn, Utterance};
pub use error::{Error, Result};
pub use lexicon::{build_lexicon, Lexicon, TermMethod, WordClass};
