//! Deterministic synthetic corpora over a small fixed vocabulary.
//!
//! Every generator is a pure function of its seed and parameters. Used by the
//! examples, tests and benchmarks where real service transcripts are not
//! available.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{Corpus, Dialog, Role, RoleMode, Utterance};
use crate::error::Result;
use crate::lexicon::Lexicon;

pub const DOMAIN: &str = "synth";

pub const STOP: [&str; 16] = [
    "the", "a", "is", "it", "to", "and", "of", "in", "for", "on", "my", "you", "i", "we", "this", "that",
];
pub const COMMON: [&str; 16] = [
    "food", "cheap", "price", "area", "north", "order", "help", "time", "phone", "email", "account", "number", "change",
    "open", "close", "today",
];
pub const DOMAIN_TERMS: [&str; 16] = [
    "sudo", "kernel", "adduser", "grub", "partition", "ssh", "daemon", "apt", "chmod", "mount", "router", "firmware",
    "driver", "proxy", "dns", "cron",
];
/// Tokens in none of the three lists.
pub const NOISE: [&str; 8] = ["zxq", "blorp", "qwv", "fnord", "xyzzy", "plugh", "vrk", "mmph"];

/// Dialog acts drawn by the random generator, social ones included.
pub const DIALOG_ACTS: [&str; 8] = ["inform", "request", "confirm", "offer", "welcome-msg", "bye", "hello", "thankyou"];

/// Lexicon over the fixed vocabulary.
pub fn lexicon() -> Lexicon {
    Lexicon::new(DOMAIN, 50.0, STOP, COMMON, DOMAIN_TERMS).expect("fixed vocabulary is valid")
}

fn any_word(rng: &mut ChaCha8Rng) -> &'static str {
    let list: &[&'static str] = match rng.gen_range(0..10) {
        0..=3 => &STOP,
        4..=6 => &COMMON,
        7..=8 => &DOMAIN_TERMS,
        _ => &NOISE,
    };
    list.choose(rng).unwrap()
}

fn sentence(rng: &mut ChaCha8Rng, len: usize) -> String {
    (0..len).map(|_| any_word(rng)).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCorpusParams {
    pub dialogs: usize,
    /// Turn counts are drawn from `1..=max_turns`.
    pub max_turns: usize,
    /// Utterance token counts are drawn from `0..=max_tokens` (0 only when `allow_empty`).
    pub max_tokens: usize,
    pub allow_empty: bool,
    pub role_mode: RoleMode,
    /// Probability that an utterance carries a dialog-act tag.
    pub tag_rate: f64,
}

impl Default for RandomCorpusParams {
    fn default() -> Self {
        RandomCorpusParams {
            dialogs: 50,
            max_turns: 12,
            max_tokens: 20,
            allow_empty: false,
            role_mode: RoleMode::TwoRole,
            tag_rate: 0.5,
        }
    }
}

fn random_utterance(rng: &mut ChaCha8Rng, p: &RandomCorpusParams, speaker: &str, role: Role) -> Utterance {
    let min = if p.allow_empty { 0 } else { 1 };
    let len = rng.gen_range(min..=p.max_tokens.max(min));
    let u = Utterance::new(speaker, role, sentence(rng, len));
    if rng.gen_bool(p.tag_rate) {
        u.with_dialog_act(*DIALOG_ACTS.choose(rng).unwrap())
    } else {
        u
    }
}

/// One random dialog with the requested number of turns.
pub fn random_dialog(rng: &mut ChaCha8Rng, id: &str, turns: usize, p: &RandomCorpusParams) -> Dialog {
    let mut utts = Vec::new();
    for _ in 0..turns {
        match p.role_mode {
            RoleMode::TwoRole => {
                // each turn opens with a customer burst and closes with an agent burst
                for _ in 0..rng.gen_range(1..=2) {
                    utts.push(random_utterance(rng, p, "c", Role::Customer));
                }
                for _ in 0..rng.gen_range(1..=2) {
                    utts.push(random_utterance(rng, p, "a", Role::Agent));
                }
            }
            RoleMode::SingleRole => {
                let speaker = format!("p{}", rng.gen_range(0..4));
                utts.push(random_utterance(rng, p, &speaker, Role::PortalUser));
            }
        }
    }
    Dialog::from_utterances(id, DOMAIN, utts, p.role_mode).expect("generated dialog is non-empty")
}

pub fn random_corpus(seed: u64, p: &RandomCorpusParams) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dialogs = (0..p.dialogs.max(1))
        .map(|i| {
            let turns = rng.gen_range(1..=p.max_turns.max(1));
            random_dialog(&mut rng, &format!("r{i:05}"), turns, p)
        })
        .collect();
    Corpus::new(DOMAIN, dialogs, p.role_mode).expect("generated corpus is non-empty")
}

/// Six well-separated five-basket complexity trajectories: flat low, flat
/// high, rising, falling, peak and valley.
pub const TEMPLATES: [[f64; 5]; 6] = [
    [0.2, 0.2, 0.2, 0.2, 0.2],
    [0.8, 0.8, 0.8, 0.8, 0.8],
    [0.2, 0.35, 0.5, 0.65, 0.8],
    [0.8, 0.65, 0.5, 0.35, 0.2],
    [0.2, 0.5, 0.8, 0.5, 0.2],
    [0.8, 0.5, 0.2, 0.5, 0.8],
];

/// Tokens per planted utterance; scores are multiples of `1 / PLANTED_TOKENS`.
pub const PLANTED_TOKENS: usize = 100;

/// Utterance of `PLANTED_TOKENS` tokens scoring `round(c * 100) / 100`:
/// domain terms followed by stop words.
pub fn planted_utterance(c: f64, speaker: &str) -> Utterance {
    let ds = (c.clamp(0.0, 1.0) * PLANTED_TOKENS as f64).round() as usize;
    let words: Vec<&str> = (0..PLANTED_TOKENS)
        .map(|i| {
            if i < ds {
                DOMAIN_TERMS[i % DOMAIN_TERMS.len()]
            } else {
                STOP[i % STOP.len()]
            }
        })
        .collect();
    Utterance::new(speaker, Role::PortalUser, words.join(" "))
}

/// Single-role corpus of 10-turn dialogs; every template gets
/// `per_template` dialogs whose turn `t` scores `template[t / 2]` plus
/// Gaussian noise with standard deviation `sigma`. Dialog ids are
/// `t{template}-{n}`.
pub fn planted_basket_corpus(seed: u64, per_template: usize, sigma: f64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
    let mut dialogs = Vec::with_capacity(per_template * TEMPLATES.len());
    for n in 0..per_template {
        for (t, template) in TEMPLATES.iter().enumerate() {
            let utts = (0..10)
                .map(|turn| planted_utterance(template[turn / 2] + noise.sample(&mut rng), "p0"))
                .collect();
            let d = Dialog::from_utterances(format!("t{t}-{n}"), DOMAIN, utts, RoleMode::SingleRole).expect("non-empty");
            dialogs.push(d);
        }
    }
    Corpus::new(DOMAIN, dialogs, RoleMode::SingleRole).expect("non-empty")
}

/// A lexicon with `n_terms` generated domain terms (`term0`, `term1`, ...)
/// plus the fixed stop and common lists.
pub fn large_lexicon(n_terms: usize) -> Lexicon {
    let terms: Vec<String> = (0..n_terms).map(|i| format!("term{i}")).collect();
    Lexicon::new(DOMAIN, 50.0, STOP, COMMON, terms).expect("valid")
}

/// Two-role corpus of `n_utterances` utterances with 5 to 25 tokens each
/// (mean 15), drawn from the fixed lists and `n_terms` generated terms.
/// Dialogs hold ten alternating utterances.
pub fn throughput_corpus(seed: u64, n_utterances: usize, n_terms: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dialogs = Vec::with_capacity(n_utterances / 10 + 1);
    let mut remaining = n_utterances.max(1);
    let mut id = 0;
    while remaining > 0 {
        let n = remaining.min(10);
        remaining -= n;
        let utts = (0..n)
            .map(|i| {
                let len = rng.gen_range(5..=25);
                let words: Vec<String> = (0..len)
                    .map(|_| match rng.gen_range(0..3) {
                        0 => format!("term{}", rng.gen_range(0..n_terms.max(1))),
                        _ => any_word(&mut rng).to_string(),
                    })
                    .collect();
                let role = if i % 2 == 0 { Role::Customer } else { Role::Agent };
                Utterance::new(role.as_str(), role, words.join(" "))
            })
            .collect();
        dialogs.push(Dialog::from_utterances(format!("b{id:06}"), DOMAIN, utts, RoleMode::TwoRole).expect("non-empty"));
        id += 1;
    }
    Corpus::new(DOMAIN, dialogs, RoleMode::TwoRole).expect("non-empty")
}

/// The same question/answer pairs twice: once as one-turn dialogs, once
/// concatenated into dialogs of 1 to 8 turns.
pub fn qa_and_mixed(seed: u64, pairs: usize) -> (Corpus, Corpus) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qa_pairs: Vec<(Utterance, Utterance)> = (0..pairs.max(1))
        .map(|_| {
            let q = rng.gen_range(3..15);
            let a = rng.gen_range(5..25);
            (
                Utterance::new("c", Role::Customer, sentence(&mut rng, q)),
                Utterance::new("a", Role::Agent, sentence(&mut rng, a)),
            )
        })
        .collect();

    let qa = qa_pairs
        .iter()
        .enumerate()
        .map(|(i, (q, a))| {
            Dialog::from_utterances(format!("qa{i:04}"), DOMAIN, vec![q.clone(), a.clone()], RoleMode::TwoRole).expect("non-empty")
        })
        .collect();

    let mut mixed = Vec::new();
    let mut rest = &qa_pairs[..];
    while !rest.is_empty() {
        let n = rng.gen_range(1..=8).min(rest.len());
        let utts = rest[..n].iter().flat_map(|(q, a)| [q.clone(), a.clone()]).collect();
        mixed.push(Dialog::from_utterances(format!("mx{:04}", mixed.len()), DOMAIN, utts, RoleMode::TwoRole).expect("non-empty"));
        rest = &rest[n..];
    }
    (
        Corpus::new(DOMAIN, qa, RoleMode::TwoRole).expect("non-empty"),
        Corpus::new(DOMAIN, mixed, RoleMode::TwoRole).expect("non-empty"),
    )
}

/// Two-role corpus where customers use mostly domain terms and agents mostly
/// common and stop words.
pub fn role_corpus(seed: u64, dialogs: usize) -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(dialogs);
    for i in 0..dialogs.max(1) {
        let mut utts = Vec::new();
        for _ in 0..rng.gen_range(2..8) {
            let q: Vec<&str> = (0..rng.gen_range(3..10))
                .map(|_| if rng.gen_bool(0.7) { *DOMAIN_TERMS.choose(&mut rng).unwrap() } else { any_word(&mut rng) })
                .collect();
            let a: Vec<&str> = (0..rng.gen_range(5..20))
                .map(|_| if rng.gen_bool(0.5) { *COMMON.choose(&mut rng).unwrap() } else { *STOP.choose(&mut rng).unwrap() })
                .collect();
            utts.push(Utterance::new("c", Role::Customer, q.join(" ")));
            utts.push(Utterance::new("a", Role::Agent, a.join(" ")));
        }
        out.push(Dialog::from_utterances(format!("hr{i:04}"), DOMAIN, utts, RoleMode::TwoRole)?);
    }
    Corpus::new(DOMAIN, out, RoleMode::TwoRole)
}
