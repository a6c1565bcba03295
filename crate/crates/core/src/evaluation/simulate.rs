//! Allocation simulation: deal scored dialogs to agents under a policy and
//! compare the three agent metrics.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{omega1, omega2, omega3, AgentLedger, HandledDialog};
use crate::complexity::{score_corpus, ComplexityConfig, Level};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Seeded shuffle, then dealt in agent order.
    Random,
    /// Sorted by complexity (ties by dialog id); the lowest block goes to the first agent.
    AscendingComplexity,
}

impl PolicyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Random => "random",
            PolicyKind::AscendingComplexity => "ascending_complexity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    #[serde(default)]
    pub id: Option<String>,
    pub dialogs: usize,
    pub hours: f64,
}

fn default_policies() -> Vec<PolicyKind> {
    vec![PolicyKind::Random, PolicyKind::AscendingComplexity]
}

/// Simulation input. Durations are proportional to dialog word counts and
/// scaled so each agent's dialogs exactly fill its hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub agents: Vec<AgentSpec>,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicyKind>,
    /// Constant C-SAT applied to every dialog.
    pub csat: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SimulationSpec {
    /// Three agents with 300/350/350 dialogs over 30/40/50 hours.
    pub fn three_agents(csat: f64, seed: u64) -> Self {
        SimulationSpec {
            agents: [(300, 30.0), (350, 40.0), (350, 50.0)]
                .into_iter()
                .map(|(dialogs, hours)| AgentSpec { id: None, dialogs, hours })
                .collect(),
            policies: default_policies(),
            csat,
            seed,
        }
    }

    pub fn total_dialogs(&self) -> usize {
        self.agents.iter().map(|a| a.dialogs).sum()
    }

    fn agent_id(&self, i: usize) -> String {
        self.agents[i].id.clone().unwrap_or_else(|| format!("a{}", i + 1))
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::invalid("simulation needs at least one agent"));
        }
        if self.total_dialogs() != n {
            return Err(Error::invalid(format!(
                "agents handle {} dialogs in total but the sample has {n}",
                self.total_dialogs()
            )));
        }
        if !(0.0..=1.0).contains(&self.csat) {
            return Err(Error::invalid(format!("csat must be in [0, 1], got {}", self.csat)));
        }
        if let Some(a) = self.agents.iter().find(|a| a.hours.is_nan() || a.hours <= 0.0) {
            return Err(Error::invalid(format!("agent hours must be positive, got {}", a.hours)));
        }
        Ok(())
    }
}

/// One dialog as the simulation sees it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDialog {
    pub id: String,
    pub complexity: f64,
    pub words: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentScores {
    pub policy: PolicyKind,
    pub agent: String,
    pub dialogs: usize,
    pub hours: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

/// Metrics per policy and agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTable {
    pub rows: Vec<AgentScores>,
}

impl SimulationTable {
    pub fn policy(&self, policy: PolicyKind) -> impl Iterator<Item = &AgentScores> + '_ {
        self.rows.iter().filter(move |r| r.policy == policy)
    }

    /// CSV rows `policy,agent,dialogs,hours,omega1,omega2,omega3`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["policy", "agent", "dialogs", "hours", "omega1", "omega2", "omega3"])?;
        for r in &self.rows {
            w.write_record([
                r.policy.as_str().to_string(),
                r.agent.clone(),
                r.dialogs.to_string(),
                r.hours.to_string(),
                r.omega1.to_string(),
                r.omega2.to_string(),
                r.omega3.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn ledgers_for(items: &[SimDialog], order: &[usize], spec: &SimulationSpec) -> Result<Vec<AgentLedger>> {
    let mut start = 0;
    let mut out = Vec::with_capacity(spec.agents.len());
    for (i, agent) in spec.agents.iter().enumerate() {
        let block = &order[start..start + agent.dialogs];
        start += agent.dialogs;
        // zero-word dialogs count as one word so every dialog takes some time
        let words = |j: usize| items[j].words.max(1) as f64;
        let total_words: f64 = block.iter().map(|&j| words(j)).sum();
        let handled = block
            .iter()
            .map(|&j| HandledDialog {
                dialog_id: items[j].id.clone(),
                complexity: Some(items[j].complexity),
                csat: spec.csat,
                duration: agent.hours * words(j) / total_words,
            })
            .collect();
        out.push(AgentLedger::new(spec.agent_id(i), handled, agent.hours)?);
    }
    Ok(out)
}

pub fn allocation_order(items: &[SimDialog], policy: PolicyKind, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    match policy {
        PolicyKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
        }
        PolicyKind::AscendingComplexity => {
            order.sort_by(|&a, &b| {
                items[a]
                    .complexity
                    .total_cmp(&items[b].complexity)
                    .then_with(|| items[a].id.cmp(&items[b].id))
            });
        }
    }
    order
}

/// Runs every policy of `spec` over pre-scored dialogs.
pub fn simulate_items(items: &[SimDialog], spec: &SimulationSpec) -> Result<SimulationTable> {
    spec.validate(items.len())?;
    let mut rows = Vec::new();
    for &policy in &spec.policies {
        let order = allocation_order(items, policy, spec.seed);
        for (ledger, agent) in ledgers_for(items, &order, spec)?.iter().zip(&spec.agents) {
            rows.push(AgentScores {
                policy,
                agent: ledger.agent_id.clone(),
                dialogs: agent.dialogs,
                hours: agent.hours,
                omega1: omega1(ledger)?,
                omega2: omega2(ledger)?,
                omega3: omega3(ledger)?,
            });
        }
    }
    Ok(SimulationTable { rows })
}

/// Scores the corpus at dialog level and runs the simulation. The corpus
/// must contain exactly as many dialogs as the agents handle.
pub fn simulate_allocation(
    corpus: &Corpus,
    lexicon: &Lexicon,
    config: &ComplexityConfig,
    spec: &SimulationSpec,
) -> Result<SimulationTable> {
    spec.validate(corpus.len())?;
    let report = score_corpus(corpus, lexicon, config, &[Level::Dialog])?;
    let items: Vec<SimDialog> = corpus
        .dialogs()
        .iter()
        .zip(&report.dialogs)
        .map(|(d, s)| SimDialog {
            id: d.id.clone(),
            complexity: s.score,
            words: d.word_count(),
        })
        .collect();
    simulate_items(&items, spec)
}
