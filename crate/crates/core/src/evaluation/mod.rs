//! Agent evaluation metrics.
//!
//! * `omega1`: mean C-SAT over the dialogs an agent handled.
//! * `omega2`: C-SAT weighted by time spent per dialog, over the agent's total time.
//! * `omega3`: like `omega2` with each dialog additionally weighted by its complexity.
//!
//! With C-SAT and complexity in [0, 1] and handled time not exceeding total
//! time, `omega3 <= omega2 <= handled / total`. `omega2 == omega1 * handled / total`
//! only when C-SAT is constant across the agent's dialogs.

mod simulate;

pub use simulate::{
    simulate_allocation, simulate_items, AgentScores, AgentSpec, PolicyKind, SimDialog, SimulationSpec, SimulationTable,
};

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TIME_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandledDialog {
    pub dialog_id: String,
    /// Dialog complexity; required for `omega3`.
    pub complexity: Option<f64>,
    pub csat: f64,
    /// Hours spent on the dialog.
    pub duration: f64,
}

/// Dialogs handled by one agent over `total_time` hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentLedger {
    pub agent_id: String,
    handled: Vec<HandledDialog>,
    total_time: f64,
}

impl AgentLedger {
    /// Validates ranges and that handled time fits within `total_time`
    /// (idle time is allowed).
    pub fn new(agent_id: impl Into<String>, handled: Vec<HandledDialog>, total_time: f64) -> Result<Self> {
        let agent_id = agent_id.into();
        if !(total_time > 0.0 && total_time.is_finite()) {
            return Err(Error::invalid(format!("agent {agent_id}: total time must be positive, got {total_time}")));
        }
        for h in &handled {
            if !(h.duration > 0.0 && h.duration.is_finite()) {
                return Err(Error::invalid(format!("dialog {}: duration must be positive, got {}", h.dialog_id, h.duration)));
            }
            if !(0.0..=1.0).contains(&h.csat) {
                return Err(Error::invalid(format!("dialog {}: csat must be in [0, 1], got {}", h.dialog_id, h.csat)));
            }
            if let Some(c) = h.complexity {
                if !(0.0..=1.0).contains(&c) {
                    return Err(Error::invalid(format!("dialog {}: complexity must be in [0, 1], got {c}", h.dialog_id)));
                }
            }
        }
        let used: f64 = handled.iter().map(|h| h.duration).sum();
        if used > total_time * (1.0 + TIME_SLACK) {
            return Err(Error::invalid(format!(
                "agent {agent_id}: handled time {used} exceeds total time {total_time}"
            )));
        }
        Ok(AgentLedger {
            agent_id,
            handled,
            total_time,
        })
    }

    pub fn handled(&self) -> &[HandledDialog] {
        &self.handled
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn handled_time(&self) -> f64 {
        self.handled.iter().map(|h| h.duration).sum()
    }
}

fn non_empty(ledger: &AgentLedger) -> Result<()> {
    if ledger.handled.is_empty() {
        Err(Error::invalid(format!("agent {} handled no dialogs", ledger.agent_id)))
    } else {
        Ok(())
    }
}

pub fn omega1(ledger: &AgentLedger) -> Result<f64> {
    non_empty(ledger)?;
    Ok(ledger.handled.iter().map(|h| h.csat).sum::<f64>() / ledger.handled.len() as f64)
}

pub fn omega2(ledger: &AgentLedger) -> Result<f64> {
    non_empty(ledger)?;
    Ok(ledger.handled.iter().map(|h| h.csat * h.duration).sum::<f64>() / ledger.total_time)
}

pub fn omega3(ledger: &AgentLedger) -> Result<f64> {
    non_empty(ledger)?;
    let mut sum = 0.0;
    for h in &ledger.handled {
        let c = h
            .complexity
            .ok_or_else(|| Error::invalid(format!("dialog {} has no complexity score", h.dialog_id)))?;
        sum += c * h.csat * h.duration;
    }
    Ok(sum / ledger.total_time)
}

#[derive(Debug, Deserialize)]
struct LedgerRow {
    agent_id: String,
    dialog_id: String,
    csat: f64,
    duration_hours: f64,
}

/// Reads `agent_id,dialog_id,csat,duration_hours` rows into one ledger per
/// agent, in first-appearance order.
///
/// Complexities are looked up by dialog id. An agent's total time comes
/// from `total_hours` when present, otherwise it is the sum of its durations.
pub fn read_ledgers<R: Read>(
    input: R,
    complexities: &HashMap<String, f64>,
    total_hours: &HashMap<String, f64>,
) -> Result<Vec<AgentLedger>> {
    let mut order: Vec<String> = Vec::new();
    let mut by_agent: HashMap<String, Vec<HandledDialog>> = HashMap::new();
    for row in csv::Reader::from_reader(input).deserialize() {
        let row: LedgerRow = row?;
        if !by_agent.contains_key(&row.agent_id) {
            order.push(row.agent_id.clone());
        }
        by_agent.entry(row.agent_id).or_default().push(HandledDialog {
            complexity: complexities.get(&row.dialog_id).copied(),
            dialog_id: row.dialog_id,
            csat: row.csat,
            duration: row.duration_hours,
        });
    }
    order
        .into_iter()
        .map(|agent| {
            let handled = by_agent.remove(&agent).unwrap_or_default();
            let total = total_hours
                .get(&agent)
                .copied()
                .unwrap_or_else(|| handled.iter().map(|h| h.duration).sum());
            AgentLedger::new(agent, handled, total)
        })
        .collect()
}
