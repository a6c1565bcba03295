//! Agent metrics under random and complexity-sorted allocation, plus a
//! hand-built ledger.
//!
//! cargo run --example agent_simulation -- [seed]

use dialog_complexity::evaluation::{
    omega1, omega2, omega3, simulate_allocation, AgentLedger, HandledDialog, PolicyKind, SimulationSpec,
};
use dialog_complexity::synth::{self, RandomCorpusParams};
use dialog_complexity::ComplexityConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse().expect("seed must be an integer")).unwrap_or(11);
    let corpus = synth::random_corpus(seed, &RandomCorpusParams { dialogs: 1000, ..RandomCorpusParams::default() });
    let spec = SimulationSpec::three_agents(0.85, seed);
    let table = simulate_allocation(&corpus, &synth::lexicon(), &ComplexityConfig::default(), &spec)?;

    for policy in [PolicyKind::Random, PolicyKind::AscendingComplexity] {
        println!("== {}", policy.as_str());
        for row in table.policy(policy) {
            println!(
                "  {:<8} dialogs={:<4} hours={:<5} omega1={:.4} omega2={:.4} omega3={:.4}",
                row.agent, row.dialogs, row.hours, row.omega1, row.omega2, row.omega3
            );
        }
    }

    let handled = vec![
        HandledDialog { dialog_id: "a".into(), complexity: Some(0.2), csat: 0.9, duration: 0.5 },
        HandledDialog { dialog_id: "b".into(), complexity: Some(0.7), csat: 0.6, duration: 1.5 },
        HandledDialog { dialog_id: "c".into(), complexity: Some(0.5), csat: 1.0, duration: 1.0 },
    ];
    let ledger = AgentLedger::new("solo", handled, 4.0)?;
    println!(
        "\nledger: omega1={:.4} omega2={:.4} omega3={:.4}",
        omega1(&ledger)?,
        omega2(&ledger)?,
        omega3(&ledger)?
    );
    Ok(())
}
