//! Recover complexity trajectories planted in a synthetic corpus.
//!
//! Each dialog follows one of six five-point templates plus noise; trimming,
//! basketing and k-means should return centroids close to the templates.
//!
//! cargo run --example procedural_patterns -- [seed]

use dialog_complexity::analysis::{procedural_signatures, ProceduralParams};
use dialog_complexity::synth;
use dialog_complexity::ComplexityConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse().expect("seed must be an integer")).unwrap_or(7);
    let corpus = synth::planted_basket_corpus(seed, 200, 0.03);
    let params = ProceduralParams { seed, trim_low: 0.0, trim_high: 100.0, ..ProceduralParams::default() };
    let sig = procedural_signatures(&corpus, &synth::lexicon(), &ComplexityConfig::default(), &params)?;

    println!("{} dialogs, inertia {:.3}, spread {:.3}", sig.assignments.len(), sig.inertia, sig.spread());
    for (i, c) in sig.centroids.iter().enumerate() {
        let size = sig.assignments.iter().filter(|a| a.cluster == i).count();
        let nearest = synth::TEMPLATES
            .iter()
            .map(|t| t.iter().zip(c).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        let pts: Vec<String> = c.iter().map(|v| format!("{v:.3}")).collect();
        println!("  cluster {i}: [{}]  n={size}  max dev from nearest template {nearest:.4}", pts.join(", "));
    }
    sig.write_centroid_csv(std::io::stdout())?;
    Ok(())
}
