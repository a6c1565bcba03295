//! Score a corpus at every level and print per-level summaries.
//!
//! cargo run --example score_corpus -- [corpus.jsonl] [da_weights.json]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dialog_complexity::complexity::DaWeightTable;
use dialog_complexity::corpus::{parse_corpus_with, ParseOptions};
use dialog_complexity::lexicon::{build_lexicon, default_common_words, default_stop_words, TermMethod};
use dialog_complexity::{score_corpus, ComplexityConfig, Level};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| fixtures.join("restaurant.jsonl"));
    let weights = args.next().map(PathBuf::from).unwrap_or_else(|| fixtures.join("da_weights.json"));

    let file = File::open(&path)?;
    let (corpus, summary) = parse_corpus_with(BufReader::new(file), &ParseOptions::default())?;
    println!("{}: {} dialogs, {} utterances, {} skipped lines", corpus.domain(), corpus.len(), corpus.utterance_count(), summary.warning_count());

    let lex = build_lexicon(&corpus, TermMethod::TfIdf, 30.0, default_stop_words(), default_common_words())?;
    let table = std::fs::read_to_string(&weights)?;
    let config = ComplexityConfig::with_weights(0.7, 0.3)?.with_da_table(DaWeightTable::from_json(&table)?);

    let report = score_corpus(&corpus, &lex, &config, &Level::ALL)?;
    println!("max turns {}", report.max_turns);
    for (level, s) in &report.summary {
        println!("{:<14} n={:<5} mean={:.4} var={:.4} min={:.4} max={:.4}", level.as_str(), s.count, s.mean, s.variance, s.min, s.max);
    }

    let mut hardest: Vec<_> = report.dialogs.iter().collect();
    hardest.sort_by(|a, b| b.score.total_cmp(&a.score));
    println!("\nmost complex dialogs");
    for d in hardest.iter().take(5) {
        println!("  {:<12} score={:.4} content={:.4} structure={:.4} turns={}", d.dialog_id, d.score, d.content, d.structure, d.turns);
    }
    Ok(())
}
