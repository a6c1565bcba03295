//! Per-role complexity for two-role corpora.
//!
//! cargo run --example role_complexity

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dialog_complexity::analysis::role_complexity;
use dialog_complexity::corpus::{parse_corpus_with, ParseOptions};
use dialog_complexity::lexicon::{build_lexicon, default_common_words, default_stop_words, TermMethod};
use dialog_complexity::ComplexityConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["tech_support", "restaurant", "insurance_qa", "hr_portal"] {
        let path = fixtures.join(format!("{name}.jsonl"));
        let (corpus, _) = parse_corpus_with(BufReader::new(File::open(&path)?), &ParseOptions::default())?;
        let lex = build_lexicon(&corpus, TermMethod::TfIdf, 30.0, default_stop_words(), default_common_words())?;
        match role_complexity(&corpus, &lex, &ComplexityConfig::default()) {
            Ok(table) => {
                print!("{name:<14}");
                for (role, stats) in &table.roles {
                    print!("  {}={:.4} (n={})", role.as_str(), stats.mean_complexity, stats.utterances);
                }
                println!();
            }
            Err(e) => println!("{name:<14}  skipped: {e}"),
        }
    }
    Ok(())
}
