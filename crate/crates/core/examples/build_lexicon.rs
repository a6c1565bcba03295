//! Extract a domain lexicon from a JSONL corpus and show how words are classified.
//!
//! cargo run --example build_lexicon -- [corpus.jsonl] [delta]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dialog_complexity::corpus::{parse_corpus_with, ParseOptions};
use dialog_complexity::lexicon::{build_lexicon, default_common_words, default_stop_words, domain_specialization, TermMethod};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/tech_support.jsonl"));
    let delta: f64 = args.next().map(|d| d.parse().expect("delta must be a number")).unwrap_or(30.0);

    let file = File::open(&path)?;
    let (corpus, _) = parse_corpus_with(BufReader::new(file), &ParseOptions::default())?;

    for method in [TermMethod::Tf, TermMethod::TfIdf] {
        let lex = build_lexicon(&corpus, method, delta, default_stop_words(), default_common_words())?;
        let mut terms: Vec<&String> = lex.domain_terms().iter().collect();
        terms.sort();
        println!("{method:?}: {} domain terms, specialization {:.3}", terms.len(), domain_specialization(&lex)?);
        println!("  {}", terms.iter().take(15).map(|s| s.as_str()).collect::<Vec<_>>().join(" "));
    }

    let lex = build_lexicon(&corpus, TermMethod::TfIdf, delta, default_stop_words(), default_common_words())?;
    let sample = corpus.dialogs()[0].utterances().next().map(|u| u.text.clone()).unwrap_or_default();
    println!("\n{sample}");
    for tok in dialog_complexity::lexicon::tokenize(&sample) {
        println!("  {tok:<16} {:?}", lex.classify(&tok));
    }
    Ok(())
}
