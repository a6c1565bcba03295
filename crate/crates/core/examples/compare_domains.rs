//! Compare complexity distributions of several domains with K-S and Welch tests.
//!
//! cargo run --example compare_domains

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dialog_complexity::analysis::{group_mean_comparison, ks_two_sample};
use dialog_complexity::corpus::{parse_corpus_with, ParseOptions};
use dialog_complexity::lexicon::{build_lexicon, default_common_words, default_stop_words, TermMethod};
use dialog_complexity::{score_corpus, ComplexityConfig, Level};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let config = ComplexityConfig::default();
    let mut reports = Vec::new();
    for name in ["tech_support", "restaurant", "insurance_qa", "hr_portal"] {
        let path = fixtures.join(format!("{name}.jsonl"));
        let (corpus, _) = parse_corpus_with(BufReader::new(File::open(&path)?), &ParseOptions::default())?;
        let lex = build_lexicon(&corpus, TermMethod::TfIdf, 30.0, default_stop_words(), default_common_words())?;
        reports.push(score_corpus(&corpus, &lex, &config, &Level::ALL)?);
    }

    for level in [Level::Utterance, Level::Turn, Level::Dialog] {
        println!("== {level}");
        let groups: Vec<(String, Vec<f64>)> = reports.iter().map(|r| (r.domain.clone(), r.scores(level))).collect();
        let cmp = group_mean_comparison(&groups)?;
        for g in &cmp.groups {
            println!("  {:<14} n={:<5} mean={:.4}", g.label, g.n, g.mean);
        }
        for p in &cmp.pairs {
            let a = &groups.iter().find(|g| g.0 == p.a).unwrap().1;
            let b = &groups.iter().find(|g| g.0 == p.b).unwrap().1;
            let ks = ks_two_sample(a, b)?;
            println!(
                "  {:<14} vs {:<14} welch t={:>7.3} p={:.2e}   ks D={:.3} p={:.2e}",
                p.a, p.b, p.test.t, p.test.p_value, ks.statistic, ks.p_value
            );
        }
    }
    Ok(())
}
