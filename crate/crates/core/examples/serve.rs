//! Build lexicons for the bundled fixtures and serve them over HTTP.
//!
//! cargo run --example serve -- [bind-addr]
//!
//! curl localhost:8080/v1/domains
//! curl -XPOST localhost:8080/v1/score/tech_support -H 'content-type: application/json' \
//!   -d '{"id":"x","domain":"tech_support","utterances":[{"speaker":"c","role":"customer","text":"my router drops wifi"}]}'

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use dialog_complexity::corpus::{parse_corpus_with, ParseOptions};
use dialog_complexity::lexicon::{build_lexicon, default_common_words, default_stop_words, TermMethod};
use dialog_complexity::service::ServiceConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    tracing_subscriber::fmt().with_env_filter("info").init();
    let bind = std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:8080".into());
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dir = tempfile::tempdir()?;

    for name in ["tech_support", "restaurant", "insurance_qa", "hr_portal"] {
        let path = fixtures.join(format!("{name}.jsonl"));
        let (corpus, _) = parse_corpus_with(BufReader::new(File::open(&path)?), &ParseOptions::default())?;
        let mut lex = build_lexicon(&corpus, TermMethod::TfIdf, 30.0, default_stop_words(), default_common_words())?;
        lex.max_turns = Some(corpus.max_turns());
        lex.role_mode = Some(corpus.role_mode());
        lex.save(&dir.path().join(format!("{name}.json")))?;
    }

    let mut config = ServiceConfig::new(dir.path());
    config.bind = bind.parse().expect("bind must be host:port");
    config.da_weights = Some(fixtures.join("da_weights.json"));
    tokio::runtime::Runtime::new()?
        .block_on(dialog_complexity::service::serve(config))?;
    Ok(())
}
