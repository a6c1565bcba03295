//! Command-line front end. Every command reads its inputs, runs one library
//! pipeline and writes JSON and/or CSV artifacts into `--out`.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error (bad flags, missing
//! files, inconsistent parameters).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    group_mean_comparison, ks_two_sample, procedural_signatures, role_complexity, GroupComparison, ProceduralParams,
};
use crate::complexity::{score_corpus_against, ComplexityConfig, ComplexityReport, DaWeightTable, Level};
use crate::corpus::{descriptive_stats, parse_corpus_with, Corpus, ParseOptions, RoleMode};
use crate::error::{Error, Result};
use crate::evaluation::{omega1, omega2, omega3, read_ledgers, simulate_allocation, SimulationSpec};
use crate::lexicon::{build_lexicon, domain_specialization, load_wordlists, wordlists_from_dir, Lexicon, TermMethod};
use crate::service::{serve, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "dialog-complexity", version, about = "Dialog complexity scoring and corpus analytics")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract domain terms from a corpus and write `<domain>.json`.
    Lexicon(LexiconArgs),
    /// Score a corpus at utterance, turn and dialog level.
    Score(ScoreArgs),
    /// Corpus size statistics.
    Describe(DescribeArgs),
    /// Pairwise K-S and Welch comparison of score reports.
    Profile(ProfileArgs),
    /// Procedural patterns: trim, basket and cluster turn trajectories.
    Cluster(ClusterArgs),
    /// Mean utterance complexity per speaker role.
    Roles(RolesArgs),
    /// Allocation simulation with agent metrics per policy.
    Simulate(SimulateArgs),
    /// Agent metrics from a ledger of handled dialogs.
    Evaluate(EvaluateArgs),
    /// HTTP scoring service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoleModeArg {
    Auto,
    TwoRole,
    SingleRole,
}

impl RoleModeArg {
    fn mode(self) -> Option<RoleMode> {
        match self {
            RoleModeArg::Auto => None,
            RoleModeArg::TwoRole => Some(RoleMode::TwoRole),
            RoleModeArg::SingleRole => Some(RoleMode::SingleRole),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaxTurnsFrom {
    /// Longest dialog of the scored corpus.
    Corpus,
    /// Turn maximum stored in the lexicon.
    Lexicon,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// JSONL corpus, one dialog per line.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub role_mode: RoleModeArg,
    /// Abort on the first malformed line instead of skipping it.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Weight of the content component.
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub w1: f64,
    /// Weight of the structure component.
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub w2: f64,
    /// JSON map from dialog-act tag to weight; `_default` sets the fallback.
    #[arg(long)]
    pub da_weights: Option<PathBuf>,
    /// Give social dialog acts (greetings, thanks, goodbyes) weight 0.
    #[arg(long)]
    pub ignore_social: bool,
}

impl WeightArgs {
    pub fn config(&self) -> Result<ComplexityConfig> {
        let mut cfg = ComplexityConfig::with_weights(self.w1, self.w2)?;
        if let Some(p) = &self.da_weights {
            cfg = cfg.with_da_table(DaWeightTable::from_json(&read_text(p)?)?);
        }
        if self.ignore_social {
            cfg = cfg.with_social_acts_ignored();
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long, default_value = "tfidf", value_parser = parse_method)]
    pub method: TermMethod,
    /// Percentage of ranked candidate terms kept as domain terms, in (0, 100].
    #[arg(long, default_value_t = 50.0, value_parser = parse_delta)]
    pub delta: f64,
    /// Stop-word list; overrides the bundled or `DC_WORDLIST_DIR` list.
    #[arg(long)]
    pub stop_words: Option<PathBuf>,
    /// Common-English list; overrides the bundled or `DC_WORDLIST_DIR` list.
    #[arg(long)]
    pub common_words: Option<PathBuf>,
    /// Directory holding `stopwords_en.txt` and `common_en.txt`.
    #[arg(long, env = "DC_WORDLIST_DIR")]
    pub wordlist_dir: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Comma-separated subset of utterance,turn,weighted_turn,dialog.
    #[arg(long, default_value = "utterance,turn,weighted_turn,dialog")]
    pub levels: String,
    /// Source of the turn maximum for the structure component.
    #[arg(long, value_enum, default_value = "corpus")]
    pub max_turns_from: MaxTurnsFrom,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DescribeArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    /// Also report the domain specialization ratio of this lexicon.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Score report JSON written by `score`; repeat for every corpus.
    #[arg(long = "report", required = true, num_args = 1)]
    pub reports: Vec<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub baskets: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Turn-count percentiles kept, as LOW,HIGH.
    #[arg(long, default_value = "15,85", value_parser = parse_trim)]
    pub trim: (f64, f64),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RolesArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: CorpusArgs,
    #[arg(long)]
    pub lexicon: PathBuf,
    /// JSON simulation spec: agents (dialogs, hours), policies, csat, seed.
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Overrides the seed in the spec.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// CSV `agent_id,dialog_id,csat,duration_hours`.
    #[arg(long)]
    pub ledger: PathBuf,
    /// Score report JSON supplying dialog complexities.
    #[arg(long)]
    pub report: PathBuf,
    /// CSV `agent_id,hours` with total working time; defaults to handled time.
    #[arg(long)]
    pub hours: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// TOML service config; other flags are ignored when given.
    #[arg(long, conflicts_with = "lexicon_dir")]
    pub config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    pub lexicon_dir: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
    #[arg(long, default_value_t = crate::service::DEFAULT_BODY_LIMIT)]
    pub body_limit: usize,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub w1: f64,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    pub w2: f64,
    #[arg(long)]
    pub da_weights: Option<PathBuf>,
}

fn parse_delta(s: &str) -> std::result::Result<f64, String> {
    let d: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if d > 0.0 && d <= 100.0 {
        Ok(d)
    } else {
        Err(format!("delta must be in (0, 100], got {d}"))
    }
}

fn unit_interval(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("must be in [0, 1], got {x}"))
    }
}

fn parse_method(s: &str) -> std::result::Result<TermMethod, String> {
    s.parse::<TermMethod>().map_err(|e| e.to_string())
}

fn parse_trim(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected LOW,HIGH, got {s:?}"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("{lo:?} is not a number"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("{hi:?} is not a number"))?;
    if !(0.0..=100.0).contains(&lo) || !(0.0..=100.0).contains(&hi) || lo > hi {
        return Err(format!("need 0 <= LOW <= HIGH <= 100, got {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

pub fn load_corpus(args: &CorpusArgs) -> Result<Corpus> {
    let opts = ParseOptions {
        role_mode: args.role_mode.mode(),
        fail_fast: args.strict,
    };
    let (corpus, summary) = parse_corpus_with(open(&args.corpus)?, &opts)?;
    for s in &summary.skipped {
        tracing::warn!(line = s.line, "skipped: {}", s.message);
    }
    for id in &summary.dropped_empty {
        tracing::warn!(dialog = %id, "dropped dialog without utterances");
    }
    Ok(corpus)
}

/// Collects the files a command wrote.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value)?;
            w.write_all(b"\n").map_err(|e| Error::io(name, e))
        })
    }

    fn csv_rows<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        self.write(name, |w| {
            let mut c = csv::Writer::from_writer(w);
            for r in rows {
                c.serialize(r)?;
            }
            c.flush().map_err(|e| Error::io(name, e))
        })
    }
}

fn cmd_lexicon(a: &LexiconArgs) -> Result<Vec<PathBuf>> {
    let corpus = load_corpus(&a.input)?;
    let (mut stop, mut common) = wordlists_from_dir(a.wordlist_dir.as_deref())?;
    match (&a.stop_words, &a.common_words) {
        (Some(s), Some(c)) => (stop, common) = load_wordlists(s, c)?,
        (Some(s), None) => stop = crate::lexicon::read_wordlist(s)?,
        (None, Some(c)) => common = crate::lexicon::read_wordlist(c)?,
        (None, None) => {}
    }
    let lexicon = build_lexicon(&corpus, a.method, a.delta, stop, common)?;
    let mut out = Outputs::new(&a.out)?;
    let name = format!("{}.json", lexicon.domain);
    out.write(&name, |w| w.write_all((lexicon.to_json()? + "\n").as_bytes()).map_err(|e| Error::io(&name, e)))?;
    Ok(out.written)
}

fn load_lexicon(path: &Path) -> Result<Lexicon> {
    Lexicon::load(path)
}

/// Scores a corpus exactly as the `score` command does.
pub fn score_with(corpus: &Corpus, lexicon: &Lexicon, config: &ComplexityConfig, levels: &[Level], from: MaxTurnsFrom) -> Result<ComplexityReport> {
    let max_turns = match from {
        MaxTurnsFrom::Corpus => corpus.max_turns(),
        MaxTurnsFrom::Lexicon => lexicon
            .max_turns
            .ok_or_else(|| Error::invalid("lexicon has no stored turn maximum; use --max-turns-from corpus"))?,
    };
    score_corpus_against(corpus, lexicon, config, levels, max_turns)
}

fn cmd_score(a: &ScoreArgs) -> Result<Vec<PathBuf>> {
    let levels = Level::parse_set(&a.levels)?;
    let config = a.weights.config()?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let corpus = load_corpus(&a.input)?;
    let report = score_with(&corpus, &lexicon, &config, &levels, a.max_turns_from)?;
    let mut out = Outputs::new(&a.output.out)?;
    let stem = corpus.domain().to_string();
    if a.output.format.json() {
        out.json(&format!("{stem}.report.json"), &report)?;
    }
    if a.output.format.csv() {
        out.write(&format!("{stem}.scores.csv"), |w| report.write_csv(w))?;
    }
    Ok(out.written)
}

#[derive(Debug, Serialize)]
struct Description {
    domain: String,
    role_mode: RoleMode,
    max_turns: usize,
    #[serde(flatten)]
    stats: crate::corpus::CorpusStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain_specialization: Option<f64>,
}

fn cmd_describe(a: &DescribeArgs) -> Result<Vec<PathBuf>> {
    let corpus = load_corpus(&a.input)?;
    let spec = a.lexicon.as_deref().map(load_lexicon).transpose()?.map(|l| domain_specialization(&l)).transpose()?;
    let d = Description {
        domain: corpus.domain().to_string(),
        role_mode: corpus.role_mode(),
        max_turns: corpus.max_turns(),
        stats: descriptive_stats(&corpus),
        domain_specialization: spec,
    };
    let mut out = Outputs::new(&a.output.out)?;
    if a.output.format.json() {
        out.json(&format!("{}.describe.json", d.domain), &d)?;
    }
    if a.output.format.csv() {
        out.csv_rows(&format!("{}.describe.csv", d.domain), &[&d])?;
    }
    Ok(out.written)
}

/// One pairwise comparison of two reports at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub a: String,
    pub b: String,
    pub level: Level,
    pub n1: usize,
    pub n2: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub ks_d: f64,
    pub ks_p: f64,
    pub welch_t: Option<f64>,
    pub welch_p: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Profile {
    rows: Vec<ProfileRow>,
    /// Welch tests across all reports, per level present in every report.
    groups: Vec<(Level, GroupComparison)>,
}

fn report_label(path: &Path, report: &ComplexityReport, seen: &[String]) -> String {
    let base = report.domain.clone();
    if !seen.contains(&base) {
        return base;
    }
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or(base)
}

/// Pairwise K-S and Welch comparisons between reports, for every level both
/// reports contain.
pub fn profile_reports(reports: &[(String, ComplexityReport)]) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::new();
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            let (la, ra) = &reports[i];
            let (lb, rb) = &reports[j];
            for &level in Level::ALL.iter().filter(|l| ra.levels.contains(l) && rb.levels.contains(l)) {
                let (xs, ys) = (ra.scores(level), rb.scores(level));
                let ks = ks_two_sample(&xs, &ys)?;
                let welch = crate::analysis::welch_t_test(&xs, &ys).ok();
                rows.push(ProfileRow {
                    a: la.clone(),
                    b: lb.clone(),
                    level,
                    n1: ks.n1,
                    n2: ks.n2,
                    mean_a: crate::analysis::stats::mean(&xs),
                    mean_b: crate::analysis::stats::mean(&ys),
                    ks_d: ks.statistic,
                    ks_p: ks.p_value,
                    welch_t: welch.map(|t| t.t),
                    welch_p: welch.map(|t| t.p_value),
                });
            }
        }
    }
    Ok(rows)
}

fn cmd_profile(a: &ProfileArgs) -> Result<Vec<PathBuf>> {
    let mut reports: Vec<(String, ComplexityReport)> = Vec::new();
    for p in &a.reports {
        let r = ComplexityReport::from_json(&read_text(p)?)?;
        let seen: Vec<String> = reports.iter().map(|(l, _)| l.clone()).collect();
        reports.push((report_label(p, &r, &seen), r));
    }
    if reports.len() < 2 {
        // a single report is compared with itself
        reports.push(reports[0].clone());
    }
    let rows = profile_reports(&reports)?;
    let mut groups = Vec::new();
    for level in Level::ALL {
        if reports.iter().all(|(_, r)| r.levels.contains(&level)) {
            let samples: Vec<(String, Vec<f64>)> = reports.iter().map(|(l, r)| (l.clone(), r.scores(level))).collect();
            if let Ok(g) = group_mean_comparison(&samples) {
                groups.push((level, g));
            }
        }
    }
    let mut out = Outputs::new(&a.output.out)?;
    if a.output.format.json() {
        out.json("profile.json", &Profile { rows: rows.clone(), groups })?;
    }
    if a.output.format.csv() {
        out.csv_rows("profile.csv", &rows)?;
    }
    Ok(out.written)
}

fn cmd_cluster(a: &ClusterArgs) -> Result<Vec<PathBuf>> {
    let config = a.weights.config()?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let corpus = load_corpus(&a.input)?;
    let params = ProceduralParams {
        n_baskets: a.baskets as usize,
        k: a.k as usize,
        trim_low: a.trim.0,
        trim_high: a.trim.1,
        seed: a.seed,
        ..ProceduralParams::default()
    };
    if params.k > corpus.len() {
        return Err(Error::invalid(format!("k = {} exceeds the {} dialogs in the corpus", params.k, corpus.len())));
    }
    let sig = procedural_signatures(&corpus, &lexicon, &config, &params)?;
    let mut out = Outputs::new(&a.output.out)?;
    let stem = corpus.domain().to_string();
    if a.output.format.json() {
        out.json(&format!("{stem}.signature.json"), &sig)?;
    }
    if a.output.format.csv() {
        out.write(&format!("{stem}.centroids.csv"), |w| sig.write_centroid_csv(w))?;
    }
    Ok(out.written)
}

#[derive(Debug, Serialize)]
struct RoleRow {
    role: crate::corpus::Role,
    utterances: usize,
    mean_complexity: f64,
}

fn cmd_roles(a: &RolesArgs) -> Result<Vec<PathBuf>> {
    let config = a.weights.config()?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let corpus = load_corpus(&a.input)?;
    let table = role_complexity(&corpus, &lexicon, &config)?;
    let mut out = Outputs::new(&a.output.out)?;
    let stem = corpus.domain().to_string();
    if a.output.format.json() {
        out.json(&format!("{stem}.roles.json"), &table)?;
    }
    if a.output.format.csv() {
        let rows: Vec<RoleRow> = table
            .roles
            .iter()
            .map(|(&role, s)| RoleRow {
                role,
                utterances: s.utterances,
                mean_complexity: s.mean_complexity,
            })
            .collect();
        out.csv_rows(&format!("{stem}.roles.csv"), &rows)?;
    }
    Ok(out.written)
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Vec<PathBuf>> {
    let config = a.weights.config()?;
    let lexicon = load_lexicon(&a.lexicon)?;
    let mut spec: SimulationSpec = serde_json::from_str(&read_text(&a.spec)?)?;
    if let Some(seed) = a.seed {
        spec.seed = seed;
    }
    let corpus = load_corpus(&a.input)?;
    let table = simulate_allocation(&corpus, &lexicon, &config, &spec)?;
    let mut out = Outputs::new(&a.output.out)?;
    if a.output.format.json() {
        out.json("simulation.json", &table)?;
    }
    if a.output.format.csv() {
        out.write("simulation.csv", |w| table.write_csv(w))?;
    }
    Ok(out.written)
}

#[derive(Debug, Serialize)]
struct AgentRow {
    agent: String,
    dialogs: usize,
    handled_hours: f64,
    total_hours: f64,
    omega1: f64,
    omega2: f64,
    omega3: f64,
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<Vec<PathBuf>> {
    let report = ComplexityReport::from_json(&read_text(&a.report)?)?;
    if !report.levels.contains(&Level::Dialog) {
        return Err(Error::invalid("report has no dialog-level scores"));
    }
    let complexities: HashMap<String, f64> = report.dialogs.iter().map(|d| (d.dialog_id.clone(), d.score)).collect();
    let mut hours = HashMap::new();
    if let Some(p) = &a.hours {
        #[derive(serde::Deserialize)]
        struct Row {
            agent_id: String,
            hours: f64,
        }
        for row in csv::Reader::from_reader(open(p)?).deserialize() {
            let row: Row = row?;
            hours.insert(row.agent_id, row.hours);
        }
    }
    let ledgers = read_ledgers(open(&a.ledger)?, &complexities, &hours)?;
    let rows = ledgers
        .iter()
        .map(|l| {
            Ok(AgentRow {
                agent: l.agent_id.clone(),
                dialogs: l.handled().len(),
                handled_hours: l.handled_time(),
                total_hours: l.total_time(),
                omega1: omega1(l)?,
                omega2: omega2(l)?,
                omega3: omega3(l)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Outputs::new(&a.output.out)?;
    if a.output.format.json() {
        out.json("evaluation.json", &rows)?;
    }
    if a.output.format.csv() {
        out.csv_rows("evaluation.csv", &rows)?;
    }
    Ok(out.written)
}

fn cmd_serve(a: &ServeArgs) -> Result<Vec<PathBuf>> {
    let config = match (&a.config, &a.lexicon_dir) {
        (Some(p), _) => ServiceConfig::load(p)?,
        (None, Some(dir)) => ServiceConfig {
            lexicon_dir: dir.clone(),
            bind: a.bind,
            body_limit_bytes: a.body_limit,
            w1: a.w1,
            w2: a.w2,
            da_weights: a.da_weights.clone(),
        },
        (None, None) => return Err(Error::invalid("either --config or --lexicon-dir is required")),
    };
    let rt = tokio::runtime::Runtime::new().map_err(|e| Error::io("<runtime>", e))?;
    rt.block_on(serve(config))?;
    Ok(Vec::new())
}

/// Runs a parsed command and returns the files it wrote.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::invalid("--threads must be at least 1"));
        }
        // fails only if a pool already exists, e.g. a second run in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Lexicon(a) => cmd_lexicon(a),
        Command::Score(a) => cmd_score(a),
        Command::Describe(a) => cmd_describe(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Cluster(a) => cmd_cluster(a),
        Command::Roles(a) => cmd_roles(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Serve(a) => cmd_serve(a),
    }
}

/// Exit code for a failed command: 2 for usage problems, 1 for bad data.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) => 2,
        Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 2,
        _ => 1,
    }
}

pub fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("warn")),
        )
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn value_parsers() {
        assert!(parse_delta("0").is_err());
        assert!(parse_delta("100").is_ok());
        assert!(parse_delta("100.5").is_err());
        assert_eq!(parse_trim("15, 85").unwrap(), (15.0, 85.0));
        assert!(parse_trim("90,10").is_err());
        assert!(unit_interval("1.2").is_err());
    }

    #[test]
    fn delta_out_of_range_is_usage_error() {
        let err = Cli::try_parse_from(["dc", "lexicon", "--corpus", "x.jsonl", "--delta", "0"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
