//! HTTP scoring endpoint over a fixed set of domain lexicons.
//!
//! Routes (each also served under `/v1`):
//!
//! * `GET /domains`: registered domain names as a JSON array.
//! * `POST /score/{domain}`: one dialog in the corpus line schema; returns
//!   utterance, turn and dialog scores.
//! * `GET /healthz`: status and domain count.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

use crate::complexity::{score_dialog, ComplexityConfig, DaWeightTable, ScoredDialog};
use crate::corpus::{Dialog, DialogRecord, Role, RoleMode};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

pub const DEFAULT_BODY_LIMIT: usize = 1 << 20;

/// Scoring parameters for one domain.
#[derive(Debug, Clone)]
pub struct DomainEntry {
    pub lexicon: Lexicon,
    pub config: ComplexityConfig,
    /// Turn maximum of the corpus the lexicon was built from.
    pub max_turns: usize,
}

/// Domains keyed by name. Built once, then shared read-only.
#[derive(Debug, Clone, Default)]
pub struct DomainRegistry {
    domains: BTreeMap<String, DomainEntry>,
}

impl DomainRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a lexicon under its domain name. The lexicon must carry the
    /// turn maximum of its source corpus.
    pub fn insert(&mut self, lexicon: Lexicon, config: ComplexityConfig) -> Result<()> {
        config.validate()?;
        let max_turns = lexicon.max_turns.filter(|&m| m > 0).ok_or_else(|| {
            Error::invalid(format!("lexicon for domain {:?} has no turn maximum; rebuild it from a corpus", lexicon.domain))
        })?;
        if self.domains.contains_key(&lexicon.domain) {
            return Err(Error::invalid(format!("domain {:?} registered twice", lexicon.domain)));
        }
        self.domains.insert(
            lexicon.domain.clone(),
            DomainEntry {
                lexicon,
                config,
                max_turns,
            },
        );
        Ok(())
    }

    /// Loads every `*.json` lexicon in `dir`, in file-name order.
    pub fn load_dir(dir: &Path, config: &ComplexityConfig) -> Result<Self> {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut registry = Self::new();
        for p in paths {
            registry.insert(Lexicon::load(&p)?, config.clone())?;
        }
        Ok(registry)
    }

    pub fn get(&self, domain: &str) -> Option<&DomainEntry> {
        self.domains.get(domain)
    }

    pub fn names(&self) -> Vec<String> {
        self.domains.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }
}

fn default_bind() -> SocketAddr {
    SocketAddr::from(([127, 0, 0, 1], 8080))
}

fn default_body_limit() -> usize {
    DEFAULT_BODY_LIMIT
}

fn half() -> f64 {
    0.5
}

/// TOML service configuration.
///
/// ```toml
/// lexicon_dir = "lexicons"
/// bind = "0.0.0.0:8080"
/// body_limit_bytes = 1048576
/// w1 = 0.5
/// w2 = 0.5
/// da_weights = "da_weights.json"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    pub lexicon_dir: PathBuf,
    #[serde(default = "default_bind")]
    pub bind: SocketAddr,
    #[serde(default = "default_body_limit")]
    pub body_limit_bytes: usize,
    #[serde(default = "half")]
    pub w1: f64,
    #[serde(default = "half")]
    pub w2: f64,
    #[serde(default)]
    pub da_weights: Option<PathBuf>,
}

impl ServiceConfig {
    pub fn new(lexicon_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            lexicon_dir: lexicon_dir.into(),
            bind: default_bind(),
            body_limit_bytes: DEFAULT_BODY_LIMIT,
            w1: 0.5,
            w2: 0.5,
            da_weights: None,
        }
    }

    /// Parses TOML; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: ServiceConfig = toml::from_str(text).map_err(|e| Error::invalid(format!("service config: {e}")))?;
        if cfg.lexicon_dir.is_relative() {
            cfg.lexicon_dir = base.join(&cfg.lexicon_dir);
        }
        if let Some(p) = cfg.da_weights.as_mut().filter(|p| p.is_relative()) {
            *p = base.join(&*p);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn complexity_config(&self) -> Result<ComplexityConfig> {
        let mut cfg = ComplexityConfig::with_weights(self.w1, self.w2)?;
        if let Some(p) = &self.da_weights {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            cfg = cfg.with_da_table(DaWeightTable::from_json(&text)?);
        }
        Ok(cfg)
    }

    pub fn registry(&self) -> Result<DomainRegistry> {
        DomainRegistry::load_dir(&self.lexicon_dir, &self.complexity_config()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtteranceScore {
    pub index: usize,
    pub role: Role,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnScore {
    pub index: usize,
    pub score: f64,
    pub weighted: f64,
}

/// Response of `POST /score/{domain}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub domain: String,
    pub max_turns: usize,
    pub utterances: Vec<UtteranceScore>,
    pub turns: Vec<TurnScore>,
    pub dialog: ScoredDialog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub domains: usize,
}

fn reject(status: StatusCode, error: impl Into<String>, path: Option<String>) -> Response {
    (
        status,
        Json(ErrorBody {
            error: error.into(),
            path,
        }),
    )
        .into_response()
}

/// Scores one dialog against a registered domain. Pure: the same record
/// always yields the same response.
pub fn score_record(domain: &str, entry: &DomainEntry, record: DialogRecord) -> Result<ScoreResponse> {
    let mode = entry
        .lexicon
        .role_mode
        .unwrap_or_else(|| RoleMode::infer(std::slice::from_ref(&record)));
    let dialog = Dialog::from_record(record, mode)?;
    let scores = score_dialog(&dialog, &entry.lexicon, &entry.config, entry.max_turns)?;
    let utterances = dialog
        .utterances()
        .zip(&scores.utterances)
        .map(|(u, &score)| UtteranceScore {
            index: u.index,
            role: u.role,
            score,
        })
        .collect();
    let turns = scores
        .turns
        .iter()
        .zip(&scores.weighted_turns)
        .enumerate()
        .map(|(index, (&score, &weighted))| TurnScore { index, score, weighted })
        .collect();
    Ok(ScoreResponse {
        domain: domain.to_string(),
        max_turns: entry.max_turns,
        utterances,
        turns,
        dialog: scores.dialog,
    })
}

async fn domains(State(reg): State<Arc<DomainRegistry>>) -> Json<Vec<String>> {
    Json(reg.names())
}

async fn healthz(State(reg): State<Arc<DomainRegistry>>) -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        domains: reg.len(),
    })
}

async fn score(State(reg): State<Arc<DomainRegistry>>, UrlPath(domain): UrlPath<String>, body: Bytes) -> Response {
    let Some(entry) = reg.get(&domain) else {
        return reject(StatusCode::NOT_FOUND, format!("unknown domain {domain:?}"), None);
    };
    let de = &mut serde_json::Deserializer::from_slice(&body);
    let record: DialogRecord = match serde_path_to_error::deserialize(de) {
        Ok(r) => r,
        Err(e) => {
            let path = e.path().to_string();
            return reject(StatusCode::BAD_REQUEST, e.into_inner().to_string(), Some(path));
        }
    };
    match score_record(&domain, entry, record) {
        Ok(resp) => Json(resp).into_response(),
        Err(e) => reject(StatusCode::BAD_REQUEST, e.to_string(), None),
    }
}

/// Router over an immutable registry; bodies above `body_limit` bytes get 413.
pub fn router(registry: Arc<DomainRegistry>, body_limit: usize) -> Router {
    let routes = Router::new()
        .route("/domains", get(domains))
        .route("/score/:domain", post(score))
        .route("/healthz", get(healthz));
    Router::new()
        .nest("/v1", routes.clone())
        .merge(routes)
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(registry)
}

async fn shutdown_signal() {
    if let Err(e) = tokio::signal::ctrl_c().await {
        tracing::error!("cannot listen for shutdown signal: {e}");
        std::future::pending::<()>().await;
    }
    tracing::info!("shutting down");
}

/// Binds and serves until ctrl-c; in-flight requests are drained.
pub async fn serve(config: ServiceConfig) -> Result<()> {
    let registry = Arc::new(config.registry()?);
    tracing::info!(domains = registry.len(), bind = %config.bind, "registry loaded");
    let app = router(registry, config.body_limit_bytes);
    let listener = tokio::net::TcpListener::bind(config.bind)
        .await
        .map_err(|e| Error::io(config.bind.to_string(), e))?;
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown_signal())
        .await
        .map_err(|e| Error::io(config.bind.to_string(), e))
}
