use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use dialog_complexity::complexity::ComplexityConfig;
use dialog_complexity::service::{router, DomainRegistry, ErrorBody, Health, ScoreResponse};
use dialog_complexity::synth;

fn app(limit: usize) -> Router {
    let mut reg = DomainRegistry::new();
    for (name, terms) in [("tech", vec!["sudo", "kernel"]), ("food", vec!["sushi"]), ("hr", vec!["payroll"]), ("ins", vec!["deductible"])] {
        let mut lex = dialog_complexity::lexicon::Lexicon::new(name, 50.0, synth::STOP, synth::COMMON, terms).unwrap();
        lex.max_turns = Some(4);
        reg.insert(lex, ComplexityConfig::default()).unwrap();
    }
    router(Arc::new(reg), limit)
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

fn post(path: &str, body: impl Into<Body>) -> Request<Body> {
    Request::post(path).header("content-type", "application/json").body(body.into()).unwrap()
}

fn dialog(texts: &[(&str, &str)]) -> Value {
    json!({
        "id": "d1",
        "domain": "tech",
        "utterances": texts.iter().map(|(role, text)| json!({"speaker": role, "role": role, "text": text})).collect::<Vec<_>>()
    })
}

#[tokio::test]
async fn lists_domains() {
    let app = app(1 << 20);
    for path in ["/domains", "/v1/domains"] {
        let (status, body) = send(&app, Request::get(path).body(Body::empty()).unwrap()).await;
        assert_eq!(status, StatusCode::OK);
        let names: Vec<String> = serde_json::from_slice(&body).unwrap();
        assert_eq!(names, ["food", "hr", "ins", "tech"]);
    }
}

#[tokio::test]
async fn empty_registry_lists_nothing() {
    let app = router(Arc::new(DomainRegistry::new()), 1024);
    let (status, body) = send(&app, Request::get("/v1/domains").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"[]");
}

#[tokio::test]
async fn health_reports_domain_count() {
    let app = app(1 << 20);
    let start = Instant::now();
    let (status, body) = send(&app, Request::get("/healthz").body(Body::empty()).unwrap()).await;
    let elapsed = start.elapsed();
    assert_eq!(status, StatusCode::OK);
    let h: Health = serde_json::from_slice(&body).unwrap();
    assert_eq!(h.domains, 4);
    // soft bound; the handler does no I/O
    assert!(elapsed < Duration::from_millis(100), "{elapsed:?}");
}

#[tokio::test]
async fn scores_all_domain_utterance() {
    let app = app(1 << 20);
    let body = dialog(&[("customer", "sudo kernel"), ("agent", "the kernel")]);
    let (status, bytes) = send(&app, post("/v1/score/tech", body.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let r: ScoreResponse = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(r.utterances[0].score, 1.0);
    assert_eq!(r.utterances[1].score, 0.5);
    assert_eq!(r.turns.len(), 1);
    assert_eq!(r.dialog.structure, 0.25);
    assert_eq!(r.max_turns, 4);
}

#[tokio::test]
async fn long_dialog_is_clamped() {
    let app = app(1 << 20);
    let turns: Vec<(&str, &str)> = (0..6).flat_map(|_| [("customer", "sudo"), ("agent", "ok")]).collect();
    let (status, bytes) = send(&app, post("/score/tech", dialog(&turns).to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let r: ScoreResponse = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(r.dialog.structure, 1.0);
    assert!(r.dialog.clamped);
}

#[tokio::test]
async fn unknown_domain_is_404() {
    let app = app(1 << 20);
    let (status, _) = send(&app, post("/v1/score/foo", dialog(&[("customer", "hi")]).to_string())).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn invalid_body_names_the_field() {
    let app = app(1 << 20);
    let body = json!({"id": "d", "domain": "tech", "utterances": [{"speaker": "c", "role": "customer", "text": 5}]});
    let (status, bytes) = send(&app, post("/v1/score/tech", body.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let err: ErrorBody = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(err.path.as_deref(), Some("utterances[0].text"));

    let (status, _) = send(&app, post("/v1/score/tech", "{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let empty = json!({"id": "d", "domain": "tech", "utterances": []});
    let (status, _) = send(&app, post("/v1/score/tech", empty.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let bad_role = json!({"id": "d", "domain": "tech", "utterances": [{"speaker": "c", "role": "boss", "text": "x"}]});
    let (status, _) = send(&app, post("/v1/score/tech", bad_role.to_string())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn oversize_body_is_413() {
    let app = app(256);
    let long = "sudo ".repeat(200);
    let (status, _) = send(&app, post("/v1/score/tech", dialog(&[("customer", &long)]).to_string())).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn concurrent_identical_requests_agree() {
    let app = app(1 << 20);
    let body = dialog(&[("customer", "sudo apt kernel"), ("agent", "open the kernel log"), ("customer", "done")]).to_string();
    let tasks: Vec<_> = (0..32)
        .map(|_| {
            let app = app.clone();
            let body = body.clone();
            tokio::spawn(async move { send(&app, post("/v1/score/tech", body)).await })
        })
        .collect();
    let mut results = Vec::new();
    for t in tasks {
        results.push(t.await.unwrap());
    }
    assert!(results.iter().all(|r| r == &results[0]));
    assert_eq!(results[0].0, StatusCode::OK);
}

#[tokio::test]
async fn loads_registry_from_directory() {
    let dir = tempfile::tempdir().unwrap();
    let mut lex = synth::lexicon();
    lex.max_turns = Some(7);
    lex.save(&dir.path().join("synth.json")).unwrap();
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let cfg_path = dir.path().join("service.toml");
    std::fs::write(&cfg_path, "lexicon_dir = \".\"\nbind = \"127.0.0.1:0\"\nbody_limit_bytes = 4096\n").unwrap();
    let cfg = dialog_complexity::service::ServiceConfig::load(&cfg_path).unwrap();
    assert_eq!(cfg.body_limit_bytes, 4096);
    let reg = cfg.registry().unwrap();
    assert_eq!(reg.names(), ["synth"]);
    assert_eq!(reg.get("synth").unwrap().max_turns, 7);
}
